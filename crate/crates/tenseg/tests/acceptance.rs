use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use nalgebra::{dmatrix, DMatrix, DVector};
use rand::Rng;

use tenseg::classify::{classify, classify_in, compose_covering_stress, minimal_analysis};
use tenseg::euclidean::{euclidean_generators, euclidean_rank};
use tenseg::families::{self, random};
use tenseg::linalg::least_squares;
use tenseg::rigidity::{build_operator, load, variation_space};
use tenseg::stress::{self, Positivity, StressVector};
use tenseg::{corpus, EdgeRef, Mode, RowKind, Tensegrity, Tol, VariationSpace};

fn full(t: &Tensegrity) -> VariationSpace {
    VariationSpace::full(t.dim() * t.vertex_count())
}

fn max_abs(v: &DVector<f64>) -> f64 {
    v.amax()
}

fn crossed_square() {
    let t = families::crossed_square();
    let y = build_operator(&t);
    let tol = Tol::default();
    let x = full(&t);
    assert_eq!(stress::stress_space(&y, &x, &tol).unwrap().ncols(), 1);
    let ones = DVector::from_element(y.row_count(), 1.0);
    let r = max_abs(&(y.matrix.transpose() * &ones));
    assert!(r <= 1e-12, "residual {r:e}");
    let c = classify(&t, Mode::Full, &tol).unwrap();
    assert!(c.bar_equivalent && c.infinitesimally_rigid);
}

fn crossed_square_with_bar() {
    let t = families::crossed_square_with_bar();
    let y = build_operator(&t);
    let tol = Tol::default();
    let basis = stress::stress_space(&y, &full(&t), &tol).unwrap();
    assert_eq!(basis.ncols(), 2);
    // Reference row order: cable 1-2, strut 1-3, cable 1-4, cable 2-3, bar
    // 2-4 as strut, cable 3-4, bar 2-4 as cable.
    let reference = [("c", 0, 1), ("s", 0, 2), ("c", 0, 3), ("c", 1, 2), ("bs", 1, 3), ("c", 2, 3), ("bc", 1, 3)];
    let order: Vec<usize> = reference
        .iter()
        .map(|&(kind, a, b)| {
            y.rows
                .iter()
                .position(|row| {
                    let (p, q) = row.endpoints;
                    let same = (p.min(q), p.max(q)) == (a, b);
                    let bar = matches!(row.edge, EdgeRef::Bar(_));
                    same && match kind {
                        "c" => row.kind == RowKind::Cable && !bar,
                        "s" => row.kind == RowKind::Strut && !bar,
                        "bs" => row.kind == RowKind::Strut && bar,
                        _ => row.kind == RowKind::Cable && bar,
                    }
                })
                .expect("row present")
        })
        .collect();
    // Stresses a·(1,1,1,1,0,1,−1) + b·(0,0,0,0,1,0,1).
    let family = dmatrix![
        1.0, 0.0;
        1.0, 0.0;
        1.0, 0.0;
        1.0, 0.0;
        0.0, 1.0;
        1.0, 0.0;
        -1.0, 1.0
    ];
    for col in basis.column_iter() {
        let v = DVector::from_iterator(7, order.iter().map(|&r| col[r]));
        let coef = least_squares(&family, &v, 1e-12);
        let r = (&family * coef - &v).norm();
        assert!(r <= 1e-10, "fit residual {r:e}");
    }
    let mut subsets: Vec<Vec<usize>> = minimal_analysis(&t, Mode::Full, &tol)
        .unwrap()
        .into_iter()
        .map(|m| {
            let mut rows: Vec<usize> = m.rows.iter().map(|r| order.iter().position(|o| o == r).unwrap()).collect();
            rows.sort();
            rows
        })
        .collect();
    subsets.sort();
    // The bar alone, and the crossed square with the bar's strut part.
    assert_eq!(subsets, vec![vec![0, 1, 2, 3, 4, 5], vec![4, 6]]);
}

fn octahedron() {
    let t = families::octahedron();
    let y = build_operator(&t);
    let s = stress::find_strictly_positive_stress(&y, &full(&t), &Tol::default())
        .unwrap()
        .expect("strictly positive stress");
    assert_eq!(s.positivity, Positivity::StrictlyPositive);
    let ratio = families::cable_to_strut_ratio(&t, &s.weights);
    assert!((ratio - 2f64.sqrt() / 2.0).abs() <= 1e-9, "ratio {ratio}");
}

fn on_a_circle() {
    for n in [6usize, 8, 12] {
        for k in 1..n / 2 {
            let h = 2.0 * PI * k as f64 / n as f64;
            let t = families::on_a_circle(n, k).unwrap();
            let y = build_operator(&t);
            let s = stress::find_strictly_positive_stress(&y, &full(&t), &Tol::default())
                .unwrap()
                .unwrap_or_else(|| panic!("no stress for N={n}, k={k}"));
            let ratio = families::cable_to_strut_ratio(&t, &s.weights);
            let expected = 1.0 / ((PI - h) / 2.0).cos();
            assert!((ratio - expected).abs() <= 1e-9, "N={n} k={k}: {ratio} vs {expected}");
        }
    }
}

/// Weights keyed by endpoint coordinates, laid out on the operator rows.
fn weights_by_position(t: &Tensegrity, labelled: &[([f64; 2], [f64; 2], f64)]) -> DVector<f64> {
    let y = build_operator(t);
    let near = |p: &[f64], q: [f64; 2]| (p[0] - q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12;
    DVector::from_iterator(
        y.row_count(),
        y.rows.iter().map(|row| {
            let (a, b) = (t.position(row.endpoints.0), t.position(row.endpoints.1));
            labelled
                .iter()
                .find(|(p, q, _)| (near(a, *p) && near(b, *q)) || (near(a, *q) && near(b, *p)))
                .map(|l| l.2)
                .expect("every edge labelled")
        }),
    )
}

fn hexagons() {
    let (t, _) = families::nonreg_hex();
    let pts = [[2.0, 0.0], [1.0, 1.0], [-1.0, 1.0], [-2.0, 0.0], [-1.0, -1.0], [1.0, -1.0]];
    let mut labelled: Vec<_> = (0..6).map(|i| (pts[i], pts[(i + 1) % 6], 2.0)).collect();
    labelled.extend((0..3).map(|i| (pts[i], pts[i + 3], 1.0)));
    let w = weights_by_position(&t, &labelled);
    let r = max_abs(&(build_operator(&t).matrix.transpose() * w));
    assert!(r <= 1e-9, "first hexagon residual {r:e}");

    let (t, _) = families::another_nonreg_hex();
    let labelled = [
        ([0.6, 0.6], [-0.6, -0.6], 1.0),
        ([1.0, 0.0], [-1.0, 0.0], 3.0),
        ([0.0, 1.0], [0.0, -1.0], 3.0),
        ([0.6, 0.6], [1.0, 0.0], 6.0),
        ([1.0, 0.0], [0.0, -1.0], 3.6),
        ([0.0, -1.0], [-0.6, -0.6], 6.0),
        ([-0.6, -0.6], [-1.0, 0.0], 6.0),
        ([-1.0, 0.0], [0.0, 1.0], 3.6),
        ([0.0, 1.0], [0.6, 0.6], 6.0),
    ];
    let w = weights_by_position(&t, &labelled);
    let r = max_abs(&(build_operator(&t).matrix.transpose() * w));
    assert!(r <= 1e-9, "second hexagon residual {r:e}");
}

fn quadrilaterals() {
    let mut rng = random::rng(2024);
    let tol = Tol::default();
    for i in 0..100 {
        let q = random::convex_quad(&mut rng);
        let t = families::crossed_quad(&q).unwrap();
        let y = build_operator(&t);
        let lp = stress::find_strictly_positive_stress(&y, &full(&t), &tol).unwrap().expect("LP stress");
        let closed = families::quad_stress(&q, 1.0).unwrap();
        let scale = lp.weights.dot(&closed.weights) / closed.weights.norm_squared();
        let gap = (&lp.weights - scale * &closed.weights).amax() / lp.weights.amax();
        assert!(gap <= 1e-8, "quadrilateral {i}: {gap:e}");
        let w = families::quad_weights(&q, 1.0).unwrap();
        assert!((w.w24 - w.w24_from_4).abs() <= 1e-10, "quadrilateral {i}: {} vs {}", w.w24, w.w24_from_4);
    }
}

fn alternatives() {
    let s = corpus::run(200, 7, &Tol::default());
    assert_eq!(s.instances, 200);
    assert!(s.violations.is_empty(), "{} violations, first: {:?}", s.violations.len(), s.violations.first());
}

fn circle_of_struts() {
    let tol = Tol::default();
    let t = families::circle_of_struts(72).unwrap();
    let y = build_operator(&t);
    let x = variation_space(&t, Mode::CurveIsometry, tol.rank).unwrap();
    let ones = DVector::from_element(y.row_count(), 1.0);
    let r = stress::stress_residual(&y, &x, &ones);
    assert!(r <= 1e-8, "uniform stress residual {r:e}");
    assert!(classify_in(&t, &x, &tol).unwrap().bar_equivalent);
    let struts: Vec<EdgeRef> = (0..t.struts().len()).map(EdgeRef::Strut).collect();
    assert_eq!(struts.len(), 36);
    for gone in 0..struts.len() {
        let keep: Vec<EdgeRef> = struts.iter().copied().filter(|&e| e != EdgeRef::Strut(gone)).collect();
        let sub = t.restrict(&keep);
        let ys = build_operator(&sub);
        let m = stress::find_strictly_positive_motion(&ys, &x, &tol).unwrap();
        assert!(m.is_some(), "no strictly positive motion without strut {gone}");
    }
}

fn almost_half_circle() {
    let tol = Tol::default();
    let t = families::almost_half_circle(72, 5f64.to_radians()).unwrap();
    let y = build_operator(&t);
    let loads = load(&y, &families::vg_field(&t)).unwrap();
    for (row, l) in y.rows.iter().zip(loads.iter()) {
        let p = t.position(row.endpoints.0);
        let theta = p[1].atan2(p[0]);
        let expected = 8.0 / 3.0 * (2.0 * theta).sin();
        assert!((l - expected).abs() <= 1e-9, "θ={theta}: {l} vs {expected}");
    }
    let x = variation_space(&t, Mode::CurveIsometry, tol.rank).unwrap();
    assert!(stress::find_semipositive_stress(&y, &x, &tol).unwrap().is_none());
    assert!(stress::find_strictly_positive_motion(&y, &x, &tol).unwrap().is_some());
}

fn rectangle() {
    let n = 21;
    let t = families::rectangle(n).unwrap();
    let y = build_operator(&t);
    let m = 2.0 / n as f64;
    let mut mu = DVector::zeros(y.row_count());
    for (r, row) in y.rows.iter().enumerate() {
        let (a, b) = row.endpoints;
        let (p, q) = (t.position(a), t.position(b));
        let len = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
        let interior = |v: usize| v >= 4;
        if row.kind == RowKind::Strut && interior(a) && interior(b) {
            mu[r] = m;
        } else if row.kind == RowKind::Cable && (interior(a) || interior(b)) {
            let (inner, corner) = if interior(a) { (p, q) } else { (q, p) };
            // Both closed forms read (2 − d)·√(1 + d²)/2 · m with d the
            // horizontal run to the corner; the weight is force over length.
            let d = (corner[0] - inner[0]).abs();
            let force = (2.0 - d) * (1.0 + d * d).sqrt() / 2.0 * m;
            mu[r] = force / len;
        }
    }
    let residual = y.matrix.transpose() * &mu;
    for v in 4..t.vertex_count() {
        for k in 0..2 {
            assert!(residual[2 * v + k].abs() <= 1e-9, "vertex {v}: {:e}", residual[2 * v + k]);
        }
    }

    let n = 201;
    let m = 2.0 / n as f64;
    let xs = families::rectangle_abscissae(n);
    let horizontal: f64 = xs.iter().map(|x| (2.0 - x) * x / 2.0 * m).sum();
    let vertical: f64 = xs.iter().map(|x| (2.0 - x) / 2.0 * m).sum();
    assert!((horizontal - 2.0 / 3.0).abs() <= 0.05 * 2.0 / 3.0, "horizontal {horizontal}");
    assert!((vertical - 1.0).abs() <= 0.05, "vertical {vertical}");
}

fn affine() {
    let tol = Tol::default();
    let mut rng = random::rng(11);
    for i in 0..50 {
        let t = random::bar_equivalent_planar(&mut rng);
        assert!(classify(&t, Mode::Full, &tol).unwrap().bar_equivalent, "instance {i} before");
        let l = loop {
            let l: DMatrix<f64> = DMatrix::from_fn(2, 2, |_, _| rng.random_range(-2.0..2.0));
            if l.determinant().abs() > 0.3 {
                break l;
            }
        };
        let shift = DVector::from_fn(2, |_, _| rng.random_range(-5.0..5.0));
        let moved = families::affine_transform(&t, &l, &shift).unwrap();
        assert!(classify(&moved, Mode::Full, &tol).unwrap().bar_equivalent, "instance {i} after");
    }

    let t = families::triangle_with_bar();
    let x = variation_space(&t, Mode::CurveIsometry, tol.rank).unwrap();
    let before = classify_in(&t, &x, &tol).unwrap();
    assert!(before.bar_equivalent, "triangle before: {}", before.verdict());
    let shear = dmatrix![1.0, 1.0; 0.0, 1.0];
    let moved = families::affine_transform(&t, &shear, &DVector::zeros(2)).unwrap();
    let after = classify_in(&moved, &x.push_forward(&shear, tol.rank).unwrap(), &tol).unwrap();
    assert!(after.partially_bar_equivalent && !after.bar_equivalent, "triangle after: {}", after.verdict());
}

fn lift() {
    let tol = Tol::default();
    let mut rng = random::rng(12);
    for i in 0..20 {
        let t = random::bar_equivalent_planar(&mut rng);
        let up = families::lift(&t, 3).unwrap();
        assert!(classify(&up, Mode::Full, &tol).unwrap().bar_equivalent, "instance {i}");
    }
}

fn covered() {
    let tol = Tol::default();
    let t = families::cylinder_of_struts(24, 8).unwrap();
    let y = build_operator(&t);
    let x = variation_space(&t, Mode::CurveIsometry, tol.rank).unwrap();
    let parts: Vec<(Vec<usize>, StressVector)> = families::block_rows(&t, 24)
        .into_iter()
        .map(|rows| {
            let part = stress::find_strictly_positive_stress(&y.select(&rows), &x, &tol)
                .unwrap()
                .expect("each ring carries a stress");
            let mut w = DVector::zeros(y.row_count());
            for (k, &r) in rows.iter().enumerate() {
                w[r] = part.weights[k];
            }
            (rows, StressVector::new(w, tol.support).unwrap())
        })
        .collect();
    assert_eq!(parts.len(), 8);
    let s = compose_covering_stress(&y, &x, &parts, &tol).unwrap();
    assert_eq!(s.positivity, Positivity::StrictlyPositive);
    let r = stress::stress_residual(&y, &x, &s.weights);
    assert!(r <= 1e-8, "residual {r:e}");
}

fn euclidean() {
    let mut rng = random::rng(13);
    for n in [2usize, 3] {
        for _ in 0..10 {
            let mut t = Tensegrity::new(n).unwrap();
            for v in 0..n + 3 {
                let p: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
                t.add_vertex(v.to_string(), &p).unwrap();
            }
            assert_eq!(euclidean_rank(&t, 1e-10), n * (n + 1) / 2);
        }
    }
    let mut rng = random::rng(7);
    for i in 0..200 {
        let t = random::tensegrity(&mut rng);
        let y = build_operator(&t);
        let g = euclidean_generators(&t).generators;
        let r = (&y.matrix * &g).amax();
        assert!(r <= 1e-9 * y.norm(), "instance {i}: {r:e}");
    }
}

fn main() {
    let criteria: [(&str, fn()); 14] = [
        ("crossed square: one stress, bar-equivalent, rigid", crossed_square),
        ("crossed square with bar: stress family and two minimal subsets", crossed_square_with_bar),
        ("octahedron: cable/strut ratio", octahedron),
        ("on-a-circle: cable/strut ratio", on_a_circle),
        ("nonregular hexagons: labelled weights in equilibrium", hexagons),
        ("crossed quadrilaterals: closed form against LP", quadrilaterals),
        ("theorems of the alternative on 200 random instances", alternatives),
        ("circle of struts: uniform stress and single deletions", circle_of_struts),
        ("almost half circle: closed-form load and positive motion", almost_half_circle),
        ("rectangle: interior equilibrium and corner sums", rectangle),
        ("affine images and the sheared triangle", affine),
        ("planar instances lifted to space", lift),
        ("cylinder of struts: composed covering stress", covered),
        ("Euclidean motions: dimension and annihilation", euclidean),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({secs:.2}s)", k + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL {:>2} {name} ({secs:.2}s): {msg}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
