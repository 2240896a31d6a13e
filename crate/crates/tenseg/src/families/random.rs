//! Seeded random tensegrities for property checks.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{assemble, crossed_quad, disjoint_union};
use crate::model::Tensegrity;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random tensegrity with 3 to 7 vertices in the plane or in space, each
/// vertex pair an edge with probability ½ (strut, cable or bar), and
/// sometimes an isometry chain.
pub fn tensegrity(rng: &mut Rng64) -> Tensegrity {
    let dim = if rng.random_bool(0.7) { 2 } else { 3 };
    let count = rng.random_range(3..=7);
    let points: Vec<Vec<f64>> = if rng.random_bool(0.5) {
        let offset: f64 = rng.random_range(0.0..2.0 * PI);
        (0..count)
            .map(|i| {
                let a = offset + 2.0 * PI * i as f64 / count as f64 + rng.random_range(-0.2..0.2);
                let mut p = vec![a.cos(), a.sin()];
                p.extend((2..dim).map(|_| rng.random_range(-0.5..0.5)));
                p
            })
            .collect()
    } else {
        (0..count)
            .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect()
    };
    let (mut struts, mut cables, mut bars) = (Vec::new(), Vec::new(), Vec::new());
    for a in 0..count {
        for b in a + 1..count {
            if rng.random_bool(0.5) {
                match rng.random_range(0..10) {
                    0..4 => struts.push((a, b)),
                    4..8 => cables.push((a, b)),
                    _ => bars.push((a, b)),
                }
            }
        }
    }
    let mut t = assemble(dim, &points, &struts, &cables, &bars).expect("distinct random points");
    if rng.random_bool(0.3) {
        let mut order: Vec<usize> = (0..count).collect();
        order.shuffle(rng);
        order.truncate(rng.random_range(2..=count));
        t.add_chain(order).expect("distinct chain vertices");
    }
    t
}

/// A random strictly convex quadrilateral, vertices in counter-clockwise order.
pub fn convex_quad(rng: &mut Rng64) -> [[f64; 2]; 4] {
    let mut angles: Vec<f64> = (0..4)
        .map(|i| PI / 2.0 * i as f64 + rng.random_range(0.15..PI / 2.0 - 0.15))
        .collect();
    angles.sort_by(f64::total_cmp);
    let center = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
    let m = loop {
        let m: [f64; 4] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        if m[0] * m[3] - m[1] * m[2] > 0.5 {
            break m;
        }
    };
    let mut q = [[0.0; 2]; 4];
    for (i, a) in angles.iter().enumerate() {
        let (x, y) = (a.cos(), a.sin());
        q[i] = [center[0] + m[0] * x + m[1] * y, center[1] + m[2] * x + m[3] * y];
    }
    q
}

/// A random planar bar-equivalent tensegrity: one or two crossed convex quadrilaterals.
pub fn bar_equivalent_planar(rng: &mut Rng64) -> Tensegrity {
    let mut t = crossed_quad(&convex_quad(rng)).expect("convex quadrilateral");
    if rng.random_bool(0.5) {
        let mut second = convex_quad(rng);
        for p in &mut second {
            p[0] += 10.0;
        }
        t = disjoint_union(&t, &crossed_quad(&second).expect("convex quadrilateral")).expect("same dimension");
    }
    t
}
