//! Parametric generators for the worked examples, with closed-form
//! stresses and motions where they are known.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::model::Tensegrity;

mod circle;
mod curves;
mod quad;
pub mod random;
mod rectangle;
mod transform;

pub use circle::*;
pub use curves::*;
pub use quad::*;
pub use rectangle::*;
pub use transform::*;

/// Assembles a tensegrity from point coordinates and zero-based index pairs.
/// Vertex ids are the one-based indices.
pub fn assemble(
    dim: usize,
    points: &[Vec<f64>],
    struts: &[(usize, usize)],
    cables: &[(usize, usize)],
    bars: &[(usize, usize)],
) -> Result<Tensegrity> {
    let mut t = Tensegrity::new(dim)?;
    for (i, p) in points.iter().enumerate() {
        t.add_vertex((i + 1).to_string(), p)?;
    }
    for &(a, b) in struts {
        t.add_strut(a, b)?;
    }
    for &(a, b) in cables {
        t.add_cable(a, b)?;
    }
    for &(a, b) in bars {
        t.add_bar(a, b)?;
    }
    Ok(t)
}

fn planar(points: &[[f64; 2]]) -> Vec<Vec<f64>> {
    points.iter().map(|p| p.to_vec()).collect()
}

fn fixed(points: &[[f64; 2]], struts: &[(usize, usize)], cables: &[(usize, usize)], bars: &[(usize, usize)]) -> Tensegrity {
    assemble(2, &planar(points), struts, cables, bars).expect("fixed example is valid")
}

const UNIT_SQUARE: [[f64; 2]; 4] = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];

/// The unit square with strut diagonals and cable sides. Rows: struts 1-3,
/// 4-2, then cables 1-2, 1-4, 2-3, 3-4.
pub fn crossed_square() -> Tensegrity {
    fixed(&UNIT_SQUARE, &[(0, 2), (3, 1)], &[(0, 1), (0, 3), (1, 2), (2, 3)], &[])
}

/// The crossed square with the strut 4-2 declared a bar.
pub fn crossed_square_with_bar() -> Tensegrity {
    fixed(&UNIT_SQUARE, &[(0, 2)], &[(0, 1), (0, 3), (1, 2), (2, 3)], &[(3, 1)])
}

/// Two crossed unit squares joined by two cables, which come last in row order.
pub fn no_pos_stress() -> Tensegrity {
    let points = [
        [0.0, 0.0],
        [1.0, 0.0],
        [1.0, 1.0],
        [0.0, 1.0],
        [2.0, 0.5],
        [3.0, 0.5],
        [3.0, 1.5],
        [2.0, 1.5],
    ];
    fixed(
        &points,
        &[(0, 2), (1, 3), (4, 6), (5, 7)],
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 0),
            (4, 5),
            (5, 6),
            (6, 7),
            (7, 4),
            (2, 7),
            (1, 4),
        ],
        &[],
    )
}

/// Two bars hinged at (2,1).
pub fn two_bars() -> Tensegrity {
    fixed(&[[0.0, 0.0], [2.0, 1.0], [4.0, 0.0]], &[], &[], &[(0, 1), (1, 2)])
}

/// A flex of [`two_bars`] that is not a Euclidean motion.
pub fn two_bars_flex() -> DVector<f64> {
    DVector::from_vec(vec![-0.75, 0.5, 0.0, -1.0, 0.75, 0.5])
}

/// Two cables meeting at a right angle; the isometry chain fixes the
/// distance between their far ends to first order.
pub fn has_a_motion() -> Tensegrity {
    let mut t = fixed(&[[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]], &[], &[(0, 1), (0, 2)], &[]);
    t.add_chain(vec![1, 2]).expect("valid chain");
    t
}

/// Cables 1-2, 1-3 and the bar 2-3, with a chain along the cables so that
/// curve-isometry variations keep the cable lengths.
pub fn triangle_with_bar() -> Tensegrity {
    let mut t = fixed(&[[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]], &[], &[(0, 1), (0, 2)], &[(1, 2)]);
    t.add_chain(vec![1, 0, 2]).expect("valid chain");
    t
}

/// A convex polygon of struts with cables from the first vertex to every
/// nonadjacent vertex and one cable joining its two neighbours. The polygon
/// is regular, centred at (1,1); for k = 4 it is the square [0,2]².
pub fn grunbaum(k: usize) -> Result<Tensegrity> {
    if k < 4 {
        return Err(Error::InvalidParameter(format!("polygon needs at least 4 sides, got {k}")));
    }
    let points: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let a = 1.25 * PI + 2.0 * PI * i as f64 / k as f64;
            vec![tidy(1.0 + 2f64.sqrt() * a.cos()), tidy(1.0 + 2f64.sqrt() * a.sin())]
        })
        .collect();
    let struts: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
    let mut cables: Vec<_> = (2..k - 1).map(|j| (0, j)).collect();
    cables.push((1, k - 1));
    assemble(2, &points, &struts, &cables, &[])
}

/// Rounds values within a few ulps of an integer, so symmetric placements stay exact.
fn tidy(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-12 {
        r
    } else {
        x
    }
}

/// The regular octahedron ±eᵢ: three antipodal struts and twelve cables.
pub fn octahedron() -> Tensegrity {
    octahedron_at(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).expect("fixed example is valid")
}

/// An octahedron with vertices ±axes[i].
fn octahedron_at(axes: &[[f64; 3]; 3]) -> Result<Tensegrity> {
    let mut points = Vec::new();
    for a in axes {
        points.push(a.to_vec());
        points.push(a.iter().map(|x| -x).collect());
    }
    let struts = [(0, 1), (2, 3), (4, 5)];
    let mut cables = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            if i / 2 != j / 2 {
                cables.push((i, j));
            }
        }
    }
    assemble(3, &points, &struts, &cables, &[])
}

/// The unit octahedron plus `copies` randomly rotated octahedra inscribed
/// in the unit sphere. Each block of six consecutive vertices is one octahedron.
pub fn sphere(copies: usize, seed: u64) -> Result<Tensegrity> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut t = octahedron();
    for _ in 0..copies {
        let (u1, u2, u3): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
        let q = [
            (1.0 - u1).sqrt() * (2.0 * PI * u2).sin(),
            (1.0 - u1).sqrt() * (2.0 * PI * u2).cos(),
            u1.sqrt() * (2.0 * PI * u3).sin(),
            u1.sqrt() * (2.0 * PI * u3).cos(),
        ];
        let axes = rotation_from_quaternion(q);
        let block = octahedron_at(&axes)?;
        t = disjoint_union(&t, &block)?;
    }
    Ok(t)
}

fn rotation_from_quaternion([x, y, z, w]: [f64; 4]) -> [[f64; 3]; 3] {
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y + z * w), 2.0 * (x * z - y * w)],
        [2.0 * (x * y - z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z + x * w)],
        [2.0 * (x * z + y * w), 2.0 * (y * z - x * w), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

/// Both tensegrities side by side; the second one's vertices are renumbered after the first's.
pub fn disjoint_union(a: &Tensegrity, b: &Tensegrity) -> Result<Tensegrity> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!("union of dimensions {} and {}", a.dim(), b.dim())));
    }
    let mut t = Tensegrity::new(a.dim())?;
    let offset = a.vertex_count();
    for (src, shift) in [(a, 0), (b, offset)] {
        for v in 0..src.vertex_count() {
            t.add_vertex((v + shift + 1).to_string(), src.position(v))?;
        }
    }
    for (src, shift) in [(a, 0), (b, offset)] {
        for &(p, q) in src.struts() {
            t.add_strut(p + shift, q + shift)?;
        }
    }
    for (src, shift) in [(a, 0), (b, offset)] {
        for &(p, q) in src.cables() {
            t.add_cable(p + shift, q + shift)?;
        }
    }
    for (src, shift) in [(a, 0), (b, offset)] {
        for &(p, q) in src.bars() {
            t.add_bar(p + shift, q + shift)?;
        }
    }
    for (src, shift) in [(a, 0), (b, offset)] {
        for c in src.chains() {
            t.add_chain(c.iter().map(|v| v + shift).collect())?;
        }
    }
    Ok(t)
}

/// Rows whose two endpoints lie in the same block of `block` consecutive
/// vertices, one list per block that has any.
pub fn block_rows(t: &Tensegrity, block: usize) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (r, row) in crate::model::edge_rows(t).iter().enumerate() {
        let (a, b) = row.endpoints;
        if a / block == b / block {
            groups.entry(a / block).or_default().push(r);
        }
    }
    groups.into_values().collect()
}

/// Mean cable force (weight times length) over mean strut weight. For a
/// stress on a placement whose struts are diameters of the unit sphere this
/// ratio is the same for every stress.
pub fn cable_to_strut_ratio(t: &Tensegrity, weights: &DVector<f64>) -> f64 {
    let rows = crate::model::edge_rows(t);
    let (mut cable, mut nc, mut strut, mut ns) = (0.0, 0.0, 0.0, 0.0);
    for (row, &w) in rows.iter().zip(weights.iter()) {
        let (a, b) = row.endpoints;
        match row.kind {
            crate::RowKind::Cable => {
                cable += w * distance(t.position(a), t.position(b));
                nc += 1.0;
            }
            crate::RowKind::Strut => {
                strut += w;
                ns += 1.0;
            }
        }
    }
    (cable / nc) / (strut / ns)
}

pub(crate) fn distance(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// The hexagon (±2,0), (±1,±1) with antipodal struts and a cable cycle,
/// and the weights 1 on struts, 2 on cables in row order.
pub fn nonreg_hex() -> (Tensegrity, DVector<f64>) {
    let points = [[2.0, 0.0], [1.0, 1.0], [-1.0, 1.0], [-2.0, 0.0], [-1.0, -1.0], [1.0, -1.0]];
    let t = fixed(&points, &[(0, 3), (1, 4), (2, 5)], &hex_cycle(), &[]);
    let w = DVector::from_vec(vec![1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0]);
    (t, w)
}

/// A second nonregular hexagon with its labelled weights in row order.
pub fn another_nonreg_hex() -> (Tensegrity, DVector<f64>) {
    let points = [[1.0, 0.0], [0.6, 0.6], [0.0, 1.0], [-1.0, 0.0], [-0.6, -0.6], [0.0, -1.0]];
    let t = fixed(&points, &[(0, 3), (1, 4), (2, 5)], &hex_cycle(), &[]);
    let w = DVector::from_vec(vec![3.0, 1.0, 3.0, 6.0, 6.0, 3.6, 6.0, 6.0, 3.6]);
    (t, w)
}

fn hex_cycle() -> Vec<(usize, usize)> {
    (0..6).map(|i| (i, (i + 1) % 6)).collect()
}

/// A hexagon with antipodal struts that is not bar-equivalent, with a
/// vertex field lengthening every strut and shortening every cable.
pub fn general_hex_with_motion() -> (Tensegrity, DVector<f64>) {
    let points = [
        [3.891, -0.454],
        [1.345, -1.0],
        [-0.987, -0.161],
        [0.571, 1.985],
        [2.55, 3.893],
        [4.0, 2.283],
    ];
    let t = fixed(&points, &[(0, 3), (1, 4), (2, 5)], &hex_cycle(), &[]);
    let field = DVector::from_vec(vec![
        -1.2454, 0.4376, -0.4984, -1.2140, 0.3672, 0.0, -1.3138, 0.7544, 0.0, -1.1324, 0.5677, 0.0,
    ]);
    (t, field)
}

/// A triangle of struts with cables from (0,0) to its corners
/// (−1,top), (1,top), (0,−2/√3). At top = 1/√3 the triangle is equilateral
/// with side 2 and centroid at the origin.
pub fn corner_triangle(top: f64) -> Result<Tensegrity> {
    if !(top > 0.0 && top.is_finite()) {
        return Err(Error::InvalidParameter(format!("top must be positive, got {top}")));
    }
    let points = [[-1.0, top], [1.0, top], [0.0, -2.0 / 3f64.sqrt()], [0.0, 0.0]];
    assemble(
        2,
        &planar(&points),
        &[(0, 1), (1, 2), (2, 0)],
        &[(3, 0), (3, 1), (3, 2)],
        &[],
    )
}

/// A family name with numeric parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub name: String,
    pub params: BTreeMap<String, f64>,
}

impl FamilySpec {
    pub fn new(name: impl Into<String>) -> FamilySpec {
        FamilySpec {
            name: name.into(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> FamilySpec {
        self.params.insert(key.to_string(), value);
        self
    }

    fn get(&self, key: &str, default: f64) -> f64 {
        self.params.get(key).copied().unwrap_or(default)
    }

    fn count(&self, key: &str, default: usize) -> Result<usize> {
        let v = self.get(key, default as f64);
        if v < 0.0 || v.fract() != 0.0 || v > 1e7 {
            return Err(Error::InvalidParameter(format!("{key} must be a nonnegative integer, got {v}")));
        }
        Ok(v as usize)
    }
}

/// Family names accepted by [`generate`], with their parameters and defaults.
pub const FAMILIES: &[(&str, &str)] = &[
    ("crossed-square", ""),
    ("crossed-square-bar", ""),
    ("no-pos-stress", ""),
    ("two-bars", ""),
    ("has-a-motion", ""),
    ("triangle-bar", ""),
    ("grunbaum", "k=4"),
    ("octahedron", ""),
    ("sphere", "copies=4 seed=1"),
    ("nonreg-hex", ""),
    ("another-nonreg-hex", ""),
    ("hex-with-motion", ""),
    ("corner-triangle", "t=0.5773502691896258"),
    ("circle-of-struts", "n=72"),
    ("almost-half-circle", "n=72 eps=5 (degrees)"),
    ("on-a-circle", "n=12 skip=3 | skip-frac=0.25"),
    ("rectangle", "n=11"),
    ("square-of-struts", "m=8"),
    ("cylinder", "n=24 rings=8"),
    ("star-curve", "n=48 skip-frac=0.25"),
    ("hexagram-curve", "n=48 skip-frac=0.1666666666666667"),
    ("cant-curve", "n=72 skip-frac=0.25"),
    ("stadium", "n=6"),
    ("random", "seed=0"),
];

pub fn generate(spec: &FamilySpec) -> Result<Tensegrity> {
    let s = spec;
    let skip = |n: usize, default_frac: f64| -> Result<usize> {
        match s.params.get("skip") {
            Some(_) => s.count("skip", 0),
            None => Ok(skip_from_fraction(n, s.get("skip-frac", default_frac))),
        }
    };
    match spec.name.as_str() {
        "crossed-square" => Ok(crossed_square()),
        "crossed-square-bar" => Ok(crossed_square_with_bar()),
        "no-pos-stress" => Ok(no_pos_stress()),
        "two-bars" => Ok(two_bars()),
        "has-a-motion" => Ok(has_a_motion()),
        "triangle-bar" => Ok(triangle_with_bar()),
        "grunbaum" => grunbaum(s.count("k", 4)?),
        "octahedron" => Ok(octahedron()),
        "sphere" => sphere(s.count("copies", 4)?, s.count("seed", 1)? as u64),
        "nonreg-hex" => Ok(nonreg_hex().0),
        "another-nonreg-hex" => Ok(another_nonreg_hex().0),
        "hex-with-motion" => Ok(general_hex_with_motion().0),
        "corner-triangle" => corner_triangle(s.get("t", 1.0 / 3f64.sqrt())),
        "circle-of-struts" => circle_of_struts(s.count("n", 72)?),
        "almost-half-circle" => almost_half_circle(s.count("n", 72)?, s.get("eps", 5.0).to_radians()),
        "on-a-circle" => {
            let n = s.count("n", 12)?;
            on_a_circle(n, skip(n, 0.25)?)
        }
        "rectangle" => rectangle(s.count("n", 11)?),
        "square-of-struts" => square_of_struts(s.count("m", 8)?),
        "cylinder" => cylinder_of_struts(s.count("n", 24)?, s.count("rings", 8)?),
        "star-curve" => {
            let n = s.count("n", 48)?;
            curve_tensegrity(&star_curve(), n, skip(n, 0.25)?)
        }
        "hexagram-curve" => {
            let n = s.count("n", 48)?;
            curve_tensegrity(&hexagram_curve(), n, skip(n, 1.0 / 6.0)?)
        }
        "cant-curve" => {
            let n = s.count("n", 72)?;
            curve_tensegrity(&cant_curve(), n, skip(n, 0.25)?)
        }
        "stadium" => stadium(s.count("n", 6)?),
        "random" => Ok(random::tensegrity(&mut random::rng(s.count("seed", 0)? as u64))),
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}

/// Index offset for a skip given as a fraction of the vertex count.
pub fn skip_from_fraction(n: usize, fraction: f64) -> usize {
    (fraction * n as f64).round().max(0.0) as usize
}
