//! Cross-checks of the theorems of the alternative on seeded random tensegrities.

use crate::euclidean::euclidean_generators;
use crate::families::random;
use crate::model::{render, Tensegrity};
use crate::rigidity::{build_operator, variation_space, Mode};
use crate::stress::{self, MotionVector, StressVector};
use crate::{Result, Tol};

/// The four positivity answers for one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Findings {
    pub strictly_positive_stress: Option<StressVector>,
    pub semipositive_stress: Option<StressVector>,
    pub strictly_positive_motion: Option<MotionVector>,
    pub semipositive_motion: Option<MotionVector>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub index: usize,
    pub mode: Mode,
    pub detail: String,
    /// The instance in the text format.
    pub model: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Summary {
    pub instances: usize,
    /// Instance-mode pairs checked.
    pub checks: usize,
    pub violations: Vec<Violation>,
}

pub fn findings(t: &Tensegrity, mode: Mode, tol: &Tol) -> Result<Findings> {
    let y = build_operator(t);
    let x = variation_space(t, mode, tol.rank)?;
    Ok(Findings {
        strictly_positive_stress: stress::find_strictly_positive_stress(&y, &x, tol)?,
        semipositive_stress: stress::find_semipositive_stress(&y, &x, tol)?,
        strictly_positive_motion: stress::find_strictly_positive_motion(&y, &x, tol)?,
        semipositive_motion: stress::find_semipositive_motion(&y, &x, tol)?,
    })
}

/// Problems with a set of findings: each pairing must have exactly one
/// member present (Gordan's may have neither when there are no rows), a
/// stress must annihilate every motion's load, and every Euclidean motion
/// must have zero load.
pub fn audit(t: &Tensegrity, f: &Findings) -> Vec<String> {
    let mut problems = Vec::new();
    let y = build_operator(t);
    let stiemke = (f.strictly_positive_stress.is_some(), f.semipositive_motion.is_some());
    if stiemke.0 == stiemke.1 {
        problems.push(format!(
            "Stiemke pairing: strictly positive stress {}, semipositive motion {}",
            present(stiemke.0),
            present(stiemke.1)
        ));
    }
    let gordan = (f.semipositive_stress.is_some(), f.strictly_positive_motion.is_some());
    let vacuous = y.row_count() == 0 && !gordan.0 && !gordan.1;
    if gordan.0 == gordan.1 && !vacuous {
        problems.push(format!(
            "Gordan pairing: semipositive stress {}, strictly positive motion {}",
            present(gordan.0),
            present(gordan.1)
        ));
    }
    for s in [&f.strictly_positive_stress, &f.semipositive_stress].into_iter().flatten() {
        for m in [&f.strictly_positive_motion, &f.semipositive_motion].into_iter().flatten() {
            let overlap = s.weights.dot(&m.load);
            if overlap > 1e-8 * s.weights.norm() * m.load.norm() {
                problems.push(format!("stress and motion load overlap by {overlap:e}"));
            }
        }
    }
    let g = euclidean_generators(t).generators;
    let scale = y.norm();
    for (c, col) in g.column_iter().enumerate() {
        let residual = (&y.matrix * col).amax();
        if residual > 1e-9 * scale * col.norm() {
            problems.push(format!("Euclidean generator {c} has load {residual:e}"));
        }
    }
    problems
}

fn present(b: bool) -> &'static str {
    if b {
        "present"
    } else {
        "absent"
    }
}

/// Checks `count` random instances drawn from `seed`, in the full space and,
/// when the instance has chains, under curve isometry.
pub fn run(count: usize, seed: u64, tol: &Tol) -> Summary {
    run_with(count, seed, tol, |_, _| {})
}

/// [`run`] with a hook that may alter the findings before they are audited.
pub fn run_with(count: usize, seed: u64, tol: &Tol, mut tamper: impl FnMut(usize, &mut Findings)) -> Summary {
    let mut rng = random::rng(seed);
    let mut summary = Summary::default();
    for index in 0..count {
        let t = random::tensegrity(&mut rng);
        summary.instances += 1;
        let mut modes = vec![Mode::Full];
        if !t.chains().is_empty() {
            modes.push(Mode::CurveIsometry);
        }
        for mode in modes {
            summary.checks += 1;
            let problems = match findings(&t, mode, tol) {
                Ok(mut f) => {
                    tamper(index, &mut f);
                    audit(&t, &f)
                }
                Err(e) => vec![format!("solver error: {e}")],
            };
            if !problems.is_empty() {
                summary.violations.push(Violation {
                    index,
                    mode,
                    detail: problems.join("; "),
                    model: render(&t),
                });
            }
        }
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_corpus() {
        assert_eq!(run(0, 1, &Tol::default()), Summary::default());
    }

    #[test]
    fn small_corpus_is_clean() {
        let s = run(25, 11, &Tol::default());
        assert_eq!(s.instances, 25);
        assert!(s.violations.is_empty(), "{:?}", s.violations);
    }

    #[test]
    fn tampering_is_caught() {
        let s = run_with(3, 5, &Tol::default(), |i, f| {
            if i == 1 {
                f.strictly_positive_stress = None;
                f.semipositive_motion = None;
            }
        });
        let mut r = random::rng(5);
        let _ = random::tensegrity(&mut r);
        let modes = if random::tensegrity(&mut r).chains().is_empty() { 1 } else { 2 };
        assert_eq!(s.violations.len(), modes);
        for v in &s.violations {
            assert_eq!(v.index, 1);
            assert!(v.detail.contains("Stiemke"));
            assert!(v.model.starts_with("dim "));
        }
    }
}
