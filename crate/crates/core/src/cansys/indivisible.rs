use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::{CanonicalSystem, RANK_ONE_TOL};
use crate::error::{Error, Result};

/// A maximal run of segments on which `ℋ = ξ_ψ ξ_ψ*` for one angle ψ.
#[derive(Debug, Clone, PartialEq)]
pub struct IndivisibleRun {
    pub start: f64,
    /// `f64::INFINITY` when the run includes the tail of a half-line system.
    pub end: f64,
    /// Type ψ ∈ [0, π).
    pub psi: f64,
    pub at_left: bool,
    pub at_right: bool,
}

/// The angle ψ ∈ [0, π) with `h = ξ_ψ ξ_ψ*`, if `h` is such a rank-one
/// projection within [`RANK_ONE_TOL`].
pub(crate) fn rank_one_type(h: &DMatrix<f64>) -> Option<f64> {
    if h.shape() != (2, 2) {
        return None;
    }
    let (a, b, d) = (h[(0, 0)], 0.5 * (h[(0, 1)] + h[(1, 0)]), h[(1, 1)]);
    // For ξξ* with ξ = (cos ψ, sin ψ): a − d = cos 2ψ, 2b = sin 2ψ.
    let mut psi = 0.5 * (2.0 * b).atan2(a - d);
    if psi < 0.0 {
        psi += PI;
    }
    if PI - psi < 1e-12 || psi < 1e-15 {
        psi = 0.0;
    }
    let (s, c) = psi.sin_cos();
    let xi = DMatrix::from_row_slice(2, 2, &[c * c, c * s, c * s, s * s]);
    if (h - xi).norm() <= RANK_ONE_TOL {
        Some(psi)
    } else {
        None
    }
}

/// Whether two types agree modulo π.
pub(crate) fn same_type(a: f64, b: f64) -> bool {
    let d = (a - b).abs();
    d.min(PI - d) <= RANK_ONE_TOL
}

/// Maximal runs of rank-one segments sharing a type (p = 1 only).
pub fn detect_indivisible(sys: &CanonicalSystem) -> Result<Vec<IndivisibleRun>> {
    if sys.p() != 1 {
        return Err(Error::UnsupportedDimension { p: sys.p() });
    }
    let bp = sys.breakpoints();
    let mut cells: Vec<(f64, f64, Option<f64>)> = sys
        .segments()
        .iter()
        .enumerate()
        .map(|(k, s)| (bp[k], bp[k + 1], rank_one_type(&s.h)))
        .collect();
    if let Some(t) = sys.tail() {
        cells.push((sys.mesh_end(), f64::INFINITY, rank_one_type(&t.h)));
    }
    let mut runs: Vec<IndivisibleRun> = Vec::new();
    let mut extends_previous = false;
    for (start, end, ty) in cells {
        match ty {
            Some(psi) => {
                match runs.last_mut() {
                    Some(run) if extends_previous && same_type(run.psi, psi) => run.end = end,
                    _ => runs.push(IndivisibleRun {
                        start,
                        end,
                        psi,
                        at_left: false,
                        at_right: false,
                    }),
                }
                extends_previous = true;
            }
            None => extends_previous = false,
        }
    }
    let right = if sys.is_regular() { sys.mesh_end() } else { f64::INFINITY };
    for run in &mut runs {
        run.at_left = run.start == sys.a();
        run.at_right = run.end == right;
    }
    Ok(runs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cansys::Segment;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn type_extraction() {
        let h = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(rank_one_type(&h), Some(0.0));
        let h = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        assert!((rank_one_type(&h).unwrap() - FRAC_PI_4).abs() < 1e-15);
        let h = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        assert!((rank_one_type(&h).unwrap() - FRAC_PI_2).abs() < 1e-15);
        let h = DMatrix::identity(2, 2) / 2.0;
        assert_eq!(rank_one_type(&h), None);
        // A direction just below π folds to 0.
        let eps: f64 = 1e-14;
        let h = DMatrix::from_row_slice(2, 2, &[eps.cos().powi(2), -eps.cos() * eps.sin(), -eps.cos() * eps.sin(), eps.sin().powi(2)]);
        assert_eq!(rank_one_type(&h), Some(0.0));
    }

    #[test]
    fn runs_and_endpoints() {
        let sys = CanonicalSystem::regular(
            1,
            0.0,
            vec![
                Segment::indivisible(0.5, FRAC_PI_4),
                Segment::indivisible(0.5, FRAC_PI_4),
                Segment::free(1, 1.0),
                Segment::indivisible(1.0, 0.0),
            ],
        )
        .unwrap();
        let runs = detect_indivisible(&sys).unwrap();
        assert_eq!(runs.len(), 2);
        assert_eq!((runs[0].start, runs[0].end), (0.0, 1.0));
        assert!(runs[0].at_left && !runs[0].at_right);
        assert!((runs[0].psi - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(runs[1].psi, 0.0);
        assert!(runs[1].at_right && !runs[1].at_left);
    }

    #[test]
    fn free_system_has_no_runs() {
        assert!(detect_indivisible(&CanonicalSystem::free(1, 2.0)).unwrap().is_empty());
        assert!(matches!(
            detect_indivisible(&CanonicalSystem::free(2, 2.0)),
            Err(Error::UnsupportedDimension { p: 2 })
        ));
    }
}
