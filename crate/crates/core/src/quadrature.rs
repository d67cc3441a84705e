//! Gauss–Legendre quadrature over the segment mesh of a canonical system, and
//! the vector-valued test functions it integrates.

use std::sync::Arc;

use crate::cansys::CanonicalSystem;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64};

/// Nodes of the 8-point Gauss–Legendre rule on [-1, 1].
const NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];

const WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_27,
    0.362_683_783_378_361_96,
    0.362_683_783_378_361_96,
    0.313_706_645_877_887_27,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

/// Upper bound on the number of cells in a single integration.
const MAX_CELLS: usize = 1_000_000;

/// A vector-valued function on the interval with a known support.
#[derive(Clone)]
pub struct TestFunction {
    dim: usize,
    support: (f64, f64),
    f: Arc<dyn Fn(f64) -> CVector + Send + Sync>,
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestFunction")
            .field("dim", &self.dim)
            .field("support", &self.support)
            .finish()
    }
}

impl TestFunction {
    /// `f` is evaluated only inside `support` and treated as zero outside.
    pub fn new<F>(dim: usize, support: (f64, f64), f: F) -> Self
    where
        F: Fn(f64) -> CVector + Send + Sync + 'static,
    {
        Self {
            dim,
            support,
            f: Arc::new(f),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(dim, (0.0, 0.0), move |_| CVector::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn eval(&self, t: f64) -> CVector {
        if t < self.support.0 || t > self.support.1 {
            CVector::zeros(self.dim)
        } else {
            (self.f)(t)
        }
    }

    pub fn is_zero_support(&self) -> bool {
        !(self.support.1 > self.support.0)
    }
}

/// Default cell length for integrands oscillating with spectral parameter of
/// modulus `scale`.
pub fn default_cell(scale: f64) -> f64 {
    (1.0 / (1.0 + scale)).min(0.25)
}

/// Largest cell length that keeps at least eight nodes per period of
/// `exp(iλ·t/2)`.
pub fn oscillation_bound(lambda: f64) -> f64 {
    if lambda == 0.0 {
        f64::INFINITY
    } else {
        4.0 * std::f64::consts::PI / lambda.abs()
    }
}

/// Spectral scale of a system at `z`: `|z|` plus the largest potential norm.
pub fn system_scale(sys: &CanonicalSystem, z: C64) -> f64 {
    let fmax = sys
        .segments()
        .iter()
        .chain(sys.tail())
        .map(|s| s.f.norm())
        .fold(0.0, f64::max);
    z.norm() + fmax
}

/// Quadrature nodes and weights on `[from, to]`, with cells split at the
/// system's breakpoints and at `extra_breaks`, each at most `max_cell` long.
pub fn gauss_points(
    sys: &CanonicalSystem,
    from: f64,
    to: f64,
    extra_breaks: &[f64],
    max_cell: f64,
) -> Result<Vec<(f64, f64)>> {
    if !(to > from) {
        return Ok(Vec::new());
    }
    if !from.is_finite() || !to.is_finite() {
        return Err(Error::QuadratureUnderResolved(
            "integration range must be finite".into(),
        ));
    }
    if !(max_cell > 0.0) {
        return Err(Error::QuadratureUnderResolved("cell length must be positive".into()));
    }
    let mut cuts: Vec<f64> = vec![from, to];
    cuts.extend(
        sys.breakpoints()
            .iter()
            .chain(extra_breaks)
            .copied()
            .filter(|&x| x > from && x < to),
    );
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let total_cells: f64 = cuts
        .windows(2)
        .map(|w| ((w[1] - w[0]) / max_cell).ceil())
        .sum();
    if total_cells > MAX_CELLS as f64 {
        return Err(Error::QuadratureUnderResolved(format!(
            "{total_cells} cells needed on [{from}, {to}]"
        )));
    }
    let mut points = Vec::with_capacity(8 * total_cells as usize);
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let n = ((hi - lo) / max_cell).ceil().max(1.0) as usize;
        let h = (hi - lo) / n as f64;
        for k in 0..n {
            let a = lo + k as f64 * h;
            let mid = a + 0.5 * h;
            for (x, wt) in NODES.iter().zip(WEIGHTS) {
                points.push((mid + 0.5 * h * x, 0.5 * h * wt));
            }
        }
    }
    Ok(points)
}

/// `Σ w_k g(t_k)` over the given points.
pub fn integrate<G>(points: &[(f64, f64)], rows: usize, cols: usize, mut g: G) -> Result<CMatrix>
where
    G: FnMut(f64) -> Result<CMatrix>,
{
    let mut acc = CMatrix::zeros(rows, cols);
    for &(t, w) in points {
        acc += g(t)? * C64::new(w, 0.0);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_of_degree_15() {
        let sys = CanonicalSystem::free(1, 2.0);
        let pts = gauss_points(&sys, 0.0, 2.0, &[], 10.0).unwrap();
        assert_eq!(pts.len(), 8);
        let s: f64 = pts.iter().map(|(t, w)| w * t.powi(15)).sum();
        assert!((s - 2f64.powi(16) / 16.0).abs() < 1e-9);
    }

    #[test]
    fn cells_respect_breaks() {
        let sys = CanonicalSystem::free(1, 2.0);
        let pts = gauss_points(&sys, 0.0, 2.0, &[0.5], 1.0).unwrap();
        // [0, 0.5] is one cell and [0.5, 2] splits into two.
        assert_eq!(pts.len(), 8 * 3);
        let total: f64 = pts.iter().map(|p| p.1).sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn infinite_range_is_rejected() {
        let sys = CanonicalSystem::free_half_line(1);
        assert!(matches!(
            gauss_points(&sys, 0.0, f64::INFINITY, &[], 0.1),
            Err(Error::QuadratureUnderResolved(_))
        ));
    }

    #[test]
    fn test_function_vanishes_outside_support() {
        let f = TestFunction::new(2, (0.5, 1.0), |_| CVector::from_element(2, C64::new(1.0, 0.0)));
        assert_eq!(f.eval(0.2).norm(), 0.0);
        assert_eq!(f.eval(0.7).norm(), 2f64.sqrt());
    }
}
