//! The generalized Fourier transform `(𝓕f)(λ) = ∫ Φ(s, λ)ᵀ ℋ(s) f(s) ds`.

use std::f64::consts::SQRT_2;

use super::TripleKind;
use crate::cansys::{CanonicalSystem, FundamentalSolution};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64};
use crate::quadrature::{default_cell, gauss_points, oscillation_bound, system_scale, TestFunction};

/// Largest cell used for Fourier integrals.
const MAX_CELL: f64 = 0.1;

/// Triple and, for the limit-point triple, the real parameter τ of the
/// kernel `s(·, λ) + τ·c(·, λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierSetup {
    pub kind: TripleKind,
    pub lp_parameter: f64,
}

impl FourierSetup {
    pub fn new(kind: TripleKind) -> Self {
        Self {
            kind,
            lp_parameter: 0.0,
        }
    }

    pub fn with_lp_parameter(mut self, tau: f64) -> Self {
        self.lp_parameter = tau;
        self
    }

    /// Number of components of the transform.
    pub fn dim(&self, p: usize) -> usize {
        self.kind.boundary_dim(p)
    }
}

/// `Φ` from `U = [c s]`.
fn kernel_of(u: &CMatrix, setup: &FourierSetup) -> CMatrix {
    let p = u.nrows() / 2;
    match setup.kind {
        TripleKind::FullRegular => u * C64::new(1.0 / SQRT_2, 0.0),
        TripleKind::NeumannLeft => u.columns(0, p).into_owned(),
        TripleKind::LimitPoint => u.columns(p, p) + u.columns(0, p) * C64::new(setup.lp_parameter, 0.0),
    }
}

fn kernel_from(fs: &FundamentalSolution<'_>, setup: &FourierSetup, t: f64) -> Result<CMatrix> {
    Ok(kernel_of(&fs.eval(t)?, setup))
}

/// The kernel `Φ(t, λ)`: `U(t, λ)/√2` (full regular), `c(t, λ)` (Neumann) or
/// `s(t, λ) + τc(t, λ)` (limit point).
pub fn fourier_kernel_matrix(sys: &CanonicalSystem, setup: &FourierSetup, lambda: f64, t: f64) -> Result<CMatrix> {
    setup.kind.check(sys)?;
    let fs = FundamentalSolution::new(sys, C64::new(lambda, 0.0));
    kernel_from(&fs, setup, t)
}

/// `Φ(t, λ)` at each of the points `at`.
pub fn fourier_kernel_values(sys: &CanonicalSystem, setup: &FourierSetup, lambda: f64, at: &[f64]) -> Result<Vec<CMatrix>> {
    setup.kind.check(sys)?;
    let fs = FundamentalSolution::new(sys, C64::new(lambda, 0.0));
    at.iter().map(|&t| kernel_from(&fs, setup, t)).collect()
}

impl From<TripleKind> for FourierSetup {
    fn from(kind: TripleKind) -> Self {
        Self::new(kind)
    }
}

/// `(𝓕f)(λ)` for the given setup.
pub fn fourier_transform(sys: &CanonicalSystem, setup: &FourierSetup, lambda: f64, f: &TestFunction) -> Result<CVector> {
    setup.kind.check(sys)?;
    if f.dim() != sys.n() {
        return Err(Error::InvalidInput(format!(
            "test function has dimension {}, system needs {}",
            f.dim(),
            sys.n()
        )));
    }
    let (s0, s1) = f.support();
    let lo = sys.a().max(s0);
    let hi = if sys.is_regular() { sys.mesh_end().min(s1) } else { s1 };
    if !hi.is_finite() {
        return Err(Error::QuadratureUnderResolved(
            "test function needs bounded support".into(),
        ));
    }
    let z = C64::new(lambda, 0.0);
    let cell = default_cell(system_scale(sys, z))
        .min(oscillation_bound(system_scale(sys, z)) / 2.0)
        .min(MAX_CELL);
    let fs = FundamentalSolution::new(sys, z);
    let dim = setup.dim(sys.p());
    let points = gauss_points(sys, lo, hi, &[], cell)?;
    let ts: Vec<f64> = points.iter().map(|&(t, _)| t).collect();
    let mut acc = CVector::zeros(dim);
    for ((t, w), u) in points.iter().zip(fs.eval_increasing(&ts)?) {
        let k = kernel_of(&u, setup);
        acc += k.transpose() * (sys.weight_at(*t)? * f.eval(*t)) * C64::new(*w, 0.0);
    }
    Ok(acc)
}

/// `(𝓕f)(λ)` with the default limit-point parameter τ = 0.
pub fn fourier_kernel(sys: &CanonicalSystem, kind: TripleKind, lambda: f64, f: &TestFunction) -> Result<CVector> {
    fourier_transform(sys, &FourierSetup::new(kind), lambda, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    #[test]
    fn zero_function_transforms_to_zero() {
        let sys = CanonicalSystem::free(1, 2.0);
        let f = TestFunction::zero(2);
        assert_eq!(fourier_kernel(&sys, TripleKind::NeumannLeft, 1.3, &f).unwrap().norm(), 0.0);
    }

    #[test]
    fn full_regular_at_zero_is_weighted_mean() {
        let sys = CanonicalSystem::free(1, 2.0);
        let f = TestFunction::new(2, (0.0, 2.0), |t| CVector::from_vec(vec![c64(t, 0.0), c64(1.0, t)]));
        let got = fourier_kernel(&sys, TripleKind::FullRegular, 0.0, &f).unwrap();
        // ℋ = I/2: (1/√2)·½·∫₀² f = (1/(2√2))·(2, 2 + 2i).
        let s = 1.0 / (2.0 * SQRT_2);
        assert!((got[0] - c64(2.0 * s, 0.0)).norm() < 1e-13);
        assert!((got[1] - c64(2.0 * s, 2.0 * s)).norm() < 1e-13);
    }

    #[test]
    fn eigenfunction_transform_peaks_at_its_eigenvalue() {
        let sys = CanonicalSystem::free(1, 2.0);
        let lambda0 = 1.5 * std::f64::consts::PI;
        let f = TestFunction::new(2, (0.0, 2.0), move |t| {
            let a = lambda0 * t / 2.0;
            CVector::from_vec(vec![c64(a.cos(), 0.0), c64(-a.sin(), 0.0)])
        });
        let at = |l: f64| fourier_kernel(&sys, TripleKind::NeumannLeft, l, &f).unwrap()[0].norm();
        let peak = at(lambda0);
        // ∫₀² ½(cos² + sin²) = 1.
        assert!((peak - 1.0).abs() < 1e-12);
        for l in [lambda0 - 1.0, lambda0 + 1.0, 0.5 * std::f64::consts::PI] {
            assert!(at(l) < peak);
        }
    }
}
