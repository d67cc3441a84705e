//! L-resolvents of canonical systems, spectral functions, admissibility of
//! parameters, and the Parseval equality for the generalized Fourier transform.

mod admissibility;
mod parseval;
mod tau;

pub use admissibility::{
    admissibility_test, classify_ratios, double_end_tau, AdmissibilityReport, Verdict, ADMISSIBILITY_GRID,
    DOUBLE_END_X,
};
pub use parseval::{
    bessel_check, fourier_on_sigma, inverse_fourier, inverse_fourier_fn, parseval_check,
    spectral_inner, ParsevalReport, SpectralVector,
};
pub use tau::{AtomSpec, TauParameter, TauSpec};

use crate::boundary::{
    k_constant, resolvent_matrix_side, Side, TripleKind,
};
use crate::cansys::{monodromy, CanonicalSystem};
use crate::error::{Error, Result};
use crate::herglotz::{stieltjes_invert, DistributionFunction, StieltjesOptions};
use crate::jmoebius::{lft_left, lft_right};
use crate::linalg::{checked_inverse, symplectic_unit, CMatrix, C64};

/// How an L-resolvent is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Left pair route for the full regular triple, right transform otherwise.
    Auto,
    /// Right transform `T_W[τ(z)]` of the right resolvent matrix.
    RightLft,
    /// Left transform of the left resolvent matrix by a pair of τ(z).
    LeftPair,
    /// `(A + BU(z))⁻¹(BU(z) − A)𝒥 + K` for the full regular triple.
    BoundaryPair,
}

/// The L-resolvent `z ↦ r(z)` for a triple and a parameter τ.
#[derive(Debug, Clone)]
pub struct LResolvent {
    sys: CanonicalSystem,
    kind: TripleKind,
    tau: TauParameter,
    k: Option<CMatrix>,
    route: Route,
}

impl LResolvent {
    pub fn new(sys: &CanonicalSystem, kind: TripleKind, tau: TauParameter) -> Result<Self> {
        kind.check(sys)?;
        tau.validate(sys, kind)?;
        let k = match kind {
            TripleKind::FullRegular => Some(k_constant(sys)?),
            _ => None,
        };
        Ok(Self {
            sys: sys.clone(),
            kind,
            tau,
            k,
            route: Route::Auto,
        })
    }

    pub fn with_route(mut self, route: Route) -> Result<Self> {
        if route == Route::BoundaryPair && self.kind != TripleKind::FullRegular {
            return Err(Error::InvalidInput(
                "the boundary-pair route needs the full regular triple".into(),
            ));
        }
        self.route = route;
        Ok(self)
    }

    pub fn system(&self) -> &CanonicalSystem {
        &self.sys
    }

    pub fn kind(&self) -> TripleKind {
        self.kind
    }

    pub fn tau(&self) -> &TauParameter {
        &self.tau
    }

    /// Size of the values `r(z)`.
    pub fn dim(&self) -> usize {
        self.kind.boundary_dim(self.sys.p())
    }

    pub fn eval(&self, z: C64) -> Result<CMatrix> {
        let route = match self.route {
            Route::Auto if self.kind == TripleKind::FullRegular => Route::LeftPair,
            Route::Auto => Route::RightLft,
            r => r,
        };
        match route {
            Route::RightLft => {
                let w = resolvent_matrix_side(&self.sys, self.kind, Side::Right, z)?;
                lft_right(&w, &self.tau.relation_at(z)?)
            }
            Route::LeftPair => {
                let w = resolvent_matrix_side(&self.sys, self.kind, Side::Left, z)?;
                lft_left(&w, &self.tau.pair_at(z)?)
            }
            Route::BoundaryPair => {
                let (a, b) = self.tau.boundary_pair_at(z)?;
                let u = monodromy(&self.sys, z)?;
                let bu = b * u;
                let j = symplectic_unit(self.sys.p());
                let k = self.k.as_ref().expect("K is computed for the full regular triple");
                Ok(checked_inverse(&(&a + &bu))? * (bu - a) * j + k)
            }
            Route::Auto => unreachable!("resolved above"),
        }
    }
}

/// `r(z)` for the triple and parameter.
pub fn l_resolvent(sys: &CanonicalSystem, kind: TripleKind, tau: &TauParameter, z: C64) -> Result<CMatrix> {
    LResolvent::new(sys, kind, tau.clone())?.eval(z)
}

/// The distribution function σ on `window` recovered from `r` by Stieltjes
/// inversion.
pub fn spectral_function(
    sys: &CanonicalSystem,
    kind: TripleKind,
    tau: &TauParameter,
    window: (f64, f64),
    opts: &StieltjesOptions,
) -> Result<DistributionFunction> {
    let r = LResolvent::new(sys, kind, tau.clone())?;
    stieltjes_invert(|z| r.eval(z), window, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cansys::Segment;
    use crate::herglotz::{kernel_positivity, HerglotzRep};
    use crate::linalg::{c64, identity, max_abs_diff, to_complex};
    use nalgebra::DMatrix;

    fn sample_system() -> CanonicalSystem {
        let h = DMatrix::from_row_slice(2, 2, &[0.7, 0.2, 0.2, 0.3]);
        let f = DMatrix::from_row_slice(2, 2, &[0.5, 0.1, 0.1, 0.0]);
        CanonicalSystem::regular(1, 0.0, vec![Segment::new(1.2, h, f), Segment::free(1, 0.6)]).unwrap()
    }

    #[test]
    fn free_closed_forms() {
        let sys = CanonicalSystem::free(1, 2.0);
        let z = c64(0.4, 0.7);
        let r = l_resolvent(&sys, TripleKind::NeumannLeft, &TauParameter::constant(CMatrix::zeros(1, 1)), z).unwrap();
        assert!((r[(0, 0)] - z.tan()).norm() < 1e-12);
        let r = l_resolvent(&sys, TripleKind::NeumannLeft, &TauParameter::multivalued(1), z).unwrap();
        assert!((r[(0, 0)] + z.cos() / z.sin()).norm() < 1e-12);
        let hl = CanonicalSystem::free_half_line(1);
        let r = l_resolvent(&hl, TripleKind::LimitPoint, &TauParameter::constant(CMatrix::zeros(1, 1)), z).unwrap();
        assert!((r[(0, 0)] - c64(0.0, 1.0)).norm() < 1e-12);
        let r = l_resolvent(&sys, TripleKind::FullRegular, &TauParameter::constant(CMatrix::zeros(2, 2)), z).unwrap();
        let cot = (z / 2.0).cos() / (z / 2.0).sin();
        assert!(max_abs_diff(&r, &(identity(2) * -cot)) < 1e-12);
    }

    #[test]
    fn routes_agree_with_nonzero_k() {
        let sys = sample_system();
        let taus = [
            TauParameter::constant(to_complex(&DMatrix::from_row_slice(2, 2, &[0.3, 0.1, 0.1, -0.2]))),
            TauParameter::constant(CMatrix::zeros(2, 2)),
            TauParameter::BoundaryPair {
                a: DMatrix::identity(2, 2),
                b: DMatrix::identity(2, 2),
            },
        ];
        for tau in taus {
            let base = LResolvent::new(&sys, TripleKind::FullRegular, tau).unwrap();
            for z in [c64(0.3, 0.5), c64(-2.0, 1.5), c64(1.0, -0.7)] {
                let a = base.clone().with_route(Route::LeftPair).unwrap().eval(z).unwrap();
                let b = base.clone().with_route(Route::BoundaryPair).unwrap().eval(z).unwrap();
                let c = base.clone().with_route(Route::RightLft).unwrap().eval(z).unwrap();
                assert!(max_abs_diff(&a, &b) < 1e-10);
                assert!(max_abs_diff(&a, &c) < 1e-10);
            }
        }
    }

    #[test]
    fn l_resolvents_are_herglotz() {
        let sys = sample_system();
        let nodes = [c64(0.0, 1.0), c64(1.0, 0.5), c64(-1.0, 2.0), c64(0.5, 3.0)];
        let rep = HerglotzRep::new(identity(1) * c64(0.2, 0.0), identity(1) * c64(0.5, 0.0), vec![(0.3, identity(1))], None).unwrap();
        let cases = [
            (TripleKind::NeumannLeft, TauParameter::HerglotzFunction(rep)),
            (TripleKind::NeumannLeft, TauParameter::multivalued(1)),
            (TripleKind::FullRegular, TauParameter::constant(CMatrix::zeros(2, 2))),
        ];
        for (kind, tau) in cases {
            let r = LResolvent::new(&sys, kind, tau).unwrap();
            let gram = kernel_positivity(|z| r.eval(z), &nodes).unwrap();
            assert!(gram.certified, "{kind}: {}", gram.min_eigenvalue);
        }
    }

    #[test]
    fn neumann_spectral_function_has_unit_atoms() {
        let sys = CanonicalSystem::free(1, 2.0);
        let tau = TauParameter::constant(CMatrix::zeros(1, 1));
        let sigma = spectral_function(&sys, TripleKind::NeumannLeft, &tau, (0.0, 5.0), &StieltjesOptions::default()).unwrap();
        let atoms = sigma.atoms();
        assert_eq!(atoms.len(), 2);
        for ((l, w), expected) in atoms.iter().zip([0.5, 1.5]) {
            assert!((l - expected * std::f64::consts::PI).abs() < 1e-3);
            assert!((w[(0, 0)].re - 1.0).abs() < 1e-2);
        }
    }
}
