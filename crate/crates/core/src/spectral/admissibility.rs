//! Three-valued admissibility verdicts from the decay of `‖·‖/y` along `iy`.

use serde::Serialize;

use super::TauParameter;
use crate::boundary::TripleKind;
use crate::cansys::{detect_indivisible, propagator, CanonicalSystem, IndivisibleRun};
use crate::error::{Error, Result};
use crate::jmoebius::lft_left;
use crate::linrel::MatrixPair;
use crate::linalg::{
    checked_inverse, identity, op_norm, qr_orthonormalize, symplectic_unit, vstack,
    CMatrix, C64,
};

/// Sample points `y = 10^{1 + k/2}`, `k = 0, …, 10`.
pub const ADMISSIBILITY_GRID: [f64; 11] = [
    1e1, 3.162_277_660_168_379_5e1, 1e2, 3.162_277_660_168_379_5e2, 1e3, 3.162_277_660_168_379_5e3,
    1e4, 3.162_277_660_168_379_5e4, 1e5, 3.162_277_660_168_379_5e5, 1e6,
];

/// Largest value of `y·h` for one propagation substep.
const MAX_GROWTH: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Admissible,
    Inadmissible,
    Indeterminate,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Admissible => "admissible",
            Self::Inadmissible => "inadmissible",
            Self::Indeterminate => "indeterminate",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub verdict: Verdict,
    pub criterion: String,
    /// `(y, ‖criterion(iy)‖/y)`.
    pub samples: Vec<(f64, f64)>,
}

/// Verdict from sampled ratios: admissible when the last four ratios are
/// non-increasing and the last is below 1e−3; inadmissible when a ratio is
/// not finite or the last exceeds 1e−2 without decaying by half over the last
/// four samples; indeterminate otherwise.
pub fn classify_ratios(samples: &[(f64, f64)]) -> Verdict {
    let r: Vec<f64> = samples.iter().map(|s| s.1).collect();
    if r.iter().any(|x| !x.is_finite()) {
        return Verdict::Inadmissible;
    }
    if r.len() < 4 {
        return Verdict::Indeterminate;
    }
    let tail = &r[r.len() - 4..];
    let last = tail[3];
    if tail.windows(2).all(|w| w[1] <= w[0]) && last < 1e-3 {
        return Verdict::Admissible;
    }
    if last > 1e-2 && !(last < 0.5 * tail[0]) {
        return Verdict::Inadmissible;
    }
    Verdict::Indeterminate
}

/// Orthonormal basis of the graph `ran col{X, Y}` of `U(b, iy)`, or of
/// `ran U(b, iy)·col{I, 0}` when `neumann`, propagated with renormalization.
fn propagated_basis(sys: &CanonicalSystem, y: f64, neumann: bool) -> CMatrix {
    let n = sys.n();
    let p = sys.p();
    let z = C64::new(0.0, y);
    // Columns: for the graph, [X; Y] with Y propagated; for Neumann, V.
    let mut basis = if neumann {
        vstack(&identity(p), &CMatrix::zeros(p, p))
    } else {
        vstack(&identity(n), &identity(n))
    };
    for seg in sys.segments() {
        let substeps = ((seg.length * y / MAX_GROWTH).ceil() as usize).max(1);
        let h = seg.length / substeps as f64;
        let step = propagator(seg, z, h);
        for _ in 0..substeps {
            basis = if neumann {
                qr_orthonormalize(&(&step * &basis))
            } else {
                let top = basis.rows(0, n).into_owned();
                let bottom = &step * basis.rows(n, n);
                qr_orthonormalize(&vstack(&top, &bottom))
            };
        }
    }
    basis
}

fn full_regular_ratio(sys: &CanonicalSystem, tau: &TauParameter, y: f64) -> Result<f64> {
    let n = sys.n();
    let z = C64::new(0.0, y);
    let (a, b) = tau.boundary_pair_at(z)?;
    let basis = propagated_basis(sys, y, false);
    let x = basis.rows(0, n).into_owned();
    let u = basis.rows(n, n).into_owned();
    let j = symplectic_unit(sys.p());
    let Ok(inv) = checked_inverse(&(&a * &x + &b * &u)) else {
        return Ok(f64::INFINITY);
    };
    let half = C64::new(0.5, 0.0);
    let adm1 = (&x + &u) * &inv * (&a - &b) * &j * half;
    let adm2 = -(&j * (&x - &u) * &inv * (&a + &b)) * half;
    Ok(op_norm(&adm1).max(op_norm(&adm2)) / y)
}

fn neumann_ratio(sys: &CanonicalSystem, tau: &TauParameter, y: f64) -> Result<f64> {
    let p = sys.p();
    let pair = tau.pair_at(C64::new(0.0, y))?;
    let v = propagated_basis(sys, y, true);
    let v1 = v.rows(0, p).into_owned();
    let v2 = v.rows(p, p).into_owned();
    let Ok(inv) = checked_inverse(&(&pair.c * &v2 + &pair.d * &v1)) else {
        return Ok(f64::INFINITY);
    };
    let adm1 = &v2 * &inv * &pair.d;
    let adm2 = &v1 * &inv * &pair.c;
    Ok(op_norm(&adm1).max(op_norm(&adm2)) / y)
}

/// `(sin ψ·τ + cos ψ)(−cos ψ·τ + sin ψ)⁻¹` at `iy` for τ = D⁻¹C (p = 1).
fn type_ratio(tau: &TauParameter, psi: f64, y: f64) -> Result<f64> {
    let pair = tau.pair_at(C64::new(0.0, y))?;
    let (c, d) = (pair.c[(0, 0)], pair.d[(0, 0)]);
    let (s, co) = psi.sin_cos();
    let num = c * s + d * co;
    let den = -c * co + d * s;
    if den.norm() <= 1e-14 * (c.norm() + d.norm()) {
        return Ok(f64::INFINITY);
    }
    Ok((num / den).norm() / y)
}

fn endpoint_run(sys: &CanonicalSystem, kind: TripleKind) -> Result<Option<IndivisibleRun>> {
    let runs = detect_indivisible(sys)?;
    Ok(match kind {
        TripleKind::NeumannLeft => runs.into_iter().find(|r| r.at_right),
        TripleKind::LimitPoint => runs.into_iter().find(|r| r.at_left),
        TripleKind::FullRegular => None,
    })
}

fn report(criterion: String, ratio: impl Fn(f64) -> Result<f64>) -> Result<AdmissibilityReport> {
    let samples = ADMISSIBILITY_GRID
        .iter()
        .map(|&y| Ok((y, ratio(y)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(AdmissibilityReport {
        verdict: classify_ratios(&samples),
        criterion,
        samples,
    })
}

/// Classify τ as admissible, inadmissible or indeterminate for the triple.
pub fn admissibility_test(sys: &CanonicalSystem, kind: TripleKind, tau: &TauParameter) -> Result<AdmissibilityReport> {
    kind.check(sys)?;
    tau.validate(sys, kind)?;
    match kind {
        TripleKind::FullRegular => report(
            "max(‖(X+Y)(AX+BY)⁻¹(A−B)𝒥/2‖, ‖𝒥(X−Y)(AX+BY)⁻¹(A+B)/2‖)/y".into(),
            |y| full_regular_ratio(sys, tau, y),
        ),
        TripleKind::NeumannLeft if sys.p() > 1 => report(
            "max(‖c₂(Cc₂+Dc₁)⁻¹D‖, ‖c₁(Cc₂+Dc₁)⁻¹C‖)/y".into(),
            |y| neumann_ratio(sys, tau, y),
        ),
        TripleKind::NeumannLeft | TripleKind::LimitPoint => match endpoint_run(sys, kind)? {
            None => Ok(AdmissibilityReport {
                verdict: Verdict::Admissible,
                criterion: "no indivisible interval at the endpoint".into(),
                samples: Vec::new(),
            }),
            Some(run) => {
                let psi = run.psi;
                report(
                    format!("|(sin ψ·τ + cos ψ)/(−cos ψ·τ + sin ψ)|/y with ψ = {psi}"),
                    |y| type_ratio(tau, psi, y),
                )
            }
        },
    }
}

/// Coordinate change `Γ' = XΓ` for a regular system with indivisible
/// intervals of type π/2 at both ends. It satisfies `X𝒥Xᵀ = 2𝒥`; the scalar
/// factor does not affect linear-fractional transforms.
pub const DOUBLE_END_X: [[f64; 4]; 4] = [
    [0.0, -1.0, -1.0, 0.0],
    [0.0, 1.0, -1.0, 0.0],
    [1.0, 0.0, 0.0, -1.0],
    [1.0, 0.0, 0.0, 1.0],
];

/// The full-triple parameter `τ = T_X[ε]` for a constant 2×2 `ε` in the
/// coordinates of [`DOUBLE_END_X`]. Only constant `ε` is supported.
pub fn double_end_tau(eps: &CMatrix) -> Result<TauParameter> {
    if eps.shape() != (2, 2) {
        return Err(Error::InvalidInput("ε must be 2×2".into()));
    }
    let x = CMatrix::from_fn(4, 4, |r, c| C64::new(DOUBLE_END_X[r][c], 0.0));
    let tau = lft_left(&x, &MatrixPair::new(eps.clone(), identity(2)))?;
    Ok(TauParameter::constant(tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cansys::Segment;
    use crate::herglotz::HerglotzRep;
    use crate::linalg::to_complex;
    use nalgebra::DMatrix;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn with_end_run(psi: Option<f64>) -> CanonicalSystem {
        let mut segs = vec![Segment::free(1, 1.0)];
        if let Some(psi) = psi {
            segs.push(Segment::indivisible(0.5, psi));
        }
        CanonicalSystem::regular(1, 0.0, segs).unwrap()
    }

    fn linear() -> TauParameter {
        TauParameter::HerglotzFunction(HerglotzRep::new(CMatrix::zeros(1, 1), identity(1), Vec::new(), None).unwrap())
    }

    #[test]
    fn ratio_classification() {
        let decay: Vec<(f64, f64)> = ADMISSIBILITY_GRID.iter().map(|&y| (y, 1.0 / y)).collect();
        assert_eq!(classify_ratios(&decay), Verdict::Admissible);
        let flat: Vec<(f64, f64)> = ADMISSIBILITY_GRID.iter().map(|&y| (y, 1.0)).collect();
        assert_eq!(classify_ratios(&flat), Verdict::Inadmissible);
        let slow: Vec<(f64, f64)> = ADMISSIBILITY_GRID.iter().map(|&y| (y, 0.1 / y.ln())).collect();
        assert_eq!(classify_ratios(&slow), Verdict::Indeterminate);
        assert_eq!(classify_ratios(&[(1.0, f64::NAN)]), Verdict::Inadmissible);
    }

    #[test]
    fn endpoint_type_dispatch() {
        let zero = TauParameter::constant(CMatrix::zeros(1, 1));
        let one = TauParameter::constant(identity(1));
        let kind = TripleKind::NeumannLeft;
        let v = |sys: &CanonicalSystem, tau: &TauParameter| admissibility_test(sys, kind, tau).unwrap().verdict;
        assert_eq!(v(&with_end_run(None), &zero), Verdict::Admissible);
        assert_eq!(v(&with_end_run(None), &linear()), Verdict::Admissible);
        assert_eq!(v(&with_end_run(Some(0.0)), &zero), Verdict::Inadmissible);
        assert_eq!(v(&with_end_run(Some(FRAC_PI_4)), &zero), Verdict::Admissible);
        assert_eq!(v(&with_end_run(Some(FRAC_PI_4)), &one), Verdict::Inadmissible);
        assert_eq!(v(&with_end_run(Some(FRAC_PI_2)), &zero), Verdict::Admissible);
        assert_eq!(v(&with_end_run(Some(FRAC_PI_2)), &linear()), Verdict::Inadmissible);
    }

    #[test]
    fn full_regular_constant_parameters() {
        let sys = CanonicalSystem::free(1, 2.0);
        let tau = TauParameter::constant(to_complex(&DMatrix::from_row_slice(2, 2, &[0.5, 0.1, 0.1, -0.3])));
        let rep = admissibility_test(&sys, TripleKind::FullRegular, &tau).unwrap();
        assert_eq!(rep.verdict, Verdict::Admissible, "{:?}", rep.samples);
        assert_eq!(rep.samples.len(), 11);
    }

    #[test]
    fn neumann_block_case() {
        let sys = CanonicalSystem::free(2, 2.0);
        let rep = admissibility_test(&sys, TripleKind::NeumannLeft, &TauParameter::constant(CMatrix::zeros(2, 2))).unwrap();
        assert_eq!(rep.verdict, Verdict::Admissible, "{:?}", rep.samples);
    }

    #[test]
    fn report_serializes() {
        let sys = with_end_run(Some(FRAC_PI_2));
        let rep = admissibility_test(&sys, TripleKind::NeumannLeft, &linear()).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"verdict\":\"inadmissible\""));
    }

    #[test]
    fn double_end_coordinates() {
        let x = CMatrix::from_fn(4, 4, |r, c| C64::new(DOUBLE_END_X[r][c], 0.0));
        let j = symplectic_unit(2);
        assert!((&x * &j * x.transpose() - &j * C64::new(2.0, 0.0)).norm() < 1e-15);
        let eps = to_complex(&DMatrix::from_row_slice(2, 2, &[0.3, 0.1, 0.1, -0.2]));
        let TauParameter::ConstantRelation { c, .. } = double_end_tau(&eps).unwrap() else {
            panic!("constant parameter expected");
        };
        assert!((&c - c.adjoint()).norm() < 1e-12);
        // Independent evaluation of (εw₁₂ + w₂₂)⁻¹(εw₁₁ + w₂₁).
        let expected = DMatrix::from_row_slice(2, 2, &[-20.0 / 3.0, 5.0 / 3.0, 5.0 / 3.0, -7.0 / 15.0]);
        assert!((c - to_complex(&expected)).norm() < 1e-12);
    }
}
