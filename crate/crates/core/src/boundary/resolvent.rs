//! Resolvents of the reference extension `ker Γ₀` and of the extensions
//! `CΓ₀ + DΓ₁ = 0`, applied to test functions.

use std::f64::consts::SQRT_2;

use super::{GammaField, LimitPointSolution, TripleKind};
use crate::cansys::{monodromy, CanonicalSystem, FundamentalSolution};
use crate::error::{Error, Result};
use crate::linalg::{
    blocks, checked_inverse, from_blocks, identity, spectral_inverse, symplectic_unit, CMatrix,
    CVector, C64,
};
use crate::linrel::MatrixPair;
use crate::quadrature::{default_cell, gauss_points, system_scale, TestFunction};

/// Largest cell used when integrating test functions.
const MAX_CELL: f64 = 0.1;

/// Cumulative integrals `∫_a^{t} K(s)ℋ(s)f(s) ds` at each point of `at`, and
/// the integral up to `end`.
fn cumulative<K>(
    sys: &CanonicalSystem,
    z: C64,
    f: &TestFunction,
    at: &[f64],
    end: f64,
    rows: usize,
    kernel: K,
) -> Result<(Vec<CVector>, CVector)>
where
    K: Fn(f64) -> Result<CMatrix>,
{
    let (s0, s1) = f.support();
    let lo = sys.a().max(s0);
    let hi = end.min(s1);
    if f.dim() != sys.n() {
        return Err(Error::InvalidInput(format!(
            "test function has dimension {}, system needs {}",
            f.dim(),
            sys.n()
        )));
    }
    if !hi.is_finite() {
        return Err(Error::QuadratureUnderResolved(
            "test function needs bounded support".into(),
        ));
    }
    let cell = default_cell(system_scale(sys, z)).min(MAX_CELL);
    let piece = |x: f64, y: f64| -> Result<CVector> {
        let mut acc = CVector::zeros(rows);
        for (t, w) in gauss_points(sys, x, y, &[], cell)? {
            acc += kernel(t)? * (sys.weight_at(t)? * f.eval(t)) * C64::new(w, 0.0);
        }
        Ok(acc)
    };
    let mut order: Vec<usize> = (0..at.len()).collect();
    order.sort_by(|&i, &j| at[i].total_cmp(&at[j]));
    let mut results = vec![CVector::zeros(rows); at.len()];
    let mut acc = CVector::zeros(rows);
    let mut prev = sys.a();
    for idx in order {
        let t = at[idx];
        if t > prev {
            acc += piece(prev.max(lo), t.min(hi))?;
            prev = t;
        }
        results[idx] = acc.clone();
    }
    acc += piece(prev.max(lo), hi)?;
    Ok((results, acc))
}

fn as_row(v: CVector) -> CMatrix {
    CMatrix::from_row_slice(1, v.len(), v.as_slice())
}

fn right_end(sys: &CanonicalSystem, f: &TestFunction) -> f64 {
    if sys.is_regular() {
        sys.mesh_end()
    } else {
        f.support().1
    }
}

fn check_points(sys: &CanonicalSystem, at: &[f64]) -> Result<()> {
    for &t in at {
        sys.segment_index(t)?;
    }
    Ok(())
}

/// `γ(z̄)*f`.
pub fn gamma_adjoint_apply(
    sys: &CanonicalSystem,
    kind: TripleKind,
    z: C64,
    f: &TestFunction,
) -> Result<CVector> {
    kind.check(sys)?;
    let end = right_end(sys, f);
    match kind {
        TripleKind::FullRegular => {
            let fs = FundamentalSolution::new(sys, z);
            let (_, total) = cumulative(sys, z, f, &[], end, sys.n(), |t| fs.eval_sharp(t))?;
            let u = monodromy(sys, z)?;
            let inv = spectral_inverse(&(identity(sys.n()) + u.transpose()), z)?;
            Ok(inv * total * C64::new(SQRT_2, 0.0))
        }
        TripleKind::NeumannLeft => {
            let fs = FundamentalSolution::new(sys, z);
            let (_, total) = cumulative(sys, z, f, &[], end, sys.p(), |t| Ok(fs.c(t)?.transpose()))?;
            let (_, _, c2, _) = blocks(&monodromy(sys, z)?, sys.p());
            Ok(spectral_inverse(&c2.transpose(), z)? * total)
        }
        TripleKind::LimitPoint => {
            let lp = LimitPointSolution::new(sys, z)?;
            let (_, total) = cumulative(sys, z, f, &[], end, 1, |t| Ok(as_row(lp.y(t)?)))?;
            Ok(total)
        }
    }
}

/// `(A₀ − z)⁻¹f` at the points `at`, where `A₀` is the extension `Γ₀f = 0`.
pub fn canonical_resolvent(
    sys: &CanonicalSystem,
    kind: TripleKind,
    z: C64,
    f: &TestFunction,
    at: &[f64],
) -> Result<Vec<CVector>> {
    kind.check(sys)?;
    check_points(sys, at)?;
    let end = right_end(sys, f);
    let n = sys.n();
    let p = sys.p();
    let j = symplectic_unit(p);
    match kind {
        TripleKind::FullRegular => {
            let fs = FundamentalSolution::new(sys, z);
            let (partial, total) = cumulative(sys, z, f, at, end, n, |t| fs.eval_sharp(t))?;
            let m = GammaField::new(sys, kind, z)?.weyl().clone();
            let fixed = &j * &total - &j * m * &j * &total;
            at.iter()
                .zip(partial)
                .map(|(&t, it)| {
                    let inner = &fixed - &j * it * C64::new(2.0, 0.0);
                    Ok(fs.eval(t)? * inner * C64::new(0.5, 0.0))
                })
                .collect()
        }
        TripleKind::NeumannLeft => {
            let fs = FundamentalSolution::new(sys, z);
            let (partial, total) = cumulative(sys, z, f, at, end, n, |t| fs.eval_sharp(t))?;
            let (_, _, c2, s2) = blocks(&monodromy(sys, z)?, p);
            let c2inv = spectral_inverse(&c2, z)?;
            let zero = CMatrix::zeros(p, p);
            let d = from_blocks(
                &(-identity(p)),
                &(c2inv * s2 * C64::new(-2.0, 0.0)),
                &zero,
                &identity(p),
            );
            let fixed = (identity(n) - d) * &j * &total;
            at.iter()
                .zip(partial)
                .map(|(&t, it)| {
                    let inner = &fixed - &j * it * C64::new(2.0, 0.0);
                    Ok(fs.eval(t)? * inner * C64::new(0.5, 0.0))
                })
                .collect()
        }
        TripleKind::LimitPoint => {
            let lp = LimitPointSolution::new(sys, z)?;
            let (c_part, _) = cumulative(sys, z, f, at, end, 1, |t| Ok(as_row(lp.c(t)?)))?;
            let (y_part, y_total) = cumulative(sys, z, f, at, end, 1, |t| Ok(as_row(lp.y(t)?)))?;
            at.iter()
                .zip(c_part.iter().zip(&y_part))
                .map(|(&t, (ci, yi))| {
                    let rest = y_total[0] - yi[0];
                    Ok(-lp.y(t)? * ci[0] - lp.c(t)? * rest)
                })
                .collect()
        }
    }
}

/// Resolvent of the extension `CΓ₀f + DΓ₁f = 0` by the Krein formula
/// `(A₀ − z)⁻¹ − γ(z)(C + DM(z))⁻¹Dγ(z̄)*`.
pub fn extension_resolvent(
    sys: &CanonicalSystem,
    kind: TripleKind,
    pair: &MatrixPair,
    z: C64,
    f: &TestFunction,
    at: &[f64],
) -> Result<Vec<CVector>> {
    let gamma = GammaField::new(sys, kind, z)?;
    let base = canonical_resolvent(sys, kind, z, f, at)?;
    let phi = gamma_adjoint_apply(sys, kind, z, f)?;
    let den = &pair.c + &pair.d * gamma.weyl();
    let h = checked_inverse(&den)? * (&pair.d * phi);
    at.iter()
        .zip(base)
        .map(|(&t, g)| Ok(g - gamma.at(t)? * &h))
        .collect()
}

/// Resolvent of the extension `CΓ₀f + DΓ₁f = 0` of the full regular triple
/// by solving the boundary-value problem directly.
pub fn extension_resolvent_direct(
    sys: &CanonicalSystem,
    pair: &MatrixPair,
    z: C64,
    f: &TestFunction,
    at: &[f64],
) -> Result<Vec<CVector>> {
    TripleKind::FullRegular.check(sys)?;
    check_points(sys, at)?;
    let n = sys.n();
    let j = symplectic_unit(sys.p());
    let fs = FundamentalSolution::new(sys, z);
    let (partial, total) = cumulative(sys, z, f, at, sys.mesh_end(), n, |t| fs.eval_sharp(t))?;
    let u = monodromy(sys, z)?;
    let lhs = &pair.c * (identity(n) + &u) - &pair.d * &j * (identity(n) - &u);
    let rhs = (&pair.c + &pair.d * &j) * &u * &j * total;
    let v = spectral_inverse(&lhs, z)? * rhs;
    at.iter()
        .zip(partial)
        .map(|(&t, it)| Ok(fs.eval(t)? * (&v - &j * it)))
        .collect()
}
