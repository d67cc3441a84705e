//! The Fourier transform on `L²(σ)`, its inverse, and the Parseval and Bessel
//! checks.

use rayon::prelude::*;

use crate::boundary::{fourier_kernel_values, fourier_transform, FourierSetup};
use crate::cansys::{detect_indivisible, CanonicalSystem, IndivisibleRun};
use crate::error::{Error, Result};
use crate::herglotz::DistributionFunction;
use crate::linalg::{CMatrix, CVector, C64};
use crate::quadrature::{gauss_points, TestFunction};

/// Largest spacing of the density samples used in `L²(σ)` integrals.
const AC_STEP: f64 = 0.02;

/// Density mass below this fraction of the point mass is dropped.
const AC_NEGLIGIBLE: f64 = 1e-9;

/// Largest cell for `L²(ℋ)` integrals.
const MAX_CELL: f64 = 0.05;

/// A function on the support of σ: values at the point masses and at the
/// density sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector {
    pub atoms: Vec<(f64, CVector)>,
    pub ac: Vec<(f64, CVector)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParsevalReport {
    /// `⟨f, g⟩` in `L²(ℋ)` after projecting out the multivalued part.
    pub lhs: C64,
    /// `⟨𝓕f, 𝓕g⟩` in `L²(σ)`.
    pub rhs: C64,
    /// `|lhs − rhs| / |lhs|` (absolute when `lhs = 0`).
    pub defect: f64,
}

fn trace_norm_mass(sigma: &DistributionFunction) -> (f64, f64) {
    let atoms: f64 = sigma.atoms().iter().map(|(_, w)| w.trace().re.abs()).sum();
    let grid = sigma.ac_grid();
    let dens = sigma.ac_density();
    let ac: f64 = grid
        .windows(2)
        .zip(dens.windows(2))
        .map(|(x, d)| 0.5 * (x[1] - x[0]) * (d[0].trace().re.abs() + d[1].trace().re.abs()))
        .sum();
    (atoms, ac)
}

/// Indices of the density samples kept for `L²(σ)` integrals, or none when
/// the density is negligible.
fn ac_indices(sigma: &DistributionFunction) -> Vec<usize> {
    let (atoms, ac) = trace_norm_mass(sigma);
    let grid = sigma.ac_grid();
    if grid.len() < 2 || ac <= AC_NEGLIGIBLE * atoms {
        return Vec::new();
    }
    let h = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
    let stride = ((AC_STEP / h).floor() as usize).max(1);
    let mut idx: Vec<usize> = (0..grid.len()).step_by(stride).collect();
    if idx.last() != Some(&(grid.len() - 1)) {
        idx.push(grid.len() - 1);
    }
    idx
}

/// `𝓕f` sampled on the support of σ.
pub fn fourier_on_sigma(
    sys: &CanonicalSystem,
    setup: &FourierSetup,
    sigma: &DistributionFunction,
    f: &TestFunction,
) -> Result<SpectralVector> {
    let dim = setup.dim(sys.p());
    if sigma.p() != dim {
        return Err(Error::InvalidInput(format!(
            "σ has size {}, the transform has {dim} components",
            sigma.p()
        )));
    }
    let grid = sigma.ac_grid();
    let transform = |l: f64| fourier_transform(sys, setup, l, f).map(|v| (l, v));
    let atoms = sigma
        .atoms()
        .par_iter()
        .map(|(l, _)| transform(*l))
        .collect::<Result<Vec<_>>>()?;
    let ac = ac_indices(sigma)
        .par_iter()
        .map(|&k| transform(grid[k]))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralVector { atoms, ac })
}

/// Linear interpolation of the density of σ.
fn density_at(sigma: &DistributionFunction, lambda: f64) -> CMatrix {
    let grid = sigma.ac_grid();
    let dens = sigma.ac_density();
    match grid.iter().position(|&x| x >= lambda) {
        Some(0) => dens[0].clone(),
        Some(k) => {
            let s = (lambda - grid[k - 1]) / (grid[k] - grid[k - 1]);
            &dens[k - 1] * C64::new(1.0 - s, 0.0) + &dens[k] * C64::new(s, 0.0)
        }
        None => dens.last().cloned().unwrap_or_else(|| CMatrix::zeros(sigma.p(), sigma.p())),
    }
}

/// Trapezoid weights for the (possibly non-uniform) abscissas `xs`.
fn trapezoid_weights(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    if n < 2 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|k| {
            let left = if k > 0 { xs[k] - xs[k - 1] } else { 0.0 };
            let right = if k + 1 < n { xs[k + 1] - xs[k] } else { 0.0 };
            0.5 * (left + right)
        })
        .collect()
}

/// `⟨F, G⟩ = ∫ G(λ)* dσ(λ) F(λ)` for vectors sampled by [`fourier_on_sigma`].
pub fn spectral_inner(sigma: &DistributionFunction, f: &SpectralVector, g: &SpectralVector) -> Result<C64> {
    if f.atoms.len() != sigma.atoms().len() || g.atoms.len() != f.atoms.len() || g.ac.len() != f.ac.len() {
        return Err(Error::InvalidInput("spectral vectors do not match σ".into()));
    }
    let mut acc = C64::new(0.0, 0.0);
    for (((_, w), (_, fv)), (_, gv)) in sigma.atoms().iter().zip(&f.atoms).zip(&g.atoms) {
        acc += (gv.adjoint() * w * fv)[(0, 0)];
    }
    let xs: Vec<f64> = f.ac.iter().map(|(l, _)| *l).collect();
    for (wt, ((l, fv), (_, gv))) in trapezoid_weights(&xs).into_iter().zip(f.ac.iter().zip(&g.ac)) {
        acc += (gv.adjoint() * density_at(sigma, *l) * fv)[(0, 0)] * wt;
    }
    Ok(acc)
}

fn range(sys: &CanonicalSystem, f: &TestFunction) -> Result<(f64, f64)> {
    let (s0, s1) = f.support();
    let lo = sys.a().max(s0);
    let hi = if sys.is_regular() { sys.mesh_end().min(s1) } else { s1 };
    if !hi.is_finite() {
        return Err(Error::QuadratureUnderResolved(
            "test function needs bounded support".into(),
        ));
    }
    Ok((lo, hi))
}

/// `⟨f, g⟩` in `L²(ℋ)` with both functions replaced by their means on
/// indivisible intervals (p = 1).
fn projected_inner(sys: &CanonicalSystem, f: &TestFunction, g: &TestFunction) -> Result<C64> {
    let (f0, f1) = range(sys, f)?;
    let (g0, g1) = range(sys, g)?;
    let runs: Vec<IndivisibleRun> = if sys.p() == 1 {
        detect_indivisible(sys)?
    } else {
        Vec::new()
    };
    let in_run = |t: f64| runs.iter().any(|r| t > r.start && t < r.end);
    let breaks: Vec<f64> = runs.iter().flat_map(|r| [r.start, r.end]).filter(|x| x.is_finite()).collect();
    let mut acc = C64::new(0.0, 0.0);
    let (lo, hi) = (f0.max(g0), f1.min(g1));
    for (t, w) in gauss_points(sys, lo, hi, &breaks, MAX_CELL)? {
        if !in_run(t) {
            acc += (g.eval(t).adjoint() * sys.weight_at(t)? * f.eval(t))[(0, 0)] * w;
        }
    }
    for run in runs.iter().filter(|r| r.end.is_finite()) {
        // ℋ = h(t)ξξᵀ on the run; project onto ξ·const in the h-weighted space.
        let (s, c) = run.psi.sin_cos();
        let xi = CVector::from_vec(vec![C64::new(c, 0.0), C64::new(s, 0.0)]);
        let (mut mass, mut fi, mut gi) = (0.0, C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for (t, w) in gauss_points(sys, run.start, run.end, &[f0, f1, g0, g1], MAX_CELL)? {
            let h = sys.weight_at(t)?.trace().re;
            mass += h * w;
            fi += xi.dot(&f.eval(t)) * h * w;
            gi += xi.dot(&g.eval(t)) * h * w;
        }
        if mass > 0.0 {
            acc += gi.conj() * fi / mass;
        }
    }
    Ok(acc)
}

/// Compare `⟨f, g⟩` in `L²(ℋ)` with `⟨𝓕f, 𝓕g⟩` in `L²(σ)`.
pub fn parseval_check(
    sys: &CanonicalSystem,
    setup: impl Into<FourierSetup>,
    sigma: &DistributionFunction,
    f: &TestFunction,
    g: &TestFunction,
) -> Result<ParsevalReport> {
    let setup = setup.into();
    let lhs = projected_inner(sys, f, g)?;
    let ff = fourier_on_sigma(sys, &setup, sigma, f)?;
    let gg = if std::ptr::eq(f, g) {
        ff.clone()
    } else {
        fourier_on_sigma(sys, &setup, sigma, g)?
    };
    let rhs = spectral_inner(sigma, &ff, &gg)?;
    let diff = (lhs - rhs).norm();
    let defect = if lhs.norm() > 0.0 { diff / lhs.norm() } else { diff };
    Ok(ParsevalReport { lhs, rhs, defect })
}

/// `‖𝓕f‖²` in `L²(σ)` against `‖f‖²` in `L²(ℋ)`; the inequality holds for
/// any σ covering only part of the spectrum.
pub fn bessel_check(
    sys: &CanonicalSystem,
    setup: impl Into<FourierSetup>,
    sigma: &DistributionFunction,
    f: &TestFunction,
) -> Result<(f64, f64, bool)> {
    let report = parseval_check(sys, setup, sigma, f, f)?;
    let (lhs, rhs) = (report.lhs.re, report.rhs.re);
    Ok((lhs, rhs, rhs <= lhs * (1.0 + 1e-6) + 1e-14))
}

/// `(𝓕*F)(t) = ∫ Φ(t, λ) dσ(λ) F(λ)` at the points `at`.
pub fn inverse_fourier(
    sys: &CanonicalSystem,
    setup: &FourierSetup,
    sigma: &DistributionFunction,
    f: &SpectralVector,
    at: &[f64],
) -> Result<Vec<CVector>> {
    if f.atoms.len() != sigma.atoms().len() {
        return Err(Error::InvalidInput("spectral vector does not match σ".into()));
    }
    let xs: Vec<f64> = f.ac.iter().map(|(l, _)| *l).collect();
    let mut terms: Vec<(f64, CVector)> = sigma
        .atoms()
        .iter()
        .zip(&f.atoms)
        .map(|((l, w), (_, v))| (*l, w * v))
        .collect();
    for (wt, (l, v)) in trapezoid_weights(&xs).into_iter().zip(&f.ac) {
        terms.push((*l, density_at(sigma, *l) * v * C64::new(wt, 0.0)));
    }
    let parts = terms
        .par_iter()
        .map(|(l, v)| {
            let kernels = fourier_kernel_values(sys, setup, *l, at)?;
            Ok(kernels.iter().map(|k| k * v).collect::<Vec<CVector>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![CVector::zeros(sys.n()); at.len()];
    for part in parts {
        for (o, v) in out.iter_mut().zip(part) {
            *o += v;
        }
    }
    Ok(out)
}

/// [`inverse_fourier`] as a test function supported on `support`.
pub fn inverse_fourier_fn(
    sys: &CanonicalSystem,
    setup: &FourierSetup,
    sigma: &DistributionFunction,
    f: &SpectralVector,
    support: (f64, f64),
) -> TestFunction {
    let (sys, setup, sigma, f) = (sys.clone(), *setup, sigma.clone(), f.clone());
    TestFunction::new(sys.n(), support, move |t| {
        inverse_fourier(&sys, &setup, &sigma, &f, &[t])
            .map(|mut v| v.remove(0))
            .unwrap_or_else(|_| CVector::from_element(sys.n(), C64::new(f64::NAN, 0.0)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::TripleKind;
    use crate::cansys::Segment;
    use crate::herglotz::StieltjesOptions;
    use crate::linalg::{c64, identity};
    use crate::spectral::{spectral_function, TauParameter};
    use std::f64::consts::PI;

    fn bump(center: f64, width: f64, v: [f64; 2]) -> TestFunction {
        TestFunction::new(2, (center - 6.0 * width, center + 6.0 * width), move |t| {
            let e = (-((t - center) / width).powi(2) / 2.0).exp();
            CVector::from_vec(vec![c64(v[0] * e, 0.0), c64(v[1] * e, 0.0)])
        })
    }

    /// Neumann eigenvalues of the free system on [0, 2] are (k + ½)π with
    /// unit masses, so σ is known exactly.
    fn exact_neumann_sigma(window: f64) -> DistributionFunction {
        let atoms = (-40..40)
            .map(|k| (k as f64 + 0.5) * PI)
            .filter(|l| l.abs() < window)
            .map(|l| (l, identity(1)))
            .collect();
        DistributionFunction::atomic(1, (-window, window), atoms).unwrap()
    }

    #[test]
    fn parseval_with_exact_sigma() {
        let sys = CanonicalSystem::free(1, 2.0);
        let sigma = exact_neumann_sigma(80.0);
        let f = bump(1.0, 0.15, [1.0, 0.5]);
        let g = bump(0.9, 0.2, [0.3, -1.0]);
        for (a, b) in [(&f, &f), (&f, &g)] {
            let r = parseval_check(&sys, TripleKind::NeumannLeft, &sigma, a, b).unwrap();
            assert!(r.defect < 1e-6, "{r:?}");
        }
    }

    #[test]
    fn bessel_holds_for_partial_sigma() {
        let sys = CanonicalSystem::free(1, 2.0);
        let sigma = exact_neumann_sigma(5.0);
        let f = bump(1.0, 0.15, [1.0, 0.5]);
        let (lhs, rhs, ok) = bessel_check(&sys, TripleKind::NeumannLeft, &sigma, &f).unwrap();
        assert!(ok && rhs < lhs);
    }

    #[test]
    fn indivisible_interval_is_projected_to_its_mean() {
        let sys = CanonicalSystem::regular(1, 0.0, vec![Segment::free(1, 2.0), Segment::indivisible(1.0, 0.0)]).unwrap();
        // f = (t − 2.5)·ξ₀ on the run has mean zero, so it is invisible.
        let f = TestFunction::new(2, (2.0, 3.0), |t| CVector::from_vec(vec![c64(t - 2.5, 0.0), c64(0.0, 0.0)]));
        assert!(projected_inner(&sys, &f, &f).unwrap().norm() < 1e-14);
        let g = TestFunction::new(2, (2.0, 3.0), |_| CVector::from_vec(vec![c64(2.0, 0.0), c64(7.0, 0.0)]));
        assert!((projected_inner(&sys, &g, &g).unwrap().re - 4.0).abs() < 1e-12);
    }

    #[test]
    fn parseval_with_recovered_sigma() {
        let sys = CanonicalSystem::free(1, 2.0);
        let tau = TauParameter::constant(CMatrix::zeros(1, 1));
        let sigma = spectral_function(&sys, TripleKind::NeumannLeft, &tau, (-20.0, 20.0), &StieltjesOptions::default()).unwrap();
        let f = bump(1.0, 0.3, [1.0, 0.0]);
        let r = parseval_check(&sys, TripleKind::NeumannLeft, &sigma, &f, &f).unwrap();
        assert!(r.defect < 1e-2, "{r:?}");
    }

    #[test]
    fn inverse_transform_recovers_eigenfunction() {
        let sys = CanonicalSystem::free(1, 2.0);
        let sigma = exact_neumann_sigma(5.0);
        let setup = FourierSetup::new(TripleKind::NeumannLeft);
        // F = indicator of the atom at π/2 gives f = c(·, π/2).
        let f = SpectralVector {
            atoms: sigma
                .atoms()
                .iter()
                .map(|(l, _)| (*l, CVector::from_element(1, c64(if (*l - PI / 2.0).abs() < 1e-9 { 1.0 } else { 0.0 }, 0.0))))
                .collect(),
            ac: Vec::new(),
        };
        let at = [0.3, 1.1];
        let got = inverse_fourier(&sys, &setup, &sigma, &f, &at).unwrap();
        for (t, v) in at.iter().zip(got) {
            let a = PI / 2.0 * t / 2.0;
            assert!((v[0] - c64(a.cos(), 0.0)).norm() < 1e-12);
            assert!((v[1] - c64(-a.sin(), 0.0)).norm() < 1e-12);
        }
    }
}
