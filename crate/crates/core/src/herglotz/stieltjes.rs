use rayon::prelude::*;

use super::DistributionFunction;
use crate::error::{Error, Result};
use crate::linalg::{imag_part, max_eigenvalue, min_eigenvalue, CMatrix, C64};

/// Controls for [`stieltjes_invert`].
#[derive(Debug, Clone)]
pub struct StieltjesOptions {
    /// Target grid step; adjusted down so the window holds an even number of cells.
    pub step: f64,
    /// Decreasing distances from the real axis used for extrapolation.
    pub eps_seq: Vec<f64>,
    /// Smallest point mass the caller expects to resolve.
    pub min_jump: f64,
    /// Candidates closer than this many grid steps are merged.
    pub merge_radius: usize,
}

impl Default for StieltjesOptions {
    fn default() -> Self {
        Self {
            step: 1e-3,
            eps_seq: vec![1e-2, 5e-3, 2.5e-3],
            min_jump: 1e-2,
            merge_radius: 3,
        }
    }
}

impl StieltjesOptions {
    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::InvalidInput("grid step must be positive".into()));
        }
        if self.eps_seq.is_empty()
            || self.eps_seq.iter().any(|&e| !(e > 0.0))
            || self.eps_seq.windows(2).any(|w| w[1] >= w[0])
        {
            return Err(Error::InvalidInput(
                "eps_seq must be a non-empty strictly decreasing list of positive numbers".into(),
            ));
        }
        if !(self.min_jump > 0.0) {
            return Err(Error::InvalidInput("min_jump must be positive".into()));
        }
        Ok(())
    }

    fn threshold(&self) -> f64 {
        0.1 * self.min_jump
    }
}

/// Polynomial extrapolation to `x = 0` through all points (Neville). Returns
/// the extrapolated value and the estimate from all but the coarsest point.
pub fn neville_at_zero(xs: &[f64], ys: &[CMatrix]) -> (CMatrix, CMatrix) {
    let m = xs.len();
    assert!(m >= 1 && m == ys.len());
    if m == 1 {
        return (ys[0].clone(), ys[0].clone());
    }
    let mut p: Vec<CMatrix> = ys.to_vec();
    let mut finest_subset = ys[m - 1].clone();
    for k in 1..m {
        for i in 0..m - k {
            let denom = xs[i] - xs[i + k];
            p[i] = (&p[i + 1] * C64::new(xs[i], 0.0) - &p[i] * C64::new(xs[i + k], 0.0))
                / C64::new(denom, 0.0);
        }
        if k == m - 2 {
            finest_subset = p[1].clone();
        }
    }
    if m == 2 {
        finest_subset = ys[1].clone();
    }
    (p[0].clone(), finest_subset)
}

fn trace_re(m: &CMatrix) -> f64 {
    m.trace().re
}

fn golden_section_max<F: Fn(f64) -> Result<f64>>(f: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..80 {
        if (hi - lo) <= 1e-13 * (1.0 + lo.abs()) {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Extrapolation succeeds when the last raw difference does not exceed the
/// first one, up to a floor relative to `scale` (the size of the raw data).
fn check_convergence(samples: &[CMatrix], scale: f64, lambda: f64, residual: f64) -> Result<()> {
    if samples.len() < 3 {
        return Ok(());
    }
    let first = (&samples[1] - &samples[0]).norm();
    let last = (&samples[samples.len() - 1] - &samples[samples.len() - 2]).norm();
    if last > first + 1e-6 * (1.0 + scale) {
        return Err(Error::NoConvergence { lambda, residual });
    }
    Ok(())
}

/// Recover the measure of a Herglotz function on the half-open window
/// `[λ₁, λ₂)` from `Im r(μ + iν)`, extrapolating `ν → 0`.
///
/// Point masses are located as peaks of `ν·Im r`, refined by a golden-section
/// search at the smallest `ν`, and weighted by the extrapolated residue
/// `lim ν·Im r(λ̂ + iν)`. The remaining density is `(1/π)·lim Im r` after the
/// Lorentzian contributions of all located masses are removed.
pub fn stieltjes_invert<F>(
    r: F,
    window: (f64, f64),
    opts: &StieltjesOptions,
) -> Result<DistributionFunction>
where
    F: Fn(C64) -> Result<CMatrix> + Sync,
{
    opts.validate()?;
    let (l1, l2) = window;
    if !(l1 < l2) || !l1.is_finite() || !l2.is_finite() {
        return Err(Error::InvalidInput("window must be finite with λ₁ < λ₂".into()));
    }
    let mut cells = ((l2 - l1) / opts.step).ceil() as usize;
    cells = cells.max(2);
    if cells % 2 == 1 {
        cells += 1;
    }
    let h = (l2 - l1) / cells as f64;
    let eps = &opts.eps_seq;
    let nu_max = eps[0];
    let nu_min = eps[eps.len() - 1];
    let margin = (5.0 * nu_max / h).ceil() as i64;
    let abscissa = |k: i64| l1 + k as f64 * h;
    let indices: Vec<i64> = (-margin..=cells as i64 + margin).collect();

    // Im r on the extended grid for every ν.
    let imag: Vec<Vec<CMatrix>> = eps
        .iter()
        .map(|&nu| {
            indices
                .par_iter()
                .map(|&k| r(C64::new(abscissa(k), nu)).map(|v| imag_part(&v)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let p = imag[0][0].nrows();

    // Peak candidates of ν_max·λ_max(Im r).
    let thresh = opts.threshold();
    let amp: Vec<f64> = imag[0].iter().map(|m| nu_max * max_eigenvalue(m)).collect();
    let mut candidates: Vec<usize> = Vec::new();
    for i in 1..amp.len() - 1 {
        if amp[i] > thresh && amp[i] > amp[i - 1] && amp[i] >= amp[i + 1] {
            match candidates.last() {
                Some(&prev) if i - prev <= opts.merge_radius => {
                    if amp[i] > amp[prev] {
                        *candidates.last_mut().unwrap() = i;
                    }
                }
                _ => candidates.push(i),
            }
        }
    }

    // Refine position and extrapolate the residue of each candidate.
    let mut located: Vec<(f64, CMatrix)> = Vec::new();
    for &i in &candidates {
        let mu = abscissa(indices[i]);
        let peak = |x: f64| -> Result<f64> { Ok(trace_re(&imag_part(&r(C64::new(x, nu_min))?))) };
        let lambda = golden_section_max(peak, mu - 3.0 * h, mu + 3.0 * h)?;
        let samples: Vec<CMatrix> = eps
            .iter()
            .map(|&nu| r(C64::new(lambda, nu)).map(|v| imag_part(&v) * C64::new(nu, 0.0)))
            .collect::<Result<Vec<_>>>()?;
        let (weight, coarser) = neville_at_zero(eps, &samples);
        if max_eigenvalue(&weight) <= thresh {
            continue;
        }
        let residual = (&weight - &coarser).norm();
        let scale = samples.iter().map(|s| s.norm()).fold(0.0, f64::max);
        check_convergence(&samples, scale, lambda, residual)?;
        let e = min_eigenvalue(&weight);
        if e < -1e-6 {
            return Err(Error::NonMonotone { lambda, eigenvalue: e });
        }
        located.push((lambda, weight));
    }
    located.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Density on the window grid after removing the located masses.
    let grid: Vec<f64> = (0..=cells as i64).map(abscissa).collect();
    let density: Vec<CMatrix> = (0..=cells)
        .into_par_iter()
        .map(|j| {
            let idx = j + margin as usize;
            let mu = grid[j];
            let samples: Vec<CMatrix> = eps
                .iter()
                .enumerate()
                .map(|(e, &nu)| {
                    let mut m = imag[e][idx].clone();
                    for (lambda, w) in &located {
                        let d = mu - lambda;
                        m -= w * C64::new(nu / (d * d + nu * nu), 0.0);
                    }
                    m
                })
                .collect();
            let (value, coarser) = neville_at_zero(eps, &samples);
            let residual = (&value - &coarser).norm();
            let scale = (0..eps.len()).map(|e| imag[e][idx].norm()).fold(0.0, f64::max);
            check_convergence(&samples, scale, mu, residual)?;
            Ok(value * C64::new(std::f64::consts::FRAC_1_PI, 0.0))
        })
        .collect::<Result<Vec<_>>>()?;

    let atoms: Vec<(f64, CMatrix)> = located
        .into_iter()
        .filter(|(l, _)| *l >= l1 && *l < l2)
        .collect();
    let dist = DistributionFunction::new(p, window, atoms, grid.clone(), density)?;
    for k in 1..grid.len() {
        let inc = dist.increment(grid[k - 1], grid[k]);
        let e = min_eigenvalue(&inc);
        if e < -1e-6 {
            return Err(Error::NonMonotone {
                lambda: grid[k - 1],
                eigenvalue: e,
            });
        }
    }
    Ok(dist)
}
