use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{min_eigenvalue, CMatrix, C64};

/// A non-decreasing, left-continuous matrix-valued function given by point
/// masses and a sampled density, normalized by `σ(0) = 0`.
#[derive(Debug, Clone)]
pub struct DistributionFunction {
    p: usize,
    window: (f64, f64),
    atoms: Vec<(f64, CMatrix)>,
    ac_grid: Vec<f64>,
    ac_density: Vec<CMatrix>,
    /// Cumulative integral of the density from the first grid point.
    ac_cumulative: Vec<CMatrix>,
}

impl DistributionFunction {
    /// Build from point masses and density samples on a uniform grid covering
    /// `window`. Masses must be sorted by position.
    pub fn new(
        p: usize,
        window: (f64, f64),
        atoms: Vec<(f64, CMatrix)>,
        ac_grid: Vec<f64>,
        ac_density: Vec<CMatrix>,
    ) -> Result<Self> {
        if !(window.0 < window.1) {
            return Err(Error::InvalidInput("window must satisfy λ₁ < λ₂".into()));
        }
        if ac_grid.len() != ac_density.len() {
            return Err(Error::InvalidInput("density samples do not match grid".into()));
        }
        if atoms.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidInput("atoms must be strictly increasing".into()));
        }
        let ac_cumulative = cumulative_integral(&ac_grid, &ac_density, p);
        Ok(Self {
            p,
            window,
            atoms,
            ac_grid,
            ac_density,
            ac_cumulative,
        })
    }

    /// A purely atomic distribution.
    pub fn atomic(p: usize, window: (f64, f64), atoms: Vec<(f64, CMatrix)>) -> Result<Self> {
        Self::new(p, window, atoms, Vec::new(), Vec::new())
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.0).collect()
    }

    pub fn atoms(&self) -> &[(f64, CMatrix)] {
        &self.atoms
    }

    pub fn ac_grid(&self) -> &[f64] {
        &self.ac_grid
    }

    pub fn ac_density(&self) -> &[CMatrix] {
        &self.ac_density
    }

    /// Same distribution multiplied by a positive constant.
    pub fn scaled(&self, factor: f64) -> Self {
        let s = C64::new(factor, 0.0);
        Self {
            p: self.p,
            window: self.window,
            atoms: self.atoms.iter().map(|(l, w)| (*l, w * s)).collect(),
            ac_grid: self.ac_grid.clone(),
            ac_density: self.ac_density.iter().map(|d| d * s).collect(),
            ac_cumulative: self.ac_cumulative.iter().map(|d| d * s).collect(),
        }
    }

    /// Integral of the density over `[-∞, x]` restricted to the grid.
    fn ac_primitive(&self, x: f64) -> CMatrix {
        let g = &self.ac_grid;
        if g.is_empty() || x <= g[0] {
            return CMatrix::zeros(self.p, self.p);
        }
        let last = g.len() - 1;
        if x >= g[last] {
            return self.ac_cumulative[last].clone();
        }
        let k = g.partition_point(|&v| v <= x) - 1;
        let h = g[k + 1] - g[k];
        let t = x - g[k];
        // Exact integral of the linear interpolant over [g_k, x].
        let slope = (&self.ac_density[k + 1] - &self.ac_density[k]) / C64::new(h, 0.0);
        &self.ac_cumulative[k]
            + &self.ac_density[k] * C64::new(t, 0.0)
            + slope * C64::new(0.5 * t * t, 0.0)
    }

    /// `σ(λ₂) − σ(λ₁)`, the measure of `[λ₁, λ₂)`.
    pub fn increment(&self, l1: f64, l2: f64) -> CMatrix {
        let mut total = self.ac_primitive(l2) - self.ac_primitive(l1);
        for (l, w) in &self.atoms {
            if *l >= l1 && *l < l2 {
                total += w;
            }
        }
        total
    }

    /// `σ(λ)` with the normalization `σ(0) = 0`.
    pub fn value(&self, lambda: f64) -> CMatrix {
        if lambda >= 0.0 {
            self.increment(0.0, lambda)
        } else {
            -self.increment(lambda, 0.0)
        }
    }

    pub fn total_mass(&self) -> CMatrix {
        self.increment(self.window.0, self.window.1)
    }

    /// Smallest eigenvalue over all point masses and grid-cell increments.
    pub fn min_increment_eigenvalue(&self) -> f64 {
        let mut m = f64::INFINITY;
        for (_, w) in &self.atoms {
            m = m.min(min_eigenvalue(w));
        }
        for k in 1..self.ac_grid.len() {
            let inc = &self.ac_cumulative[k] - &self.ac_cumulative[k - 1];
            m = m.min(min_eigenvalue(&inc));
        }
        m
    }

    fn header(&self, name: &str, hash: &str, out: &mut String) {
        writeln!(out, "# system={name} hash={hash}").unwrap();
    }

    fn entry_columns(&self, prefix: &str, out: &mut String) {
        for r in 0..self.p {
            for c in 0..self.p {
                write!(out, ",{prefix}{}{}_re,{prefix}{}{}_im", r + 1, c + 1, r + 1, c + 1).unwrap();
            }
        }
        out.push('\n');
    }

    /// CSV of `σ(λ)` on the density grid (or at the atoms when there is no
    /// density), one row per abscissa.
    pub fn to_csv(&self, name: &str, hash: &str) -> String {
        let mut out = String::new();
        self.header(name, hash, &mut out);
        out.push_str("lambda");
        self.entry_columns("sigma", &mut out);
        let abscissas: Vec<f64> = if self.ac_grid.is_empty() {
            let mut v = vec![self.window.0];
            v.extend(self.atoms.iter().map(|a| a.0));
            v.push(self.window.1);
            v
        } else {
            self.ac_grid.clone()
        };
        for x in abscissas {
            write_row(&mut out, x, &self.value(x));
        }
        out
    }

    /// CSV of the point masses.
    pub fn atoms_csv(&self, name: &str, hash: &str) -> String {
        let mut out = String::new();
        self.header(name, hash, &mut out);
        out.push_str("lambda");
        self.entry_columns("w", &mut out);
        for (l, w) in &self.atoms {
            write_row(&mut out, *l, w);
        }
        out
    }

    /// CSV of the density samples.
    pub fn density_csv(&self, name: &str, hash: &str) -> String {
        let mut out = String::new();
        self.header(name, hash, &mut out);
        out.push_str("lambda");
        self.entry_columns("rho", &mut out);
        for (x, d) in self.ac_grid.iter().zip(&self.ac_density) {
            write_row(&mut out, *x, d);
        }
        out
    }
}

pub(crate) fn write_row(out: &mut String, x: f64, m: &CMatrix) {
    write!(out, "{x:.16e}").unwrap();
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let v = m[(r, c)];
            write!(out, ",{:.16e},{:.16e}", v.re, v.im).unwrap();
        }
    }
    out.push('\n');
}

/// Cumulative integral on a grid: composite Simpson at even offsets from the
/// first node, with a trapezoid on the trailing cell at odd offsets.
fn cumulative_integral(grid: &[f64], values: &[CMatrix], p: usize) -> Vec<CMatrix> {
    let n = grid.len();
    let mut cum = Vec::with_capacity(n);
    if n == 0 {
        return cum;
    }
    cum.push(CMatrix::zeros(p, p));
    for k in 1..n {
        let h = grid[k] - grid[k - 1];
        let trap = (&values[k - 1] + &values[k]) * C64::new(0.5 * h, 0.0);
        if k % 2 == 0 {
            let h0 = grid[k - 1] - grid[k - 2];
            if (h0 - h).abs() <= 1e-9 * h {
                let simpson = (&values[k - 2] + &values[k - 1] * C64::new(4.0, 0.0) + &values[k])
                    * C64::new(h / 3.0, 0.0);
                let v = &cum[k - 2] + simpson;
                cum.push(v);
                continue;
            }
        }
        let v = &cum[k - 1] + trap;
        cum.push(v);
    }
    cum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, identity};

    fn one() -> CMatrix {
        identity(1)
    }

    #[test]
    fn increments_respect_half_open_convention() {
        let d = DistributionFunction::atomic(1, (-2.0, 2.0), vec![(-1.0, one()), (1.0, one() * c64(2.0, 0.0))]).unwrap();
        assert_eq!(d.increment(-1.0, 1.0)[(0, 0)].re, 1.0);
        assert_eq!(d.increment(-1.0, 1.0 + 1e-12)[(0, 0)].re, 3.0);
        assert_eq!(d.value(1.0)[(0, 0)].re, 0.0);
        assert_eq!(d.value(1.5)[(0, 0)].re, 2.0);
        assert_eq!(d.value(-1.0)[(0, 0)].re, -1.0);
        assert_eq!(d.value(-1.5)[(0, 0)].re, -1.0);
        assert_eq!(d.value(-0.5)[(0, 0)].re, 0.0);
    }

    #[test]
    fn density_integrates_exactly_for_polynomials() {
        let grid: Vec<f64> = (0..=10).map(|k| k as f64 * 0.1).collect();
        let vals: Vec<CMatrix> = grid.iter().map(|x| one() * c64(x * x, 0.0)).collect();
        let d = DistributionFunction::new(1, (0.0, 1.0), Vec::new(), grid, vals).unwrap();
        assert!((d.total_mass()[(0, 0)].re - 1.0 / 3.0).abs() < 1e-14);
        assert!(d.min_increment_eigenvalue() >= 0.0);
    }

    #[test]
    fn csv_layout() {
        let d = DistributionFunction::atomic(1, (0.0, 1.0), vec![(0.5, one())]).unwrap();
        let csv = d.atoms_csv("free", "0123456789abcdef");
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# system=free hash=0123456789abcdef");
        assert_eq!(lines[1], "lambda,w11_re,w11_im");
        assert_eq!(lines[2], "5.0000000000000000e-1,1.0000000000000000e0,0.0000000000000000e0");
        assert!(!csv.contains('\r'));
    }
}
