//! Herglotz (Nevanlinna) functions: integral representations, kernel
//! positivity and numerical Stieltjes inversion.

mod distribution;
mod stieltjes;

pub use distribution::DistributionFunction;
pub use stieltjes::{neville_at_zero, stieltjes_invert, StieltjesOptions};

use crate::error::{Error, Result};
use crate::linalg::{
    format_complex, hermitian_part, identity, min_eigenvalue, op_norm, CMatrix, C64,
};
use crate::linrel::NevanlinnaFamilySample;

/// Eigenvalue floor (relative to the matrix norm) for PSD checks on inputs.
const PSD_FLOOR: f64 = 1e-12;

/// Sampled non-negative density of the absolutely continuous part of a measure.
#[derive(Debug, Clone)]
pub struct AcDensity {
    pub grid: Vec<f64>,
    pub values: Vec<CMatrix>,
}

/// Data `(α, β, σ)` of the representation
/// `Q(z) = α + βz + ∫ (1/(λ−z) − λ/(1+λ²)) dσ(λ)`,
/// with σ split into point masses and a sampled density.
#[derive(Debug, Clone)]
pub struct HerglotzRep {
    p: usize,
    alpha: CMatrix,
    beta: CMatrix,
    atoms: Vec<(f64, CMatrix)>,
    ac: Option<AcDensity>,
}

fn check_psd(m: &CMatrix, what: &str) -> Result<()> {
    let scale = op_norm(m).max(f64::MIN_POSITIVE);
    if min_eigenvalue(m) < -PSD_FLOOR * scale {
        return Err(Error::InvalidInput(format!("{what} is not positive semidefinite")));
    }
    Ok(())
}

fn check_hermitian(m: &CMatrix, what: &str) -> Result<()> {
    let scale = 1.0 + m.norm();
    if (m - m.adjoint()).norm() > 1e-12 * scale {
        return Err(Error::InvalidInput(format!("{what} is not Hermitian")));
    }
    Ok(())
}

impl HerglotzRep {
    pub fn new(
        alpha: CMatrix,
        beta: CMatrix,
        atoms: Vec<(f64, CMatrix)>,
        ac: Option<AcDensity>,
    ) -> Result<Self> {
        let p = alpha.nrows();
        let square = |m: &CMatrix| m.nrows() == p && m.ncols() == p;
        if !square(&alpha) || !square(&beta) {
            return Err(Error::InvalidInput("alpha and beta must be p×p".into()));
        }
        check_hermitian(&alpha, "alpha")?;
        check_hermitian(&beta, "beta")?;
        check_psd(&beta, "beta")?;
        for (k, (lambda, w)) in atoms.iter().enumerate() {
            if !lambda.is_finite() || !square(w) {
                return Err(Error::InvalidInput(format!("atom {k} is malformed")));
            }
            check_hermitian(w, &format!("atom {k} weight"))?;
            check_psd(w, &format!("atom {k} weight"))?;
            if k > 0 && atoms[k - 1].0 >= *lambda {
                return Err(Error::InvalidInput(
                    "atom abscissas must be strictly increasing".into(),
                ));
            }
        }
        if let Some(ac) = &ac {
            if ac.grid.len() != ac.values.len() || ac.grid.len() < 2 {
                return Err(Error::InvalidInput(
                    "a.c. density needs at least two samples matching its grid".into(),
                ));
            }
            if ac.grid.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::InvalidInput("a.c. grid must be strictly increasing".into()));
            }
            for (k, v) in ac.values.iter().enumerate() {
                if !square(v) {
                    return Err(Error::InvalidInput(format!("a.c. sample {k} is not p×p")));
                }
                check_psd(v, &format!("a.c. sample {k}"))?;
            }
        }
        Ok(Self {
            p,
            alpha: hermitian_part(&alpha),
            beta: hermitian_part(&beta),
            atoms: atoms
                .into_iter()
                .map(|(l, w)| (l, hermitian_part(&w)))
                .collect(),
            ac: ac.map(|a| AcDensity {
                grid: a.grid,
                values: a.values.iter().map(hermitian_part).collect(),
            }),
        })
    }

    /// The constant function `Q ≡ α`.
    pub fn constant(alpha: CMatrix) -> Result<Self> {
        let p = alpha.nrows();
        Self::new(alpha, CMatrix::zeros(p, p), Vec::new(), None)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn alpha(&self) -> &CMatrix {
        &self.alpha
    }

    pub fn beta(&self) -> &CMatrix {
        &self.beta
    }

    pub fn atoms(&self) -> &[(f64, CMatrix)] {
        &self.atoms
    }

    pub fn ac_density(&self) -> Option<&AcDensity> {
        self.ac.as_ref()
    }

    /// Whether the measure vanishes and β = 0, so `Q` is a constant.
    pub fn is_constant(&self) -> bool {
        self.atoms.is_empty() && self.ac.is_none() && self.beta.norm() == 0.0
    }

    pub fn eval(&self, z: C64) -> Result<CMatrix> {
        if z.im < 0.0 {
            // Evaluate in the upper half-plane so that Q(z̄) = Q(z)* holds exactly.
            return Ok(self.eval(z.conj())?.adjoint());
        }
        let mut q = &self.alpha + &self.beta * z;
        for (lambda, w) in &self.atoms {
            let d = C64::new(*lambda, 0.0) - z;
            if d.norm() < 1e-12 {
                return Err(Error::PoleAt {
                    z: format_complex(z),
                    lambda: *lambda,
                });
            }
            let coeff = d.inv() - lambda / (1.0 + lambda * lambda);
            q += w * coeff;
        }
        if let Some(ac) = &self.ac {
            let (lo, hi) = (ac.grid[0], ac.grid[ac.grid.len() - 1]);
            if z.im == 0.0 && z.re >= lo && z.re <= hi {
                return Err(Error::PoleAt {
                    z: format_complex(z),
                    lambda: z.re,
                });
            }
            let n = ac.grid.len();
            for k in 0..n {
                let left = if k > 0 { ac.grid[k] - ac.grid[k - 1] } else { 0.0 };
                let right = if k + 1 < n { ac.grid[k + 1] - ac.grid[k] } else { 0.0 };
                let weight = 0.5 * (left + right);
                let lambda = ac.grid[k];
                let coeff = (C64::new(lambda, 0.0) - z).inv() - lambda / (1.0 + lambda * lambda);
                q += &ac.values[k] * (coeff * weight);
            }
        }
        Ok(q)
    }
}

pub fn eval_herglotz(rep: &HerglotzRep, z: C64) -> Result<CMatrix> {
    rep.eval(z)
}

/// Wraps a representation as the Nevanlinna family `φ = I`, `ψ = Q(z)`.
#[derive(Debug, Clone)]
pub struct HerglotzTau {
    rep: HerglotzRep,
}

impl HerglotzTau {
    pub fn sample(&self, z: C64) -> Result<NevanlinnaFamilySample> {
        NevanlinnaFamilySample::new(identity(self.rep.p()), self.rep.eval(z)?, z)
    }

    pub fn rep(&self) -> &HerglotzRep {
        &self.rep
    }
}

pub fn herglotz_as_tau(rep: HerglotzRep) -> HerglotzTau {
    HerglotzTau { rep }
}

/// Block Gram matrix of a Nevanlinna-type kernel at a set of nodes.
#[derive(Debug, Clone)]
pub struct KernelGram {
    pub nodes: Vec<C64>,
    pub gram: CMatrix,
    pub min_eigenvalue: f64,
    /// `λ_min ≥ −1e−8·‖Gram‖`.
    pub certified: bool,
}

/// Relative tolerance for certifying a Gram matrix as PSD.
pub const GRAM_TOL: f64 = 1e-8;

/// Half-width of the symmetric difference used for diagonal entries at real nodes.
const DIAGONAL_STEP: f64 = 1e-6;

pub(crate) fn conjugate_collision(z: C64, zeta: C64) -> bool {
    (z - zeta.conj()).norm() <= 1e-14 * (1.0 + z.norm())
}

/// Assemble a block Gram matrix from a kernel `k(z_j, z_k)` and certify it.
pub(crate) fn assemble_gram<K>(nodes: &[C64], block: usize, kernel: K) -> Result<KernelGram>
where
    K: Fn(C64, C64) -> Result<CMatrix>,
{
    let n = nodes.len();
    let mut gram = CMatrix::zeros(n * block, n * block);
    for (j, &zj) in nodes.iter().enumerate() {
        for (k, &zk) in nodes.iter().enumerate() {
            let b = kernel(zj, zk)?;
            gram.view_mut((j * block, k * block), (block, block))
                .copy_from(&b);
        }
    }
    let gram = hermitian_part(&gram);
    let min_eigenvalue = min_eigenvalue(&gram);
    let certified = min_eigenvalue >= -GRAM_TOL * op_norm(&gram);
    Ok(KernelGram {
        nodes: nodes.to_vec(),
        gram,
        min_eigenvalue,
        certified,
    })
}

/// Nevanlinna kernel `N_ζ(z) = (Q(z) − Q(ζ)*)/(z − ζ̄)`.
pub fn nevanlinna_kernel<F>(q: &F, z: C64, zeta: C64) -> Result<CMatrix>
where
    F: Fn(C64) -> Result<CMatrix>,
{
    if z == zeta && z.im == 0.0 {
        // Limit of the diagonal at a real point: average the kernel at x ± iδ.
        let delta = DIAGONAL_STEP * (1.0 + z.norm());
        let up = z + C64::new(0.0, delta);
        let down = z - C64::new(0.0, delta);
        let ku = nevanlinna_kernel(q, up, up)?;
        let kd = nevanlinna_kernel(q, down, down)?;
        return Ok((ku + kd) * C64::new(0.5, 0.0));
    }
    if conjugate_collision(z, zeta) {
        return Err(Error::ConjugateCollision {
            z: format_complex(z),
            zeta: format_complex(zeta),
        });
    }
    let qz = q(z)?;
    let qzeta = if z == zeta { qz.clone() } else { q(zeta)? };
    Ok((qz - qzeta.adjoint()) / (z - zeta.conj()))
}

/// Gram matrix `[N_{z_k}(z_j)]` of a candidate Herglotz function.
pub fn kernel_positivity<F>(q: F, nodes: &[C64]) -> Result<KernelGram>
where
    F: Fn(C64) -> Result<CMatrix>,
{
    if nodes.is_empty() {
        return Err(Error::InvalidInput("kernel_positivity needs nodes".into()));
    }
    let block = q(nodes[0])?.nrows();
    assemble_gram(nodes, block, |z, zeta| nevanlinna_kernel(&q, z, zeta))
}
