//! `J_p`-geometry of resolvent matrices: the kernel `K^W`, class-𝒲
//! certification and the right and left linear-fractional transforms.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::herglotz::{assemble_gram, conjugate_collision, KernelGram};
use crate::linalg::{
    blocks, checked_inverse, format_complex, signature_unit, symplectic_unit, CMatrix, C64,
};
use crate::linrel::{LinearRelation, MatrixPair};

/// Half-width of the vertical offset used for kernel diagonals at real nodes.
const DIAGONAL_STEP: f64 = 1e-6;

/// The signature matrices of block size `p`.
#[derive(Debug, Clone)]
pub struct JSignature {
    pub p: usize,
    /// `J_p = [[0, −iI], [iI, 0]]`.
    pub jp: CMatrix,
    /// `𝒥 = [[0, −I], [I, 0]]`.
    pub jcal: CMatrix,
}

impl JSignature {
    pub fn new(p: usize) -> Self {
        Self {
            p,
            jp: signature_unit(p),
            jcal: symplectic_unit(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Right,
    Left,
    Preresolvent,
}

type MatrixFn = Arc<dyn Fn(C64) -> Result<CMatrix> + Send + Sync>;

/// A matrix function `z ↦ W(z)` of size `2p × 2p`.
#[derive(Clone)]
pub struct ResolventMatrix {
    p: usize,
    kind: MatrixKind,
    domain: String,
    eval: MatrixFn,
}

impl std::fmt::Debug for ResolventMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ResolventMatrix")
            .field("p", &self.p)
            .field("kind", &self.kind)
            .field("domain", &self.domain)
            .finish()
    }
}

impl ResolventMatrix {
    pub fn new<F>(p: usize, kind: MatrixKind, domain: impl Into<String>, eval: F) -> Self
    where
        F: Fn(C64) -> Result<CMatrix> + Send + Sync + 'static,
    {
        Self {
            p,
            kind,
            domain: domain.into(),
            eval: Arc::new(eval),
        }
    }

    /// The constant function `z ↦ w`.
    pub fn constant(w: CMatrix, kind: MatrixKind) -> Self {
        let p = w.nrows() / 2;
        Self::new(p, kind, "C", move |_| Ok(w.clone()))
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn domain(&self) -> &str {
        &self.domain
    }

    pub fn at(&self, z: C64) -> Result<CMatrix> {
        (self.eval)(z)
    }

    /// `W#(z) = W(z̄)*`. Right and left kinds swap.
    pub fn sharp(&self) -> Self {
        let inner = self.eval.clone();
        let kind = match self.kind {
            MatrixKind::Right => MatrixKind::Left,
            MatrixKind::Left => MatrixKind::Right,
            MatrixKind::Preresolvent => MatrixKind::Preresolvent,
        };
        Self {
            p: self.p,
            kind,
            domain: format!("conjugate of {}", self.domain),
            eval: Arc::new(move |z: C64| Ok(inner(z.conj())?.adjoint())),
        }
    }

    /// Pointwise product `W₁(z)W₂(z)`.
    pub fn product(&self, other: &ResolventMatrix) -> Self {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Self {
            p: self.p,
            kind: self.kind,
            domain: format!("{} and {}", self.domain, other.domain),
            eval: Arc::new(move |z: C64| Ok(a(z)? * b(z)?)),
        }
    }
}

/// `K_ζ^W(z) = (J_p − W(z)J_pW(ζ)*)/(−i(z − ζ̄))` for right matrices and
/// `(W(z)J_pW(ζ)* − J_p)/(−i(z − ζ̄))` for left matrices, which are
/// `J_p`-expansive in ℂ⁺.
pub fn kernel_kw(w: &ResolventMatrix, z: C64, zeta: C64) -> Result<CMatrix> {
    if z == zeta && z.im == 0.0 {
        let delta = DIAGONAL_STEP * (1.0 + z.norm());
        let up = z + C64::new(0.0, delta);
        let down = z - C64::new(0.0, delta);
        let ku = kernel_kw(w, up, up)?;
        let kd = kernel_kw(w, down, down)?;
        return Ok((ku + kd) * C64::new(0.5, 0.0));
    }
    if conjugate_collision(z, zeta) {
        return Err(Error::ConjugateCollision {
            z: format_complex(z),
            zeta: format_complex(zeta),
        });
    }
    let wz = w.at(z)?;
    let wzeta = if z == zeta { wz.clone() } else { w.at(zeta)? };
    let j = signature_unit(wz.nrows() / 2);
    let num = match w.kind() {
        MatrixKind::Left => &wz * &j * wzeta.adjoint() - &j,
        MatrixKind::Right | MatrixKind::Preresolvent => &j - &wz * &j * wzeta.adjoint(),
    };
    Ok(num / (C64::new(0.0, -1.0) * (z - zeta.conj())))
}

/// Block Gram matrix `[K_{z_k}^W(z_j)]` and its certification.
pub fn certify_class_w(w: &ResolventMatrix, nodes: &[C64]) -> Result<KernelGram> {
    if nodes.is_empty() {
        return Err(Error::InvalidInput("certify_class_w needs nodes".into()));
    }
    let block = w.at(nodes[0])?.nrows();
    assemble_gram(nodes, block, |z, zeta| kernel_kw(w, z, zeta))
}

fn check_square(w: &CMatrix, p: usize) -> Result<()> {
    if w.shape() != (2 * p, 2 * p) {
        return Err(Error::InvalidInput(format!(
            "expected a {0}×{0} matrix, got {1}×{2}",
            2 * p,
            w.nrows(),
            w.ncols()
        )));
    }
    Ok(())
}

/// Right transform of a relation `τ = ran col{φ, ψ}`:
/// `(w₁₁ψ + w₁₂φ)(w₂₁ψ + w₂₂φ)⁻¹`.
pub fn lft_right(w: &CMatrix, tau: &LinearRelation) -> Result<CMatrix> {
    let p = tau.n();
    check_square(w, p)?;
    if tau.dim() != p {
        return Err(Error::RankDeficientPair {
            rank: tau.dim(),
            expected: p,
        });
    }
    let (w11, w12, w21, w22) = blocks(w, p);
    let (phi, psi) = (tau.top(), tau.bottom());
    let den = &w21 * &psi + &w22 * &phi;
    Ok((&w11 * &psi + &w12 * &phi) * checked_inverse(&den)?)
}

/// Right transform of a constant matrix τ: `(w₁₁τ + w₁₂)(w₂₁τ + w₂₂)⁻¹`.
pub fn lft_right_matrix(w: &CMatrix, tau: &CMatrix) -> Result<CMatrix> {
    let p = tau.nrows();
    check_square(w, p)?;
    let (w11, w12, w21, w22) = blocks(w, p);
    let den = &w21 * tau + &w22;
    Ok((&w11 * tau + &w12) * checked_inverse(&den)?)
}

/// Left transform of a pair describing `τ = ker[C  −D]`:
/// `(C w₁₂ + D w₂₂)⁻¹(C w₁₁ + D w₂₁)`.
pub fn lft_left(wl: &CMatrix, pair: &MatrixPair) -> Result<CMatrix> {
    let p = pair.c.ncols();
    check_square(wl, p)?;
    if !pair.is_proper() || pair.c.nrows() != p {
        return Err(Error::RankDeficientPair {
            rank: crate::linalg::rank(&crate::linalg::hstack(&pair.c, &pair.d)),
            expected: p,
        });
    }
    let (w11, w12, w21, w22) = blocks(wl, p);
    let den = &pair.c * &w12 + &pair.d * &w22;
    Ok(checked_inverse(&den)? * (&pair.c * &w11 + &pair.d * &w21))
}

/// `‖W(z)J_pW(z̄)* − J_p‖`.
pub fn j_unitarity_defect(w: &ResolventMatrix, z: C64) -> Result<f64> {
    let wz = w.at(z)?;
    let wbar = w.at(z.conj())?;
    let j = signature_unit(wz.nrows() / 2);
    Ok((&wz * &j * wbar.adjoint() - j).norm())
}
