//! Preresolvent and resolvent matrices of the boundary triples.

use super::{weyl_function, TripleKind};
use crate::cansys::{monodromy, CanonicalSystem};
use crate::error::Result;
use crate::jmoebius::{MatrixKind, ResolventMatrix};
use crate::linalg::{
    blocks, checked_inverse, from_blocks, hermitian_part, identity, spectral_inverse,
    symplectic_unit, CMatrix, C64,
};

/// Which of the two mutually adjoint resolvent matrices is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// The side on which the triple's resolvent matrix has a closed form: left
/// for the full regular triple, right for the other two.
pub fn native_side(kind: TripleKind) -> Side {
    match kind {
        TripleKind::FullRegular => Side::Left,
        TripleKind::NeumannLeft | TripleKind::LimitPoint => Side::Right,
    }
}

/// `K = 𝒥·Re M(i)·𝒥` of the full regular triple, where `Re` is the Hermitian part.
pub fn k_constant(sys: &CanonicalSystem) -> Result<CMatrix> {
    let m = weyl_function(sys, TripleKind::FullRegular, C64::new(0.0, 1.0))?;
    let j = symplectic_unit(sys.p());
    Ok(&j * hermitian_part(&m) * &j)
}

/// The preresolvent matrix
/// `[[M, 2(I + Uᵀ)⁻¹], [2(I + U)⁻¹, 𝒥(−M + Re M(i))𝒥]]` of the full regular triple.
pub fn preresolvent_matrix(sys: &CanonicalSystem, z: C64) -> Result<CMatrix> {
    let k = k_constant(sys)?;
    preresolvent_with(sys, &k, z)
}

fn preresolvent_with(sys: &CanonicalSystem, k: &CMatrix, z: C64) -> Result<CMatrix> {
    let n = sys.n();
    let j = symplectic_unit(sys.p());
    let u = monodromy(sys, z)?;
    let inv = spectral_inverse(&(identity(n) + &u), z)?;
    let m = -(&j * (identity(n) - &u) * &inv);
    let two = C64::new(2.0, 0.0);
    let a12 = inv.transpose() * two;
    let a21 = inv * two;
    let a22 = -(&j * &m * &j) + k;
    Ok(from_blocks(&m, &a12, &a21, &a22))
}

/// Left resolvent matrix of the full regular triple,
/// `½[[(U−I)𝒥 + (U+I)K, U+I], [𝒥(U+I)𝒥 + 𝒥(U−I)K, 𝒥(U−I)]]`.
fn full_left(sys: &CanonicalSystem, k: &CMatrix, z: C64) -> Result<CMatrix> {
    let n = sys.n();
    let j = symplectic_unit(sys.p());
    let u = monodromy(sys, z)?;
    let plus = &u + identity(n);
    let minus = &u - identity(n);
    let w11 = &minus * &j + &plus * k;
    let w21 = &j * &plus * &j + &j * &minus * k;
    let w = from_blocks(&w11, &plus, &w21, &(&j * minus));
    Ok(w * C64::new(0.5, 0.0))
}

/// Right resolvent matrix `[[s₂ᵀ, s₁ᵀ], [c₂ᵀ, c₁ᵀ]]` of the Neumann triple.
/// The transposes matter for `p > 1`: without them the matrix is not
/// J-unitary.
fn neumann_right(sys: &CanonicalSystem, z: C64) -> Result<CMatrix> {
    let (c1, s1, c2, s2) = blocks(&monodromy(sys, z)?, sys.p());
    Ok(from_blocks(&s2.transpose(), &s1.transpose(), &c2.transpose(), &c1.transpose()))
}

/// Right resolvent matrix `[[0, −1], [1, m(z)]]` of the limit-point triple.
fn limit_point_right(sys: &CanonicalSystem, z: C64) -> Result<CMatrix> {
    let m = weyl_function(sys, TripleKind::LimitPoint, z)?[(0, 0)];
    let (zero, one) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    Ok(CMatrix::from_row_slice(2, 2, &[zero, -one, one, m]))
}

fn sample(sys: &CanonicalSystem, kind: TripleKind, side: Side, k: Option<&CMatrix>, z: C64) -> Result<CMatrix> {
    kind.check(sys)?;
    match (kind, side) {
        (TripleKind::FullRegular, Side::Left) => full_left(sys, k.expect("K precomputed"), z),
        (TripleKind::NeumannLeft, Side::Right) => neumann_right(sys, z),
        (TripleKind::LimitPoint, Side::Right) => limit_point_right(sys, z),
        (kind, side) => {
            let other = match side {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            };
            Ok(sample(sys, kind, other, k, z.conj())?.adjoint())
        }
    }
}

/// The resolvent matrix on the triple's native side (see [`native_side`]).
pub fn resolvent_matrix(sys: &CanonicalSystem, kind: TripleKind, z: C64) -> Result<CMatrix> {
    resolvent_matrix_side(sys, kind, native_side(kind), z)
}

/// The left or right resolvent matrix; the two are related by
/// `W^ℓ(z) = W(z̄)*`.
pub fn resolvent_matrix_side(sys: &CanonicalSystem, kind: TripleKind, side: Side, z: C64) -> Result<CMatrix> {
    let k = match kind {
        TripleKind::FullRegular => Some(k_constant(sys)?),
        _ => None,
    };
    sample(sys, kind, side, k.as_ref(), z)
}

/// The resolvent matrix as a function of `z`.
pub fn resolvent_matrix_fn(sys: &CanonicalSystem, kind: TripleKind, side: Side) -> Result<ResolventMatrix> {
    kind.check(sys)?;
    let k = match kind {
        TripleKind::FullRegular => Some(k_constant(sys)?),
        _ => None,
    };
    let domain = match kind {
        TripleKind::FullRegular => "z with I + U(b, z) invertible",
        TripleKind::NeumannLeft => "all z",
        TripleKind::LimitPoint => "non-real z",
    };
    let matrix_kind = match side {
        Side::Left => MatrixKind::Left,
        Side::Right => MatrixKind::Right,
    };
    let sys = sys.clone();
    Ok(ResolventMatrix::new(sys.p(), matrix_kind, domain, move |z| {
        sample(&sys, kind, side, k.as_ref(), z)
    }))
}

/// The preresolvent matrix as a function of `z`.
pub fn preresolvent_matrix_fn(sys: &CanonicalSystem) -> Result<ResolventMatrix> {
    TripleKind::FullRegular.check(sys)?;
    let k = k_constant(sys)?;
    let sys = sys.clone();
    Ok(ResolventMatrix::new(
        2 * sys.p(),
        MatrixKind::Preresolvent,
        "z with I + U(b, z) invertible",
        move |z| preresolvent_with(&sys, &k, z),
    ))
}

/// The left resolvent matrix determined by a preresolvent matrix `𝔄`:
/// `[[𝔞₂₁⁻¹𝔞₂₂, 𝔞₂₁⁻¹], [𝔞₁₁𝔞₂₁⁻¹𝔞₂₂ − 𝔞₁₂, 𝔞₁₁𝔞₂₁⁻¹]]`.
pub fn left_from_preresolvent(a: &CMatrix) -> Result<CMatrix> {
    let q = a.nrows() / 2;
    let (a11, a12, a21, a22) = blocks(a, q);
    let inv = checked_inverse(&a21)?;
    let w11 = &inv * &a22;
    let w21 = &a11 * &inv * &a22 - a12;
    let w22 = &a11 * &inv;
    Ok(from_blocks(&w11, &inv, &w21, &w22))
}
