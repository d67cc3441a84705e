//! Small dense linear-algebra helpers shared by the numerical modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative singular-value threshold used for rank and subspace decisions.
pub const RANK_TOL: f64 = 1e-10;

/// Condition number above which a denominator is treated as singular.
pub const COND_LIMIT: f64 = 1e12;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

/// The real symplectic unit `[[0, -I], [I, 0]]` of size 2p.
pub fn symplectic_unit(p: usize) -> CMatrix {
    let mut j = CMatrix::zeros(2 * p, 2 * p);
    for k in 0..p {
        j[(k, p + k)] = C64::new(-1.0, 0.0);
        j[(p + k, k)] = C64::new(1.0, 0.0);
    }
    j
}

/// The signature matrix `[[0, -iI], [iI, 0]]` of size 2p.
pub fn signature_unit(p: usize) -> CMatrix {
    symplectic_unit(p) * C64::i()
}

/// Assemble a 2x2 block matrix from four blocks with compatible shapes.
pub fn from_blocks(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> CMatrix {
    let (r1, c1) = a.shape();
    let (r2, c2) = d.shape();
    let mut m = CMatrix::zeros(r1 + r2, c1 + c2);
    m.view_mut((0, 0), (r1, c1)).copy_from(a);
    m.view_mut((0, c1), (r1, c2)).copy_from(b);
    m.view_mut((r1, 0), (r2, c1)).copy_from(c);
    m.view_mut((r1, c1), (r2, c2)).copy_from(d);
    m
}

/// The four p×p blocks of a 2p×2p matrix, in the order (11, 12, 21, 22).
pub fn blocks(m: &CMatrix, p: usize) -> (CMatrix, CMatrix, CMatrix, CMatrix) {
    (
        m.view((0, 0), (p, p)).into_owned(),
        m.view((0, p), (p, p)).into_owned(),
        m.view((p, 0), (p, p)).into_owned(),
        m.view((p, p), (p, p)).into_owned(),
    )
}

pub fn hstack(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.nrows(), b.nrows());
    let mut m = CMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    m
}

pub fn vstack(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.ncols());
    let mut m = CMatrix::zeros(a.nrows() + b.nrows(), a.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    m
}

/// Hermitian part `(A + A*) / 2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * C64::new(0.5, 0.0)
}

/// Imaginary part `(A - A*) / (2i)`, a Hermitian matrix.
pub fn imag_part(a: &CMatrix) -> CMatrix {
    (a - a.adjoint()) * C64::new(0.0, -0.5)
}

/// Largest singular value.
pub fn op_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.singular_values().max()
}

/// Eigenvalues of a Hermitian matrix (the anti-Hermitian residue is discarded).
pub fn hermitian_eigenvalues(a: &CMatrix) -> DVector<f64> {
    if a.is_empty() {
        return DVector::zeros(0);
    }
    hermitian_part(a).symmetric_eigenvalues()
}

pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    hermitian_eigenvalues(a).min()
}

pub fn max_eigenvalue(a: &CMatrix) -> f64 {
    hermitian_eigenvalues(a).max()
}

/// Condition number in the spectral norm; infinite for singular matrices.
pub fn condition_number(a: &CMatrix) -> f64 {
    let s = a.singular_values();
    let max = s.max();
    let min = s.min();
    if min == 0.0 || !min.is_finite() || !max.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Invert a square matrix, refusing when the condition number exceeds
/// [`COND_LIMIT`].
pub fn checked_inverse(a: &CMatrix) -> Result<CMatrix> {
    let cond = condition_number(a);
    if !(cond <= COND_LIMIT) {
        return Err(Error::SingularDenominator { cond });
    }
    a.clone()
        .try_inverse()
        .ok_or(Error::SingularDenominator { cond })
}

/// Same as [`checked_inverse`] but reports the failure as a spectral point of `z`.
///
/// The condition is measured against `max(σ_max, 1)` so that a matrix which
/// is uniformly tiny, such as `I + U` at an eigenvalue, also counts as singular.
pub fn spectral_inverse(a: &CMatrix, z: C64) -> Result<CMatrix> {
    let s = a.singular_values();
    let cond = s.max().max(1.0) / s.min();
    if !(cond <= COND_LIMIT) {
        return Err(Error::SpectralPoint {
            z: format_complex(z),
            cond,
        });
    }
    checked_inverse(a).map_err(|e| match e {
        Error::SingularDenominator { cond } => Error::SpectralPoint {
            z: format_complex(z),
            cond,
        },
        other => other,
    })
}

pub fn format_complex(z: C64) -> String {
    if z.im >= 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}{}i", z.re, z.im)
    }
}

/// Orthonormal basis of the column span of `m` (rank decided relative to the
/// largest singular value).
pub fn orthonormal_basis(m: &CMatrix) -> CMatrix {
    let rows = m.nrows();
    if m.ncols() == 0 || rows == 0 {
        return CMatrix::zeros(rows, 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return CMatrix::zeros(rows, 0);
    }
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > RANK_TOL * smax)
        .collect();
    CMatrix::from_fn(rows, keep.len(), |r, c| u[(r, keep[c])])
}

pub fn rank(m: &CMatrix) -> usize {
    orthonormal_basis(m).ncols()
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns `q` inside `C^rows`.
pub fn orthogonal_complement(q: &CMatrix) -> CMatrix {
    let n = q.nrows();
    if q.ncols() == 0 {
        return identity(n);
    }
    let proj = identity(n) - q * q.adjoint();
    let eig = hermitian_part(&proj).symmetric_eigen();
    let keep: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] > 0.5).collect();
    let basis = CMatrix::from_fn(n, keep.len(), |r, c| eig.eigenvectors[(r, keep[c])]);
    orthonormal_basis(&basis)
}

/// Orthonormal basis of the null space of `m`.
pub fn null_space(m: &CMatrix) -> CMatrix {
    if m.nrows() == 0 {
        return identity(m.ncols());
    }
    orthogonal_complement(&orthonormal_basis(&m.adjoint()))
}

/// Whether the column spans of `a` and `b` coincide.
pub fn same_span(a: &CMatrix, b: &CMatrix) -> bool {
    let ra = rank(a);
    ra == rank(b) && ra == rank(&hstack(a, b))
}

/// Orthonormal factor of the QR factorization of a full-column-rank matrix.
/// Used to renormalize propagated solution bases.
pub fn qr_orthonormalize(m: &CMatrix) -> CMatrix {
    m.clone().qr().q()
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|x| x.norm()).fold(0.0, f64::max)
}
