//! Linear relations in `C^n × C^n` and Nevanlinna pairs and families.
//!
//! A relation is stored as an orthonormal column basis of a subspace of
//! `C^{2n}`; the top `n` rows hold the first component, the bottom `n` rows
//! the second.

use crate::error::{Error, Result};
use crate::linalg::{
    hstack, identity, max_abs_diff, null_space, orthogonal_complement, orthonormal_basis, rank,
    same_span, vstack, CMatrix, C64,
};

/// Tolerance for the Hermitian-type identities `CD* = DC*` and its relatives.
const PAIR_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct LinearRelation {
    n: usize,
    basis: CMatrix,
}

impl LinearRelation {
    /// Relation spanned by the columns of `basis` (shape `2n × m`). Dependent
    /// columns are dropped; the stored basis is orthonormal.
    pub fn from_basis(n: usize, basis: &CMatrix) -> Result<Self> {
        if basis.nrows() != 2 * n {
            return Err(Error::InvalidInput(format!(
                "relation basis has {} rows, expected {}",
                basis.nrows(),
                2 * n
            )));
        }
        Ok(Self {
            n,
            basis: orthonormal_basis(basis),
        })
    }

    /// Graph `{(u, M u)}` of a square matrix.
    pub fn graph(m: &CMatrix) -> Self {
        let n = m.nrows();
        Self {
            n,
            basis: orthonormal_basis(&vstack(&identity(n), m)),
        }
    }

    /// The relation `{0} × C^n`.
    pub fn purely_multivalued(n: usize) -> Self {
        Self {
            n,
            basis: vstack(&CMatrix::zeros(n, n), &identity(n)),
        }
    }

    /// Range of `col{phi, psi}`: the value `τ(z)` of a Nevanlinna family.
    pub fn from_family(phi: &CMatrix, psi: &CMatrix) -> Result<Self> {
        Self::from_basis(phi.nrows(), &vstack(phi, psi))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn top(&self) -> CMatrix {
        self.basis.rows(0, self.n).into_owned()
    }

    pub fn bottom(&self) -> CMatrix {
        self.basis.rows(self.n, self.n).into_owned()
    }

    /// A pair `(C, D)` with `self = ker[C  -D]`. Both factors have
    /// `2n - dim` rows.
    pub fn kernel_pair(&self) -> (CMatrix, CMatrix) {
        let perp = orthogonal_complement(&self.basis);
        let c = perp.rows(0, self.n).adjoint();
        let d = -perp.rows(self.n, self.n).adjoint();
        (c, d)
    }

    pub fn same_subspace(&self, other: &LinearRelation) -> bool {
        self.n == other.n && same_span(&self.basis, &other.basis)
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &LinearRelation) -> bool {
        self.n == other.n && rank(&hstack(&self.basis, &other.basis)) == self.dim()
    }

    /// Whether the relation is the graph of a (single-valued, everywhere
    /// defined) matrix, and if so that matrix.
    pub fn as_matrix(&self) -> Option<CMatrix> {
        if self.dim() != self.n {
            return None;
        }
        let top = self.top();
        if rank(&top) != self.n {
            return None;
        }
        top.clone().try_inverse().map(|inv| self.bottom() * inv)
    }
}

/// `{col{u, u'} : C u - D u' = 0}`.
pub fn relation_from_kernel_pair(c: &CMatrix, d: &CMatrix) -> Result<LinearRelation> {
    let p = c.ncols();
    if d.shape() != c.shape() {
        return Err(Error::InvalidInput(format!(
            "pair blocks have shapes {:?} and {:?}",
            c.shape(),
            d.shape()
        )));
    }
    let stacked = hstack(c, &(-d));
    let r = rank(&stacked);
    if r < c.nrows() {
        return Err(Error::RankDeficientPair {
            rank: r,
            expected: c.nrows(),
        });
    }
    LinearRelation::from_basis(p, &null_space(&stacked))
}

/// Orthonormal bases of the domain, kernel, range and multivalued part.
#[derive(Debug, Clone)]
pub struct RelationParts {
    pub dom: CMatrix,
    pub ker: CMatrix,
    pub ran: CMatrix,
    pub mul: CMatrix,
}

pub fn relation_parts(t: &LinearRelation) -> RelationParts {
    let top = t.top();
    let bottom = t.bottom();
    // ker T: first components of elements with vanishing second component.
    let ker = orthonormal_basis(&(&top * null_space(&bottom)));
    let mul = orthonormal_basis(&(&bottom * null_space(&top)));
    RelationParts {
        dom: orthonormal_basis(&top),
        ker,
        ran: orthonormal_basis(&bottom),
        mul,
    }
}

/// The adjoint relation `T* = {(u, f) : (f, v) = (u, g) for all (v, g) ∈ T}`.
pub fn adjoint(t: &LinearRelation) -> LinearRelation {
    // (u, f) ∈ T*  iff  [-g*  v*] (u, f) = 0 for all basis elements (v, g).
    let constraint = hstack(&(-t.bottom().adjoint()), &t.top().adjoint());
    LinearRelation {
        n: t.n,
        basis: null_space(&constraint),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric,
    Selfadjoint,
    Neither,
}

pub fn classify_symmetry(t: &LinearRelation) -> Symmetry {
    let adj = adjoint(t);
    if !adj.contains(t) {
        Symmetry::Neither
    } else if adj.dim() == t.dim() {
        Symmetry::Selfadjoint
    } else {
        Symmetry::Symmetric
    }
}

/// Classify `ker[C  -D]` through the identity `CD* = DC*`.
pub fn classify_pair(pair: &MatrixPair) -> Result<Symmetry> {
    let rel = pair.relation()?;
    let cd = &pair.c * pair.d.adjoint();
    let dc = &pair.d * pair.c.adjoint();
    let scale = 1.0 + cd.norm().max(dc.norm());
    if max_abs_diff(&cd, &dc) <= PAIR_TOL * scale {
        Ok(Symmetry::Selfadjoint)
    } else {
        Ok(classify_symmetry(&rel))
    }
}

/// A matrix pair `(C, D)` evaluated at a point, describing `ker[C  -D]`.
#[derive(Debug, Clone)]
pub struct MatrixPair {
    pub c: CMatrix,
    pub d: CMatrix,
}

impl MatrixPair {
    pub fn new(c: CMatrix, d: CMatrix) -> Self {
        Self { c, d }
    }

    /// Whether `rank [C D] = p`.
    pub fn is_proper(&self) -> bool {
        rank(&hstack(&self.c, &self.d)) == self.c.nrows()
    }

    pub fn relation(&self) -> Result<LinearRelation> {
        relation_from_kernel_pair(&self.c, &self.d)
    }
}

/// Values `φ(z), ψ(z)` of a Nevanlinna family at `z`.
#[derive(Debug, Clone)]
pub struct NevanlinnaFamilySample {
    pub phi: CMatrix,
    pub psi: CMatrix,
    pub z: C64,
}

impl NevanlinnaFamilySample {
    pub fn new(phi: CMatrix, psi: CMatrix, z: C64) -> Result<Self> {
        let s = Self { phi, psi, z };
        if rank(&vstack(&s.phi, &s.psi)) != s.phi.ncols() {
            return Err(Error::RankDeficientPair {
                rank: rank(&vstack(&s.phi, &s.psi)),
                expected: s.phi.ncols(),
            });
        }
        Ok(s)
    }

    /// The subspace `τ(z) = ran col{φ(z), ψ(z)}`.
    pub fn relation(&self) -> LinearRelation {
        LinearRelation {
            n: self.phi.nrows(),
            basis: orthonormal_basis(&vstack(&self.phi, &self.psi)),
        }
    }

    /// Representative with orthonormal `col{φ, ψ}`, fixing the right-factor
    /// gauge freedom of the family.
    pub fn normalized(&self) -> Self {
        let p = self.phi.nrows();
        let q = vstack(&self.phi, &self.psi).qr().q();
        Self {
            phi: q.rows(0, p).into_owned(),
            psi: q.rows(p, p).into_owned(),
            z: self.z,
        }
    }

    /// `‖φ#(z)ψ(z) − ψ#(z)φ(z)‖`, given the sample at `z̄`. Vanishes for
    /// Nevanlinna families.
    pub fn symmetry_defect(&self, at_conj: &NevanlinnaFamilySample) -> f64 {
        let lhs = at_conj.phi.adjoint() * &self.psi;
        let rhs = at_conj.psi.adjoint() * &self.phi;
        (lhs - rhs).norm()
    }
}

/// Pair at `z` from the family sample at `z̄`: `(C, D) = (ψ(z̄)*, φ(z̄)*)`.
pub fn family_to_pair(sample_at_conj: &NevanlinnaFamilySample) -> MatrixPair {
    MatrixPair::new(sample_at_conj.psi.adjoint(), sample_at_conj.phi.adjoint())
}

/// Family sample at `z` from the pair at `z̄`: `(φ, ψ) = (D(z̄)*, C(z̄)*)`.
pub fn pair_to_family(pair_at_conj: &MatrixPair, z: C64) -> NevanlinnaFamilySample {
    NevanlinnaFamilySample {
        phi: pair_at_conj.d.adjoint(),
        psi: pair_at_conj.c.adjoint(),
        z,
    }
}
