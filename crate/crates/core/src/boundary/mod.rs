//! Boundary triples of canonical systems: Weyl functions, γ-fields,
//! canonical resolvents, resolvent matrices, the limit-point coefficient and
//! the generalized Fourier transform.

mod fourier;
mod limit_point;
mod matrices;
mod resolvent;

pub use fourier::{
    fourier_kernel, fourier_kernel_matrix, fourier_kernel_values, fourier_transform, FourierSetup,
};
pub use limit_point::{
    limit_point_m, m_function, LimitPointSolution, WeylDisk, DEFAULT_DISK_TOL, MAX_TAIL_REPEATS,
};
pub use matrices::{
    k_constant, left_from_preresolvent, native_side, preresolvent_matrix, preresolvent_matrix_fn,
    resolvent_matrix, resolvent_matrix_fn, resolvent_matrix_side, Side,
};
pub use resolvent::{
    canonical_resolvent, extension_resolvent, extension_resolvent_direct, gamma_adjoint_apply,
};

use std::f64::consts::SQRT_2;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cansys::{monodromy, CanonicalSystem, FundamentalSolution};
use crate::error::{Error, Result};
use crate::linalg::{blocks, identity, spectral_inverse, symplectic_unit, CMatrix, C64};
use crate::quadrature::{default_cell, gauss_points, system_scale};

/// The three boundary triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TripleKind {
    /// Both endpoints regular; `Γ₀f = (f(a) + f(b))/√2`, `Γ₁f = −𝒥(f(a) − f(b))/√2`.
    FullRegular,
    /// `u₂(a) = 0` built into the domain; `Γ₀f = u₂(b)`, `Γ₁f = u₁(b)`.
    NeumannLeft,
    /// Half-line in the limit-point case (p = 1); `Γ₀f = u₂(a)`, `Γ₁f = −u₁(a)`.
    LimitPoint,
}

impl FromStr for TripleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" | "full-regular" => Ok(Self::FullRegular),
            "neumann" | "neumann-left" => Ok(Self::NeumannLeft),
            "limit-point" | "lp" => Ok(Self::LimitPoint),
            other => Err(Error::InvalidInput(format!(
                "unknown triple '{other}' (expected full, neumann or limit-point)"
            ))),
        }
    }
}

impl std::fmt::Display for TripleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::FullRegular => "full",
            Self::NeumannLeft => "neumann",
            Self::LimitPoint => "limit-point",
        })
    }
}

impl TripleKind {
    /// Whether the triple applies to `sys`.
    pub fn check(self, sys: &CanonicalSystem) -> Result<()> {
        match self {
            Self::FullRegular | Self::NeumannLeft if !sys.is_regular() => Err(Error::NotRegular),
            Self::LimitPoint if sys.is_regular() => Err(Error::NotHalfLine),
            Self::LimitPoint if sys.p() != 1 => Err(Error::UnsupportedDimension { p: sys.p() }),
            _ => Ok(()),
        }
    }

    /// Dimension of the boundary space.
    pub fn boundary_dim(self, p: usize) -> usize {
        match self {
            Self::FullRegular => 2 * p,
            Self::NeumannLeft | Self::LimitPoint => p,
        }
    }
}

fn scalar(x: C64) -> CMatrix {
    CMatrix::from_element(1, 1, x)
}

/// The Weyl function `M(z)` of the triple.
pub fn weyl_function(sys: &CanonicalSystem, kind: TripleKind, z: C64) -> Result<CMatrix> {
    kind.check(sys)?;
    match kind {
        TripleKind::FullRegular => {
            let u = monodromy(sys, z)?;
            let n = sys.n();
            let inv = spectral_inverse(&(identity(n) + &u), z)?;
            Ok(-(symplectic_unit(sys.p()) * (identity(n) - u) * inv))
        }
        TripleKind::NeumannLeft => {
            let u = monodromy(sys, z)?;
            let (c1, _, c2, _) = blocks(&u, sys.p());
            Ok(c1 * spectral_inverse(&c2, z)?)
        }
        TripleKind::LimitPoint => Ok(scalar(m_function(sys, z)?)),
    }
}

/// The γ-field `t ↦ γ(z)(t)` of a triple at a fixed `z`.
#[derive(Debug, Clone)]
pub struct GammaField<'a> {
    kind: TripleKind,
    fs: FundamentalSolution<'a>,
    /// Constant right factor: `√2(I + U(b))⁻¹` or `c₂(b)⁻¹`.
    right: CMatrix,
    lp: Option<LimitPointSolution<'a>>,
    weyl: CMatrix,
}

impl<'a> GammaField<'a> {
    pub fn new(sys: &'a CanonicalSystem, kind: TripleKind, z: C64) -> Result<Self> {
        kind.check(sys)?;
        let fs = FundamentalSolution::new(sys, z);
        match kind {
            TripleKind::FullRegular => {
                let u = monodromy(sys, z)?;
                let n = sys.n();
                let inv = spectral_inverse(&(identity(n) + &u), z)?;
                let weyl = -(symplectic_unit(sys.p()) * (identity(n) - u) * &inv);
                Ok(Self {
                    kind,
                    fs,
                    right: inv * C64::new(SQRT_2, 0.0),
                    lp: None,
                    weyl,
                })
            }
            TripleKind::NeumannLeft => {
                let u = monodromy(sys, z)?;
                let (c1, _, c2, _) = blocks(&u, sys.p());
                let inv = spectral_inverse(&c2, z)?;
                let weyl = c1 * &inv;
                Ok(Self {
                    kind,
                    fs,
                    right: inv,
                    lp: None,
                    weyl,
                })
            }
            TripleKind::LimitPoint => {
                let lp = LimitPointSolution::new(sys, z)?;
                let weyl = scalar(lp.m());
                Ok(Self {
                    kind,
                    fs,
                    right: identity(1),
                    lp: Some(lp),
                    weyl,
                })
            }
        }
    }

    pub fn kind(&self) -> TripleKind {
        self.kind
    }

    pub fn z(&self) -> C64 {
        self.fs.z()
    }

    /// `M(z)`.
    pub fn weyl(&self) -> &CMatrix {
        &self.weyl
    }

    /// `γ(z)(t)`, a `2p × dim` matrix.
    pub fn at(&self, t: f64) -> Result<CMatrix> {
        match self.kind {
            TripleKind::FullRegular => Ok(self.fs.eval(t)? * &self.right),
            TripleKind::NeumannLeft => Ok(self.fs.c(t)? * &self.right),
            TripleKind::LimitPoint => {
                let y = self.lp.as_ref().expect("limit-point field").y(t)?;
                Ok(CMatrix::from_column_slice(2, 1, y.as_slice()))
            }
        }
    }

    pub(crate) fn limit_point(&self) -> Option<&LimitPointSolution<'a>> {
        self.lp.as_ref()
    }
}

/// `γ(z)(t)`.
pub fn gamma_field(sys: &CanonicalSystem, kind: TripleKind, z: C64, t: f64) -> Result<CMatrix> {
    GammaField::new(sys, kind, z)?.at(t)
}

/// `(Γ₀, Γ₁)` applied column-wise to functions with values `fa` at `a` and
/// `fb` at the right endpoint (`fb` is ignored by the limit-point triple).
pub fn boundary_values(
    sys: &CanonicalSystem,
    kind: TripleKind,
    fa: &CMatrix,
    fb: &CMatrix,
) -> Result<(CMatrix, CMatrix)> {
    let p = sys.p();
    let s = C64::new(1.0 / SQRT_2, 0.0);
    match kind {
        TripleKind::FullRegular => {
            let j = symplectic_unit(p);
            Ok(((fa + fb) * s, -(j * (fa - fb)) * s))
        }
        TripleKind::NeumannLeft => Ok((fb.rows(p, p).into_owned(), fb.rows(0, p).into_owned())),
        TripleKind::LimitPoint => Ok((fa.rows(1, 1).into_owned(), -fa.rows(0, 1).into_owned())),
    }
}

/// `∫ γ(ζ)(t)* ℋ(t) γ(z)(t) dt` over the whole interval.
pub fn gamma_gram(sys: &CanonicalSystem, kind: TripleKind, z: C64, zeta: C64) -> Result<CMatrix> {
    let gz = GammaField::new(sys, kind, z)?;
    let gzeta = GammaField::new(sys, kind, zeta)?;
    let dim = kind.boundary_dim(sys.p());
    let scale = system_scale(sys, z).max(system_scale(sys, zeta));
    let points = gauss_points(sys, sys.a(), sys.mesh_end(), &[], default_cell(scale))?;
    let mut acc = CMatrix::zeros(dim, dim);
    for (t, w) in points {
        let h = sys.weight_at(t)?;
        acc += gzeta.at(t)?.adjoint() * h * gz.at(t)? * C64::new(w, 0.0);
    }
    if let (Some(a), Some(b)) = (gz.limit_point(), gzeta.limit_point()) {
        acc[(0, 0)] += a.tail_inner(b);
    }
    Ok(acc)
}
