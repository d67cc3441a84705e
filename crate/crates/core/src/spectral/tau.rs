//! Nevanlinna parameters τ and their JSON form.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::boundary::TripleKind;
use crate::cansys::CanonicalSystem;
use crate::error::{Error, Result};
use crate::herglotz::HerglotzRep;
use crate::linalg::{hstack, identity, rank, symplectic_unit, to_complex, CMatrix, C64};
use crate::linrel::{LinearRelation, MatrixPair};

/// A parameter of the linear-fractional description of L-resolvents.
#[derive(Debug, Clone)]
pub enum TauParameter {
    /// The constant relation `ker[C  −D] = {(u, u') : Cu = Du'}`.
    ConstantRelation { c: CMatrix, d: CMatrix },
    /// The graph of a Herglotz function.
    HerglotzFunction(HerglotzRep),
    /// Boundary conditions `A f(a) + B f(b) = 0` for the full regular
    /// triple, with constant real `A`, `B`.
    BoundaryPair { a: DMatrix<f64>, b: DMatrix<f64> },
}

impl TauParameter {
    /// The graph of a constant matrix τ.
    pub fn constant(tau: CMatrix) -> Self {
        let p = tau.nrows();
        Self::ConstantRelation { c: tau, d: identity(p) }
    }

    /// The purely multivalued relation `{0} × ℂᵖ`.
    pub fn multivalued(p: usize) -> Self {
        Self::ConstantRelation {
            c: identity(p),
            d: CMatrix::zeros(p, p),
        }
    }

    /// Size of the parameter.
    pub fn dim(&self) -> usize {
        match self {
            Self::ConstantRelation { c, .. } => c.ncols(),
            Self::HerglotzFunction(rep) => rep.p(),
            Self::BoundaryPair { a, .. } => a.ncols(),
        }
    }

    /// Check the structural conditions of the parameter and its size against
    /// the boundary space of `kind`.
    pub fn validate(&self, sys: &CanonicalSystem, kind: TripleKind) -> Result<()> {
        let expected = kind.boundary_dim(sys.p());
        if self.dim() != expected {
            return Err(Error::InvalidInput(format!(
                "τ has size {}, the {kind} triple needs {expected}",
                self.dim()
            )));
        }
        match self {
            Self::ConstantRelation { c, d } => {
                if c.shape() != d.shape() || c.nrows() != c.ncols() {
                    return Err(Error::InvalidInput("C and D must be square of equal size".into()));
                }
                let r = rank(&hstack(c, d));
                if r != c.nrows() {
                    return Err(Error::RankDeficientPair {
                        rank: r,
                        expected: c.nrows(),
                    });
                }
                let sym = c * d.adjoint() - d * c.adjoint();
                if sym.norm() > 1e-10 * (1.0 + c.norm() * d.norm()) {
                    return Err(Error::InvalidInput("pair must satisfy CD* = DC*".into()));
                }
                Ok(())
            }
            Self::HerglotzFunction(_) => Ok(()),
            Self::BoundaryPair { a, b } => {
                if kind != TripleKind::FullRegular {
                    return Err(Error::InvalidInput(
                        "boundary pairs apply to the full regular triple".into(),
                    ));
                }
                let n = sys.n();
                if a.shape() != (n, n) || b.shape() != (n, n) {
                    return Err(Error::InvalidInput(format!("A and B must be {n}×{n}")));
                }
                let (a, b) = (to_complex(a), to_complex(b));
                let r = rank(&hstack(&a, &b));
                if r != n {
                    return Err(Error::RankDeficientPair { rank: r, expected: n });
                }
                let j = symplectic_unit(sys.p());
                let defect = &a * &j * a.transpose() - &b * &j * b.transpose();
                if defect.norm() > 1e-10 * (1.0 + a.norm() * a.norm() + b.norm() * b.norm()) {
                    return Err(Error::InvalidInput("boundary pair must satisfy A𝒥Aᵀ = B𝒥Bᵀ".into()));
                }
                Ok(())
            }
        }
    }

    /// `τ(z)` as a subspace.
    pub fn relation_at(&self, z: C64) -> Result<LinearRelation> {
        match self {
            Self::HerglotzFunction(rep) => Ok(LinearRelation::graph(&rep.eval(z)?)),
            _ => self.pair_at(z)?.relation(),
        }
    }

    /// A pair `(C, D)` with `τ(z) = ker[C  −D]`.
    pub fn pair_at(&self, z: C64) -> Result<MatrixPair> {
        match self {
            Self::ConstantRelation { c, d } => Ok(MatrixPair::new(c.clone(), d.clone())),
            Self::HerglotzFunction(rep) => {
                let (c, d) = LinearRelation::graph(&rep.eval(z)?).kernel_pair();
                Ok(MatrixPair::new(c, d))
            }
            Self::BoundaryPair { a, b } => {
                let (a, b) = (to_complex(a), to_complex(b));
                let p = a.nrows() / 2;
                let half = C64::new(0.5, 0.0);
                let c = (&a + &b) * half;
                let d = (&a - &b) * symplectic_unit(p) * half;
                Ok(MatrixPair::new(c, d))
            }
        }
    }

    /// The boundary pair `(A, B) = (C − D𝒥, C + D𝒥)` of a constant parameter
    /// of the full regular triple.
    pub fn boundary_pair_at(&self, z: C64) -> Result<(CMatrix, CMatrix)> {
        match self {
            Self::BoundaryPair { a, b } => Ok((to_complex(a), to_complex(b))),
            _ => {
                let pair = self.pair_at(z)?;
                let p = pair.c.nrows() / 2;
                if pair.c.nrows() % 2 != 0 {
                    return Err(Error::InvalidInput("boundary pairs need an even size".into()));
                }
                let dj = &pair.d * symplectic_unit(p);
                Ok((&pair.c - &dj, &pair.c + dj))
            }
        }
    }

    /// The real constant τ if the parameter is a constant 1×1 graph.
    pub fn real_scalar(&self) -> Option<f64> {
        match self {
            Self::ConstantRelation { c, d } if c.shape() == (1, 1) && d[(0, 0)].norm() > 0.0 => {
                let t = c[(0, 0)] / d[(0, 0)];
                (t.im.abs() <= 1e-14 * (1.0 + t.re.abs())).then_some(t.re)
            }
            Self::HerglotzFunction(rep) if rep.p() == 1 && rep.is_constant() => Some(rep.alpha()[(0, 0)].re),
            _ => None,
        }
    }
}

/// One point mass of a Herglotz parameter in JSON form.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub lambda: f64,
    pub weight: Vec<Vec<f64>>,
}

/// JSON description of τ. Matrices are real and row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum TauSpec {
    /// `{"type": "constant", "value": [[...]]}`
    Constant { value: Vec<Vec<f64>> },
    /// `{"type": "relation", "C": [[...]], "D": [[...]]}`
    Relation {
        #[serde(rename = "C")]
        c: Vec<Vec<f64>>,
        #[serde(rename = "D")]
        d: Vec<Vec<f64>>,
    },
    /// `{"type": "multivalued", "p": 1}`
    Multivalued { p: usize },
    /// `{"type": "herglotz", "alpha": ..., "beta": ..., "atoms": [...]}`
    Herglotz {
        alpha: Vec<Vec<f64>>,
        beta: Vec<Vec<f64>>,
        #[serde(default)]
        atoms: Vec<AtomSpec>,
    },
    /// `{"type": "boundary_pair", "A": [[...]], "B": [[...]]}`
    BoundaryPair {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        #[serde(rename = "B")]
        b: Vec<Vec<f64>>,
    },
}

fn square(path: &str, rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput(format!("{path}: expected a non-empty square matrix")));
    }
    Ok(DMatrix::from_fn(n, n, |r, c| rows[r][c]))
}

impl TauSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::InvalidInput(format!("tau.{path}: {}", e.inner()))
        })
    }

    pub fn build(&self) -> Result<TauParameter> {
        match self {
            Self::Constant { value } => {
                let m = square("tau.value", value)?;
                if (&m - m.transpose()).norm() > 1e-12 * (1.0 + m.norm()) {
                    return Err(Error::InvalidInput("tau.value: must be symmetric".into()));
                }
                Ok(TauParameter::constant(to_complex(&m)))
            }
            Self::Relation { c, d } => Ok(TauParameter::ConstantRelation {
                c: to_complex(&square("tau.C", c)?),
                d: to_complex(&square("tau.D", d)?),
            }),
            Self::Multivalued { p } => {
                if *p == 0 {
                    return Err(Error::InvalidInput("tau.p: must be at least 1".into()));
                }
                Ok(TauParameter::multivalued(*p))
            }
            Self::Herglotz { alpha, beta, atoms } => {
                let alpha = to_complex(&square("tau.alpha", alpha)?);
                let beta = to_complex(&square("tau.beta", beta)?);
                let atoms = atoms
                    .iter()
                    .enumerate()
                    .map(|(k, a)| Ok((a.lambda, to_complex(&square(&format!("tau.atoms[{k}].weight"), &a.weight)?))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(TauParameter::HerglotzFunction(HerglotzRep::new(alpha, beta, atoms, None)?))
            }
            Self::BoundaryPair { a, b } => Ok(TauParameter::BoundaryPair {
                a: square("tau.A", a)?,
                b: square("tau.B", b)?,
            }),
        }
    }
}

impl TauParameter {
    /// Parse τ from its JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        TauSpec::from_json(text)?.build()
    }
}
