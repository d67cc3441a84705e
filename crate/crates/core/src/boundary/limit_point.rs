//! The limit-point solution `y = s − m·c` of a half-line system with a
//! constant tail, and Weyl disks over growing truncations.

use serde::Serialize;

use crate::cansys::{propagator, CanonicalSystem, FundamentalSolution};
use crate::error::{Error, Result};
use crate::linalg::{format_complex, symplectic_unit, to_complex, CMatrix, CVector, C64};

/// Tail repetitions added one at a time by [`limit_point_m`] before the
/// stride starts doubling.
pub const MAX_TAIL_REPEATS: usize = 64;

/// Number of stride doublings after the single repetitions.
const MAX_DOUBLINGS: usize = 40;

/// Default radius tolerance of [`limit_point_m`].
pub const DEFAULT_DISK_TOL: f64 = 1e-8;

fn check_half_line(sys: &CanonicalSystem) -> Result<()> {
    if sys.is_regular() {
        return Err(Error::NotHalfLine);
    }
    if sys.p() != 1 {
        return Err(Error::UnsupportedDimension { p: sys.p() });
    }
    Ok(())
}

fn check_nonreal(z: C64) -> Result<()> {
    if z.im == 0.0 || !z.im.is_finite() || !z.re.is_finite() {
        return Err(Error::NotInHalfPlane { z: format_complex(z) });
    }
    Ok(())
}

/// The square-integrable solution `y(·, z)` and the coefficient `m(z)`.
///
/// On the tail the solution is `e^{κ(t − T₀)} y(T₀)` with `Re κ < 0`, where
/// `T₀` is the end of the finite mesh.
#[derive(Debug, Clone)]
pub struct LimitPointSolution<'a> {
    fs: FundamentalSolution<'a>,
    conjugated: bool,
    m: C64,
    kappa: C64,
    y_end: CVector,
}

impl<'a> LimitPointSolution<'a> {
    pub fn new(sys: &'a CanonicalSystem, z: C64) -> Result<Self> {
        check_half_line(sys)?;
        check_nonreal(z)?;
        // Real coefficients: y(·, z̄) = conj y(·, z), so work in ℂ⁺.
        let conjugated = z.im < 0.0;
        let zu = if conjugated { z.conj() } else { z };
        let fs = FundamentalSolution::new(sys, zu);
        let g = fs.tail_generator().expect("half-line systems have a tail");
        let (g11, g12, g21, g22) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
        let det = g11 * g22 - g12 * g21;
        let mut kappa = (-det).sqrt();
        if kappa.re > 0.0 {
            kappa = -kappa;
        }
        if kappa.re.abs() <= 1e-14 * (1.0 + kappa.norm()) {
            return Err(Error::NoShrinkage {
                radius: f64::INFINITY,
                truncation: sys.mesh_end(),
            });
        }
        let v1 = CVector::from_vec(vec![g12, kappa - g11]);
        let v2 = CVector::from_vec(vec![kappa - g22, g21]);
        let v = if v1.norm() >= v2.norm() { v1 } else { v2 };
        // U⁻¹ = −𝒥Uᵀ𝒥 for 𝒥-symplectic U.
        let j = symplectic_unit(1);
        let u_end = fs.at_mesh_end();
        let w = -(&j * u_end.transpose() * &j) * &v;
        if w[1].norm() <= 1e-300 {
            return Err(Error::SpectralPoint {
                z: format_complex(z),
                cond: f64::INFINITY,
            });
        }
        let m = -w[0] / w[1];
        let y_end = u_end * CVector::from_vec(vec![-m, C64::new(1.0, 0.0)]);
        Ok(Self {
            fs,
            conjugated,
            m,
            kappa,
            y_end,
        })
    }

    pub fn z(&self) -> C64 {
        if self.conjugated {
            self.fs.z().conj()
        } else {
            self.fs.z()
        }
    }

    pub fn m(&self) -> C64 {
        if self.conjugated {
            self.m.conj()
        } else {
            self.m
        }
    }

    /// Decay exponent on the tail (for the point `z` itself).
    pub fn kappa(&self) -> C64 {
        if self.conjugated {
            self.kappa.conj()
        } else {
            self.kappa
        }
    }

    fn fix(&self, v: CVector) -> CVector {
        if self.conjugated {
            v.map(|x| x.conj())
        } else {
            v
        }
    }

    /// `y(t, z)` as a 2-vector.
    pub fn y(&self, t: f64) -> Result<CVector> {
        let t0 = self.fs.system().mesh_end();
        let raw = if t > t0 {
            &self.y_end * (self.kappa * (t - t0)).exp()
        } else {
            self.fs.eval(t)? * CVector::from_vec(vec![-self.m, C64::new(1.0, 0.0)])
        };
        Ok(self.fix(raw))
    }

    /// `c(t, z)`.
    pub fn c(&self, t: f64) -> Result<CVector> {
        let col = self.fs.eval(t)?.column(0).into_owned();
        Ok(self.fix(col))
    }

    /// `y(T₀, z)` at the end of the finite mesh.
    pub fn y_at_mesh_end(&self) -> CVector {
        self.fix(self.y_end.clone())
    }

    /// `∫_{T₀}^∞ y(t, ζ)* ℋ y(t, z) dt` where `self` is at `z`, `other` at ζ.
    pub fn tail_inner(&self, other: &LimitPointSolution<'_>) -> C64 {
        let sys = self.fs.system();
        let h = to_complex(&sys.tail().expect("half-line systems have a tail").h);
        let a = other.y_at_mesh_end();
        let b = self.y_at_mesh_end();
        let num = (a.adjoint() * h * b)[(0, 0)];
        -num / (self.kappa() + other.kappa().conj())
    }
}

/// `m(z)` of a half-line system from the decaying tail solution.
pub fn m_function(sys: &CanonicalSystem, z: C64) -> Result<C64> {
    Ok(LimitPointSolution::new(sys, z)?.m())
}

/// The Weyl disk of a truncated half-line problem.
#[derive(Debug, Clone, Serialize)]
pub struct WeylDisk {
    #[serde(serialize_with = "serialize_complex")]
    pub z: C64,
    #[serde(serialize_with = "serialize_complex")]
    pub center: C64,
    pub radius: f64,
    /// Truncation point `T` of the interval `[a, T]`.
    pub truncation: f64,
    /// `(T, radius)` for every truncation tried, in order.
    pub history: Vec<(f64, f64)>,
}

fn serialize_complex<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

/// Center and radius of `{(s₁ + k s₂)/(c₁ + k c₂) : k ∈ ℝ ∪ {∞}}`.
fn disk(u: &CMatrix) -> Option<(C64, f64)> {
    let (c1, s1, c2, s2) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    let (a, b, c, d) = (s2, s1, c2, c1);
    let big_a = d.conj() * c - d * c.conj();
    let big_b = d * a.conj() - b.conj() * c;
    if big_a.norm() == 0.0 {
        return None;
    }
    let center = big_b.conj() / big_a;
    let radius = (a * d - b * c).norm() / big_a.norm();
    if center.re.is_finite() && center.im.is_finite() && radius.is_finite() {
        Some((center, radius))
    } else {
        None
    }
}

/// `m(z)` as the limit of nested Weyl disks over truncations `T = T₀ + k·ℓ`,
/// where ℓ is the tail segment length, `k = 0, …, 64` and then `k` grows by
/// doubling strides.
pub fn limit_point_m(sys: &CanonicalSystem, z: C64, tol: f64) -> Result<(C64, WeylDisk)> {
    check_half_line(sys)?;
    if !(z.im > 0.0) {
        return Err(Error::NotInHalfPlane { z: format_complex(z) });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("disk tolerance must be positive, got {tol}")));
    }
    let fs = FundamentalSolution::new(sys, z);
    let tail = sys.tail().expect("half-line systems have a tail");
    let mut step = propagator(tail, z, tail.length);
    let mut u = fs.at_mesh_end().clone();
    let mut history = Vec::new();
    let mut last: Option<(C64, f64, f64)> = None;
    let (mut repeats, mut stride) = (0usize, 1usize);
    for k in 0..=MAX_TAIL_REPEATS + MAX_DOUBLINGS {
        if k > MAX_TAIL_REPEATS {
            step = &step * &step;
            stride *= 2;
        }
        if k > 0 {
            u = &step * &u;
            repeats += stride;
        }
        let t = sys.mesh_end() + repeats as f64 * tail.length;
        let Some((center, radius)) = disk(&u) else {
            if last.is_some() {
                break;
            }
            continue;
        };
        history.push((t, radius));
        last = Some((center, radius, t));
        if radius <= tol {
            return Ok((
                center,
                WeylDisk {
                    z,
                    center,
                    radius,
                    truncation: t,
                    history,
                },
            ));
        }
    }
    let (radius, truncation) = last.map(|(_, r, t)| (r, t)).unwrap_or((f64::INFINITY, sys.mesh_end()));
    Err(Error::NoShrinkage { radius, truncation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cansys::Segment;
    use crate::linalg::c64;
    use nalgebra::DMatrix;

    #[test]
    fn free_half_line_has_m_equal_i() {
        let sys = CanonicalSystem::free_half_line(1);
        for z in [c64(0.0, 1.0), c64(2.0, 0.5), c64(-1.0, 3.0)] {
            assert!((m_function(&sys, z).unwrap() - c64(0.0, 1.0)).norm() < 1e-12);
            assert!((m_function(&sys, z.conj()).unwrap() - c64(0.0, -1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn free_disk_at_i_matches_closed_form() {
        let sys = CanonicalSystem::half_line(1, 0.0, vec![Segment::free(1, 4.0)], Segment::free(1, 1.0)).unwrap();
        let fs = FundamentalSolution::new(&sys, c64(0.0, 1.0));
        let (center, radius) = disk(&fs.eval(4.0).unwrap()).unwrap();
        // At t = 4 the rotation angle is 2i; the disk has the diameter
        // [i·tanh 2, i·coth 2], so center i·coth 4 and radius 1/sinh 4.
        assert!((center - c64(0.0, 1.0 / 4f64.tanh())).norm() < 1e-12);
        assert!((radius - 1.0 / 4f64.sinh()).abs() < 1e-12);
    }

    #[test]
    fn disks_converge_and_nest() {
        let sys = CanonicalSystem::free_half_line(1);
        for z in [c64(0.0, 1.0), c64(1.0, 1.0), c64(0.0, 2.0)] {
            let (m, disk) = limit_point_m(&sys, z, 1e-8).unwrap();
            assert!((m - c64(0.0, 1.0)).norm() < 1e-6);
            for w in disk.history.windows(2) {
                assert!(w[1].1 <= w[0].1 + 1e-12);
            }
        }
        assert!(matches!(
            limit_point_m(&sys, c64(1.0, 0.0), 1e-8),
            Err(Error::NotInHalfPlane { .. })
        ));
    }

    #[test]
    fn slow_decay_converges_with_doubling_strides() {
        let sys = CanonicalSystem::free_half_line(1);
        let (m, disk) = limit_point_m(&sys, c64(3.0, 0.01), 1e-8).unwrap();
        assert!((m - c64(0.0, 1.0)).norm() < 1e-6);
        assert!(disk.truncation > 64.0);
    }

    #[test]
    fn no_shrinkage_below_representable_radius() {
        let sys = CanonicalSystem::free_half_line(1);
        assert!(matches!(
            limit_point_m(&sys, c64(0.0, 1e-14), DEFAULT_DISK_TOL),
            Err(Error::NoShrinkage { .. })
        ));
    }

    #[test]
    fn exact_m_agrees_with_disks_on_nontrivial_system() {
        let h = DMatrix::from_row_slice(2, 2, &[0.8, 0.2, 0.2, 0.2]);
        let f = DMatrix::from_row_slice(2, 2, &[0.3, 0.1, 0.1, -0.2]);
        let sys = CanonicalSystem::half_line(
            1,
            0.0,
            vec![Segment::new(0.7, h, f), Segment::free(1, 0.5)],
            Segment::with_weight(0.5, DMatrix::from_row_slice(2, 2, &[0.6, 0.1, 0.1, 0.4])),
        )
        .unwrap();
        for z in [c64(0.3, 1.0), c64(-1.0, 2.0)] {
            let exact = m_function(&sys, z).unwrap();
            let (disk_m, _) = limit_point_m(&sys, z, 1e-9).unwrap();
            assert!((exact - disk_m).norm() < 1e-7, "{exact} vs {disk_m}");
            assert!(exact.im > 0.0);
        }
    }

    #[test]
    fn solution_decays_on_tail() {
        let sys = CanonicalSystem::free_half_line(1);
        let lp = LimitPointSolution::new(&sys, c64(0.0, 1.0)).unwrap();
        let y0 = lp.y(0.0).unwrap();
        let y10 = lp.y(10.0).unwrap();
        assert!((y10.norm() / y0.norm() - (-5f64).exp()).abs() < 1e-12);
        // Tail norm ∫₀^∞ y*ℋy = Im m / Im z = 1.
        let other = LimitPointSolution::new(&sys, c64(0.0, 1.0)).unwrap();
        assert!((lp.tail_inner(&other) - c64(1.0, 0.0)).norm() < 1e-12);
    }
}
