use std::collections::HashMap;

use super::{CanonicalSystem, Segment};
use crate::error::{Error, Result};
use crate::linalg::{blocks, identity, symplectic_unit, to_complex, CMatrix, C64};

/// Generator `−𝒥(zℋ − F)` of the constant-coefficient equation `U' = G U`.
fn generator(seg: &Segment, z: C64) -> CMatrix {
    let p = seg.h.nrows() / 2;
    let h = to_complex(&seg.h);
    let f = to_complex(&seg.f);
    -(symplectic_unit(p) * (h * z - f))
}

/// `exp(len · G)` for one segment: the solution operator over a sub-interval
/// of length `len` inside the segment.
pub fn propagator(seg: &Segment, z: C64, len: f64) -> CMatrix {
    (generator(seg, z) * C64::new(len, 0.0)).exp()
}

/// The matrix solution `U(t, z)` of `𝒥U' + FU = zℋU`, `U(a, z) = I`.
#[derive(Debug, Clone)]
pub struct FundamentalSolution<'a> {
    sys: &'a CanonicalSystem,
    z: C64,
    generators: Vec<CMatrix>,
    tail_generator: Option<CMatrix>,
    /// `U(t_j, z)` at every segment boundary.
    at_breakpoints: Vec<CMatrix>,
}

/// The blocks of `U = [c s] = [[c₁, s₁], [c₂, s₂]]`.
#[derive(Debug, Clone)]
pub struct SolutionBlocks {
    pub c1: CMatrix,
    pub c2: CMatrix,
    pub s1: CMatrix,
    pub s2: CMatrix,
}

impl<'a> FundamentalSolution<'a> {
    pub fn new(sys: &'a CanonicalSystem, z: C64) -> Self {
        let generators: Vec<CMatrix> = sys.segments().iter().map(|s| generator(s, z)).collect();
        let mut at_breakpoints = Vec::with_capacity(generators.len() + 1);
        at_breakpoints.push(identity(sys.n()));
        for (g, s) in generators.iter().zip(sys.segments()) {
            let step = (g * C64::new(s.length, 0.0)).exp();
            let next = step * at_breakpoints.last().unwrap();
            at_breakpoints.push(next);
        }
        Self {
            sys,
            z,
            generators,
            tail_generator: sys.tail().map(|s| generator(s, z)),
            at_breakpoints,
        }
    }

    pub fn z(&self) -> C64 {
        self.z
    }

    pub fn system(&self) -> &CanonicalSystem {
        self.sys
    }

    /// `U(t, z)`.
    pub fn eval(&self, t: f64) -> Result<CMatrix> {
        let k = self.sys.segment_index(t)?;
        let (g, start, t0) = if k == self.generators.len() {
            (
                self.tail_generator.as_ref().expect("half-line systems have a tail"),
                self.at_breakpoints.last().unwrap(),
                self.sys.mesh_end(),
            )
        } else {
            (&self.generators[k], &self.at_breakpoints[k], self.sys.breakpoints()[k])
        };
        let dt = t - t0;
        if dt == 0.0 {
            return Ok(start.clone());
        }
        Ok((g * C64::new(dt, 0.0)).exp() * start)
    }

    /// `U(t, z)` at non-decreasing points `ts`. Inside a segment the solution
    /// is stepped from point to point, and the exponential of each distinct
    /// spacing is computed once, so repeated quadrature patterns are cheap.
    pub fn eval_increasing(&self, ts: &[f64]) -> Result<Vec<CMatrix>> {
        // Spacings closer than 2⁻⁴⁸ share one exponential.
        const SCALE: f64 = (1u64 << 48) as f64;
        let mut out: Vec<CMatrix> = Vec::with_capacity(ts.len());
        let mut cache: HashMap<(usize, i64), CMatrix> = HashMap::new();
        let mut prev: Option<(usize, f64)> = None;
        for &t in ts {
            let k = self.sys.segment_index(t)?;
            let u = match prev {
                Some((pk, pt)) if pk == k && t >= pt && (t - pt) * SCALE < 4e18 => {
                    let dt = t - pt;
                    let g = self.generators.get(k).or(self.tail_generator.as_ref()).expect("segment generator");
                    let step = cache
                        .entry((k, (dt * SCALE).round() as i64))
                        .or_insert_with(|| (g * C64::new(dt, 0.0)).exp());
                    &*step * out.last().expect("previous value")
                }
                _ => self.eval(t)?,
            };
            prev = Some((k, t));
            out.push(u);
        }
        Ok(out)
    }

    /// `U#(t, z) = U(t, z̄)*`, which equals `U(t, z)ᵀ` for real coefficients.
    pub fn eval_sharp(&self, t: f64) -> Result<CMatrix> {
        Ok(self.eval(t)?.transpose())
    }

    pub fn blocks(&self, t: f64) -> Result<SolutionBlocks> {
        let u = self.eval(t)?;
        let (c1, s1, c2, s2) = blocks(&u, self.sys.p());
        Ok(SolutionBlocks { c1, c2, s1, s2 })
    }

    /// First `p` columns `c(t, z)`.
    pub fn c(&self, t: f64) -> Result<CMatrix> {
        let p = self.sys.p();
        Ok(self.eval(t)?.columns(0, p).into_owned())
    }

    /// Last `p` columns `s(t, z)`.
    pub fn s(&self, t: f64) -> Result<CMatrix> {
        let p = self.sys.p();
        Ok(self.eval(t)?.columns(p, p).into_owned())
    }

    /// `U` at the end of the finite mesh.
    pub fn at_mesh_end(&self) -> &CMatrix {
        self.at_breakpoints.last().unwrap()
    }

    /// Generator of the tail segment (half-line systems).
    pub fn tail_generator(&self) -> Option<&CMatrix> {
        self.tail_generator.as_ref()
    }
}

/// `U(b, z)` of a regular system.
pub fn monodromy(sys: &CanonicalSystem, z: C64) -> Result<CMatrix> {
    if !sys.is_regular() {
        return Err(Error::NotRegular);
    }
    let mut u = identity(sys.n());
    for s in sys.segments() {
        u = propagator(s, z, s.length) * u;
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cansys::Segment;
    use crate::linalg::{c64, max_abs_diff};
    use nalgebra::DMatrix;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn stepping_matches_direct_evaluation() {
        let h = DMatrix::from_row_slice(2, 2, &[0.7, 0.2, 0.2, 0.3]);
        let f = DMatrix::from_row_slice(2, 2, &[0.5, 0.1, 0.1, 0.0]);
        let sys = CanonicalSystem::half_line(1, 0.0, vec![Segment::new(1.2, h, f), Segment::free(1, 0.6)], Segment::free(1, 1.0)).unwrap();
        let fs = FundamentalSolution::new(&sys, c64(7.5, 0.3));
        let ts: Vec<f64> = (0..400).map(|k| 0.01 * k as f64 + 0.003 * (k % 3) as f64).collect();
        for (t, u) in ts.iter().zip(fs.eval_increasing(&ts).unwrap()) {
            assert!(max_abs_diff(&u, &fs.eval(*t).unwrap()) < 1e-11, "t = {t}");
        }
    }

    fn rotation(angle: C64) -> CMatrix {
        let (c, s) = (angle.cos(), angle.sin());
        CMatrix::from_row_slice(2, 2, &[c, s, -s, c])
    }

    #[test]
    fn free_system_is_rotation() {
        let sys = CanonicalSystem::free(1, 2.0);
        for z in [c64(0.3, 0.0), c64(1.0, 2.0), c64(-3.0, -0.5)] {
            let u = FundamentalSolution::new(&sys, z);
            for t in [0.0, 0.4, 1.3, 2.0] {
                let expected = rotation(z * t / 2.0);
                assert!(max_abs_diff(&u.eval(t).unwrap(), &expected) < 1e-13);
            }
        }
        let m = monodromy(&sys, c64(FRAC_PI_2, 0.0)).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(-1.0, 0.0), c64(0.0, 0.0)]);
        assert!(max_abs_diff(&m, &expected) < 1e-14);
    }

    #[test]
    fn zero_spectral_parameter_without_potential() {
        let h = DMatrix::from_row_slice(2, 2, &[0.7, 0.1, 0.1, 0.3]);
        let sys = CanonicalSystem::regular(1, 0.0, vec![Segment::with_weight(1.5, h), Segment::free(1, 0.5)]).unwrap();
        let u = FundamentalSolution::new(&sys, c64(0.0, 0.0));
        assert!(max_abs_diff(&u.eval(1.7).unwrap(), &identity(2)) < 1e-15);
        assert!(max_abs_diff(&monodromy(&sys, c64(0.0, 0.0)).unwrap(), &identity(2)) < 1e-15);
    }

    #[test]
    fn blocks_of_free_system() {
        let sys = CanonicalSystem::free(1, 2.0);
        let z = c64(0.8, 0.1);
        let b = FundamentalSolution::new(&sys, z).blocks(2.0).unwrap();
        assert!((b.c1[(0, 0)] - z.cos()).norm() < 1e-13);
        assert!((b.c2[(0, 0)] + z.sin()).norm() < 1e-13);
        assert!((b.s1[(0, 0)] - z.sin()).norm() < 1e-13);
        assert!((b.s2[(0, 0)] - z.cos()).norm() < 1e-13);
    }

    #[test]
    fn monodromy_requires_regular_endpoint() {
        let sys = CanonicalSystem::free_half_line(1);
        assert!(matches!(monodromy(&sys, c64(0.0, 1.0)), Err(Error::NotRegular)));
        let u = FundamentalSolution::new(&sys, c64(0.0, 1.0));
        // Tail continues the free rotation.
        let expected = rotation(c64(0.0, 1.0) * 5.0 / 2.0);
        assert!(max_abs_diff(&u.eval(5.0).unwrap(), &expected) < 1e-12);
    }

    #[test]
    fn out_of_interval() {
        let sys = CanonicalSystem::free(1, 2.0);
        let u = FundamentalSolution::new(&sys, c64(1.0, 0.0));
        assert!(matches!(u.eval(2.5), Err(Error::OutOfInterval { .. })));
        assert!(matches!(u.eval(-0.1), Err(Error::OutOfInterval { .. })));
    }
}
