//! Shared oracles and seeded test systems for the integration tests.
#![allow(dead_code)]

use canspec::cansys::{CanonicalSystem, Segment};
use canspec::quadrature::TestFunction;
use canspec::{CMatrix, CVector, C64};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `𝒥 = [[0, −I], [I, 0]]` of size 2p, written out independently of the library.
pub fn j_unit(p: usize) -> CMatrix {
    let n = 2 * p;
    CMatrix::from_fn(n, n, |r, col| {
        if r + p == col {
            c(-1.0, 0.0)
        } else if col + p == r {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-scale..scale));
    (&a + a.transpose()) * 0.5
}

/// Positive definite weight with unit trace.
fn random_weight(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let h = &a * a.transpose() + DMatrix::identity(n, n) * 0.05;
    let tr = h.trace();
    h / tr
}

/// A regular piecewise-constant system with 1 to `max_segments` segments of
/// length in [0.1, 0.6] on [0, b].
pub fn random_system(seed: u64, p: usize, max_segments: usize) -> CanonicalSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 2 * p;
    let count = rng.random_range(1..=max_segments);
    let segments = (0..count)
        .map(|_| {
            let len = rng.random_range(0.1..0.6);
            let h = random_weight(&mut rng, n);
            let f = random_symmetric(&mut rng, n, 0.5);
            Segment::new(len, h, f)
        })
        .collect();
    CanonicalSystem::regular(p, 0.0, segments).unwrap()
}

/// Monodromy by classical RK4 on `U' = −𝒥(zℋ − F)U` with step at most `h`.
pub fn rk4_monodromy(sys: &CanonicalSystem, z: C64, h: f64) -> CMatrix {
    let n = sys.n();
    let j = j_unit(sys.p());
    let mut u = CMatrix::identity(n, n);
    for seg in sys.segments() {
        let hz = seg.h.map(|x| c(x, 0.0)) * z - seg.f.map(|x| c(x, 0.0));
        let g = -(&j * hz);
        let steps = (seg.length / h).ceil() as usize;
        let dt = c(seg.length / steps as f64, 0.0);
        let half = c(0.5, 0.0);
        for _ in 0..steps {
            let k1 = &g * &u;
            let k2 = &g * (&u + &k1 * dt * half);
            let k3 = &g * (&u + &k2 * dt * half);
            let k4 = &g * (&u + &k3 * dt);
            u += (k1 + k2 * c(2.0, 0.0) + k3 * c(2.0, 0.0) + k4) * (dt / 6.0);
        }
    }
    u
}

/// `exp(−((t − center)/width)²/2)·v`, supported on `center ± 6·width`.
pub fn bump(center: f64, width: f64, v: Vec<f64>) -> TestFunction {
    let n = v.len();
    TestFunction::new(n, (center - 6.0 * width, center + 6.0 * width), move |t| {
        let e = (-0.5 * ((t - center) / width).powi(2)).exp();
        CVector::from_iterator(n, v.iter().map(|x| c(x * e, 0.0)))
    })
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}
