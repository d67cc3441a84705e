//! Randomized structural properties over seeded piecewise systems.

mod common;

use canspec::boundary::{resolvent_matrix_fn, weyl_function, Side, TripleKind};
use canspec::cansys::monodromy;
use canspec::cli::{parse_complex, parse_real_grid};
use canspec::jmoebius::j_unitarity_defect;
use canspec::CMatrix;
use common::{c, j_unit, random_system};
use proptest::prelude::*;

fn upper_half_plane() -> impl Strategy<Value = (f64, f64)> {
    (-4.0..4.0f64, 0.1..3.0f64)
}

fn min_eigenvalue_of_imag_part(m: &CMatrix) -> f64 {
    let im = (m - m.adjoint()) * c(0.0, -0.5);
    im.symmetric_eigenvalues().iter().fold(f64::INFINITY, |a, &b| a.min(b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monodromy_is_j_symplectic(seed in 0u64..10_000, p in 1usize..=2, re in -5.0..5.0f64, im in -3.0..3.0f64) {
        let sys = random_system(seed, p, 6);
        let z = c(re, im);
        let u = monodromy(&sys, z).unwrap();
        let u_bar = monodromy(&sys, z.conj()).unwrap();
        let j = j_unit(p);
        let defect = (u_bar.adjoint() * &j * &u - &j).norm();
        prop_assert!(defect < 1e-9 * (1.0 + u.norm() * u_bar.norm()), "defect {defect}");
    }

    #[test]
    fn weyl_functions_are_herglotz_and_symmetric(seed in 0u64..10_000, p in 1usize..=2, (re, im) in upper_half_plane()) {
        let sys = random_system(seed, p, 5);
        let z = c(re, im);
        for kind in [TripleKind::FullRegular, TripleKind::NeumannLeft] {
            let Ok(m) = weyl_function(&sys, kind, z) else { continue };
            let scale = 1.0 + m.norm();
            prop_assert!(min_eigenvalue_of_imag_part(&m) >= -1e-10 * scale, "{kind}");
            let m_bar = weyl_function(&sys, kind, z.conj()).unwrap();
            prop_assert!((m_bar - m.adjoint()).norm() <= 1e-10 * scale, "{kind}");
        }
    }

    #[test]
    fn resolvent_matrices_are_j_unitary(seed in 0u64..10_000, p in 1usize..=2, re in -4.0..4.0f64, im in -2.0..2.0f64) {
        let sys = random_system(seed, p, 5);
        let z = c(re, im);
        for kind in [TripleKind::FullRegular, TripleKind::NeumannLeft] {
            for side in [Side::Left, Side::Right] {
                let w = resolvent_matrix_fn(&sys, kind, side).unwrap();
                if let Ok(defect) = j_unitarity_defect(&w, z) {
                    let size = w.at(z).map(|m| m.norm()).unwrap_or(1.0);
                    prop_assert!(defect < 1e-9 * (1.0 + size * size), "{kind} {side:?}: {defect}");
                }
            }
        }
    }

    #[test]
    fn complex_literals_round_trip(re in -1e6..1e6f64, im in -1e6..1e6f64) {
        let text = format!("{re}{im:+}i");
        prop_assert_eq!(parse_complex(&text).unwrap(), c(re, im));
        prop_assert_eq!(parse_complex(&format!("{re}")).unwrap(), c(re, 0.0));
    }

    #[test]
    fn real_grids_are_increasing_and_hit_both_ends(a in -100.0..100.0f64, len in 0.1..50.0f64, n in 2usize..500) {
        let b = a + len;
        let grid = parse_real_grid(&format!("{a}:{b}:{n}")).unwrap();
        prop_assert_eq!(grid.len(), n);
        prop_assert_eq!(grid[0], a);
        prop_assert!((grid[n - 1] - b).abs() <= 1e-12 * (1.0 + b.abs()));
        prop_assert!(grid.windows(2).all(|w| w[1] > w[0]));
    }
}
