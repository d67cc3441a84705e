//! Resolvent matrices of a 2×2 matrix-valued system: J-unitarity and the
//! positivity of the de Branges kernel.
//!
//! Run with `cargo run --example resolvent_matrices`.

use canspec::boundary::{resolvent_matrix_fn, Side, TripleKind};
use canspec::cansys::{CanonicalSystem, Segment};
use canspec::jmoebius::{certify_class_w, j_unitarity_defect};
use canspec::C64;
use nalgebra::DMatrix;

fn main() -> canspec::Result<()> {
    let h = DMatrix::from_row_slice(
        4,
        4,
        &[0.4, 0.1, 0.0, 0.05, 0.1, 0.3, 0.02, 0.0, 0.0, 0.02, 0.2, 0.1, 0.05, 0.0, 0.1, 0.1],
    );
    let f = DMatrix::from_row_slice(
        4,
        4,
        &[0.2, 0.1, 0.0, 0.3, 0.1, -0.1, 0.2, 0.0, 0.0, 0.2, 0.0, 0.1, 0.3, 0.0, 0.1, 0.4],
    );
    let sys = CanonicalSystem::regular(2, 0.0, vec![Segment::new(0.8, h, f), Segment::free(2, 0.5)])?;

    let grid = [C64::new(0.7, 0.0), C64::new(0.2, 0.9), C64::new(-1.5, -0.4), C64::new(3.0, 1.0)];
    let nodes = [C64::new(0.2, 0.9), C64::new(-1.0, 0.5), C64::new(1.5, 2.0)];
    for kind in [TripleKind::FullRegular, TripleKind::NeumannLeft] {
        for side in [Side::Left, Side::Right] {
            let w = resolvent_matrix_fn(&sys, kind, side)?;
            let defect = grid
                .iter()
                .map(|&z| j_unitarity_defect(&w, z))
                .collect::<canspec::Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            let gram = certify_class_w(&w, &nodes)?;
            println!(
                "{kind:>8} {side:<5?}  max ‖WJW(z̄)* − J‖ = {defect:.2e}   kernel λ_min = {:.3e} (certified {})",
                gram.min_eigenvalue, gram.certified
            );
        }
    }
    Ok(())
}
