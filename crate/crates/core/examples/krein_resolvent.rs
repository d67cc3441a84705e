//! Resolvent of a self-adjoint extension by the Krein formula, checked
//! against a direct solution of the boundary-value problem.
//!
//! Run with `cargo run --example krein_resolvent`.

use canspec::boundary::{extension_resolvent, extension_resolvent_direct, TripleKind};
use canspec::cansys::{CanonicalSystem, Segment};
use canspec::linrel::MatrixPair;
use canspec::quadrature::TestFunction;
use canspec::{CMatrix, CVector, C64};
use nalgebra::DMatrix;

fn main() -> canspec::Result<()> {
    let h = DMatrix::from_row_slice(2, 2, &[0.7, 0.2, 0.2, 0.3]);
    let f = DMatrix::from_row_slice(2, 2, &[0.5, 0.1, 0.1, 0.0]);
    let sys = CanonicalSystem::regular(1, 0.0, vec![Segment::new(1.2, h, f), Segment::free(1, 0.6)])?;
    let g = TestFunction::new(2, (0.2, 1.5), |t| {
        CVector::from_vec(vec![C64::new(t.sin(), 0.0), C64::new(1.0 - t, 0.5 * t)])
    });
    let tau = CMatrix::from_row_slice(2, 2, &[C64::new(0.3, 0.0), C64::new(0.1, 0.0), C64::new(0.1, 0.0), C64::new(-0.2, 0.0)]);
    let pair = MatrixPair::new(tau, CMatrix::identity(2, 2));
    let z = C64::new(0.5, 0.8);
    let at = [0.1, 0.6, 1.1, 1.7];

    let krein = extension_resolvent(&sys, TripleKind::FullRegular, &pair, z, &g, &at)?;
    let direct = extension_resolvent_direct(&sys, &pair, z, &g, &at)?;
    for ((t, a), b) in at.iter().zip(&krein).zip(&direct) {
        println!("t = {t:.1}: |Krein − direct| = {:.2e}   value {:.6}", (a - b).norm(), a[0]);
    }
    Ok(())
}
