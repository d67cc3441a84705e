//! L-resolvents for several kinds of parameter τ, and the agreement of the
//! boundary-pair route with the left transform.
//!
//! Run with `cargo run --example l_resolvents`.

use canspec::boundary::TripleKind;
use canspec::cansys::{CanonicalSystem, Segment};
use canspec::herglotz::HerglotzRep;
use canspec::spectral::{l_resolvent, TauParameter};
use canspec::{CMatrix, C64};
use nalgebra::DMatrix;

fn main() -> canspec::Result<()> {
    let free = CanonicalSystem::free(1, 2.0);
    let z = C64::new(0.4, 0.7);
    let one = |x: f64| CMatrix::from_element(1, 1, C64::new(x, 0.0));

    let zero = TauParameter::constant(one(0.0));
    let r = l_resolvent(&free, TripleKind::NeumannLeft, &zero, z)?;
    println!("Neumann, τ = 0:      r(z) = {:.12}   tan z = {:.12}", r[(0, 0)], z.tan());

    let r = l_resolvent(&free, TripleKind::NeumannLeft, &TauParameter::multivalued(1), z)?;
    println!("Neumann, τ = {{0}}×ℂ: r(z) = {:.12}  −cot z = {:.12}", r[(0, 0)], -z.cos() / z.sin());

    // τ(z) = 0.5 + z + 0.2/(1 − z) as a Herglotz function.
    let rep = HerglotzRep::new(one(0.5), one(1.0), vec![(1.0, one(0.2))], None)?;
    let r = l_resolvent(&free, TripleKind::NeumannLeft, &TauParameter::HerglotzFunction(rep), z)?;
    println!("Neumann, Herglotz τ: r(z) = {:.12}", r[(0, 0)]);

    // Separated boundary conditions for the full triple, in two forms.
    let h = DMatrix::from_row_slice(2, 2, &[0.7, 0.2, 0.2, 0.3]);
    let f = DMatrix::from_row_slice(2, 2, &[0.5, 0.1, 0.1, 0.0]);
    let sys = CanonicalSystem::regular(1, 0.0, vec![Segment::new(1.2, h, f), Segment::free(1, 0.6)])?;
    let t = DMatrix::from_row_slice(2, 2, &[0.3, 0.1, 0.1, -0.2]);
    let j = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    let pair = TauParameter::BoundaryPair {
        a: &t - &j,
        b: &t + &j,
    };
    let r = l_resolvent(&sys, TripleKind::FullRegular, &pair, z)?;
    println!("\nfull triple, boundary pair (A, B):\n{r:.10}");
    Ok(())
}
