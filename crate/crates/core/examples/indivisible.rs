//! Detection of indivisible intervals, where the Hamiltonian is a rank-one
//! projection of fixed type.
//!
//! Run with `cargo run --example indivisible`.

use std::f64::consts::FRAC_PI_4;

use canspec::cansys::{detect_indivisible, CanonicalSystem, Segment};

fn main() -> canspec::Result<()> {
    let sys = CanonicalSystem::regular(
        1,
        0.0,
        vec![
            Segment::indivisible(0.3, 0.0),
            Segment::indivisible(0.2, 0.0),
            Segment::free(1, 1.0),
            Segment::indivisible(0.4, FRAC_PI_4),
            Segment::indivisible(0.1, 1.2),
        ],
    )?;
    for run in detect_indivisible(&sys)? {
        println!(
            "[{:.2}, {:.2}]  type ψ = {:.4}{}{}",
            run.start,
            run.end,
            run.psi,
            if run.at_left { "  (left end)" } else { "" },
            if run.at_right { "  (right end)" } else { "" },
        );
    }
    Ok(())
}
