//! Admissibility of parameters τ for systems ending in an indivisible
//! interval of type ψ: τ is refused when it approaches the endpoint type.
//!
//! Run with `cargo run --release --example admissibility`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use canspec::boundary::TripleKind;
use canspec::cansys::{CanonicalSystem, Segment};
use canspec::herglotz::HerglotzRep;
use canspec::spectral::{admissibility_test, TauParameter};
use canspec::{CMatrix, C64};

fn main() -> canspec::Result<()> {
    let one = |x: f64| CMatrix::from_element(1, 1, C64::new(x, 0.0));
    let taus = [
        ("τ = 0", TauParameter::constant(one(0.0))),
        ("τ = 1", TauParameter::constant(one(1.0))),
        ("τ = z", TauParameter::HerglotzFunction(HerglotzRep::new(one(0.0), one(1.0), vec![], None)?)),
        ("τ = {0}×ℂ", TauParameter::multivalued(1)),
    ];
    for (label, psi) in [("ψ = 0", Some(0.0)), ("ψ = π/4", Some(FRAC_PI_4)), ("ψ = π/2", Some(FRAC_PI_2)), ("none", None)] {
        let mut segments = vec![Segment::free(1, 1.0)];
        if let Some(psi) = psi {
            segments.push(Segment::indivisible(0.5, psi));
        }
        let sys = CanonicalSystem::regular(1, 0.0, segments)?;
        println!("end type {label}");
        for (name, tau) in &taus {
            let report = admissibility_test(&sys, TripleKind::NeumannLeft, tau)?;
            println!("  {name:<10} {:<13} {}", report.verdict.to_string(), report.criterion);
        }
    }
    Ok(())
}
