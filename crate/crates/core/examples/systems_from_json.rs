//! Loading a system from JSON, validating it and computing its monodromy.
//!
//! Run with `cargo run --example systems_from_json`.

use canspec::cansys::{monodromy, validate_system, CanonicalSystem};
use canspec::C64;

const SYSTEM: &str = r#"{
  "p": 1,
  "name": "two-layer",
  "endpoint_right": "regular",
  "segments": [
    {"length": 1.0, "H": [[0.5, 0.0], [0.0, 0.5]]},
    {"length": 0.5, "H": [[0.8, 0.1], [0.1, 0.2]], "F": [[0.0, 0.3], [0.3, 0.0]]}
  ]
}"#;

fn main() -> canspec::Result<()> {
    let sys = CanonicalSystem::from_json(SYSTEM)?;
    let report = validate_system(&sys)?;
    println!("{report:?}");
    for z in [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.5, 0.5)] {
        println!("U(b, {z}) =\n{:.8}", monodromy(&sys, z)?);
    }

    let bad = SYSTEM.replace("0.8, 0.1", "1.8, 0.1");
    match CanonicalSystem::from_json(&bad) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
