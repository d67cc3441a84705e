//! Weyl functions of the three boundary triples on free systems, compared
//! with their closed forms, plus a Nevanlinna kernel certificate.
//!
//! Run with `cargo run --example weyl_functions`.

use canspec::boundary::{weyl_function, TripleKind};
use canspec::cansys::CanonicalSystem;
use canspec::herglotz::kernel_positivity;
use canspec::C64;

fn main() -> canspec::Result<()> {
    let free = CanonicalSystem::free(1, 2.0);
    let half_line = CanonicalSystem::free_half_line(1);

    println!("{:>14} {:>28} {:>28}", "z", "M₁₁ (full)", "tan(z/2)");
    for z in [C64::new(0.3, 0.5), C64::new(-1.0, 1.0), C64::new(2.0, 0.1)] {
        let m = weyl_function(&free, TripleKind::FullRegular, z)?;
        println!("{z:>14.3} {:>28.12} {:>28.12}", m[(0, 0)], (z / 2.0).tan());
    }

    println!("\n{:>14} {:>28} {:>28}", "z", "M (neumann)", "−cot z");
    for z in [C64::new(0.3, 0.5), C64::new(-1.0, 1.0)] {
        let m = weyl_function(&free, TripleKind::NeumannLeft, z)?;
        println!("{z:>14.3} {:>28.12} {:>28.12}", m[(0, 0)], -z.cos() / z.sin());
    }

    println!("\nlimit-point half line: m(z) should be i");
    for z in [C64::new(0.0, 1.0), C64::new(1.0, 0.5)] {
        let m = weyl_function(&half_line, TripleKind::LimitPoint, z)?;
        println!("  m({z:.2}) = {:.12}", m[(0, 0)]);
    }

    let nodes: Vec<C64> = (1..=6).map(|k| C64::new(0.5 * k as f64 - 1.5, 0.3 * k as f64)).collect();
    let gram = kernel_positivity(|z| weyl_function(&free, TripleKind::FullRegular, z), &nodes)?;
    println!(
        "\nkernel Gram of the full M at 6 nodes: λ_min = {:.3e}, certified = {}",
        gram.min_eigenvalue, gram.certified
    );
    Ok(())
}
