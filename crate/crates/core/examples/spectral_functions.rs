//! Spectral functions by Stieltjes inversion: point masses of the Neumann
//! problem and the absolutely continuous density of the free half line.
//!
//! Run with `cargo run --release --example spectral_functions`.

use canspec::boundary::TripleKind;
use canspec::cansys::CanonicalSystem;
use canspec::herglotz::StieltjesOptions;
use canspec::spectral::{spectral_function, TauParameter};
use canspec::CMatrix;

fn main() -> canspec::Result<()> {
    let opts = StieltjesOptions {
        step: 2e-3,
        ..StieltjesOptions::default()
    };

    let free = CanonicalSystem::free(1, 2.0);
    let tau = TauParameter::constant(CMatrix::zeros(1, 1));
    let sigma = spectral_function(&free, TripleKind::NeumannLeft, &tau, (-6.0, 6.0), &opts)?;
    println!("Neumann problem on [0, 2], τ = 0: atoms at π/2 + kπ with unit weight");
    for (lambda, w) in sigma.atoms() {
        println!("  λ = {lambda:>10.6}   weight = {:.6}", w[(0, 0)].re);
    }

    let sigma = spectral_function(&free, TripleKind::NeumannLeft, &TauParameter::multivalued(1), (-4.0, 4.0), &opts)?;
    println!("\nsame problem, τ = {{0}}×ℂ: atoms at kπ");
    for (lambda, w) in sigma.atoms() {
        println!("  λ = {lambda:>10.6}   weight = {:.6}", w[(0, 0)].re);
    }

    let half_line = CanonicalSystem::free_half_line(1);
    let sigma = spectral_function(&half_line, TripleKind::LimitPoint, &tau, (-2.0, 2.0), &opts)?;
    let density = sigma.ac_density();
    let mid = density.len() / 2;
    println!(
        "\nfree half line: {} density samples, σ'({:.3}) = {:.10} (1/π = {:.10})",
        density.len(),
        sigma.ac_grid()[mid],
        density[mid][(0, 0)].re,
        std::f64::consts::FRAC_1_PI
    );
    println!("σ(2) − σ(−2) = {:.8}", sigma.increment(-2.0, 2.0)[(0, 0)].re);
    Ok(())
}
