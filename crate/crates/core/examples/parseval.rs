//! The generalized Fourier transform is an isometry onto L²(σ): Parseval's
//! identity for a Gaussian profile, and the Bessel inequality for half of σ.
//!
//! Run with `cargo run --release --example parseval`.

use canspec::boundary::TripleKind;
use canspec::cansys::CanonicalSystem;
use canspec::herglotz::StieltjesOptions;
use canspec::quadrature::TestFunction;
use canspec::spectral::{bessel_check, parseval_check, spectral_function, TauParameter};
use canspec::{CMatrix, CVector, C64};

fn bump(center: f64, width: f64) -> TestFunction {
    TestFunction::new(2, (center - 6.0 * width, center + 6.0 * width), move |t| {
        let g = (-0.5 * ((t - center) / width).powi(2)).exp();
        CVector::from_vec(vec![C64::new(0.8 * g, 0.0), C64::new(-0.6 * g, 0.0)])
    })
}

fn main() -> canspec::Result<()> {
    let sys = CanonicalSystem::free(1, 2.0);
    let kind = TripleKind::NeumannLeft;
    let opts = StieltjesOptions {
        step: 5e-3,
        ..StieltjesOptions::default()
    };
    let sigma = spectral_function(&sys, kind, &TauParameter::constant(CMatrix::zeros(1, 1)), (-50.0, 50.0), &opts)?;
    let f = bump(1.0, 0.15);

    let report = parseval_check(&sys, kind, &sigma, &f, &f)?;
    println!("‖f‖² in L²(H)  = {:.10}", report.lhs.re);
    println!("‖𝓕f‖² in L²(σ) = {:.10}", report.rhs.re);
    println!("relative defect = {:.3e}", report.defect);

    let (lhs, rhs, holds) = bessel_check(&sys, kind, &sigma.scaled(0.5), &f)?;
    println!("\nwith σ halved: {rhs:.6} ≤ {lhs:.6} is {holds}, defect {:.3}", 1.0 - rhs / lhs);
    Ok(())
}
