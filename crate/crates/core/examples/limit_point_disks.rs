//! Nested Weyl disks over growing truncations of a half-line system and
//! their limit, compared with the exact value from the decaying tail solution.
//!
//! Run with `cargo run --example limit_point_disks`.

use canspec::boundary::{limit_point_m, m_function, DEFAULT_DISK_TOL};
use canspec::cansys::{CanonicalSystem, Segment};
use canspec::C64;
use nalgebra::DMatrix;

fn main() -> canspec::Result<()> {
    let h = DMatrix::from_row_slice(2, 2, &[0.8, 0.2, 0.2, 0.2]);
    let f = DMatrix::from_row_slice(2, 2, &[0.3, 0.1, 0.1, -0.2]);
    let tail = Segment::with_weight(0.5, DMatrix::from_row_slice(2, 2, &[0.6, 0.1, 0.1, 0.4]));
    let sys = CanonicalSystem::half_line(1, 0.0, vec![Segment::new(0.7, h, f), Segment::free(1, 0.5)], tail)?;

    for z in [C64::new(0.3, 1.0), C64::new(-1.0, 0.2)] {
        let (m, disk) = limit_point_m(&sys, z, DEFAULT_DISK_TOL)?;
        let exact = m_function(&sys, z)?;
        println!("z = {z:.2}: disk centre {m:.10}, radius {:.2e} at T = {}", disk.radius, disk.truncation);
        println!("           exact m    {exact:.10}");
        for (t, r) in disk.history.iter().step_by((disk.history.len() / 6).max(1)) {
            println!("           T = {t:>8.2}  radius {r:.3e}");
        }
    }
    Ok(())
}
