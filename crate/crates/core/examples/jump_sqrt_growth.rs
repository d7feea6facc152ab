//! The jump `1{θᵀx > 0}` with equal weights: ν grows like `(2√2/π)√d`.
//! Symmetric three-point estimates against the exact law up to d = 2^20.

use std::f64::consts::{PI, SQRT_2};

use meandim::analytic::jump_exact_t0;
use meandim::meandim::{estimate_symmetric_3d, EstimatorConfig};
use meandim::ridge::{Profile, UnitVector};

fn main() -> meandim::Result<()> {
    let cfg = EstimatorConfig {
        n_points: 1 << 14,
        ..EstimatorConfig::default()
    };
    println!("{:>8} {:>12} {:>10} {:>12} {:>10}", "d", "estimate", "se", "exact", "nu/sqrt(d)");
    for k in (2..=20).step_by(3) {
        let d = 1usize << k;
        let est = estimate_symmetric_3d(&Profile::Jump { t: 0.0 }, d, &cfg)?;
        let exact = jump_exact_t0(&UnitVector::equal(d)?);
        println!(
            "{d:>8} {:>12.4} {:>10.2e} {exact:>12.4} {:>10.5}",
            est.nu_hat,
            est.std_error,
            est.nu_hat / (d as f64).sqrt()
        );
    }
    println!("limit of nu/sqrt(d): {:.5}", 2.0 * SQRT_2 / PI);
    Ok(())
}
