//! Pick-freeze estimates for the kink `(θᵀx − t)₊`, with the Lipschitz bound
//! `1/σ²(t)` alongside.

use meandim::analytic::kink_upper_bound;
use meandim::meandim::{estimate_pick_freeze, total_index_profile, EstimatorConfig};
use meandim::ridge::{RidgeIntegrand, UnitVector};

fn main() -> meandim::Result<()> {
    let cfg = EstimatorConfig {
        n_points: 1 << 12,
        ..EstimatorConfig::default()
    };
    for t in [-2.0, 0.0, 2.0] {
        for d in [4, 16, 64] {
            let f = RidgeIntegrand::kink(UnitVector::equal(d)?, t);
            let est = estimate_pick_freeze(&f, &cfg)?;
            println!(
                "t = {t:4.1}  d = {d:3}  nu = {:.4} ± {:.4}  (bound {:.4})",
                est.nu_hat,
                est.std_error,
                kink_upper_bound(t)
            );
        }
    }

    // Per-coordinate total indices for an uneven direction.
    let f = RidgeIntegrand::kink(UnitVector::normalize(vec![3.0, 2.0, 1.0, 0.0])?, 0.0);
    let prof = total_index_profile(&f, &cfg)?;
    println!("tau^2 per coordinate: {:?}", prof.tau_hat);
    Ok(())
}
