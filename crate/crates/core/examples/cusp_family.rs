//! The cusp `(Σx_j − (d−1))₊^p` on the unit cube: closed form against
//! pick-freeze estimates.

use meandim::analytic::cusp_mean_dimension;
use meandim::meandim::{estimate_pick_freeze, EstimatorConfig};
use meandim::ridge::CuspIntegrand;

fn main() -> meandim::Result<()> {
    let cfg = EstimatorConfig {
        n_points: 1 << 14,
        ..EstimatorConfig::default()
    };
    // The support has volume 1/d!, so past d = 5 or so a few thousand points
    // rarely land in it and the estimate collapses to 0.
    for p in [0.0, 1.0, 2.0] {
        for d in [2, 3, 5] {
            let exact = cusp_mean_dimension(d, p)?;
            let est = estimate_pick_freeze(&CuspIntegrand::new(d, p)?, &cfg)?;
            println!(
                "p = {p}  d = {d:2}  exact {exact:.6}  estimate {:.6} ± {:.1e}",
                est.nu_hat, est.std_error
            );
        }
    }
    for d in [10, 40, 160] {
        println!("p = 0, d = {d}: nu - (d - 2) = {:.4}", cusp_mean_dimension(d, 0.0)? - (d as f64 - 2.0));
    }
    Ok(())
}
