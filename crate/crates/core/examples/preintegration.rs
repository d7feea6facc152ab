//! Integrating one coordinate of a jump out exactly smooths it; compare ν
//! before and after, and the sparse-direction bound.

use meandim::analytic::{jump_exact_t0, preint_bound_sparse, preint_mean_dimension};
use meandim::meandim::{estimate_pick_freeze, EstimatorConfig};
use meandim::ridge::{preint_lipschitz_constant, preintegrate, RidgeIntegrand, UnitVector};

fn main() -> meandim::Result<()> {
    let cfg = EstimatorConfig {
        n_points: 1 << 12,
        ..EstimatorConfig::default()
    };
    for d in [4, 16, 64, 256] {
        let theta = UnitVector::equal(d)?;
        let f = preintegrate(&RidgeIntegrand::jump(theta.clone(), 0.0), 0)?;
        let est = estimate_pick_freeze(&f, &cfg)?;
        println!(
            "d = {d:3}  jump {:.4}  preintegrated {:.4} (est {:.4} ± {:.1e})  bound {:.2}  lipschitz {:.3}",
            jump_exact_t0(&theta),
            preint_mean_dimension(&theta, 0.0, 0)?,
            est.nu_hat,
            est.std_error,
            preint_bound_sparse(&theta, 0.0)?,
            preint_lipschitz_constant(&theta, 0)?
        );
    }

    // One dominant coordinate: integrating it out leaves a nearly linear function.
    let theta = UnitVector::one_big(32, 0.9)?;
    for t in [0.0, 1.0] {
        println!("one big (0.9), d = 32, t = {t}: nu = {:.4}", preint_mean_dimension(&theta, t, 0)?);
    }
    Ok(())
}
