//! Gaussian distribution and quantile functions, Owen's T, absolute moments.

use meandim::special::{abs_moment, log_gamma, norm_cdf, norm_quantile, owens_t, step_variance};

fn main() -> meandim::Result<()> {
    for x in [-8.0, -2.0, 0.0, 1.5] {
        println!("Phi({x:5.1}) = {:.6e}", norm_cdf(x));
    }
    for p in [1e-12, 0.025, 0.5, 0.975] {
        println!("Phi^-1({p}) = {:.12}", norm_quantile(p)?);
    }
    println!("Phi(t)Phi(-t) at t = 2: {:.8}", step_variance(2.0));
    // T(h, 1) = Phi(h)Phi(-h)/2
    println!("T(0.7, 1) = {:.12}  vs {:.12}", owens_t(0.7, 1.0)?, 0.5 * step_variance(0.7));
    for eta in [1.0, 2.0, 4.0] {
        println!("E|Z|^{eta} = {:.12}", abs_moment(eta)?);
    }
    println!("ln Gamma(100.5) = {:.10}", log_gamma(100.5)?);
    Ok(())
}
