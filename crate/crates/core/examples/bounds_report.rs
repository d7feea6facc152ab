//! Lower, exact and upper values side by side for each integrand family.

use meandim::analytic::{holder_bound_least_sparse, BoundReport};
use meandim::ridge::{kink_moments, UnitVector};

fn main() -> meandim::Result<()> {
    println!("kink, t = 0:\n{}", BoundReport::kink(0.0)?);
    for d in [4, 64] {
        println!("jump, d = {d}, t = 0:\n{}", BoundReport::jump(&UnitVector::equal(d)?, 0.0)?);
    }
    println!("jump, d = 64, t = 2:\n{}", BoundReport::jump(&UnitVector::equal(64)?, 2.0)?);
    println!("preintegrated jump, d = 64:\n{}", BoundReport::preint(&UnitVector::equal(64)?, 0.0, 0)?);
    println!("cusp, d = 5, p = 1:\n{}", BoundReport::cusp(5, 1.0)?);

    // Hölder-1/2 profiles in the least sparse direction grow like √d.
    let sigma2 = kink_moments(0.0).1;
    for d in [16, 256, 4096] {
        println!("holder alpha = 1/2, d = {d}: {:.3}", holder_bound_least_sparse(1.0, 0.5, d, sigma2)?);
    }
    Ok(())
}
