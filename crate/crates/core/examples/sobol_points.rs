//! Scrambled Sobol' points: the first few points, their Gaussian images, and
//! the balance of a 2^m block.

use meandim::sampling::{prng_points, sobol_points, to_gaussian, DirectionNumbers, SobolGenerator};

fn main() -> meandim::Result<()> {
    let gen = SobolGenerator::new(DirectionNumbers::embedded(), 3)?.scrambled(2024);
    let block = to_gaussian(sobol_points(&gen, 1 << 10)?);
    for i in 0..4 {
        println!("u = {:?}  z = {:?}", block.point(i), block.gaussian(i).unwrap());
    }

    // Every dyadic interval of width 1/16 holds exactly 2^10 / 16 points.
    let mut counts = [0usize; 16];
    for u in block.column(0) {
        counts[(u * 16.0) as usize] += 1;
    }
    println!("sobol counts per 1/16 interval: {counts:?}");

    let mc = prng_points(2024, 1 << 10, 3)?;
    let mut counts = [0usize; 16];
    for u in mc.column(0) {
        counts[(u * 16.0) as usize] += 1;
    }
    println!("prng  counts per 1/16 interval: {counts:?}");
    Ok(())
}
