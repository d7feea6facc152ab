//! Writes the kink and jump growth curves as CSV (same rows as
//! `meandim figure`), at a reduced scale that runs in seconds.
//!
//! `cargo run --release --example figure > curves.csv`

use meandim::cli::{run_figure_jumps, run_figure_kinks, write_csv};
use meandim::meandim::EstimatorConfig;

fn main() -> meandim::Result<()> {
    let cfg = EstimatorConfig {
        n_points: 1 << 12,
        ..EstimatorConfig::default()
    };
    let ds: Vec<usize> = (2..=16).step_by(2).map(|k| 1usize << k).collect();
    let mut rows = run_figure_kinks(&ds, &cfg)?;
    rows.extend(run_figure_jumps(&ds, &cfg)?);
    write_csv(&rows, std::io::stdout().lock())
}
