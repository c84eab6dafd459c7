//! Configuration, file formats and commands of the `univalence-lab` tool.

// NaN-rejecting range checks are written as negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod numfmt;
pub mod svg;
pub mod table;

use rand::{Rng, SeedableRng};
use univalence_core::C64;

pub use commands::{run, Cli, Command};
pub use config::{parse_config, ConfigError, ProblemSpec};
pub use numfmt::{format_complex, format_float, parse_complex};
pub use svg::render_svg;
pub use table::GridTable;

/// `count` points uniformly distributed in `|z| <= radius`, reproducible
/// from `seed`.
pub fn random_disk_points(seed: u64, count: usize, radius: f64) -> Vec<C64> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            C64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}
