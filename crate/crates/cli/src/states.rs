//! Seeded generators and grid-adapted packet sizes shared by the commands.

use biortho::GridSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// ChaCha8 seeded from the user seed, one stream per consumer so suites do
/// not shift each other's draws.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// (σ, k_range, x_range) for Gaussian packets on `g`: σ is the geometric
/// mean of the widths that keep the k-space and position-space tails
/// equally far below the grid edges; centers stay within a tenth of the
/// half-extent in both spaces.
pub fn packet_scale(g: &GridSpec<f64>) -> (f64, f64, f64) {
    let k_max = g.k_max();
    let half_box = 0.5 * g.box_length();
    ((k_max / half_box).sqrt(), 0.1 * k_max, 0.1 * half_box)
}
