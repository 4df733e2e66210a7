//! Seeded Gaussian wave packets used as smooth, well-localized test states.
//!
//! Random draws come from `ChaCha8Rng::seed_from_u64(seed)`, which produces the same
//! stream on every platform, so every report built from a seed is portable.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::Picture;
use crate::lattice::{Lattice, TAIL_LIMIT};
use crate::states::{synthesize_sf, AmplitudeSet, SpinorField};
use crate::transforms::FieldJet;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of randomly drawn packets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketOptions {
    /// Momentum-space standard deviation of `|a(k)|^2`'s square root, i.e. `a ~ exp(-(k-k0)^2 / (4 width^2))`.
    pub width: f64,
    /// Centers `k0` are drawn uniformly from `[-k_span, k_span]` per axis.
    pub k_span: f64,
    /// Position offsets `x0` are drawn uniformly from `[-x_span, x_span]` per axis.
    pub x_span: f64,
}

impl PacketOptions {
    /// Balances the position and momentum extents so that both tails sit equally deep
    /// inside the box and the Brillouin zone.
    pub fn for_lattice(lattice: &Lattice) -> Self {
        let box_len = lattice.box_length();
        let k_range = 2.0 * PI / lattice.dx();
        let sigma_x = (box_len / (2.0 * k_range)).sqrt();
        PacketOptions {
            width: 1.0 / (2.0 * sigma_x),
            k_span: 0.04 * k_range,
            x_span: 0.04 * box_len,
        }
    }
}

/// `weight exp(-|k - k0|^2 / (4 width^2) - i k.x0)` on the momentum grid.
pub fn gaussian_profile(
    lattice: &Lattice,
    k0: [f64; 3],
    x0: [f64; 3],
    width: f64,
    weight: Complex64,
) -> Vec<Complex64> {
    (0..lattice.len())
        .map(|p| {
            let k = lattice.momentum(p);
            let mut r2 = 0.0;
            let mut phase = 0.0;
            for a in 0..lattice.dim() {
                r2 += (k[a] - k0[a]).powi(2);
                phase -= k[a] * x0[a];
            }
            weight * Complex64::from_polar((-r2 / (4.0 * width * width)).exp(), phase)
        })
        .collect()
}

fn random_vec(rng: &mut ChaCha8Rng, dim: usize, span: f64) -> [f64; 3] {
    let mut out = [0.0; 3];
    for v in out.iter_mut().take(dim) {
        *v = rng.gen_range(-span..=span);
    }
    out
}

/// Unit-norm amplitude set with an independent random Gaussian in each species.
pub fn random_amplitudes(lattice: &Arc<Lattice>, rng: &mut ChaCha8Rng, opts: &PacketOptions) -> AmplitudeSet {
    let dim = lattice.dim();
    let species = [0, 1, 2, 3].map(|_| {
        let k0 = random_vec(rng, dim, opts.k_span);
        let x0 = random_vec(rng, dim, opts.x_span);
        let weight = Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        gaussian_profile(lattice, k0, x0, opts.width, weight)
    });
    AmplitudeSet::new(lattice, species)
        .expect("profiles are built on the lattice")
        .normalized()
}

/// Unit-norm position-space packet in the given picture (any spinor field is a valid
/// initial condition in every picture).
pub fn random_field(
    lattice: &Arc<Lattice>,
    rng: &mut ChaCha8Rng,
    opts: &PacketOptions,
    picture: Picture,
) -> SpinorField {
    synthesize_sf(&random_amplitudes(lattice, rng, opts), 0.0).with_picture(picture)
}

/// A smooth field together with an unrelated smooth time derivative.
pub fn random_jet(lattice: &Arc<Lattice>, rng: &mut ChaCha8Rng, opts: &PacketOptions, picture: Picture) -> FieldJet {
    let value = random_field(lattice, rng, opts, picture);
    let rate = random_field(lattice, rng, opts, picture);
    FieldJet { value, rate }
}

/// Checks the Nyquist-band and box-edge tail rules on the synthesized `t = 0` field.
pub fn validate_tails(amps: &AmplitudeSet, check_box: bool) -> Result<()> {
    let field = synthesize_sf(amps, 0.0);
    let nyquist = field.nyquist_tail_fraction();
    if nyquist >= TAIL_LIMIT {
        return Err(Error::TailRule {
            rule: "Nyquist-band",
            fraction: nyquist,
            limit: TAIL_LIMIT,
        });
    }
    if check_box {
        let edge = field.box_tail_fraction();
        if edge >= TAIL_LIMIT {
            return Err(Error::TailRule {
                rule: "box-edge",
                fraction: edge,
                limit: TAIL_LIMIT,
            });
        }
    }
    Ok(())
}
