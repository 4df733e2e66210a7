//! Maps between the pictures: `v` (Schrödinger-Foldy <-> Foldy-Wouthuysen), `V+-`
//! (Foldy-Wouthuysen <-> Dirac) and `W = V+ v` (Schrödinger-Foldy <-> Dirac).
//!
//! `v = diag(I_2, C I_2)` conjugates the positron components pointwise in position
//! space. It is only ever applied there; in momentum space it would also reflect
//! `k -> -k`, which is exactly what the position-space route gets for free.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{build_gamma_pd, dirac_hamiltonian, Mat4};
use crate::error::{Error, Result};
use crate::evolve::{evolve, Picture};
use crate::lattice::{apply_omega, Lattice};
use crate::packets::{random_field, rng_from_seed, PacketOptions};
use crate::states::{Realization, SpinorField};

/// Residual ceiling for the intertwining identities (two FFT round trips plus per-mode products).
pub const INTERTWINING_TOLERANCE: f64 = 1e-10;

fn v_picture(p: Picture) -> Picture {
    match p {
        Picture::SchrodingerFoldy => Picture::FoldyWouthuysen,
        Picture::FoldyWouthuysen => Picture::SchrodingerFoldy,
        Picture::Dirac => Picture::Dirac,
    }
}

/// `v`: components 1-2 unchanged, components 3-4 complex-conjugated pointwise.
pub fn apply_v(field: &SpinorField) -> Result<SpinorField> {
    if field.realization() != Realization::Position {
        return Err(Error::Realization {
            expected: Realization::Position,
            found: field.realization(),
        });
    }
    let mut out = field.clone().with_picture(v_picture(field.picture()));
    for comp in &mut out.components_mut()[2..] {
        for v in comp.iter_mut() {
            *v = v.conj();
        }
    }
    Ok(out)
}

/// A field together with its time derivative at one instant, the minimal data on which
/// a first-order operator `d_t + i H` acts.
#[derive(Debug, Clone)]
pub struct FieldJet {
    pub value: SpinorField,
    pub rate: SpinorField,
}

/// Objects the conjugation `v` acts on.
pub trait VConjugate: Sized {
    fn apply_v(&self) -> Result<Self>;
}

impl VConjugate for SpinorField {
    fn apply_v(&self) -> Result<Self> {
        apply_v(self)
    }
}

impl VConjugate for FieldJet {
    /// `v` is time independent and commutes with the real derivative `d_t`.
    fn apply_v(&self) -> Result<Self> {
        Ok(FieldJet {
            value: apply_v(&self.value)?,
            rate: apply_v(&self.rate)?,
        })
    }
}

/// `q -> v q v`. Only meaningful for anti-Hermitian (prime) operators such as `d_t + i H`.
pub fn conjugate_sandwich<T, F>(op: F) -> impl Fn(&T) -> Result<SpinorField>
where
    T: VConjugate,
    F: Fn(&T) -> SpinorField,
{
    move |x| apply_v(&op(&x.apply_v()?).to_position())
}

/// The prime form `d_t + i H` of a picture's equation of motion, acting on jets.
pub fn prime_operator(picture: Picture) -> impl Fn(&FieldJet) -> SpinorField {
    move |jet| {
        let i = Complex64::new(0.0, 1.0);
        let h = hamiltonian_action(picture, &jet.value);
        let out = &jet.rate.to_position() + &h.to_position().scaled(i);
        out.into_realization(jet.value.realization())
    }
}

/// `H f` for the picture's Hamiltonian: `omega`, `gamma^0 omega` or `alpha . p + beta m`.
pub fn hamiltonian_action(picture: Picture, field: &SpinorField) -> SpinorField {
    match picture {
        Picture::SchrodingerFoldy => apply_omega(field),
        Picture::FoldyWouthuysen => apply_omega(field).apply_matrix(&build_gamma_pd()[0]),
        Picture::Dirac => {
            let lattice = Arc::clone(field.lattice());
            let m = lattice.mass();
            field
                .to_momentum()
                .map_spinors(|p, s| dirac_hamiltonian(lattice.momentum(p), m).apply(&s))
                .into_realization(field.realization())
        }
    }
}

/// Per-mode kernels `V+(k)` and `V-(k)`.
///
/// With `d_l -> i k^l`, `V+-(k) = ((omega + m) I -+ gamma . k) / sqrt(2 omega (omega + m))`.
/// The sign is pinned by `V+ (gamma^0 omega) V- = alpha . k + beta m`.
#[derive(Debug, Clone)]
pub struct FWKernel {
    lattice: Arc<Lattice>,
    pub plus_matrices: Vec<Mat4>,
    pub minus_matrices: Vec<Mat4>,
}

/// `V+(k)` (`sign = +1`) or `V-(k)` (`sign = -1`) at physical momentum `k`.
pub fn fw_mode_matrix(k: [f64; 3], mass: f64, sign: f64) -> Mat4 {
    let g = build_gamma_pd();
    let w = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + mass * mass).sqrt();
    let mut gk = Mat4::zero();
    for j in 0..3 {
        gk = gk + g[j + 1].scale_real(k[j]);
    }
    let norm = (2.0 * w * (w + mass)).sqrt();
    (Mat4::identity().scale_real(w + mass) - gk.scale_real(sign)).scale_real(1.0 / norm)
}

pub fn build_fw_kernel(lattice: &Arc<Lattice>) -> FWKernel {
    let m = lattice.mass();
    let (plus_matrices, minus_matrices) = (0..lattice.len())
        .map(|p| {
            let k = lattice.momentum(p);
            (fw_mode_matrix(k, m, 1.0), fw_mode_matrix(k, m, -1.0))
        })
        .unzip();
    FWKernel {
        lattice: Arc::clone(lattice),
        plus_matrices,
        minus_matrices,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

impl FWKernel {
    /// Applies `V+` (forward, FW -> Dirac) or `V-` (inverse, Dirac -> FW) mode by mode.
    pub fn apply(&self, field: &SpinorField, direction: Direction) -> SpinorField {
        assert!(**field.lattice() == *self.lattice, "kernel built for a different lattice");
        let (mats, picture) = match direction {
            Direction::Forward => (&self.plus_matrices, Picture::Dirac),
            Direction::Inverse => (&self.minus_matrices, Picture::FoldyWouthuysen),
        };
        field
            .to_momentum()
            .map_spinors(|p, s| mats[p].apply(&s))
            .into_realization(field.realization())
            .with_picture(picture)
    }
}

/// `W = V+ v` (forward) or `W^-1 = v V-` (inverse). The result is in the caller's realization.
pub fn apply_w(field: &SpinorField, direction: Direction) -> SpinorField {
    let kernel = build_fw_kernel(field.lattice());
    apply_w_with(&kernel, field, direction)
}

pub fn apply_w_with(kernel: &FWKernel, field: &SpinorField, direction: Direction) -> SpinorField {
    let out = match direction {
        Direction::Forward => {
            let phi = apply_v(&field.to_position()).expect("position realization");
            kernel.apply(&phi, Direction::Forward)
        }
        Direction::Inverse => {
            let phi = kernel.apply(field, Direction::Inverse).to_position();
            apply_v(&phi).expect("position realization")
        }
    };
    let picture = match direction {
        Direction::Forward => Picture::Dirac,
        Direction::Inverse => Picture::SchrodingerFoldy,
    };
    out.into_realization(field.realization()).with_picture(picture)
}

/// Which transform is checked against which pair of propagators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PicturePair {
    /// `v`: SF -> FW.
    SfToFw,
    /// `v`: FW -> SF.
    FwToSf,
    /// `V+`: FW -> Dirac.
    FwToDirac,
    /// `W`: SF -> Dirac.
    SfToDirac,
    /// `W^-1`: Dirac -> SF.
    DiracToSf,
}

impl PicturePair {
    pub const ALL: [PicturePair; 5] = [
        PicturePair::SfToFw,
        PicturePair::FwToSf,
        PicturePair::FwToDirac,
        PicturePair::SfToDirac,
        PicturePair::DiracToSf,
    ];

    pub fn source(self) -> Picture {
        match self {
            PicturePair::SfToFw | PicturePair::SfToDirac => Picture::SchrodingerFoldy,
            PicturePair::FwToSf | PicturePair::FwToDirac => Picture::FoldyWouthuysen,
            PicturePair::DiracToSf => Picture::Dirac,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PicturePair::SfToFw => "sf_to_fw",
            PicturePair::FwToSf => "fw_to_sf",
            PicturePair::FwToDirac => "fw_to_dirac",
            PicturePair::SfToDirac => "sf_to_dirac",
            PicturePair::DiracToSf => "dirac_to_sf",
        }
    }

    pub fn transform(self, kernel: &FWKernel, field: &SpinorField) -> SpinorField {
        match self {
            PicturePair::SfToFw | PicturePair::FwToSf => {
                apply_v(&field.to_position()).expect("position realization")
            }
            PicturePair::FwToDirac => kernel.apply(field, Direction::Forward),
            PicturePair::SfToDirac => apply_w_with(kernel, field, Direction::Forward),
            PicturePair::DiracToSf => apply_w_with(kernel, field, Direction::Inverse),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntertwiningReport {
    pub pair: PicturePair,
    pub time: f64,
    /// `||(T E1 - E2 T) f|| / ||f||` per trial.
    pub residuals: Vec<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

impl IntertwiningReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

/// Checks that transforming then evolving equals evolving then transforming, on
/// `n_trials` seeded random packets evolved for `time`.
pub fn verify_intertwining(
    lattice: &Arc<Lattice>,
    pair: PicturePair,
    n_trials: usize,
    seed: u64,
    time: f64,
) -> Result<IntertwiningReport> {
    if n_trials == 0 {
        return Err(Error::TooFew {
            what: "trials",
            needed: 1,
            got: 0,
        });
    }
    let opts = PacketOptions::for_lattice(lattice);
    let mut rng = rng_from_seed(seed);
    let kernel = build_fw_kernel(lattice);
    let residuals = (0..n_trials)
        .map(|_| {
            let f = random_field(lattice, &mut rng, &opts, pair.source());
            let evolve_then_map = pair.transform(&kernel, &evolve(&f, time));
            let map_then_evolve = evolve(&pair.transform(&kernel, &f), time);
            let diff = &evolve_then_map.to_position() - &map_then_evolve.to_position();
            diff.norm() / f.norm()
        })
        .collect::<Vec<_>>();
    let pass = residuals.iter().all(|&r| r <= INTERTWINING_TOLERANCE);
    Ok(IntertwiningReport {
        pair,
        time,
        residuals,
        tolerance: INTERTWINING_TOLERANCE,
        pass,
    })
}
