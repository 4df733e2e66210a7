//! Exact momentum-space propagators for the three free pictures.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{build_gamma_pd, dirac_hamiltonian, Mat4};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::states::SpinorField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Picture {
    /// `i d_t f = omega f`.
    #[serde(rename = "sf")]
    SchrodingerFoldy,
    /// `i d_t phi = gamma^0 omega phi`.
    #[serde(rename = "fw")]
    FoldyWouthuysen,
    /// `i d_t psi = (alpha . p + beta m) psi`.
    #[serde(rename = "dirac")]
    Dirac,
}

impl Picture {
    pub const ALL: [Picture; 3] = [Picture::SchrodingerFoldy, Picture::FoldyWouthuysen, Picture::Dirac];

    /// Generator `H(k)` of time translations at one momentum mode.
    pub fn mode_hamiltonian(self, k: [f64; 3], mass: f64) -> Mat4 {
        let w = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + mass * mass).sqrt();
        match self {
            Picture::SchrodingerFoldy => Mat4::identity().scale_real(w),
            Picture::FoldyWouthuysen => build_gamma_pd()[0].scale_real(w),
            Picture::Dirac => dirac_hamiltonian(k, mass),
        }
    }
}

/// `exp(-i H(k) dt)` for every momentum mode of the lattice.
#[derive(Debug, Clone)]
pub struct Propagator {
    picture: Picture,
    dt: f64,
    lattice: Arc<Lattice>,
    mode_matrices: Vec<Mat4>,
}

impl Propagator {
    pub fn picture(&self) -> Picture {
        self.picture
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn mode_matrices(&self) -> &[Mat4] {
        &self.mode_matrices
    }
}

/// Mode matrix of the propagator at physical momentum `k`.
///
/// The Dirac case uses `H(k)^2 = omega^2 I`:
/// `exp(-i H dt) = cos(omega dt) I - i sin(omega dt) H / omega`.
pub fn mode_propagator(picture: Picture, k: [f64; 3], mass: f64, dt: f64) -> Mat4 {
    let w = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + mass * mass).sqrt();
    let minus = Complex64::from_polar(1.0, -w * dt);
    match picture {
        Picture::SchrodingerFoldy => Mat4::diag([minus; 4]),
        Picture::FoldyWouthuysen => {
            let plus = minus.conj();
            Mat4::diag([minus, minus, plus, plus])
        }
        Picture::Dirac => {
            let (sin, cos) = (w * dt).sin_cos();
            let h = dirac_hamiltonian(k, mass);
            Mat4::identity().scale_real(cos) + h.scale(Complex64::new(0.0, -sin / w))
        }
    }
}

pub fn build_propagator(lattice: &Arc<Lattice>, picture: Picture, dt: f64) -> Propagator {
    let mass = lattice.mass();
    let mode_matrices = (0..lattice.len())
        .map(|p| mode_propagator(picture, lattice.momentum(p), mass, dt))
        .collect();
    Propagator {
        picture,
        dt,
        lattice: Arc::clone(lattice),
        mode_matrices,
    }
}

/// Advances `field` by the propagator's `dt`. The result is in the caller's realization.
pub fn step(field: &SpinorField, prop: &Propagator) -> Result<SpinorField> {
    if field.picture() != prop.picture {
        return Err(Error::Picture {
            expected: prop.picture,
            found: field.picture(),
        });
    }
    if **field.lattice() != *prop.lattice {
        return Err(Error::Structural("propagator built for a different lattice".into()));
    }
    let k = field.to_momentum();
    let out = k
        .map_spinors(|p, s| prop.mode_matrices[p].apply(&s))
        .with_time(field.time() + prop.dt);
    Ok(out.into_realization(field.realization()))
}

/// Exact evolution by `dt` in the field's own picture.
pub fn evolve(field: &SpinorField, dt: f64) -> SpinorField {
    let prop = build_propagator(field.lattice(), field.picture(), dt);
    step(field, &prop).expect("propagator matches the field's picture and lattice")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeSpec;
    use crate::states::{synthesize_sf, AmplitudeSet};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dirac_at_rest_is_diagonal() {
        let m = 1.3;
        let dt = 0.2;
        let u = mode_propagator(Picture::Dirac, [0.0; 3], m, dt);
        let a = Complex64::from_polar(1.0, -m * dt);
        let expected = Mat4::diag([a, a, a.conj(), a.conj()]);
        assert!(u.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn mode_matrices_are_unitary() {
        let l = LatticeSpec::new(2, 8, 0.5, 1.0).build().unwrap();
        for picture in Picture::ALL {
            let prop = build_propagator(&l, picture, 0.1);
            for m in prop.mode_matrices() {
                assert!(m.unitarity_defect() < 1e-12);
            }
        }
    }

    #[test]
    fn sf_has_single_frequency_branch() {
        let l = LatticeSpec::new(1, 16, 0.5, 1.0).build().unwrap();
        let dt = 0.1;
        for (p, m) in build_propagator(&l, Picture::SchrodingerFoldy, dt).mode_matrices().iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -l.omega(p) * dt);
            assert_eq!(*m, Mat4::diag([phase; 4]));
        }
        let fw = build_propagator(&l, Picture::FoldyWouthuysen, dt);
        let m = fw.mode_matrices()[0];
        assert!(m.0[2][2].im > 0.0 && m.0[0][0].im < 0.0);
        // Dirac eigenphases e^{-i w dt} and e^{+i w dt}, each twice: trace = 4 cos(w dt).
        let dirac = build_propagator(&l, Picture::Dirac, dt);
        for (p, m) in dirac.mode_matrices().iter().enumerate() {
            let tr = m.trace();
            assert!((tr - c(4.0 * (l.omega(p) * dt).cos(), 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn step_single_mode_is_phase() {
        let l = LatticeSpec::new(1, 32, 0.3, 1.0).build().unwrap();
        let p = l.mode_index([4, 0, 0]);
        let amps = AmplitudeSet::single_mode(&l, 1, p, c(0.6, 0.8));
        let f = synthesize_sf(&amps, 0.0);
        let g = evolve(&f, 0.25);
        let fk = f.to_momentum();
        let gk = g.to_momentum();
        let ratio = gk.components()[1][p] / fk.components()[1][p];
        assert!((ratio - Complex64::from_polar(1.0, -l.omega(p) * 0.25)).norm() < 1e-13);
        assert_eq!(g.time(), 0.25);
    }

    #[test]
    fn picture_mismatch_is_rejected() {
        let l = LatticeSpec::new(1, 16, 0.3, 1.0).build().unwrap();
        let f = synthesize_sf(&AmplitudeSet::zeros(&l), 0.0);
        let prop = build_propagator(&l, Picture::Dirac, 0.1);
        assert!(matches!(step(&f, &prop), Err(Error::Picture { .. })));
    }
}
