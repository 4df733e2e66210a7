//! Poincaré generators of the doublet, their quantum-mechanical means, the conservation
//! audit, and numerical checks of the Poincaré algebra.
//!
//! Index conventions: Greek indices run over `0..=3`, Latin ones over `1..=3`, and all
//! generators are written with lower (covariant) indices. The metric is
//! `diag(+1, -1, -1, -1)`, so the covariant momentum `p_l = i d_l` is minus the physical
//! momentum `-i d/dx^l`, and the covariant coordinate `x_l` is `-x^l`:
//!
//! ```text
//! p_0 = omega,  p_l = i d_l,
//! m_ln = x_l p_n - x_n p_l,          j_ln = m_ln + s_ln,
//! m_0l = t p_l - {x_l, omega} / 2,   j_0l = m_0l - sb_l,
//! sb_l = s_ln p_n / (omega + m).
//! ```
//!
//! In the momentum realization `x_l` acts as `-i d/dk^l`, evaluated spectrally.

mod algebra;
mod conservation;

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{build_spin_and_charge, Mat4, SpinTriple};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::states::{Realization, SpinorField};

pub use algebra::{
    check_generator_identities, check_poincare_algebra, check_symmetry_commutators, CommutatorCheck, CommutatorReport, PoincareElement,
    POINCARE_TOLERANCE,
};
pub use conservation::{
    amplitude_means, audit_conservation, AuditOptions, ConservationReport, AUDIT_TOLERANCE, CONSERVED_QUANTITIES,
    MAIN_QUANTITIES,
};

/// Tolerance on `| ||f||^2 - 1 |` for a field to count as normalized.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    /// `p_0 = omega`.
    Energy,
    /// `p_l`, `l` in `1..=3`.
    Momentum(usize),
    /// `j_ln`.
    Rotation(usize, usize),
    /// `j_0l`.
    Boost(usize),
    /// `m_ln`.
    OrbitalRotation(usize, usize),
    /// `m_0l`.
    OrbitalBoost(usize),
    /// `s_ln`.
    Spin(usize, usize),
    /// `sb_l = s_ln p_n / (omega + m)`.
    SpinBreve(usize),
    /// `g = -gamma^0`.
    ChargeSign,
}

impl Generator {
    /// True for generators with an explicit `t p_l` term.
    pub fn has_explicit_time(self) -> bool {
        matches!(self, Generator::Boost(_) | Generator::OrbitalBoost(_))
    }

    /// `d/dt` of the explicit time dependence, as a generator (`p_l` for boosts).
    pub fn explicit_time_derivative(self) -> Option<Generator> {
        match self {
            Generator::Boost(l) | Generator::OrbitalBoost(l) => Some(Generator::Momentum(l)),
            _ => None,
        }
    }
}

/// Whether [`mean`] insists on a unit-norm field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormCheck {
    Require,
    Skip,
}

/// The generator algebra in one realization.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    lattice: Arc<Lattice>,
    realization: Realization,
    spin: SpinTriple,
    charge: Mat4,
    explicit_time: bool,
}

impl GeneratorSet {
    pub fn new(lattice: &Arc<Lattice>, realization: Realization) -> Self {
        let (spin, charge) = build_spin_and_charge();
        GeneratorSet {
            lattice: Arc::clone(lattice),
            realization,
            spin,
            charge,
            explicit_time: true,
        }
    }

    /// Drops the explicit `t p_l` term from the boosts. Only useful as a negative control.
    pub fn without_explicit_time(mut self) -> Self {
        self.explicit_time = false;
        self
    }

    pub fn realization(&self) -> Realization {
        self.realization
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    /// `G f` at time `t`, in this set's realization.
    pub fn apply(&self, gen: Generator, field: &SpinorField, t: f64) -> SpinorField {
        assert!(**field.lattice() == *self.lattice, "field lives on a different lattice");
        let f = field.clone().into_realization(self.realization);
        match gen {
            Generator::Energy => self.omega(&f),
            Generator::Momentum(l) => self.momentum(l, &f),
            Generator::Spin(l, n) => f.apply_matrix(&self.spin.component(l, n)),
            Generator::SpinBreve(l) => self.spin_breve(l, &f),
            Generator::ChargeSign => f.apply_matrix(&self.charge),
            Generator::OrbitalRotation(l, n) => self.orbital_rotation(l, n, &f),
            Generator::Rotation(l, n) => {
                &self.orbital_rotation(l, n, &f) + &f.apply_matrix(&self.spin.component(l, n))
            }
            Generator::OrbitalBoost(l) => self.orbital_boost(l, &f, t),
            Generator::Boost(l) => &self.orbital_boost(l, &f, t) - &self.spin_breve(l, &f),
        }
    }

    fn omega(&self, f: &SpinorField) -> SpinorField {
        self.momentum_multiplier(f, |p| self.lattice.omega(p))
    }

    /// Covariant `p_l`: `-k^l` mode by mode.
    fn momentum(&self, l: usize, f: &SpinorField) -> SpinorField {
        let axis = l - 1;
        self.momentum_multiplier(f, |p| -self.lattice.momentum(p)[axis])
    }

    /// Covariant `x_l = -x^l`; in the momentum realization this is `-i d/dk^l`.
    fn coordinate(&self, l: usize, f: &SpinorField) -> SpinorField {
        let axis = l - 1;
        match self.realization {
            Realization::Position => f.map_scalar(|p| -self.lattice.position(p)[axis]),
            Realization::Momentum => k_derivative(f, axis).scaled(Complex64::new(0.0, -1.0)),
        }
    }

    fn spin_breve(&self, l: usize, f: &SpinorField) -> SpinorField {
        let m = self.lattice.mass();
        let spin = &self.spin;
        let k = f.to_momentum();
        k.map_spinors(|p, s| {
            let kv = self.lattice.momentum(p);
            let w = self.lattice.omega(p);
            let mut mat = Mat4::zero();
            for n in 1..=3 {
                // covariant p_n = -k^n
                mat = mat + spin.component(l, n).scale_real(-kv[n - 1] / (w + m));
            }
            mat.apply(&s)
        })
        .into_realization(f.realization())
    }

    fn orbital_rotation(&self, l: usize, n: usize, f: &SpinorField) -> SpinorField {
        let a = self.coordinate(l, &self.momentum(n, f));
        let b = self.coordinate(n, &self.momentum(l, f));
        &a - &b
    }

    fn orbital_boost(&self, l: usize, f: &SpinorField, t: f64) -> SpinorField {
        let xw = self.coordinate(l, &self.omega(f));
        let wx = self.omega(&self.coordinate(l, f));
        let sym = (&xw + &wx).scaled_real(-0.5);
        if self.explicit_time {
            &sym + &self.momentum(l, f).scaled_real(t)
        } else {
            sym
        }
    }

    fn momentum_multiplier(&self, f: &SpinorField, symbol: impl Fn(usize) -> f64) -> SpinorField {
        f.to_momentum()
            .map_scalar(symbol)
            .into_realization(f.realization())
    }
}

/// `d/dk^axis` of a momentum-realization field, evaluated spectrally through its
/// conjugate (position) grid. Absent axes give zero.
fn k_derivative(f: &SpinorField, axis: usize) -> SpinorField {
    let lattice = Arc::clone(f.lattice());
    if axis >= lattice.dim() {
        return f.scaled_real(0.0);
    }
    // f~(k) = (2 pi)^{-d/2} dx^d sum_j exp(-i k.x_j) f_j, so d/dk^a pulls down -i x^a_j.
    f.to_position()
        .map_spinors(|p, s| {
            let x = lattice.position(p)[axis];
            s.map(|v| v * Complex64::new(0.0, -x))
        })
        .into_realization(Realization::Momentum)
}

/// Quantum-mechanical mean `<f, G f>` at time `t`.
pub fn mean(field: &SpinorField, gens: &GeneratorSet, gen: Generator, t: f64, check: NormCheck) -> Result<Complex64> {
    let f = field.clone().into_realization(gens.realization());
    if check == NormCheck::Require {
        let n2 = f.norm_sq();
        if (n2 - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized(n2));
        }
    }
    Ok(f.inner(&gens.apply(gen, &f, t)))
}
