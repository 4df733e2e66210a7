//! Time-constancy audit of the 10 main and 12 additional conserved quantities.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{mean, Generator, GeneratorSet, NormCheck};
use crate::error::{Error, Result};
use crate::evolve::Picture;
use crate::packets::validate_tails;
use crate::states::{synthesize_sf, AmplitudeSet, Realization};

/// Drift bound, relative to `max(1, |Q(t0)|)`.
pub const AUDIT_TOLERANCE: f64 = 1e-8;

/// Audited quantities in report and CSV column order.
pub const CONSERVED_QUANTITIES: [(&str, Generator); 22] = [
    ("P0", Generator::Energy),
    ("P1", Generator::Momentum(1)),
    ("P2", Generator::Momentum(2)),
    ("P3", Generator::Momentum(3)),
    ("J23", Generator::Rotation(2, 3)),
    ("J31", Generator::Rotation(3, 1)),
    ("J12", Generator::Rotation(1, 2)),
    ("J01", Generator::Boost(1)),
    ("J02", Generator::Boost(2)),
    ("J03", Generator::Boost(3)),
    ("M23", Generator::OrbitalRotation(2, 3)),
    ("M31", Generator::OrbitalRotation(3, 1)),
    ("M12", Generator::OrbitalRotation(1, 2)),
    ("M01", Generator::OrbitalBoost(1)),
    ("M02", Generator::OrbitalBoost(2)),
    ("M03", Generator::OrbitalBoost(3)),
    ("S23", Generator::Spin(2, 3)),
    ("S31", Generator::Spin(3, 1)),
    ("S12", Generator::Spin(1, 2)),
    ("Sb1", Generator::SpinBreve(1)),
    ("Sb2", Generator::SpinBreve(2)),
    ("Sb3", Generator::SpinBreve(3)),
];

/// Number of leading entries of [`CONSERVED_QUANTITIES`] that are `P_mu` and `J_{mu nu}`.
pub const MAIN_QUANTITIES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditOptions {
    /// Keep the explicit `t p_l` term of the boosts. Turning it off is a negative control.
    pub explicit_time: bool,
    pub tolerance: f64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            explicit_time: true,
            tolerance: AUDIT_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConservationReport {
    pub quantities: Vec<String>,
    pub times: Vec<f64>,
    /// `values[i][q]`: mean of quantity `q` at `times[i]`, as `[re, im]`.
    pub values: Vec<Vec<Complex64>>,
    /// `max_t |Q(t) - Q(t0)|` per quantity.
    pub drifts: Vec<f64>,
    pub verdicts: Vec<bool>,
    pub tolerance: f64,
    pub explicit_time: bool,
    /// Largest imaginary part over all means; nonzero values flag a Hermiticity defect.
    pub max_imag: f64,
}

impl ConservationReport {
    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| *v)
    }

    /// Index of quantity `name` in the column order.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.quantities.iter().position(|q| q == name)
    }

    /// One row per time: `t` followed by the real part of every mean.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["t".to_string()];
        header.extend(self.quantities.iter().cloned());
        w.write_record(&header)?;
        for (t, row) in self.times.iter().zip(&self.values) {
            let mut rec = vec![t.to_string()];
            rec.extend(row.iter().map(|v| v.re.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

/// Evaluates all 22 means on the Schrödinger-Foldy solution built from `amps` at each
/// time and judges their drift. The amplitudes are normalized first.
pub fn audit_conservation(amps: &AmplitudeSet, times: &[f64], opts: AuditOptions) -> Result<ConservationReport> {
    let mut distinct = times.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::TooFew {
            what: "distinct times",
            needed: 3,
            got: distinct.len(),
        });
    }
    let n2 = amps.norm_sq();
    if n2 == 0.0 || !n2.is_finite() {
        return Err(Error::NotNormalized(n2));
    }
    validate_tails(amps, false)?;
    let amps = amps.normalized();
    let mut gens = GeneratorSet::new(amps.lattice(), Realization::Position);
    if !opts.explicit_time {
        gens = gens.without_explicit_time();
    }

    let mut values = Vec::with_capacity(times.len());
    for &t in times {
        let f = synthesize_sf(&amps, t).with_picture(Picture::SchrodingerFoldy);
        let row = CONSERVED_QUANTITIES
            .iter()
            .map(|(_, g)| mean(&f, &gens, *g, t, NormCheck::Skip))
            .collect::<Result<Vec<_>>>()?;
        values.push(row);
    }

    let mut drifts = Vec::with_capacity(CONSERVED_QUANTITIES.len());
    let mut verdicts = Vec::with_capacity(CONSERVED_QUANTITIES.len());
    for q in 0..CONSERVED_QUANTITIES.len() {
        let first = values[0][q];
        let drift = values.iter().map(|row| (row[q] - first).norm()).fold(0.0, f64::max);
        drifts.push(drift);
        verdicts.push(drift <= opts.tolerance * first.norm().max(1.0));
    }
    let max_imag = values.iter().flatten().map(|v| v.im.abs()).fold(0.0, f64::max);
    Ok(ConservationReport {
        quantities: CONSERVED_QUANTITIES.iter().map(|(n, _)| n.to_string()).collect(),
        times: times.to_vec(),
        values,
        drifts,
        verdicts,
        tolerance: opts.tolerance,
        explicit_time: opts.explicit_time,
        max_imag,
    })
}

/// The 10 main means `P_mu, J_{mu nu}` evaluated directly on the amplitudes, with the
/// generators in the momentum realization (`x~_l = -i d/dk^l`) at `t = 0`.
/// Order follows the first [`MAIN_QUANTITIES`] entries of [`CONSERVED_QUANTITIES`].
pub fn amplitude_means(amps: &AmplitudeSet) -> Vec<Complex64> {
    let a = amps.as_momentum_field(Picture::SchrodingerFoldy);
    let gens = GeneratorSet::new(amps.lattice(), Realization::Momentum);
    CONSERVED_QUANTITIES[..MAIN_QUANTITIES]
        .iter()
        .map(|(_, g)| a.inner(&gens.apply(*g, &a, 0.0)))
        .collect()
}
