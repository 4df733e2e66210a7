//! JSON layout for field and amplitude snapshots.
//!
//! ```json
//! {
//!   "lattice": {"dim": 1, "n": 4, "dx": 0.5, "mass": 1.0},
//!   "realization": "position",
//!   "picture": "sf",
//!   "time": 0.0,
//!   "data": [[[re, im], ...], [...], [...], [...]]
//! }
//! ```
//!
//! `data` holds the four components, each a row-major list over grid points (last axis
//! fastest). Momentum-side arrays are stored in FFT order (mode numbers
//! `0, 1, .., n/2 - 1, -n/2, .., -1` along each axis). Amplitude sets use
//! `"realization": "amplitudes"` and carry no picture or time. Floats are written with
//! shortest round-trip formatting, so reading a snapshot back is bit-exact.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::Picture;
use crate::lattice::{Lattice, LatticeSpec};
use crate::states::{AmplitudeSet, Realization, SpinorField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnapshotKind {
    Position,
    Momentum,
    Amplitudes,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub lattice: LatticeSpec,
    pub realization: SnapshotKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub picture: Option<Picture>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    pub data: [Vec<Complex64>; 4],
}

impl Snapshot {
    pub fn from_field(field: &SpinorField) -> Self {
        Snapshot {
            lattice: field.lattice().spec(),
            realization: match field.realization() {
                Realization::Position => SnapshotKind::Position,
                Realization::Momentum => SnapshotKind::Momentum,
            },
            picture: Some(field.picture()),
            time: Some(field.time()),
            data: field.components().clone(),
        }
    }

    pub fn from_amplitudes(amps: &AmplitudeSet) -> Self {
        Snapshot {
            lattice: amps.lattice().spec(),
            realization: SnapshotKind::Amplitudes,
            picture: None,
            time: None,
            data: amps.amplitudes().clone(),
        }
    }

    /// Rebuilds a field, reusing `lattice` when its parameters match.
    pub fn to_field(&self, lattice: Option<&Arc<Lattice>>) -> Result<SpinorField> {
        let realization = match self.realization {
            SnapshotKind::Position => Realization::Position,
            SnapshotKind::Momentum => Realization::Momentum,
            SnapshotKind::Amplitudes => {
                return Err(Error::Structural("snapshot holds amplitudes, not a field".into()))
            }
        };
        let lattice = self.lattice_for(lattice)?;
        SpinorField::from_components(
            &lattice,
            realization,
            self.picture.unwrap_or(Picture::SchrodingerFoldy),
            self.time.unwrap_or(0.0),
            self.data.clone(),
        )
    }

    pub fn to_amplitudes(&self, lattice: Option<&Arc<Lattice>>) -> Result<AmplitudeSet> {
        if self.realization != SnapshotKind::Amplitudes {
            return Err(Error::Structural("snapshot holds a field, not amplitudes".into()));
        }
        AmplitudeSet::new(&self.lattice_for(lattice)?, self.data.clone())
    }

    fn lattice_for(&self, lattice: Option<&Arc<Lattice>>) -> Result<Arc<Lattice>> {
        match lattice {
            Some(l) if l.spec() == self.lattice => Ok(Arc::clone(l)),
            Some(_) => Err(Error::Structural("snapshot lattice differs from the requested lattice".into())),
            None => self.lattice.build(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packets::{random_amplitudes, rng_from_seed, PacketOptions};
    use crate::states::synthesize_fw;

    #[test]
    fn field_roundtrip_is_bit_exact() {
        let l = LatticeSpec::new(2, 16, 0.37, 1.3).build().unwrap();
        let amps = random_amplitudes(&l, &mut rng_from_seed(4), &PacketOptions::for_lattice(&l));
        let f = synthesize_fw(&amps, 0.123456789).with_picture(Picture::FoldyWouthuysen);
        let text = Snapshot::from_field(&f).to_json().unwrap();
        let back = Snapshot::from_json(&text).unwrap().to_field(None).unwrap();
        assert_eq!(back.components(), f.components());
        assert_eq!(back.time().to_bits(), f.time().to_bits());
        assert_eq!(back.picture(), Picture::FoldyWouthuysen);
        assert_eq!(back.lattice().spec(), l.spec());
    }

    #[test]
    fn amplitude_roundtrip_and_layout() {
        let l = LatticeSpec::new(1, 4, 0.5, 1.0).build().unwrap();
        let amps = AmplitudeSet::single_mode(&l, 1, 2, Complex64::new(0.1, -3.0));
        let text = Snapshot::from_amplitudes(&amps).to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["realization"], "amplitudes");
        assert_eq!(v["lattice"]["n"], 4);
        assert_eq!(v["data"][1][2][1].as_f64(), Some(-3.0));
        assert!(v.get("time").is_none());
        let back = Snapshot::from_json(&text).unwrap().to_amplitudes(Some(&l)).unwrap();
        assert_eq!(back.amplitudes(), amps.amplitudes());
    }

    #[test]
    fn wrong_kind_or_size_rejected() {
        let l = LatticeSpec::new(1, 4, 0.5, 1.0).build().unwrap();
        let snap = Snapshot::from_amplitudes(&AmplitudeSet::zeros(&l));
        assert!(snap.to_field(None).is_err());
        let mut bad = snap.clone();
        bad.data[0].pop();
        assert!(bad.to_amplitudes(None).is_err());
        let other = LatticeSpec::new(1, 8, 0.5, 1.0).build().unwrap();
        assert!(snap.to_amplitudes(Some(&other)).is_err());
    }
}
