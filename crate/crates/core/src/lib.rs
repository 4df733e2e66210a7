//! Free spin-1/2 doublet in the relativistic canonical (Schrödinger-Foldy) picture on a
//! periodic lattice, with exact maps to the Foldy-Wouthuysen and Dirac pictures,
//! Poincaré generators, conservation audits, and batch verification suites.

pub mod clifford;
pub mod error;
pub mod evolve;
pub mod lattice;
pub mod observables;
pub mod packets;
pub mod scenario;
pub mod snapshot;
pub mod states;
pub mod suites;
pub mod transforms;

pub use error::{Error, Result};
pub use evolve::{evolve, Picture};
pub use lattice::{Lattice, LatticeSpec};
pub use states::{synthesize_fw, synthesize_sf, AmplitudeSet, Realization, SpinorField};
pub use transforms::{apply_v, apply_w, Direction};
