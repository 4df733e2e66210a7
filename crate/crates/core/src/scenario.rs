//! Batch scenarios: a JSON config naming a lattice, an amplitude family, times and
//! suites; a runner that writes `report.json`, `conservation.csv` and field snapshots.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeSpec};
use crate::packets::{gaussian_profile, random_amplitudes, rng_from_seed, validate_tails, PacketOptions};
use crate::snapshot::Snapshot;
use crate::states::{synthesize_sf, AmplitudeSet};
use crate::suites::{
    algebra_checks, conservation_checks, frequency_checks, poincare_checks, roundtrip_checks, transforms_checks,
    Check, Suite,
};

fn default_trials() -> usize {
    3
}

fn default_weight() -> [f64; 2] {
    [1.0, 0.0]
}

/// One populated species of a Gaussian family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianSpecies {
    /// 0..=3 for `a-+`, `a--`, `a+-`, `a++`.
    pub species: usize,
    /// Momentum center, one entry per lattice axis.
    pub k0: Vec<f64>,
    /// Position center, one entry per lattice axis; defaults to the origin.
    #[serde(default)]
    pub x0: Option<Vec<f64>>,
    /// Complex weight `[re, im]`.
    #[serde(default = "default_weight")]
    pub weight: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingleModeSpecies {
    pub species: usize,
    /// Mode numbers, one per lattice axis, in `-n/2..n/2`.
    pub mode: Vec<i64>,
    #[serde(default = "default_weight")]
    pub weight: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum AmplitudeFamily {
    /// Independent seeded random Gaussians in all four species.
    Random,
    /// Gaussian packets `exp(-|k - k0|^2 / (4 width^2))`; `width` defaults to the
    /// balanced width of the lattice.
    Gaussian {
        #[serde(default)]
        width: Option<f64>,
        species: Vec<GaussianSpecies>,
    },
    /// Single momentum bins (de Broglie waves); exempt from the box-tail rule.
    SingleMode { species: Vec<SingleModeSpecies> },
    /// An amplitude snapshot file, resolved relative to the config file.
    Custom { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub lattice: LatticeSpec,
    pub amplitudes: AmplitudeFamily,
    pub times: Vec<f64>,
    pub suites: Vec<Suite>,
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Output directory, resolved relative to the config file.
    pub output: PathBuf,
}

/// A config that passed validation, with its lattice and amplitudes built.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub lattice: Arc<Lattice>,
    pub amplitudes: AmplitudeSet,
    pub output: PathBuf,
}

fn axis_vector(values: &[f64], dim: usize, field: &str) -> Result<[f64; 3]> {
    if values.len() != dim {
        return Err(Error::config(field, format!("expected {dim} entries, got {}", values.len())));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::config(field, "entries must be finite"));
    }
    let mut out = [0.0; 3];
    out[..dim].copy_from_slice(values);
    Ok(out)
}

fn check_species(species: usize, field: &str) -> Result<()> {
    if species > 3 {
        return Err(Error::config(field, format!("species index {species} is outside 0..=3")));
    }
    Ok(())
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config("config", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Validates every field and builds the lattice and amplitudes. Relative paths are
    /// resolved against `base_dir`.
    pub fn validate(&self, base_dir: &Path) -> Result<Scenario> {
        if self.suites.is_empty() {
            return Err(Error::config("suites", "at least one suite is required"));
        }
        let lattice = self
            .lattice
            .build()
            .map_err(|e| Error::config("lattice", e.to_string()))?;
        if self.times.is_empty() {
            return Err(Error::config("times", "at least one time is required"));
        }
        if self.times.iter().any(|t| !t.is_finite()) {
            return Err(Error::config("times", "times must be finite"));
        }
        if self.suites.contains(&Suite::Conservation) {
            let mut distinct = self.times.clone();
            distinct.sort_by(f64::total_cmp);
            distinct.dedup();
            if distinct.len() < 3 {
                return Err(Error::config("times", "the conservation suite needs at least 3 distinct times"));
            }
        }
        if self.trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        let (amplitudes, check_box) = self.build_amplitudes(&lattice, base_dir)?;
        if amplitudes.norm_sq() == 0.0 {
            return Err(Error::config("amplitudes", "all amplitudes are zero"));
        }
        validate_tails(&amplitudes, check_box).map_err(|e| Error::config("amplitudes", e.to_string()))?;
        Ok(Scenario {
            config: self.clone(),
            lattice,
            amplitudes: amplitudes.normalized(),
            output: base_dir.join(&self.output),
        })
    }

    fn build_amplitudes(&self, lattice: &Arc<Lattice>, base_dir: &Path) -> Result<(AmplitudeSet, bool)> {
        let dim = lattice.dim();
        match &self.amplitudes {
            AmplitudeFamily::Random => {
                let opts = PacketOptions::for_lattice(lattice);
                Ok((random_amplitudes(lattice, &mut rng_from_seed(self.seed), &opts), true))
            }
            AmplitudeFamily::Gaussian { width, species } => {
                let width = width.unwrap_or_else(|| PacketOptions::for_lattice(lattice).width);
                if !(width.is_finite() && width > 0.0) {
                    return Err(Error::config("amplitudes.width", "must be positive"));
                }
                let mut amps = AmplitudeSet::zeros(lattice);
                for (i, s) in species.iter().enumerate() {
                    let prefix = format!("amplitudes.species[{i}]");
                    check_species(s.species, &format!("{prefix}.species"))?;
                    let k0 = axis_vector(&s.k0, dim, &format!("{prefix}.k0"))?;
                    let x0 = match &s.x0 {
                        Some(x) => axis_vector(x, dim, &format!("{prefix}.x0"))?,
                        None => [0.0; 3],
                    };
                    let weight = Complex64::new(s.weight[0], s.weight[1]);
                    let profile = gaussian_profile(lattice, k0, x0, width, weight);
                    for (a, b) in amps.amplitudes_mut()[s.species].iter_mut().zip(profile) {
                        *a += b;
                    }
                }
                Ok((amps, true))
            }
            AmplitudeFamily::SingleMode { species } => {
                let mut amps = AmplitudeSet::zeros(lattice);
                for (i, s) in species.iter().enumerate() {
                    let prefix = format!("amplitudes.species[{i}]");
                    check_species(s.species, &format!("{prefix}.species"))?;
                    if s.mode.len() != dim {
                        return Err(Error::config(
                            format!("{prefix}.mode"),
                            format!("expected {dim} entries, got {}", s.mode.len()),
                        ));
                    }
                    let half = (lattice.n() / 2) as i64;
                    if s.mode.iter().any(|&m| m < -half || m >= half) {
                        return Err(Error::config(format!("{prefix}.mode"), format!("entries must lie in -{half}..{half}")));
                    }
                    let mut modes = [0i64; 3];
                    modes[..dim].copy_from_slice(&s.mode);
                    let p = lattice.mode_index(modes);
                    amps.amplitudes_mut()[s.species][p] += Complex64::new(s.weight[0], s.weight[1]);
                }
                Ok((amps, false))
            }
            AmplitudeFamily::Custom { path } => {
                let full = base_dir.join(path);
                let snap = Snapshot::read(&full)
                    .map_err(|e| Error::config("amplitudes.path", format!("{}: {e}", full.display())))?;
                let amps = snap
                    .to_amplitudes(Some(lattice))
                    .map_err(|e| Error::config("amplitudes.path", e.to_string()))?;
                if amps.amplitudes().iter().flatten().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
                    return Err(Error::config("amplitudes.path", "amplitudes must be finite"));
                }
                Ok((amps, true))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub pass: bool,
    pub checks: Vec<Check>,
}

/// Contents of `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub lattice: LatticeSpec,
    pub seed: u64,
    pub trials: usize,
    pub times: Vec<f64>,
    pub suites: BTreeMap<Suite, SuiteReport>,
    pub pass: bool,
}

impl RunReport {
    pub fn failed_checks(&self) -> Vec<(Suite, &Check)> {
        self.suites
            .iter()
            .flat_map(|(s, r)| r.checks.iter().filter(|c| !c.pass).map(move |c| (*s, c)))
            .collect()
    }
}

fn run_suite(scenario: &Scenario, suite: Suite, csv: &mut Option<String>) -> Result<Vec<Check>> {
    let cfg = &scenario.config;
    let amps = &scenario.amplitudes;
    let t0 = cfg.times[0];
    let t_last = *cfg.times.last().expect("times validated non-empty");
    match suite {
        Suite::Algebra => Ok(algebra_checks()),
        Suite::Poincare => poincare_checks(&scenario.lattice, cfg.trials, cfg.seed, t0),
        Suite::Conservation => {
            let (checks, report) = conservation_checks(amps, &cfg.times)?;
            *csv = Some(report.to_csv_string()?);
            Ok(checks)
        }
        Suite::Transforms => {
            let span = if t_last != t0 { (t_last - t0).abs() } else { 1.0 / scenario.lattice.mass() };
            transforms_checks(amps, &cfg.times, cfg.trials, cfg.seed, span)
        }
        Suite::Frequency => frequency_checks(amps, t0),
        Suite::Roundtrip => roundtrip_checks(amps, t0),
    }
}

/// A suite that errors out is reported as one failed check carrying the error text.
fn run_suite_reported(scenario: &Scenario, suite: Suite, csv: &mut Option<String>) -> SuiteReport {
    let checks = run_suite(scenario, suite, csv).unwrap_or_else(|e| vec![Check::new(format!("error: {e}"), f64::INFINITY, 0.0)]);
    SuiteReport {
        pass: checks.iter().all(|c| c.pass),
        checks,
    }
}

/// Runs every requested suite and writes the outputs. Reports are written even when
/// checks fail.
pub fn run(scenario: &Scenario) -> Result<RunReport> {
    let cfg = &scenario.config;
    let mut suites = BTreeMap::new();
    let mut csv = None;
    for &suite in &cfg.suites {
        suites.insert(suite, run_suite_reported(scenario, suite, &mut csv));
    }
    let pass = suites.values().all(|s| s.pass);
    let report = RunReport {
        lattice: cfg.lattice,
        seed: cfg.seed,
        trials: cfg.trials,
        times: cfg.times.clone(),
        suites,
        pass,
    };

    let out = &scenario.output;
    fs::create_dir_all(out.join("snapshots"))?;
    fs::write(out.join("report.json"), serde_json::to_string_pretty(&report)? + "\n")?;
    if let Some(text) = csv {
        fs::write(out.join("conservation.csv"), text)?;
    }
    Snapshot::from_amplitudes(&scenario.amplitudes).write(&out.join("snapshots").join("amplitudes.json"))?;
    for (i, &t) in cfg.times.iter().enumerate() {
        let field = synthesize_sf(&scenario.amplitudes, t);
        Snapshot::from_field(&field).write(&out.join("snapshots").join(format!("sf_{i}.json")))?;
    }
    Ok(report)
}

/// Loads, validates and runs the config at `path`.
pub fn run_config_file(path: &Path) -> Result<RunReport> {
    let cfg = ScenarioConfig::load(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let scenario = cfg.validate(&base)?;
    run(&scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(suites: &str, amplitudes: &str) -> String {
        format!(
            r#"{{"lattice": {{"dim": 1, "n": 128, "dx": 0.25, "mass": 1.0}},
                "amplitudes": {amplitudes},
                "times": [0.0, 0.5, 1.0],
                "suites": {suites},
                "seed": 7,
                "output": "out"}}"#
        )
    }

    fn field_of(err: Error) -> String {
        match err {
            Error::Config { field, .. } => field,
            other => panic!("expected a config error, got {other}"),
        }
    }

    #[test]
    fn empty_suites_rejected() {
        let cfg = ScenarioConfig::from_json(&config("[]", r#"{"family": "random"}"#)).unwrap();
        assert_eq!(field_of(cfg.validate(Path::new(".")).unwrap_err()), "suites");
    }

    #[test]
    fn bad_lattice_named() {
        let text = config(r#"["algebra"]"#, r#"{"family": "random"}"#).replace("\"n\": 128", "\"n\": 7");
        let cfg = ScenarioConfig::from_json(&text).unwrap();
        assert_eq!(field_of(cfg.validate(Path::new(".")).unwrap_err()), "lattice");
    }

    #[test]
    fn bad_species_named() {
        let fam = r#"{"family": "gaussian", "species": [{"species": 5, "k0": [0.0]}]}"#;
        let cfg = ScenarioConfig::from_json(&config(r#"["algebra"]"#, fam)).unwrap();
        assert_eq!(field_of(cfg.validate(Path::new(".")).unwrap_err()), "amplitudes.species[0].species");
    }

    #[test]
    fn wide_packet_violates_tail_rule() {
        let fam = r#"{"family": "gaussian", "width": 4.0, "species": [{"species": 0, "k0": [0.0]}]}"#;
        let cfg = ScenarioConfig::from_json(&config(r#"["algebra"]"#, fam)).unwrap();
        assert_eq!(field_of(cfg.validate(Path::new(".")).unwrap_err()), "amplitudes");
    }

    #[test]
    fn conservation_needs_three_times() {
        let text = config(r#"["conservation"]"#, r#"{"family": "random"}"#).replace("[0.0, 0.5, 1.0]", "[0.0, 1.0]");
        let cfg = ScenarioConfig::from_json(&text).unwrap();
        assert_eq!(field_of(cfg.validate(Path::new(".")).unwrap_err()), "times");
    }

    #[test]
    fn unknown_suite_is_a_parse_error() {
        assert!(ScenarioConfig::from_json(&config(r#"["magic"]"#, r#"{"family": "random"}"#)).is_err());
    }

    #[test]
    fn single_mode_config_validates() {
        let fam = r#"{"family": "single_mode", "species": [{"species": 2, "mode": [3], "weight": [0.0, 1.0]}]}"#;
        let cfg = ScenarioConfig::from_json(&config(r#"["frequency"]"#, fam)).unwrap();
        let sc = cfg.validate(Path::new(".")).unwrap();
        assert!((sc.amplitudes.norm_sq() - 1.0).abs() < 1e-14);
        assert_eq!(sc.amplitudes.species_norms().0, 0.0);
    }
}
