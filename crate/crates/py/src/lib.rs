//! Python bindings for `rcqm`.
//!
//! Fields and amplitude sets cross the boundary as lists of four complex lists, one per
//! component, in the lattice's row-major order with momenta in FFT order. Reports come
//! back as plain dicts built from the same JSON the CLI writes.

use std::path::PathBuf;
use std::sync::Arc;

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use rcqm::observables::{self, AuditOptions, Generator, GeneratorSet, NormCheck, CONSERVED_QUANTITIES};
use rcqm::packets::{random_amplitudes, rng_from_seed, PacketOptions};
use rcqm::snapshot::Snapshot;
use rcqm::{scenario, suites, Direction, Lattice, LatticeSpec, Picture, Realization};

type Components = [Vec<Complex64>; 4];

fn py_err(e: rcqm::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_dict<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyDict>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))?.cast_into::<PyDict>().map_err(Into::into)
}

/// Parses a picture tag: `sf`, `fw` or `dirac`.
pub fn parse_picture(name: &str) -> Result<Picture, String> {
    match name {
        "sf" => Ok(Picture::SchrodingerFoldy),
        "fw" => Ok(Picture::FoldyWouthuysen),
        "dirac" => Ok(Picture::Dirac),
        other => Err(format!("unknown picture {other:?}; expected sf, fw or dirac")),
    }
}

pub fn picture_name(p: Picture) -> &'static str {
    match p {
        Picture::SchrodingerFoldy => "sf",
        Picture::FoldyWouthuysen => "fw",
        Picture::Dirac => "dirac",
    }
}

/// Parses a generator name as used in `conservation.csv`, or `g` for the charge sign.
pub fn parse_generator(name: &str) -> Result<Generator, String> {
    if name == "g" {
        return Ok(Generator::ChargeSign);
    }
    CONSERVED_QUANTITIES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, g)| *g)
        .ok_or_else(|| format!("unknown generator {name:?}"))
}

fn components(data: Vec<Vec<Complex64>>) -> PyResult<Components> {
    <Components>::try_from(data).map_err(|d| PyValueError::new_err(format!("expected 4 components, got {}", d.len())))
}

#[pyclass(name = "Lattice", module = "rcqm", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLattice {
    inner: Arc<Lattice>,
}

#[pymethods]
impl PyLattice {
    #[new]
    fn new(dim: usize, n: usize, dx: f64, mass: f64) -> PyResult<Self> {
        let inner = LatticeSpec::new(dim, n, dx, mass).build().map_err(py_err)?;
        Ok(PyLattice { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn dx(&self) -> f64 {
        self.inner.dx()
    }

    #[getter]
    fn mass(&self) -> f64 {
        self.inner.mass()
    }

    #[getter]
    fn dk(&self) -> f64 {
        self.inner.dk()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn omega(&self) -> Vec<f64> {
        self.inner.omega_values().to_vec()
    }

    fn momentum(&self, p: usize) -> PyResult<[f64; 3]> {
        self.check_index(p)?;
        Ok(self.inner.momentum(p))
    }

    fn position(&self, p: usize) -> PyResult<[f64; 3]> {
        self.check_index(p)?;
        Ok(self.inner.position(p))
    }

    /// Flat index of the mode with the given signed mode numbers.
    fn mode_index(&self, modes: Vec<i64>) -> PyResult<usize> {
        let dim = self.inner.dim();
        let half = (self.inner.n() / 2) as i64;
        if modes.len() != dim || modes.iter().any(|m| *m < -half || *m >= half) {
            return Err(PyValueError::new_err(format!("expected {dim} mode numbers in [-{half}, {half})")));
        }
        let mut m = [0i64; 3];
        m[..dim].copy_from_slice(&modes);
        Ok(self.inner.mode_index(m))
    }

    fn __repr__(&self) -> String {
        let s = self.inner.spec();
        format!("Lattice(dim={}, n={}, dx={}, mass={})", s.dim, s.n, s.dx, s.mass)
    }
}

impl PyLattice {
    fn check_index(&self, p: usize) -> PyResult<()> {
        if p >= self.inner.len() {
            return Err(PyValueError::new_err(format!("index {p} out of range")));
        }
        Ok(())
    }
}

/// Momentum amplitudes `a_{-+}, a_{--}, a_{+-}, a_{++}`.
#[pyclass(name = "Amplitudes", module = "rcqm", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyAmplitudes {
    inner: rcqm::AmplitudeSet,
}

#[pymethods]
impl PyAmplitudes {
    #[new]
    fn new(lattice: &PyLattice, data: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let inner = rcqm::AmplitudeSet::new(&lattice.inner, components(data)?).map_err(py_err)?;
        Ok(PyAmplitudes { inner })
    }

    /// Seeded random Gaussian packets in all four species, shaped to fit the lattice.
    #[staticmethod]
    fn random(lattice: &PyLattice, seed: u64) -> Self {
        let opts = PacketOptions::for_lattice(&lattice.inner);
        let inner = random_amplitudes(&lattice.inner, &mut rng_from_seed(seed), &opts);
        PyAmplitudes { inner }
    }

    #[staticmethod]
    #[pyo3(signature = (lattice, species, modes, value = Complex64::new(1.0, 0.0)))]
    fn single_mode(lattice: &PyLattice, species: usize, modes: Vec<i64>, value: Complex64) -> PyResult<Self> {
        if species > 3 {
            return Err(PyValueError::new_err("species must be in 0..=3"));
        }
        let p = lattice.mode_index(modes)?;
        Ok(PyAmplitudes {
            inner: rcqm::AmplitudeSet::single_mode(&lattice.inner, species, p, value),
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let snap = Snapshot::from_json(text).map_err(py_err)?;
        Ok(PyAmplitudes {
            inner: snap.to_amplitudes(None).map_err(py_err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        Snapshot::from_amplitudes(&self.inner).to_json().map_err(py_err)
    }

    #[getter]
    fn lattice(&self) -> PyLattice {
        PyLattice {
            inner: Arc::clone(self.inner.lattice()),
        }
    }

    fn components(&self) -> Components {
        self.inner.amplitudes().clone()
    }

    fn norm_sq(&self) -> f64 {
        self.inner.norm_sq()
    }

    /// `(electron, positron)` squared norms.
    fn species_norms(&self) -> (f64, f64) {
        self.inner.species_norms()
    }

    fn normalized(&self) -> Self {
        PyAmplitudes {
            inner: self.inner.normalized(),
        }
    }

    /// Means of the ten Poincare generators and the spin quantities, keyed by name.
    fn means<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let values = observables::amplitude_means(&self.inner.normalized());
        let out = PyDict::new(py);
        for ((name, _), v) in CONSERVED_QUANTITIES.iter().zip(values) {
            out.set_item(*name, v)?;
        }
        Ok(out)
    }

    fn sf(&self, t: f64) -> PyField {
        PyField {
            inner: rcqm::synthesize_sf(&self.inner, t),
        }
    }

    fn fw(&self, t: f64) -> PyField {
        PyField {
            inner: rcqm::synthesize_fw(&self.inner, t),
        }
    }
}

/// A four-component field on a lattice, tagged with its realization, picture and time.
#[pyclass(name = "Field", module = "rcqm", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyField {
    inner: rcqm::SpinorField,
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (lattice, data, picture = "sf", momentum = false, time = 0.0))]
    fn new(lattice: &PyLattice, data: Vec<Vec<Complex64>>, picture: &str, momentum: bool, time: f64) -> PyResult<Self> {
        let realization = if momentum { Realization::Momentum } else { Realization::Position };
        let picture = parse_picture(picture).map_err(PyValueError::new_err)?;
        let inner = rcqm::SpinorField::from_components(&lattice.inner, realization, picture, time, components(data)?)
            .map_err(py_err)?;
        Ok(PyField { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let snap = Snapshot::from_json(text).map_err(py_err)?;
        Ok(PyField {
            inner: snap.to_field(None).map_err(py_err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        Snapshot::from_field(&self.inner).to_json().map_err(py_err)
    }

    #[getter]
    fn lattice(&self) -> PyLattice {
        PyLattice {
            inner: Arc::clone(self.inner.lattice()),
        }
    }

    #[getter]
    fn picture(&self) -> &'static str {
        picture_name(self.inner.picture())
    }

    #[getter]
    fn is_momentum(&self) -> bool {
        self.inner.realization() == Realization::Momentum
    }

    #[getter]
    fn time(&self) -> f64 {
        self.inner.time()
    }

    fn components(&self) -> Components {
        self.inner.components().clone()
    }

    fn with_picture(&self, picture: &str) -> PyResult<Self> {
        let p = parse_picture(picture).map_err(PyValueError::new_err)?;
        Ok(PyField {
            inner: self.inner.clone().with_picture(p),
        })
    }

    fn to_momentum(&self) -> Self {
        PyField {
            inner: self.inner.to_momentum(),
        }
    }

    fn to_position(&self) -> Self {
        PyField {
            inner: self.inner.to_position(),
        }
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn inner_product(&self, other: &PyField) -> PyResult<Complex64> {
        self.inner.check_compatible(&other.inner).map_err(py_err)?;
        Ok(self.inner.inner(&other.inner))
    }

    fn relative_distance(&self, other: &PyField) -> PyResult<f64> {
        self.inner.check_compatible(&other.inner).map_err(py_err)?;
        Ok(self.inner.relative_distance(&other.inner))
    }

    /// Exact free evolution by `dt` in the field's own picture.
    fn evolve(&self, dt: f64) -> Self {
        PyField {
            inner: rcqm::evolve(&self.inner, dt),
        }
    }

    /// The Pauli-Dirac involution `v`, mapping SF fields to FW fields and back.
    fn apply_v(&self) -> PyResult<Self> {
        Ok(PyField {
            inner: rcqm::apply_v(&self.inner).map_err(py_err)?,
        })
    }

    /// The unitary map `W` from the SF picture to the Dirac picture, or back with `inverse`.
    #[pyo3(signature = (inverse = false))]
    fn apply_w(&self, inverse: bool) -> Self {
        let dir = if inverse { Direction::Inverse } else { Direction::Forward };
        PyField {
            inner: rcqm::apply_w(&self.inner, dir),
        }
    }

    /// Expectation value of a named generator (`P0`, `J12`, `Sb3`, `g`, ...) at time `t`.
    /// SF fields only; the field must be normalized unless `require_normalized` is false.
    #[pyo3(signature = (generator, t = None, require_normalized = true))]
    fn mean(&self, generator: &str, t: Option<f64>, require_normalized: bool) -> PyResult<Complex64> {
        let gen = parse_generator(generator).map_err(PyValueError::new_err)?;
        let gens = GeneratorSet::new(self.inner.lattice(), self.inner.realization());
        let check = if require_normalized { NormCheck::Require } else { NormCheck::Skip };
        observables::mean(&self.inner, &gens, gen, t.unwrap_or(self.inner.time()), check).map_err(py_err)
    }
}

/// Conservation audit of the 22 generator means; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (amplitudes, times, explicit_time = true))]
fn audit_conservation<'py>(
    py: Python<'py>,
    amplitudes: &PyAmplitudes,
    times: Vec<f64>,
    explicit_time: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let opts = AuditOptions {
        explicit_time,
        ..AuditOptions::default()
    };
    let report = observables::audit_conservation(&amplitudes.inner, &times, opts).map_err(py_err)?;
    let out = to_dict(py, &report)?;
    out.set_item("pass", report.pass())?;
    Ok(out)
}

/// Checks the Poincare commutation relations on seeded random packets.
#[pyfunction]
#[pyo3(signature = (lattice, trials = 3, seed = 0, t = 0.0))]
fn check_poincare<'py>(py: Python<'py>, lattice: &PyLattice, trials: usize, seed: u64, t: f64) -> PyResult<Bound<'py, PyDict>> {
    let report = observables::check_poincare_algebra(&lattice.inner, trials, seed, t).map_err(py_err)?;
    let out = to_dict(py, &report)?;
    out.set_item("pass", report.pass())?;
    Ok(out)
}

/// One line per suite: name and summary.
#[pyfunction]
fn describe() -> String {
    suites::describe()
}

/// Runs a scenario config file like `rcqm run --config` and returns `report.json` as a dict.
#[pyfunction]
fn run_config<'py>(py: Python<'py>, path: PathBuf) -> PyResult<Bound<'py, PyDict>> {
    let report = py.detach(|| scenario::run_config_file(&path)).map_err(py_err)?;
    to_dict(py, &report)
}

#[pymodule]
#[pyo3(name = "rcqm")]
fn rcqm_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLattice>()?;
    m.add_class::<PyAmplitudes>()?;
    m.add_class::<PyField>()?;
    m.add_function(wrap_pyfunction!(audit_conservation, m)?)?;
    m.add_function(wrap_pyfunction!(check_poincare, m)?)?;
    m.add_function(wrap_pyfunction!(describe, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    Ok(())
}
