//! Periodic position/momentum grid and its discrete Fourier transforms.
//!
//! Position samples sit at `x_j = (j - N/2) dx` on every axis, momentum samples at
//! `k_n = 2 pi n / (N dx)` with `n` in `-N/2 .. N/2 - 1`. Momentum-grid arrays are
//! stored in FFT order: storage index `i` holds `n = i` for `i < N/2` and `n = i - N`
//! otherwise. Arrays over the full grid are row-major with axis 0 slowest.
//!
//! The transform pair is normalized with `(2 pi)^{-d/2}` on both sides:
//!
//! ```text
//! f~(k_n) = (2 pi)^{-d/2} dx^d  sum_j exp(-i k_n . x_j) f(x_j)
//! f(x_j)  = (2 pi)^{-d/2} dk^d  sum_n exp(+i k_n . x_j) f~(k_n)
//! ```
//!
//! so that `dx^d sum |f|^2 = dk^d sum |f~|^2`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::{Realization, SpinorField};

/// Largest tail fraction a test packet may carry near Nyquist or near the box edge.
pub const TAIL_LIMIT: f64 = 1e-10;

/// Number of bins next to Nyquist (on each side) covered by the spectral tail rule.
pub const NYQUIST_GUARD_BINS: i64 = 2;

/// Fraction of the box half-width, measured from the boundary, covered by the box tail rule.
pub const BOX_GUARD_FRACTION: f64 = 0.1;

/// Plain-data description of a lattice; this is what gets serialized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub dim: usize,
    pub n: usize,
    pub dx: f64,
    pub mass: f64,
}

impl LatticeSpec {
    pub fn new(dim: usize, n: usize, dx: f64, mass: f64) -> Self {
        LatticeSpec { dim, n, dx, mass }
    }

    pub fn build(self) -> Result<Arc<Lattice>> {
        Lattice::new(self).map(Arc::new)
    }
}

#[derive(Clone)]
pub struct Lattice {
    spec: LatticeSpec,
    len: usize,
    forward_plan: Arc<dyn Fft<f64>>,
    inverse_plan: Arc<dyn Fft<f64>>,
    axis_momenta: Vec<f64>,
    axis_positions: Vec<f64>,
    omega: Vec<f64>,
    sign: Vec<f64>,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice").field("spec", &self.spec).finish()
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Lattice {
    pub fn new(spec: LatticeSpec) -> Result<Self> {
        let LatticeSpec { dim, n, dx, mass } = spec;
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidLattice(format!("dim must be 1, 2 or 3, got {dim}")));
        }
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidLattice(format!(
                "points per axis must be an even integer >= 4, got {n}"
            )));
        }
        if !(dx.is_finite() && dx > 0.0) {
            return Err(Error::InvalidLattice(format!("spacing must be positive, got {dx}")));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidLattice(format!("mass must be positive, got {mass}")));
        }

        let mut planner = FftPlanner::new();
        let forward_plan = planner.plan_fft_forward(n);
        let inverse_plan = planner.plan_fft_inverse(n);

        let dk = 2.0 * PI / (n as f64 * dx);
        let axis_momenta = (0..n).map(|i| mode_number(i, n) as f64 * dk).collect();
        let axis_positions = (0..n)
            .map(|j| (j as f64 - (n / 2) as f64) * dx)
            .collect();

        let len = n.pow(dim as u32);
        let mut lattice = Lattice {
            spec,
            len,
            forward_plan,
            inverse_plan,
            axis_momenta,
            axis_positions,
            omega: Vec::new(),
            sign: Vec::new(),
        };
        lattice.omega = (0..len)
            .map(|p| {
                let k = lattice.momentum(p);
                (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + mass * mass).sqrt()
            })
            .collect();
        lattice.sign = (0..len)
            .map(|p| {
                let parity: usize = lattice.coords(p)[..dim].iter().sum();
                if parity % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect();
        Ok(lattice)
    }

    pub fn spec(&self) -> LatticeSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn dx(&self) -> f64 {
        self.spec.dx
    }

    pub fn mass(&self) -> f64 {
        self.spec.mass
    }

    /// Total number of grid points, `N^d`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dk(&self) -> f64 {
        2.0 * PI / (self.spec.n as f64 * self.spec.dx)
    }

    pub fn box_length(&self) -> f64 {
        self.spec.n as f64 * self.spec.dx
    }

    pub fn position_measure(&self) -> f64 {
        self.spec.dx.powi(self.spec.dim as i32)
    }

    pub fn momentum_measure(&self) -> f64 {
        self.dk().powi(self.spec.dim as i32)
    }

    pub fn measure(&self, realization: Realization) -> f64 {
        match realization {
            Realization::Position => self.position_measure(),
            Realization::Momentum => self.momentum_measure(),
        }
    }

    /// Per-axis storage indices of grid point `p`; unused axes are zero.
    pub fn coords(&self, p: usize) -> [usize; 3] {
        let n = self.spec.n;
        let mut out = [0; 3];
        let mut rest = p;
        for axis in (0..self.spec.dim).rev() {
            out[axis] = rest % n;
            rest /= n;
        }
        out
    }

    pub fn index(&self, coords: [usize; 3]) -> usize {
        coords[..self.spec.dim]
            .iter()
            .fold(0, |acc, &c| acc * self.spec.n + c)
    }

    /// Signed mode numbers `n` of grid point `p` (zero on unused axes).
    pub fn mode_numbers(&self, p: usize) -> [i64; 3] {
        let c = self.coords(p);
        let mut out = [0; 3];
        for axis in 0..self.spec.dim {
            out[axis] = mode_number(c[axis], self.spec.n);
        }
        out
    }

    /// Grid point holding the given signed mode numbers.
    pub fn mode_index(&self, modes: [i64; 3]) -> usize {
        let n = self.spec.n as i64;
        let mut coords = [0; 3];
        for axis in 0..self.spec.dim {
            coords[axis] = modes[axis].rem_euclid(n) as usize;
        }
        self.index(coords)
    }

    /// Physical momentum `k^j` of grid point `p`; zero on unused axes.
    pub fn momentum(&self, p: usize) -> [f64; 3] {
        let c = self.coords(p);
        let mut out = [0.0; 3];
        for axis in 0..self.spec.dim {
            out[axis] = self.axis_momenta[c[axis]];
        }
        out
    }

    /// Physical coordinate `x^j` of grid point `p`; zero on unused axes.
    pub fn position(&self, p: usize) -> [f64; 3] {
        let c = self.coords(p);
        let mut out = [0.0; 3];
        for axis in 0..self.spec.dim {
            out[axis] = self.axis_positions[c[axis]];
        }
        out
    }

    pub fn omega(&self, p: usize) -> f64 {
        self.omega[p]
    }

    pub fn omega_values(&self) -> &[f64] {
        &self.omega
    }

    /// Grid point holding `-k` for the momentum at `p`. Nyquist maps to itself.
    pub fn reflected(&self, p: usize) -> usize {
        let n = self.spec.n;
        let c = self.coords(p);
        let mut r = [0; 3];
        for axis in 0..self.spec.dim {
            r[axis] = (n - c[axis]) % n;
        }
        self.index(r)
    }

    /// Position samples to momentum samples.
    pub fn forward(&self, data: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(data.len())?;
        let mut out = data.to_vec();
        self.forward_in_place(&mut out);
        Ok(out)
    }

    /// Momentum samples to position samples.
    pub fn inverse(&self, data: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(data.len())?;
        let mut out = data.to_vec();
        self.inverse_in_place(&mut out);
        Ok(out)
    }

    pub(crate) fn forward_in_place(&self, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.len, "array does not match the lattice");
        self.transform_axes(data, &self.forward_plan);
        let scale = (2.0 * PI).powf(-(self.spec.dim as f64) / 2.0) * self.position_measure();
        for (v, s) in data.iter_mut().zip(&self.sign) {
            *v *= s * scale;
        }
    }

    pub(crate) fn inverse_in_place(&self, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.len, "array does not match the lattice");
        for (v, s) in data.iter_mut().zip(&self.sign) {
            *v *= *s;
        }
        self.transform_axes(data, &self.inverse_plan);
        let scale = (2.0 * PI).powf(-(self.spec.dim as f64) / 2.0) * self.momentum_measure();
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    fn transform_axes(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.spec.n;
        let dim = self.spec.dim;
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        for axis in 0..dim {
            let stride = n.pow((dim - 1 - axis) as u32);
            if stride == 1 {
                for chunk in data.chunks_exact_mut(n) {
                    plan.process_with_scratch(chunk, &mut scratch);
                }
                continue;
            }
            for outer in 0..self.len / (n * stride) {
                for inner in 0..stride {
                    let base = outer * n * stride + inner;
                    for (j, slot) in line.iter_mut().enumerate() {
                        *slot = data[base + j * stride];
                    }
                    plan.process_with_scratch(&mut line, &mut scratch);
                    for (j, v) in line.iter().enumerate() {
                        data[base + j * stride] = *v;
                    }
                }
            }
        }
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.len {
            return Err(Error::Structural(format!(
                "array has {len} samples but the lattice has {}",
                self.len
            )));
        }
        Ok(())
    }

    /// True if grid point `p` lies within the guard band next to Nyquist on any axis.
    pub fn near_nyquist(&self, p: usize) -> bool {
        let half = (self.spec.n / 2) as i64;
        self.mode_numbers(p)[..self.spec.dim]
            .iter()
            .any(|&m| m.abs() >= half - NYQUIST_GUARD_BINS)
    }

    /// True if grid point `p` lies within the guard band next to the box boundary on any axis.
    pub fn near_boundary(&self, p: usize) -> bool {
        let edge = (1.0 - BOX_GUARD_FRACTION) * self.box_length() / 2.0;
        self.position(p)[..self.spec.dim]
            .iter()
            .any(|&x| x.abs() >= edge)
    }
}

/// Signed mode number of FFT storage index `i` on an axis of `n` points.
pub fn mode_number(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// A function of momentum sampled on the grid, applied as a mode-by-mode multiplier.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSymbol {
    pub values: Vec<Complex64>,
}

impl ScalarSymbol {
    /// The symbol of `sqrt(-Laplacian + m^2)`.
    pub fn omega(lattice: &Lattice) -> Self {
        ScalarSymbol {
            values: lattice
                .omega_values()
                .iter()
                .map(|&w| Complex64::new(w, 0.0))
                .collect(),
        }
    }

    pub fn from_fn(lattice: &Lattice, f: impl Fn([f64; 3]) -> Complex64) -> Self {
        ScalarSymbol {
            values: (0..lattice.len()).map(|p| f(lattice.momentum(p))).collect(),
        }
    }

    /// Multiplies every momentum mode of every component by the symbol. The result is in
    /// the caller's realization.
    pub fn apply(&self, field: &SpinorField) -> Result<SpinorField> {
        field.lattice().check_len(self.values.len())?;
        let mut out = field.to_momentum();
        for comp in out.components_mut() {
            for (v, s) in comp.iter_mut().zip(&self.values) {
                *v *= s;
            }
        }
        Ok(out.into_realization(field.realization()))
    }
}

/// Position realization of `field` into the momentum realization.
pub fn to_momentum(field: &SpinorField) -> SpinorField {
    field.to_momentum()
}

/// Momentum realization of `field` into the position realization.
pub fn from_momentum(field: &SpinorField) -> SpinorField {
    field.to_position()
}

/// Applies `omega = sqrt(-Laplacian + m^2)` mode by mode.
pub fn apply_omega(field: &SpinorField) -> SpinorField {
    let lattice = field.lattice();
    let mut out = field.to_momentum();
    for comp in out.components_mut() {
        for (v, w) in comp.iter_mut().zip(lattice.omega_values()) {
            *v *= *w;
        }
    }
    out.into_realization(field.realization())
}
