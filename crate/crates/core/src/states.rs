//! Spinor fields on the lattice, momentum-spin amplitudes, and synthesis of the general
//! solutions of the Schrödinger-Foldy and Foldy-Wouthuysen equations.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{Mat4, Spinor};
use crate::error::{Error, Result};
use crate::evolve::Picture;
use crate::lattice::Lattice;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Realization {
    Position,
    Momentum,
}

/// Four complex components sampled on every lattice point.
///
/// Components 1-2 hold the electron wave function and components 3-4 the positron wave
/// function. Arithmetic operators panic when the operands live on different lattices or
/// in different realizations; use [`SpinorField::checked_sub`] for a fallible variant.
#[derive(Debug, Clone)]
pub struct SpinorField {
    lattice: Arc<Lattice>,
    realization: Realization,
    picture: Picture,
    time: f64,
    components: [Vec<Complex64>; 4],
}

impl SpinorField {
    pub fn zeros(lattice: &Arc<Lattice>, realization: Realization, picture: Picture, time: f64) -> Self {
        let len = lattice.len();
        SpinorField {
            lattice: Arc::clone(lattice),
            realization,
            picture,
            time,
            components: [vec![ZERO; len], vec![ZERO; len], vec![ZERO; len], vec![ZERO; len]],
        }
    }

    pub fn from_components(
        lattice: &Arc<Lattice>,
        realization: Realization,
        picture: Picture,
        time: f64,
        components: [Vec<Complex64>; 4],
    ) -> Result<Self> {
        for c in &components {
            lattice.check_len(c.len())?;
        }
        Ok(SpinorField {
            lattice: Arc::clone(lattice),
            realization,
            picture,
            time,
            components,
        })
    }

    /// Samples `f(x)` (position realization) or `f(k)` (momentum realization).
    pub fn from_fn(
        lattice: &Arc<Lattice>,
        realization: Realization,
        picture: Picture,
        time: f64,
        f: impl Fn([f64; 3]) -> Spinor,
    ) -> Self {
        let mut out = SpinorField::zeros(lattice, realization, picture, time);
        for p in 0..lattice.len() {
            let at = match realization {
                Realization::Position => lattice.position(p),
                Realization::Momentum => lattice.momentum(p),
            };
            out.set_spinor(p, f(at));
        }
        out
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn realization(&self) -> Realization {
        self.realization
    }

    pub fn picture(&self) -> Picture {
        self.picture
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn components(&self) -> &[Vec<Complex64>; 4] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [Vec<Complex64>; 4] {
        &mut self.components
    }

    pub fn into_components(self) -> [Vec<Complex64>; 4] {
        self.components
    }

    pub fn with_picture(mut self, picture: Picture) -> Self {
        self.picture = picture;
        self
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    pub fn spinor(&self, p: usize) -> Spinor {
        [0, 1, 2, 3].map(|c| self.components[c][p])
    }

    pub fn set_spinor(&mut self, p: usize, s: Spinor) {
        for (c, v) in s.into_iter().enumerate() {
            self.components[c][p] = v;
        }
    }

    pub fn to_momentum(&self) -> SpinorField {
        self.clone().into_realization(Realization::Momentum)
    }

    pub fn to_position(&self) -> SpinorField {
        self.clone().into_realization(Realization::Position)
    }

    pub fn into_realization(mut self, target: Realization) -> SpinorField {
        if self.realization == target {
            return self;
        }
        for comp in self.components.iter_mut() {
            match target {
                Realization::Momentum => self.lattice.forward_in_place(comp),
                Realization::Position => self.lattice.inverse_in_place(comp),
            }
        }
        self.realization = target;
        self
    }

    /// Discrete `L^2` inner product `<self, other>` with the realization's measure.
    pub fn inner(&self, other: &SpinorField) -> Complex64 {
        self.assert_compatible(other);
        let mut acc = ZERO;
        for c in 0..4 {
            for (a, b) in self.components[c].iter().zip(&other.components[c]) {
                acc += a.conj() * b;
            }
        }
        acc * self.lattice.measure(self.realization)
    }

    pub fn norm_sq(&self) -> f64 {
        let mut acc = 0.0;
        for comp in &self.components {
            acc += comp.iter().map(|v| v.norm_sqr()).sum::<f64>();
        }
        acc * self.lattice.measure(self.realization)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `||self - other|| / ||other||`, converting `other` to this realization first.
    pub fn relative_distance(&self, other: &SpinorField) -> f64 {
        let other = other.clone().into_realization(self.realization);
        (self - &other).norm() / other.norm()
    }

    pub fn scaled(&self, c: Complex64) -> SpinorField {
        let mut out = self.clone();
        for comp in out.components.iter_mut() {
            for v in comp.iter_mut() {
                *v *= c;
            }
        }
        out
    }

    pub fn scaled_real(&self, c: f64) -> SpinorField {
        self.scaled(Complex64::new(c, 0.0))
    }

    pub fn conj(&self) -> SpinorField {
        let mut out = self.clone();
        for comp in out.components.iter_mut() {
            for v in comp.iter_mut() {
                *v = v.conj();
            }
        }
        out
    }

    /// Pointwise multiplication by one constant 4x4 matrix.
    pub fn apply_matrix(&self, m: &Mat4) -> SpinorField {
        self.map_spinors(|_, s| m.apply(&s))
    }

    /// Rewrites every spinor `s(p)` as `f(p, s(p))`, keeping the realization.
    pub fn map_spinors(&self, f: impl Fn(usize, Spinor) -> Spinor) -> SpinorField {
        let mut out = self.clone();
        for p in 0..self.lattice.len() {
            out.set_spinor(p, f(p, self.spinor(p)));
        }
        out
    }

    /// Multiplies each component by a real function of the grid point.
    pub fn map_scalar(&self, f: impl Fn(usize) -> f64) -> SpinorField {
        let mut out = self.clone();
        for comp in out.components.iter_mut() {
            for (p, v) in comp.iter_mut().enumerate() {
                *v *= f(p);
            }
        }
        out
    }

    pub fn checked_sub(&self, other: &SpinorField) -> Result<SpinorField> {
        self.check_compatible(other)?;
        Ok(self - other)
    }

    pub fn checked_add(&self, other: &SpinorField) -> Result<SpinorField> {
        self.check_compatible(other)?;
        Ok(self + other)
    }

    pub fn check_compatible(&self, other: &SpinorField) -> Result<()> {
        if *self.lattice != *other.lattice {
            return Err(Error::Structural("fields live on different lattices".into()));
        }
        if self.realization != other.realization {
            return Err(Error::Realization {
                expected: self.realization,
                found: other.realization,
            });
        }
        Ok(())
    }

    fn assert_compatible(&self, other: &SpinorField) {
        if let Err(e) = self.check_compatible(other) {
            panic!("incompatible spinor fields: {e}");
        }
    }

    fn zip_with(&self, other: &SpinorField, f: impl Fn(Complex64, Complex64) -> Complex64) -> SpinorField {
        self.assert_compatible(other);
        let mut out = self.clone();
        for c in 0..4 {
            for (a, b) in out.components[c].iter_mut().zip(&other.components[c]) {
                *a = f(*a, *b);
            }
        }
        out
    }

    /// Spectral-tail fraction within the Nyquist guard band.
    pub fn nyquist_tail_fraction(&self) -> f64 {
        let k = self.to_momentum();
        tail_fraction(&k.components, |p| self.lattice.near_nyquist(p))
    }

    /// Position-space fraction within the box-edge guard band.
    pub fn box_tail_fraction(&self) -> f64 {
        let x = self.to_position();
        tail_fraction(&x.components, |p| self.lattice.near_boundary(p))
    }
}

fn tail_fraction(components: &[Vec<Complex64>; 4], in_band: impl Fn(usize) -> bool) -> f64 {
    let mut total = 0.0;
    let mut tail = 0.0;
    for comp in components {
        for (p, v) in comp.iter().enumerate() {
            let w = v.norm_sqr();
            total += w;
            if in_band(p) {
                tail += w;
            }
        }
    }
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}

impl Add for &SpinorField {
    type Output = SpinorField;
    fn add(self, rhs: &SpinorField) -> SpinorField {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &SpinorField {
    type Output = SpinorField;
    fn sub(self, rhs: &SpinorField) -> SpinorField {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &SpinorField {
    type Output = SpinorField;
    fn neg(self) -> SpinorField {
        self.scaled_real(-1.0)
    }
}

impl Mul<&SpinorField> for Complex64 {
    type Output = SpinorField;
    fn mul(self, rhs: &SpinorField) -> SpinorField {
        rhs.scaled(self)
    }
}

/// Momentum-spin amplitudes `a^-_+, a^-_-, a^+_-, a^+_+`, weighting the orts
/// `d_1 .. d_4` in that order, on the momentum grid (FFT storage order).
#[derive(Debug, Clone)]
pub struct AmplitudeSet {
    lattice: Arc<Lattice>,
    amplitudes: [Vec<Complex64>; 4],
}

impl AmplitudeSet {
    pub fn zeros(lattice: &Arc<Lattice>) -> Self {
        let len = lattice.len();
        AmplitudeSet {
            lattice: Arc::clone(lattice),
            amplitudes: [vec![ZERO; len], vec![ZERO; len], vec![ZERO; len], vec![ZERO; len]],
        }
    }

    pub fn new(lattice: &Arc<Lattice>, amplitudes: [Vec<Complex64>; 4]) -> Result<Self> {
        for a in &amplitudes {
            lattice.check_len(a.len())?;
        }
        Ok(AmplitudeSet {
            lattice: Arc::clone(lattice),
            amplitudes,
        })
    }

    /// A single occupied bin: species `species` (0..4) at grid point `p`.
    pub fn single_mode(lattice: &Arc<Lattice>, species: usize, p: usize, value: Complex64) -> Self {
        let mut out = AmplitudeSet::zeros(lattice);
        out.amplitudes[species][p] = value;
        out
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn amplitudes(&self) -> &[Vec<Complex64>; 4] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Vec<Complex64>; 4] {
        &mut self.amplitudes
    }

    pub fn a_minus_plus(&self) -> &[Complex64] {
        &self.amplitudes[0]
    }

    pub fn a_minus_minus(&self) -> &[Complex64] {
        &self.amplitudes[1]
    }

    pub fn a_plus_minus(&self) -> &[Complex64] {
        &self.amplitudes[2]
    }

    pub fn a_plus_plus(&self) -> &[Complex64] {
        &self.amplitudes[3]
    }

    /// The column `A(k)` at grid point `p`.
    pub fn column(&self, p: usize) -> Spinor {
        [0, 1, 2, 3].map(|c| self.amplitudes[c][p])
    }

    /// `dk^d sum |a|^2` over all four species.
    pub fn norm_sq(&self) -> f64 {
        let s: f64 = self
            .amplitudes
            .iter()
            .map(|a| a.iter().map(|v| v.norm_sqr()).sum::<f64>())
            .sum();
        s * self.lattice.momentum_measure()
    }

    /// Squared norm carried by the electron (first two) and positron (last two) species.
    pub fn species_norms(&self) -> (f64, f64) {
        let dk = self.lattice.momentum_measure();
        let part = |r: std::ops::Range<usize>| -> f64 {
            self.amplitudes[r]
                .iter()
                .map(|a| a.iter().map(|v| v.norm_sqr()).sum::<f64>())
                .sum::<f64>()
                * dk
        };
        (part(0..2), part(2..4))
    }

    pub fn normalized(&self) -> AmplitudeSet {
        self.scaled(Complex64::new(1.0 / self.norm_sq().sqrt(), 0.0))
    }

    pub fn scaled(&self, c: Complex64) -> AmplitudeSet {
        let mut out = self.clone();
        for a in out.amplitudes.iter_mut() {
            for v in a.iter_mut() {
                *v *= c;
            }
        }
        out
    }

    pub fn combine(&self, alpha: Complex64, other: &AmplitudeSet, beta: Complex64) -> Result<AmplitudeSet> {
        if *self.lattice != *other.lattice {
            return Err(Error::Structural("amplitude sets live on different lattices".into()));
        }
        let mut out = self.clone();
        for c in 0..4 {
            for (a, b) in out.amplitudes[c].iter_mut().zip(&other.amplitudes[c]) {
                *a = alpha * *a + beta * b;
            }
        }
        Ok(out)
    }

    /// The amplitudes read as a momentum-realization field at `t = 0`.
    pub fn as_momentum_field(&self, picture: Picture) -> SpinorField {
        SpinorField {
            lattice: Arc::clone(&self.lattice),
            realization: Realization::Momentum,
            picture,
            time: 0.0,
            components: self.amplitudes.clone(),
        }
    }
}

/// General solution of the Schrödinger-Foldy equation at time `t`:
/// `f(t, x) = (2 pi)^{-d/2} sum_k dk^d exp(-i omega t + i k.x) A(k)`.
pub fn synthesize_sf(amps: &AmplitudeSet, t: f64) -> SpinorField {
    let lattice = &amps.lattice;
    let mut field = SpinorField::zeros(lattice, Realization::Momentum, Picture::SchrodingerFoldy, t);
    for p in 0..lattice.len() {
        let phase = Complex64::from_polar(1.0, -lattice.omega(p) * t);
        for c in 0..4 {
            field.components[c][p] = phase * amps.amplitudes[c][p];
        }
    }
    field.into_realization(Realization::Position)
}

/// General solution of the Foldy-Wouthuysen equation at time `t`: the electron part as in
/// [`synthesize_sf`], the positron part built from `exp(+i omega t - i k.x)` and the
/// conjugated amplitudes.
pub fn synthesize_fw(amps: &AmplitudeSet, t: f64) -> SpinorField {
    let lattice = &amps.lattice;
    let mut field = SpinorField::zeros(lattice, Realization::Momentum, Picture::FoldyWouthuysen, t);
    for p in 0..lattice.len() {
        let w = lattice.omega(p);
        let minus = Complex64::from_polar(1.0, -w * t);
        let plus = Complex64::from_polar(1.0, w * t);
        // exp(-i k.x) puts the mode at -k; the Nyquist bin is its own reflection.
        let r = lattice.reflected(p);
        for c in 0..2 {
            field.components[c][p] = minus * amps.amplitudes[c][p];
        }
        for c in 2..4 {
            field.components[c][r] += plus * amps.amplitudes[c][p].conj();
        }
    }
    field.into_realization(Realization::Position)
}

/// Inverse of [`synthesize_sf`]: reads the amplitudes off a solution snapshot at time `t`.
pub fn analyze_sf(field: &SpinorField, t: f64) -> AmplitudeSet {
    let k = field.to_momentum();
    let lattice = Arc::clone(field.lattice());
    let mut amps = AmplitudeSet::zeros(&lattice);
    for p in 0..lattice.len() {
        let phase = Complex64::from_polar(1.0, lattice.omega(p) * t);
        for c in 0..4 {
            amps.amplitudes[c][p] = phase * k.components[c][p];
        }
    }
    amps
}

/// Squared-norm content of the `exp(-i omega t)` and `exp(+i omega t)` branches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencySplit {
    pub positive: f64,
    pub negative: f64,
}

/// Smallest `|sin(omega dt)|` accepted at a populated mode.
pub const SPLIT_CONDITION_LIMIT: f64 = 1e-6;

/// Splits each momentum mode of a free solution into its positive- and negative-frequency
/// branches from two snapshots at `t0` and `t0 + dt`.
///
/// Per mode and component, `f(t) = P exp(-i omega t) + Q exp(+i omega t)`; two snapshots
/// determine `P` and `Q` unless `omega dt` is a multiple of pi. The returned norms are the
/// branch contents at `t0`.
pub fn frequency_split(first: &SpinorField, second: &SpinorField) -> Result<FrequencySplit> {
    first.check_compatible(&second.clone().into_realization(first.realization()))?;
    let lattice = Arc::clone(first.lattice());
    let dt = second.time() - first.time();
    let a = first.to_momentum();
    let b = second.to_momentum();

    let mut populated_scale: f64 = 0.0;
    for c in 0..4 {
        for p in 0..lattice.len() {
            populated_scale = populated_scale.max(a.components[c][p].norm().max(b.components[c][p].norm()));
        }
    }
    let threshold = populated_scale * 1e-14;

    let mut positive = 0.0;
    let mut negative = 0.0;
    for p in 0..lattice.len() {
        let theta = lattice.omega(p) * dt;
        let (sin, cos) = theta.sin_cos();
        let populated = (0..4).any(|c| {
            a.components[c][p].norm() > threshold || b.components[c][p].norm() > threshold
        });
        if !populated {
            continue;
        }
        if sin.abs() < SPLIT_CONDITION_LIMIT {
            return Err(Error::IllConditionedSplit { sin: sin.abs() });
        }
        let back = Complex64::new(cos, -sin);
        let denom = Complex64::new(0.0, 2.0 * sin);
        for c in 0..4 {
            let f0 = a.components[c][p];
            let f1 = b.components[c][p];
            let q = (f1 - f0 * back) / denom;
            let pp = f0 - q;
            positive += pp.norm_sqr();
            negative += q.norm_sqr();
        }
    }
    let dk = lattice.momentum_measure();
    Ok(FrequencySplit {
        positive: positive * dk,
        negative: negative * dk,
    })
}
