//! Exact 4x4 algebra for the Pauli, Dirac (Pauli-Dirac representation) and the
//! partly antilinear "quantum-mechanical" gamma-bar matrices.
//!
//! Every entry built here is a Gaussian integer or half of one, so all products and
//! sums are exact in `f64` and equality is plain entry-wise comparison.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Spinor = [Complex64; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Minkowski metric diagonal, signature (+, -, -, -).
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

pub fn metric(mu: usize, nu: usize) -> f64 {
    if mu == nu {
        METRIC[mu]
    } else {
        0.0
    }
}

/// Pauli matrices sigma^1, sigma^2, sigma^3.
pub fn pauli() -> [[[Complex64; 2]; 2]; 3] {
    [
        [[ZERO, ONE], [ONE, ZERO]],
        [[ZERO, -I], [I, ZERO]],
        [[ONE, ZERO], [ZERO, -ONE]],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4(pub [[Complex64; 4]; 4]);

impl Mat4 {
    pub fn zero() -> Self {
        Mat4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Mat4::diag([ONE; 4])
    }

    pub fn diag(d: [Complex64; 4]) -> Self {
        let mut m = Mat4::zero();
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = v;
        }
        m
    }

    pub fn real_diag(d: [f64; 4]) -> Self {
        Mat4::diag(d.map(|x| Complex64::new(x, 0.0)))
    }

    /// Assembles `[[a, b], [c, d]]` from 2x2 blocks.
    pub fn from_blocks(blocks: [[[[Complex64; 2]; 2]; 2]; 2]) -> Self {
        let mut m = Mat4::zero();
        for (bi, row) in blocks.iter().enumerate() {
            for (bj, block) in row.iter().enumerate() {
                for i in 0..2 {
                    for j in 0..2 {
                        m.0[2 * bi + i][2 * bj + j] = block[i][j];
                    }
                }
            }
        }
        m
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Mat4(self.0.map(|row| row.map(|v| v * c)))
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Mat4(self.0.map(|row| row.map(|v| v * c)))
    }

    pub fn conj(&self) -> Self {
        Mat4(self.0.map(|row| row.map(|v| v.conj())))
    }

    pub fn transpose(&self) -> Self {
        let mut m = Mat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    pub fn dagger(&self) -> Self {
        self.conj().transpose()
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn apply(&self, s: &Spinor) -> Spinor {
        let mut out = [ZERO; 4];
        for (i, row) in self.0.iter().enumerate() {
            out[i] = row.iter().zip(s).map(|(a, b)| a * b).sum();
        }
        out
    }

    pub fn commutator(&self, other: &Mat4) -> Mat4 {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Mat4) -> Mat4 {
        *self * *other + *other * *self
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat4) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.dagger()
    }

    /// Entry-wise `max |(M^dagger M - I)_{ij}|`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.dagger() * *self).max_abs_diff(&Mat4::identity())
    }
}

impl Mul for Mat4 {
    type Output = Mat4;
    fn mul(self, rhs: Mat4) -> Mat4 {
        let mut m = Mat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        m
    }
}

impl Add for Mat4 {
    type Output = Mat4;
    fn add(self, rhs: Mat4) -> Mat4 {
        let mut m = self;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] += rhs.0[i][j];
            }
        }
        m
    }
}

impl Sub for Mat4 {
    type Output = Mat4;
    fn sub(self, rhs: Mat4) -> Mat4 {
        self + (-rhs)
    }
}

impl Neg for Mat4 {
    type Output = Mat4;
    fn neg(self) -> Mat4 {
        Mat4(self.0.map(|row| row.map(|v| -v)))
    }
}

/// A real-linear map on C^4 of the form `s -> M . K(s)`, where `K` complex-conjugates
/// exactly the components flagged in `conj_mask`.
///
/// An empty mask is an ordinary linear matrix, a full mask is `M C`, and the mask
/// `(false, false, true, true)` with the identity matrix is the operator `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugatingMatrixOp {
    pub matrix: Mat4,
    pub conj_mask: [bool; 4],
}

impl ConjugatingMatrixOp {
    pub fn linear(matrix: Mat4) -> Self {
        ConjugatingMatrixOp {
            matrix,
            conj_mask: [false; 4],
        }
    }

    /// `matrix . C` with complex conjugation on every component.
    pub fn antilinear(matrix: Mat4) -> Self {
        ConjugatingMatrixOp {
            matrix,
            conj_mask: [true; 4],
        }
    }

    pub fn identity() -> Self {
        Self::linear(Mat4::identity())
    }

    /// `v = diag(I_2, C I_2)`.
    pub fn v() -> Self {
        ConjugatingMatrixOp {
            matrix: Mat4::identity(),
            conj_mask: [false, false, true, true],
        }
    }

    pub fn is_linear(&self) -> bool {
        self.conj_mask.iter().all(|&c| !c)
    }

    pub fn apply(&self, s: &Spinor) -> Spinor {
        let mut k = *s;
        for (v, &c) in k.iter_mut().zip(&self.conj_mask) {
            if c {
                *v = v.conj();
            }
        }
        self.matrix.apply(&k)
    }

    /// `self . other` (apply `other` first).
    ///
    /// Fails when the result cannot be written as one matrix times one conjugation mask,
    /// which happens when some input component reaches the output both conjugated and
    /// unconjugated.
    pub fn compose(&self, other: &ConjugatingMatrixOp) -> Result<ConjugatingMatrixOp> {
        let mut mask: [Option<bool>; 4] = [None; 4];
        let mut inner = other.matrix;
        for i in 0..4 {
            for j in 0..4 {
                if other.matrix.0[i][j] == ZERO {
                    continue;
                }
                let conj = self.conj_mask[i] ^ other.conj_mask[j];
                match mask[j] {
                    None => mask[j] = Some(conj),
                    Some(prev) if prev != conj => return Err(Error::NonRepresentable),
                    Some(_) => {}
                }
                if self.conj_mask[i] {
                    inner.0[i][j] = inner.0[i][j].conj();
                }
            }
        }
        let conj_mask = [0, 1, 2, 3].map(|j| mask[j].unwrap_or(other.conj_mask[j]));
        Ok(ConjugatingMatrixOp {
            matrix: self.matrix * inner,
            conj_mask,
        })
    }

    /// Left multiplication by a complex scalar: `s -> c . self(s)`.
    pub fn scaled(&self, c: Complex64) -> Self {
        ConjugatingMatrixOp {
            matrix: self.matrix.scale(c),
            conj_mask: self.conj_mask,
        }
    }

    /// Images of the eight real basis spinors `d_a`, `i d_a`. Two real-linear operators
    /// on C^4 are equal iff these agree.
    pub fn action_table(&self) -> [Spinor; 8] {
        real_basis().map(|s| self.apply(&s))
    }

    pub fn acts_like(&self, other: &ConjugatingMatrixOp) -> bool {
        self.action_table() == other.action_table()
    }
}

/// `d_1 .. d_4, i d_1 .. i d_4`.
pub fn real_basis() -> [Spinor; 8] {
    let mut out = [[ZERO; 4]; 8];
    for a in 0..4 {
        out[a][a] = ONE;
        out[a + 4][a] = I;
    }
    out
}

/// Orts `d_1 .. d_4` of C^4.
pub fn ort(a: usize) -> Spinor {
    let mut s = [ZERO; 4];
    s[a] = ONE;
    s
}

/// Spin matrices `s^1, s^2, s^3` (equivalently `s_23, s_31, s_12`), in units of hbar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinTriple {
    pub s: [Mat4; 3],
}

impl SpinTriple {
    /// `s_{ln}` for spatial indices `l, n` in `1..=3`, antisymmetric, with
    /// `s_23 = s^1`, `s_31 = s^2`, `s_12 = s^3`.
    pub fn component(&self, l: usize, n: usize) -> Mat4 {
        match (l, n) {
            (2, 3) => self.s[0],
            (3, 1) => self.s[1],
            (1, 2) => self.s[2],
            (3, 2) => -self.s[0],
            (1, 3) => -self.s[1],
            (2, 1) => -self.s[2],
            _ => Mat4::zero(),
        }
    }

    pub fn squared(&self) -> Mat4 {
        self.s.iter().fold(Mat4::zero(), |acc, m| acc + *m * *m)
    }
}

/// `gamma^0 .. gamma^3` of the Pauli-Dirac representation and `gamma^4 = gamma^0 gamma^1 gamma^2 gamma^3`.
pub fn build_gamma_pd() -> [Mat4; 5] {
    let z = [[ZERO; 2]; 2];
    let id2 = [[ONE, ZERO], [ZERO, ONE]];
    let neg2 = |m: [[Complex64; 2]; 2]| m.map(|r| r.map(|v| -v));
    let sigma = pauli();
    let g0 = Mat4::from_blocks([[id2, z], [z, neg2(id2)]]);
    let gk = sigma.map(|s| Mat4::from_blocks([[z, s], [neg2(s), z]]));
    let g4 = g0 * gk[0] * gk[1] * gk[2];
    [g0, gk[0], gk[1], gk[2], g4]
}

/// `gamma-bar^0 .. gamma-bar^4`: `gamma^0`, `gamma^1 C`, `gamma^0 gamma^2 C`,
/// `gamma^3 C`, `gamma^0 gamma^4 C`.
pub fn build_gamma_bar() -> [ConjugatingMatrixOp; 5] {
    let g = build_gamma_pd();
    [
        ConjugatingMatrixOp::linear(g[0]),
        ConjugatingMatrixOp::antilinear(g[1]),
        ConjugatingMatrixOp::antilinear(g[0] * g[2]),
        ConjugatingMatrixOp::antilinear(g[3]),
        ConjugatingMatrixOp::antilinear(g[0] * g[4]),
    ]
}

/// Spin `s = 1/2 diag(sigma, -sigma^*)` and charge sign `g = -gamma^0`.
///
/// The lower spin block `-C sigma C` acts on the positron components as the linear
/// matrix `-(sigma)^*`.
pub fn build_spin_and_charge() -> (SpinTriple, Mat4) {
    let z = [[ZERO; 2]; 2];
    let half = Complex64::new(0.5, 0.0);
    let s = pauli().map(|sig| {
        let lower = sig.map(|r| r.map(|v| -v.conj()));
        Mat4::from_blocks([[sig, z], [z, lower]]).scale(half)
    });
    let g = -build_gamma_pd()[0];
    (SpinTriple { s }, g)
}

/// `s = (i/2)(gamma-bar^2 gamma-bar^3, gamma-bar^3 gamma-bar^1, gamma-bar^1 gamma-bar^2)`.
pub fn spin_from_gamma_bar() -> Result<SpinTriple> {
    let gb = build_gamma_bar();
    let half_i = Complex64::new(0.0, 0.5);
    let mut s = [Mat4::zero(); 3];
    for (slot, (a, b)) in s.iter_mut().zip([(2, 3), (3, 1), (1, 2)]) {
        let product = gb[a].compose(&gb[b])?.scaled(half_i);
        if !product.is_linear() {
            return Err(Error::NonRepresentable);
        }
        *slot = product.matrix;
    }
    Ok(SpinTriple { s })
}

/// Dirac `alpha^j = gamma^0 gamma^j`.
pub fn alpha() -> [Mat4; 3] {
    let g = build_gamma_pd();
    [g[0] * g[1], g[0] * g[2], g[0] * g[3]]
}

/// Canonical Dirac Hamiltonian `alpha . k + beta m` at physical momentum `k`.
pub fn dirac_hamiltonian(k: [f64; 3], mass: f64) -> Mat4 {
    let a = alpha();
    let beta = build_gamma_pd()[0];
    let mut h = beta.scale_real(mass);
    for j in 0..3 {
        h = h + a[j].scale_real(k[j]);
    }
    h
}
