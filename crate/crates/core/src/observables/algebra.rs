//! Two-sided numerical checks of the Poincaré commutation relations and of the
//! invariance of the generators under free evolution.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Generator, GeneratorSet};
use crate::clifford::metric;
use crate::error::{Error, Result};
use crate::evolve::Picture;
use crate::lattice::Lattice;
use crate::packets::{random_field, rng_from_seed, PacketOptions};
use crate::states::{Realization, SpinorField};

/// Residual bound for relations evaluated with spectral derivatives.
pub const POINCARE_TOLERANCE: f64 = 1e-6;
/// Bound on `|<g, G f> - <G g, f>|` relative to `||f|| ||g||`.
pub const HERMITICITY_TOLERANCE: f64 = 1e-8;
/// Bound for identities that hold term by term in the same quadrature.
pub const EXACT_TOLERANCE: f64 = 1e-12;

/// `p_mu` or `j_{mu nu}` with covariant indices in `0..=3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PoincareElement {
    P(usize),
    J(usize, usize),
}

impl PoincareElement {
    /// The ten independent generators: `p_0..p_3`, then `j_{mu nu}` with `mu < nu`.
    pub fn basis() -> Vec<PoincareElement> {
        let mut out: Vec<_> = (0..4).map(PoincareElement::P).collect();
        for mu in 0..4 {
            for nu in mu + 1..4 {
                out.push(PoincareElement::J(mu, nu));
            }
        }
        out
    }

    pub fn name(self) -> String {
        match self {
            PoincareElement::P(mu) => format!("p{mu}"),
            PoincareElement::J(mu, nu) => format!("j{mu}{nu}"),
        }
    }

    fn max_index(self) -> usize {
        match self {
            PoincareElement::P(mu) => mu,
            PoincareElement::J(mu, nu) => mu.max(nu),
        }
    }

    /// Signed generator this element stands for; `None` for `j_{mu mu} = 0`.
    fn as_generator(self) -> Option<(f64, Generator)> {
        match self {
            PoincareElement::P(0) => Some((1.0, Generator::Energy)),
            PoincareElement::P(l) => Some((1.0, Generator::Momentum(l))),
            PoincareElement::J(mu, nu) if mu == nu => None,
            PoincareElement::J(0, l) => Some((1.0, Generator::Boost(l))),
            PoincareElement::J(l, 0) => Some((-1.0, Generator::Boost(l))),
            PoincareElement::J(l, n) => Some((1.0, Generator::Rotation(l, n))),
        }
    }
}

/// Expected commutator `[a, b]` as a combination of basis elements.
fn expected_commutator(a: PoincareElement, b: PoincareElement) -> Vec<(Complex64, PoincareElement)> {
    use PoincareElement::{J, P};
    let i = Complex64::new(0.0, 1.0);
    let g = |x: usize, y: usize| metric(x, y);
    let mut out = Vec::new();
    let mut push = |c: Complex64, e: PoincareElement| {
        if c != Complex64::new(0.0, 0.0) {
            out.push((c, e));
        }
    };
    match (a, b) {
        (P(_), P(_)) => {}
        (P(mu), J(rho, sigma)) => {
            push(i * g(mu, rho), P(sigma));
            push(-i * g(mu, sigma), P(rho));
        }
        (J(rho, sigma), P(mu)) => {
            push(-i * g(mu, rho), P(sigma));
            push(i * g(mu, sigma), P(rho));
        }
        (J(mu, nu), J(rho, sigma)) => {
            push(-i * g(mu, rho), J(nu, sigma));
            push(-i * g(rho, nu), J(sigma, mu));
            push(-i * g(nu, sigma), J(mu, rho));
            push(-i * g(sigma, mu), J(rho, nu));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorCheck {
    pub name: String,
    /// Worst residual over all trials.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CommutatorCheck {
    fn new(name: String, residual: f64, tolerance: f64) -> Self {
        CommutatorCheck {
            name,
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorReport {
    pub n_trials: usize,
    pub checks: Vec<CommutatorCheck>,
}

impl CommutatorReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

fn trial_fields(lattice: &Arc<Lattice>, n_trials: usize, seed: u64) -> Result<Vec<SpinorField>> {
    if n_trials == 0 {
        return Err(Error::TooFew {
            what: "trials",
            needed: 1,
            got: 0,
        });
    }
    let opts = PacketOptions::for_lattice(lattice);
    let mut rng = rng_from_seed(seed);
    Ok((0..n_trials)
        .map(|_| random_field(lattice, &mut rng, &opts, Picture::SchrodingerFoldy))
        .collect())
}

fn apply_element(gens: &GeneratorSet, e: PoincareElement, f: &SpinorField, t: f64) -> SpinorField {
    match e.as_generator() {
        Some((sign, g)) => gens.apply(g, f, t).scaled_real(sign),
        None => f.scaled_real(0.0),
    }
}

/// Every relation `[A, B] = C` between basis generators whose indices all refer to
/// axes present on the lattice, checked on `n_trials` random packets at time `t`.
///
/// The residual of one relation on one packet is
/// `||(AB - BA - C) f|| / max(||AB f||, ||BA f||, ||f||)`.
pub fn check_poincare_algebra(lattice: &Arc<Lattice>, n_trials: usize, seed: u64, t: f64) -> Result<CommutatorReport> {
    let fields = trial_fields(lattice, n_trials, seed)?;
    let gens = GeneratorSet::new(lattice, Realization::Position);
    let basis: Vec<_> = PoincareElement::basis()
        .into_iter()
        .filter(|e| e.max_index() <= lattice.dim())
        .collect();
    let mut pairs = Vec::new();
    for (ia, a) in basis.iter().enumerate() {
        for b in &basis[ia + 1..] {
            pairs.push((*a, *b));
        }
    }
    let mut worst = vec![0.0f64; pairs.len()];
    for f in &fields {
        let f = f.clone().with_time(t);
        let singles: Vec<SpinorField> = basis.iter().map(|e| apply_element(&gens, *e, &f, t)).collect();
        let single = |e: PoincareElement| -> SpinorField {
            // J(nu, mu) with nu > mu appears on right-hand sides; use antisymmetry.
            if let Some(pos) = basis.iter().position(|b| *b == e) {
                return singles[pos].clone();
            }
            if let PoincareElement::J(mu, nu) = e {
                if let Some(pos) = basis.iter().position(|b| *b == PoincareElement::J(nu, mu)) {
                    return singles[pos].scaled_real(-1.0);
                }
            }
            apply_element(&gens, e, &f, t)
        };
        for (slot, (a, b)) in worst.iter_mut().zip(&pairs) {
            let ab = apply_element(&gens, *a, &single(*b), t);
            let ba = apply_element(&gens, *b, &single(*a), t);
            let mut diff = &ab - &ba;
            for (c, e) in expected_commutator(*a, *b) {
                diff = &diff - &single(e).scaled(c);
            }
            let scale = ab.norm().max(ba.norm()).max(f.norm());
            *slot = slot.max(diff.norm() / scale);
        }
    }
    let checks = pairs
        .iter()
        .zip(worst)
        .map(|((a, b), r)| CommutatorCheck::new(format!("[{}, {}]", a.name(), b.name()), r, POINCARE_TOLERANCE))
        .collect();
    Ok(CommutatorReport { n_trials, checks })
}

/// Every audited generator, with display names.
pub(crate) fn audited_generators() -> Vec<(&'static str, Generator)> {
    super::CONSERVED_QUANTITIES.to_vec()
}

/// Invariance of each audited generator under free evolution:
/// `[G, omega] f + i (dG/dt) f = 0`, with `dG/dt = p_l` for the boosts and `0` otherwise.
///
/// Time-independent generators are scored against `||f||`; boosts, whose two sides are
/// both large, against `max(||G omega f||, ||omega G f||, ||f||)`.
pub fn check_symmetry_commutators(
    lattice: &Arc<Lattice>,
    n_trials: usize,
    seed: u64,
    t: f64,
) -> Result<CommutatorReport> {
    let fields = trial_fields(lattice, n_trials, seed)?;
    let gens = GeneratorSet::new(lattice, Realization::Position);
    let list = audited_generators();
    let mut worst = vec![0.0f64; list.len()];
    for f in &fields {
        let f = f.clone().with_time(t);
        let wf = gens.apply(Generator::Energy, &f, t);
        for (slot, (_, g)) in worst.iter_mut().zip(&list) {
            let gw = gens.apply(*g, &wf, t);
            let wg = gens.apply(Generator::Energy, &gens.apply(*g, &f, t), t);
            let mut diff = &gw - &wg;
            let scale = match g.explicit_time_derivative() {
                Some(dg) => {
                    diff = &diff + &gens.apply(dg, &f, t).scaled(Complex64::new(0.0, 1.0));
                    gw.norm().max(wg.norm()).max(f.norm())
                }
                None => f.norm(),
            };
            *slot = slot.max(diff.norm() / scale);
        }
    }
    let checks = list
        .iter()
        .zip(worst)
        .map(|((name, _), r)| CommutatorCheck::new(format!("[{name}, omega]"), r, POINCARE_TOLERANCE))
        .collect();
    Ok(CommutatorReport { n_trials, checks })
}

/// Structural properties of the generator set on random packets: Hermiticity of every
/// audited generator, the split `j_ln = m_ln + s_ln`, and `[s_ln, m_rs] = 0`.
pub fn check_generator_identities(
    lattice: &Arc<Lattice>,
    n_trials: usize,
    seed: u64,
    t: f64,
) -> Result<CommutatorReport> {
    let fields = trial_fields(lattice, n_trials.max(2), seed)?;
    let gens = GeneratorSet::new(lattice, Realization::Position);
    let mut checks = Vec::new();

    for (name, g) in audited_generators() {
        let mut worst = 0.0f64;
        for pair in fields.windows(2) {
            let (f, h) = (&pair[0], &pair[1]);
            let lhs = h.inner(&gens.apply(g, f, t));
            let rhs = gens.apply(g, h, t).inner(f);
            worst = worst.max((lhs - rhs).norm() / (f.norm() * h.norm()));
        }
        checks.push(CommutatorCheck::new(format!("hermitian {name}"), worst, HERMITICITY_TOLERANCE));
    }

    let planes = [(2, 3), (3, 1), (1, 2)];
    for (l, n) in planes {
        let mut worst = 0.0f64;
        for f in &fields {
            let j = gens.apply(Generator::Rotation(l, n), f, t);
            let m = gens.apply(Generator::OrbitalRotation(l, n), f, t);
            let s = gens.apply(Generator::Spin(l, n), f, t);
            worst = worst.max((&j - &(&m + &s)).norm() / f.norm());
        }
        checks.push(CommutatorCheck::new(format!("j{l}{n} = m{l}{n} + s{l}{n}"), worst, EXACT_TOLERANCE));
    }

    let orbital: Vec<(String, Generator)> = planes
        .iter()
        .map(|&(l, n)| (format!("m{l}{n}"), Generator::OrbitalRotation(l, n)))
        .chain((1..=3).map(|l| (format!("m0{l}"), Generator::OrbitalBoost(l))))
        .collect();
    for (l, n) in planes {
        for (mname, m) in &orbital {
            let mut worst = 0.0f64;
            for f in &fields {
                let sm = gens.apply(Generator::Spin(l, n), &gens.apply(*m, f, t), t);
                let ms = gens.apply(*m, &gens.apply(Generator::Spin(l, n), f, t), t);
                let scale = sm.norm().max(ms.norm()).max(f.norm());
                worst = worst.max((&sm - &ms).norm() / scale);
            }
            checks.push(CommutatorCheck::new(format!("[s{l}{n}, {mname}]"), worst, EXACT_TOLERANCE));
        }
    }
    Ok(CommutatorReport {
        n_trials: fields.len(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeSpec;

    #[test]
    fn basis_has_ten_elements_and_45_pairs() {
        let b = PoincareElement::basis();
        assert_eq!(b.len(), 10);
        assert_eq!(b.len() * (b.len() - 1) / 2, 45);
    }

    #[test]
    fn expected_commutators_match_worked_instances() {
        use PoincareElement::{J, P};
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(expected_commutator(P(1), J(1, 2)), vec![(-i, P(2))]);
        assert!(expected_commutator(P(1), P(2)).is_empty());
        // [j01, j02] = -i j12
        assert_eq!(expected_commutator(J(0, 1), J(0, 2)), vec![(-i, J(1, 2))]);
    }

    #[test]
    fn one_dimensional_lattice_checks_three_relations() {
        let l = LatticeSpec::new(1, 128, 0.5, 1.0).build().unwrap();
        let r = check_poincare_algebra(&l, 1, 2, 0.0).unwrap();
        assert_eq!(r.checks.len(), 3);
        assert!(r.pass(), "{:?}", r.checks);
    }

    #[test]
    fn two_dimensional_algebra_holds() {
        let l = LatticeSpec::new(2, 48, 0.5, 3.0).build().unwrap();
        let r = check_poincare_algebra(&l, 1, 4, 0.7).unwrap();
        assert_eq!(r.checks.len(), 15);
        assert!(r.pass(), "{:?}", r.checks);
    }

    #[test]
    fn symmetry_commutators_vanish() {
        let l = LatticeSpec::new(2, 48, 0.5, 3.0).build().unwrap();
        let r = check_symmetry_commutators(&l, 1, 9, 0.4).unwrap();
        assert_eq!(r.checks.len(), 22);
        assert!(r.pass(), "{:?}", r.checks);
    }

    #[test]
    fn generator_identities_hold() {
        let l = LatticeSpec::new(2, 32, 0.5, 1.0).build().unwrap();
        let r = check_generator_identities(&l, 2, 1, 0.3).unwrap();
        assert!(r.pass(), "{:?}", r.checks);
    }

    #[test]
    fn zero_trials_rejected() {
        let l = LatticeSpec::new(1, 32, 0.5, 1.0).build().unwrap();
        assert!(matches!(check_poincare_algebra(&l, 0, 1, 0.0), Err(Error::TooFew { .. })));
    }
}
