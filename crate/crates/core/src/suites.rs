//! Verification suites shared by the command line runner and the test harness. Each
//! suite returns a flat list of named checks with a residual and a pinned tolerance.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{
    build_gamma_bar, build_gamma_pd, build_spin_and_charge, dirac_hamiltonian, metric, real_basis,
    spin_from_gamma_bar, ConjugatingMatrixOp, Mat4, Spinor,
};
use crate::error::Result;
use crate::evolve::Picture;
use crate::lattice::Lattice;
use crate::observables::{
    amplitude_means, audit_conservation, check_generator_identities, check_poincare_algebra,
    check_symmetry_commutators, mean, AuditOptions, CommutatorReport, ConservationReport, GeneratorSet, NormCheck,
    AUDIT_TOLERANCE, CONSERVED_QUANTITIES, MAIN_QUANTITIES,
};
use crate::packets::{random_jet, rng_from_seed, PacketOptions};
use crate::snapshot::Snapshot;
use crate::states::{analyze_sf, frequency_split, synthesize_fw, synthesize_sf, AmplitudeSet, Realization};
use crate::transforms::{
    apply_v, apply_w_with, build_fw_kernel, conjugate_sandwich, prime_operator, verify_intertwining, Direction,
    PicturePair, INTERTWINING_TOLERANCE,
};

/// Tolerance for single-FFT quadratures and per-mode matrix identities.
pub const QUADRATURE_TOLERANCE: f64 = 1e-12;
/// Tolerance on frequency-branch norms.
pub const FREQUENCY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Poincare,
    Conservation,
    Transforms,
    Frequency,
    Roundtrip,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Algebra,
        Suite::Poincare,
        Suite::Conservation,
        Suite::Transforms,
        Suite::Frequency,
        Suite::Roundtrip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Poincare => "poincare",
            Suite::Conservation => "conservation",
            Suite::Transforms => "transforms",
            Suite::Frequency => "frequency",
            Suite::Roundtrip => "roundtrip",
        }
    }

    /// Identities the suite certifies.
    pub fn summary(self) -> &'static str {
        match self {
            Suite::Algebra => {
                "Clifford-Dirac anticommutators in the Pauli-Dirac and gamma-bar representations, \
                 gamma-bar inverses, SU(2) spin algebra, spin as (i/2) gamma-bar products, v^2 = 1"
            }
            Suite::Poincare => {
                "Poincare commutation relations [p,p], [p,j], [j,j] on random packets; \
                 invariance of all 22 generators under i d_t - omega; Hermiticity and j = m + s"
            }
            Suite::Conservation => {
                "10 main (P_mu, J_mu_nu) and 12 additional (M_mu_nu, S_ln, Sb_l) means constant in time; \
                 position-space means equal amplitude-space means"
            }
            Suite::Transforms => {
                "v intertwines the Schrodinger-Foldy and Foldy-Wouthuysen equations; \
                 W = V+ v and W^-1 = v V- intertwine the Schrodinger-Foldy and Dirac equations; \
                 V+ (gamma^0 omega) V- = alpha.k + beta m per mode"
            }
            Suite::Frequency => {
                "Schrodinger-Foldy solutions carry only positive frequencies; \
                 Foldy-Wouthuysen positron content sits in the negative-frequency branch"
            }
            Suite::Roundtrip => "snapshot JSON, Fourier, amplitude, v and W round trips",
        }
    }
}

/// One line per suite.
pub fn describe() -> String {
    Suite::ALL
        .iter()
        .map(|s| format!("{:<13}{}\n", s.name(), s.summary()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tolerance,
            // NaN residuals fail.
            pass: residual <= tolerance,
        }
    }

    pub fn exact(name: impl Into<String>, residual: f64) -> Self {
        Check::new(name, residual, 0.0)
    }
}

fn from_commutators(report: CommutatorReport) -> Vec<Check> {
    report
        .checks
        .into_iter()
        .map(|c| Check::new(c.name, c.residual, c.tolerance))
        .collect()
}

fn spinor_diff(a: &Spinor, b: &Spinor) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Largest entry of `table(a) - table(b)` over the real basis.
fn table_diff(a: &[Spinor; 8], b: &[Spinor; 8]) -> f64 {
    a.iter().zip(b).map(|(x, y)| spinor_diff(x, y)).fold(0.0, f64::max)
}

fn compose_table(a: &ConjugatingMatrixOp, b: &ConjugatingMatrixOp) -> Option<[Spinor; 8]> {
    a.compose(b).ok().map(|c| c.action_table())
}

/// Exact matrix identities; every residual must be zero.
pub fn algebra_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let g = build_gamma_pd();
    for mu in 0..4 {
        for nu in mu..4 {
            let lhs = g[mu].anticommutator(&g[nu]);
            let rhs = Mat4::identity().scale_real(2.0 * metric(mu, nu));
            out.push(Check::exact(format!("{{gamma{mu}, gamma{nu}}} = 2 g{mu}{nu}"), lhs.max_abs_diff(&rhs)));
        }
    }

    let gb = build_gamma_bar();
    let basis = real_basis();
    for mu in 0..4 {
        for nu in mu..4 {
            let residual = match (compose_table(&gb[mu], &gb[nu]), compose_table(&gb[nu], &gb[mu])) {
                (Some(ab), Some(ba)) => {
                    let expected = basis.map(|s| s.map(|v| v * 2.0 * metric(mu, nu)));
                    let sum: [Spinor; 8] = std::array::from_fn(|i| std::array::from_fn(|c| ab[i][c] + ba[i][c]));
                    table_diff(&sum, &expected)
                }
                _ => f64::INFINITY,
            };
            out.push(Check::exact(format!("{{gammabar{mu}, gammabar{nu}}} = 2 g{mu}{nu}"), residual));
        }
    }
    // gammabar_0^-1 = gammabar_0 and gammabar_l^-1 = -gammabar_l, as compositions.
    for (mu, op) in gb.iter().enumerate().take(4) {
        let sign = if mu == 0 { 1.0 } else { -1.0 };
        let residual = match op.scaled(Complex64::new(sign, 0.0)).compose(op) {
            Ok(p) => table_diff(&p.action_table(), &basis),
            Err(_) => f64::INFINITY,
        };
        let label = if mu == 0 { "gammabar0^-1 = gammabar0".to_string() } else { format!("gammabar{mu}^-1 = -gammabar{mu}") };
        out.push(Check::exact(label, residual));
    }
    let v = ConjugatingMatrixOp::v();
    let vv = v.compose(&v).map(|p| table_diff(&p.action_table(), &basis)).unwrap_or(f64::INFINITY);
    out.push(Check::exact("v^2 = 1", vv));

    let (spin, charge) = build_spin_and_charge();
    let i = Complex64::new(0.0, 1.0);
    for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let lhs = spin.s[a].commutator(&spin.s[b]);
        out.push(Check::exact(
            format!("[s{}, s{}] = i s{}", a + 1, b + 1, c + 1),
            lhs.max_abs_diff(&spin.s[c].scale(i)),
        ));
    }
    for a in 0..3 {
        out.push(Check::exact(
            format!("[s{}, g] = 0", a + 1),
            spin.s[a].commutator(&charge).max_abs_diff(&Mat4::zero()),
        ));
    }
    out.push(Check::exact(
        "s^2 = 3/4",
        spin.squared().max_abs_diff(&Mat4::identity().scale_real(0.75)),
    ));
    out.push(Check::exact(
        "s3 eigenvalues (+1/2, -1/2, -1/2, +1/2)",
        spin.s[2].max_abs_diff(&Mat4::real_diag([0.5, -0.5, -0.5, 0.5])),
    ));
    out.push(Check::exact(
        "g eigenvalues (-1, -1, +1, +1)",
        charge.max_abs_diff(&Mat4::real_diag([-1.0, -1.0, 1.0, 1.0])),
    ));
    match spin_from_gamma_bar() {
        Ok(from_bar) => {
            for a in 0..3 {
                out.push(Check::exact(
                    format!("s{} = (i/2) gammabar products", a + 1),
                    from_bar.s[a].max_abs_diff(&spin.s[a]),
                ));
            }
        }
        Err(_) => out.push(Check::exact("s = (i/2) gammabar products", f64::INFINITY)),
    }
    out
}

/// Poincaré relations, symmetry commutators and generator identities at time `t`.
pub fn poincare_checks(lattice: &Arc<Lattice>, n_trials: usize, seed: u64, t: f64) -> Result<Vec<Check>> {
    let mut out = from_commutators(check_poincare_algebra(lattice, n_trials, seed, t)?);
    out.extend(from_commutators(check_symmetry_commutators(lattice, n_trials, seed, t)?));
    out.extend(from_commutators(check_generator_identities(lattice, n_trials, seed, t)?));
    Ok(out)
}

/// Conservation audit plus the position-space versus amplitude-space comparison.
pub fn conservation_checks(amps: &AmplitudeSet, times: &[f64]) -> Result<(Vec<Check>, ConservationReport)> {
    let report = audit_conservation(amps, times, AuditOptions::default())?;
    let mut out: Vec<Check> = report
        .quantities
        .iter()
        .enumerate()
        .map(|(q, name)| {
            let scale = report.values[0][q].norm().max(1.0);
            Check::new(format!("{name} drift"), report.drifts[q] / scale, report.tolerance)
        })
        .collect();
    out.push(Check::new("imaginary parts of means", report.max_imag, AUDIT_TOLERANCE));

    let amps = amps.normalized();
    let from_amps = amplitude_means(&amps);
    let field = synthesize_sf(&amps, 0.0);
    let gens = GeneratorSet::new(amps.lattice(), Realization::Position);
    for (q, (name, g)) in CONSERVED_QUANTITIES[..MAIN_QUANTITIES].iter().enumerate() {
        let x_mean = mean(&field, &gens, *g, 0.0, NormCheck::Skip)?;
        let residual = (x_mean - from_amps[q]).norm() / x_mean.norm().max(1.0);
        out.push(Check::new(format!("{name} position vs amplitude"), residual, AUDIT_TOLERANCE));
    }
    Ok((out, report))
}

/// Intertwining of every picture pair over `time`, per-mode kernel identities, the
/// solution map `v` on the given amplitudes, and the prime-form sandwich.
pub fn transforms_checks(
    amps: &AmplitudeSet,
    times: &[f64],
    n_trials: usize,
    seed: u64,
    time: f64,
) -> Result<Vec<Check>> {
    let lattice = amps.lattice();
    let mut out = Vec::new();
    for pair in PicturePair::ALL {
        let r = verify_intertwining(lattice, pair, n_trials, seed, time)?;
        out.push(Check::new(format!("intertwining {}", pair.name()), r.max_residual(), r.tolerance));
    }

    let kernel = build_fw_kernel(lattice);
    let g0 = build_gamma_pd()[0];
    let mut unit = 0.0f64;
    let mut fw_identity = 0.0f64;
    for p in 0..lattice.len() {
        let plus = kernel.plus_matrices[p];
        let minus = kernel.minus_matrices[p];
        unit = unit.max((plus * minus).max_abs_diff(&Mat4::identity()));
        let h = dirac_hamiltonian(lattice.momentum(p), lattice.mass());
        let lhs = plus * g0.scale_real(lattice.omega(p)) * minus;
        fw_identity = fw_identity.max(lhs.max_abs_diff(&h) / lattice.omega(p));
    }
    out.push(Check::new("V+ V- = 1 on every mode", unit, QUADRATURE_TOLERANCE));
    out.push(Check::new("V+ (gamma0 omega) V- = alpha.k + beta m on every mode", fw_identity, QUADRATURE_TOLERANCE));

    let mut v_map = 0.0f64;
    for &t in times {
        let sf = synthesize_sf(amps, t);
        let fw = synthesize_fw(amps, t);
        v_map = v_map.max(apply_v(&sf)?.relative_distance(&fw));
    }
    out.push(Check::new("v maps SF solutions to FW solutions", v_map, QUADRATURE_TOLERANCE));

    let opts = PacketOptions::for_lattice(lattice);
    let mut rng = rng_from_seed(seed);
    let sandwich = conjugate_sandwich(prime_operator(Picture::SchrodingerFoldy));
    let fw_prime = prime_operator(Picture::FoldyWouthuysen);
    let mut prime = 0.0f64;
    for _ in 0..n_trials {
        let jet = random_jet(lattice, &mut rng, &opts, Picture::FoldyWouthuysen);
        let lhs = sandwich(&jet)?;
        let rhs = fw_prime(&jet).to_position();
        prime = prime.max((&lhs - &rhs).norm() / jet.value.norm().max(jet.rate.norm()));
    }
    out.push(Check::new("v (d_t + i omega) v = d_t + i gamma0 omega", prime, INTERTWINING_TOLERANCE));
    Ok(out)
}

/// Step used to separate the two frequency branches: `omega dt <= pi / 2` on every mode.
pub fn split_step(lattice: &Lattice) -> f64 {
    let w_max = lattice.omega_values().iter().cloned().fold(0.0, f64::max);
    FRAC_PI_2 / w_max
}

/// Frequency content of SF and FW solutions built from the same amplitudes at `t0`.
pub fn frequency_checks(amps: &AmplitudeSet, t0: f64) -> Result<Vec<Check>> {
    let amps = amps.normalized();
    let dt = split_step(amps.lattice());
    let (_, positron) = amps.species_norms();

    let sf = frequency_split(&synthesize_sf(&amps, t0), &synthesize_sf(&amps, t0 + dt))?;
    let fw = frequency_split(
        &synthesize_fw(&amps, t0).with_picture(Picture::FoldyWouthuysen),
        &synthesize_fw(&amps, t0 + dt).with_picture(Picture::FoldyWouthuysen),
    )?;
    Ok(vec![
        Check::new("SF negative-frequency content", sf.negative, FREQUENCY_TOLERANCE),
        Check::new("SF positive-frequency content = norm", (sf.positive - 1.0).abs(), FREQUENCY_TOLERANCE),
        Check::new(
            "FW negative-frequency content = positron norm",
            (fw.negative - positron).abs(),
            FREQUENCY_TOLERANCE,
        ),
        Check::new(
            "FW positive-frequency content = electron norm",
            (fw.positive - (1.0 - positron)).abs(),
            FREQUENCY_TOLERANCE,
        ),
    ])
}

/// Serialization, Fourier, amplitude, `v` and `W` round trips at time `t`.
pub fn roundtrip_checks(amps: &AmplitudeSet, t: f64) -> Result<Vec<Check>> {
    let lattice = amps.lattice();
    let field = synthesize_sf(amps, t);
    let mut out = Vec::new();

    let back = Snapshot::from_json(&Snapshot::from_field(&field).to_json()?)?.to_field(Some(lattice))?;
    let bits_differ = field
        .components()
        .iter()
        .zip(back.components())
        .flat_map(|(a, b)| a.iter().zip(b))
        .any(|(x, y)| x.re.to_bits() != y.re.to_bits() || x.im.to_bits() != y.im.to_bits())
        || back.time().to_bits() != field.time().to_bits();
    out.push(Check::exact("field snapshot JSON bit-exact", if bits_differ { 1.0 } else { 0.0 }));

    let amps_back = Snapshot::from_json(&Snapshot::from_amplitudes(amps).to_json()?)?.to_amplitudes(Some(lattice))?;
    let amps_exact = amps_back.amplitudes() == amps.amplitudes();
    out.push(Check::exact("amplitude snapshot JSON bit-exact", if amps_exact { 0.0 } else { 1.0 }));

    out.push(Check::new(
        "position -> momentum -> position",
        field.to_momentum().to_position().relative_distance(&field),
        QUADRATURE_TOLERANCE,
    ));

    let analyzed = analyze_sf(&field, t);
    let diff = analyzed.combine(Complex64::new(1.0, 0.0), amps, Complex64::new(-1.0, 0.0))?;
    out.push(Check::new(
        "analyze(synthesize(A)) = A",
        (diff.norm_sq() / amps.norm_sq()).sqrt(),
        QUADRATURE_TOLERANCE,
    ));

    let vv = apply_v(&apply_v(&field)?)?;
    out.push(Check::exact("v v f = f", vv.relative_distance(&field)));

    let kernel = build_fw_kernel(lattice);
    let w = apply_w_with(&kernel, &field, Direction::Forward);
    let ww = apply_w_with(&kernel, &w, Direction::Inverse);
    out.push(Check::new("W^-1 W f = f", ww.relative_distance(&field), QUADRATURE_TOLERANCE));
    out.push(Check::new(
        "||W f|| = ||f||",
        (w.norm() - field.norm()).abs() / field.norm(),
        QUADRATURE_TOLERANCE,
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeSpec;
    use crate::packets::random_amplitudes;

    #[test]
    fn algebra_is_exact() {
        let checks = algebra_checks();
        assert!(checks.len() > 30);
        for c in &checks {
            assert!(c.pass, "{c:?}");
            assert_eq!(c.residual, 0.0);
        }
    }

    #[test]
    fn describe_has_one_line_per_suite() {
        let text = describe();
        assert_eq!(text.lines().count(), Suite::ALL.len());
        assert_eq!(text, describe());
    }

    #[test]
    fn frequency_and_roundtrip_pass_on_random_packet() {
        let l = LatticeSpec::new(1, 128, 0.25, 1.0).build().unwrap();
        let amps = random_amplitudes(&l, &mut rng_from_seed(2), &PacketOptions::for_lattice(&l));
        for c in frequency_checks(&amps, 0.3).unwrap() {
            assert!(c.pass, "{c:?}");
        }
        for c in roundtrip_checks(&amps, 0.3).unwrap() {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn nan_residual_fails() {
        assert!(!Check::new("x", f64::NAN, 1.0).pass);
    }
}
