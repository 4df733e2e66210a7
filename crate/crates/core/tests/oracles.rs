//! Independent oracles: dense linear algebra and direct Fourier sums checked against the
//! spectral implementation.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use rand::Rng;

use rcqm::clifford::{build_gamma_pd, Mat4};
use rcqm::evolve::mode_propagator;
use rcqm::lattice::LatticeSpec;
use rcqm::packets::{random_amplitudes, rng_from_seed, PacketOptions};
use rcqm::states::{synthesize_sf, Realization};
use rcqm::transforms::fw_mode_matrix;
use rcqm::Picture;

fn to_na(m: &Mat4) -> Matrix4<Complex64> {
    Matrix4::from_fn(|i, j| m.0[i][j])
}

fn dirac_matrix_from_scratch(k: [f64; 3], m: f64) -> Matrix4<Complex64> {
    // alpha^j = [[0, sigma_j], [sigma_j, 0]], beta = diag(1, 1, -1, -1)
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let z = c(0.0, 0.0);
    let (kx, ky, kz) = (k[0], k[1], k[2]);
    Matrix4::new(
        c(m, 0.0), z, c(kz, 0.0), c(kx, -ky),
        z, c(m, 0.0), c(kx, ky), c(-kz, 0.0),
        c(kz, 0.0), c(kx, -ky), c(-m, 0.0), z,
        c(kx, ky), c(-kz, 0.0), z, c(-m, 0.0),
    )
}

#[test]
fn dirac_propagator_matches_matrix_exponential() {
    let mut rng = rng_from_seed(101);
    for _ in 0..100 {
        let k = [rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0)];
        let m = rng.gen_range(0.2..3.0);
        let dt = rng.gen_range(-2.0..2.0);
        let h = dirac_matrix_from_scratch(k, m);
        let expected = (h * Complex64::new(0.0, -dt)).exp();
        let got = to_na(&mode_propagator(Picture::Dirac, k, m, dt));
        assert!((got - expected).camax() < 1e-12, "k={k:?} m={m} dt={dt}");
    }
}

#[test]
fn fw_kernel_diagonalizes_dirac_hamiltonian() {
    // V- H V+ must be gamma^0 omega; checked with nalgebra products of independent matrices.
    let mut rng = rng_from_seed(102);
    let g0 = to_na(&build_gamma_pd()[0]);
    for _ in 0..100 {
        let k = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
        let m = rng.gen_range(0.3..2.0);
        let w = (k.iter().map(|v| v * v).sum::<f64>() + m * m).sqrt();
        let plus = to_na(&fw_mode_matrix(k, m, 1.0));
        let minus = to_na(&fw_mode_matrix(k, m, -1.0));
        let d = minus * dirac_matrix_from_scratch(k, m) * plus;
        assert!((d - g0 * Complex64::new(w, 0.0)).camax() / w < 1e-13);
        assert!((plus * plus.adjoint() - Matrix4::identity()).camax() < 1e-13);
    }
}

#[test]
fn synthesis_matches_direct_fourier_sum() {
    let l = LatticeSpec::new(1, 64, 0.3, 0.8).build().unwrap();
    let amps = random_amplitudes(&l, &mut rng_from_seed(103), &PacketOptions::for_lattice(&l));
    let t = 0.77;
    let f = synthesize_sf(&amps, t);
    let dk = l.dk();
    let mut worst: f64 = 0.0;
    for j in 0..l.len() {
        let x = l.position(j)[0];
        for c in 0..4 {
            let mut s = Complex64::new(0.0, 0.0);
            for p in 0..l.len() {
                let k = l.momentum(p)[0];
                s += amps.amplitudes()[c][p] * Complex64::from_polar(1.0, k * x - l.omega(p) * t);
            }
            s *= dk / (2.0 * PI).sqrt();
            worst = worst.max((s - f.components()[c][j]).norm());
        }
    }
    assert!(worst < 1e-13, "{worst}");
    assert_eq!(f.realization(), Realization::Position);
}

#[test]
fn two_dimensional_omega_matches_dense_kronecker_oracle() {
    // -Delta on an n x n grid is L (x) I + I (x) L with the dense 1D spectral Laplacian L.
    let (n, dx, m) = (8usize, 0.5, 1.1);
    let len = n as f64 * dx;
    let lap1 = DMatrix::from_fn(n, n, |j, l| {
        (0..n as i64)
            .map(|q| {
                let mode = if q < n as i64 / 2 { q } else { q - n as i64 };
                let k = 2.0 * PI * mode as f64 / len;
                k * k * (k * (j as f64 - l as f64) * dx).cos()
            })
            .sum::<f64>()
            / n as f64
    });
    let id = DMatrix::<f64>::identity(n, n);
    let mut a = lap1.kronecker(&id) + id.kronecker(&lap1);
    for i in 0..n * n {
        a[(i, i)] += m * m;
    }
    let eig = a.symmetric_eigen();
    let omega = &eig.eigenvectors * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * eig.eigenvectors.transpose();

    let lattice = LatticeSpec::new(2, n, dx, m).build().unwrap();
    let mut rng = rng_from_seed(104);
    let data: Vec<Complex64> = (0..n * n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let spectral = {
        let mut k = lattice.forward(&data).unwrap();
        for (p, v) in k.iter_mut().enumerate() {
            *v *= lattice.omega(p);
        }
        lattice.inverse(&k).unwrap()
    };
    // Row-major with the last axis fastest matches the Kronecker ordering (axis 0 outer).
    let re = DMatrix::from_fn(n * n, 1, |i, _| data[i].re);
    let im = DMatrix::from_fn(n * n, 1, |i, _| data[i].im);
    let (ore, oim) = (&omega * re, &omega * im);
    for i in 0..n * n {
        assert!((spectral[i] - Complex64::new(ore[i], oim[i])).norm() < 1e-12);
    }
}
