use num_complex::Complex64;
use proptest::prelude::*;

use rcqm::evolve::evolve;
use rcqm::lattice::{apply_omega, LatticeSpec};
use rcqm::packets::{random_field, rng_from_seed, PacketOptions};
use rcqm::transforms::{apply_v, apply_w, Direction};
use rcqm::Picture;

fn field(seed: u64, mass: f64) -> rcqm::SpinorField {
    let l = LatticeSpec::new(1, 128, 0.25, mass).build().unwrap();
    random_field(&l, &mut rng_from_seed(seed), &PacketOptions::for_lattice(&l), Picture::SchrodingerFoldy)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn omega_is_hermitian_and_bounded_below(a in any::<u64>(), b in any::<u64>(), mass in 0.2f64..3.0) {
        let f = field(a, mass);
        let g = field(b, mass).with_picture(Picture::SchrodingerFoldy);
        let lhs = g.inner(&apply_omega(&f));
        let rhs = apply_omega(&g).inner(&f);
        prop_assert!((lhs - rhs).norm() < 1e-12);
        let e = f.inner(&apply_omega(&f));
        prop_assert!(e.im.abs() < 1e-12);
        prop_assert!(e.re >= mass * f.norm_sq() - 1e-12);
    }

    #[test]
    fn v_is_an_isometric_involution(seed in any::<u64>(), c in -3.0f64..3.0) {
        let f = field(seed, 1.0).scaled(Complex64::new(c, 1.0));
        let vf = apply_v(&f).unwrap();
        prop_assert_eq!(vf.norm_sq(), f.norm_sq());
        let back = apply_v(&vf).unwrap();
        prop_assert_eq!(back.components(), f.components());
    }

    #[test]
    fn w_round_trip_and_isometry(seed in any::<u64>(), mass in 0.3f64..3.0) {
        let f = field(seed, mass);
        let w = apply_w(&f, Direction::Forward);
        prop_assert!((w.norm() - f.norm()).abs() < 1e-12);
        prop_assert!(apply_w(&w, Direction::Inverse).relative_distance(&f) < 1e-12);
    }

    #[test]
    fn evolution_is_unitary_and_composes(seed in any::<u64>(), t1 in -2.0f64..2.0, t2 in -2.0f64..2.0) {
        for picture in Picture::ALL {
            let f = field(seed, 1.0).with_picture(picture);
            let two_steps = evolve(&evolve(&f, t1), t2);
            let one_step = evolve(&f, t1 + t2);
            prop_assert!(two_steps.relative_distance(&one_step) < 1e-12);
            prop_assert!((one_step.norm() - f.norm()).abs() < 1e-12);
        }
    }
}
