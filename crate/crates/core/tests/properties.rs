use edss_core::channels::{ChannelKind, KrausChannel};
use edss_core::correlations::{discord, negativity, Bipartition};
use edss_core::linalg::{self, c, hermiticity_error, max_abs_diff, CMatrix};
use edss_core::protocols::{random_two_qubit_state, seeded_rng, zalm_map, PHOTON_A, PHOTON_B};
use edss_core::{BlochProjector, DensityMatrix, Layout, UnitaryGate};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

/// `G G^dagger / tr` for a complex Gaussian `G`: full-rank and generic.
fn random_state(seed: u64, labels: &[&str]) -> DensityMatrix {
    let mut rng = seeded_rng(seed);
    let d = 1 << labels.len();
    let g = CMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    });
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m * c(1.0 / tr, 0.0), Layout::qubits(labels)).unwrap()
}

/// `Rz(a) Ry(b) Rz(g)`.
fn local_unitary(a: f64, b: f64, g: f64) -> CMatrix {
    let rz = |t: f64| {
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            num_complex::Complex64::from_polar(1.0, -t / 2.0),
            num_complex::Complex64::from_polar(1.0, t / 2.0),
        ]))
    };
    let (s, co) = (b / 2.0).sin_cos();
    let ry = linalg::real_matrix(2, &[co, -s, s, co]);
    rz(a) * ry * rz(g)
}

fn kind() -> impl Strategy<Value = ChannelKind> {
    prop_oneof![
        Just(ChannelKind::Depolarizing),
        Just(ChannelKind::Dephasing),
        Just(ChannelKind::AmplitudeDamping),
        Just(ChannelKind::Identity),
    ]
}

fn label() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("A"), Just("B"), Just("K")]
}

fn angles() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.0..std::f64::consts::TAU, 0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn channels_are_complete(kind in kind(), p in 0.0f64..=1.0) {
        let ch = KrausChannel::new(kind, p).unwrap();
        prop_assert!(ch.completeness_error() < 1e-12);
    }

    #[test]
    fn channels_keep_states_valid(seed: u64, kind in kind(), p in 0.0f64..=1.0, target in label()) {
        let rho = random_state(seed, &["A", "B", "K"]);
        let out = rho.apply_channel(&KrausChannel::new(kind, p).unwrap(), target).unwrap();
        prop_assert!((out.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(hermiticity_error(out.data()) < 1e-12);
        prop_assert!(out.eigenvalues()[0] > -1e-10);
    }

    #[test]
    fn channel_commutes_with_tensoring(seed: u64, kind in kind(), p in 0.0f64..=1.0) {
        let rho = random_state(seed, &["A", "B"]);
        let sigma = random_state(seed ^ 0x9e37, &["K"]);
        let ch = KrausChannel::new(kind, p).unwrap();
        let lhs = rho.tensor(&sigma).unwrap().apply_channel(&ch, "B").unwrap();
        let rhs = rho.apply_channel(&ch, "B").unwrap().tensor(&sigma).unwrap();
        prop_assert!(max_abs_diff(lhs.data(), rhs.data()) < 1e-12);
    }

    #[test]
    fn unitaries_preserve_spectrum(seed: u64, (a, b, g) in angles(), target in label()) {
        let rho = random_state(seed, &["A", "B", "K"]);
        let u = UnitaryGate::new(local_unitary(a, b, g), &[target]).unwrap();
        let out = rho
            .apply_unitary(&u).unwrap()
            .apply_unitary(&UnitaryGate::cnot("A", "K")).unwrap()
            .apply_unitary(&UnitaryGate::cphase("B", "K")).unwrap();
        let before = rho.eigenvalues();
        let after = out.eigenvalues();
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn complementary_outcomes_are_exhaustive(seed: u64, theta in 0.0..=std::f64::consts::PI, phi in 0.0..std::f64::consts::TAU) {
        let rho = random_state(seed, &["A", "B", "K"]);
        let proj = BlochProjector::new(theta, phi).unwrap();
        let (s0, p0) = rho.postselect(&proj, "K").unwrap();
        let (_, p1) = rho.postselect(&proj.complement(), "K").unwrap();
        prop_assert!((p0 + p1 - 1.0).abs() < 1e-12);
        prop_assert!((s0.trace().re - 1.0).abs() < 1e-12);
        prop_assert_eq!(s0.labels(), vec!["A", "B"]);
    }

    #[test]
    fn partial_trace_undoes_tensor(seed: u64) {
        let rho = random_state(seed, &["A", "B"]);
        let sigma = random_state(seed.wrapping_add(1), &["K"]);
        let back = rho.tensor(&sigma).unwrap().partial_trace(&["A", "B"]).unwrap();
        prop_assert!(max_abs_diff(back.data(), rho.data()) < 1e-12);
    }

    #[test]
    fn negativity_ignores_local_unitaries(seed: u64, ua in angles(), ub in angles()) {
        let rho = random_state(seed, &["A", "B"]);
        let cut = Bipartition::new(&["A"], &["B"]).unwrap();
        let rotated = rho
            .apply_unitary(&UnitaryGate::new(local_unitary(ua.0, ua.1, ua.2), &["A"]).unwrap()).unwrap()
            .apply_unitary(&UnitaryGate::new(local_unitary(ub.0, ub.1, ub.2), &["B"]).unwrap()).unwrap();
        let n0 = negativity(&rho, &cut).unwrap();
        prop_assert!(n0 >= 0.0);
        prop_assert!((n0 - negativity(&rotated, &cut).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn zalm_transfer_is_exact(seed: u64) {
        let rho = random_two_qubit_state(&mut seeded_rng(seed));
        prop_assert_eq!(rho.labels(), vec![PHOTON_A, PHOTON_B]);
        for r in zalm_map(&rho).unwrap() {
            prop_assert!((r.probability - 0.25).abs() < 1e-12);
            prop_assert!(r.transfer_error < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn discord_is_nonnegative_and_locally_invariant(seed: u64, ua in angles(), ub in angles()) {
        let rho = random_two_qubit_state(&mut seeded_rng(seed)).relabel(&["A", "B"]).unwrap();
        let d0 = discord(&rho, "B").unwrap().value;
        prop_assert!(d0 >= 0.0);
        let rotated = rho
            .apply_unitary(&UnitaryGate::new(local_unitary(ua.0, ua.1, ua.2), &["A"]).unwrap()).unwrap()
            .apply_unitary(&UnitaryGate::new(local_unitary(ub.0, ub.1, ub.2), &["B"]).unwrap()).unwrap();
        let d1 = discord(&rotated, "B").unwrap().value;
        prop_assert!((d0 - d1).abs() < 1e-6, "{} vs {}", d0, d1);
    }
}
