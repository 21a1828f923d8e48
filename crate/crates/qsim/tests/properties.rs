//! Randomized invariants of the simulation substrate: channel outputs stay
//! physical, unitaries preserve norm, trace distance contracts under CPTP
//! maps, and trajectory sampling reproduces the exact channel.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use vbqc_qsim::{
    depolarize1, depolarize2, sample_pauli1, trace_distance, Angle, DensityMatrix, NoiseParams,
    PureState, TOL_INVARIANT,
};

fn random_density(n: usize, rng: &mut ChaCha12Rng) -> DensityMatrix {
    // Purification of n qubits with one ancilla, traced out: generic mixed state.
    let psi = PureState::random(n + 1, rng).unwrap();
    let keep: Vec<bool> = (0..=n).map(|q| q < n).collect();
    DensityMatrix::partial_trace_of_pure(&psi, &keep).unwrap()
}

#[test]
fn channels_output_valid_density_operators() {
    let mut rng = ChaCha12Rng::seed_from_u64(101);
    for trial in 0..200 {
        let rho = random_density(2, &mut rng);
        let p = (trial % 11) as f64 / 10.0;
        let noise = NoiseParams::new(p).unwrap();
        depolarize1(&rho, trial % 2, noise).unwrap().validate().unwrap();
        depolarize2(&rho, 0, 1, noise).unwrap().validate().unwrap();
    }
}

#[test]
fn cptp_maps_do_not_increase_trace_distance() {
    let mut rng = ChaCha12Rng::seed_from_u64(202);
    let noise = NoiseParams::new(0.2).unwrap();
    for _ in 0..300 {
        let a = random_density(2, &mut rng);
        let b = random_density(2, &mut rng);
        let d = trace_distance(&a, &b).unwrap();

        let d1 = trace_distance(
            &depolarize1(&a, 0, noise).unwrap(),
            &depolarize1(&b, 0, noise).unwrap(),
        )
        .unwrap();
        assert!(d1 <= d + 1e-9, "depolarize1 expanded distance: {d1} > {d}");

        let d2 = trace_distance(
            &depolarize2(&a, 0, 1, noise).unwrap(),
            &depolarize2(&b, 0, 1, noise).unwrap(),
        )
        .unwrap();
        assert!(d2 <= d + 1e-9, "depolarize2 expanded distance: {d2} > {d}");

        let keep = [true, false];
        let dt = trace_distance(
            &a.partial_trace_keep(&keep).unwrap(),
            &b.partial_trace_keep(&keep).unwrap(),
        )
        .unwrap();
        assert!(dt <= d + 1e-9, "partial trace expanded distance: {dt} > {d}");
    }
}

#[test]
fn trajectory_average_matches_density_channel() {
    // Average 10^5 sampled Pauli trajectories of the p = 0.3 channel applied
    // to |+_{pi/4}⟩ and compare the Z and X expectations against the exact
    // density-mode output, at 3 sigma of the binomial error.
    let mut rng = ChaCha12Rng::seed_from_u64(303);
    let noise = NoiseParams::new(0.3).unwrap();
    let base = vbqc_qsim::plus_theta(Angle::from_multiple(1));
    let exact = depolarize1(&DensityMatrix::from_pure(&base).unwrap(), 0, noise).unwrap();

    let trials = 100_000usize;
    let mut sum_z = 0.0;
    let mut sum_x = 0.0;
    for _ in 0..trials {
        let mut psi = base.clone();
        let p = sample_pauli1(noise, &mut rng);
        psi.apply_pauli(0, p).unwrap();
        let mut zcopy = psi.clone();
        sum_z += f64::from(zcopy.measure_bloch(0, vbqc_qsim::BlochVector::Z, &mut rng).unwrap());
        let mut xcopy = psi;
        sum_x += f64::from(xcopy.measure_bloch(0, vbqc_qsim::BlochVector::X, &mut rng).unwrap());
    }
    let m = exact.matrix();
    let exact_z = (m[(0, 0)] - m[(1, 1)]).re;
    let exact_x = (m[(0, 1)] + m[(1, 0)]).re;
    let sigma = 1.0 / (trials as f64).sqrt();
    assert!((sum_z / trials as f64 - exact_z).abs() < 3.0 * sigma);
    assert!((sum_x / trials as f64 - exact_x).abs() < 3.0 * sigma);
}

#[test]
fn random_partial_traces_stay_physical() {
    let mut rng = ChaCha12Rng::seed_from_u64(404);
    for _ in 0..100 {
        let psi = PureState::random(3, &mut rng).unwrap();
        let rho = DensityMatrix::partial_trace_of_pure(&psi, &[true, true, false]).unwrap();
        rho.validate().unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitary_layers_preserve_norm(seed in 0u64..u64::MAX, a in 0usize..4, b in 0usize..4) {
        prop_assume!(a != b);
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut psi = PureState::random(4, &mut rng).unwrap();
        psi.apply_cz(a, b).unwrap();
        psi.reflect_xy();
        prop_assert!((psi.norm_sqr() - 1.0).abs() < TOL_INVARIANT);
    }

    #[test]
    fn xy_measurement_probabilities_are_complementary(seed in 0u64..u64::MAX, k in 0i64..8) {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let psi = PureState::random(3, &mut rng).unwrap();
        let delta = Angle::from_multiple(k);
        let p0 = psi.prob_xy_zero(1, delta).unwrap();
        let p1 = psi.prob_xy_zero(1, delta + Angle::PI).unwrap();
        prop_assert!((p0 + p1 - 1.0).abs() < 1e-9);
    }
}
