//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line. Tolerances and thresholds are pinned here, in code.

use std::time::Instant;
use vbqc_chsh::{
    chsh_referee, classical_best_win_rate, ideal_win_rate, play_chsh, ChshGame, PairStrategy,
    RefereeVerdict,
};
use vbqc_cli::{run_experiment, ExperimentConfig};
use vbqc_fk::{
    estimate_completeness, estimate_p_incorrect, exact_p_incorrect_z_on, soundness_bound,
    CompletenessConfig, DeviationMode, DeviationOp, DeviationStage, PIncorrectConfig,
    ProverStrategy,
};
use vbqc_mc::RngStream;
use vbqc_qsim::{
    correlation_norm, depolarize1, depolarize2, gentle_measurement_gap, trace_distance,
    DensityMatrix, NoiseParams, Pauli, PureState,
};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_01_completeness_is_exactly_one() {
    vbqc_mc::tune_allocator();
    let started = Instant::now();
    let mut freqs = Vec::new();
    for n in [1usize, 2] {
        let out = estimate_completeness(&CompletenessConfig {
            n,
            eps: 0.0,
            mode: DeviationMode::LocalRotation,
            trials: 1000,
            seed: 101,
        })
        .unwrap();
        freqs.push((n, out.wilson.frequency));
    }
    let elapsed = started.elapsed();
    let pass = freqs.iter().all(|&(_, f)| f == 1.0) && elapsed.as_secs() < 120;
    report(
        "01 (honest completeness, exact)",
        pass,
        &format!("accept frequencies {freqs:?} over 1000 seeds each, {elapsed:.2?} (< 2 min)"),
    );
}

#[test]
fn criterion_02_robustness_floor() {
    vbqc_mc::tune_allocator();
    let started = Instant::now();
    let mut rows = Vec::new();
    let mut pass = true;
    for mode in [DeviationMode::LocalRotation, DeviationMode::EnvCorrelated] {
        for eps in [0.01, 0.05, 0.1] {
            let out = estimate_completeness(&CompletenessConfig {
                n: 1,
                eps,
                mode,
                trials: 10_000,
                seed: 202,
            })
            .unwrap();
            let floor = 1.0 - 2.0 * eps;
            pass &= out.wilson.lo >= floor;
            rows.push(format!(
                "{mode:?} eps={eps}: CI low {:.4} >= {:.2}",
                out.wilson.lo, floor
            ));
        }
    }
    let elapsed = started.elapsed();
    pass &= elapsed.as_secs() < 600;
    report(
        "02 (robustness vs 1 - 2eps)",
        pass,
        &format!("{}; {elapsed:.2?} (< 10 min)", rows.join("; ")),
    );
}

#[test]
fn criterion_03_reflection_detected_deterministically() {
    vbqc_mc::tune_allocator();
    // every trap on the 21-qubit instance has five dummy neighbours (odd)
    let trials = 1000u64;
    let rejects: u64 = (0..trials)
        .map(|trial| {
            let stream = RngStream::new(303, trial);
            let inst = vbqc_fk::FkInstance::dotted(
                2,
                &vbqc_graph::TargetComputation::wire(2),
                None,
                303,
                &mut stream.secrets(),
            )
            .unwrap();
            let t = vbqc_fk::run_fk(
                &inst,
                &ProverStrategy::ReflectAll,
                &mut stream.born(),
                &mut stream.adversary(),
                None,
            )
            .unwrap();
            u64::from(t.verdict == vbqc_fk::Verdict::Reject)
        })
        .sum();
    let freq = rejects as f64 / trials as f64;
    report(
        "03 (reflection detection, exact)",
        freq == 1.0,
        &format!("reject frequency {freq} over {trials} odd-parity seeds"),
    );
}

fn deviation_battery() -> Vec<(String, ProverStrategy)> {
    use DeviationOp::*;
    let mut battery: Vec<(String, Vec<DeviationOp>, DeviationStage)> = Vec::new();
    for q in 0..4usize {
        battery.push((
            format!("rz(0.7) on {q}"),
            vec![RotateZ { slot: q, angle: 0.7 }],
            DeviationStage::AfterEntangle,
        ));
        battery.push((
            format!("rx(1.2) on {q}"),
            vec![RotateX { slot: q, angle: 1.2 }],
            DeviationStage::AfterEntangle,
        ));
    }
    battery.push(("ry(2.0) on 1".into(), vec![RotateY { slot: 1, angle: 2.0 }], DeviationStage::AfterEntangle));
    battery.push(("ry(2.8) on 3".into(), vec![RotateY { slot: 3, angle: 2.8 }], DeviationStage::AfterEntangle));
    for (q, p) in [(0usize, Pauli::X), (2, Pauli::Y), (3, Pauli::Z)] {
        battery.push((
            format!("pauli {p:?} on {q}"),
            vec![PauliOp { slot: q, pauli: p }],
            DeviationStage::AfterEntangle,
        ));
    }
    battery.push(("hadamard on 0".into(), vec![Hadamard { slot: 0 }], DeviationStage::AfterEntangle));
    battery.push(("hadamard on 3".into(), vec![Hadamard { slot: 3 }], DeviationStage::AfterEntangle));
    battery.push(("extra cz (0,2)".into(), vec![ExtraCz { a: 0, b: 2 }], DeviationStage::AfterEntangle));
    battery.push(("extra cz (1,3)".into(), vec![ExtraCz { a: 1, b: 3 }], DeviationStage::AfterEntangle));
    battery.push((
        "z on every qubit".into(),
        (0..4).map(|q| PauliOp { slot: q, pauli: Pauli::Z }).collect(),
        DeviationStage::AfterEntangle,
    ));
    battery.push((
        "rz(pi/2) on 0 + rx(pi/2) on 3".into(),
        vec![
            RotateZ { slot: 0, angle: std::f64::consts::FRAC_PI_2 },
            RotateX { slot: 3, angle: std::f64::consts::FRAC_PI_2 },
        ],
        DeviationStage::AfterEntangle,
    ));
    battery.push((
        "hadamard on all".into(),
        (0..4).map(|q| Hadamard { slot: q }).collect(),
        DeviationStage::AfterEntangle,
    ));
    battery.push((
        "rz(1.0) on 2 before entangling".into(),
        vec![RotateZ { slot: 2, angle: 1.0 }],
        DeviationStage::BeforeEntangle,
    ));
    battery.push((
        "pauli X on 1 before entangling".into(),
        vec![PauliOp { slot: 1, pauli: Pauli::X }],
        DeviationStage::BeforeEntangle,
    ));
    battery
        .into_iter()
        .map(|(name, ops, stage)| (name, ProverStrategy::UnitaryDeviation { stage, ops }))
        .collect()
}

#[test]
fn criterion_04_single_trap_soundness() {
    vbqc_mc::tune_allocator();
    let battery = deviation_battery();
    assert!(battery.len() >= 20, "battery has {} members", battery.len());
    let bound = 1.0 - 1.0 / (2.0 * 4.0);
    let trials = 10_000u64;
    let mut worst = (String::new(), 0.0f64);
    let mut pass = true;
    for (i, (name, strategy)) in battery.iter().enumerate() {
        let out = estimate_p_incorrect(
            &PIncorrectConfig {
                n: 4,
                trials,
                seed: 404 + i as u64,
            },
            strategy,
        )
        .unwrap();
        let f = out.wilson.frequency;
        let sigma = (f * (1.0 - f) / trials as f64).sqrt();
        if f + 3.0 * sigma >= bound {
            pass = false;
        }
        if f > worst.1 {
            worst = (name.clone(), f);
        }
    }

    // cross-check the estimator against the exhaustive enumeration oracle
    let mut oracle_ok = true;
    for (k, seed) in [(0usize, 440u64), (1, 441), (2, 442), (3, 443)] {
        let exact = exact_p_incorrect_z_on(4, k);
        oracle_ok &= exact < bound;
        let out = estimate_p_incorrect(
            &PIncorrectConfig { n: 4, trials, seed },
            &ProverStrategy::UnitaryDeviation {
                stage: DeviationStage::AfterEntangle,
                ops: vec![DeviationOp::PauliOp {
                    slot: k,
                    pauli: Pauli::Z,
                }],
            },
        )
        .unwrap();
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt().max(1e-4);
        oracle_ok &= (out.wilson.frequency - exact).abs() <= 3.0 * sigma;
    }

    report(
        "04 (single-trap soundness < 7/8)",
        pass && oracle_ok,
        &format!(
            "{} deviations x {trials} trials, worst {:?} at {:.4} (bound {bound}); oracle crosscheck {}",
            battery.len(),
            worst.0,
            worst.1,
            if oracle_ok { "ok" } else { "failed" }
        ),
    );
}

#[test]
fn criterion_05_chsh_rates_and_referee() {
    vbqc_mc::tune_allocator();
    let ideal = ideal_win_rate();
    let rounds = 100_000u64;
    let mut pass = true;
    let mut details = Vec::new();
    for game in ChshGame::all() {
        let mut rng = RngStream::new(505, game.id as u64).aux();
        let (wins, _) = play_chsh(&mut PairStrategy::Honest, &game, rounds, &mut rng, false);
        let rate = wins as f64 / rounds as f64;
        let sigma = (ideal * (1.0 - ideal) / rounds as f64).sqrt();
        pass &= (rate - ideal).abs() <= 3.0 * sigma;
        pass &= classical_best_win_rate(&game) == 0.75;
        details.push(format!("g{} {:.4}", game.id, rate));
    }

    // referee at 10^4 games per session
    let sessions = 400u64;
    let m = 10_000u64;
    let game = ChshGame::all()[0];
    let honest_accepts: u64 = (0..sessions)
        .map(|s| {
            let mut rng = RngStream::new(506, s).aux();
            let (wins, _) = play_chsh(&mut PairStrategy::Honest, &game, m, &mut rng, false);
            u64::from(chsh_referee(wins, 1, m, false) == RefereeVerdict::Accept)
        })
        .sum();
    let classical_rejects: u64 = (0..sessions)
        .map(|s| {
            let mut rng = RngStream::new(507, s).aux();
            let mut pair = PairStrategy::Classical {
                a_table: [0, 0],
                b_table: [0, 0],
            };
            let (wins, _) = play_chsh(&mut pair, &game, m, &mut rng, false);
            u64::from(chsh_referee(wins, 1, m, false) == RefereeVerdict::Reject)
        })
        .sum();
    let ha = honest_accepts as f64 / sessions as f64;
    let cr = classical_rejects as f64 / sessions as f64;
    pass &= ha >= 0.99 && cr >= 0.99;
    report(
        "05 (CHSH rates, classical ceiling, referee)",
        pass,
        &format!(
            "rates [{}] vs {ideal:.4}; classical 0.75 exact; referee honest {ha:.3}, classical reject {cr:.3}",
            details.join(", ")
        ),
    );
}

#[test]
fn criterion_06_tomography_acceptance_and_closeness() {
    vbqc_mc::tune_allocator();
    let cfg = ExperimentConfig::Tomography {
        blocks_per_target: 10_000,
        sessions: 100,
        sweep_blocks: vec![1_000, 10_000, 100_000],
        seed: 606,
    };
    let rep = run_experiment(&cfg).unwrap();
    let detail: Vec<String> = rep
        .bound_checks
        .iter()
        .map(|c| format!("{} -> {:.4}", c.anchor, c.observed))
        .collect();
    report(
        "06 (tomography acceptance and closeness sweep)",
        rep.passed(),
        &detail.join("; "),
    );
}

#[test]
fn criterion_07_noise_and_repetition() {
    vbqc_mc::tune_allocator();
    let cfg = ExperimentConfig::Ft {
        n: 10,
        c: 3.0,
        big_r: 2.0,
        p: 0.005,
        trials: 100_000,
        seed: 707,
    };
    let rep = run_experiment(&cfg).unwrap();
    let encodings = rep.results["encodings"].as_u64().unwrap();
    let pass = rep.passed() && encodings == 41;
    let detail: Vec<String> = rep
        .bound_checks
        .iter()
        .map(|c| format!("{} -> {:.4}", c.anchor, c.observed))
        .collect();
    report(
        "07 (noise bounds and repetition protocol)",
        pass,
        &format!("N = {encodings}; {}", detail.join("; ")),
    );
}

#[test]
fn criterion_08_inequality_suites() {
    vbqc_mc::tune_allocator();
    let mut rng = RngStream::new(808, 0).aux();
    use rand::Rng;

    // gentle-measurement bound: 10^4 random two-qubit states (pure and
    // mixed), random pure reference on the first qubit
    let mut gentle_viol = 0u64;
    for t in 0..10_000 {
        let rho = if t % 2 == 0 {
            DensityMatrix::from_pure(&PureState::random(2, &mut rng).unwrap()).unwrap()
        } else {
            let psi = PureState::random(3, &mut rng).unwrap();
            DensityMatrix::partial_trace_of_pure(&psi, &[true, true, false]).unwrap()
        };
        let pi = PureState::random(1, &mut rng).unwrap();
        let gap = gentle_measurement_gap(&rho, 1, &pi).unwrap();
        if !gap.holds() {
            gentle_viol += 1;
        }
    }

    // correlation-norm bound under both premises over near-product states
    let mut corr_viol = 0u64;
    for t in 0..10_000 {
        let target = PureState::random(1, &mut rng).unwrap();
        let lam: f64 = rng.random::<f64>() * 0.25;
        let rho = if t % 2 == 0 {
            // coherent near-product purification
            let phi = PureState::random(1, &mut rng).unwrap();
            let e0 = PureState::random(1, &mut rng).unwrap();
            let e1 = PureState::random(1, &mut rng).unwrap();
            let a = target.tensor(&e0).unwrap();
            let b = phi.tensor(&e1).unwrap();
            let amps: Vec<vbqc_qsim::C64> = a
                .amplitudes()
                .iter()
                .zip(b.amplitudes())
                .map(|(x, y)| x * (1.0 - lam).sqrt() + y * lam.sqrt())
                .collect();
            let norm: f64 = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let s =
                PureState::from_amplitudes(amps.iter().map(|c| c / norm).collect()).unwrap();
            DensityMatrix::from_pure(&s).unwrap()
        } else {
            // classical mixture biased toward target ⊗ random
            let s0 = target.tensor(&PureState::random(1, &mut rng).unwrap()).unwrap();
            let s1 = PureState::random(2, &mut rng).unwrap();
            let m = DensityMatrix::from_pure(&s0).unwrap().matrix().scale(1.0 - lam)
                + DensityMatrix::from_pure(&s1).unwrap().matrix().scale(lam);
            DensityMatrix::from_matrix(m).unwrap()
        };
        let c = correlation_norm(&rho, 1, Some(&target)).unwrap();
        let ed = c.eps_distance.unwrap();
        let ef = c.eps_fidelity.unwrap();
        if c.norm > 2.0 * ed.sqrt() + 2.0 * ed + 1e-9 {
            corr_viol += 1;
        }
        if c.norm > 2.0 * ef.sqrt() + 2.0 * ef + 1e-9 {
            corr_viol += 1;
        }
    }

    // CPTP contractivity of the trace distance: 10^4 random pairs
    let noise = NoiseParams::new(0.25).unwrap();
    let mut cptp_viol = 0u64;
    for _ in 0..10_000 {
        let mk = |rng: &mut rand_chacha::ChaCha12Rng| {
            let psi = PureState::random(3, rng).unwrap();
            DensityMatrix::partial_trace_of_pure(&psi, &[true, true, false]).unwrap()
        };
        let a = mk(&mut rng);
        let b = mk(&mut rng);
        let d = trace_distance(&a, &b).unwrap();
        let d1 = trace_distance(
            &depolarize1(&a, 0, noise).unwrap(),
            &depolarize1(&b, 0, noise).unwrap(),
        )
        .unwrap();
        let d2 = trace_distance(
            &depolarize2(&a, 0, 1, noise).unwrap(),
            &depolarize2(&b, 0, 1, noise).unwrap(),
        )
        .unwrap();
        let keep = [true, false];
        let dt = trace_distance(
            &a.partial_trace_keep(&keep).unwrap(),
            &b.partial_trace_keep(&keep).unwrap(),
        )
        .unwrap();
        if d1 > d + 1e-9 || d2 > d + 1e-9 || dt > d + 1e-9 {
            cptp_viol += 1;
        }
    }

    report(
        "08 (inequality suites, zero violations)",
        gentle_viol == 0 && corr_viol == 0 && cptp_viol == 0,
        &format!(
            "gentle-measurement {gentle_viol}/10000, correlation-norm {corr_viol}/10000 (both premises), contractivity {cptp_viol}/10000"
        ),
    );
}

#[test]
fn criterion_09_calculators() {
    let ruv = vbqc_chsh::ruv_round_complexity_log10(2.0);
    let comp = vbqc_chsh::composite_round_complexity_log10(2.0);
    let sb = soundness_bound(25);
    let pass = (ruv - 2466.0).abs() <= 0.1 && (comp - 616.5).abs() <= 0.1 && (sb - 0.01734).abs() <= 1e-5;
    report(
        "09 (log-domain calculators)",
        pass,
        &format!("log10 rounds {ruv:.4} / {comp:.4}; soundness(25) {sb:.6}"),
    );
}

#[test]
fn criterion_10_reports_are_bit_identical() {
    vbqc_mc::tune_allocator();
    let configs = vec![
        ExperimentConfig::Fk { n: 1, trials: 50, seed: 11 },
        ExperimentConfig::Robustness {
            n: 1,
            eps: 0.05,
            mode: DeviationMode::EnvCorrelated,
            trials: 200,
            seed: 12,
        },
        ExperimentConfig::Chsh {
            rounds_per_game: 2000,
            referee_sessions: 10,
            session_games: 2000,
            seed: 13,
        },
        ExperimentConfig::Tomography {
            blocks_per_target: 300,
            sessions: 4,
            sweep_blocks: vec![200, 400],
            seed: 14,
        },
        ExperimentConfig::Composite {
            fk_n: 1,
            blocks_per_target: 300,
            games_per_group: 500,
            trials: 2,
            d: 25,
            seed: 15,
        },
        ExperimentConfig::Ft {
            n: 10,
            c: 3.0,
            big_r: 2.0,
            p: 0.005,
            trials: 3000,
            seed: 16,
        },
        ExperimentConfig::Bounds { d: 25, n: 2.0, seed: 17 },
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for cfg in &configs {
        let a = run_experiment(cfg).unwrap().deterministic_value();
        let b = run_experiment(cfg).unwrap().deterministic_value();
        let same = serde_json::to_string(&a).unwrap() == serde_json::to_string(&b).unwrap();
        pass &= same;
        details.push(format!("{}: {}", cfg.kind(), if same { "identical" } else { "DIFFERS" }));
    }
    report("10 (report determinism)", pass, &details.join(", "));
}
