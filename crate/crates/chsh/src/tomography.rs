//! Steered state tomography: prover 2 collapses prover 1's halves of
//! shared `|Ψ+⟩` pairs onto announced resource states; the verifier checks
//! the announcement counts and the conditional Pauli estimators, and
//! reserves unmeasured blocks as the downstream protocol input.

use crate::games::{chsh_threshold, play_chsh, ChshGame, RefereeVerdict};
use crate::strategy::PairStrategy;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use vbqc_qsim::{bell_state, Angle, BellKind, BlochVector, DensityMatrix, PureState};

#[derive(Debug, Error)]
pub enum TomoError {
    #[error("target {0:?} is not in the session plane")]
    TargetOutsidePlane(BlochVector),
    #[error("certificate over {0} blocks exceeds the density-matrix cap")]
    CertificateTooLarge(usize),
    #[error(transparent)]
    Qsim(#[from] vbqc_qsim::QsimError),
}

/// The plane whose Pauli pair a session estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Plane {
    XY,
    XZ,
}

impl Plane {
    pub fn paulis(self) -> [BlochVector; 2] {
        match self {
            Plane::XY => [BlochVector::X, BlochVector::Y],
            Plane::XZ => [BlochVector::X, BlochVector::Z],
        }
    }

    fn contains(self, v: BlochVector) -> bool {
        match self {
            Plane::XY => v.z.abs() < 1e-12,
            Plane::XZ => v.y.abs() < 1e-12,
        }
    }

    /// The eight-state XY resource list `|+_{k π/4}⟩`, k = 0..8.
    pub fn xy_targets() -> Vec<BlochVector> {
        Angle::all().iter().map(|&a| BlochVector::xy_at(a)).collect()
    }

    /// The XZ resource list `|0⟩, |1⟩, |0⟩, |1⟩`.
    pub fn xz_targets() -> Vec<BlochVector> {
        vec![
            BlochVector::Z,
            BlochVector::Z.scaled(-1.0),
            BlochVector::Z,
            BlochVector::Z.scaled(-1.0),
        ]
    }
}

/// Session parameters. `blocks_per_target` is the per-target sample count
/// the acceptance tolerances are evaluated at; `keep_per_target` additional
/// blocks are steered but reserved unmeasured.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TomographyConfig {
    pub plane: Plane,
    pub targets: Vec<BlochVector>,
    pub blocks_per_target: usize,
    pub keep_per_target: usize,
    /// Use base-2 logs in the tolerance formulas (natural by default).
    pub log2: bool,
}

/// A reserved block: the residual two-qubit register (prover 1's qubit is
/// qubit 0), the announcement, and the state the verifier adopts for it.
#[derive(Debug, Clone)]
pub struct KeptBlock {
    pub state: PureState,
    pub announced: u8,
    pub target: BlochVector,
    /// `(-1)^announced · target`: what an honest steering leaves on
    /// prover 1's side.
    pub adopted: BlochVector,
}

impl KeptBlock {
    /// Prover 1's reduced single-qubit state.
    pub fn prover1_density(&self) -> DensityMatrix {
        DensityMatrix::partial_trace_of_pure(&self.state, &[true, false]).expect("2-qubit block")
    }

    /// The pure state the verifier adopts for this block.
    pub fn adopted_pure(&self) -> PureState {
        pure_from_bloch(self.adopted)
    }
}

/// `|ψ⟩` with the given Bloch vector (global phase fixed by convention).
pub fn pure_from_bloch(v: BlochVector) -> PureState {
    let theta = v.z.clamp(-1.0, 1.0).acos();
    let (s, c) = (theta / 2.0).sin_cos();
    let phi = v.y.atan2(v.x);
    PureState::from_amplitudes(vec![
        vbqc_qsim::C64::new(c, 0.0),
        vbqc_qsim::C64::from_polar(s, phi),
    ])
    .expect("unit state")
}

/// Announcement counts and conditional Pauli estimator accumulators, per
/// target state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TomographyStats {
    pub plane: Plane,
    pub targets: Vec<BlochVector>,
    pub n_per_target: usize,
    /// `counts[t][o]`: announcements `o` seen for target `t`.
    pub counts: Vec<[u64; 2]>,
    /// `tau_sum[t][p][o]` / `tau_count[t][p][o]`: ±1 outcome sums for Pauli
    /// `p` conditioned on announcement `o`.
    pub tau_sum: Vec<[[f64; 2]; 2]>,
    pub tau_count: Vec<[[u64; 2]; 2]>,
}

impl TomographyStats {
    fn new(plane: Plane, targets: Vec<BlochVector>, n_per_target: usize) -> TomographyStats {
        let t = targets.len();
        TomographyStats {
            plane,
            targets,
            n_per_target,
            counts: vec![[0; 2]; t],
            tau_sum: vec![[[0.0; 2]; 2]; t],
            tau_count: vec![[[0; 2]; 2]; t],
        }
    }

    /// The estimator `τ^{o,P}` for target `t`, if that cell has samples.
    pub fn tau(&self, t: usize, pauli: usize, o: usize) -> Option<f64> {
        let c = self.tau_count[t][pauli][o];
        (c > 0).then(|| self.tau_sum[t][pauli][o] / c as f64)
    }

    /// The ideal value `Tr(π^{t,o} P)` for the adopted state.
    pub fn reference(&self, t: usize, pauli: usize, o: usize) -> f64 {
        let sign = if o == 0 { 1.0 } else { -1.0 };
        let axis = self.plane.paulis()[pauli];
        self.targets[t].scaled(sign).dot(axis)
    }

    /// CSV dump: one row per estimator cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("target,pauli,announced,count,tau,reference\n");
        for t in 0..self.targets.len() {
            for p in 0..2 {
                for o in 0..2 {
                    out.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        t,
                        p,
                        o,
                        self.tau_count[t][p][o],
                        self.tau(t, p, o).unwrap_or(f64::NAN),
                        self.reference(t, p, o)
                    ));
                }
            }
        }
        out
    }
}

/// The two acceptance criteria evaluated on a session's statistics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TomographyAcceptance {
    pub accepted: bool,
    pub count_bound: f64,
    pub max_count_deviation: f64,
    pub tau_bound: f64,
    pub max_tau_deviation: f64,
}

/// Evaluate both acceptance criteria at sample size `n` per target with
/// `q' = 1` resource blocks:
/// announcement balance `|#{O_j = o} - n/2| ≤ 4 √(n log n)` and estimator
/// accuracy `|τ^{o,P} - Tr(π^o P)| ≤ 4 √((log n)/n)`.
pub fn tomography_accept(stats: &TomographyStats, log2: bool) -> TomographyAcceptance {
    let n = stats.n_per_target as f64;
    let logn = if log2 { n.log2() } else { n.ln() }.max(0.0);
    let count_bound = 4.0 * (n * logn).sqrt();
    let tau_bound = 4.0 * (logn / n).sqrt();

    let mut max_count_dev = 0.0f64;
    let mut max_tau_dev = 0.0f64;
    for t in 0..stats.targets.len() {
        for o in 0..2 {
            let dev = (stats.counts[t][o] as f64 - n / 2.0).abs();
            max_count_dev = max_count_dev.max(dev);
            for p in 0..2 {
                if let Some(tau) = stats.tau(t, p, o) {
                    max_tau_dev = max_tau_dev.max((tau - stats.reference(t, p, o)).abs());
                }
            }
        }
    }
    TomographyAcceptance {
        accepted: max_count_dev <= count_bound && max_tau_dev <= tau_bound,
        count_bound,
        max_count_deviation: max_count_dev,
        tau_bound,
        max_tau_deviation: max_tau_dev,
    }
}

/// Run one tomography session: for every target, steer
/// `blocks_per_target + keep_per_target` fresh `|Ψ+⟩` blocks, reserving a
/// uniform random subset of `keep_per_target` of them unmeasured and
/// measuring a uniformly chosen plane Pauli on the rest.
pub fn tomography_session(
    cfg: &TomographyConfig,
    pair: &mut PairStrategy,
    rng: &mut ChaCha12Rng,
) -> Result<(TomographyStats, Vec<KeptBlock>), TomoError> {
    for &t in &cfg.targets {
        if !cfg.plane.contains(t) {
            return Err(TomoError::TargetOutsidePlane(t));
        }
    }
    let mut stats = TomographyStats::new(cfg.plane, cfg.targets.clone(), cfg.blocks_per_target);
    let mut kept = Vec::with_capacity(cfg.keep_per_target * cfg.targets.len());
    let paulis = cfg.plane.paulis();
    let total = cfg.blocks_per_target + cfg.keep_per_target;
    let mut block_counter = 0usize;

    for (t, &target) in cfg.targets.iter().enumerate() {
        // uniform sample without replacement of the reserved block indices
        let kept_idx = sample_without_replacement(total, cfg.keep_per_target, rng);
        for j in 0..total {
            let mut shared = bell_state(BellKind::PsiPlus);
            let o = pair.steer(target, block_counter, &mut shared, rng);
            block_counter += 1;
            let o = o & 1;
            if kept_idx.contains(&j) {
                let sign = if o == 0 { 1.0 } else { -1.0 };
                kept.push(KeptBlock {
                    state: shared,
                    announced: o,
                    target,
                    adopted: target.scaled(sign),
                });
                continue;
            }
            stats.counts[t][o as usize] += 1;
            let p = rng.random_range(0..2usize);
            let s = pair.tomo_measure(paulis[p], &mut shared, rng);
            stats.tau_sum[t][p][o as usize] += f64::from(s);
            stats.tau_count[t][p][o as usize] += 1;
        }
    }
    Ok((stats, kept))
}

fn sample_without_replacement(
    total: usize,
    k: usize,
    rng: &mut ChaCha12Rng,
) -> std::collections::HashSet<usize> {
    use rand::seq::SliceRandom;
    let mut idx: Vec<usize> = (0..total).collect();
    idx.shuffle(rng);
    idx.into_iter().take(k).collect()
}

/// The measured closeness of a set of reserved blocks to their adopted
/// ideals. `eps_prep` is exact (simulation privilege); `reference_scale`
/// is the asymptotic form `n^{-1/64}` for the session's sample size, shown
/// alongside for scale.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ClosenessCertificate {
    pub eps_prep: f64,
    pub reference_scale: f64,
    pub blocks: usize,
}

/// Exact trace distance between the joint state of prover 1's reserved
/// qubits and the tensor product of adopted ideal states.
pub fn closeness_certificate(
    blocks: &[KeptBlock],
    session_n: usize,
) -> Result<ClosenessCertificate, TomoError> {
    if blocks.is_empty() || blocks.len() > vbqc_qsim::DENSITY_QUBIT_CAP {
        return Err(TomoError::CertificateTooLarge(blocks.len()));
    }
    let mut joint = blocks[0].prover1_density();
    let mut ideal = blocks[0].adopted_pure();
    for b in &blocks[1..] {
        joint = joint.tensor(&b.prover1_density())?;
        ideal = ideal.tensor(&b.adopted_pure())?;
    }
    let ideal_rho = DensityMatrix::from_pure(&ideal)?;
    let eps_prep = vbqc_qsim::trace_distance(&joint, &ideal_rho)?;
    Ok(ClosenessCertificate {
        eps_prep,
        reference_scale: (session_n as f64).powf(-1.0 / 64.0),
        blocks: blocks.len(),
    })
}

/// Desk-scale parameters of the full modified protocol run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModifiedTomoParams {
    /// Games refereed per CHSH group (the threshold is evaluated per group).
    pub games_per_group: u64,
    pub blocks_per_target: usize,
    pub keep_xy_per_target: usize,
    pub keep_xz_per_target: usize,
    pub log2: bool,
}

/// Everything a modified-tomography run produces.
#[derive(Debug)]
pub struct ModifiedTomoOutcome {
    pub verdict: RefereeVerdict,
    pub group_wins: [u64; 6],
    pub group_thresholds: [f64; 6],
    pub group_pass: [bool; 6],
    pub xy_stats: TomographyStats,
    pub xy_acceptance: TomographyAcceptance,
    pub xz_stats: TomographyStats,
    pub xz_acceptance: TomographyAcceptance,
    pub kept_xy: Vec<KeptBlock>,
    pub kept_xz: Vec<KeptBlock>,
}

impl ModifiedTomoOutcome {
    /// Per-group threshold report.
    pub fn group_report(&self) -> String {
        let mut out = String::from("group,wins,threshold,pass\n");
        for i in 0..6 {
            out.push_str(&format!(
                "{},{},{},{}\n",
                i + 1,
                self.group_wins[i],
                self.group_thresholds[i],
                self.group_pass[i]
            ));
        }
        out
    }
}

/// Run the modified protocol at desk scale: referee the six CHSH game
/// groups against the per-group threshold, then run the XY and XZ
/// tomography sessions whose reserved blocks become the downstream input.
/// The full protocol's random interleaving is simplified to a fixed group
/// order; the strategies modelled here are non-adaptive, so the order
/// cannot change their statistics.
pub fn modified_tomography(
    params: &ModifiedTomoParams,
    pair: &mut PairStrategy,
    rng: &mut ChaCha12Rng,
) -> Result<ModifiedTomoOutcome, TomoError> {
    let games = ChshGame::all();
    let mut group_wins = [0u64; 6];
    let mut group_thresholds = [0.0f64; 6];
    let mut group_pass = [false; 6];
    for (i, game) in games.iter().enumerate() {
        let (wins, _) = play_chsh(pair, game, params.games_per_group, rng, false);
        let threshold = chsh_threshold(params.games_per_group, params.log2);
        group_wins[i] = wins;
        group_thresholds[i] = threshold;
        group_pass[i] = wins as f64 >= threshold;
    }

    let xy_cfg = TomographyConfig {
        plane: Plane::XY,
        targets: Plane::xy_targets(),
        blocks_per_target: params.blocks_per_target,
        keep_per_target: params.keep_xy_per_target,
        log2: params.log2,
    };
    let (xy_stats, kept_xy) = tomography_session(&xy_cfg, pair, rng)?;
    let xy_acceptance = tomography_accept(&xy_stats, params.log2);

    let xz_cfg = TomographyConfig {
        plane: Plane::XZ,
        targets: Plane::xz_targets(),
        blocks_per_target: params.blocks_per_target,
        keep_per_target: params.keep_xz_per_target,
        log2: params.log2,
    };
    let (xz_stats, kept_xz) = tomography_session(&xz_cfg, pair, rng)?;
    let xz_acceptance = tomography_accept(&xz_stats, params.log2);

    let all_groups = group_pass.iter().all(|&p| p);
    let verdict = if all_groups && xy_acceptance.accepted && xz_acceptance.accepted {
        RefereeVerdict::Accept
    } else {
        RefereeVerdict::Reject
    };
    Ok(ModifiedTomoOutcome {
        verdict,
        group_wins,
        group_thresholds,
        group_pass,
        xy_stats,
        xy_acceptance,
        xz_stats,
        xz_acceptance,
        kept_xy,
        kept_xz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    #[test]
    fn honest_session_accepts_and_steers_exactly() {
        let cfg = TomographyConfig {
            plane: Plane::XY,
            targets: Plane::xy_targets(),
            blocks_per_target: 2000,
            keep_per_target: 1,
            log2: false,
        };
        let (stats, kept) = tomography_session(&cfg, &mut PairStrategy::Honest, &mut rng(1)).unwrap();
        let acc = tomography_accept(&stats, false);
        assert!(acc.accepted, "{acc:?}");
        assert_eq!(kept.len(), 8);
        // honest steering leaves prover 1 exactly on the adopted state
        let cert = closeness_certificate(&kept, 2000).unwrap();
        assert!(cert.eps_prep < 1e-9, "eps_prep {}", cert.eps_prep);
    }

    #[test]
    fn constant_announcer_breaks_count_criterion() {
        let cfg = TomographyConfig {
            plane: Plane::XY,
            targets: Plane::xy_targets(),
            blocks_per_target: 10_000,
            keep_per_target: 0,
            log2: false,
        };
        let (stats, _) =
            tomography_session(&cfg, &mut PairStrategy::ConstantAnnouncer { o: 0 }, &mut rng(2))
                .unwrap();
        let acc = tomography_accept(&stats, false);
        assert!(!acc.accepted);
        assert!(acc.max_count_deviation > acc.count_bound);
    }

    #[test]
    fn synthetic_stats_edge_cases() {
        // zero-deviation synthetic statistics accept
        let mut stats = TomographyStats::new(Plane::XY, Plane::xy_targets(), 1000);
        for t in 0..8 {
            stats.counts[t] = [500, 500];
            for p in 0..2 {
                for o in 0..2 {
                    stats.tau_count[t][p][o] = 250;
                    stats.tau_sum[t][p][o] = stats.reference(t, p, o) * 250.0;
                }
            }
        }
        assert!(tomography_accept(&stats, false).accepted);

        // a single estimator pushed past twice the bound rejects
        let bound = tomography_accept(&stats, false).tau_bound;
        stats.tau_sum[3][1][0] += 2.0 * bound * 250.0;
        assert!(!tomography_accept(&stats, false).accepted);
    }

    #[test]
    fn reflected_pair_is_invisible_to_tomography() {
        // identical acceptance but XZ-steered states flipped
        let cfg = TomographyConfig {
            plane: Plane::XZ,
            targets: Plane::xz_targets(),
            blocks_per_target: 4000,
            keep_per_target: 1,
            log2: false,
        };
        let (stats, kept) =
            tomography_session(&cfg, &mut PairStrategy::Reflected, &mut rng(3)).unwrap();
        assert!(tomography_accept(&stats, false).accepted);
        // actual prover-1 state is the reflection of the adopted one: for
        // |0⟩/|1⟩ targets that is the flipped basis state
        for block in &kept {
            let actual = block.prover1_density();
            let flipped = pure_from_bloch(block.adopted.reflect_xy());
            let fid = vbqc_qsim::fidelity_with_pure(&actual, &flipped).unwrap();
            assert!((fid - 1.0).abs() < 1e-9, "fidelity to reflected {fid}");
        }
    }

    #[test]
    fn rotated_steering_biases_estimators_but_small_rotation_passes() {
        let cfg = TomographyConfig {
            plane: Plane::XY,
            targets: Plane::xy_targets(),
            blocks_per_target: 2000,
            keep_per_target: 0,
            log2: false,
        };
        let (stats, _) = tomography_session(
            &cfg,
            &mut PairStrategy::RotatedSteering { eta: 0.02 },
            &mut rng(4),
        )
        .unwrap();
        let acc = tomography_accept(&stats, false);
        assert!(acc.accepted, "tiny rotation must pass: {acc:?}");

        let (stats, _) = tomography_session(
            &cfg,
            &mut PairStrategy::RotatedSteering { eta: 0.9 },
            &mut rng(5),
        )
        .unwrap();
        let acc = tomography_accept(&stats, false);
        assert!(!acc.accepted, "large rotation must fail: {acc:?}");
    }

    #[test]
    fn certificate_obeys_the_two_session_triangle_bound() {
        // the joint closeness of blocks drawn from two sessions is at most
        // the sum of the per-session closenesses
        let mut pair = PairStrategy::RotatedSteering { eta: 0.15 };
        let cfg = TomographyConfig {
            plane: Plane::XY,
            targets: vec![BlochVector::X, BlochVector::Y],
            blocks_per_target: 64,
            keep_per_target: 1,
            log2: false,
        };
        let (_, kept_a) = tomography_session(&cfg, &mut pair, &mut rng(8)).unwrap();
        let (_, kept_b) = tomography_session(&cfg, &mut pair, &mut rng(9)).unwrap();
        let eps_a = closeness_certificate(&kept_a, 64).unwrap().eps_prep;
        let eps_b = closeness_certificate(&kept_b, 64).unwrap().eps_prep;
        let joint: Vec<KeptBlock> = kept_a.into_iter().chain(kept_b).collect();
        let eps_joint = closeness_certificate(&joint, 64).unwrap().eps_prep;
        assert!(eps_joint <= eps_a + eps_b + 1e-9, "{eps_joint} > {eps_a} + {eps_b}");
        assert!(eps_a > 1e-4, "rotation must be visible");
    }

    #[test]
    fn stats_csv_and_group_report_render() {
        let cfg = TomographyConfig {
            plane: Plane::XZ,
            targets: Plane::xz_targets(),
            blocks_per_target: 64,
            keep_per_target: 0,
            log2: false,
        };
        let (stats, _) = tomography_session(&cfg, &mut PairStrategy::Honest, &mut rng(10)).unwrap();
        let csv = stats.to_csv();
        assert!(csv.starts_with("target,pauli,announced,count,tau,reference"));
        assert_eq!(csv.lines().count(), 1 + 4 * 4);

        let params = ModifiedTomoParams {
            games_per_group: 200,
            blocks_per_target: 64,
            keep_xy_per_target: 0,
            keep_xz_per_target: 0,
            log2: false,
        };
        let out = modified_tomography(&params, &mut PairStrategy::Honest, &mut rng(11)).unwrap();
        assert_eq!(out.group_report().lines().count(), 7);
    }

    #[test]
    fn modified_protocol_honest_accepts() {
        let params = ModifiedTomoParams {
            games_per_group: 3000,
            blocks_per_target: 1500,
            keep_xy_per_target: 1,
            keep_xz_per_target: 1,
            log2: false,
        };
        let out = modified_tomography(&params, &mut PairStrategy::Honest, &mut rng(6)).unwrap();
        assert_eq!(out.verdict, RefereeVerdict::Accept, "{:?}", out.group_pass);
        assert_eq!(out.kept_xy.len(), 8);
        assert_eq!(out.kept_xz.len(), 4);
    }

    #[test]
    fn classical_pair_fails_the_games() {
        let params = ModifiedTomoParams {
            games_per_group: 4000,
            blocks_per_target: 200,
            keep_xy_per_target: 0,
            keep_xz_per_target: 0,
            log2: false,
        };
        let mut pair = PairStrategy::Classical {
            a_table: [0, 0],
            b_table: [0, 0],
        };
        let out = modified_tomography(&params, &mut pair, &mut rng(7)).unwrap();
        assert_eq!(out.verdict, RefereeVerdict::Reject);
        assert!(out.group_pass.iter().any(|p| !p));
    }
}
