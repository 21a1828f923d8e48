//! Orchestration of one composite run: state tomography with both provers,
//! then the single-server protocol with prover 1 on the prepared input.

use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use vbqc_chsh::{
    modified_tomography, ModifiedTomoParams, PairStrategy, RefereeVerdict,
};
use vbqc_fk::{
    run_fk, DeviatedInput, FkInstance, ProverStrategy, Verdict,
};
use vbqc_graph::{Role, TargetComputation};
use vbqc_mc::RngStream;
use vbqc_qsim::{basis_qubit, plus_theta, Angle, PureState};

#[derive(Debug, Error)]
pub enum CompositeError {
    #[error("residual blocks cannot cover the protocol input: need {need_xy} XY and {need_xz} XZ blocks, sessions reserve {have_xy}/{have_xz}")]
    InsufficientResidual {
        need_xy: usize,
        need_xz: usize,
        have_xy: usize,
        have_xz: usize,
    },
    #[error("a reserved block left prover 1 entangled with prover 2 (purity {0}); no product input can be extracted")]
    EntangledResidual(f64),
    #[error("tomography failed: {0}")]
    Tomo(String),
    #[error("protocol failed: {0}")]
    Fk(String),
}

/// Joint behaviour of the colluding parties across both stages. The only
/// coupling between the stages is the pre-shared classical tape; once the
/// composite starts, nobody communicates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum CompositeStrategy {
    Honest,
    /// Both provers reflect all measurement axes in the preparation stage;
    /// prover 1 then runs the second stage honestly on the reflected input.
    Reflected,
    /// Prover 2 rotates its steering axes; everything else honest.
    TomoDeviation { eta: f64 },
    /// Tape-correlated deviations in both stages: steering rotated by
    /// `tomo_eta_max · signal(block)`, protocol qubits Z-rotated by
    /// `fk_angle_max · signal(qubit)`.
    Correlated {
        words: Vec<u64>,
        tomo_eta_max: f64,
        fk_angle_max: f64,
    },
}

impl CompositeStrategy {
    fn pair(&self) -> PairStrategy {
        match self {
            CompositeStrategy::Honest => PairStrategy::Honest,
            CompositeStrategy::Reflected => PairStrategy::Reflected,
            CompositeStrategy::TomoDeviation { eta } => {
                PairStrategy::RotatedSteering { eta: *eta }
            }
            CompositeStrategy::Correlated {
                words,
                tomo_eta_max,
                ..
            } => PairStrategy::TapeCorrelated {
                words: words.clone(),
                eta_max: *tomo_eta_max,
            },
        }
    }

    fn fk_strategy(&self) -> ProverStrategy {
        match self {
            CompositeStrategy::Correlated {
                words,
                fk_angle_max,
                ..
            } => ProverStrategy::Correlated {
                tape: vbqc_fk::SharedTape {
                    words: words.clone(),
                },
                max_angle: *fk_angle_max,
            },
            // the reflection lives in the prepared states; the protocol
            // itself is followed honestly
            _ => ProverStrategy::Honest,
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            CompositeStrategy::Honest => "honest".into(),
            CompositeStrategy::Reflected => "reflected".into(),
            CompositeStrategy::TomoDeviation { eta } => format!("tomo-deviation(eta={eta})"),
            CompositeStrategy::Correlated {
                tomo_eta_max,
                fk_angle_max,
                ..
            } => format!("correlated(tomo={tomo_eta_max}, fk={fk_angle_max})"),
        }
    }
}

/// One composite experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompositeConfig {
    pub tomo: ModifiedTomoParams,
    /// Delegated computation size of the second stage (a `3n`-primary
    /// dotted graph; `n` even gives every trap odd dummy parity).
    pub fk_n: usize,
    /// Security parameter, echoed into bound references.
    pub d: u32,
    pub strategy: CompositeStrategy,
    pub seed: u64,
}

/// The composite verdicts and diagnostics of one run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompositeReport {
    pub seed: u64,
    /// Tomography sample size per target.
    pub n: usize,
    pub d: u32,
    /// Exact trace distance of the prepared input from the verifier's
    /// adopted ideal (product of pure states, so computed in closed form).
    pub eps_prep: Option<f64>,
    pub tomography_verdict: bool,
    pub fk_verdict: Option<bool>,
    /// Output agreement with the honest common-random-numbers replay.
    pub correct: Option<bool>,
    pub strategy_descriptor: String,
    /// Accept in both stages.
    pub joint_accept: bool,
    /// Fingerprint of the second stage's hidden partition (stage-isolation
    /// audits compare this across tomography behaviours).
    pub fk_roles_fingerprint: Option<u64>,
}

impl CompositeReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Residual demand of the protocol input on a `3n`-primary dotted wire
/// instance: `4n - 1` plane qubits, the rest dummies.
pub fn slot_demand(fk_n: usize) -> (usize, usize) {
    let total = vbqc_graph::protocol_qubit_count(fk_n);
    let plane = 4 * fk_n - 1;
    (plane, total - plane)
}

fn extract_prover1(block: &vbqc_chsh::KeptBlock) -> Result<PureState, CompositeError> {
    let rho = block.prover1_density();
    let purity = rho.purity();
    if purity < 1.0 - 1e-9 {
        return Err(CompositeError::EntangledResidual(purity));
    }
    let (_, state) = rho
        .dominant_eigenvector()
        .map_err(|e| CompositeError::Fk(e.to_string()))?;
    Ok(state)
}

/// Execute one composite run end to end.
pub fn run_composite(cfg: &CompositeConfig) -> Result<CompositeReport, CompositeError> {
    let (need_xy, need_xz) = slot_demand(cfg.fk_n);
    let have_xy = 8 * cfg.tomo.keep_xy_per_target;
    let have_xz = 4 * cfg.tomo.keep_xz_per_target;
    if have_xy < need_xy || have_xz < need_xz {
        return Err(CompositeError::InsufficientResidual {
            need_xy,
            need_xz,
            have_xy,
            have_xz,
        });
    }

    let stream = RngStream::new(cfg.seed, 0);
    let mut pair = cfg.strategy.pair();
    let mut tomo_rng: ChaCha12Rng = stream.labelled(10);
    let outcome = modified_tomography(&cfg.tomo, &mut pair, &mut tomo_rng)
        .map_err(|e| CompositeError::Tomo(e.to_string()))?;

    let mut report = CompositeReport {
        seed: cfg.seed,
        n: cfg.tomo.blocks_per_target,
        d: cfg.d,
        eps_prep: None,
        tomography_verdict: outcome.verdict == RefereeVerdict::Accept,
        fk_verdict: None,
        correct: None,
        strategy_descriptor: cfg.strategy.descriptor(),
        joint_accept: false,
        fk_roles_fingerprint: None,
    };
    if outcome.verdict == RefereeVerdict::Reject {
        return Ok(report);
    }

    // --- second stage: fresh secrets, input slots filled from residuals ---
    let target = TargetComputation::wire(cfg.fk_n);
    let mut fk_rng: ChaCha12Rng = stream.labelled(11);
    let mut inst = FkInstance::dotted(cfg.fk_n, &target, None, cfg.seed, &mut fk_rng)
        .map_err(|e| CompositeError::Fk(e.to_string()))?;

    let mut xy_blocks = outcome.kept_xy.iter();
    let mut xz_blocks = outcome.kept_xz.iter();
    let mut prepared = Vec::with_capacity(inst.n_qubits());
    let mut overlap_sq = 1.0f64;
    for v in 0..inst.n_qubits() {
        let (block, ideal) = if inst.graph.role(v) == Role::Dummy {
            let block = xz_blocks.next().expect("validated demand");
            let value = u8::from(block.adopted.z < 0.0);
            inst.secrets.dummy_value[v] = Some(value);
            (block, basis_qubit(value))
        } else {
            let block = xy_blocks.next().expect("validated demand");
            let theta = Angle::from_radians(block.adopted.y.atan2(block.adopted.x))
                .map_err(|e| CompositeError::Fk(e.to_string()))?;
            inst.secrets.theta[v] = Some(theta);
            (block, plus_theta(theta))
        };
        let p1 = extract_prover1(block)?;
        overlap_sq *= p1.overlap(&ideal).map_err(|e| CompositeError::Fk(e.to_string()))?;
        prepared.push((p1.amplitudes()[0], p1.amplitudes()[1]));
    }
    // pure product vs pure product: D = sqrt(1 - |<ψ|φ>|²)
    let eps_prep = (1.0 - overlap_sq).max(0.0).sqrt();
    report.eps_prep = Some(eps_prep);
    report.fk_roles_fingerprint = Some(roles_fingerprint(&inst));

    let input = PureState::product(&prepared).map_err(|e| CompositeError::Fk(e.to_string()))?;
    let deviated = DeviatedInput {
        state: input,
        env_qubits: 0,
        deviated_qubit: 0,
        eps: eps_prep,
    };

    let reference = run_fk(
        &inst,
        &ProverStrategy::Honest,
        &mut stream.born(),
        &mut stream.adversary(),
        None,
    )
    .map_err(|e| CompositeError::Fk(e.to_string()))?;
    let run = run_fk(
        &inst,
        &cfg.strategy.fk_strategy(),
        &mut stream.born(),
        &mut stream.adversary(),
        Some(&deviated),
    )
    .map_err(|e| CompositeError::Fk(e.to_string()))?;

    report.fk_verdict = Some(run.verdict == Verdict::Accept);
    report.correct = Some(run.output == reference.output);
    report.joint_accept = report.tomography_verdict && run.verdict == Verdict::Accept;
    Ok(report)
}

fn roles_fingerprint(inst: &FkInstance) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    for v in 0..inst.n_qubits() {
        (inst.graph.role(v) as u8).hash(&mut h);
    }
    h.finish()
}
