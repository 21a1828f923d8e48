//! The interactive protocol run: verifier streams angles, prover measures.

use crate::deviate::DeviatedInput;
use crate::instance::{FkError, FkInstance};
use crate::strategy::{DeviationStage, ProverStrategy};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use vbqc_graph::{Role, VertexId};
use vbqc_qsim::{Angle, PureState};

/// Run verdict: accept iff every trap reported its expected outcome and no
/// reply was malformed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Accept,
    Reject,
}

/// One measured qubit: the angle the verifier sent and the reply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub qubit: VertexId,
    pub delta: Angle,
    pub outcome: u8,
}

/// Full record of one interactive run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Transcript {
    pub records: Vec<MeasurementRecord>,
    pub verdict: Verdict,
    /// Decoded computation output, one bit per wire.
    pub output: Vec<u8>,
    pub trap_failures: usize,
    pub aborted: bool,
}

impl Transcript {
    /// JSON-lines export: one record per measured qubit, in order.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }
}

/// A register under the prover's control, addressed by fixed slots that
/// survive measurement-removal. Slots `0..n_vertices` are protocol qubits;
/// environment qubits the adversary may hold come after.
pub struct SimRegister {
    state: PureState,
    pos: Vec<Option<usize>>,
}

impl SimRegister {
    pub fn new(state: PureState) -> SimRegister {
        let n = state.n_qubits();
        SimRegister {
            state,
            pos: (0..n).map(Some).collect(),
        }
    }

    pub fn n_slots(&self) -> usize {
        self.pos.len()
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    fn live(&self, slot: usize) -> usize {
        self.pos[slot].expect("slot already consumed")
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<(), FkError> {
        let (ia, ib) = (self.live(a), self.live(b));
        self.state.apply_cz(ia, ib)?;
        Ok(())
    }

    pub fn apply_single(&mut self, slot: usize, m: [[vbqc_qsim::C64; 2]; 2]) -> Result<(), FkError> {
        let i = self.live(slot);
        self.state.apply_single(i, m)?;
        Ok(())
    }

    pub fn apply_pauli(&mut self, slot: usize, p: vbqc_qsim::Pauli) -> Result<(), FkError> {
        let i = self.live(slot);
        self.state.apply_pauli(i, p)?;
        Ok(())
    }

    pub fn reflect_all(&mut self) {
        self.state.reflect_xy();
    }

    /// Measure a slot in the XY basis at `delta`, consuming the qubit.
    pub fn measure_xy(
        &mut self,
        slot: usize,
        delta: Angle,
        rng: &mut ChaCha12Rng,
    ) -> Result<u8, FkError> {
        let idx = self.live(slot);
        let bit = self.state.measure_xy_remove(idx, delta, rng)?;
        self.pos[slot] = None;
        for p in self.pos.iter_mut().flatten() {
            if *p > idx {
                *p -= 1;
            }
        }
        Ok(bit)
    }
}

/// The verifier's interactive state machine for one run: it streams
/// `(qubit, δ)` requests in the public measurement order, consumes the
/// prover's replies, and finally produces the verdict and decoded output.
#[derive(Clone)]
pub struct VerifierMachine<'a> {
    inst: &'a FkInstance,
    /// corrected outcome `s_v = b_v ⊕ r_v` per plane vertex, once measured
    s: Vec<Option<u8>>,
    /// wire position lookup: vertex -> (wire index, offset)
    wire_pos: Vec<Option<(usize, usize)>>,
    cursor: usize,
    records: Vec<MeasurementRecord>,
    aborted: bool,
}

impl<'a> VerifierMachine<'a> {
    pub fn new(inst: &'a FkInstance) -> VerifierMachine<'a> {
        let mut wire_pos = vec![None; inst.n_qubits()];
        for (w, wire) in inst.wires.iter().enumerate() {
            for (k, &v) in wire.iter().enumerate() {
                wire_pos[v] = Some((w, k));
            }
        }
        VerifierMachine {
            inst,
            s: vec![None; inst.n_qubits()],
            wire_pos,
            cursor: 0,
            records: Vec::with_capacity(inst.n_qubits()),
            aborted: false,
        }
    }

    /// How many replies have been consumed so far.
    pub fn measured(&self) -> usize {
        self.cursor
    }

    /// The next measurement request, or `None` when every qubit is measured
    /// (or the run aborted).
    pub fn next_request(&self) -> Option<(VertexId, Angle)> {
        if self.aborted {
            return None;
        }
        let order = self.inst.graph.measurement_order();
        order.get(self.cursor).map(|&v| (v, self.delta(v)))
    }

    /// Feed the prover's reply for the pending request.
    pub fn submit(&mut self, outcome: u8) {
        let order = self.inst.graph.measurement_order();
        let v = order[self.cursor];
        if outcome > 1 {
            self.aborted = true;
            return;
        }
        self.records.push(MeasurementRecord {
            qubit: v,
            delta: self.delta(v),
            outcome,
        });
        self.record_outcome(v, outcome);
        self.cursor += 1;
    }

    /// Conclude the run.
    pub fn finish(self) -> Transcript {
        if self.aborted {
            return Transcript {
                records: self.records,
                verdict: Verdict::Reject,
                output: Vec::new(),
                trap_failures: 0,
                aborted: true,
            };
        }
        assert_eq!(
            self.cursor,
            self.inst.n_qubits(),
            "finish called before every qubit was measured"
        );
        let outcome_of: std::collections::HashMap<VertexId, u8> =
            self.records.iter().map(|r| (r.qubit, r.outcome)).collect();
        let trap_failures = self
            .inst
            .trap_expectations()
            .iter()
            .filter(|&&(t, expect)| outcome_of[&t] != expect)
            .count();
        let verdict = if trap_failures == 0 {
            Verdict::Accept
        } else {
            Verdict::Reject
        };
        let output = self.output();
        Transcript {
            records: self.records,
            verdict,
            output,
            trap_failures,
            aborted: false,
        }
    }

    /// The blinded angle for vertex `v`: `δ_v = θ_v + φ'_v + r_v π`, where
    /// the adapted angle folds in wire corrections from earlier outcomes and
    /// the Z imprints of `|1⟩` dummy neighbours. Dummies get their pre-drawn
    /// uniform angle.
    ///
    /// Pattern semantics: measuring a wire qubit at angle `φ` applies
    /// `J(-φ) = H Z(-φ)` to the wire state; the final wire qubit's corrected
    /// outcome reads the wire out in the `|±_φ⟩` basis.
    pub fn delta(&self, v: VertexId) -> Angle {
        let secrets = &self.inst.secrets;
        match self.inst.graph.role(v) {
            Role::Dummy => secrets.dummy_delta[v].expect("dummy delta"),
            Role::Trap1 | Role::Trap2 => {
                let theta = secrets.theta[v].expect("trap theta");
                let phi = secrets.pattern_angle[v].expect("trap angle");
                let r_term = Angle::from_multiple(4 * i64::from(secrets.r[v]));
                theta + phi + r_term
            }
            Role::Computation => {
                let theta = secrets.theta[v].expect("theta");
                let phi = secrets.pattern_angle[v].expect("phi");
                let (w, k) = self.wire_pos[v].expect("computation vertex on a wire");
                let wire = &self.inst.wires[w];
                let s_x = if k >= 1 {
                    self.s[wire[k - 1]].expect("dependency measured")
                } else {
                    0
                };
                let s_z = if k >= 2 {
                    self.s[wire[k - 2]].expect("dependency measured")
                } else {
                    0
                };
                let k_dummy = self
                    .inst
                    .graph
                    .one_dummy_parity(v, &secrets.dummy_value);
                // φ' = (-1)^{s_x} φ + (s_z ⊕ k_dummy) π
                let signed_phi = if s_x == 1 { -phi } else { phi };
                let z_term = Angle::from_multiple(4 * i64::from(s_z ^ k_dummy));
                let r_term = Angle::from_multiple(4 * i64::from(secrets.r[v]));
                theta + signed_phi + z_term + r_term
            }
            Role::Unassigned => unreachable!("instances never carry unassigned roles"),
        }
    }

    fn record_outcome(&mut self, v: VertexId, b: u8) {
        if self.inst.graph.role(v) != Role::Dummy {
            self.s[v] = Some(b ^ self.inst.secrets.r[v]);
        }
    }

    /// Decoded output: the corrected outcome of each wire's last qubit.
    fn output(&self) -> Vec<u8> {
        self.inst
            .wires
            .iter()
            .map(|wire| self.s[*wire.last().expect("nonempty wire")].expect("wire measured"))
            .collect()
    }
}

/// Execute one full interactive run.
///
/// `born` drives the Born-rule sampling; `adversary` drives any randomness
/// inside the strategy. An `input_override` replaces the verifier's ideal
/// product input with a (possibly deviated, possibly environment-extended)
/// register; environment qubits stay with the prover and are never
/// measured by the verifier.
pub fn run_fk(
    inst: &FkInstance,
    strategy: &ProverStrategy,
    born: &mut ChaCha12Rng,
    adversary: &mut ChaCha12Rng,
    input_override: Option<&DeviatedInput>,
) -> Result<Transcript, FkError> {
    let input = match input_override {
        Some(d) => d.state.clone(),
        None => inst.ideal_input()?,
    };
    let mut reg = SimRegister::new(input);

    // --- prover, steps 1-2: receive input, deviate, entangle ---
    match strategy {
        ProverStrategy::ReflectAll => reg.reflect_all(),
        ProverStrategy::UnitaryDeviation { stage, ops } if *stage == DeviationStage::BeforeEntangle => {
            apply_ops(&mut reg, ops)?;
        }
        _ => {}
    }
    for &(a, b) in inst.graph.edges() {
        reg.apply_cz(a, b)?;
    }
    match strategy {
        ProverStrategy::UnitaryDeviation { stage, ops } if *stage == DeviationStage::AfterEntangle => {
            apply_ops(&mut reg, ops)?;
        }
        ProverStrategy::FlipAll { prob } => {
            use rand::Rng;
            if adversary.random::<f64>() < *prob {
                for v in 0..inst.n_qubits() {
                    reg.apply_pauli(v, vbqc_qsim::Pauli::Z)?;
                }
            }
        }
        ProverStrategy::Correlated { tape, max_angle } => {
            for v in 0..inst.n_qubits() {
                let angle = max_angle * tape.signal(v);
                if angle != 0.0 {
                    let op = crate::strategy::DeviationOp::RotateZ { slot: v, angle };
                    let (slot, m) = op.single_matrix().expect("rotation");
                    reg.apply_single(slot, m)?;
                }
            }
        }
        _ => {}
    }

    // --- steps 3-4: streamed measurements, verdict ---
    let mut verifier = VerifierMachine::new(inst);
    while let Some((v, delta)) = verifier.next_request() {
        let b = match strategy {
            ProverStrategy::Malformed => 7,
            _ => reg.measure_xy(v, delta, born)?,
        };
        verifier.submit(b);
        if b > 1 {
            break;
        }
    }
    Ok(verifier.finish())
}

fn apply_ops(reg: &mut SimRegister, ops: &[crate::strategy::DeviationOp]) -> Result<(), FkError> {
    use crate::strategy::DeviationOp;
    for op in ops {
        match *op {
            DeviationOp::PauliOp { slot, pauli } => reg.apply_pauli(slot, pauli)?,
            DeviationOp::ExtraCz { a, b } => reg.apply_cz(a, b)?,
            _ => {
                let (slot, m) = op.single_matrix().expect("single-qubit op");
                reg.apply_single(slot, m)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::SharedTape;
    use vbqc_graph::TargetComputation;
    use vbqc_mc::RngStream;

    fn streams(seed: u64, trial: u64) -> (ChaCha12Rng, ChaCha12Rng) {
        let s = RngStream::new(seed, trial);
        (s.born(), s.adversary())
    }

    #[test]
    fn honest_runs_always_accept_line() {
        for trial in 0..200 {
            let s = RngStream::new(11, trial);
            let inst = FkInstance::line(4, 11, &mut s.secrets()).unwrap();
            let (mut born, mut adv) = streams(11, trial);
            let t = run_fk(&inst, &ProverStrategy::Honest, &mut born, &mut adv, None).unwrap();
            assert_eq!(t.verdict, Verdict::Accept, "trial {trial}");
            assert_eq!(t.records.len(), 4);
        }
    }

    #[test]
    fn honest_runs_always_accept_dotted() {
        let target = TargetComputation::wire(1);
        for trial in 0..100 {
            let s = RngStream::new(13, trial);
            let inst = FkInstance::dotted(1, &target, None, 13, &mut s.secrets()).unwrap();
            let (mut born, mut adv) = streams(13, trial);
            let t = run_fk(&inst, &ProverStrategy::Honest, &mut born, &mut adv, None).unwrap();
            assert_eq!(t.verdict, Verdict::Accept, "trial {trial}");
            // single 1-wire with φ = 0 reads out |+⟩ in the X basis: output 0
            assert_eq!(t.output, vec![0], "trial {trial}");
        }
    }

    #[test]
    fn honest_output_matches_ideal_pattern_on_dotted_wire() {
        // N = 2 wire of three qubits, all angles zero: the pattern applies
        // J(0)J(0) to |+⟩ giving |+⟩, read out in the X basis: output 0.
        let target = TargetComputation::wire(2);
        for trial in 0..100 {
            let s = RngStream::new(17, trial);
            let inst = FkInstance::dotted(2, &target, None, 17, &mut s.secrets()).unwrap();
            let (mut born, mut adv) = streams(17, trial);
            let t = run_fk(&inst, &ProverStrategy::Honest, &mut born, &mut adv, None).unwrap();
            assert_eq!(t.verdict, Verdict::Accept, "trial {trial}");
            assert_eq!(t.output, vec![0], "trial {trial}");
        }
    }

    #[test]
    fn honest_output_follows_pattern_angles() {
        // Wire of 3 with angles (pi/2, 0, pi/2). Measuring at angle φ
        // implements J(-φ), so on the Bloch sphere:
        // |+⟩ = (1,0,0) -Z(-pi/2)-> (0,-1,0) -H-> (0,1,0) -J(0)=H-> (0,-1,0)
        // = |+_{3pi/2}⟩, read out in the |±_{pi/2}⟩ basis (orthogonal):
        // outcome 1, deterministically, for every seed.
        let target = TargetComputation::wire(2);
        let angles = vec![vec![
            Angle::from_multiple(2),
            Angle::ZERO,
            Angle::from_multiple(2),
        ]];
        for trial in 0..50 {
            let s = RngStream::new(19, trial);
            let inst =
                FkInstance::dotted(2, &target, Some(&angles), 19, &mut s.secrets()).unwrap();
            let (mut born, mut adv) = streams(19, trial);
            let t = run_fk(&inst, &ProverStrategy::Honest, &mut born, &mut adv, None).unwrap();
            assert_eq!(t.verdict, Verdict::Accept);
            assert_eq!(t.output, vec![1], "trial {trial}");
        }
    }

    #[test]
    fn flip_all_rejects_deterministically() {
        for trial in 0..50 {
            let s = RngStream::new(23, trial);
            let inst = FkInstance::line(5, 23, &mut s.secrets()).unwrap();
            let (mut born, mut adv) = streams(23, trial);
            let t = run_fk(
                &inst,
                &ProverStrategy::FlipAll { prob: 1.0 },
                &mut born,
                &mut adv,
                None,
            )
            .unwrap();
            assert_eq!(t.verdict, Verdict::Reject, "trial {trial}");
            // the single trap flips
            assert_eq!(t.trap_failures, 1);
        }
    }

    #[test]
    fn reflect_all_rejects_on_odd_parity_partitions() {
        // N = 2: every trap has 5 dummy neighbours (odd), so the reflection
        // flips every trap outcome deterministically.
        let target = TargetComputation::wire(2);
        for trial in 0..50 {
            let s = RngStream::new(29, trial);
            let inst = FkInstance::dotted(2, &target, None, 29, &mut s.secrets()).unwrap();
            let (mut born, mut adv) = streams(29, trial);
            let t = run_fk(&inst, &ProverStrategy::ReflectAll, &mut born, &mut adv, None).unwrap();
            assert_eq!(t.verdict, Verdict::Reject, "trial {trial}");
            assert_eq!(t.trap_failures, 4, "all four traps must flip");
        }
    }

    #[test]
    fn malformed_reply_aborts_to_reject() {
        let s = RngStream::new(31, 0);
        let inst = FkInstance::line(3, 31, &mut s.secrets()).unwrap();
        let (mut born, mut adv) = streams(31, 0);
        let t = run_fk(&inst, &ProverStrategy::Malformed, &mut born, &mut adv, None).unwrap();
        assert!(t.aborted);
        assert_eq!(t.verdict, Verdict::Reject);
    }

    #[test]
    fn identical_seeds_identical_transcripts() {
        let run = || {
            let s = RngStream::new(37, 5);
            let inst = FkInstance::line(6, 37, &mut s.secrets()).unwrap();
            let (mut born, mut adv) = streams(37, 5);
            let strat = ProverStrategy::Correlated {
                tape: SharedTape {
                    words: vec![17, 99, 3],
                },
                max_angle: 0.4,
            };
            run_fk(&inst, &strat, &mut born, &mut adv, None).unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn trap_delta_is_theta_plus_trap_angle_plus_r_pi() {
        let s = RngStream::new(43, 0);
        let inst = FkInstance::line(5, 43, &mut s.secrets()).unwrap();
        let machine = VerifierMachine::new(&inst);
        let trap = (0..5)
            .find(|&v| inst.graph.role(v).is_trap())
            .unwrap();
        let theta = inst.secrets.theta[trap].unwrap();
        let phi_t = inst.secrets.pattern_angle[trap].unwrap();
        let r_term = Angle::from_multiple(4 * i64::from(inst.secrets.r[trap]));
        assert_eq!(machine.delta(trap), theta + phi_t + r_term);
        // the modular-sum example: pi/4 + pi/2 + pi = 7pi/4
        assert_eq!(
            Angle::from_multiple(1) + Angle::from_multiple(2) + Angle::PI,
            Angle::from_multiple(7)
        );
    }

    #[test]
    fn transcript_jsonl_has_one_line_per_qubit() {
        let s = RngStream::new(41, 0);
        let inst = FkInstance::line(4, 41, &mut s.secrets()).unwrap();
        let (mut born, mut adv) = streams(41, 0);
        let t = run_fk(&inst, &ProverStrategy::Honest, &mut born, &mut adv, None).unwrap();
        assert_eq!(t.to_jsonl().lines().count(), 4);
    }
}
