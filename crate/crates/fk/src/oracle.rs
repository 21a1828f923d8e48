//! Exact small-instance oracle for accept-and-incorrect probabilities.
//!
//! For a Pauli-insertion deviation on the single-trap line substrate this
//! walks every branch of the coupled (honest reference, deviated) run pair
//! exactly: trap positions and dummy values are enumerated, and the shared
//! Born-sampling uniform draw is split into the sub-intervals on which each
//! run's outcome is constant. Blinding variables (θ, r, dummy angles, trap
//! angle) shift both runs' sampling thresholds identically, so the coupled
//! verdict distribution does not depend on them and they are fixed to zero
//! here. The result is the exact `p_incorrect` that the Monte Carlo
//! estimator approximates.

use crate::instance::{FkInstance, VerifierSecrets};
use crate::runner::{Verdict, VerifierMachine};
use vbqc_graph::{line_graph_with_trap, ProtocolGraph, Role};
use vbqc_qsim::{Angle, Pauli, PureState};

fn zeroed_secrets(graph: &ProtocolGraph, dummy_values: &[u8]) -> VerifierSecrets {
    let n = graph.n_vertices();
    let mut theta = vec![None; n];
    let mut dummy_value = vec![None; n];
    let mut dummy_delta = vec![None; n];
    let mut pattern_angle = vec![None; n];
    let mut next_dummy = 0;
    for v in 0..n {
        match graph.role(v) {
            Role::Dummy => {
                dummy_value[v] = Some(dummy_values[next_dummy]);
                dummy_delta[v] = Some(Angle::ZERO);
                next_dummy += 1;
            }
            Role::Computation => {
                theta[v] = Some(Angle::ZERO);
                pattern_angle[v] = Some(Angle::ZERO);
            }
            _ => {
                theta[v] = Some(Angle::ZERO);
                pattern_angle[v] = Some(Angle::ZERO);
            }
        }
    }
    VerifierSecrets {
        theta,
        r: vec![0; n],
        dummy_value,
        dummy_delta,
        pattern_angle,
        seed: 0,
    }
}

fn line_instance_with(n: usize, trap: usize, dummy_values: &[u8]) -> FkInstance {
    let graph = line_graph_with_trap(n, trap).expect("line graph");
    let wires = crate::instance::wires_of_line(&graph);
    let secrets = zeroed_secrets(&graph, dummy_values);
    FkInstance {
        graph,
        wires,
        secrets,
    }
}

struct CoupledWalk<'a> {
    inst: &'a FkInstance,
    z_qubit: usize,
}

impl<'a> CoupledWalk<'a> {
    /// Sum of branch weights on which the deviated run accepts while its
    /// decoded output differs from the honest run's.
    fn accept_and_incorrect(&self) -> f64 {
        let ideal = self.inst.ideal_input().expect("input");
        let mut honest = ideal.clone();
        for &(a, b) in self.inst.graph.edges() {
            honest.apply_cz(a, b).expect("cz");
        }
        let mut deviated = honest.clone();
        deviated.apply_pauli(self.z_qubit, Pauli::Z).expect("pauli");
        self.walk(
            honest,
            deviated,
            VerifierMachine::new(self.inst),
            VerifierMachine::new(self.inst),
            1.0,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        honest: PureState,
        deviated: PureState,
        ver_h: VerifierMachine<'a>,
        ver_d: VerifierMachine<'a>,
        weight: f64,
    ) -> f64 {
        if weight < 1e-15 {
            return 0.0;
        }
        let (Some((vh, delta_h)), Some((vd, delta_d))) =
            (ver_h.next_request(), ver_d.next_request())
        else {
            // both runs complete: score the pair
            let th = ver_h.finish();
            let td = ver_d.finish();
            let incorrect = td.verdict == Verdict::Accept && td.output != th.output;
            return if incorrect { weight } else { 0.0 };
        };
        assert_eq!(vh, vd, "runs follow the same public order");

        // Both registers consume qubits in the same order, so the live
        // index of the pending vertex is the same in both.
        let live = live_index(self.inst, &ver_h);
        let ph = honest.prob_xy_zero(live, delta_h).expect("prob");
        let pd = deviated.prob_xy_zero(live, delta_d).expect("prob");

        // b = [u >= p0]: split [0,1) at the two thresholds.
        let lo = ph.min(pd);
        let hi = ph.max(pd);
        let mut total = 0.0;
        let segments: [(f64, u8, u8); 3] = [
            (lo, 0, 0),
            (hi - lo, u8::from(ph <= pd), u8::from(pd < ph)),
            (1.0 - hi, 1, 1),
        ];
        for (len, bh, bd) in segments {
            if len < 1e-15 {
                continue;
            }
            let mut h = honest.clone();
            let mut d = deviated.clone();
            h.project_xy_remove(live, delta_h, bh).expect("project");
            d.project_xy_remove(live, delta_d, bd).expect("project");
            let mut nh = ver_h.clone();
            let mut nd = ver_d.clone();
            nh.submit(bh);
            nd.submit(bd);
            total += self.walk(h, d, nh, nd, weight * len);
        }
        total
    }
}

fn live_index(inst: &FkInstance, ver: &VerifierMachine<'_>) -> usize {
    // qubits are consumed in measurement-order; the pending vertex's live
    // index is its rank among the not-yet-measured vertices in vertex order
    let measured: std::collections::HashSet<usize> = inst.graph.measurement_order()
        [..ver.measured()]
        .iter()
        .copied()
        .collect();
    let (pending, _) = ver.next_request().expect("pending request");
    (0..pending).filter(|v| !measured.contains(v)).count()
}

/// Exact accept-and-incorrect probability of the strategy "insert Pauli Z
/// on `z_qubit` after entangling" on the `n`-qubit single-trap line,
/// marginalized over the uniform trap position and dummy values.
pub fn exact_p_incorrect_z_on(n: usize, z_qubit: usize) -> f64 {
    assert!(n >= 2 && z_qubit < n);
    let mut total = 0.0;
    for trap in 0..n {
        let n_dummies = usize::from(trap > 0) + usize::from(trap + 1 < n);
        let combos = 1usize << n_dummies;
        let mut trap_total = 0.0;
        for bits in 0..combos {
            let dummy_values: Vec<u8> =
                (0..n_dummies).map(|i| ((bits >> i) & 1) as u8).collect();
            let inst = line_instance_with(n, trap, &dummy_values);
            let walk = CoupledWalk {
                inst: &inst,
                z_qubit,
            };
            trap_total += walk.accept_and_incorrect();
        }
        total += trap_total / combos as f64;
    }
    total / n as f64
}
