//! Pure statevector registers and the operations the protocols need.

use crate::angle::{Angle, BlochVector};
use crate::channel::Pauli;
use crate::error::{QsimError, Result};
use crate::{C64, STATEVECTOR_QUBIT_CAP};
use rand::Rng;
use std::f64::consts::FRAC_1_SQRT_2;

/// A pure quantum state on `n` qubits, stored as `2^n` complex amplitudes.
///
/// Indices are big-endian in the qubit index (see the crate docs): qubit 0
/// is the most significant bit of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amps: Vec<C64>,
}

fn check_cap(n: usize) -> Result<()> {
    if n > STATEVECTOR_QUBIT_CAP {
        return Err(QsimError::CapExceeded {
            requested: n,
            cap: STATEVECTOR_QUBIT_CAP,
            representation: "statevector",
        });
    }
    Ok(())
}

impl PureState {
    /// `|0...0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Result<PureState> {
        check_cap(n)?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[0] = C64::new(1.0, 0.0);
        Ok(PureState { n, amps })
    }

    /// Build a state from raw amplitudes (length must be a power of two).
    /// The vector is normalized on entry if it is within tolerance of unit
    /// norm; otherwise this is an error.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<PureState> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(QsimError::Internal(format!(
                "amplitude vector length {len} is not a power of two"
            )));
        }
        let n = len.trailing_zeros() as usize;
        check_cap(n)?;
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-8 {
            return Err(QsimError::Internal(format!(
                "amplitude vector norm^2 = {norm2}, not 1"
            )));
        }
        let mut s = PureState { n, amps };
        s.renormalize();
        Ok(s)
    }

    /// Tensor product of single-qubit states, each given as `(a0, a1)`.
    /// Built by in-place doubling from the back: one allocation total.
    pub fn product(qubits: &[(C64, C64)]) -> Result<PureState> {
        check_cap(qubits.len())?;
        let n = qubits.len();
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[0] = C64::new(1.0, 0.0);
        for (k, &(a0, a1)) in qubits.iter().enumerate() {
            for i in (0..1usize << k).rev() {
                let v = amps[i];
                amps[2 * i] = v * a0;
                amps[2 * i + 1] = v * a1;
            }
        }
        Ok(PureState { n, amps })
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        check_cap(self.n + other.n)?;
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for &a in &self.amps {
            for &b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(PureState {
            n: self.n + other.n,
            amps,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// Bit of `index` belonging to `qubit` under the big-endian convention.
    #[inline]
    pub fn bit_of(&self, index: usize, qubit: usize) -> usize {
        (index >> (self.n - 1 - qubit)) & 1
    }

    #[inline]
    fn stride(&self, qubit: usize) -> usize {
        1 << (self.n - 1 - qubit)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(QsimError::QubitOutOfRange {
                index: q,
                n_qubits: self.n,
            });
        }
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn renormalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            let inv = 1.0 / n;
            for a in &mut self.amps {
                *a *= inv;
            }
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.n != other.n {
            return Err(QsimError::DimensionMismatch {
                left: self.amps.len(),
                right: other.amps.len(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|^2`, a phase-insensitive overlap.
    pub fn overlap(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Controlled-Z between two distinct qubits: phase -1 on the `|11⟩`
    /// component of the pair. Only the affected quarter of the amplitudes
    /// is visited.
    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(QsimError::Internal(
                "controlled-Z requires two distinct qubits".into(),
            ));
        }
        let hi = self.stride(a.min(b));
        let lo = self.stride(a.max(b));
        let dim = self.amps.len();
        let mut base_hi = hi;
        while base_hi < dim {
            let mut base = base_hi + lo;
            while base < base_hi + hi {
                for amp in &mut self.amps[base..base + lo] {
                    *amp = -*amp;
                }
                base += 2 * lo;
            }
            base_hi += 2 * hi;
        }
        Ok(())
    }

    /// Apply a single-qubit operator given as `[[m00, m01], [m10, m11]]`.
    pub fn apply_single(&mut self, q: usize, m: [[C64; 2]; 2]) -> Result<()> {
        self.check_qubit(q)?;
        let s = self.stride(q);
        for chunk in self.amps.chunks_exact_mut(2 * s) {
            let (lo, hi) = chunk.split_at_mut(s);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let a0 = *a;
                let a1 = *b;
                *a = m[0][0] * a0 + m[0][1] * a1;
                *b = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    /// Apply a two-qubit operator on qubits `(a, b)`; the 4x4 matrix acts on
    /// basis `|bit_a bit_b⟩` with `bit_a` the high bit.
    pub fn apply_two(&mut self, a: usize, b: usize, m: [[C64; 4]; 4]) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(QsimError::Internal(
                "two-qubit operator requires distinct qubits".into(),
            ));
        }
        let sa = self.stride(a);
        let sb = self.stride(b);
        for idx in 0..self.amps.len() {
            if idx & sa == 0 && idx & sb == 0 {
                let i = [idx, idx | sb, idx | sa, idx | sa | sb];
                let v = [self.amps[i[0]], self.amps[i[1]], self.amps[i[2]], self.amps[i[3]]];
                for r in 0..4 {
                    let mut acc = C64::new(0.0, 0.0);
                    for c in 0..4 {
                        acc += m[r][c] * v[c];
                    }
                    self.amps[i[r]] = acc;
                }
            }
        }
        Ok(())
    }

    /// Apply a Pauli operator to one qubit (exact phases kept).
    pub fn apply_pauli(&mut self, q: usize, p: Pauli) -> Result<()> {
        self.check_qubit(q)?;
        let s = self.stride(q);
        match p {
            Pauli::I => {}
            Pauli::X => {
                for idx in 0..self.amps.len() {
                    if idx & s == 0 {
                        self.amps.swap(idx, idx | s);
                    }
                }
            }
            Pauli::Y => {
                let i = C64::new(0.0, 1.0);
                for idx in 0..self.amps.len() {
                    if idx & s == 0 {
                        let a0 = self.amps[idx];
                        let a1 = self.amps[idx | s];
                        self.amps[idx] = -i * a1;
                        self.amps[idx | s] = i * a0;
                    }
                }
            }
            Pauli::Z => {
                for (idx, amp) in self.amps.iter_mut().enumerate() {
                    if idx & s != 0 {
                        *amp = -*amp;
                    }
                }
            }
        }
        Ok(())
    }

    /// Probability that an XY-plane measurement at angle `delta` on `q`
    /// yields outcome 0 (projection onto `|+_delta⟩`).
    pub fn prob_xy_zero(&self, q: usize, delta: Angle) -> Result<f64> {
        self.check_qubit(q)?;
        let s = self.stride(q);
        let phase_conj = delta.phase().conj();
        let mut p = 0.0;
        for chunk in self.amps.chunks_exact(2 * s) {
            let (lo, hi) = chunk.split_at(s);
            for (a, b) in lo.iter().zip(hi) {
                p += (a + phase_conj * b).norm_sqr();
            }
        }
        Ok((0.5 * p).clamp(0.0, 1.0))
    }

    /// Measure qubit `q` in the `{|+_delta⟩, |-_delta⟩}` basis. Outcome 0
    /// projects onto `|+_delta⟩`. The qubit is consumed: it is removed from
    /// the register and all later qubit indices shift down by one.
    pub fn measure_xy_remove(&mut self, q: usize, delta: Angle, rng: &mut impl Rng) -> Result<u8> {
        let p0 = self.prob_xy_zero(q, delta)?;
        let u: f64 = rng.random();
        let outcome = u8::from(u >= p0);
        self.project_xy_remove(q, delta, outcome)?;
        Ok(outcome)
    }

    /// Project qubit `q` onto the XY-basis outcome and remove it. The
    /// surviving amplitudes are compacted in place; no allocation.
    pub fn project_xy_remove(&mut self, q: usize, delta: Angle, outcome: u8) -> Result<()> {
        self.check_qubit(q)?;
        let s = self.stride(q);
        // ⟨outcome_delta| applied to the qubit: 0 -> (⟨0| + e^{-i d}⟨1|)/√2,
        // 1 -> (⟨0| - e^{-i d}⟨1|)/√2.
        let sign = if outcome == 0 { 1.0 } else { -1.0 };
        let phase_conj = delta.phase().conj() * sign;
        let mut norm2 = 0.0;
        let mut write = 0;
        let dim = self.amps.len();
        let mut i0 = 0;
        while i0 < dim {
            for idx in i0..i0 + s {
                let c = (self.amps[idx] + phase_conj * self.amps[idx + s]) * FRAC_1_SQRT_2;
                norm2 += c.norm_sqr();
                self.amps[write] = c;
                write += 1;
            }
            i0 += 2 * s;
        }
        self.amps.truncate(write);
        if norm2 < 1e-12 {
            return Err(QsimError::Internal(
                "projection onto a zero-probability branch".into(),
            ));
        }
        let inv = 1.0 / norm2.sqrt();
        for a in &mut self.amps {
            *a *= inv;
        }
        self.n -= 1;
        Ok(())
    }

    /// Probability that the projective measurement along `v` on qubit `q`
    /// yields the +1 outcome, i.e. `⟨ψ| (I + v·σ)/2 |ψ⟩` on that qubit.
    pub fn prob_bloch_plus(&self, q: usize, v: BlochVector) -> Result<f64> {
        self.check_qubit(q)?;
        let s = self.stride(q);
        // (I + v·σ)/2 = [[1+z, x-iy], [x+iy, 1-z]] / 2
        let m00 = 0.5 * (1.0 + v.z);
        let m11 = 0.5 * (1.0 - v.z);
        let m01 = C64::new(0.5 * v.x, -0.5 * v.y);
        let mut p = 0.0;
        for idx in 0..self.amps.len() {
            if idx & s == 0 {
                let a0 = self.amps[idx];
                let a1 = self.amps[idx | s];
                // ⟨a|P|a⟩ restricted to the pair
                p += m00 * a0.norm_sqr()
                    + m11 * a1.norm_sqr()
                    + 2.0 * (m01 * a1 * a0.conj()).re;
            }
        }
        Ok(p.clamp(0.0, 1.0))
    }

    /// Measure qubit `q` along the Bloch direction `v`; returns +1 or -1 and
    /// collapses the register in place (the qubit stays in the register).
    pub fn measure_bloch(&mut self, q: usize, v: BlochVector, rng: &mut impl Rng) -> Result<i8> {
        let p_plus = self.prob_bloch_plus(q, v)?;
        let u: f64 = rng.random();
        let sign: i8 = if u < p_plus { 1 } else { -1 };
        self.project_bloch(q, v, sign)?;
        Ok(sign)
    }

    /// Project qubit `q` onto the ±1 eigenspace of `v·σ` and renormalize.
    pub fn project_bloch(&mut self, q: usize, v: BlochVector, sign: i8) -> Result<()> {
        self.check_qubit(q)?;
        let s = f64::from(sign);
        let m00 = C64::new(0.5 * (1.0 + s * v.z), 0.0);
        let m11 = C64::new(0.5 * (1.0 - s * v.z), 0.0);
        let m01 = C64::new(0.5 * s * v.x, -0.5 * s * v.y);
        let m10 = m01.conj();
        self.apply_single(q, [[m00, m01], [m10, m11]])?;
        let norm2 = self.norm_sqr();
        if norm2 < 1e-12 {
            return Err(QsimError::Internal(
                "projection onto a zero-probability branch".into(),
            ));
        }
        self.renormalize();
        Ok(())
    }

    /// Reflection about the XY plane of the Bloch sphere, applied to every
    /// qubit: complex-conjugate the amplitudes in the computational basis,
    /// then apply X to each qubit. On Bloch vectors this is (x,y,z) -> (x,y,-z).
    pub fn reflect_xy(&mut self) {
        let full = self.amps.len() - 1;
        let mut next = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (idx, amp) in self.amps.iter().enumerate() {
            next[idx ^ full] = amp.conj();
        }
        self.amps = next;
    }

    /// JSON debug dump (amplitude list plus the endianness tag) for fixtures.
    pub fn debug_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n_qubits": self.n,
            "qubit_order": "big-endian",
            "amplitudes": self.amps.iter().map(|a| vec![a.re, a.im]).collect::<Vec<_>>(),
        })
    }

    /// Haar-ish random pure state (normalized complex Gaussian amplitudes);
    /// used by randomized property suites.
    pub fn random(n: usize, rng: &mut impl Rng) -> Result<PureState> {
        check_cap(n)?;
        let dim = 1usize << n;
        let mut amps = Vec::with_capacity(dim);
        for _ in 0..dim {
            // Box-Muller pairs; rand's StandardNormal lives in rand_distr,
            // which is not needed elsewhere, so roll the two lines here.
            let u1: f64 = rng.random::<f64>().max(1e-300);
            let u2: f64 = rng.random();
            let r = (-2.0 * u1.ln()).sqrt();
            amps.push(C64::new(
                r * (2.0 * std::f64::consts::PI * u2).cos(),
                r * (2.0 * std::f64::consts::PI * u2).sin(),
            ));
        }
        let mut s = PureState { n, amps };
        s.renormalize();
        Ok(s)
    }
}

/// `|+_theta⟩ = (|0⟩ + e^{i theta}|1⟩)/√2` on one qubit.
pub fn plus_theta(theta: Angle) -> PureState {
    PureState {
        n: 1,
        amps: vec![
            C64::new(FRAC_1_SQRT_2, 0.0),
            theta.phase() * FRAC_1_SQRT_2,
        ],
    }
}

/// The computational-basis single-qubit state `|b⟩`.
pub fn basis_qubit(b: u8) -> PureState {
    let mut amps = vec![C64::new(0.0, 0.0); 2];
    amps[usize::from(b & 1)] = C64::new(1.0, 0.0);
    PureState { n: 1, amps }
}

/// The two maximally entangled states used by the protocols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellKind {
    /// `(|00⟩ + |11⟩)/√2`
    PhiPlus,
    /// `(|01⟩ + |10⟩)/√2`
    PsiPlus,
}

/// Construct a Bell state on two qubits.
pub fn bell_state(kind: BellKind) -> PureState {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let z = C64::new(0.0, 0.0);
    let amps = match kind {
        BellKind::PhiPlus => vec![h, z, z, h],
        BellKind::PsiPlus => vec![z, h, h, z],
    };
    PureState { n: 2, amps }
}
