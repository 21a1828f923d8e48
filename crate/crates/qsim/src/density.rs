//! Dense density matrices for subsystems small enough to afford them.

use crate::error::{QsimError, Result};
use crate::state::PureState;
use crate::{C64, DENSITY_QUBIT_CAP};
use nalgebra::DMatrix;

/// A density operator on `n` qubits, `2^n x 2^n`, big-endian qubit order.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    mat: DMatrix<C64>,
}

fn check_cap(n: usize) -> Result<()> {
    if n > DENSITY_QUBIT_CAP {
        return Err(QsimError::CapExceeded {
            requested: n,
            cap: DENSITY_QUBIT_CAP,
            representation: "density-matrix",
        });
    }
    Ok(())
}

impl DensityMatrix {
    /// `|ψ⟩⟨ψ|` from a pure state.
    pub fn from_pure(psi: &PureState) -> Result<DensityMatrix> {
        check_cap(psi.n_qubits())?;
        let amps = psi.amplitudes();
        let dim = amps.len();
        let mat = DMatrix::from_fn(dim, dim, |r, c| amps[r] * amps[c].conj());
        Ok(DensityMatrix {
            n: psi.n_qubits(),
            mat,
        })
    }

    /// Wrap a raw matrix, validating hermiticity, positivity and unit trace
    /// to within the crate tolerance (mild negative eigenvalues from
    /// float noise are not repaired, they are rejected).
    pub fn from_matrix(mat: DMatrix<C64>) -> Result<DensityMatrix> {
        let dim = mat.nrows();
        if dim == 0 || !dim.is_power_of_two() || mat.ncols() != dim {
            return Err(QsimError::NotDensityOperator(format!(
                "shape {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let n = dim.trailing_zeros() as usize;
        check_cap(n)?;
        let d = DensityMatrix { n, mat };
        d.validate()?;
        Ok(d)
    }

    /// Check the density-operator invariants, with tolerance 1e-10.
    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        let tr: C64 = (0..dim).map(|i| self.mat[(i, i)]).sum();
        if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
            return Err(QsimError::NotDensityOperator(format!("trace {tr}")));
        }
        for r in 0..dim {
            for c in r..dim {
                let diff = self.mat[(r, c)] - self.mat[(c, r)].conj();
                if diff.norm() > 1e-9 {
                    return Err(QsimError::NotDensityOperator(format!(
                        "not hermitian at ({r}, {c})"
                    )));
                }
            }
        }
        let eigs = self.eigenvalues();
        if let Some(min) = eigs.iter().cloned().reduce(f64::min) {
            if min < -1e-8 {
                return Err(QsimError::NotDensityOperator(format!(
                    "negative eigenvalue {min}"
                )));
            }
        }
        Ok(())
    }

    /// Maximally mixed state `I / 2^n`.
    pub fn maximally_mixed(n: usize) -> Result<DensityMatrix> {
        check_cap(n)?;
        let dim = 1usize << n;
        let mat = DMatrix::identity(dim, dim).scale(1.0 / dim as f64);
        Ok(DensityMatrix { n, mat })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.mat[(i, i)]).sum()
    }

    /// Real eigenvalue spectrum (the matrix is Hermitian by invariant).
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.mat.clone().symmetric_eigen().eigenvalues.iter().cloned().collect()
    }

    /// Purity `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        let m = &self.mat * &self.mat;
        (0..self.dim()).map(|i| m[(i, i)].re).sum()
    }

    /// The eigenvector of the largest eigenvalue, as a pure state; for a
    /// (numerically) pure density operator this recovers the state.
    pub fn dominant_eigenvector(&self) -> Result<(f64, PureState)> {
        let eig = self.mat.clone().symmetric_eigen();
        let (idx, &val) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).expect("real eigenvalues"))
            .expect("nonempty spectrum");
        let column: Vec<C64> = eig.eigenvectors.column(idx).iter().cloned().collect();
        let mut state = PureState::from_amplitudes(column)?;
        state.renormalize();
        Ok((val, state))
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        check_cap(self.n + other.n)?;
        Ok(DensityMatrix {
            n: self.n + other.n,
            mat: self.mat.kronecker(&other.mat),
        })
    }

    #[inline]
    fn qubit_mask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    pub(crate) fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(QsimError::QubitOutOfRange {
                index: q,
                n_qubits: self.n,
            });
        }
        Ok(())
    }

    /// Conjugate by a Pauli string: `ρ -> P ρ P†`. `swap_mask` collects the
    /// qubits carrying X or Y, `phase_mask` those carrying Y or Z; the sign
    /// of each element is `(-1)^{popcount((r ^ c) & phase_mask)}`.
    pub(crate) fn pauli_conjugate(&self, swap_mask: usize, phase_mask: usize) -> DMatrix<C64> {
        let dim = self.dim();
        DMatrix::from_fn(dim, dim, |r, c| {
            let src = self.mat[(r ^ swap_mask, c ^ swap_mask)];
            if ((r ^ c) & phase_mask).count_ones() % 2 == 1 {
                -src
            } else {
                src
            }
        })
    }

    pub(crate) fn masks_for(&self, q: usize, p: crate::channel::Pauli) -> (usize, usize) {
        use crate::channel::Pauli;
        let m = self.qubit_mask(q);
        match p {
            Pauli::I => (0, 0),
            Pauli::X => (m, 0),
            Pauli::Y => (m, m),
            Pauli::Z => (0, m),
        }
    }

    pub(crate) fn replace_matrix(&mut self, mat: DMatrix<C64>) {
        self.mat = mat;
    }

    /// Partial trace keeping the qubits where `keep[q]` is true; the result
    /// preserves the relative order of the kept qubits. The kept set must be
    /// a nonempty proper subset.
    pub fn partial_trace_keep(&self, keep: &[bool]) -> Result<DensityMatrix> {
        if keep.len() != self.n {
            return Err(QsimError::DimensionMismatch {
                left: keep.len(),
                right: self.n,
            });
        }
        let kept: Vec<usize> = (0..self.n).filter(|&q| keep[q]).collect();
        if kept.is_empty() || kept.len() == self.n {
            return Err(QsimError::InvalidSubsystemMask);
        }
        let traced: Vec<usize> = (0..self.n).filter(|&q| !keep[q]).collect();
        let kd = 1usize << kept.len();
        let td = 1usize << traced.len();
        let expand = |bits: usize, qs: &[usize]| -> usize {
            let mut idx = 0;
            for (pos, &q) in qs.iter().enumerate() {
                if bits >> (qs.len() - 1 - pos) & 1 == 1 {
                    idx |= 1 << (self.n - 1 - q);
                }
            }
            idx
        };
        let mut out = DMatrix::zeros(kd, kd);
        for r in 0..kd {
            let rbase = expand(r, &kept);
            for c in 0..kd {
                let cbase = expand(c, &kept);
                let mut acc = C64::new(0.0, 0.0);
                for t in 0..td {
                    let tb = expand(t, &traced);
                    acc += self.mat[(rbase | tb, cbase | tb)];
                }
                out[(r, c)] = acc;
            }
        }
        Ok(DensityMatrix {
            n: kept.len(),
            mat: out,
        })
    }

    /// Partial trace of a pure state without forming the full outer product.
    pub fn partial_trace_of_pure(psi: &PureState, keep: &[bool]) -> Result<DensityMatrix> {
        let n = psi.n_qubits();
        if keep.len() != n {
            return Err(QsimError::DimensionMismatch {
                left: keep.len(),
                right: n,
            });
        }
        let kept: Vec<usize> = (0..n).filter(|&q| keep[q]).collect();
        if kept.is_empty() || kept.len() == n {
            return Err(QsimError::InvalidSubsystemMask);
        }
        check_cap(kept.len())?;
        let traced: Vec<usize> = (0..n).filter(|&q| !keep[q]).collect();
        let kd = 1usize << kept.len();
        let td = 1usize << traced.len();
        let expand = |bits: usize, qs: &[usize]| -> usize {
            let mut idx = 0;
            for (pos, &q) in qs.iter().enumerate() {
                if bits >> (qs.len() - 1 - pos) & 1 == 1 {
                    idx |= 1 << (n - 1 - q);
                }
            }
            idx
        };
        let amps = psi.amplitudes();
        let mut out = DMatrix::zeros(kd, kd);
        for t in 0..td {
            let tb = expand(t, &traced);
            for r in 0..kd {
                let ar = amps[expand(r, &kept) | tb];
                if ar.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..kd {
                    out[(r, c)] += ar * amps[expand(c, &kept) | tb].conj();
                }
            }
        }
        Ok(DensityMatrix {
            n: kept.len(),
            mat: out,
        })
    }
}
