//! Dense state-vector simulation and post-selection on the label register.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bethe::{ExactBetheState, SectorBasis};
use crate::circuit::{Circuit, Gate, GateKind, QubitLayout};
use crate::error::SimError;

pub const DEFAULT_QUBIT_CAP: usize = 26;
pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits`.
    pub fn zero(n_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1usize << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self { n_qubits, amplitudes }
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut s = Self::zero(n_qubits);
        s.amplitudes[0] = Complex64::new(0.0, 0.0);
        s.amplitudes[index] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(SimError::BadLength(len));
        }
        Ok(Self {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&mut self, gate: &Gate) {
        apply_gate(&mut self.amplitudes, gate);
    }

    /// Probability that every qubit in `qubits` reads 0.
    pub fn prob_zero(&self, qubits: &[usize]) -> f64 {
        let mask = qubits.iter().fold(0usize, |m, &q| m | 1 << q);
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub cap: usize,
    /// Verify the norm after every gate.
    pub check_norm: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_QUBIT_CAP,
            check_norm: false,
        }
    }
}

/// Runs `circuit` on `initial` (default `|0…0⟩`).
pub fn run(circuit: &Circuit, initial: Option<StateVector>, opts: &RunOptions) -> Result<StateVector, SimError> {
    let n = circuit.n_qubits();
    if n > opts.cap {
        return Err(SimError::CapExceeded {
            needed: n,
            cap: opts.cap,
            l: circuit.layout.l,
            m: circuit.layout.m,
        });
    }
    let mut state = match initial {
        Some(s) if s.n_qubits != n => {
            return Err(SimError::QubitMismatch {
                expected: n,
                got: s.n_qubits,
            })
        }
        Some(s) => s,
        None => StateVector::zero(n),
    };
    for (i, g) in circuit.gates().iter().enumerate() {
        if let Some(q) = g.qubits().find(|&q| q >= n) {
            return Err(SimError::Circuit(crate::error::CircuitError::OutOfRange {
                qubit: q,
                total: n,
            }));
        }
        state.apply(g);
        if opts.check_norm {
            let norm = state.norm_sqr().sqrt();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(SimError::NormDrift { gate: i, norm });
            }
        }
    }
    Ok(state)
}

/// Calls `f` on every index whose `fixed` bits equal `value`, in increasing
/// order.
#[inline]
fn for_each_index(fixed: usize, value: usize, len: usize, mut f: impl FnMut(usize)) {
    let free = (len - 1) & !fixed;
    let mut s = 0usize;
    loop {
        f(s | value);
        if s == free {
            break;
        }
        s = s.wrapping_sub(free) & free;
    }
}

/// Applies one gate in place. Qubit `q` is bit `q` of the amplitude index.
pub fn apply_gate(amps: &mut [Complex64], gate: &Gate) {
    let len = amps.len();
    let mut cmask = 0usize;
    let mut cval = 0usize;
    for c in &gate.controls {
        cmask |= 1 << c.qubit;
        cval |= (c.active_value() as usize) << c.qubit;
    }
    let t = gate.targets[0];
    let tbit = 1usize << t;
    let fixed = cmask | tbit;
    let angle = gate.angle.unwrap_or(0.0);
    match gate.kind {
        GateKind::X | GateKind::CX | GateKind::Toffoli | GateKind::Mcx => {
            for_each_index(fixed, cval, len, |i| amps.swap(i, i | tbit));
        }
        GateKind::CSwap => {
            let ubit = 1usize << gate.targets[1];
            for_each_index(fixed | ubit, cval | tbit, len, |i| amps.swap(i, i ^ tbit ^ ubit));
        }
        GateKind::RZ => {
            let lo = Complex64::from_polar(1.0, -angle / 2.0);
            let hi = Complex64::from_polar(1.0, angle / 2.0);
            for_each_index(fixed, cval, len, |i| {
                amps[i] *= lo;
                amps[i | tbit] *= hi;
            });
        }
        GateKind::CP | GateKind::CCP => {
            let ph = Complex64::from_polar(1.0, angle);
            for_each_index(fixed, cval | tbit, len, |i| amps[i] *= ph);
        }
        GateKind::H => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            for_each_index(fixed, cval, len, |i| {
                let (a, b) = (amps[i], amps[i | tbit]);
                amps[i] = (a + b) * r;
                amps[i | tbit] = (a - b) * r;
            });
        }
        GateKind::RY => {
            let (s, c) = (angle / 2.0).sin_cos();
            for_each_index(fixed, cval, len, |i| {
                let (a, b) = (amps[i], amps[i | tbit]);
                amps[i] = a * c - b * s;
                amps[i | tbit] = a * s + b * c;
            });
        }
    }
}

/// Success-branch summary of a prepared state.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOutcome {
    /// Weight of the branch with every ancilla at 0.
    pub success_probability: f64,
    pub junk_norm: f64,
    /// Normalized system state over all 2^L configurations; `None` when the
    /// success branch is empty.
    pub post_state: Option<Vec<Complex64>>,
    /// `|⟨ψ_exact|post_state⟩|²`; `None` when undefined.
    pub fidelity: Option<f64>,
    /// Weight of the post-selected state outside the M-down-spin sector.
    pub leakage: f64,
}

impl SimulationOutcome {
    /// Post-selected state restricted to the sector basis.
    pub fn sector_state(&self, basis: &SectorBasis) -> Option<Vec<Complex64>> {
        self.post_state.as_ref().map(|p| basis.restrict(p).0)
    }
}

/// Projects onto `|0⟩` for every non-system qubit. With the system register
/// in the low bits, that branch is the first `2^L` amplitudes.
pub fn project_success(
    state: &StateVector,
    layout: &QubitLayout,
    exact: &ExactBetheState,
) -> Result<SimulationOutcome, SimError> {
    if state.n_qubits() != layout.total() {
        return Err(SimError::QubitMismatch {
            expected: layout.total(),
            got: state.n_qubits(),
        });
    }
    let dim = 1usize << layout.l;
    let branch = &state.amplitudes()[..dim];
    let p: f64 = branch.iter().map(|a| a.norm_sqr()).sum();
    let total = state.norm_sqr();
    let success_probability = p / total;
    let junk_norm = (total - p) / total;
    if p <= f64::MIN_POSITIVE {
        return Ok(SimulationOutcome {
            success_probability,
            junk_norm,
            post_state: None,
            fidelity: None,
            leakage: 0.0,
        });
    }
    let scale = 1.0 / p.sqrt();
    let post: Vec<Complex64> = branch.iter().map(|a| a * scale).collect();
    let basis = exact.basis();
    let (sector, leakage) = basis.restrict(&post);
    let overlap: Complex64 = exact.amplitudes.iter().zip(&sector).map(|(e, s)| e.conj() * s).sum();
    Ok(SimulationOutcome {
        success_probability,
        junk_norm,
        post_state: Some(post),
        fidelity: Some(overlap.norm_sqr()),
        leakage,
    })
}

/// Flat record for JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    pub success_probability: f64,
    pub fidelity: Option<f64>,
    pub junk_norm: f64,
    pub energy: Option<f64>,
    pub residual: Option<f64>,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub j_xy: f64,
    pub j_z: f64,
    pub quantum_numbers: Vec<String>,
    pub momenta: Vec<f64>,
    pub seed: u64,
    pub amplification_rounds: usize,
}

/// Draws the listed qubits from the exact marginal and collapses the state.
/// Bit `i` of the result is the outcome of `qubits[i]`.
pub fn sample_measurement(state: &mut StateVector, qubits: &[usize], seed: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    measure_with(state, qubits, &mut rng)
}

fn outcome_of(index: usize, qubits: &[usize]) -> u64 {
    qubits
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &q)| acc | (((index >> q) & 1) as u64) << i)
}

fn measure_with(state: &mut StateVector, qubits: &[usize], rng: &mut impl Rng) -> u64 {
    let total = state.norm_sqr();
    let r: f64 = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut chosen = None;
    let mut last_nonzero = 0;
    for (i, a) in state.amplitudes.iter().enumerate() {
        let w = a.norm_sqr();
        if w > 0.0 {
            last_nonzero = i;
            acc += w;
            if acc > r {
                chosen = Some(i);
                break;
            }
        }
    }
    let outcome = outcome_of(chosen.unwrap_or(last_nonzero), qubits);
    let mut kept = 0.0;
    for (i, a) in state.amplitudes.iter_mut().enumerate() {
        if outcome_of(i, qubits) == outcome {
            kept += a.norm_sqr();
        } else {
            *a = Complex64::new(0.0, 0.0);
        }
    }
    let scale = 1.0 / kept.sqrt();
    state.amplitudes.iter_mut().for_each(|a| *a *= scale);
    outcome
}

/// Outcome histogram of `shots` independent measurements of a fresh copy of
/// `state`, sampled from the marginal without collapsing `state`.
pub fn sample_counts(
    state: &StateVector,
    qubits: &[usize],
    shots: usize,
    seed: u64,
) -> std::collections::BTreeMap<u64, usize> {
    let mut marginal = std::collections::BTreeMap::<u64, f64>::new();
    for (i, a) in state.amplitudes.iter().enumerate() {
        let w = a.norm_sqr();
        if w > 0.0 {
            *marginal.entry(outcome_of(i, qubits)).or_insert(0.0) += w;
        }
    }
    let entries: Vec<(u64, f64)> = marginal.into_iter().collect();
    let total: f64 = entries.iter().map(|e| e.1).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = std::collections::BTreeMap::new();
    for _ in 0..shots {
        let r = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        let mut pick = entries.last().map(|e| e.0).unwrap_or(0);
        for &(o, w) in &entries {
            acc += w;
            if acc > r {
                pick = o;
                break;
            }
        }
        *counts.entry(pick).or_insert(0) += 1;
    }
    counts
}
