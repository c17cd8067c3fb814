//! Gate-count, qubit and T-gate accounting.
//!
//! T-cost rules per gate kind (rotation synthesis costs
//! `ceil(4·log2(1/ε) + 11)` T gates, a Toffoli costs 2):
//!
//! | kind             | rotations | Toffolis      |
//! |------------------|-----------|---------------|
//! | RY, RZ           | 1 (0 at multiples of π/2) | 0 |
//! | CP               | 1         | 2             |
//! | CCP              | 1         | 4             |
//! | TOFFOLI, CSWAP   | 0         | 1             |
//! | MCX, c controls  | 0         | 2(c − 2) + 1  |
//! | X, H, CX         | 0         | 0             |
//!
//! A k-qubit diagonal phase is an AND of its qubits into a scratch qubit
//! (k − 1 Toffolis), one rotation, and the uncompute.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::builder::{
    build_algorithm1_spec, build_amplified_spec, core_layout, placeholder_momenta, BuildOptions, Spec,
};
use crate::circuit::{mcx_toffoli_cost, Circuit, Gate, GateCounts, GateKind};
use crate::error::ResourceError;

pub const T_PER_TOFFOLI: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepetitionPolicy {
    /// `M!` attempts.
    WorstCaseFactorial,
    /// `ceil(√(M!))` attempts.
    AmplifiedSqrt,
    /// `ceil(1/p)` attempts.
    Measured(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResourceModel {
    pub epsilon: f64,
    pub repetitions: RepetitionPolicy,
}

impl Default for ResourceModel {
    fn default() -> Self {
        Self {
            epsilon: 1e-10,
            repetitions: RepetitionPolicy::WorstCaseFactorial,
        }
    }
}

impl ResourceModel {
    pub fn new(epsilon: f64, repetitions: RepetitionPolicy) -> Result<Self, ResourceError> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(ResourceError::BadEpsilon(epsilon));
        }
        if let RepetitionPolicy::Measured(p) = repetitions {
            if !(p > 0.0 && p <= 1.0) {
                return Err(ResourceError::BadProbability(p));
            }
        }
        Ok(Self { epsilon, repetitions })
    }

    pub fn t_per_rotation(&self) -> u64 {
        (4.0 * (1.0 / self.epsilon).log2() + 11.0).ceil() as u64
    }

    /// Expected number of attempts for an `M`-down-spin preparation.
    pub fn repetitions_for(&self, m: usize) -> Result<u64, ResourceError> {
        match self.repetitions {
            RepetitionPolicy::WorstCaseFactorial => {
                Ok(u64::try_from(factorial(m)?).map_err(|_| ResourceError::FactorialGuard(m))?)
            }
            RepetitionPolicy::AmplifiedSqrt => {
                let f = factorial(m)?;
                // integer ceil(sqrt(f))
                let mut r = (f as f64).sqrt() as u128;
                while r * r > f {
                    r -= 1;
                }
                while r * r < f {
                    r += 1;
                }
                Ok(r as u64)
            }
            RepetitionPolicy::Measured(p) => Ok((1.0 / p).ceil() as u64),
        }
    }
}

/// Rotation and Toffoli content of one gate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCost {
    pub rotations: u64,
    pub toffolis: u64,
}

impl std::ops::AddAssign for GateCost {
    fn add_assign(&mut self, o: Self) {
        self.rotations += o.rotations;
        self.toffolis += o.toffolis;
    }
}

fn is_clifford_angle(a: f64) -> bool {
    let r = a.rem_euclid(FRAC_PI_2);
    r < 1e-12 || FRAC_PI_2 - r < 1e-12
}

pub fn gate_cost(g: &Gate) -> GateCost {
    let (rotations, toffolis) = match g.kind {
        GateKind::X | GateKind::H | GateKind::CX => (0, 0),
        GateKind::RY | GateKind::RZ => {
            if is_clifford_angle(g.angle.unwrap_or(0.0)) {
                (0, 0)
            } else {
                (1, 0)
            }
        }
        GateKind::CP => (1, 2),
        GateKind::CCP => (1, 4),
        GateKind::Toffoli | GateKind::CSwap => (0, 1),
        GateKind::Mcx => (0, mcx_toffoli_cost(g.controls.len()) as u64),
    };
    GateCost { rotations, toffolis }
}

pub fn circuit_cost(gates: &[Gate]) -> GateCost {
    let mut total = GateCost::default();
    for g in gates {
        total += gate_cost(g);
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Measured,
    Formula,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub counts: GateCounts,
    pub depth: usize,
    pub qubits: usize,
    pub rotations: u64,
    pub toffolis: u64,
    pub t_per_rotation: u64,
    pub t_single_run: u64,
    pub repetitions: u64,
    pub t_total: u64,
    pub provenance: Provenance,
}

/// Costs a built circuit.
pub fn estimate(circuit: &Circuit, model: &ResourceModel) -> Result<ResourceReport, ResourceError> {
    let cost = circuit_cost(circuit.gates());
    let t_rot = model.t_per_rotation();
    let t_single_run = cost.rotations * t_rot + cost.toffolis * T_PER_TOFFOLI;
    let repetitions = model.repetitions_for(circuit.layout.m)?;
    Ok(ResourceReport {
        l: circuit.layout.l,
        m: circuit.layout.m,
        counts: circuit.count_gates(),
        depth: circuit.depth(),
        qubits: circuit.n_qubits(),
        rotations: cost.rotations,
        toffolis: cost.toffolis,
        t_per_rotation: t_rot,
        t_single_run,
        repetitions,
        t_total: t_single_run * repetitions,
        provenance: Provenance::Measured,
    })
}

/// Builds the preparation circuit for `(L, M)` with placeholder momenta and
/// costs it; counts do not depend on the momentum values.
pub fn estimate_structure(
    l: usize,
    m: usize,
    opts: &BuildOptions,
    model: &ResourceModel,
) -> Result<ResourceReport, ResourceError> {
    estimate(&structure_circuit(l, m, opts)?, model)
}

pub fn structure_circuit(l: usize, m: usize, opts: &BuildOptions) -> Result<Circuit, ResourceError> {
    if m == 0 || m > l {
        return Err(ResourceError::InvalidSize(format!(
            "need 1 ≤ M ≤ L, got L = {l}, M = {m}"
        )));
    }
    let (momenta, theta) = placeholder_momenta(l, m);
    let spec = Spec {
        l,
        m,
        momenta: &momenta,
        theta: &theta,
    };
    Ok(if opts.amplification_rounds == 0 {
        build_algorithm1_spec(&spec, opts, core_layout(l, m))
    } else {
        build_amplified_spec(&spec, opts.amplification_rounds, opts)
    })
}

/// Closed-form counts for the unamplified circuit without edge skipping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaCounts {
    /// `M³/3 − M²/2 + M/6` phase gates that imprint `A_P`.
    pub ap_cp: u64,
    /// `M²·L` faucet phase gates.
    pub faucet_phase: u64,
    pub total_cp_like: u64,
    /// `L + M² + M + 1`.
    pub qubits_core: u64,
    /// `L·(3M − 4)` for `M ≥ 2`, with one work qubit.
    pub faucet_toffoli: u64,
}

pub fn formula_counts(l: usize, m: usize) -> Result<FormulaCounts, ResourceError> {
    if m == 0 || m > l {
        return Err(ResourceError::InvalidSize(format!(
            "need 1 ≤ M ≤ L, got L = {l}, M = {m}"
        )));
    }
    let (l, m) = (l as u64, m as u64);
    let ap_cp = (m - 1) * m * (2 * m - 1) / 6;
    let faucet_phase = m * m * l;
    Ok(FormulaCounts {
        ap_cp,
        faucet_phase,
        total_cp_like: ap_cp + faucet_phase,
        qubits_core: l + m * m + m + 1,
        faucet_toffoli: if m >= 2 { l * (3 * m - 4) } else { 0 },
    })
}

/// Controlled-phase counts of the two alternative constructions next to the
/// preparation circuit's own, as exact integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternativeCosts {
    /// `M!·C(L, M)`: one multi-controlled phase per sector term and label.
    pub direct_phasing: u128,
    /// `M!·L·M`.
    pub compressed_label_faucet: u128,
    pub algorithm1: u128,
}

pub const MAX_ALTERNATIVE_M: usize = 20;

pub fn alternative_costs(l: usize, m: usize) -> Result<AlternativeCosts, ResourceError> {
    if m > MAX_ALTERNATIVE_M {
        return Err(ResourceError::FactorialGuard(m));
    }
    let f = formula_counts(l, m)?;
    let overflow = || ResourceError::Overflow { l, m };
    let fact = factorial(m)?;
    let direct_phasing = fact
        .checked_mul(binomial_u128(l, m).ok_or_else(overflow)?)
        .ok_or_else(overflow)?;
    let compressed_label_faucet = fact
        .checked_mul(l as u128)
        .and_then(|v| v.checked_mul(m as u128))
        .ok_or_else(overflow)?;
    Ok(AlternativeCosts {
        direct_phasing,
        compressed_label_faucet,
        algorithm1: f.total_cp_like as u128,
    })
}

fn factorial(m: usize) -> Result<u128, ResourceError> {
    if m > MAX_ALTERNATIVE_M {
        return Err(ResourceError::FactorialGuard(m));
    }
    Ok((1..=m as u128).product())
}

/// Exact `C(n, k)`, `None` on overflow.
fn binomial_u128(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc·(n − i) is divisible by (i + 1) after the multiplication
        acc = acc.checked_mul(n as u128 - i)? / (i + 1);
    }
    Some(acc)
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::QubitLayout;

    #[test]
    fn t_per_rotation_at_default_epsilon() {
        // 4·log2(1e10) + 11 = 143.877…
        assert_eq!(ResourceModel::default().t_per_rotation(), 144);
        assert!(ResourceModel::new(0.0, RepetitionPolicy::AmplifiedSqrt).is_err());
        assert!(ResourceModel::new(1e-3, RepetitionPolicy::Measured(0.0)).is_err());
    }

    #[test]
    fn clifford_circuit_is_free() {
        let mut c = Circuit::new(QubitLayout::new(3, 0, 0, 0));
        c.push(Gate::h(0));
        c.push(Gate::cx(0, 1));
        c.push(Gate::x(2));
        c.push(Gate::rz(1, std::f64::consts::PI));
        c.push(Gate::ry(2, -FRAC_PI_2));
        let r = estimate(&c, &ResourceModel::default()).unwrap();
        assert_eq!(r.t_single_run, 0);
        assert_eq!(r.t_total, 0);
    }

    #[test]
    fn repetition_policies() {
        let worst = ResourceModel::default();
        assert_eq!(worst.repetitions_for(5).unwrap(), 120);
        let amp = ResourceModel::new(1e-10, RepetitionPolicy::AmplifiedSqrt).unwrap();
        assert_eq!(amp.repetitions_for(5).unwrap(), 11);
        assert_eq!(amp.repetitions_for(4).unwrap(), 5);
        assert_eq!(amp.repetitions_for(1).unwrap(), 1);
        let meas = ResourceModel::new(1e-10, RepetitionPolicy::Measured(0.3)).unwrap();
        assert_eq!(meas.repetitions_for(3).unwrap(), 4);
    }

    #[test]
    fn formula_values() {
        let f = formula_counts(100, 5).unwrap();
        assert_eq!(f.total_cp_like, 2530);
        assert_eq!(f.ap_cp, 30);
        assert_eq!(formula_counts(7, 3).unwrap().ap_cp, 5);
        assert_eq!(formula_counts(4, 1).unwrap().ap_cp, 0);
        assert_eq!(f.qubits_core, 131);
        assert!(formula_counts(3, 0).is_err());
    }

    #[test]
    fn alternative_values() {
        let a = alternative_costs(100, 5).unwrap();
        assert_eq!(a.direct_phasing, 9_034_502_400);
        assert_eq!(a.compressed_label_faucet, 60_000);
        assert_eq!(a.algorithm1, 2530);
        let one = alternative_costs(9, 1).unwrap();
        assert_eq!(
            (one.direct_phasing, one.compressed_label_faucet, one.algorithm1),
            (9, 9, 9)
        );
        assert!(matches!(
            alternative_costs(30, 21),
            Err(ResourceError::FactorialGuard(21))
        ));
        assert!(matches!(
            alternative_costs(200, 20),
            Err(ResourceError::Overflow { .. })
        ));
    }

    #[test]
    fn exact_binomials() {
        assert_eq!(binomial_u128(100, 5), Some(75_287_520));
        assert_eq!(binomial_u128(62, 31), Some(465_428_353_255_261_088));
        assert_eq!(binomial_u128(3, 5), Some(0));
    }

    #[test]
    fn slope_of_line() {
        assert!((slope(&[1.0, 2.0, 3.0], &[5.0, 7.0, 9.0]) - 2.0).abs() < 1e-12);
    }
}
