use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use betheprep_core::bethe::BetheSolution;
use betheprep_core::circuit::Section;
use betheprep_core::resources::{AlternativeCosts, ResourceReport};
use betheprep_core::sim::OutcomeRecord;
use betheprep_core::GateKind;
use serde::Serialize;

use crate::error::CliError;

/// Space-separated list, for CSV cells.
pub fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Serialize)]
pub struct SolutionRow {
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub j_xy: f64,
    pub j_z: f64,
    pub quantum_numbers: String,
    pub momenta: String,
    pub k_reduced: String,
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl From<&BetheSolution> for SolutionRow {
    fn from(s: &BetheSolution) -> Self {
        Self {
            l: s.l(),
            m: s.m(),
            j_xy: s.params.j_xy(),
            j_z: s.params.j_z(),
            quantum_numbers: join(&s.quantum_numbers),
            momenta: join(&s.momenta),
            k_reduced: join(&s.sorted_reduced_momenta()),
            residual: s.residual,
            converged: s.converged,
            iterations: s.iterations,
        }
    }
}

/// Outcome of one simulated preparation.
#[derive(Debug, Serialize)]
pub struct RunRecord {
    #[serde(flatten)]
    pub outcome: OutcomeRecord,
    pub leakage: f64,
    /// Label-register bit strings (label qubit 0 first) and their counts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label_counts: Option<BTreeMap<String, usize>>,
}

#[derive(Debug, Serialize)]
pub struct OutcomeRow {
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub j_xy: f64,
    pub j_z: f64,
    pub quantum_numbers: String,
    pub k_reduced: String,
    pub energy: Option<f64>,
    pub success_probability: f64,
    pub fidelity: Option<f64>,
    pub residual: Option<f64>,
    pub amplification_rounds: usize,
}

impl OutcomeRow {
    pub fn new(r: &RunRecord, solution: &BetheSolution) -> Self {
        let o = &r.outcome;
        Self {
            l: o.l,
            m: o.m,
            j_xy: o.j_xy,
            j_z: o.j_z,
            quantum_numbers: o.quantum_numbers.join(" "),
            k_reduced: join(&solution.sorted_reduced_momenta()),
            energy: o.energy,
            success_probability: o.success_probability,
            fidelity: o.fidelity,
            residual: o.residual,
            amplification_rounds: o.amplification_rounds,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BuildSummary {
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub qubits: usize,
    pub gates: usize,
    pub depth: usize,
    pub counts: BTreeMap<String, usize>,
    pub sections: Vec<Section>,
}

#[derive(Debug, Serialize)]
pub struct EstimateRow {
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub qubits: usize,
    pub depth: usize,
    pub cp: usize,
    pub ccp: usize,
    pub cp_like: usize,
    pub toffoli_gates: usize,
    pub mcx_gates: usize,
    pub rotations: u64,
    pub toffolis: u64,
    pub t_per_rotation: u64,
    pub t_single_run: u64,
    pub repetitions: u64,
    pub t_total: u64,
}

impl From<&ResourceReport> for EstimateRow {
    fn from(r: &ResourceReport) -> Self {
        Self {
            l: r.l,
            m: r.m,
            qubits: r.qubits,
            depth: r.depth,
            cp: r.counts.get(GateKind::CP),
            ccp: r.counts.get(GateKind::CCP),
            cp_like: r.counts.cp_like(),
            toffoli_gates: r.counts.get(GateKind::Toffoli),
            mcx_gates: r.counts.get(GateKind::Mcx),
            rotations: r.rotations,
            toffolis: r.toffolis,
            t_per_rotation: r.t_per_rotation,
            t_single_run: r.t_single_run,
            repetitions: r.repetitions,
            t_total: r.t_total,
        }
    }
}

/// Estimate row with alternative-method costs. The costs are decimal
/// strings because they can exceed 64 bits.
#[derive(Debug, Serialize)]
pub struct CompareRow {
    #[serde(flatten)]
    pub estimate: EstimateRow,
    pub direct_phasing: String,
    pub compressed_label_faucet: String,
    pub algorithm1: String,
}

impl CompareRow {
    pub fn new(estimate: EstimateRow, alt: &AlternativeCosts) -> Self {
        Self {
            estimate,
            direct_phasing: alt.direct_phasing.to_string(),
            compressed_label_faucet: alt.compressed_label_faucet.to_string(),
            algorithm1: alt.algorithm1.to_string(),
        }
    }
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Other(e.into()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn csv<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut w = ::csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Other(e.into()))?;
    }
    w.into_inner().map_err(|e| CliError::Other(anyhow::anyhow!("{e}")))
}

/// Writes to `out`, or stdout when absent.
pub fn emit(out: Option<&PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, bytes),
        None => std::io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|e| CliError::Io(format!("writing to stdout: {e}"))),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}
