//! Shared fixtures for the benchmarks in `benches/`.

use betheprep_core::bethe::{enumerate_solutions, solve_bethe};
use betheprep_core::{BetheSolution, ModelParams, QuantumNumber};

pub fn params(l: usize, m: usize, jz: f64) -> ModelParams {
    ModelParams::new(l, m, 1.0, jz).expect("valid parameters")
}

/// Converged solution for an explicit quantum-number list.
pub fn solution(l: usize, m: usize, jz: f64, quantum_numbers: &str) -> BetheSolution {
    let qn = QuantumNumber::parse_list(quantum_numbers).expect("parsable quantum numbers");
    let s = solve_bethe(&params(l, m, jz), &qn).expect("solvable");
    assert!(s.converged, "fixture {quantum_numbers} did not converge");
    s
}

/// First enumerated solution at `(L, M, J_z)`.
pub fn first_solution(l: usize, m: usize, jz: f64) -> BetheSolution {
    enumerate_solutions(&params(l, m, jz))
        .solutions
        .into_iter()
        .next()
        .expect("at least one solution")
}
