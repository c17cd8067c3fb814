#![allow(dead_code)]

use betheprep_core::bethe::{
    apply_hamiltonian, enumerate_solutions, exact_state, solve_bethe, BetheSolution, ExactBetheState, ModelParams,
    QuantumNumber, SectorBasis,
};
use betheprep_core::builder::{build, BuildOptions};
use betheprep_core::sim::{project_success, run, RunOptions, SimulationOutcome};
use betheprep_core::Complex64;
use nalgebra::DMatrix;

pub const FIXTURE_K: [f64; 2] = [1.14676529, 3.56562369];

pub fn params(l: usize, m: usize, jz: f64) -> ModelParams {
    ModelParams::new(l, m, 1.0, jz).unwrap()
}

pub fn solve(l: usize, m: usize, jz: f64, qn: &str) -> BetheSolution {
    let s = solve_bethe(&params(l, m, jz), &QuantumNumber::parse_list(qn).unwrap()).unwrap();
    assert!(s.converged, "({l},{m}) {qn} did not converge: {}", s.residual);
    s
}

pub fn four_site_fixture() -> BetheSolution {
    solve(4, 2, -0.5, "-3/2,1/2")
}

pub fn solutions(l: usize, m: usize, jz: f64) -> Vec<BetheSolution> {
    enumerate_solutions(&params(l, m, jz)).solutions
}

/// Runs the built circuit and post-selects.
pub fn prepare(solution: &BetheSolution, opts: &BuildOptions) -> (SimulationOutcome, ExactBetheState) {
    let circuit = build(solution, opts).unwrap();
    let state = run(&circuit, None, &RunOptions::default()).unwrap();
    let exact = exact_state(solution).unwrap();
    let outcome = project_success(&state, &circuit.layout, &exact).unwrap();
    (outcome, exact)
}

/// Dense sector Hamiltonian assembled column by column from the
/// matrix-free action.
pub fn dense_sector_h(p: &ModelParams) -> DMatrix<Complex64> {
    let dim = SectorBasis::new(p.l(), p.m()).dim();
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    for col in 0..dim {
        let mut e = vec![Complex64::new(0.0, 0.0); dim];
        e[col] = Complex64::new(1.0, 0.0);
        for (row, v) in apply_hamiltonian(p, &e).unwrap().into_iter().enumerate() {
            h[(row, col)] = v;
        }
    }
    h
}

/// Dense Hamiltonian on all 2^L configurations, built from Pauli terms
/// independently of the sector code.
pub fn dense_full_h(p: &ModelParams) -> DMatrix<f64> {
    let l = p.l();
    let dim = 1usize << l;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for s in 0..dim {
        for i in 0..l {
            let j = (i + 1) % l;
            let zi = if s >> i & 1 == 0 { 0.5 } else { -0.5 };
            let zj = if s >> j & 1 == 0 { 0.5 } else { -0.5 };
            h[(s, s)] += p.j_z() * zi * zj;
            if zi != zj {
                // S^x S^x + S^y S^y = (S^+ S^- + S^- S^+)/2
                let t = s ^ (1 << i) ^ (1 << j);
                h[(t, s)] += p.j_xy() * 0.5;
            }
        }
    }
    h
}

pub fn fidelity(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm_sqr()
}

pub fn residual(p: &ModelParams, state: &[Complex64]) -> (f64, f64) {
    betheprep_core::bethe::eigen_residual(p, state).unwrap()
}
