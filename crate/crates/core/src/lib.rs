//! Bethe-ansatz eigenstate preparation for the periodic spin-1/2 XXZ chain.
//!
//! The crate is split along the pipeline:
//!
//! - [`bethe`]: real solutions of the Bethe equations, the exact coordinate
//!   Bethe wavefunction and a matrix-free sector Hamiltonian. These are the
//!   classical oracles everything else is checked against.
//! - [`circuit`]: a small gate-list IR with counting, depth, inversion, a
//!   dense-unitary oracle and a line-oriented text format.
//! - [`builder`]: the preparation circuit (Dicke state, permutation label with
//!   scattering phases, faucet phases, label uncompute) and its
//!   amplitude-amplification wrapper.
//! - [`sim`]: dense state-vector execution, post-selection and sampling.
//! - [`resources`]: gate, qubit and T-count accounting, including the cost of
//!   the two naive alternatives.
//!
//! ```
//! use betheprep_core::bethe::{solve_bethe, exact_state, ModelParams, QuantumNumber};
//! use betheprep_core::builder::{build_algorithm1, BuildOptions};
//! use betheprep_core::sim::{run, project_success, RunOptions};
//!
//! let params = ModelParams::new(4, 2, 1.0, -0.5).unwrap();
//! let qn = QuantumNumber::parse_list("-3/2,1/2").unwrap();
//! let solution = solve_bethe(&params, &qn).unwrap();
//! assert!(solution.converged);
//!
//! let circuit = build_algorithm1(&solution, &BuildOptions::default()).unwrap();
//! let state = run(&circuit, None, &RunOptions::default()).unwrap();
//! let exact = exact_state(&solution).unwrap();
//! let outcome = project_success(&state, &circuit.layout, &exact).unwrap();
//! assert!(outcome.fidelity.unwrap() > 1.0 - 1e-8);
//! ```

pub mod bethe;
pub mod builder;
pub mod circuit;
pub mod error;
pub mod resources;
pub mod sim;

pub use bethe::{BetheSolution, ExactBetheState, ModelParams, QuantumNumber};
pub use builder::{BuildOptions, ReflectionStyle, WorkBudget};
pub use circuit::{Circuit, Gate, GateCounts, GateKind, QubitLayout};
pub use error::{BetheError, BuildError, CircuitError, ResourceError, SimError};
pub use num_complex::Complex64;
pub use resources::{ResourceModel, ResourceReport};
pub use sim::{SimulationOutcome, StateVector};
