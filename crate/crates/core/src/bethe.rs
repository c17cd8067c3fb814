//! Real solutions of the XXZ Bethe equations and the classical oracles built
//! on them.
//!
//! Conventions shared with the rest of the crate: a down spin is a `1` bit,
//! site `x` is bit `x` of a basis index, and the `M`-down-spin sector is
//! ordered by increasing integer value of its bit masks.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::BetheError;

/// Numerator and denominator magnitudes below this make a pair singular.
pub const SINGULAR_EPS: f64 = 1e-14;
/// Momenta closer than this (mod 2π) are treated as coinciding.
pub const COLLISION_EPS: f64 = 1e-10;
/// Largest `M` the permutation-sum oracle accepts.
pub const MAX_EXACT_M: usize = 10;
/// Longest chain the bit-mask sector basis supports.
pub const MAX_SECTOR_L: usize = 62;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    l: usize,
    m: usize,
    j_xy: f64,
    j_z: f64,
}

impl ModelParams {
    pub fn new(l: usize, m: usize, j_xy: f64, j_z: f64) -> Result<Self, BetheError> {
        if l == 0 {
            return Err(BetheError::InvalidParams("chain length must be positive".into()));
        }
        if m > l {
            return Err(BetheError::InvalidParams(format!("M = {m} exceeds L = {l}")));
        }
        if !j_xy.is_finite() || !j_z.is_finite() {
            return Err(BetheError::InvalidParams("couplings must be finite".into()));
        }
        if j_xy == 0.0 {
            return Err(BetheError::InvalidParams("j_xy must be nonzero".into()));
        }
        Ok(Self { l, m, j_xy, j_z })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn j_xy(&self) -> f64 {
        self.j_xy
    }

    pub fn j_z(&self) -> f64 {
        self.j_z
    }

    /// Anisotropy `j_z / j_xy`.
    pub fn delta(&self) -> f64 {
        self.j_z / self.j_xy
    }
}

/// An integer or half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuantumNumber(i64);

impl QuantumNumber {
    pub fn from_twice(twice: i64) -> Self {
        Self(twice)
    }

    pub fn integer(n: i64) -> Self {
        Self(2 * n)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Comma-separated list, e.g. `"-3/2,1/2"` or `"-1, 0, 1"`.
    pub fn parse_list(s: &str) -> Result<Vec<Self>, BetheError> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for QuantumNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for QuantumNumber {
    type Err = BetheError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BetheError::InvalidQuantumNumbers(format!("cannot parse {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((num, den)) => {
                let num: i64 = num.trim().parse().map_err(|_| bad())?;
                match den.trim() {
                    "1" => Ok(Self(2 * num)),
                    "2" => Ok(Self(num)),
                    _ => Err(bad()),
                }
            }
            None => {
                let n: i64 = s.parse().map_err(|_| bad())?;
                Ok(Self(2 * n))
            }
        }
    }
}

/// Checks length, parity (integers for odd M, half-integers for even M) and
/// distinctness.
pub fn validate_quantum_numbers(m: usize, qn: &[QuantumNumber]) -> Result<(), BetheError> {
    if qn.len() != m {
        return Err(BetheError::InvalidQuantumNumbers(format!(
            "expected {m} quantum numbers, got {}",
            qn.len()
        )));
    }
    let want_integer = m % 2 == 1;
    if let Some(bad) = qn.iter().find(|q| q.is_integer() != want_integer) {
        return Err(BetheError::InvalidQuantumNumbers(format!(
            "{bad} has the wrong parity: M = {m} needs {}",
            if want_integer { "integers" } else { "half-integers" }
        )));
    }
    if qn.iter().duplicates().next().is_some() {
        return Err(BetheError::InvalidQuantumNumbers(
            "quantum numbers must be distinct".into(),
        ));
    }
    Ok(())
}

/// All parity-correct sets of `m` distinct values in `(-L/2, L/2]`, each
/// sorted ascending, in lexicographic order.
pub fn enumerate_quantum_numbers(l: usize, m: usize) -> Vec<Vec<QuantumNumber>> {
    let l = l as i64;
    let offset = if m.is_multiple_of(2) { 1 } else { 0 };
    // twice-values t with -l < t <= l and t ≡ offset (mod 2)
    let values: Vec<QuantumNumber> = (-l + 1..=l)
        .filter(|t| t.rem_euclid(2) == offset)
        .map(QuantumNumber)
        .collect();
    values.into_iter().combinations(m).collect()
}

/// Two-body scattering phase Θ(k_i, k_j) on the branch (−π, π].
///
/// Evaluated with `atan2`, so a vanishing denominator is harmless; only a
/// simultaneously vanishing numerator is rejected.
pub fn scattering_phase(k_i: f64, k_j: f64, delta: f64) -> Result<f64, BetheError> {
    if k_i == k_j || delta == 0.0 {
        return Ok(0.0);
    }
    let half_diff = 0.5 * (k_i - k_j);
    let num = delta * half_diff.sin();
    let den = delta * half_diff.cos() - (0.5 * (k_i + k_j)).cos();
    if num.abs() < SINGULAR_EPS && den.abs() < SINGULAR_EPS {
        return Err(BetheError::SingularPair { k_i, k_j });
    }
    Ok(wrap_pi(2.0 * num.atan2(den)))
}

/// Maps an angle into (−π, π].
pub fn wrap_pi(mut t: f64) -> f64 {
    t = t.rem_euclid(TAU);
    if t > PI {
        t -= TAU;
    }
    t
}

fn theta_matrix(momenta: &[f64], delta: f64) -> Result<Vec<Vec<f64>>, BetheError> {
    let m = momenta.len();
    let mut theta = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let t = scattering_phase(momenta[i], momenta[j], delta)?;
            theta[i][j] = t;
            theta[j][i] = -t;
        }
    }
    Ok(theta)
}

fn bethe_residual(l: usize, qn: &[QuantumNumber], momenta: &[f64], theta: &[Vec<f64>]) -> f64 {
    momenta
        .iter()
        .zip(qn)
        .zip(theta)
        .map(|((&k, q), row)| (l as f64 * k - TAU * q.value() - row.iter().sum::<f64>()).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Weight of the fresh update in the damped iteration.
    pub damping: f64,
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            damping: 0.5,
            tolerance: 1e-12,
            max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "SolutionRecord", try_from = "SolutionRecord")]
pub struct BetheSolution {
    pub params: ModelParams,
    pub quantum_numbers: Vec<QuantumNumber>,
    /// Momenta on the branch where the quantization condition holds with
    /// `quantum_numbers` as given; use [`BetheSolution::reduced_momenta`] for
    /// values in [0, 2π).
    pub momenta: Vec<f64>,
    pub theta: Vec<Vec<f64>>,
    pub converged: bool,
    pub residual: f64,
    pub iterations: usize,
}

impl BetheSolution {
    /// Wraps externally supplied momenta; the residual is computed and
    /// `converged` reflects whether it is within `tolerance`.
    pub fn from_momenta(
        params: ModelParams,
        quantum_numbers: Vec<QuantumNumber>,
        momenta: Vec<f64>,
        tolerance: f64,
    ) -> Result<Self, BetheError> {
        validate_quantum_numbers(params.m(), &quantum_numbers)?;
        let theta = theta_matrix(&momenta, params.delta())?;
        let residual = bethe_residual(params.l(), &quantum_numbers, &momenta, &theta);
        Ok(Self {
            params,
            quantum_numbers,
            momenta,
            theta,
            converged: residual <= tolerance,
            residual,
            iterations: 0,
        })
    }

    pub fn reduced_momenta(&self) -> Vec<f64> {
        self.momenta.iter().map(|k| k.rem_euclid(TAU)).collect()
    }

    /// Reduced momenta sorted ascending; the dedup key for enumerations.
    pub fn sorted_reduced_momenta(&self) -> Vec<f64> {
        let mut k = self.reduced_momenta();
        k.sort_by(f64::total_cmp);
        k
    }

    pub fn m(&self) -> usize {
        self.params.m()
    }

    pub fn l(&self) -> usize {
        self.params.l()
    }
}

/// Damped fixed-point solution of `L k_i = 2π I_i + Σ_j Θ(k_i, k_j)` started
/// from the free-fermion momenta `2π I_i / L`.
pub fn solve_bethe(params: &ModelParams, quantum_numbers: &[QuantumNumber]) -> Result<BetheSolution, BetheError> {
    solve_bethe_with(params, quantum_numbers, &SolverOptions::default())
}

pub fn solve_bethe_with(
    params: &ModelParams,
    quantum_numbers: &[QuantumNumber],
    opts: &SolverOptions,
) -> Result<BetheSolution, BetheError> {
    validate_quantum_numbers(params.m(), quantum_numbers)?;
    let l = params.l() as f64;
    let delta = params.delta();
    let targets: Vec<f64> = quantum_numbers.iter().map(|q| TAU * q.value()).collect();
    let mut momenta: Vec<f64> = targets.iter().map(|t| t / l).collect();

    let mut iterations = 0;
    let (theta, residual, converged) = loop {
        let theta = theta_matrix(&momenta, delta)?;
        let residual = bethe_residual(params.l(), quantum_numbers, &momenta, &theta);
        if residual <= opts.tolerance {
            break (theta, residual, true);
        }
        if iterations >= opts.max_iter || !residual.is_finite() {
            break (theta, residual, false);
        }
        for ((k, t), row) in momenta.iter_mut().zip(&targets).zip(&theta) {
            let update = (t + row.iter().sum::<f64>()) / l;
            *k = (1.0 - opts.damping) * *k + opts.damping * update;
        }
        iterations += 1;
    };

    let solution = BetheSolution {
        params: *params,
        quantum_numbers: quantum_numbers.to_vec(),
        momenta,
        theta,
        converged,
        residual,
        iterations,
    };
    if converged {
        check_distinct(&solution.reduced_momenta())?;
    }
    Ok(solution)
}

fn check_distinct(reduced: &[f64]) -> Result<(), BetheError> {
    for (i, j) in (0..reduced.len()).tuple_combinations() {
        let d = (reduced[i] - reduced[j]).rem_euclid(TAU);
        if d.min(TAU - d) < COLLISION_EPS {
            return Err(BetheError::DegenerateMomenta(i, j));
        }
    }
    Ok(())
}

/// Result of sweeping every quantum-number set for one parameter point.
#[derive(Debug, Clone, Default)]
pub struct Enumeration {
    /// Converged, nondegenerate, distinct (by reduced momenta) solutions.
    pub solutions: Vec<BetheSolution>,
    /// Quantum-number sets that did not converge or were rejected.
    pub failures: Vec<(Vec<QuantumNumber>, BetheError)>,
}

/// Solves every set from [`enumerate_quantum_numbers`] and keeps one record
/// per distinct real solution whose wavefunction does not vanish.
pub fn enumerate_solutions(params: &ModelParams) -> Enumeration {
    let mut out = Enumeration::default();
    for qn in enumerate_quantum_numbers(params.l(), params.m()) {
        let solution = match solve_bethe(params, &qn) {
            Ok(s) if s.converged => s,
            Ok(s) => {
                out.failures.push((qn, BetheError::NotConverged(s.residual)));
                continue;
            }
            Err(e) => {
                out.failures.push((qn, e));
                continue;
            }
        };
        if params.m() <= MAX_EXACT_M {
            if let Err(e) = exact_state(&solution) {
                out.failures.push((qn, e));
                continue;
            }
        }
        let key = solution.sorted_reduced_momenta();
        let duplicate = out.solutions.iter().any(|s| {
            s.sorted_reduced_momenta()
                .iter()
                .zip(&key)
                .all(|(a, b)| (a - b).abs() < 1e-8)
        });
        if !duplicate {
            out.solutions.push(solution);
        }
    }
    out
}

/// Ratio `A_new / A_old` for an adjacent transposition: `moved` is the
/// momentum now at the earlier position, `passed` the one it overtook.
fn transposition_factor(theta_moved_passed: f64) -> Complex64 {
    -Complex64::from_polar(1.0, theta_moved_passed)
}

/// A_P accumulated along an explicit sequence of adjacent transpositions
/// applied to the identity arrangement. `swaps[t] = l` exchanges positions
/// `l` and `l + 1`. Returns the resulting arrangement and its coefficient.
pub fn ap_phase_along(theta: &[Vec<f64>], swaps: &[usize]) -> (Vec<usize>, Complex64) {
    let m = theta.len();
    let mut arrangement: Vec<usize> = (0..m).collect();
    let mut a = Complex64::new(1.0, 0.0);
    for &l in swaps {
        let (old_l, old_next) = (arrangement[l], arrangement[l + 1]);
        arrangement.swap(l, l + 1);
        a *= transposition_factor(theta[old_next][old_l]);
    }
    (arrangement, a)
}

/// Adjacent transpositions (bubble order) taking the identity to `perm`.
pub fn bubble_decomposition(perm: &[usize]) -> Vec<usize> {
    let mut current: Vec<usize> = (0..perm.len()).collect();
    let mut swaps = Vec::new();
    for (target_pos, &value) in perm.iter().enumerate() {
        let mut pos = current.iter().position(|&v| v == value).expect("not a permutation");
        while pos > target_pos {
            current.swap(pos - 1, pos);
            swaps.push(pos - 1);
            pos -= 1;
        }
    }
    swaps
}

/// A_P with `A_identity = 1`; `perm[j]` is the (0-based) momentum index
/// carried by the j-th down spin.
pub fn ap_phase(theta: &[Vec<f64>], perm: &[usize]) -> Complex64 {
    let (arrangement, a) = ap_phase_along(theta, &bubble_decomposition(perm));
    debug_assert_eq!(arrangement, perm);
    a
}

/// Weight-`m` bit masks on `l` bits in increasing order, with O(m) ranking.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    l: usize,
    m: usize,
    states: Vec<u64>,
    binom: Vec<Vec<usize>>,
}

impl SectorBasis {
    /// Panics if `l > MAX_SECTOR_L`.
    pub fn new(l: usize, m: usize) -> Self {
        assert!(l <= MAX_SECTOR_L, "sector basis limited to {MAX_SECTOR_L} sites");
        let binom = binomial_table(l);
        let mut states = Vec::with_capacity(binom[l][m]);
        if m == 0 {
            states.push(0);
        } else if m <= l {
            let mut s: u64 = (1u64 << m) - 1;
            let limit = 1u64 << l;
            while s < limit {
                states.push(s);
                // Gosper's hack: next mask with the same popcount.
                let c = s & s.wrapping_neg();
                let r = s + c;
                s = (((r ^ s) >> 2) / c) | r;
            }
        }
        Self { l, m, states, binom }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn state(&self, index: usize) -> u64 {
        self.states[index]
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        if mask >> self.l != 0 || mask.count_ones() as usize != self.m {
            return None;
        }
        let mut rank = 0;
        let mut rest = mask;
        let mut i = 1;
        while rest != 0 {
            let p = rest.trailing_zeros() as usize;
            rank += self.binom[p][i];
            rest &= rest - 1;
            i += 1;
        }
        Some(rank)
    }

    /// Positions of the down spins, ascending.
    pub fn positions(mask: u64) -> impl Iterator<Item = usize> {
        let mut rest = mask;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let p = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(p)
            }
        })
    }

    /// Embeds a sector vector into the full 2^L space.
    pub fn embed(&self, sector: &[Complex64]) -> Vec<Complex64> {
        let mut full = vec![Complex64::new(0.0, 0.0); 1usize << self.l];
        for (&mask, &a) in self.states.iter().zip(sector) {
            full[mask as usize] = a;
        }
        full
    }

    /// Restricts a full 2^L vector to the sector; also returns the squared
    /// norm left outside it.
    pub fn restrict(&self, full: &[Complex64]) -> (Vec<Complex64>, f64) {
        let sector: Vec<Complex64> = self.states.iter().map(|&s| full[s as usize]).collect();
        let inside: f64 = sector.iter().map(|a| a.norm_sqr()).sum();
        let total: f64 = full.iter().map(|a| a.norm_sqr()).sum();
        (sector, (total - inside).max(0.0))
    }
}

pub fn binomial_table(n: usize) -> Vec<Vec<usize>> {
    let mut c = vec![vec![0usize; n + 2]; n + 1];
    for i in 0..=n {
        c[i][0] = 1;
        for j in 1..=i {
            c[i][j] = c[i - 1][j - 1] + if j < i { c[i - 1][j] } else { 0 };
        }
    }
    c
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        0
    } else {
        binomial_table(n)[n][k]
    }
}

#[derive(Debug, Clone)]
pub struct ExactBetheState {
    pub solution: BetheSolution,
    /// A_P keyed by the permutation as 0-based momentum indices per down spin.
    pub ap_phases: BTreeMap<Vec<usize>, Complex64>,
    /// Unit-norm amplitudes over the sector basis.
    pub amplitudes: Vec<Complex64>,
    /// 2-norm of the unnormalized permutation sum.
    pub norm_raw: f64,
}

impl ExactBetheState {
    /// `norm_raw² / ((M!)² C(L, M))`, the weight of the label-zero branch in
    /// the preparation circuit.
    pub fn predicted_success_probability(&self) -> f64 {
        let m = self.solution.m();
        let m_fact: f64 = (1..=m).map(|i| i as f64).product();
        let dim = self.amplitudes.len() as f64;
        self.norm_raw.powi(2) / (m_fact * m_fact * dim)
    }

    pub fn basis(&self) -> SectorBasis {
        SectorBasis::new(self.solution.l(), self.solution.m())
    }
}

/// The coordinate Bethe wavefunction, summed over all M! permutations.
pub fn exact_state(solution: &BetheSolution) -> Result<ExactBetheState, BetheError> {
    if !solution.converged {
        return Err(BetheError::NotConverged(solution.residual));
    }
    let (l, m) = (solution.l(), solution.m());
    if m > MAX_EXACT_M {
        return Err(BetheError::TooManyDownSpins(m));
    }
    check_sector_size(l)?;
    let ap_phases: BTreeMap<Vec<usize>, Complex64> = (0..m)
        .permutations(m)
        .map(|p| {
            let a = ap_phase(&solution.theta, &p);
            (p, a)
        })
        .collect();

    let basis = SectorBasis::new(l, m);
    let k = &solution.momenta;
    let mut amplitudes: Vec<Complex64> = basis
        .states()
        .iter()
        .map(|&mask| {
            let xs: Vec<f64> = SectorBasis::positions(mask).map(|x| x as f64).collect();
            ap_phases
                .iter()
                .map(|(p, a)| {
                    let phase: f64 = p.iter().zip(&xs).map(|(&pj, &x)| k[pj] * x).sum();
                    a * Complex64::from_polar(1.0, phase)
                })
                .sum()
        })
        .collect();
    let norm_raw = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm_raw < 1e-9 * (basis.dim() as f64).sqrt() {
        return Err(BetheError::VanishingState);
    }
    for a in &mut amplitudes {
        *a /= norm_raw;
    }
    Ok(ExactBetheState {
        solution: solution.clone(),
        ap_phases,
        amplitudes,
        norm_raw,
    })
}

fn check_sector_size(l: usize) -> Result<(), BetheError> {
    if l > MAX_SECTOR_L {
        return Err(BetheError::InvalidParams(format!(
            "dense sector vectors need L ≤ {MAX_SECTOR_L}, got {l}"
        )));
    }
    Ok(())
}

/// H·state on the M-down-spin sector, matrix-free.
pub fn apply_hamiltonian(params: &ModelParams, state: &[Complex64]) -> Result<Vec<Complex64>, BetheError> {
    check_sector_size(params.l())?;
    let basis = SectorBasis::new(params.l(), params.m());
    apply_hamiltonian_in(params, &basis, state)
}

pub fn apply_hamiltonian_in(
    params: &ModelParams,
    basis: &SectorBasis,
    state: &[Complex64],
) -> Result<Vec<Complex64>, BetheError> {
    if state.len() != basis.dim() {
        return Err(BetheError::DimensionMismatch {
            expected: basis.dim(),
            got: state.len(),
        });
    }
    let l = params.l();
    let hop = 0.5 * params.j_xy();
    let zz = 0.25 * params.j_z();
    let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
    for (idx, &mask) in basis.states().iter().enumerate() {
        let amp = state[idx];
        let mut diag = 0.0;
        for i in 0..l {
            let j = (i + 1) % l;
            let (bi, bj) = ((mask >> i) & 1, (mask >> j) & 1);
            if bi == bj {
                diag += zz;
            } else {
                diag -= zz;
                let flipped = mask ^ (1 << i) ^ (1 << j);
                let target = basis.index_of(flipped).expect("hop stays in sector");
                out[target] += amp * hop;
            }
        }
        out[idx] += amp * diag;
    }
    Ok(out)
}

/// Rayleigh quotient ⟨ψ|H|ψ⟩ of a unit-norm sector vector.
pub fn energy_of(params: &ModelParams, state: &[Complex64]) -> Result<f64, BetheError> {
    let norm = state.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(BetheError::NotNormalized(norm));
    }
    let h = apply_hamiltonian(params, state)?;
    let e: Complex64 = state.iter().zip(&h).map(|(a, b)| a.conj() * b).sum();
    if e.im.abs() > 1e-10 {
        return Err(BetheError::ComplexEnergy(e.im));
    }
    Ok(e.re)
}

/// ‖Hψ − Eψ‖ with E the Rayleigh quotient; returns (E, residual).
pub fn eigen_residual(params: &ModelParams, state: &[Complex64]) -> Result<(f64, f64), BetheError> {
    let e = energy_of(params, state)?;
    let h = apply_hamiltonian(params, state)?;
    let r = h
        .iter()
        .zip(state)
        .map(|(hv, v)| (hv - v * e).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok((e, r))
}

#[derive(Serialize, Deserialize)]
struct SolutionRecord {
    #[serde(rename = "L")]
    l: usize,
    #[serde(rename = "M")]
    m: usize,
    j_xy: f64,
    j_z: f64,
    quantum_numbers: Vec<String>,
    momenta: Vec<f64>,
    theta: Vec<Vec<f64>>,
    residual: f64,
    converged: bool,
}

impl From<BetheSolution> for SolutionRecord {
    fn from(s: BetheSolution) -> Self {
        Self {
            l: s.params.l(),
            m: s.params.m(),
            j_xy: s.params.j_xy(),
            j_z: s.params.j_z(),
            quantum_numbers: s.quantum_numbers.iter().map(ToString::to_string).collect(),
            momenta: s.momenta,
            theta: s.theta,
            residual: s.residual,
            converged: s.converged,
        }
    }
}

impl TryFrom<SolutionRecord> for BetheSolution {
    type Error = BetheError;

    fn try_from(r: SolutionRecord) -> Result<Self, Self::Error> {
        let params = ModelParams::new(r.l, r.m, r.j_xy, r.j_z)?;
        let quantum_numbers = r
            .quantum_numbers
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<QuantumNumber>, _>>()?;
        validate_quantum_numbers(r.m, &quantum_numbers)?;
        if r.momenta.len() != r.m || r.theta.len() != r.m || r.theta.iter().any(|row| row.len() != r.m) {
            return Err(BetheError::InvalidParams(
                "momenta / theta dimensions do not match M".into(),
            ));
        }
        Ok(Self {
            params,
            quantum_numbers,
            momenta: r.momenta,
            theta: r.theta,
            converged: r.converged,
            residual: r.residual,
            iterations: 0,
        })
    }
}
