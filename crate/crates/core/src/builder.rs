//! Emits the preparation circuit and its amplitude-amplification wrapper.
//!
//! Register conventions (see [`QubitLayout`]): subregister `j` of the
//! permutation label holds the momentum index carried by the `j`-th down spin
//! counted from site 0, one-hot over its `M` qubits. Faucet `j` is on while
//! the traversal has not yet reached that down spin.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bethe::BetheSolution;
use crate::circuit::{Circuit, Control, Gate, QubitLayout};
use crate::error::{BetheError, BuildError};

/// How the three-control faucet turn-off is emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum WorkBudget {
    /// Lowered to three Toffolis through the single work qubit.
    #[default]
    Single,
    /// Left as a native MCX (the work qubit stays allocated but unused).
    NativeMcx,
}

/// How the zero-state reflections of amplitude amplification are emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ReflectionStyle {
    /// Balanced Toffoli tree into `L + M² − M` extra ancillas (plus the
    /// faucet and work qubits, which are clean at reflection time).
    #[default]
    AncillaTree,
    /// One multi-controlled X between Hadamards; no extra qubits. Used for
    /// simulation, where the tree's ancillas would exceed the qubit cap.
    Mcx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BuildOptions {
    pub amplification_rounds: usize,
    /// Omit faucet gates that can never act near the chain ends.
    pub edge_skip: bool,
    pub work_budget: WorkBudget,
    pub reflection: ReflectionStyle,
}

impl BuildOptions {
    pub fn with_rounds(mut self, rounds: usize) -> Self {
        self.amplification_rounds = rounds;
        self
    }

    pub fn with_edge_skip(mut self, on: bool) -> Self {
        self.edge_skip = on;
        self
    }

    pub fn with_reflection(mut self, style: ReflectionStyle) -> Self {
        self.reflection = style;
        self
    }
}

/// Momenta and phase matrix needed to emit gates; gate structure does not
/// depend on their values.
#[derive(Debug, Clone, Copy)]
pub struct Spec<'a> {
    pub l: usize,
    pub m: usize,
    pub momenta: &'a [f64],
    pub theta: &'a [Vec<f64>],
}

impl<'a> Spec<'a> {
    pub fn from_solution(solution: &'a BetheSolution) -> Result<Self, BuildError> {
        if !solution.converged {
            return Err(BuildError::Bethe(BetheError::NotConverged(solution.residual)));
        }
        Ok(Self {
            l: solution.l(),
            m: solution.m(),
            momenta: &solution.momenta,
            theta: &solution.theta,
        })
    }
}

pub fn core_layout(l: usize, m: usize) -> QubitLayout {
    QubitLayout::new(l, m, 1, 0)
}

pub fn amplified_layout(l: usize, m: usize, style: ReflectionStyle) -> QubitLayout {
    match style {
        ReflectionStyle::AncillaTree => QubitLayout::new(l, m, 1, (l + m * m).saturating_sub(m)),
        ReflectionStyle::Mcx => core_layout(l, m),
    }
}

/// Dicke state `|D_{L,M}⟩` on an `L`-qubit register by split-and-cyclic-shift.
pub fn build_dicke(l: usize, m: usize) -> Circuit {
    let mut c = Circuit::new(QubitLayout::new(l, 0, 0, 0));
    c.begin_section("dicke");
    emit_dicke(&mut c, l, m);
    c
}

fn emit_dicke(c: &mut Circuit, n: usize, k: usize) {
    if k == 0 {
        return;
    }
    // positions 1..=n map to qubits 0..n
    let q = |p: usize| p - 1;
    for p in n - k + 1..=n {
        c.push(Gate::x(q(p)));
    }
    let mut scs = |m: usize, kk: usize| {
        c.push(Gate::cx(q(m - 1), q(m)));
        emit_cry(c, q(m), q(m - 1), 2.0 * (1.0 / m as f64).sqrt().acos());
        c.push(Gate::cx(q(m - 1), q(m)));
        for l in 2..=kk {
            c.push(Gate::cx(q(m - l), q(m)));
            let angle = 2.0 * (l as f64 / m as f64).sqrt().acos();
            emit_ccry(c, q(m), q(m - l + 1), q(m - l), angle);
            c.push(Gate::cx(q(m - l), q(m)));
        }
    };
    for m in (k + 1..=n).rev() {
        scs(m, k);
    }
    for m in (2..=k).rev() {
        scs(m, m - 1);
    }
}

/// Controlled RY as two half-angle rotations around CX.
fn emit_cry(c: &mut Circuit, ctrl: usize, t: usize, theta: f64) {
    c.push(Gate::ry(t, theta / 2.0));
    c.push(Gate::cx(ctrl, t));
    c.push(Gate::ry(t, -theta / 2.0));
    c.push(Gate::cx(ctrl, t));
}

/// Doubly-controlled RY as a uniformly controlled rotation: four quarter
/// angles with Gray-code CX steps, no Toffoli.
fn emit_ccry(c: &mut Circuit, c1: usize, c2: usize, t: usize, theta: f64) {
    let a = theta / 4.0;
    c.push(Gate::ry(t, a));
    c.push(Gate::cx(c1, t));
    c.push(Gate::ry(t, -a));
    c.push(Gate::cx(c2, t));
    c.push(Gate::ry(t, a));
    c.push(Gate::cx(c1, t));
    c.push(Gate::ry(t, -a));
    c.push(Gate::cx(c2, t));
}

/// Partial exchange between qubit `p` (receiving) and `q` (source).
fn emit_aswap(c: &mut Circuit, p: usize, q: usize, theta: f64, phi: f64) {
    c.push(Gate::cx(q, p));
    c.push(Gate::rz(q, -(phi + PI)));
    c.push(Gate::ry(q, -(theta + PI / 2.0)));
    c.push(Gate::cx(p, q));
    c.push(Gate::ry(q, theta + PI / 2.0));
    c.push(Gate::rz(q, phi + PI));
    c.push(Gate::cx(q, p));
}

/// Label-register superposition `Σ_P |P⟩ / √M!`, optionally weighted by the
/// Bethe coefficients `A_P`.
pub fn build_perm_label(solution: &BetheSolution, with_ap: bool) -> Result<Circuit, BuildError> {
    let spec = Spec::from_solution(solution)?;
    Ok(build_perm_label_spec(&spec, with_ap, core_layout(spec.l, spec.m)))
}

/// As [`build_perm_label`] on an arbitrary layout with `layout.m == spec.m`.
pub fn build_perm_label_spec(spec: &Spec<'_>, with_ap: bool, layout: QubitLayout) -> Circuit {
    let mut c = Circuit::new(layout);
    emit_perm_label(&mut c, spec, with_ap);
    c
}

fn emit_perm_label(c: &mut Circuit, spec: &Spec<'_>, with_ap: bool) {
    let m = spec.m;
    if m == 0 {
        return;
    }
    c.begin_section(if with_ap { "perm_label_ap" } else { "perm_label" });
    let ly = c.layout;
    c.push(Gate::x(ly.label(0, 0)));
    for v in 1..m {
        c.push(Gate::x(ly.label(v, v)));
        for s in (0..v).rev() {
            let theta = (1.0 / ((s + 2) as f64).sqrt()).acos();
            emit_aswap(c, ly.label(s, v), ly.label(s + 1, v), theta, 0.0);
            for l in 0..v {
                c.push(Gate::cswap(ly.label(s, v), ly.label(s, l), ly.label(s + 1, l)));
            }
            if with_ap {
                for passed in 0..v {
                    let angle = spec.theta[v][passed] + PI;
                    c.push(Gate::cp(ly.label(s + 1, passed), ly.label(s, v), angle));
                }
            }
        }
    }
}

/// Site-by-site traversal applying `e^{i k_{P_j} x_j}`.
pub fn build_faucet(solution: &BetheSolution, opts: &BuildOptions) -> Result<Circuit, BuildError> {
    let spec = Spec::from_solution(solution)?;
    Ok(build_faucet_spec(&spec, opts, core_layout(spec.l, spec.m)))
}

pub fn build_faucet_spec(spec: &Spec<'_>, opts: &BuildOptions, layout: QubitLayout) -> Circuit {
    let mut c = Circuit::new(layout);
    emit_faucet(&mut c, spec, opts);
    c
}

fn emit_faucet(c: &mut Circuit, spec: &Spec<'_>, opts: &BuildOptions) {
    let (l, m) = (spec.l, spec.m);
    if m == 0 {
        return;
    }
    c.begin_section("faucet");
    let ly = c.layout;
    for j in 0..m {
        c.push(Gate::x(ly.faucet(j)));
    }
    for x in 0..l {
        // Down spins strictly before x, given that x itself is down.
        let a_lo = (m + x).saturating_sub(l);
        let a_hi = x.min(m - 1);
        for j in (0..m).rev() {
            if opts.edge_skip && (j < a_lo || j > a_hi) {
                continue;
            }
            emit_turn_off(c, x, j, opts.work_budget);
        }
        // Down spins at or before x: at least this many faucets are off.
        let off_lo = (m + x + 1).saturating_sub(l);
        for j in 0..m {
            if opts.edge_skip && off_lo > j {
                continue;
            }
            for v in 0..m {
                c.push(Gate::cp(ly.faucet(j), ly.label(j, v), spec.momenta[v]));
            }
        }
    }
}

fn emit_turn_off(c: &mut Circuit, x: usize, j: usize, budget: WorkBudget) {
    let ly = c.layout;
    let m = ly.m;
    let site = Control::pos(ly.system(x));
    let prev = (j > 0).then(|| Control::neg(ly.faucet(j - 1)));
    let next = (j + 1 < m).then(|| Control::pos(ly.faucet(j + 1)));
    let target = ly.faucet(j);
    match (prev, next, budget) {
        (Some(p), Some(n), WorkBudget::Single) => {
            let w = ly.work_qubit(0);
            c.push(Gate::toffoli(site, p, w));
            c.push(Gate::toffoli(Control::pos(w), n, target));
            c.push(Gate::toffoli(site, p, w));
        }
        _ => {
            let controls: Vec<Control> = std::iter::once(site).chain(prev).chain(next).collect();
            c.push(Gate::controlled_x(controls, target));
        }
    }
}

/// Dicke preparation, `A_P`-weighted label, faucet traversal, then the
/// inverse of the unweighted label preparation. No measurement.
pub fn build_algorithm1(solution: &BetheSolution, opts: &BuildOptions) -> Result<Circuit, BuildError> {
    let spec = Spec::from_solution(solution)?;
    Ok(build_algorithm1_spec(&spec, opts, core_layout(spec.l, spec.m)))
}

/// Structure-only variant for costing: gate counts and depth do not depend
/// on the momentum values.
pub fn build_algorithm1_spec(spec: &Spec<'_>, opts: &BuildOptions, layout: QubitLayout) -> Circuit {
    let mut c = Circuit::new(layout);
    c.begin_section("dicke");
    emit_dicke(&mut c, spec.l, spec.m);
    emit_perm_label(&mut c, spec, true);
    emit_faucet(&mut c, spec, opts);
    let mut label = Circuit::new(layout);
    emit_perm_label(&mut label, spec, false);
    c.append(&label.inverse()).expect("same layout");
    c
}

/// Free-fermion momenta (zero phase matrix) with the centred quantum numbers;
/// a stand-in when only circuit structure matters.
pub fn placeholder_momenta(l: usize, m: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let momenta = (0..m)
        .map(|i| 2.0 * PI * (i as f64 - (m as f64 - 1.0) / 2.0) / l as f64)
        .collect();
    (momenta, vec![vec![0.0; m]; m])
}

/// `B` followed by `rounds` applications of `Q = B S_0 B⁻¹ S_B` (global
/// sign dropped).
pub fn build_amplified(solution: &BetheSolution, rounds: usize, opts: &BuildOptions) -> Result<Circuit, BuildError> {
    if rounds == 0 {
        return Err(BuildError::NoRounds);
    }
    let spec = Spec::from_solution(solution)?;
    Ok(build_amplified_spec(&spec, rounds, opts))
}

pub fn build_amplified_spec(spec: &Spec<'_>, rounds: usize, opts: &BuildOptions) -> Circuit {
    let layout = amplified_layout(spec.l, spec.m, opts.reflection);
    let b = build_algorithm1_spec(spec, opts, layout);
    let b_inv = b.inverse();
    let label: Vec<usize> = layout.label_range().collect();
    let label_and_system: Vec<usize> = layout.system_range().chain(layout.label_range()).collect();
    let mut c = b.clone();
    for _ in 0..rounds {
        c.begin_section("reflect_good");
        emit_zero_reflection(&mut c, &label, opts.reflection);
        c.append(&b_inv).expect("same layout");
        c.begin_section("reflect_zero");
        emit_zero_reflection(&mut c, &label_and_system, opts.reflection);
        c.append(&b).expect("same layout");
    }
    c
}

/// Sign flip (up to a global phase) of the component with every qubit in
/// `qubits` at 0.
fn emit_zero_reflection(c: &mut Circuit, qubits: &[usize], style: ReflectionStyle) {
    if qubits.is_empty() {
        return;
    }
    match style {
        ReflectionStyle::Mcx => {
            let (&t, rest) = qubits.split_last().expect("nonempty");
            c.push(Gate::x(t));
            c.push(Gate::h(t));
            c.push(Gate::controlled_x(rest.iter().map(|&q| Control::neg(q)).collect(), t));
            c.push(Gate::h(t));
            c.push(Gate::x(t));
        }
        ReflectionStyle::AncillaTree => {
            let ly = c.layout;
            let pool: Vec<usize> = ly.aa_range().chain(ly.faucet_range()).chain(ly.work_range()).collect();
            let mut compute = Vec::new();
            let mut level: Vec<Control> = qubits.iter().map(|&q| Control::neg(q)).collect();
            let mut next_anc = 0;
            while level.len() > 1 {
                let mut up = Vec::with_capacity(level.len().div_ceil(2));
                for pair in level.chunks(2) {
                    if let [a, b] = pair {
                        let anc = pool[next_anc];
                        next_anc += 1;
                        compute.push(Gate::toffoli(*a, *b, anc));
                        up.push(Control::pos(anc));
                    } else {
                        up.push(pair[0]);
                    }
                }
                level = up;
            }
            let root = level[0];
            compute.iter().for_each(|g| c.push(g.clone()));
            let negated = root.polarity == crate::circuit::Polarity::Negative;
            if negated {
                c.push(Gate::x(root.qubit));
            }
            c.push(Gate::rz(root.qubit, PI));
            if negated {
                c.push(Gate::x(root.qubit));
            }
            compute.into_iter().rev().for_each(|g| c.push(g));
        }
    }
}

/// Dispatches on `opts.amplification_rounds`.
pub fn build(solution: &BetheSolution, opts: &BuildOptions) -> Result<Circuit, BuildError> {
    if opts.amplification_rounds == 0 {
        build_algorithm1(solution, opts)
    } else {
        build_amplified(solution, opts.amplification_rounds, opts)
    }
}
