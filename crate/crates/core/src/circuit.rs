//! Gate-list circuit representation, counting, depth and a text format.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::ops::Range;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CircuitError;

/// Largest register `unitary_of` will expand.
pub const MAX_UNITARY_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn pos(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: Polarity::Positive,
        }
    }

    pub fn neg(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: Polarity::Negative,
        }
    }

    /// The bit value that activates this control.
    pub fn active_value(&self) -> u64 {
        match self.polarity {
            Polarity::Positive => 1,
            Polarity::Negative => 0,
        }
    }
}

impl fmt::Display for Control {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.polarity {
            Polarity::Positive => '+',
            Polarity::Negative => '-',
        };
        write!(f, "{}{}", self.qubit, sign)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GateKind {
    X,
    H,
    RY,
    RZ,
    CX,
    CP,
    CCP,
    Toffoli,
    CSwap,
    Mcx,
}

impl GateKind {
    pub const ALL: [GateKind; 10] = [
        GateKind::X,
        GateKind::H,
        GateKind::RY,
        GateKind::RZ,
        GateKind::CX,
        GateKind::CP,
        GateKind::CCP,
        GateKind::Toffoli,
        GateKind::CSwap,
        GateKind::Mcx,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::RY => "RY",
            GateKind::RZ => "RZ",
            GateKind::CX => "CX",
            GateKind::CP => "CP",
            GateKind::CCP => "CCP",
            GateKind::Toffoli => "TOFFOLI",
            GateKind::CSwap => "CSWAP",
            GateKind::Mcx => "MCX",
        }
    }

    pub fn has_angle(self) -> bool {
        matches!(self, GateKind::RY | GateKind::RZ | GateKind::CP | GateKind::CCP)
    }

    pub fn is_self_inverse(self) -> bool {
        !self.has_angle()
    }

    /// Diagonal in the computational basis.
    pub fn is_diagonal(self) -> bool {
        matches!(self, GateKind::RZ | GateKind::CP | GateKind::CCP)
    }

    fn n_targets(self) -> usize {
        match self {
            GateKind::CSwap => 2,
            _ => 1,
        }
    }

    fn n_controls(self) -> Option<usize> {
        match self {
            GateKind::X | GateKind::H | GateKind::RY | GateKind::RZ => Some(0),
            GateKind::CX | GateKind::CP | GateKind::CSwap => Some(1),
            GateKind::CCP | GateKind::Toffoli => Some(2),
            GateKind::Mcx => None,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown gate kind {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub controls: Vec<Control>,
    pub angle: Option<f64>,
}

impl Gate {
    /// Builds and validates a gate.
    pub fn new(
        kind: GateKind,
        targets: Vec<usize>,
        controls: Vec<Control>,
        angle: Option<f64>,
    ) -> Result<Self, CircuitError> {
        let g = Self {
            kind,
            targets,
            controls,
            angle,
        };
        g.validate()?;
        Ok(g)
    }

    fn raw(kind: GateKind, targets: Vec<usize>, controls: Vec<Control>, angle: Option<f64>) -> Self {
        Self {
            kind,
            targets,
            controls,
            angle,
        }
    }

    pub fn x(t: usize) -> Self {
        Self::raw(GateKind::X, vec![t], vec![], None)
    }

    pub fn h(t: usize) -> Self {
        Self::raw(GateKind::H, vec![t], vec![], None)
    }

    pub fn ry(t: usize, theta: f64) -> Self {
        Self::raw(GateKind::RY, vec![t], vec![], Some(theta))
    }

    pub fn rz(t: usize, theta: f64) -> Self {
        Self::raw(GateKind::RZ, vec![t], vec![], Some(theta))
    }

    pub fn cx(c: usize, t: usize) -> Self {
        Self::raw(GateKind::CX, vec![t], vec![Control::pos(c)], None)
    }

    pub fn cp(c: usize, t: usize, theta: f64) -> Self {
        Self::raw(GateKind::CP, vec![t], vec![Control::pos(c)], Some(theta))
    }

    pub fn ccp(c0: usize, c1: usize, t: usize, theta: f64) -> Self {
        Self::raw(
            GateKind::CCP,
            vec![t],
            vec![Control::pos(c0), Control::pos(c1)],
            Some(theta),
        )
    }

    pub fn toffoli(c0: Control, c1: Control, t: usize) -> Self {
        Self::raw(GateKind::Toffoli, vec![t], vec![c0, c1], None)
    }

    pub fn cswap(c: usize, a: usize, b: usize) -> Self {
        Self::raw(GateKind::CSwap, vec![a, b], vec![Control::pos(c)], None)
    }

    /// Controlled NOT with any number of (signed) controls, normalized to
    /// X / CX / TOFFOLI / MCX by control count.
    pub fn controlled_x(controls: Vec<Control>, t: usize) -> Self {
        let kind = match controls.len() {
            0 => GateKind::X,
            1 => GateKind::CX,
            2 => GateKind::Toffoli,
            _ => GateKind::Mcx,
        };
        Self::raw(kind, vec![t], controls, None)
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets
            .iter()
            .copied()
            .chain(self.controls.iter().map(|c| c.qubit))
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        let arity = |expected: &'static str| CircuitError::Arity {
            kind: self.kind.name(),
            expected,
            got: format!("{} targets, {} controls", self.targets.len(), self.controls.len()),
        };
        if self.targets.len() != self.kind.n_targets() {
            return Err(arity(if self.kind == GateKind::CSwap {
                "2 targets"
            } else {
                "1 target"
            }));
        }
        match self.kind.n_controls() {
            Some(n) if n != self.controls.len() => {
                return Err(arity(match n {
                    0 => "no controls",
                    1 => "1 control",
                    _ => "2 controls",
                }))
            }
            None if self.controls.len() < 3 => return Err(arity("at least 3 controls")),
            _ => {}
        }
        if self.kind.has_angle() != self.angle.is_some() {
            return Err(arity(if self.kind.has_angle() { "an angle" } else { "no angle" }));
        }
        if let Some(a) = self.angle {
            if !a.is_finite() {
                return Err(CircuitError::BadAngle);
            }
        }
        let mut seen: Vec<usize> = self.qubits().collect();
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(CircuitError::RepeatedQubit(w[0]));
        }
        Ok(())
    }

    /// The inverse gate: angles negated, everything else unchanged.
    pub fn inverse(&self) -> Self {
        let mut g = self.clone();
        if let Some(a) = g.angle.as_mut() {
            *a = -*a;
        }
        g
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if let Some(a) = self.angle {
            write!(f, " {a}")?;
        }
        for t in &self.targets {
            write!(f, " {t}")?;
        }
        if !self.controls.is_empty() {
            f.write_str(" |")?;
            for c in &self.controls {
                write!(f, " {c}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Gate {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let (head, ctrl) = match line.split_once('|') {
            Some((h, c)) => (h, Some(c)),
            None => (line, None),
        };
        let mut tokens = head.split_whitespace();
        let kind: GateKind = tokens.next().ok_or("empty gate line")?.parse()?;
        let angle = if kind.has_angle() {
            let tok = tokens.next().ok_or("missing angle")?;
            Some(tok.parse::<f64>().map_err(|e| format!("bad angle {tok:?}: {e}"))?)
        } else {
            None
        };
        let targets = tokens
            .map(|t| t.parse::<usize>().map_err(|e| format!("bad target {t:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        let controls = ctrl
            .map(|c| {
                c.split_whitespace()
                    .map(|tok| {
                        let (q, pol) = if let Some(q) = tok.strip_suffix('+') {
                            (q, Polarity::Positive)
                        } else if let Some(q) = tok.strip_suffix('-') {
                            (q, Polarity::Negative)
                        } else {
                            return Err(format!("control {tok:?} lacks a +/- polarity"));
                        };
                        let qubit = q.parse().map_err(|e| format!("bad control {tok:?}: {e}"))?;
                        Ok(Control { qubit, polarity: pol })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?
            .unwrap_or_default();
        Gate::new(kind, targets, controls, angle).map_err(|e| e.to_string())
    }
}

/// Register layout. Qubits are numbered system, permutation label, faucet,
/// work, then amplification ancillas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitLayout {
    pub l: usize,
    pub m: usize,
    pub work: usize,
    pub aa: usize,
}

impl QubitLayout {
    pub fn new(l: usize, m: usize, work: usize, aa: usize) -> Self {
        Self { l, m, work, aa }
    }

    pub fn system(&self, x: usize) -> usize {
        debug_assert!(x < self.l);
        x
    }

    /// Qubit `v` of label subregister `r`.
    pub fn label(&self, r: usize, v: usize) -> usize {
        debug_assert!(r < self.m && v < self.m);
        self.l + r * self.m + v
    }

    pub fn faucet(&self, j: usize) -> usize {
        debug_assert!(j < self.m);
        self.l + self.m * self.m + j
    }

    pub fn work_qubit(&self, i: usize) -> usize {
        debug_assert!(i < self.work);
        self.l + self.m * self.m + self.m + i
    }

    pub fn aa_qubit(&self, i: usize) -> usize {
        debug_assert!(i < self.aa);
        self.l + self.m * self.m + self.m + self.work + i
    }

    pub fn system_range(&self) -> Range<usize> {
        0..self.l
    }

    pub fn label_range(&self) -> Range<usize> {
        self.l..self.l + self.m * self.m
    }

    pub fn faucet_range(&self) -> Range<usize> {
        let s = self.l + self.m * self.m;
        s..s + self.m
    }

    pub fn work_range(&self) -> Range<usize> {
        let s = self.l + self.m * self.m + self.m;
        s..s + self.work
    }

    pub fn aa_range(&self) -> Range<usize> {
        let s = self.l + self.m * self.m + self.m + self.work;
        s..s + self.aa
    }

    /// `L + M² + M + 1`: system, label, faucet and a single work qubit.
    pub fn core_total(&self) -> usize {
        self.l + self.m * self.m + self.m + 1
    }

    pub fn total(&self) -> usize {
        self.l + self.m * self.m + self.m + self.work + self.aa
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub start: usize,
}

/// Ordered gate list plus the named build steps that emitted it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub layout: QubitLayout,
    gates: Vec<Gate>,
    sections: Vec<Section>,
}

impl Circuit {
    pub fn new(layout: QubitLayout) -> Self {
        Self {
            layout,
            gates: Vec::new(),
            sections: Vec::new(),
        }
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.layout.total()
    }

    /// Marks the start of a named step; later gates belong to it.
    pub fn begin_section(&mut self, name: impl Into<String>) {
        let start = self.gates.len();
        if let Some(last) = self.sections.last_mut() {
            if last.start == start {
                last.name = name.into();
                return;
            }
        }
        self.sections.push(Section {
            name: name.into(),
            start,
        });
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    /// Gate index ranges per section, in order.
    pub fn section_ranges(&self) -> Vec<(&str, Range<usize>)> {
        let mut out = Vec::with_capacity(self.sections.len());
        for (i, s) in self.sections.iter().enumerate() {
            let end = self.sections.get(i + 1).map_or(self.gates.len(), |n| n.start);
            out.push((s.name.as_str(), s.start..end));
        }
        out
    }

    /// Gates belonging to the named section (all sections with that name).
    pub fn section_gates(&self, name: &str) -> Vec<&Gate> {
        self.section_ranges()
            .into_iter()
            .filter(|(n, _)| *n == name)
            .flat_map(|(_, r)| self.gates[r].iter())
            .collect()
    }

    pub fn try_push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate()?;
        let total = self.layout.total();
        if let Some(q) = gate.qubits().find(|&q| q >= total) {
            return Err(CircuitError::OutOfRange { qubit: q, total });
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends a gate emitted by internal builders; an invalid gate there
    /// is a construction bug, so this panics.
    pub fn push(&mut self, gate: Gate) {
        if let Err(e) = self.try_push(gate) {
            panic!("invalid gate: {e}");
        }
    }

    /// Appends all gates of `other` (same layout), keeping its sections.
    pub fn append(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        if other.layout.total() > self.layout.total() {
            return Err(CircuitError::OutOfRange {
                qubit: other.layout.total() - 1,
                total: self.layout.total(),
            });
        }
        let offset = self.gates.len();
        if other.sections.first().is_none_or(|s| s.start > 0) && !other.gates.is_empty() {
            self.sections.push(Section {
                name: String::new(),
                start: offset,
            });
        }
        for s in &other.sections {
            self.sections.push(Section {
                name: s.name.clone(),
                start: s.start + offset,
            });
        }
        for g in &other.gates {
            self.try_push(g.clone())?;
        }
        self.sections.dedup_by(|b, a| {
            // later header at the same position wins
            if a.start == b.start {
                a.name = std::mem::take(&mut b.name);
                true
            } else {
                false
            }
        });
        Ok(())
    }

    /// Reversed gate order with negated angles; section names get `.inv`.
    pub fn inverse(&self) -> Circuit {
        let n = self.gates.len();
        let mut sections: Vec<Section> = self
            .section_ranges()
            .into_iter()
            .rev()
            .filter(|(_, r)| !r.is_empty())
            .map(|(name, r)| Section {
                name: if name.is_empty() {
                    String::new()
                } else {
                    format!("{name}.inv")
                },
                start: n - r.end,
            })
            .collect();
        if let Some(first) = self.sections.first() {
            if first.start > 0 {
                sections.push(Section {
                    name: String::new(),
                    start: n - first.start,
                });
            }
        }
        Circuit {
            layout: self.layout,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            sections,
        }
    }

    pub fn count_gates(&self) -> GateCounts {
        count_gates(&self.gates)
    }

    pub fn depth(&self) -> usize {
        depth(&self.gates, self.layout.total())
    }

    /// Replaces every negative control by X on that qubit before and after.
    pub fn with_positive_controls(&self) -> Circuit {
        let mut out = Circuit::new(self.layout);
        for (name, range) in self.section_ranges() {
            out.begin_section(name);
            for g in &self.gates[range] {
                let negs: Vec<usize> = g
                    .controls
                    .iter()
                    .filter(|c| c.polarity == Polarity::Negative)
                    .map(|c| c.qubit)
                    .collect();
                let mut pos = g.clone();
                for c in &mut pos.controls {
                    c.polarity = Polarity::Positive;
                }
                negs.iter().for_each(|&q| out.push(Gate::x(q)));
                out.push(pos);
                negs.iter().for_each(|&q| out.push(Gate::x(q)));
            }
        }
        if self.sections.is_empty() {
            out.sections.clear();
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let ly = &self.layout;
        let _ = writeln!(out, "circuit L={} M={} work={} aa={}", ly.l, ly.m, ly.work, ly.aa);
        let mut next = 0;
        for (i, g) in self.gates.iter().enumerate() {
            while next < self.sections.len() && self.sections[next].start == i {
                let _ = writeln!(out, "# section {}", self.sections[next].name);
                next += 1;
            }
            let _ = writeln!(out, "{g}");
        }
        for s in &self.sections[next..] {
            let _ = writeln!(out, "# section {}", s.name);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Circuit, CircuitError> {
        let parse_err = |line: usize, msg: String| CircuitError::Parse { line, msg };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty input".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("circuit") {
            return Err(parse_err(hline, "header must start with `circuit`".into()));
        }
        let mut vals = BTreeMap::new();
        for f in fields {
            let (k, v) = f
                .split_once('=')
                .ok_or_else(|| parse_err(hline, format!("bad header field {f:?}")))?;
            let v: usize = v
                .parse()
                .map_err(|e| parse_err(hline, format!("bad header value {f:?}: {e}")))?;
            vals.insert(k, v);
        }
        let get = |k: &str| {
            vals.get(k)
                .copied()
                .ok_or_else(|| parse_err(hline, format!("header lacks {k}")))
        };
        let layout = QubitLayout::new(get("L")?, get("M")?, get("work")?, get("aa")?);
        let mut circuit = Circuit::new(layout);
        for (n, line) in lines {
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(name) = rest.trim().strip_prefix("section") {
                    circuit.sections.push(Section {
                        name: name.trim().to_string(),
                        start: circuit.gates.len(),
                    });
                }
                continue;
            }
            let gate: Gate = line.parse().map_err(|m| parse_err(n, m))?;
            circuit.try_push(gate).map_err(|e| parse_err(n, e.to_string()))?;
        }
        Ok(circuit)
    }

    /// Dense unitary (row = output index) for registers of at most
    /// [`MAX_UNITARY_QUBITS`] qubits.
    pub fn unitary(&self) -> Result<Vec<Vec<Complex64>>, CircuitError> {
        unitary_of(self)
    }
}

/// Per-kind gate tally.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts(pub BTreeMap<GateKind, usize>);

impl GateCounts {
    pub fn get(&self, kind: GateKind) -> usize {
        self.0.get(&kind).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    /// CP + CCP.
    pub fn cp_like(&self) -> usize {
        self.get(GateKind::CP) + self.get(GateKind::CCP)
    }

    pub fn iter(&self) -> impl Iterator<Item = (GateKind, usize)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }
}

pub fn count_gates(gates: &[Gate]) -> GateCounts {
    let mut counts = GateCounts::default();
    for g in gates {
        *counts.0.entry(g.kind).or_insert(0) += 1;
    }
    counts
}

/// As-soon-as-possible layering; every gate occupies one layer.
pub fn depth(gates: &[Gate], n_qubits: usize) -> usize {
    let mut frontier = vec![0usize; n_qubits];
    let mut max = 0;
    for g in gates {
        let layer = g.qubits().map(|q| frontier[q]).max().unwrap_or(0) + 1;
        for q in g.qubits() {
            frontier[q] = layer;
        }
        max = max.max(layer);
    }
    max
}

pub fn unitary_of(circuit: &Circuit) -> Result<Vec<Vec<Complex64>>, CircuitError> {
    let n = circuit.n_qubits();
    if n > MAX_UNITARY_QUBITS {
        return Err(CircuitError::TooLarge {
            max: MAX_UNITARY_QUBITS,
            got: n,
        });
    }
    let dim = 1usize << n;
    let mut u = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for col in 0..dim {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[col] = Complex64::new(1.0, 0.0);
        for g in circuit.gates() {
            crate::sim::apply_gate(&mut amps, g);
        }
        for (row, a) in amps.into_iter().enumerate() {
            u[row][col] = a;
        }
    }
    Ok(u)
}

/// Lowers a multi-controlled X into a compute / act / uncompute chain of
/// Toffolis through `work` (needs `controls − 2` clean qubits, returned
/// clean). Gates with at most two controls are returned unchanged.
pub fn lower_mcx(gate: &Gate, work: &[usize]) -> Result<Vec<Gate>, CircuitError> {
    if gate.kind != GateKind::Mcx {
        return Ok(vec![gate.clone()]);
    }
    let c = &gate.controls;
    let needed = c.len() - 2;
    if work.len() < needed {
        return Err(CircuitError::NotEnoughWork {
            controls: c.len(),
            needed,
            available: work.len(),
        });
    }
    let mut compute = vec![Gate::toffoli(c[0], c[1], work[0])];
    for i in 2..c.len() - 1 {
        compute.push(Gate::toffoli(Control::pos(work[i - 2]), c[i], work[i - 1]));
    }
    let act = Gate::toffoli(Control::pos(work[needed - 1]), c[c.len() - 1], gate.targets[0]);
    let mut out = compute.clone();
    out.push(act);
    out.extend(compute.into_iter().rev());
    Ok(out)
}

/// Net Toffoli count of [`lower_mcx`] for `c` controls.
pub fn mcx_toffoli_cost(c: usize) -> usize {
    if c <= 2 {
        1
    } else {
        2 * (c - 2) + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_identity(u: &[Vec<Complex64>], tol: f64) {
        for (i, row) in u.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((v - c(want, 0.0)).norm() < tol, "u[{i}][{j}] = {v}");
            }
        }
    }

    fn compose(a: &Circuit, b: &Circuit) -> Circuit {
        let mut out = a.clone();
        out.append(b).unwrap();
        out
    }

    #[test]
    fn empty_counts() {
        let circ = Circuit::new(QubitLayout::new(3, 1, 1, 0));
        assert_eq!(circ.count_gates().total(), 0);
        assert_eq!(circ.count_gates().cp_like(), 0);
        assert_eq!(circ.depth(), 0);
    }

    #[test]
    fn x_unitary() {
        let mut circ = Circuit::new(QubitLayout::new(1, 0, 0, 0));
        circ.push(Gate::x(0));
        let u = circ.unitary().unwrap();
        assert_eq!(u, vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]);
    }

    #[test]
    fn depth_layers() {
        let ly = QubitLayout::new(3, 0, 0, 0);
        let mut one = Circuit::new(ly);
        one.push(Gate::h(0));
        assert_eq!(one.depth(), 1);
        one.push(Gate::x(1));
        assert_eq!(one.depth(), 1);
        one.push(Gate::cx(1, 2));
        assert_eq!(one.depth(), 2);
        one.push(Gate::x(0));
        assert_eq!(one.depth(), 2);
    }

    #[test]
    fn validation() {
        assert!(matches!(
            Gate::new(GateKind::CX, vec![1], vec![Control::pos(1)], None),
            Err(CircuitError::RepeatedQubit(1))
        ));
        assert!(Gate::new(GateKind::RY, vec![0], vec![], None).is_err());
        assert!(matches!(
            Gate::new(GateKind::RY, vec![0], vec![], Some(f64::NAN)),
            Err(CircuitError::BadAngle)
        ));
        let two = vec![Control::pos(0), Control::pos(1)];
        assert!(Gate::new(GateKind::Mcx, vec![2], two.clone(), None).is_err());
        assert_eq!(Gate::controlled_x(two, 2).kind, GateKind::Toffoli);
        let mut circ = Circuit::new(QubitLayout::new(2, 0, 0, 0));
        assert!(matches!(
            circ.try_push(Gate::x(2)),
            Err(CircuitError::OutOfRange { qubit: 2, total: 2 })
        ));
    }

    #[test]
    fn cp_and_ccp_are_symmetric() {
        let ly = QubitLayout::new(3, 0, 0, 0);
        let mut a = Circuit::new(ly);
        a.push(Gate::cp(0, 2, 0.37));
        let mut b = Circuit::new(ly);
        b.push(Gate::cp(2, 0, 0.37));
        assert_eq!(a.unitary().unwrap(), b.unitary().unwrap());
        let perms = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2]];
        let base = {
            let mut k = Circuit::new(ly);
            k.push(Gate::ccp(0, 1, 2, -1.1));
            k.unitary().unwrap()
        };
        for p in perms {
            let mut k = Circuit::new(ly);
            k.push(Gate::ccp(p[0], p[1], p[2], -1.1));
            assert_eq!(k.unitary().unwrap(), base);
        }
    }

    #[test]
    fn inverse_round_trip() {
        let ly = QubitLayout::new(4, 0, 0, 0);
        let mut circ = Circuit::new(ly);
        circ.begin_section("a");
        circ.push(Gate::h(0));
        circ.push(Gate::ry(1, 0.3));
        circ.push(Gate::cx(0, 2));
        circ.begin_section("b");
        circ.push(Gate::ry(3, 1.9));
        circ.push(Gate::rz(2, 0.4));
        circ.push(Gate::cp(1, 3, 2.2));
        circ.push(Gate::ccp(0, 2, 3, 0.1));
        circ.push(Gate::cswap(3, 0, 1));
        circ.push(Gate::toffoli(Control::neg(0), Control::pos(1), 2));
        circ.push(Gate::controlled_x(
            vec![Control::pos(0), Control::neg(1), Control::pos(2)],
            3,
        ));
        let inv = circ.inverse();
        assert_eq!(
            inv.sections().iter().map(|s| s.name.as_str()).collect::<Vec<_>>(),
            ["b.inv", "a.inv"]
        );
        assert_eq!(inv.sections()[1].start, 7);
        assert_identity(&compose(&circ, &inv).unitary().unwrap(), 1e-12);
    }

    #[test]
    fn aswap_pattern_matches_partial_exchange() {
        // receiving qubit p = 0, source q = 1; basis index 2·p + q
        let theta = 0.61;
        let phi = 0.0;
        let (p, q) = (0usize, 1usize);
        let mut circ = Circuit::new(QubitLayout::new(2, 0, 0, 0));
        circ.push(Gate::cx(q, p));
        circ.push(Gate::rz(q, -(phi + PI)));
        circ.push(Gate::ry(q, -(theta + PI / 2.0)));
        circ.push(Gate::cx(p, q));
        circ.push(Gate::ry(q, theta + PI / 2.0));
        circ.push(Gate::rz(q, phi + PI));
        circ.push(Gate::cx(q, p));
        let u = circ.unitary().unwrap();
        // simulator index i = bit p + 2·bit q; reorder to 2·p + q
        let idx = |pq: usize| ((pq >> 1) & 1) << p | (pq & 1) << q;
        let (ct, st) = (theta.cos(), theta.sin());
        let want = [
            [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(ct, 0.0), Complex64::from_polar(st, phi), c(0.0, 0.0)],
            [c(0.0, 0.0), Complex64::from_polar(st, -phi), c(-ct, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ];
        for r in 0..4 {
            for s in 0..4 {
                let got = u[idx(r)][idx(s)];
                assert!((got - want[r][s]).norm() < 1e-12, "({r},{s}): {got} vs {}", want[r][s]);
            }
        }
    }

    #[test]
    fn mcx_lowering_is_exact() {
        let ly = QubitLayout::new(8, 0, 0, 0);
        let controls = vec![Control::pos(0), Control::neg(1), Control::pos(2), Control::neg(3)];
        let g = Gate::controlled_x(controls, 4);
        let lowered = lower_mcx(&g, &[5, 6]).unwrap();
        assert_eq!(lowered.len(), mcx_toffoli_cost(4));
        let mut direct = Circuit::new(ly);
        direct.push(g.clone());
        let mut chain = Circuit::new(ly);
        lowered.into_iter().for_each(|x| chain.push(x));
        // equal on every input whose work qubits are clean
        let (ud, uc) = (direct.unitary().unwrap(), chain.unitary().unwrap());
        for col in (0..256).filter(|i| i & 0b110_0000 == 0) {
            for row in 0..256 {
                assert_eq!(ud[row][col], uc[row][col], "({row},{col})");
            }
        }
        assert!(matches!(
            lower_mcx(&g, &[5]),
            Err(CircuitError::NotEnoughWork { needed: 2, .. })
        ));
    }

    #[test]
    fn positive_control_export_is_equivalent() {
        let ly = QubitLayout::new(3, 0, 0, 0);
        let mut circ = Circuit::new(ly);
        circ.begin_section("s");
        circ.push(Gate::toffoli(Control::neg(0), Control::pos(1), 2));
        circ.push(Gate::new(GateKind::CP, vec![2], vec![Control::neg(1)], Some(0.5)).unwrap());
        let pos = circ.with_positive_controls();
        assert!(pos
            .gates()
            .iter()
            .flat_map(|g| &g.controls)
            .all(|c| c.polarity == Polarity::Positive));
        assert_eq!(pos.count_gates().get(GateKind::X), 4);
        assert_eq!(circ.unitary().unwrap(), pos.unitary().unwrap());
    }

    #[test]
    fn text_round_trip() {
        let ly = QubitLayout::new(4, 1, 1, 2);
        let mut circ = Circuit::new(ly);
        circ.begin_section("first");
        circ.push(Gate::ry(0, 0.1 + 0.2));
        circ.push(Gate::cp(1, 2, -std::f64::consts::E));
        circ.begin_section("second");
        circ.push(Gate::cswap(3, 4, 5));
        circ.push(Gate::controlled_x(
            vec![Control::pos(0), Control::neg(1), Control::pos(2)],
            7,
        ));
        let text = circ.to_text();
        assert!(text.starts_with("circuit L=4 M=1 work=1 aa=2\n# section first\n"));
        assert!(text.contains("MCX 7 | 0+ 1- 2+"));
        let back = Circuit::from_text(&text).unwrap();
        assert_eq!(back, circ);
        assert!(matches!(
            Circuit::from_text("circuit L=1 M=0 work=0 aa=0\nX 3\n"),
            Err(CircuitError::Parse { line: 2, .. })
        ));
        assert!(Circuit::from_text("CP 0.1 0 | 1").is_err());
    }

    #[test]
    fn unitary_size_guard() {
        let circ = Circuit::new(QubitLayout::new(13, 0, 0, 0));
        assert!(matches!(circ.unitary(), Err(CircuitError::TooLarge { .. })));
    }
}
