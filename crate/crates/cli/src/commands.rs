use std::collections::BTreeMap;
use std::path::Path;

use betheprep_core::bethe::{eigen_residual, enumerate_solutions, exact_state, solve_bethe};
use betheprep_core::builder;
use betheprep_core::resources::{alternative_costs, estimate_structure, RepetitionPolicy};
use betheprep_core::sim::{self, project_success, sample_counts, OutcomeRecord, RunOptions};
use betheprep_core::{
    BetheSolution, BuildOptions, ModelParams, QuantumNumber, ReflectionStyle, ResourceModel, ResourceReport, SimError,
};
use log::{info, warn};
use rayon::prelude::*;

use crate::args::*;
use crate::error::CliError;
use crate::output::{self, emit, join, BuildSummary, CompareRow, EstimateRow, OutcomeRow, RunRecord, SolutionRow};

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Solve(a) => solve(&a),
        Command::Build(a) => build(&a),
        Command::Run(a) => run(&a),
        Command::Sweep(a) => sweep(&a),
        Command::Estimate(a) => estimate(&a, false),
        Command::Compare(a) => estimate(&a, true),
    }
}

fn params(model: &ModelArgs) -> Result<ModelParams, CliError> {
    let (Some(l), Some(m), Some(jz)) = (model.l, model.m, model.jz) else {
        return Err(CliError::Invalid("--L, --M and --jz are required".into()));
    };
    Ok(ModelParams::new(l, m, model.jxy, jz)?)
}

fn solve_one(params: &ModelParams, quantum_numbers: &str) -> Result<BetheSolution, CliError> {
    let qn = QuantumNumber::parse_list(quantum_numbers)?;
    let s = solve_bethe(params, &qn)?;
    if !s.converged {
        return Err(CliError::NoSolution(format!(
            "I = ({}) did not converge after {} iterations (residual {:e})",
            join(&qn),
            s.iterations,
            s.residual
        )));
    }
    Ok(s)
}

fn enumerate(params: &ModelParams) -> Result<Vec<BetheSolution>, CliError> {
    let e = enumerate_solutions(params);
    for (qn, err) in &e.failures {
        info!(
            "L={} M={} J_z={} I = ({}): {err}",
            params.l(),
            params.m(),
            params.j_z(),
            join(qn)
        );
    }
    info!(
        "L={} M={} J_z={}: {} distinct solutions, {} rejected sets",
        params.l(),
        params.m(),
        params.j_z(),
        e.solutions.len(),
        e.failures.len()
    );
    if e.solutions.is_empty() {
        return Err(CliError::NoSolution(format!(
            "no converged solutions at L={} M={} J_z={}",
            params.l(),
            params.m(),
            params.j_z()
        )));
    }
    Ok(e.solutions)
}

/// Accepts one solution object or an array of them.
fn read_solutions(path: &Path) -> Result<Vec<BetheSolution>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    let parsed = if value.is_array() {
        serde_json::from_value(value)
    } else {
        serde_json::from_value(value).map(|s| vec![s])
    };
    let all: Vec<BetheSolution> = parsed.map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    let (good, bad): (Vec<_>, Vec<_>) = all.into_iter().partition(|s| s.converged);
    for s in &bad {
        warn!("skipping unconverged solution I = ({})", join(&s.quantum_numbers));
    }
    if good.is_empty() {
        return Err(CliError::NoSolution(format!(
            "{} holds no converged solutions",
            path.display()
        )));
    }
    Ok(good)
}

fn select(model: &ModelArgs, select: &SelectArgs) -> Result<Vec<BetheSolution>, CliError> {
    if let Some(path) = &select.solution {
        return read_solutions(path);
    }
    let p = params(model)?;
    if select.enumerate {
        enumerate(&p)
    } else if let Some(qn) = &select.quantum_numbers {
        Ok(vec![solve_one(&p, qn)?])
    } else {
        Err(CliError::Invalid(
            "give --quantum-numbers, --enumerate or --solution".into(),
        ))
    }
}

fn build_options(c: &CircuitArgs) -> BuildOptions {
    let style = match c.reflection {
        Reflection::Tree => ReflectionStyle::AncillaTree,
        Reflection::Mcx => ReflectionStyle::Mcx,
    };
    BuildOptions::default()
        .with_rounds(c.amplify)
        .with_edge_skip(c.edge_skip)
        .with_reflection(style)
}

fn unsupported(command: &str, format: Format, allowed: &str) -> CliError {
    CliError::Invalid(format!("{command} cannot write {format:?}; use {allowed}"))
}

fn solve(a: &SolveArgs) -> Result<(), CliError> {
    let p = params(&a.model)?;
    let solutions = match &a.quantum_numbers {
        Some(qn) if !a.enumerate => vec![solve_one(&p, qn)?],
        _ => enumerate(&p)?,
    };
    let bytes = match a.output.format.unwrap_or(Format::Json) {
        Format::Json if a.enumerate => output::json(&solutions)?,
        Format::Json => output::json(&solutions[0])?,
        Format::Csv => output::csv(&solutions.iter().map(SolutionRow::from).collect::<Vec<_>>())?,
        f => return Err(unsupported("solve", f, "json or csv")),
    };
    emit(a.output.out.as_ref(), &bytes)
}

fn build(a: &BuildArgs) -> Result<(), CliError> {
    let solutions = select(&a.model, &a.select)?;
    let [solution] = solutions.as_slice() else {
        return Err(CliError::Invalid(format!(
            "build takes exactly one solution, got {}",
            solutions.len()
        )));
    };
    let circuit = builder::build(solution, &build_options(&a.circuit))?;
    let bytes = match a.output.format.unwrap_or(Format::CircuitText) {
        Format::CircuitText => circuit.to_text().into_bytes(),
        Format::Json => output::json(&BuildSummary {
            l: circuit.layout.l,
            m: circuit.layout.m,
            qubits: circuit.n_qubits(),
            gates: circuit.len(),
            depth: circuit.depth(),
            counts: circuit
                .count_gates()
                .iter()
                .map(|(k, n)| (k.name().to_string(), n))
                .collect(),
            sections: circuit.sections().to_vec(),
        })?,
        f => return Err(unsupported("build", f, "circuit-text or json")),
    };
    emit(a.output.out.as_ref(), &bytes)
}

/// Builds, simulates and post-selects one solution.
fn simulate(s: &BetheSolution, opts: &BuildOptions, sim_args: &SimArgs) -> Result<RunRecord, CliError> {
    let circuit = builder::build(s, opts)?;
    // fail on the cap before allocating the oracle
    if circuit.n_qubits() > sim_args.cap {
        return Err(SimError::CapExceeded {
            needed: circuit.n_qubits(),
            cap: sim_args.cap,
            l: s.l(),
            m: s.m(),
        }
        .into());
    }
    let exact = exact_state(s)?;
    let run_opts = RunOptions {
        cap: sim_args.cap,
        ..RunOptions::default()
    };
    let state = sim::run(&circuit, None, &run_opts)?;
    let outcome = project_success(&state, &circuit.layout, &exact)?;
    let (energy, residual) = match outcome.sector_state(&exact.basis()) {
        Some(mut v) => {
            let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|a| *a /= n);
            let (e, r) = eigen_residual(&s.params, &v)?;
            (Some(e), Some(r))
        }
        None => (None, None),
    };
    let label_counts = (sim_args.shots > 0).then(|| {
        let qubits: Vec<usize> = circuit.layout.label_range().collect();
        sample_counts(&state, &qubits, sim_args.shots, sim_args.seed)
            .into_iter()
            .map(|(k, n)| {
                let bits: String = (0..qubits.len())
                    .map(|i| if k >> i & 1 == 1 { '1' } else { '0' })
                    .collect();
                (bits, n)
            })
            .collect::<BTreeMap<_, _>>()
    });
    Ok(RunRecord {
        outcome: OutcomeRecord {
            success_probability: outcome.success_probability,
            fidelity: outcome.fidelity,
            junk_norm: outcome.junk_norm,
            energy,
            residual,
            l: s.l(),
            m: s.m(),
            j_xy: s.params.j_xy(),
            j_z: s.params.j_z(),
            quantum_numbers: s.quantum_numbers.iter().map(ToString::to_string).collect(),
            momenta: s.momenta.clone(),
            seed: sim_args.seed,
            amplification_rounds: opts.amplification_rounds,
        },
        leakage: outcome.leakage,
        label_counts,
    })
}

/// Simulates every solution in parallel, keeping input order. A cap error
/// aborts; other per-solution failures are logged and skipped.
fn simulate_all<'a>(
    solutions: &'a [BetheSolution],
    opts: &BuildOptions,
    sim_args: &SimArgs,
) -> Result<Vec<(RunRecord, &'a BetheSolution)>, CliError> {
    let results: Vec<Result<RunRecord, CliError>> = solutions.par_iter().map(|s| simulate(s, opts, sim_args)).collect();
    let mut out = Vec::with_capacity(results.len());
    let mut first_error = None;
    for (s, r) in solutions.iter().zip(results) {
        match r {
            Ok(rec) => out.push((rec, s)),
            Err(e @ CliError::Cap(_)) => return Err(e),
            Err(e) => {
                warn!("J_z={} I = ({}): {e}", s.params.j_z(), join(&s.quantum_numbers));
                first_error.get_or_insert(e);
            }
        }
    }
    match first_error {
        Some(e) if out.is_empty() => Err(e),
        _ => Ok(out),
    }
}

fn write_outcomes(
    records: &[(RunRecord, &BetheSolution)],
    out: &OutputArgs,
    default: Format,
    command: &str,
) -> Result<(), CliError> {
    let bytes = match out.format.unwrap_or(default) {
        Format::Json => output::json(&records.iter().map(|(r, _)| r).collect::<Vec<_>>())?,
        Format::Csv => output::csv(&records.iter().map(|(r, s)| OutcomeRow::new(r, s)).collect::<Vec<_>>())?,
        f => return Err(unsupported(command, f, "json or csv")),
    };
    emit(out.out.as_ref(), &bytes)
}

fn run(a: &RunArgs) -> Result<(), CliError> {
    let solutions = select(&a.model, &a.select)?;
    let records = simulate_all(&solutions, &build_options(&a.circuit), &a.sim)?;
    write_outcomes(&records, &a.output, Format::Json, "run")
}

fn parse_floats(s: &str) -> Result<Vec<f64>, CliError> {
    let values = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().ok().filter(|v| v.is_finite()))
        .collect::<Option<Vec<f64>>>()
        .ok_or_else(|| CliError::Invalid(format!("cannot parse {s:?} as a list of numbers")))?;
    if values.is_empty() {
        return Err(CliError::Invalid("empty --jz list".into()));
    }
    Ok(values)
}

fn sweep(a: &SweepArgs) -> Result<(), CliError> {
    let mut solutions = Vec::new();
    for jz in parse_floats(&a.jz)? {
        let p = ModelParams::new(a.l, a.m, a.jxy, jz)?;
        match enumerate(&p) {
            Ok(s) => solutions.extend(s),
            Err(CliError::NoSolution(msg)) => warn!("{msg}"),
            Err(e) => return Err(e),
        }
    }
    if solutions.is_empty() {
        return Err(CliError::NoSolution(format!(
            "no converged solutions at L={} M={} for any J_z",
            a.l, a.m
        )));
    }
    let records = simulate_all(&solutions, &build_options(&a.circuit), &a.sim)?;
    write_outcomes(&records, &a.output, Format::Csv, "sweep")
}

/// Sizes as `5`, `10,20,30` or an inclusive range `40..100:10`.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Invalid(format!("cannot parse {s:?}; use 5, 10,20 or 40..100:10"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match part.split_once("..") {
            Some((lo, rest)) => {
                let (hi, step) = rest.split_once(':').unwrap_or((rest, "1"));
                let lo: usize = lo.trim().parse().map_err(|_| bad())?;
                let hi: usize = hi.trim().parse().map_err(|_| bad())?;
                let step: usize = step.trim().parse().map_err(|_| bad())?;
                if step == 0 || lo > hi {
                    return Err(bad());
                }
                out.extend((lo..=hi).step_by(step));
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn estimate(a: &EstimateArgs, compare: bool) -> Result<(), CliError> {
    let ls = parse_sizes(&a.l)?;
    let ms = parse_sizes(&a.m)?;
    let policy = match (a.success_probability, a.repetitions) {
        (Some(p), _) => RepetitionPolicy::Measured(p),
        (None, Repetitions::WorstCase) => RepetitionPolicy::WorstCaseFactorial,
        (None, Repetitions::Amplified) => RepetitionPolicy::AmplifiedSqrt,
    };
    let model = ResourceModel::new(a.epsilon, policy)?;
    let opts = build_options(&a.circuit);
    let grid: Vec<(usize, usize)> = ms
        .iter()
        .flat_map(|&m| ls.iter().map(move |&l| (l, m)))
        .filter(|&(l, m)| {
            let ok = m >= 1 && m <= l;
            if !ok {
                warn!("skipping L={l} M={m}: need 1 <= M <= L");
            }
            ok
        })
        .collect();
    if grid.is_empty() {
        return Err(CliError::Invalid("no (L, M) point with 1 <= M <= L".into()));
    }
    let reports = grid
        .par_iter()
        .map(|&(l, m)| estimate_structure(l, m, &opts, &model).map_err(CliError::from))
        .collect::<Result<Vec<ResourceReport>, _>>()?;
    let format = a.output.format.unwrap_or(Format::Csv);
    let command = if compare { "compare" } else { "estimate" };
    let bytes = if compare {
        let rows = reports
            .iter()
            .map(|r| Ok(CompareRow::new(EstimateRow::from(r), &alternative_costs(r.l, r.m)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        match format {
            Format::Json => output::json(&rows)?,
            Format::Csv => output::csv(&rows)?,
            f => return Err(unsupported(command, f, "json or csv")),
        }
    } else {
        let rows: Vec<EstimateRow> = reports.iter().map(EstimateRow::from).collect();
        match format {
            Format::Json => output::json(&rows)?,
            Format::Csv => output::csv(&rows)?,
            f => return Err(unsupported(command, f, "json or csv")),
        }
    };
    emit(a.output.out.as_ref(), &bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(parse_sizes("5").unwrap(), vec![5]);
        assert_eq!(parse_sizes("10, 20").unwrap(), vec![10, 20]);
        assert_eq!(parse_sizes("40..100:20").unwrap(), vec![40, 60, 80, 100]);
        assert_eq!(parse_sizes("2..4,9").unwrap(), vec![2, 3, 4, 9]);
        assert!(parse_sizes("4..2").is_err());
        assert!(parse_sizes("1..5:0").is_err());
        assert!(parse_sizes("x").is_err());
    }

    #[test]
    fn floats() {
        assert_eq!(parse_floats("-0.5, 0.5").unwrap(), vec![-0.5, 0.5]);
        assert!(parse_floats("nan").is_err());
        assert!(parse_floats("").is_err());
    }
}
