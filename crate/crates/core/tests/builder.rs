mod common;

use std::f64::consts::PI;

use betheprep_core::bethe::{ap_phase, binomial, exact_state, SectorBasis};
use betheprep_core::builder::{
    amplified_layout, build_algorithm1, build_amplified, build_dicke, build_faucet_spec, build_perm_label,
    build_perm_label_spec, BuildOptions, ReflectionStyle, Spec, WorkBudget,
};
use betheprep_core::circuit::{Circuit, GateKind, QubitLayout};
use betheprep_core::resources::formula_counts;
use betheprep_core::sim::{run, RunOptions, StateVector};
use betheprep_core::Complex64;
use common::*;
use itertools::Itertools;

fn simulate(c: &Circuit) -> Vec<Complex64> {
    run(c, None, &RunOptions::default()).unwrap().into_amplitudes()
}

fn run_from(c: &Circuit, index: usize) -> Vec<Complex64> {
    let init = StateVector::basis(c.n_qubits(), index);
    run(c, Some(init), &RunOptions::default()).unwrap().into_amplitudes()
}

/// Index of the one-hot label encoding of `perm` within a label-only layout.
fn label_index(ly: &QubitLayout, perm: &[usize]) -> usize {
    perm.iter()
        .enumerate()
        .fold(0, |acc, (r, &v)| acc | 1 << ly.label(r, v))
}

fn random_theta(m: usize, seed: u64) -> Vec<Vec<f64>> {
    // small LCG; values only need to be generic
    let mut s = seed;
    let mut next = || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 2.0 * PI
    };
    let mut t = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            t[i][j] = next();
            t[j][i] = -t[i][j];
        }
    }
    t
}

#[test]
fn dicke_states_are_uniform_and_positive() {
    for (n, k) in [(2, 1), (4, 2), (8, 3), (5, 5), (6, 1), (7, 0)] {
        let amps = simulate(&build_dicke(n, k));
        let want = 1.0 / (binomial(n, k) as f64).sqrt();
        for (i, a) in amps.iter().enumerate() {
            let expect = if i.count_ones() as usize == k { want } else { 0.0 };
            assert!(
                (a - Complex64::new(expect, 0.0)).norm() < 1e-12,
                "D({n},{k}) at {i}: {a}"
            );
        }
    }
}

#[test]
fn unweighted_label_is_uniform_over_permutations() {
    for m in 1..=4 {
        let ly = QubitLayout::new(0, m, 0, 0);
        let theta = vec![vec![0.0; m]; m];
        let spec = Spec {
            l: m,
            m,
            momenta: &vec![0.0; m],
            theta: &theta,
        };
        let amps = simulate(&build_perm_label_spec(&spec, false, ly));
        let valid: Vec<usize> = (0..m).permutations(m).map(|p| label_index(&ly, &p)).collect();
        let fact: f64 = (1..=m).map(|i| i as f64).product();
        for (i, a) in amps.iter().enumerate() {
            if valid.contains(&i) {
                assert!(
                    (a - Complex64::new(1.0 / fact.sqrt(), 0.0)).norm() < 1e-12,
                    "M={m} idx {i}: {a}"
                );
            } else {
                assert!(a.norm() < 1e-12, "M={m}: weight on invalid label {i}");
            }
        }
    }
}

#[test]
fn partial_swap_weights() {
    // After introducing value v, it sits in subregister j with probability
    // 1/(v+1) for each j ≤ v; the largest value therefore lands uniformly.
    for m in 2..=4 {
        let ly = QubitLayout::new(0, m, 0, 0);
        let theta = vec![vec![0.0; m]; m];
        let spec = Spec {
            l: m,
            m,
            momenta: &vec![0.0; m],
            theta: &theta,
        };
        let amps = simulate(&build_perm_label_spec(&spec, false, ly));
        for j in 0..m {
            let bit = 1 << ly.label(j, m - 1);
            let p: f64 = amps
                .iter()
                .enumerate()
                .filter(|(i, _)| i & bit != 0)
                .map(|(_, a)| a.norm_sqr())
                .sum();
            assert!((p - 1.0 / m as f64).abs() < 1e-12, "M={m} j={j}: {p}");
        }
    }
}

#[test]
fn weighted_label_carries_ap_phases() {
    for m in 2..=4 {
        for seed in 0..3 {
            let theta = random_theta(m, seed + 10 * m as u64);
            let ly = QubitLayout::new(0, m, 0, 0);
            let spec = Spec {
                l: m,
                m,
                momenta: &vec![0.0; m],
                theta: &theta,
            };
            let amps = simulate(&build_perm_label_spec(&spec, true, ly));
            let fact: f64 = (1..=m).map(|i| i as f64).product();
            for p in (0..m).permutations(m) {
                let got = amps[label_index(&ly, &p)] * fact.sqrt();
                let want = ap_phase(&theta, &p);
                assert!((got - want).norm() < 1e-10, "M={m} P={p:?}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn fixture_label_state() {
    let s = four_site_fixture();
    let c = build_perm_label(&s, true).unwrap();
    let amps = simulate(&c);
    let ly = c.layout;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let id = amps[1 << ly.label(0, 0) | 1 << ly.label(1, 1)];
    let swapped = amps[1 << ly.label(0, 1) | 1 << ly.label(1, 0)];
    assert!((id - Complex64::new(r, 0.0)).norm() < 1e-12);
    let a21 = -Complex64::from_polar(1.0, s.theta[1][0]);
    assert!((swapped - a21 * r).norm() < 1e-12, "{swapped} vs {}", a21 * r);
    let exact = exact_state(&s).unwrap();
    assert!((exact.ap_phases[&vec![1, 0]] - a21).norm() < 1e-14);
}

#[test]
fn single_down_spin_label_is_one_x() {
    let s = solve(5, 1, -0.5, "1");
    let c = build_perm_label(&s, true).unwrap();
    assert_eq!(c.len(), 1);
    assert_eq!(c.gates()[0].kind, GateKind::X);
}

/// Classical faucet walk: phase accumulated by faucet j up to the j-th down
/// spin, with faucet j reading label subregister j.
fn walk_phase(mask: u64, perm: &[usize], k: &[f64]) -> f64 {
    SectorBasis::positions(mask)
        .zip(perm)
        .map(|(x, &v)| k[v] * x as f64)
        .sum()
}

#[test]
fn faucet_applies_position_phases() {
    let cases: Vec<(usize, usize, Vec<f64>)> = vec![
        (3, 1, vec![0.7]),
        (4, 2, FIXTURE_K.to_vec()),
        (5, 3, vec![0.3, 1.9, -2.4]),
        (6, 3, vec![1.1, -0.2, 2.9]),
    ];
    for (l, m, k) in cases {
        let theta = vec![vec![0.0; m]; m];
        let spec = Spec {
            l,
            m,
            momenta: &k,
            theta: &theta,
        };
        let ly = QubitLayout::new(l, m, 1, 0);
        for (skip, budget) in [
            (false, WorkBudget::Single),
            (true, WorkBudget::Single),
            (false, WorkBudget::NativeMcx),
        ] {
            let opts = BuildOptions {
                edge_skip: skip,
                work_budget: budget,
                ..BuildOptions::default()
            };
            let c = build_faucet_spec(&spec, &opts, ly);
            for &mask in SectorBasis::new(l, m).states() {
                for perm in (0..m).permutations(m) {
                    let idx = mask as usize | label_index(&ly, &perm);
                    let out = run_from(&c, idx);
                    let want = Complex64::from_polar(1.0, walk_phase(mask, &perm, &k));
                    // faucets and work back to zero: the output is the same basis state
                    assert!(
                        (out[idx] - want).norm() < 1e-12,
                        "L={l} M={m} skip={skip} mask={mask:b} P={perm:?}: {} vs {want}",
                        out[idx]
                    );
                }
            }
        }
    }
}

#[test]
fn faucet_phase_examples() {
    // one down spin at x = 2 picks up e^{2ik}; one at x = 0 picks up nothing
    let k = [0.9];
    let theta = vec![vec![0.0]];
    let spec = Spec {
        l: 3,
        m: 1,
        momenta: &k,
        theta: &theta,
    };
    let ly = QubitLayout::new(3, 1, 1, 0);
    let c = build_faucet_spec(&spec, &BuildOptions::default(), ly);
    let label = 1 << ly.label(0, 0);
    let out = run_from(&c, 0b100 | label);
    assert!((out[0b100 | label] - Complex64::from_polar(1.0, 2.0 * k[0])).norm() < 1e-12);
    let out = run_from(&c, 0b001 | label);
    assert!((out[0b001 | label] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn edge_skip_reduces_counts() {
    let (k, theta) = betheprep_core::builder::placeholder_momenta(12, 3);
    let spec = Spec {
        l: 12,
        m: 3,
        momenta: &k,
        theta: &theta,
    };
    let ly = QubitLayout::new(12, 3, 1, 0);
    let full = build_faucet_spec(&spec, &BuildOptions::default(), ly).count_gates();
    let skip = build_faucet_spec(&spec, &BuildOptions::default().with_edge_skip(true), ly).count_gates();
    assert!(skip.cp_like() < full.cp_like());
    assert!(skip.get(GateKind::Toffoli) < full.get(GateKind::Toffoli));
}

#[test]
fn fragments_invert() {
    let s = solve(6, 3, -0.5, "-1,0,1");
    let opts = BuildOptions::default();
    let full = build_algorithm1(&s, &opts).unwrap();
    for (name, range) in full.section_ranges() {
        let mut frag = Circuit::new(full.layout);
        for g in &full.gates()[range] {
            frag.push(g.clone());
        }
        let mut round = frag.clone();
        round.append(&frag.inverse()).unwrap();
        // a generic product input exercises every branch
        let n = full.n_qubits();
        let mut init = Circuit::new(full.layout);
        for q in 0..n {
            init.push(betheprep_core::Gate::ry(q, 0.3 + 0.17 * q as f64));
        }
        let start = simulate(&init);
        let end = run(
            &round,
            Some(StateVector::from_amplitudes(start.clone()).unwrap()),
            &RunOptions::default(),
        )
        .unwrap()
        .into_amplitudes();
        let err = start.iter().zip(&end).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "section {name}: {err}");
    }
}

#[test]
fn fixture_end_to_end() {
    let s = four_site_fixture();
    let (out, exact) = prepare(&s, &BuildOptions::default());
    assert!(out.fidelity.unwrap() > 1.0 - 1e-8);
    assert!((out.success_probability - exact.predicted_success_probability()).abs() < 1e-10);
    assert!((out.success_probability + out.junk_norm - 1.0).abs() < 1e-10);
    assert!(out.leakage < 1e-20);
}

#[test]
fn single_down_spin_always_succeeds() {
    let s = solve(5, 1, -0.5, "2");
    let (out, _) = prepare(&s, &BuildOptions::default());
    assert!((out.success_probability - 1.0).abs() < 1e-12);
    assert!((out.fidelity.unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn l6_m2_prepares_an_eigenstate() {
    let s = solve(6, 2, -0.5, "-1/2,1/2");
    let (out, _) = prepare(&s, &BuildOptions::default());
    let basis = SectorBasis::new(6, 2);
    let post = out.sector_state(&basis).unwrap();
    let (_, r) = residual(&s.params, &post);
    assert!(r <= 1e-8, "{r}");
}

#[test]
fn grover_identity_both_reflection_styles() {
    let s = four_site_fixture();
    let (base, _) = prepare(&s, &BuildOptions::default());
    let p = base.success_probability;
    let want = (3.0 * p.sqrt().asin()).sin().powi(2);
    for style in [ReflectionStyle::Mcx, ReflectionStyle::AncillaTree] {
        let opts = BuildOptions::default().with_reflection(style);
        let c = build_amplified(&s, 1, &opts).unwrap();
        assert_eq!(c.layout, amplified_layout(4, 2, style));
        let (amp, _) = prepare(&s, &opts.with_rounds(1));
        assert!(
            (amp.success_probability - want).abs() < 1e-8,
            "{style:?}: {} vs {want}",
            amp.success_probability
        );
        assert!(amp.fidelity.unwrap() > 1.0 - 1e-8);
    }
    assert!(build_amplified(&s, 0, &BuildOptions::default()).is_err());
}

#[test]
fn tree_reflection_ancilla_block() {
    let ly = amplified_layout(100, 5, ReflectionStyle::AncillaTree);
    assert_eq!(ly.aa, 100 + 25 - 5);
}

#[test]
fn counts_match_formulas() {
    for m in 2..=5 {
        for l in (2 * m)..=30 {
            let (k, theta) = betheprep_core::builder::placeholder_momenta(l, m);
            let spec = Spec {
                l,
                m,
                momenta: &k,
                theta: &theta,
            };
            let c = betheprep_core::builder::build_algorithm1_spec(
                &spec,
                &BuildOptions::default(),
                QubitLayout::new(l, m, 1, 0),
            );
            let f = formula_counts(l, m).unwrap();
            let counts = c.count_gates();
            assert_eq!(counts.cp_like() as u64, f.total_cp_like, "L={l} M={m}");
            assert_eq!(
                c.section_gates("perm_label_ap")
                    .iter()
                    .filter(|g| g.kind == GateKind::CP)
                    .count() as u64,
                f.ap_cp
            );
            assert_eq!(counts.get(GateKind::Toffoli) as u64, f.faucet_toffoli, "L={l} M={m}");
            assert_eq!(c.n_qubits() as u64, f.qubits_core);
        }
    }
}

#[test]
fn unconverged_solution_is_rejected() {
    let mut s = four_site_fixture();
    s.converged = false;
    assert!(build_algorithm1(&s, &BuildOptions::default()).is_err());
}
