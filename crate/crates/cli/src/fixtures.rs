//! Fixture cases: known problems with expected values, compared
//! field-by-field with a printed diff on mismatch.

use std::path::Path;
use std::process::ExitCode;

use serde::Deserialize;

use wronsky_core::analysis::{analyze_problem, AnalysisOptions, IntersectReport};
use wronsky_core::dyadic::{roots_squarefree, Dyadic};
use wronsky_core::nondeg::{bethe_residuals, BetheCoordinates};
use wronsky_core::roots::RootValue;
use wronsky_core::{ExactScalar, Partition, Polynomial, SchubertProblem};

const BUNDLED: &str = include_str!("../fixtures/sec53.json");

#[derive(Deserialize)]
struct FixtureCase {
    name: String,
    problem: SchubertProblem,
    expected: Expected,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Expected {
    #[serde(default)]
    empty: Option<bool>,
    #[serde(default)]
    constants: Option<Vec<ExactScalar>>,
    #[serde(default)]
    basis: Option<Vec<Polynomial>>,
    #[serde(default)]
    wronskians_raw: Option<Vec<Polynomial>>,
    #[serde(default)]
    wronskians_monic: Option<Vec<Polynomial>>,
    #[serde(default)]
    t_values: Option<Vec<ExpectedBlock>>,
    #[serde(default)]
    nondegenerate: Option<bool>,
    #[serde(default)]
    residuals_exactly_zero: Option<bool>,
    #[serde(default)]
    numeric_residual_max_below: Option<f64>,
    #[serde(default)]
    bethe_weight: Option<Vec<usize>>,
    #[serde(default)]
    weight_vector_singular: Option<bool>,
}

#[derive(Deserialize)]
struct ExpectedBlock {
    block: usize,
    values: Vec<ExactScalar>,
}

fn scalar_key(z: &ExactScalar) -> String {
    z.to_exact_string()
}

fn check_case(case: &FixtureCase, precision: u32, diffs: &mut Vec<String>) {
    let want_wv = case.expected.weight_vector_singular.is_some();
    let opts = AnalysisOptions {
        precision,
        weight_vector: want_wv,
        ..AnalysisOptions::default()
    };
    let name = &case.name;
    let report: IntersectReport = match analyze_problem(&case.problem, &opts) {
        Ok(r) => r,
        Err(e) => {
            diffs.push(format!("{name}: analysis failed: {e}"));
            return;
        }
    };
    if let Some(expect_empty) = case.expected.empty {
        if report.empty != expect_empty {
            diffs.push(format!(
                "{name}: empty: expected {expect_empty}, got {}",
                report.empty
            ));
        }
        if expect_empty {
            return;
        }
    }
    let Some(analysis) = &report.analysis else {
        diffs.push(format!("{name}: expected a non-empty intersection"));
        return;
    };
    if let Some(constants) = &case.expected.constants {
        if constants != &analysis.constants {
            diffs.push(format!(
                "{name}: constants: expected {constants:?}, got {:?}",
                analysis.constants
            ));
        }
    }
    if let Some(basis) = &case.expected.basis {
        if basis != &analysis.basis {
            diffs.push(format!(
                "{name}: basis: expected {basis:?}, got {:?}",
                analysis.basis
            ));
        }
    }
    if let Some(ws) = &case.expected.wronskians_raw {
        if ws != &analysis.wronskians_raw {
            diffs.push(format!(
                "{name}: raw Wronskians: expected {ws:?}, got {:?}",
                analysis.wronskians_raw
            ));
        }
    }
    if let Some(ws) = &case.expected.wronskians_monic {
        if ws != &analysis.wronskians_monic {
            diffs.push(format!(
                "{name}: monic Wronskians: expected {ws:?}, got {:?}",
                analysis.wronskians_monic
            ));
        }
    }
    if let Some(blocks) = &case.expected.t_values {
        for eb in blocks {
            let Some(got) = analysis.t_values.iter().find(|b| b.block == eb.block) else {
                diffs.push(format!("{name}: no t-value block {}", eb.block));
                continue;
            };
            let mut got_exact = Vec::new();
            let mut all_exact = true;
            for v in &got.values {
                match v {
                    RootValue::Exact(z) => got_exact.push(z.clone()),
                    RootValue::Numeric(_) => all_exact = false,
                }
            }
            if !all_exact {
                diffs.push(format!(
                    "{name}: t({}) has numeric entries, expected exact values",
                    eb.block
                ));
                continue;
            }
            let mut want = eb.values.clone();
            let mut got_sorted = got_exact;
            want.sort_by_key(scalar_key);
            got_sorted.sort_by_key(scalar_key);
            if want != got_sorted {
                diffs.push(format!(
                    "{name}: t({}): expected {want:?}, got {got_sorted:?}",
                    eb.block
                ));
            }
        }
    }
    if let Some(nd) = case.expected.nondegenerate {
        if analysis.nondegenerate != nd {
            diffs.push(format!(
                "{name}: nondegenerate: expected {nd}, got {}",
                analysis.nondegenerate
            ));
        }
    }
    if let Some(zero) = case.expected.residuals_exactly_zero {
        if analysis.residuals.exactly_zero != zero {
            diffs.push(format!(
                "{name}: residuals exactly zero: expected {zero}, got {} (max {})",
                analysis.residuals.exactly_zero, analysis.residuals.max_abs
            ));
        }
    }
    if let Some(bound) = case.expected.numeric_residual_max_below {
        match numeric_residual_max(&case.problem, analysis, precision) {
            Ok(max_sq) => {
                let bound_sq = Dyadic::from_rational(
                    &num_rational::BigRational::from_float(bound * bound)
                        .expect("finite bound"),
                    precision,
                );
                if max_sq.cmp_value(&bound_sq) == std::cmp::Ordering::Greater {
                    diffs.push(format!(
                        "{name}: numeric residual max {} exceeds {bound}",
                        max_sq.to_f64().sqrt()
                    ));
                }
            }
            Err(e) => diffs.push(format!("{name}: numeric residual check failed: {e}")),
        }
    }
    if let Some(weight) = &case.expected.bethe_weight {
        let want = Partition::new(weight.clone()).expect("valid fixture partition");
        if analysis.bethe_weight != want {
            diffs.push(format!(
                "{name}: bethe weight: expected {want}, got {}",
                analysis.bethe_weight
            ));
        }
    }
    if let Some(singular) = case.expected.weight_vector_singular {
        match &analysis.weight_vector {
            Some(wv) => {
                if wv.singular != singular || !wv.nonzero {
                    diffs.push(format!(
                        "{name}: weight vector: expected singular={singular} and nonzero, got singular={} nonzero={}",
                        wv.singular, wv.nonzero
                    ));
                }
            }
            None => diffs.push(format!("{name}: weight vector missing from report")),
        }
    }
}

/// Recompute every additional root with the numeric finder and evaluate
/// the Bethe residuals at the given precision.
fn numeric_residual_max(
    problem: &SchubertProblem,
    analysis: &wronsky_core::analysis::IntersectAnalysis,
    precision: u32,
) -> wronsky_core::Result<Dyadic> {
    let mut blocks = Vec::new();
    for t in &analysis.t_polys {
        let mut block = Vec::new();
        for (factor, mult) in t.squarefree_decomposition() {
            for root in roots_squarefree(&factor, precision)? {
                for _ in 0..mult {
                    block.push(root.clone());
                }
            }
        }
        blocks.push(block);
    }
    let bc = BetheCoordinates::new(
        blocks,
        (
            problem.a.clone(),
            Partition::special(problem.m, problem.rank_n),
        ),
    );
    let residuals = bethe_residuals(&bc)?;
    let mut max_sq = Dyadic::zero();
    for r in residuals {
        let sq = r.abs_sq();
        if sq.cmp_value(&max_sq) == std::cmp::Ordering::Greater {
            max_sq = sq;
        }
    }
    Ok(max_sq)
}

pub(crate) fn run(path: Option<&Path>, precision: u32) -> ExitCode {
    let text = match path {
        Some(p) => match std::fs::read_to_string(p) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", p.display());
                return ExitCode::from(2);
            }
        },
        None => BUNDLED.to_string(),
    };
    let cases: Vec<FixtureCase> = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: cannot parse fixture file: {e}");
            return ExitCode::from(2);
        }
    };
    if cases.is_empty() {
        eprintln!("warning: fixture list is empty");
        return ExitCode::SUCCESS;
    }
    let mut diffs = Vec::new();
    for case in &cases {
        let before = diffs.len();
        check_case(case, precision, &mut diffs);
        if diffs.len() == before {
            println!("case {}: ok", case.name);
        } else {
            println!("case {}: MISMATCH", case.name);
        }
    }
    if diffs.is_empty() {
        println!("all {} fixture cases passed", cases.len());
        ExitCode::SUCCESS
    } else {
        for d in &diffs {
            eprintln!("{d}");
        }
        ExitCode::from(1)
    }
}
