//! Range and randomized surveys: truncated-binomial discriminants,
//! pairwise common roots (evidence only), the Wronskian product form of
//! truncated-binomial planes, and the closed-form determinant law.

use std::process::ExitCode;

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use wronsky_core::special::{
    binomial_system_determinant, closed_form_determinant, truncated_basis, truncated_binomial,
};
use wronsky_core::{discriminant, resultant, Polynomial};

use crate::SurveyArgs;

#[derive(Serialize)]
struct SurveyReport {
    kind: String,
    seed: u64,
    cases: usize,
    passes: usize,
    failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

impl SurveyReport {
    fn print(&self, json: bool) {
        if json {
            println!(
                "{}",
                serde_json::to_string_pretty(self).expect("serializable")
            );
            return;
        }
        println!(
            "survey {}: {}/{} passed (seed {})",
            self.kind, self.passes, self.cases, self.seed
        );
        if let Some(note) = &self.note {
            println!("note: {note}");
        }
        for f in &self.failures {
            println!("FAILURE: {f}");
        }
    }
}

/// Delta(P_{k;d}) != 0 for 0 < k < d <= d_max.
fn discriminants(d_max: usize) -> SurveyReport {
    let mut cases = 0;
    let mut passes = 0;
    let mut failures = Vec::new();
    for d in 2..=d_max {
        for k in 1..d {
            cases += 1;
            let p = truncated_binomial(k, d).expect("k < d");
            let disc = discriminant(&p).expect("degree >= 1");
            if disc.is_zero() {
                failures.push(format!("Delta(P_{{{k};{d}}}) = 0"));
            } else {
                passes += 1;
            }
        }
    }
    SurveyReport {
        kind: "discriminants".into(),
        seed: 0,
        cases,
        passes,
        failures,
        note: None,
    }
}

/// Res(P_{k;d}, P_{m;d}) != 0 for 0 < k < m < d <= d_max. Reported as
/// evidence only; a counterexample is flagged, not fatal.
fn common_roots(d_max: usize) -> SurveyReport {
    let mut cases = 0;
    let mut passes = 0;
    let mut failures = Vec::new();
    for d in 3..=d_max {
        for k in 1..d {
            for m in k + 1..d {
                cases += 1;
                let pk = truncated_binomial(k, d).expect("k < d");
                let pm = truncated_binomial(m, d).expect("m < d");
                let r = resultant(&pk, &pm).expect("nonzero");
                if r.is_zero() {
                    failures.push(format!(
                        "COUNTEREXAMPLE: P_{{{k};{d}}} and P_{{{m};{d}}} share a root"
                    ));
                } else {
                    passes += 1;
                }
            }
        }
    }
    SurveyReport {
        kind: "common-roots".into(),
        seed: 0,
        cases,
        passes,
        failures,
        note: Some(
            "evidence for the pairwise-coprimality conjecture; counterexamples are flagged but do not fail the survey"
                .into(),
        ),
    }
}

fn increasing_tuples(n: usize, below: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, below: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in start..below {
            cur.push(v);
            rec(n, below, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, below, 0, &mut cur, &mut out);
    out
}

/// Monic Wronskian of every truncated-binomial family equals
/// x^{sum m - N(N-1)/2} (x+1)^{d-N}, with the stated cell partitions.
fn wronski_corollary(rank: usize, d_max: usize) -> SurveyReport {
    let mut cases = 0;
    let mut passes = 0;
    let mut failures = Vec::new();
    for d in rank + 1..=d_max {
        for ms in increasing_tuples(rank, d) {
            cases += 1;
            match truncated_basis(&ms, d) {
                Ok((plane, _problem)) => {
                    let sum: usize = ms.iter().sum();
                    let xexp = sum - rank * (rank - 1) / 2;
                    let expect = (Polynomial::x().pow(xexp)
                        * Polynomial::from_ints(&[1, 1]).pow(d - rank))
                    .monic();
                    if plane.wronskian_monic() == expect {
                        passes += 1;
                    } else {
                        failures.push(format!("ms={ms:?}, d={d}: Wronskian mismatch"));
                    }
                }
                Err(e) => failures.push(format!("ms={ms:?}, d={d}: {e}")),
            }
        }
    }
    SurveyReport {
        kind: "wronski-corollary".into(),
        seed: 0,
        cases,
        passes,
        failures,
        note: None,
    }
}

/// |closed form| == |direct determinant| on random instances, nonzero for
/// distinct exponents.
fn determinant_law(count: usize, d_max: usize, k_max: usize, seed: u64) -> SurveyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut passes = 0;
    for _ in 0..count {
        let kk = rng.gen_range(0..=k_max);
        let d = rng.gen_range((kk + 1).max(1)..=d_max.max(kk + 1));
        let mut ls: Vec<usize> = Vec::new();
        while ls.len() < kk {
            let cand = rng.gen_range(0..=d);
            if !ls.contains(&cand) {
                ls.push(cand);
            }
        }
        let m = d - kk - 1;
        let closed = match closed_form_determinant(d, m, 1, &ls) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("d={d}, ls={ls:?}: {e}"));
                continue;
            }
        };
        let direct = binomial_system_determinant(d, &ls);
        if closed == direct && (!direct.is_zero() || kk == 0) {
            passes += 1;
        } else {
            failures.push(format!(
                "d={d}, ls={ls:?}: closed {closed} vs direct {direct}"
            ));
        }
    }
    SurveyReport {
        kind: "determinant".into(),
        seed,
        cases: count,
        passes,
        failures,
        note: None,
    }
}

pub(crate) fn run(args: &SurveyArgs, json: bool, _precision: u32) -> ExitCode {
    let report = match args.kind.as_str() {
        "discriminants" => discriminants(args.d_max.unwrap_or(25)),
        "common-roots" => common_roots(args.d_max.unwrap_or(20)),
        "wronski-corollary" => wronski_corollary(args.rank, args.d_max.unwrap_or(8)),
        "determinant" => determinant_law(args.count, args.d_max.unwrap_or(20), args.k_max, args.seed),
        other => {
            eprintln!("error: unknown survey kind `{other}`");
            return ExitCode::from(2);
        }
    };
    report.print(json);
    ExitCode::SUCCESS
}
