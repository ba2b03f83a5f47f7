//! Plain-text rendering of analysis reports.

use wronsky_core::analysis::IntersectReport;
use wronsky_core::roots::RootValue;

fn root_string(r: &RootValue) -> String {
    match r {
        RootValue::Exact(z) => z.to_string(),
        RootValue::Numeric(z) => format!(
            "{} + {}i",
            z.re.to_decimal_string(30),
            z.im.to_decimal_string(30)
        ),
    }
}

pub fn print_intersect(report: &IntersectReport) {
    let p = &report.problem;
    println!(
        "problem: N={}, d={}, a={}, w={}, m={}",
        p.rank_n, p.d, p.a, p.w, p.m
    );
    if report.empty {
        println!("empty intersection (Pieri count 0)");
        return;
    }
    let a = report.analysis.as_ref().expect("non-empty report");
    println!(
        "frame: degrees {:?}, orders at 0 {:?}, k-vector {:?}",
        a.frame.degrees,
        a.frame.orders_at_zero,
        a.k_vector.entries()
    );
    if !a.index_set.is_empty() {
        println!("forbidden exponents: {:?}", a.index_set);
        let consts: Vec<String> = a.constants.iter().map(|c| c.to_string()).collect();
        println!("constants: [{}]", consts.join(", "));
    }
    println!("basis:");
    for q in &a.basis {
        println!("  {q}");
    }
    println!("intermediate Wronskians (monic):");
    for w in &a.wronskians_monic {
        println!("  {w}");
    }
    println!("additional roots:");
    for block in &a.t_values {
        let vals: Vec<String> = block.values.iter().map(root_string).collect();
        println!(
            "  t({}) = [{}]{}",
            block.block,
            vals.join(", "),
            if block.exact { "" } else { " (numeric)" }
        );
    }
    println!(
        "nondegenerate: {} (no marked-point roots: {:?}, squarefree: {:?}, coprime neighbors: {:?})",
        a.nondegenerate, a.checks.no_vanish_at_marked, a.checks.squarefree, a.checks.coprime_neighbors
    );
    println!("bethe weight: {}", a.bethe_weight);
    println!(
        "residuals: max |.| = {} [{}]",
        a.residuals.max_abs, a.residuals.provenance
    );
    println!(
        "critical value nonzero: {} [{}]",
        a.critical_value.nonzero, a.critical_value.provenance
    );
    if let Some(wv) = &a.weight_vector {
        println!(
            "weight vector: {} terms, {} nonzero entries, nonzero: {}, singular: {} [{}]",
            wv.term_count,
            wv.entries.len(),
            wv.nonzero,
            wv.singular,
            wv.provenance
        );
        println!(
            "singular subspace dimension: {}",
            wv.singular_subspace_dimension
        );
        if let Some(ev) = &wv.casimir_eigenvalue {
            println!("casimir eigenvalue: {ev}");
        }
    }
}
