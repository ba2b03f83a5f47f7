//! End-to-end analysis of a special Schubert intersection: construct the
//! plane, extract intermediate Wronskians and additional roots, certify
//! non-degeneracy, evaluate Bethe residuals and (optionally) the Bethe
//! vector itself. Produces one structured, deterministic report.

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::dyadic::{CDyadic, Dyadic};
use crate::error::{Error, Result};
use crate::gaudin::{
    build_irrep, casimir_pair, evaluate_bethe_vector, highest_weight_check,
    singular_subspace_dimension, universal_weight_function, SparseMat, TensorVec,
};
use crate::nondeg::{
    bethe_residuals, is_nondegenerate, master_function_value, BetheCoordinates,
    NondegeneracyReport,
};
use crate::partition::{partition_of_k, KVector, Partition};
use crate::poly::Polynomial;
use crate::roots::{roots_of_squarefree, RootValue};
use crate::scalar::ExactScalar;
use crate::schubert::{intermediate_wronskians, schubert_frame, SchubertFrame, SchubertProblem};
use crate::special::{construct_special_basis, truncated_basis};

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub precision: u32,
    pub weight_vector: bool,
    pub dimension_cap: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            precision: crate::dyadic::DEFAULT_PREC,
            weight_vector: false,
            dimension_cap: crate::gaudin::DEFAULT_DIM_CAP,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TValueBlock {
    pub block: usize,
    pub exact: bool,
    pub values: Vec<RootValue>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub max_abs: String,
    pub provenance: String,
    pub exactly_zero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalValueReport {
    pub nonzero: bool,
    pub provenance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<ExactScalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub magnitude: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightVectorEntry {
    pub left: usize,
    pub right: usize,
    pub coeff: RootValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightVectorReport {
    pub term_count: usize,
    pub entries: Vec<WeightVectorEntry>,
    pub nonzero: bool,
    pub singular: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub casimir_eigenvalue: Option<ExactScalar>,
    pub singular_subspace_dimension: usize,
    pub provenance: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectAnalysis {
    pub frame: SchubertFrame,
    pub index_set: Vec<usize>,
    pub constants: Vec<ExactScalar>,
    pub basis: Vec<Polynomial>,
    pub master_poly: Polynomial,
    pub wronskians_raw: Vec<Polynomial>,
    pub wronskians_monic: Vec<Polynomial>,
    pub t_polys: Vec<Polynomial>,
    pub k_vector: KVector,
    pub bethe_weight: Partition,
    pub t_values: Vec<TValueBlock>,
    pub nondegenerate: bool,
    pub checks: NondegeneracyReport,
    pub residuals: ResidualReport,
    pub critical_value: CriticalValueReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_vector: Option<WeightVectorReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectReport {
    pub problem: SchubertProblem,
    pub empty: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<IntersectAnalysis>,
}

fn dyadic_mag_string(sq: &Dyadic) -> String {
    let v = sq.to_f64().max(0.0).sqrt();
    format!("{v:.3e}")
}

/// Multiset of roots of a T-polynomial, exact where possible.
fn t_roots(t: &Polynomial, prec: u32) -> Result<Vec<RootValue>> {
    let mut out = Vec::new();
    for (factor, mult) in t.squarefree_decomposition() {
        for r in roots_of_squarefree(&factor, prec)? {
            for _ in 0..mult {
                out.push(r.clone());
            }
        }
    }
    Ok(out)
}

struct ResidualOutcome {
    report: ResidualReport,
    critical: CriticalValueReport,
    exact_coordinates: Option<BetheCoordinates<ExactScalar>>,
    numeric_coordinates: Option<BetheCoordinates<CDyadic>>,
}

fn residual_pass(
    blocks: &[Vec<RootValue>],
    weights: (Partition, Partition),
    prec: u32,
) -> Result<ResidualOutcome> {
    let all_exact = blocks
        .iter()
        .all(|b| b.iter().all(|r| r.is_exact()));
    if all_exact {
        let exact_blocks: Vec<Vec<ExactScalar>> = blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|r| match r {
                        RootValue::Exact(z) => z.clone(),
                        RootValue::Numeric(_) => unreachable!(),
                    })
                    .collect()
            })
            .collect();
        let bc = BetheCoordinates::new(exact_blocks, weights);
        let residuals = bethe_residuals(&bc)?;
        let zero = residuals.iter().all(|r| r.is_zero());
        let max_abs = if zero {
            "0".to_string()
        } else {
            let m = residuals
                .iter()
                .map(|r| r.abs_sq().to_f64().unwrap_or(f64::INFINITY))
                .fold(0.0f64, f64::max);
            format!("{:.3e}", m.sqrt())
        };
        let value = master_function_value(&bc)?;
        let critical = CriticalValueReport {
            nonzero: !value.is_zero(),
            provenance: "exact".into(),
            value: Some(value),
            magnitude: None,
        };
        Ok(ResidualOutcome {
            report: ResidualReport {
                max_abs,
                provenance: "exact".into(),
                exactly_zero: zero,
            },
            critical,
            exact_coordinates: Some(bc),
            numeric_coordinates: None,
        })
    } else {
        let numeric_blocks: Vec<Vec<CDyadic>> = blocks
            .iter()
            .map(|b| b.iter().map(|r| r.to_cdyadic(prec)).collect())
            .collect();
        let bc = BetheCoordinates::new(numeric_blocks, weights);
        let residuals = bethe_residuals(&bc)?;
        let mut max_sq = Dyadic::zero();
        for r in &residuals {
            let sq = r.abs_sq();
            if sq.cmp_value(&max_sq) == std::cmp::Ordering::Greater {
                max_sq = sq;
            }
        }
        let value = master_function_value(&bc)?;
        let vsq = value.abs_sq();
        // nonzero when |Psi| > 1e-20
        let floor = Dyadic::pow10(-40, prec);
        let critical = CriticalValueReport {
            nonzero: vsq.cmp_value(&floor) == std::cmp::Ordering::Greater,
            provenance: format!("numeric({prec})"),
            value: None,
            magnitude: Some(dyadic_mag_string(&vsq)),
        };
        Ok(ResidualOutcome {
            report: ResidualReport {
                max_abs: dyadic_mag_string(&max_sq),
                provenance: format!("numeric({prec})"),
                exactly_zero: false,
            },
            critical,
            exact_coordinates: None,
            numeric_coordinates: Some(bc),
        })
    }
}

fn sparse_apply_pair(
    m: &SparseMat,
    v: &TensorVec<ExactScalar>,
    dim_b: usize,
) -> TensorVec<ExactScalar> {
    let mut dense = std::collections::BTreeMap::new();
    for ((a, b), c) in &v.entries {
        dense.insert(a * dim_b + b, c.clone());
    }
    let image = m.apply(&dense);
    let mut out = TensorVec::new();
    for (idx, c) in image {
        out.add_term((idx / dim_b, idx % dim_b), c);
    }
    out
}

fn weight_vector_pass(
    problem: &SchubertProblem,
    outcome: &ResidualOutcome,
    opts: &AnalysisOptions,
) -> Result<WeightVectorReport> {
    let rep_a = build_irrep(problem.rank_n, &problem.a, Some(opts.dimension_cap))?;
    let rep_b = build_irrep(
        problem.rank_n,
        &Partition::special(problem.m, problem.rank_n),
        Some(opts.dimension_cap),
    )?;
    let bethe_weight = problem.w.dual();
    let sing_dim = singular_subspace_dimension(&rep_a, &rep_b, &bethe_weight);

    if let Some(bc) = &outcome.exact_coordinates {
        let expansion = universal_weight_function(bc)?;
        let v = evaluate_bethe_vector(&expansion, &rep_a, &rep_b, &|s| s.clone());
        let nonzero = !v.is_zero();
        let (singular, _witness) = if nonzero {
            highest_weight_check(&v, &rep_a, &rep_b)?
        } else {
            (false, Vec::new())
        };
        // eigenvalue of the pair Casimir on the vector, when defined
        let casimir_eigenvalue = if nonzero {
            let c = casimir_pair(&rep_a, &rep_b);
            let image = sparse_apply_pair(&c, &v, rep_b.dim);
            let (k0, v0) = v.entries.iter().next().expect("nonzero");
            let lambda = image
                .entries
                .get(k0)
                .cloned()
                .unwrap_or_else(ExactScalar::zero)
                / v0.clone();
            let mut scaled = TensorVec::new();
            for (k, c) in &v.entries {
                scaled.add_term(*k, c.clone() * lambda.clone());
            }
            if scaled == image {
                Some(lambda)
            } else {
                None
            }
        } else {
            None
        };
        let entries = v
            .entries
            .iter()
            .map(|(&(l, r), c)| WeightVectorEntry {
                left: l,
                right: r,
                coeff: RootValue::Exact(c.clone()),
            })
            .collect();
        Ok(WeightVectorReport {
            term_count: expansion.terms.len(),
            entries,
            nonzero,
            singular,
            casimir_eigenvalue,
            singular_subspace_dimension: sing_dim,
            provenance: "exact".into(),
        })
    } else {
        let bc = outcome.numeric_coordinates.as_ref().expect("one of the two");
        let prec = opts.precision;
        let expansion = universal_weight_function(bc)?;
        let v = evaluate_bethe_vector(&expansion, &rep_a, &rep_b, &|s| {
            CDyadic::from_exact(s, prec)
        });
        // numeric singular check: every raising image small
        let tol = Dyadic::pow10(-20, prec);
        let mut singular = true;
        for i in 1..=rep_a.rank_n {
            let image = crate::gaudin::apply_diagonal(
                &rep_a.e[i - 1],
                &rep_b.e[i - 1],
                &v,
                &|s| CDyadic::from_exact(s, prec),
            );
            for c in image.entries.values() {
                if c.abs_sq().cmp_value(&tol) == std::cmp::Ordering::Greater {
                    singular = false;
                }
            }
        }
        let mut max_sq = Dyadic::zero();
        for c in v.entries.values() {
            let sq = c.abs_sq();
            if sq.cmp_value(&max_sq) == std::cmp::Ordering::Greater {
                max_sq = sq;
            }
        }
        let nonzero = max_sq.cmp_value(&Dyadic::pow10(-40, prec)) == std::cmp::Ordering::Greater;
        let entries = v
            .entries
            .iter()
            .map(|(&(l, r), c)| WeightVectorEntry {
                left: l,
                right: r,
                coeff: RootValue::Numeric(c.clone()),
            })
            .collect();
        Ok(WeightVectorReport {
            term_count: expansion.terms.len(),
            entries,
            nonzero,
            singular,
            casimir_eigenvalue: None,
            singular_subspace_dimension: sing_dim,
            provenance: format!("numeric({prec})"),
        })
    }
}

/// Run the full pipeline on a problem. An infeasible problem yields an
/// `empty` report rather than an error.
pub fn analyze_problem(
    problem: &SchubertProblem,
    opts: &AnalysisOptions,
) -> Result<IntersectReport> {
    match schubert_frame(problem) {
        Err(Error::EmptyIntersection) => {
            return Ok(IntersectReport {
                problem: problem.clone(),
                empty: true,
                analysis: None,
            })
        }
        Err(e) => return Err(e),
        Ok(_) => {}
    }
    let frame = schubert_frame(problem)?;
    let built = construct_special_basis(problem)?;
    let ladder = intermediate_wronskians(&built.plane)?;
    let (checks, t_polys) = is_nondegenerate(&ladder, problem)?;

    let mut t_values = Vec::with_capacity(t_polys.len());
    let mut blocks = Vec::with_capacity(t_polys.len());
    for (idx, t) in t_polys.iter().enumerate() {
        let roots = t_roots(t, opts.precision)?;
        t_values.push(TValueBlock {
            block: idx + 1,
            exact: roots.iter().all(|r| r.is_exact()),
            values: roots.clone(),
        });
        blocks.push(roots);
    }

    let weights = (
        problem.a.clone(),
        Partition::special(problem.m, problem.rank_n),
    );
    let k_vector = frame.t_degrees.clone();
    let bethe_weight = partition_of_k(
        &[weights.0.clone(), weights.1.clone()],
        &k_vector,
    )?;
    if bethe_weight != problem.w.dual() {
        return Err(Error::Internal(format!(
            "weight bookkeeping mismatch: {bethe_weight} vs {}",
            problem.w.dual()
        )));
    }

    let outcome = residual_pass(&blocks, weights, opts.precision)?;
    let weight_vector = if opts.weight_vector {
        Some(weight_vector_pass(problem, &outcome, opts)?)
    } else {
        None
    };

    Ok(IntersectReport {
        problem: problem.clone(),
        empty: false,
        analysis: Some(IntersectAnalysis {
            index_set: built.index_set.clone(),
            constants: built.constants.clone(),
            basis: built.plane.basis.clone(),
            master_poly: built.master_poly.clone(),
            wronskians_raw: ladder.raw.clone(),
            wronskians_monic: ladder.monic.clone(),
            t_polys,
            k_vector,
            bethe_weight,
            t_values,
            nondegenerate: checks.nondegenerate,
            checks,
            residuals: outcome.report,
            critical_value: outcome.critical,
            weight_vector,
            frame,
        }),
    })
}

/// Same pipeline, entered through a truncated-binomial family. The plane
/// built from the binomials is cross-checked against the general
/// construction (they must span the same subspace).
pub fn analyze_truncated(
    ms: &[usize],
    d: usize,
    opts: &AnalysisOptions,
) -> Result<(IntersectReport, Vec<Polynomial>)> {
    let (plane, problem) = truncated_basis(ms, d)?;
    let report = analyze_problem(&problem, opts)?;
    if let Some(analysis) = &report.analysis {
        let constructed = crate::schubert::PlaneBasis::new(
            analysis.basis.clone(),
            problem.rank_n,
            problem.d,
        )?;
        if !constructed.same_subspace(&plane) {
            return Err(Error::Internal(
                "truncated plane differs from the general construction".into(),
            ));
        }
    }
    Ok((report, plane.basis))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(e: &[usize]) -> Partition {
        Partition::new(e.to_vec()).unwrap()
    }

    #[test]
    fn example1_report_is_exact_and_critical() {
        let p = SchubertProblem::new(2, 5, part(&[2, 1]), part(&[2, 1]), 3).unwrap();
        let r = analyze_problem(&p, &AnalysisOptions::default()).unwrap();
        assert!(!r.empty);
        let a = r.analysis.unwrap();
        assert!(a.nondegenerate);
        assert!(a.residuals.exactly_zero);
        assert_eq!(a.residuals.max_abs, "0");
        assert!(a.critical_value.nonzero);
        assert_eq!(a.bethe_weight, part(&[2, 1]));
        // t(2) = -1/5
        let block2 = &a.t_values[1];
        assert!(block2.exact);
        match &block2.values[0] {
            RootValue::Exact(z) => assert_eq!(*z, ExactScalar::ratio(-1, 5)),
            _ => panic!("expected exact"),
        }
    }

    #[test]
    fn example1_weight_vector() {
        let p = SchubertProblem::new(2, 5, part(&[2, 1]), part(&[2, 1]), 3).unwrap();
        let mut opts = AnalysisOptions::default();
        opts.weight_vector = true;
        let r = analyze_problem(&p, &opts).unwrap();
        let wv = r.analysis.unwrap().weight_vector.unwrap();
        assert!(wv.nonzero);
        assert!(wv.singular);
        assert_eq!(wv.singular_subspace_dimension, 1);
        assert_eq!(wv.term_count, 12);
        assert!(wv.casimir_eigenvalue.is_some());
    }

    #[test]
    fn empty_problem_reports_empty() {
        let p = SchubertProblem::new(2, 5, part(&[3, 3]), part(&[2, 1]), 0).unwrap();
        let r = analyze_problem(&p, &AnalysisOptions::default()).unwrap();
        assert!(r.empty);
        assert!(r.analysis.is_none());
    }

    #[test]
    fn truncated_pipeline_cross_checks() {
        let (report, generators) = analyze_truncated(&[1, 3], 5, &AnalysisOptions::default()).unwrap();
        assert!(!report.empty);
        assert_eq!(generators.len(), 3);
        let a = report.analysis.unwrap();
        assert!(a.constants.is_empty());
        assert!(a.nondegenerate);
    }

    #[test]
    fn example2_exact_roots_and_numeric_residuals() {
        let p = SchubertProblem::new(2, 5, part(&[3, 0]), part(&[3, 0]), 3).unwrap();
        let r = analyze_problem(&p, &AnalysisOptions::default()).unwrap();
        let a = r.analysis.unwrap();
        // W_2 = 5(4x^3+6x^2+4x+1) factors over Q(i)
        assert!(a.t_values[0].exact);
        assert!(a.residuals.exactly_zero);
        assert_eq!(
            a.wronskians_raw[1],
            Polynomial::from_ints(&[5, 20, 30, 20])
        );
    }

    #[test]
    fn report_json_is_deterministic() {
        let p = SchubertProblem::new(2, 5, part(&[2, 1]), part(&[2, 2]), 2).unwrap();
        let r1 = analyze_problem(&p, &AnalysisOptions::default()).unwrap();
        let r2 = analyze_problem(&p, &AnalysisOptions::default()).unwrap();
        let s1 = serde_json::to_string(&r1).unwrap();
        let s2 = serde_json::to_string(&r2).unwrap();
        assert_eq!(s1, s2);
        assert!(s1.contains("\"-2/5\""));
    }
}
