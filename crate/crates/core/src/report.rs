//! Pipeline orchestration and the machine-readable analysis report.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classify::{
    classify_with_blocks, cross_check, putative_factors, verify_hypotheses,
    CrossCheckReport, Factor, HypothesisReport,
};
use crate::complex::SimplicialComplex;
use crate::formats::emit_facet_list;
use crate::hochster::{zk_betti_from, SubsetHomology, TorsionRecord, WedgeSummand};
use crate::koszul::ring_cohomology;
use crate::oracle::{compare_routes_from, OracleReport};
use crate::vertex_set::VertexSet;

/// Identity of the analyzed input: the hash is over the canonical facet-list
/// serialization, so relabeled or reordered facet files hash differently but
/// re-parses of the same complex do not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputMeta {
    pub name: String,
    pub vertices: usize,
    pub facets: usize,
    pub sha256: String,
}

pub fn input_meta(k: &SimplicialComplex, name: &str) -> InputMeta {
    let mut hasher = Sha256::new();
    hasher.update(emit_facet_list(k).as_bytes());
    let digest = hasher.finalize();
    let mut sha256 = String::with_capacity(64);
    for byte in digest {
        let _ = write!(sha256, "{byte:02x}");
    }
    InputMeta {
        name: name.to_string(),
        vertices: k.m(),
        facets: k.facets().len(),
        sha256,
    }
}

/// One complementary pair in the pairing stage, with the determinant kept as
/// a decimal string for readable serialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSummary {
    pub iset: VertexSet,
    pub complement: VertexSet,
    pub rank: usize,
    pub det_abs: String,
    pub p: usize,
    pub q: usize,
}

/// Full analysis record. Serializes to JSON losslessly; every stage that ran
/// contributes its field, stages that were skipped stay absent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub input: InputMeta,
    pub disc_k: usize,
    /// "ok" or "fail".
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hypothesis: Option<HypothesisReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub betti: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub summands: Option<Vec<WedgeSummand>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub torsion_records: Option<Vec<TorsionRecord>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pairing: Option<Vec<PairSummary>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub manifold_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub connected_sum: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub factors: Option<Vec<Factor>>,
    /// Factor counts from the subset route alone when certification failed;
    /// never present alongside a certified factor list.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub putative_factors: Option<Vec<Factor>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cross_check: Option<CrossCheckReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle: Option<OracleReport>,
    pub timings_ms: Vec<(String, u128)>,
}

impl Report {
    fn new(k: &SimplicialComplex, name: &str, disc_k: usize) -> Self {
        Report {
            schema_version: 1,
            input: input_meta(k, name),
            disc_k,
            status: "ok".to_string(),
            error: None,
            hypothesis: None,
            betti: None,
            summands: None,
            torsion_records: None,
            pairing: None,
            manifold_dim: None,
            connected_sum: None,
            factors: None,
            putative_factors: None,
            cross_check: None,
            oracle: None,
            timings_ms: Vec::new(),
        }
    }

    fn fail(&mut self, why: String) {
        self.status = "fail".to_string();
        if self.error.is_none() {
            self.error = Some(why);
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "ok"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn timed<T>(timings: &mut Vec<(String, u128)>, stage: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timings.push((stage.to_string(), start.elapsed().as_millis()));
    out
}

/// Hypothesis screening only.
pub fn run_check(k: &SimplicialComplex, name: &str) -> Report {
    let mut report = Report::new(k, name, 2);
    let hyp = timed(&mut report.timings_ms, "hypotheses", || verify_hypotheses(k));
    if let Some(why) = hyp.failure_summary() {
        report.fail(why);
    }
    report.hypothesis = Some(hyp);
    report
}

/// Manifold betti numbers only.
pub fn run_betti(k: &SimplicialComplex, name: &str, disc_k: usize) -> Report {
    let mut report = Report::new(k, name, disc_k);
    let betti = timed(&mut report.timings_ms, "subset homology", || {
        zk_betti_from(&SubsetHomology::compute(k), disc_k)
    });
    report.betti = Some(betti);
    report
}

/// Route comparison only.
pub fn run_oracle(k: &SimplicialComplex, name: &str, disc_k: usize) -> Report {
    let mut report = Report::new(k, name, disc_k);
    let subsets = timed(&mut report.timings_ms, "subset homology", || {
        SubsetHomology::compute(k)
    });
    let ring = timed(&mut report.timings_ms, "ring cohomology", || {
        ring_cohomology(k, disc_k)
    });
    let oracle = compare_routes_from(&subsets, &ring);
    if !oracle.pass {
        report.fail("the two cohomology routes disagree".to_string());
    }
    report.betti = Some(oracle.totals_subsets.clone());
    report.oracle = Some(oracle);
    report
}

/// The full pipeline: screening, subset homology, pairing and certification,
/// cross-checks, and (optionally) the two-route comparison.
pub fn run_pipeline(
    k: &SimplicialComplex,
    name: &str,
    disc_k: usize,
    with_oracle: bool,
) -> Report {
    let mut report = Report::new(k, name, disc_k);

    let hyp = timed(&mut report.timings_ms, "hypotheses", || verify_hypotheses(k));
    let verdict_failure = hyp.failure_summary();
    let n = hyp.n;
    report.hypothesis = Some(hyp);

    let subsets = timed(&mut report.timings_ms, "subset homology", || {
        SubsetHomology::compute(k)
    });
    let table = subsets.table(disc_k, true);
    report.betti = Some(zk_betti_from(&subsets, disc_k));
    report.summands = Some(table.summands.clone());
    report.torsion_records = Some(table.torsion.clone());

    if let Some(why) = verdict_failure {
        report.fail(why);
    } else {
        let classified = timed(&mut report.timings_ms, "pairing", || {
            classify_with_blocks(&subsets, disc_k)
        });
        match classified {
            Ok((decomp, blocks)) => {
                report.pairing = Some(
                    blocks
                        .iter()
                        .map(|b| PairSummary {
                            iset: b.iset,
                            complement: b.complement,
                            rank: b.rank_left,
                            det_abs: b.det_abs.to_string(),
                            p: b.p,
                            q: b.q,
                        })
                        .collect(),
                );
                let check = cross_check(&decomp, &table);
                if !check.pass {
                    report.fail("decomposition cross-check failed".to_string());
                }
                report.manifold_dim = Some(decomp.dim);
                report.connected_sum = Some(decomp.to_string());
                report.factors = Some(decomp.factors.clone());
                report.cross_check = Some(check);
            }
            Err(err) => {
                report.fail(err.to_string());
                if let Some(n) = n {
                    report.putative_factors = Some(putative_factors(&table, n));
                }
            }
        }
    }

    if with_oracle {
        let ring = timed(&mut report.timings_ms, "ring cohomology", || {
            ring_cohomology(k, disc_k)
        });
        let oracle = compare_routes_from(&subsets, &ring);
        if !oracle.pass {
            report.fail("the two cohomology routes disagree".to_string());
        }
        report.oracle = Some(oracle);
    }

    report
}

/// Plain-text rendering of a report, stable except for the timing values.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "input: {} ({} vertices, {} facets)",
        report.input.name, report.input.vertices, report.input.facets
    );
    let _ = writeln!(out, "sha256: {}", report.input.sha256);
    let _ = writeln!(out, "disc dimension: {}", report.disc_k);
    if let Some(hyp) = &report.hypothesis {
        let _ = writeln!(out, "\n{hyp}");
    }
    if let Some(betti) = &report.betti {
        let _ = writeln!(out, "betti: {betti:?}");
    }
    if let Some(summands) = &report.summands {
        let spheres: usize = summands.iter().map(|s| s.multiplicity).sum();
        let _ = writeln!(out, "sphere summands: {spheres} over {} subsets", summands.len());
    }
    match &report.torsion_records {
        Some(records) if !records.is_empty() => {
            let _ = writeln!(out, "torsion: {} record(s)", records.len());
            for r in records.iter().take(6) {
                let _ = writeln!(
                    out,
                    "  I={} degree {}: {:?}",
                    r.iset, r.degree, r.divisors
                );
            }
            if records.len() > 6 {
                let _ = writeln!(out, "  ... and {} more", records.len() - 6);
            }
        }
        Some(_) => {
            let _ = writeln!(out, "torsion: none");
        }
        None => {}
    }
    if let Some(pairs) = &report.pairing {
        let _ = writeln!(out, "pairing blocks:");
        for p in pairs {
            let _ = writeln!(
                out,
                "  {} | {}: rank {}, |det| = {}, pairs S^{} with S^{}",
                p.iset, p.complement, p.rank, p.det_abs, p.p, p.q
            );
        }
    }
    if let (Some(dim), Some(sum)) = (&report.manifold_dim, &report.connected_sum) {
        let _ = writeln!(out, "manifold: dim {dim}");
        let _ = writeln!(out, "connected sum: {sum}");
    }
    if let Some(putative) = &report.putative_factors {
        let rendered: Vec<String> = putative
            .iter()
            .map(|f| format!("{} x (S^{} x S^{})", f.count, f.p, f.q))
            .collect();
        let _ = writeln!(
            out,
            "putative factors (NOT certified): {}",
            rendered.join(" # ")
        );
    }
    if let Some(check) = &report.cross_check {
        let _ = writeln!(out, "{check}");
    }
    if let Some(oracle) = &report.oracle {
        let _ = writeln!(out, "{oracle}");
    }
    let timings: Vec<String> = report
        .timings_ms
        .iter()
        .map(|(stage, ms)| format!("{stage} {ms} ms"))
        .collect();
    if !timings.is_empty() {
        let _ = writeln!(out, "timings: {}", timings.join(", "));
    }
    if let Some(err) = &report.error {
        let _ = writeln!(out, "error: {err}");
    }
    let _ = writeln!(out, "status: {}", report.status);
    out
}
