use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::hochster::{check_wedge_hypothesis_from, DecompositionTable, SubsetHomology, WedgeCheckReport};
use crate::homology::reduced_homology;
use crate::koszul::KoszulAlgebra;
use crate::matrix::IntMatrix;
use crate::snf::smith_normal_form;
use crate::vertex_set::VertexSet;

/// Screening of the classification hypotheses: the input must look like a
/// neighbourly triangulation of an odd-dimensional sphere. "Look like" is
/// homological; see the standing caveat in every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub m: usize,
    /// Dimension of the complex, i.e. the sphere dimension it triangulates.
    pub sphere_dim: isize,
    /// Set when `sphere_dim = 2n + 1` with `n >= 0`.
    pub n: Option<usize>,
    pub pure_pseudomanifold: bool,
    /// Integral homology of a sphere, for the complex and every vertex link.
    pub homology_sphere: bool,
    pub homology_summary: String,
    /// First vertex whose link fails the screening, with its homology.
    pub link_failure: Option<(usize, String)>,
    pub neighbourliness: usize,
    pub neighbourly_enough: bool,
    pub caveats: Vec<String>,
}

impl HypothesisReport {
    pub fn verdict(&self) -> bool {
        self.pure_pseudomanifold
            && self.homology_sphere
            && self.n.is_some()
            && self.neighbourly_enough
    }

    /// Human-readable reasons for a failed verdict; `None` on pass.
    pub fn failure_summary(&self) -> Option<String> {
        if self.verdict() {
            return None;
        }
        let mut parts = Vec::new();
        if self.sphere_dim < 0 {
            parts.push("the complex has no vertices".to_string());
        } else if self.n.is_none() {
            parts.push(format!("sphere dimension {} is even", self.sphere_dim));
        }
        if !self.pure_pseudomanifold {
            parts.push(format!(
                "not a pure pseudomanifold of dimension {}",
                self.sphere_dim
            ));
        }
        if !self.homology_sphere {
            match &self.link_failure {
                Some((v, summary)) => parts.push(format!(
                    "link of vertex {v} is not an integral homology sphere ({summary})"
                )),
                None => parts.push(format!(
                    "integral homology differs from a sphere ({})",
                    self.homology_summary
                )),
            }
        }
        if let Some(n) = self.n {
            if !self.neighbourly_enough {
                parts.push(format!(
                    "neighbourliness {} is below the required {n}",
                    self.neighbourliness
                ));
            }
        }
        Some(parts.join("; "))
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices: {}", self.m)?;
        match self.n {
            Some(n) => writeln!(f, "sphere dimension: {} (n = {n})", self.sphere_dim)?,
            None => writeln!(f, "sphere dimension: {}", self.sphere_dim)?,
        }
        writeln!(
            f,
            "pure pseudomanifold: {}",
            if self.pure_pseudomanifold { "yes" } else { "no" }
        )?;
        writeln!(
            f,
            "integral homology sphere (complex and links): {}",
            if self.homology_sphere { "yes" } else { "no" }
        )?;
        writeln!(f, "homology: {}", self.homology_summary)?;
        if let Some((v, summary)) = &self.link_failure {
            writeln!(f, "link of vertex {v}: {summary}")?;
        }
        writeln!(f, "neighbourliness: {}", self.neighbourliness)?;
        match self.failure_summary() {
            None => writeln!(f, "verdict: pass")?,
            Some(why) => writeln!(f, "verdict: fail ({why})")?,
        }
        for c in &self.caveats {
            writeln!(f, "caveat: {c}")?;
        }
        Ok(())
    }
}

/// Screens the classification hypotheses. Report-valued: inputs outside the
/// theorem produce a failing report, not an error.
pub fn verify_hypotheses(k: &SimplicialComplex) -> HypothesisReport {
    let m = k.m();
    let d = k.dim();
    let n = if d >= 1 && d % 2 == 1 {
        Some(((d - 1) / 2) as usize)
    } else {
        None
    };
    let pure_pseudomanifold = d >= 0 && k.is_pure_pseudomanifold(d as usize);
    let profile = reduced_homology(k);
    let homology_summary = profile.summary();
    let mut homology_sphere = profile.is_sphere(d);
    let mut link_failure = None;
    if homology_sphere {
        for v in 1..=m {
            let link = k.vertex_link(v).expect("vertex in range");
            let link_profile = reduced_homology(&link);
            if !link_profile.is_sphere(d - 1) {
                homology_sphere = false;
                link_failure = Some((v, link_profile.summary()));
                break;
            }
        }
    }
    let neighbourliness = k.max_neighbourliness();
    let neighbourly_enough = n.is_some_and(|n| neighbourliness >= n);
    let mut caveats = vec![
        "screening is homological: a pure pseudomanifold with the homology of a sphere \
         and sphere-homology links need not triangulate a sphere in dimension 5 or higher"
            .to_string(),
    ];
    if d < 0 {
        caveats.push("the complex has no vertices".to_string());
    } else if d % 2 == 0 {
        caveats.push(
            "even sphere dimension: the connected-sum classification covers \
             odd-dimensional spheres only"
                .to_string(),
        );
    }
    HypothesisReport {
        m,
        sphere_dim: d,
        n,
        pure_pseudomanifold,
        homology_sphere,
        homology_summary,
        link_failure,
        neighbourliness,
        neighbourly_enough,
        caveats,
    }
}

/// Intersection pairing between the cohomology of one complementary pair of
/// vertex subsets: entry (a, b) is the top coefficient of the product of the
/// a-th class on `iset` with the b-th class on `complement`.
#[derive(Clone, Debug, Serialize)]
pub struct PairingBlock {
    /// Canonical side of the pair: the smaller subset, ties broken lex.
    pub iset: VertexSet,
    pub complement: VertexSet,
    pub rank_left: usize,
    pub rank_right: usize,
    pub matrix: Vec<Vec<BigInt>>,
    pub det_abs: BigUint,
    pub unimodular: bool,
    /// Sphere dimensions paired by this block; p + q is the manifold dimension.
    pub p: usize,
    pub q: usize,
}

/// Computes the pairing block for `{iset, complement}` after verifying the
/// hypotheses. Callers holding many blocks should go through
/// [`connected_sum`], which verifies once.
pub fn pairing_block(
    k: &SimplicialComplex,
    iset: VertexSet,
    disc_k: usize,
) -> Result<PairingBlock> {
    let report = verify_hypotheses(k);
    let Some(n) = report.n.filter(|_| report.verdict()) else {
        return Err(Error::HypothesesNotVerified {
            summary: report.failure_summary().unwrap_or_default(),
        });
    };
    let algebra = KoszulAlgebra::new(k, disc_k);
    pairing_block_with(&algebra, n, iset)
}

fn pairing_block_with(
    algebra: &KoszulAlgebra<'_>,
    n: usize,
    iset: VertexSet,
) -> Result<PairingBlock> {
    let m = algebra.complex().m();
    let comp = iset.complement_in(m);
    let (iset, comp) = if iset <= comp { (iset, comp) } else { (comp, iset) };
    let kk = algebra.disc_k();
    let p = n + 1 + (kk - 1) * iset.card();
    let q = n + 1 + (kk - 1) * comp.card();
    let left = algebra.cocycle_basis(iset, p)?;
    let right = algebra.cocycle_basis(comp, q)?;
    if left.len() != right.len() {
        return Err(Error::RankMismatch {
            iset,
            complement: comp,
            rank_left: left.len(),
            rank_right: right.len(),
        });
    }
    let mut matrix = Vec::with_capacity(left.len());
    for x in &left {
        let mut row = Vec::with_capacity(right.len());
        for y in &right {
            let prod = algebra.cup_product(x, y);
            debug_assert!(!prod.multidegree_overlap);
            row.push(algebra.top_coefficient(&prod.class)?);
        }
        matrix.push(row);
    }
    let rank = matrix.len();
    let det_abs = if rank == 0 {
        BigUint::one()
    } else {
        smith_normal_form(&IntMatrix::from_dense(&matrix), false).det_abs(rank)
    };
    let unimodular = det_abs == BigUint::one();
    Ok(PairingBlock {
        iset,
        complement: comp,
        rank_left: rank,
        rank_right: rank,
        matrix,
        det_abs,
        unimodular,
        p,
        q,
    })
}

/// One summand family of the connected sum: `count` copies of `S^p x S^q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub p: usize,
    pub q: usize,
    pub count: usize,
}

/// The certified decomposition of the manifold into a connected sum of
/// products of two spheres.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectedSumDecomposition {
    /// Manifold dimension.
    pub dim: usize,
    /// Sorted by (p, q); counts aggregated over all complementary pairs.
    pub factors: Vec<Factor>,
    /// No factors at all: the manifold is the sphere `S^dim`.
    pub trivial_sphere: bool,
}

impl fmt::Display for ConnectedSumDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.trivial_sphere {
            return write!(f, "S^{}", self.dim);
        }
        let mut first = true;
        for fac in &self.factors {
            if !first {
                write!(f, " # ")?;
            }
            if fac.count == 1 {
                write!(f, "S^{} x S^{}", fac.p, fac.q)?;
            } else {
                write!(f, "#{} (S^{} x S^{})", fac.count, fac.p, fac.q)?;
            }
            first = false;
        }
        Ok(())
    }
}

fn wedge_failure_summary(report: &WedgeCheckReport) -> String {
    let shown: Vec<String> = report
        .offenders
        .iter()
        .take(4)
        .map(|(iset, profile)| format!("I={iset}: {}", profile.summary()))
        .collect();
    let more = report.offenders.len().saturating_sub(shown.len());
    let tail = if more > 0 {
        format!("; and {more} more")
    } else {
        String::new()
    };
    format!(
        "{} subset(s) with homology off the expected single degree: {}{}",
        report.offenders.len(),
        shown.join("; "),
        tail
    )
}

/// Runs the full classification: hypothesis screening, the per-subset
/// homology check, one pairing block per complementary pair, unimodularity
/// certification, and exact reconstruction of the betti profile.
pub fn connected_sum(k: &SimplicialComplex, disc_k: usize) -> Result<ConnectedSumDecomposition> {
    let subsets = SubsetHomology::compute(k);
    connected_sum_from(&subsets, disc_k)
}

/// [`connected_sum`] over an already computed subset-homology state.
pub fn connected_sum_from(
    subsets: &SubsetHomology<'_>,
    disc_k: usize,
) -> Result<ConnectedSumDecomposition> {
    classify_with_blocks(subsets, disc_k).map(|(decomp, _)| decomp)
}

/// The classification together with the certified pairing blocks it is built
/// from, in canonical pair order.
pub fn classify_with_blocks(
    subsets: &SubsetHomology<'_>,
    disc_k: usize,
) -> Result<(ConnectedSumDecomposition, Vec<PairingBlock>)> {
    let k = subsets.complex();
    let report = verify_hypotheses(k);
    if !report.verdict() {
        return Err(Error::HypothesesNotVerified {
            summary: report.failure_summary().unwrap_or_default(),
        });
    }
    let n = report.n.expect("verdict implies odd dimension");
    let wedge = check_wedge_hypothesis_from(subsets, n);
    if !wedge.pass {
        return Err(Error::TheoremHypothesisViolated {
            summary: wedge_failure_summary(&wedge),
        });
    }

    let m = k.m();
    let full = VertexSet::full(m);
    let mut pair_keys = BTreeSet::new();
    for iset in subsets.nonfaces() {
        if iset != full && subsets.rank(iset, n as isize) > 0 {
            pair_keys.insert(iset.min(iset.complement_in(m)));
        }
    }
    let keys: Vec<VertexSet> = pair_keys.into_iter().collect();

    let algebra = KoszulAlgebra::new(k, disc_k);
    let results: Vec<Result<PairingBlock>> = keys
        .into_par_iter()
        .map(|key| pairing_block_with(&algebra, n, key))
        .collect();

    let dim = 2 * n + m * (disc_k - 1) + 2;
    let mut blocks = Vec::with_capacity(results.len());
    let mut factor_map: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for res in results {
        let block = res?;
        if !block.unimodular {
            return Err(Error::NonUnimodularPairing {
                iset: block.iset,
                complement: block.complement,
                det_abs: block.det_abs,
                rank_left: block.rank_left,
                rank_right: block.rank_right,
            });
        }
        if block.rank_left > 0 {
            let (p, q) = (block.p.min(block.q), block.p.max(block.q));
            debug_assert_eq!(p + q, dim);
            debug_assert!(disc_k != 2 || p >= n + 3, "factor below the non-face bound");
            *factor_map.entry((p, q)).or_insert(0) += block.rank_left;
        }
        blocks.push(block);
    }
    let factors: Vec<Factor> = factor_map
        .into_iter()
        .map(|((p, q), count)| Factor { p, q, count })
        .collect();

    // Reconstruct the betti profile and compare with the subset-homology
    // route degree by degree.
    let mut direct = subsets.table(disc_k, true).sphere_counts();
    if direct.len() < dim + 1 {
        direct.resize(dim + 1, 0);
    }
    direct[0] += 1;
    let mut reconstructed = vec![0usize; direct.len()];
    reconstructed[0] += 1;
    reconstructed[dim] += 1;
    for fac in &factors {
        reconstructed[fac.p] += fac.count;
        reconstructed[fac.q] += fac.count;
    }
    for (degree, (&r, &d)) in reconstructed.iter().zip(&direct).enumerate() {
        if r != d {
            return Err(Error::ReconstructionMismatch {
                degree,
                reconstructed: r,
                direct: d,
            });
        }
    }

    let trivial_sphere = factors.is_empty();
    Ok((
        ConnectedSumDecomposition {
            dim,
            factors,
            trivial_sphere,
        },
        blocks,
    ))
}

/// Factor counts read off the subset-homology table alone, with no cup
/// products and hence no unimodularity certificate. Diagnostic companion for
/// inputs where certification fails.
pub fn putative_factors(table: &DecompositionTable, n: usize) -> Vec<Factor> {
    let m = table.m;
    let full = VertexSet::full(m);
    let kk = table.disc_k;
    let mut map: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for s in &table.summands {
        if s.iset == full || s.degree != n {
            continue;
        }
        let comp = s.iset.complement_in(m);
        if s.iset > comp {
            continue; // count each unordered pair from its canonical side
        }
        let p = n + 1 + (kk - 1) * s.iset.card();
        let q = n + 1 + (kk - 1) * comp.card();
        *map.entry((p.min(q), p.max(q))).or_insert(0) += s.multiplicity;
    }
    map.into_iter()
        .map(|((p, q), count)| Factor { p, q, count })
        .collect()
}

/// Agreement report between the two computation routes: the connected-sum
/// decomposition (cup products) and the subset-homology table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub manifold_dim: usize,
    /// Betti profile from the subset-homology route, top class included.
    pub betti: Vec<usize>,
    pub reconstruction_ok: bool,
    pub duality_ok: bool,
    /// Euler characteristic vanishes; vacuously true in even dimensions.
    pub euler_ok: bool,
    pub skeleton_spheres: usize,
    pub factor_spheres: usize,
    pub sphere_count_ok: bool,
    pub pass: bool,
}

impl fmt::Display for CrossCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "betti: {:?}", self.betti)?;
        writeln!(
            f,
            "reconstruction from factors: {}",
            if self.reconstruction_ok { "ok" } else { "MISMATCH" }
        )?;
        writeln!(
            f,
            "duality symmetry: {}",
            if self.duality_ok { "ok" } else { "BROKEN" }
        )?;
        writeln!(
            f,
            "euler characteristic: {}",
            if self.euler_ok { "ok" } else { "NONZERO" }
        )?;
        writeln!(
            f,
            "sphere count: {} in the punctured skeleton vs {} from factors: {}",
            self.skeleton_spheres,
            self.factor_spheres,
            if self.sphere_count_ok { "ok" } else { "MISMATCH" }
        )?;
        write!(f, "cross-check: {}", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// Checks the decomposition against a subset-homology table for the same
/// complex and disc dimension. Report-valued.
pub fn cross_check(
    decomp: &ConnectedSumDecomposition,
    table: &DecompositionTable,
) -> CrossCheckReport {
    let dim = decomp.dim;
    let mut betti = table.sphere_counts();
    if betti.len() < dim + 1 {
        betti.resize(dim + 1, 0);
    }
    betti[0] += 1;
    if !table.include_top {
        betti[dim] += 1;
    }

    let mut reconstructed = vec![0usize; betti.len()];
    reconstructed[0] += 1;
    reconstructed[dim] += 1;
    for fac in &decomp.factors {
        reconstructed[fac.p] += fac.count;
        reconstructed[fac.q] += fac.count;
    }
    let reconstruction_ok = reconstructed == betti;

    let duality_ok =
        betti.len() == dim + 1 && (0..=dim).all(|t| betti[t] == betti[dim - t]);
    let euler: i64 = betti
        .iter()
        .enumerate()
        .map(|(t, &b)| if t % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum();
    let euler_ok = dim % 2 == 0 || euler == 0;

    let top_count = if table.include_top { 1 } else { 0 };
    let skeleton_spheres = table.total_multiplicity().saturating_sub(top_count);
    let factor_spheres = 2 * decomp.factors.iter().map(|f| f.count).sum::<usize>();
    let sphere_count_ok = skeleton_spheres == factor_spheres;

    let pass = reconstruction_ok && duality_ok && euler_ok && sphere_count_ok;
    CrossCheckReport {
        manifold_dim: dim,
        betti,
        reconstruction_ok,
        duality_ok,
        euler_ok,
        skeleton_spheres,
        factor_spheres,
        sphere_count_ok,
        pass,
    }
}
