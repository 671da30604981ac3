use num_bigint::BigUint;
use thiserror::Error;

use crate::vertex_set::VertexSet;

/// Errors shared across the library. Report-valued diagnostics (hypothesis
/// verdicts, oracle comparisons) are not errors; only contract violations are.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range 1..={m}")]
    VertexOutOfRange { vertex: usize, m: usize },

    #[error("facet list is empty")]
    EmptyFacetList,

    #[error("facet #{index} is the empty set")]
    EmptyFacet { index: usize },

    #[error("vertex {vertex} lies in no facet (ghost vertices are rejected by default)")]
    GhostVertex { vertex: usize },

    #[error("degree {degree} out of range 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("torsion {divisors:?} present in degree {degree}; integral cocycle basis for the free part is not defined here")]
    TorsionPresent { degree: usize, divisors: Vec<BigUint> },

    #[error("class of degree {degree} and support {multidegree} is not in the top component (expected degree {expected_degree}, full support)")]
    NotTopDegree {
        degree: usize,
        multidegree: VertexSet,
        expected_degree: usize,
    },

    #[error("top cohomology is not infinite cyclic (free rank {rank}, torsion {torsion:?})")]
    TopRankNotOne { rank: usize, torsion: Vec<BigUint> },

    #[error("input does not satisfy the classification hypotheses: {summary}")]
    HypothesesNotVerified { summary: String },

    #[error("subcomplex homology violates the wedge hypothesis: {summary}")]
    TheoremHypothesisViolated { summary: String },

    #[error("pairing ranks differ for {iset} (rank {rank_left}) vs {complement} (rank {rank_right})")]
    RankMismatch {
        iset: VertexSet,
        complement: VertexSet,
        rank_left: usize,
        rank_right: usize,
    },

    #[error("pairing block {iset} | {complement} is not unimodular (|det| = {det_abs}); factors are not certified")]
    NonUnimodularPairing {
        iset: VertexSet,
        complement: VertexSet,
        det_abs: BigUint,
        /// Rational ranks of the two sides, kept for diagnostics.
        rank_left: usize,
        rank_right: usize,
    },

    #[error("betti numbers reconstructed from the factor list disagree with the direct computation in degree {degree} ({reconstructed} vs {direct})")]
    ReconstructionMismatch {
        degree: usize,
        reconstructed: usize,
        direct: usize,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("input document: {message}")]
    Schema { message: String },

    #[error("{m} vertices is too few (need at least {min})")]
    TooFewVertices { m: usize, min: usize },

    #[error("bad generator parameters: {message}")]
    BadParameters { message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
