//! Agreement check between the two independent cohomology routes.
//!
//! Route one computes reduced simplicial homology of every full subcomplex
//! ([`crate::hochster`]); route two computes the cohomology of the bigraded
//! cochain algebra ([`crate::koszul`]). They share only the integer linear
//! algebra underneath. For every vertex subset the component cohomology of
//! the algebra must match the shifted subcomplex homology, free ranks and
//! torsion both, and the degree totals must agree. A disagreement anywhere
//! means a bug, never data to be reconciled.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::hochster::{zk_betti_from, SubsetHomology};
use crate::koszul::{ring_cohomology, RingCohomology};
use crate::vertex_set::VertexSet;

/// One disagreement at a single (multidegree, total degree) slot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteMismatch {
    pub iset: VertexSet,
    pub total_degree: usize,
    /// "rank" or "torsion".
    pub kind: String,
    pub from_subsets: String,
    pub from_ring: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub m: usize,
    pub disc_k: usize,
    pub totals_subsets: Vec<usize>,
    pub totals_ring: Vec<usize>,
    pub totals_match: bool,
    pub components_checked: usize,
    pub mismatches: Vec<RouteMismatch>,
    pub pass: bool,
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "subset route totals: {:?}",
            self.totals_subsets
        )?;
        writeln!(f, "ring route totals:   {:?}", self.totals_ring)?;
        writeln!(
            f,
            "components checked: {}, mismatches: {}",
            self.components_checked,
            self.mismatches.len()
        )?;
        for mm in self.mismatches.iter().take(8) {
            writeln!(
                f,
                "  {} at degree {} of I={}: subsets say {}, ring says {}",
                mm.kind, mm.total_degree, mm.iset, mm.from_subsets, mm.from_ring
            )?;
        }
        if self.mismatches.len() > 8 {
            writeln!(f, "  ... and {} more", self.mismatches.len() - 8)?;
        }
        write!(f, "routes: {}", if self.pass { "AGREE" } else { "DISAGREE" })
    }
}

/// Runs both routes and compares them slot by slot.
pub fn compare_routes(k: &SimplicialComplex, disc_k: usize) -> OracleReport {
    let subsets = SubsetHomology::compute(k);
    let ring = ring_cohomology(k, disc_k);
    compare_routes_from(&subsets, &ring)
}

/// Comparison over precomputed route outputs for the same complex.
pub fn compare_routes_from(
    subsets: &SubsetHomology<'_>,
    ring: &RingCohomology,
) -> OracleReport {
    let k = subsets.complex();
    assert_eq!(k.m(), ring.m, "routes computed for different complexes");
    let disc_k = ring.disc_k;

    let mut totals_subsets = zk_betti_from(subsets, disc_k);
    let mut totals_ring = ring.totals();
    let len = totals_subsets.len().max(totals_ring.len());
    totals_subsets.resize(len, 0);
    totals_ring.resize(len, 0);
    let totals_match = totals_subsets == totals_ring;

    let mut mismatches = Vec::new();
    for (iset, comp) in &ring.components {
        let profile = subsets.profile(*iset);
        for s in 0..comp.free.len() {
            let degree = comp.base_degree + s;
            // Shift contract: H^(base+s) of the component is the reduced
            // cohomology of the hull in degree s - 1. The empty subset is a
            // face, yet its hull (the empty complex) has reduced homology Z
            // in degree -1; every other face has an acyclic hull.
            let expected_rank = match profile {
                Some(p) => p.betti(s as isize - 1),
                None if iset.is_empty() && s == 0 => 1,
                None => 0,
            };
            if comp.free[s] != expected_rank {
                mismatches.push(RouteMismatch {
                    iset: *iset,
                    total_degree: degree,
                    kind: "rank".to_string(),
                    from_subsets: expected_rank.to_string(),
                    from_ring: comp.free[s].to_string(),
                });
            }
            // Integral cohomology carries the torsion of homology one
            // degree down.
            let expected_torsion = profile.map_or(&[][..], |p| p.torsion(s as isize - 2));
            if comp.torsion[s] != expected_torsion {
                mismatches.push(RouteMismatch {
                    iset: *iset,
                    total_degree: degree,
                    kind: "torsion".to_string(),
                    from_subsets: format!("{expected_torsion:?}"),
                    from_ring: format!("{:?}", comp.torsion[s]),
                });
            }
        }
    }

    let pass = totals_match && mismatches.is_empty();
    OracleReport {
        m: k.m(),
        disc_k,
        totals_subsets,
        totals_ring,
        totals_match,
        components_checked: ring.components.len(),
        mismatches,
        pass,
    }
}
