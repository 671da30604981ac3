use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::homology::{reduced_homology, HomologyProfile};
use crate::vertex_set::VertexSet;

/// One wedge summand of (the suspension decomposition of) the manifold built
/// from `K` with disc dimension `disc_k`: a sphere of dimension
/// `degree + 1 + (disc_k - 1) * |iset|` for every free class of `H~_degree`
/// of the full subcomplex on `iset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeSummand {
    pub iset: VertexSet,
    pub degree: usize,
    pub sphere_dim: usize,
    pub multiplicity: usize,
    pub disc_k: usize,
}

/// Torsion in a full-subcomplex homology group. Torsion contributes no
/// sphere summand; it is carried as data so nothing is silently dropped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionRecord {
    pub iset: VertexSet,
    pub degree: usize,
    pub divisors: Vec<BigUint>,
}

/// Sphere summands of the manifold (or of the punctured manifold when the
/// full vertex set is excluded), sorted by subset then degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionTable {
    pub m: usize,
    pub disc_k: usize,
    pub include_top: bool,
    pub summands: Vec<WedgeSummand>,
    pub torsion: Vec<TorsionRecord>,
}

impl DecompositionTable {
    /// Free ranks per manifold degree contributed by the summands alone;
    /// no unit class in degree 0.
    pub fn sphere_counts(&self) -> Vec<usize> {
        let len = self
            .summands
            .iter()
            .map(|s| s.sphere_dim + 1)
            .max()
            .unwrap_or(0);
        let mut counts = vec![0usize; len];
        for s in &self.summands {
            counts[s.sphere_dim] += s.multiplicity;
        }
        counts
    }

    pub fn total_multiplicity(&self) -> usize {
        self.summands.iter().map(|s| s.multiplicity).sum()
    }

    pub fn has_torsion(&self) -> bool {
        !self.torsion.is_empty()
    }
}

/// All non-faces of `K` in size-then-lex order. The empty set is a face and
/// never appears; the full vertex set appears whenever it is not a face.
/// Subsets are recognized by containment of a minimal non-face.
pub fn nonface_subsets(k: &SimplicialComplex) -> impl Iterator<Item = VertexSet> + '_ {
    let minimal = k.minimal_non_faces();
    let m = k.m();
    (1..=m)
        .flat_map(move |card| (1..=m).combinations(card))
        .map(|c| c.iter().fold(VertexSet::EMPTY, |acc, &v| acc.insert(v)))
        .filter(move |&s| minimal.iter().any(|&n| n.is_subset_of(s)))
}

/// Reduced homology of every full subcomplex over a non-face, computed once
/// and shared by every later stage. Parallel over subsets; the result order
/// is canonical regardless of scheduling.
pub struct SubsetHomology<'a> {
    complex: &'a SimplicialComplex,
    profiles: BTreeMap<VertexSet, HomologyProfile>,
}

impl<'a> SubsetHomology<'a> {
    pub fn compute(complex: &'a SimplicialComplex) -> Self {
        let nonfaces: Vec<VertexSet> = nonface_subsets(complex).collect();
        let profiles = nonfaces
            .into_par_iter()
            .map(|iset| (iset, reduced_homology(&complex.full_subcomplex(iset))))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        SubsetHomology { complex, profiles }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        self.complex
    }

    /// `None` when `iset` is a face (faces have contractible hulls here and
    /// are never stored).
    pub fn profile(&self, iset: VertexSet) -> Option<&HomologyProfile> {
        self.profiles.get(&iset)
    }

    pub fn rank(&self, iset: VertexSet, degree: isize) -> usize {
        self.profile(iset).map_or(0, |p| p.betti(degree))
    }

    pub fn nonfaces(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.profiles.keys().copied()
    }

    pub fn table(&self, disc_k: usize, include_top: bool) -> DecompositionTable {
        assert!(disc_k >= 2, "disc dimension must be at least 2");
        let m = self.complex.m();
        let full = VertexSet::full(m);
        let mut summands = Vec::new();
        let mut torsion = Vec::new();
        for (&iset, profile) in &self.profiles {
            if !include_top && iset == full {
                continue;
            }
            for j in 0..=profile.max_degree().max(0) {
                let mult = profile.betti(j);
                if mult > 0 {
                    let sphere_dim = j as usize + 1 + (disc_k - 1) * iset.card();
                    summands.push(WedgeSummand {
                        iset,
                        degree: j as usize,
                        sphere_dim,
                        multiplicity: mult,
                        disc_k,
                    });
                }
                let div = profile.torsion(j);
                if !div.is_empty() {
                    torsion.push(TorsionRecord {
                        iset,
                        degree: j as usize,
                        divisors: div.to_vec(),
                    });
                }
            }
        }
        DecompositionTable {
            m,
            disc_k,
            include_top,
            summands,
            torsion,
        }
    }
}

/// Wedge summand table of the manifold over `K`. With `include_top = false`
/// the full vertex set is skipped, which describes the manifold punctured by
/// one point; that is the table the connected-sum classifier consumes.
pub fn wedge_summands(
    k: &SimplicialComplex,
    disc_k: usize,
    include_top: bool,
) -> DecompositionTable {
    SubsetHomology::compute(k).table(disc_k, include_top)
}

/// Free betti numbers of the manifold built from `K`: the unit in degree 0
/// plus one rank per sphere summand dimension, top class included.
pub fn zk_betti(k: &SimplicialComplex, disc_k: usize) -> Vec<usize> {
    zk_betti_from(&SubsetHomology::compute(k), disc_k)
}

/// [`zk_betti`] over an already computed subset-homology state.
pub fn zk_betti_from(subsets: &SubsetHomology<'_>, disc_k: usize) -> Vec<usize> {
    let table = subsets.table(disc_k, true);
    let mut betti = table.sphere_counts();
    if betti.is_empty() {
        betti.push(0);
    }
    betti[0] += 1;
    betti
}

/// Outcome of checking that every proper non-face subcomplex is torsion-free
/// with homology concentrated in degree `n`, and that the full vertex set
/// carries exactly the homology of a `(2n+1)`-sphere.
#[derive(Clone, Debug)]
pub struct WedgeCheckReport {
    pub n: usize,
    pub checked: usize,
    pub offenders: Vec<(VertexSet, HomologyProfile)>,
    pub pass: bool,
}

impl fmt::Display for WedgeCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass {
            write!(
                f,
                "wedge hypothesis holds: all {} non-face subcomplexes concentrated in degree {}, torsion-free",
                self.checked, self.n
            )
        } else {
            writeln!(
                f,
                "wedge hypothesis fails for {} of {} non-face subsets (expected degree {}):",
                self.offenders.len(),
                self.checked,
                self.n
            )?;
            for (iset, profile) in &self.offenders {
                writeln!(f, "  {iset}: {}", profile.summary())?;
            }
            Ok(())
        }
    }
}

/// Checks the sphere-wedge hypothesis for half-dimension parameter `n`.
pub fn check_wedge_hypothesis(k: &SimplicialComplex, n: usize) -> WedgeCheckReport {
    check_wedge_hypothesis_from(&SubsetHomology::compute(k), n)
}

pub fn check_wedge_hypothesis_from(subsets: &SubsetHomology<'_>, n: usize) -> WedgeCheckReport {
    let full = VertexSet::full(subsets.complex().m());
    let mut offenders = Vec::new();
    let mut checked = 0;
    for (&iset, profile) in &subsets.profiles {
        checked += 1;
        let ok = if iset == full {
            profile.is_sphere(2 * n as isize + 1)
        } else {
            !profile.has_torsion() && profile.total_rank() == profile.betti(n as isize)
        };
        if !ok {
            offenders.push((iset, profile.clone()));
        }
    }
    WedgeCheckReport {
        n,
        checked,
        pass: offenders.is_empty(),
        offenders,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(m: usize, facets: &[&[usize]]) -> SimplicialComplex {
        let sets = facets
            .iter()
            .map(|f| VertexSet::from_labels(f, m).unwrap())
            .collect();
        SimplicialComplex::build(m, sets).unwrap()
    }

    fn set(m: usize, ls: &[usize]) -> VertexSet {
        VertexSet::from_labels(ls, m).unwrap()
    }

    fn pentagon() -> SimplicialComplex {
        complex(5, &[&[1, 2], &[2, 3], &[3, 4], &[4, 5], &[5, 1]])
    }

    fn hexagon() -> SimplicialComplex {
        complex(6, &[&[1, 2], &[2, 3], &[3, 4], &[4, 5], &[5, 6], &[6, 1]])
    }

    #[test]
    fn pentagon_nonface_stream() {
        let k = pentagon();
        let nonfaces: Vec<VertexSet> = nonface_subsets(&k).collect();
        assert_eq!(nonfaces.len(), 21);
        let by_size = |c: usize| nonfaces.iter().filter(|s| s.card() == c).count();
        assert_eq!((by_size(2), by_size(3), by_size(4), by_size(5)), (5, 10, 5, 1));
        // Size-then-lex: the five missing diagonals come first.
        assert_eq!(
            &nonfaces[..5],
            &[
                set(5, &[1, 3]),
                set(5, &[1, 4]),
                set(5, &[2, 4]),
                set(5, &[2, 5]),
                set(5, &[3, 5]),
            ]
        );
        let mut sorted = nonfaces.clone();
        sorted.sort();
        assert_eq!(nonfaces, sorted);
    }

    #[test]
    fn disjoint_edges_nonfaces() {
        let k = complex(4, &[&[1, 2], &[3, 4]]);
        let nonfaces: Vec<VertexSet> = nonface_subsets(&k).collect();
        // 16 subsets minus 7 faces (empty set, 4 vertices, 2 edges).
        assert_eq!(nonfaces.len(), 9);
        assert!(nonfaces.contains(&set(4, &[1, 2, 3, 4])));
        assert!(!nonfaces.contains(&set(4, &[1, 2])));
    }

    #[test]
    fn simplex_boundary_nonface_is_everything() {
        let k = complex(4, &[&[1, 2, 3], &[1, 2, 4], &[1, 3, 4], &[2, 3, 4]]);
        let nonfaces: Vec<VertexSet> = nonface_subsets(&k).collect();
        assert_eq!(nonfaces, vec![set(4, &[1, 2, 3, 4])]);

        let full = complex(3, &[&[1, 2, 3]]);
        assert_eq!(nonface_subsets(&full).count(), 0);
    }

    #[test]
    fn pentagon_summands_standard_disc() {
        let punctured = wedge_summands(&pentagon(), 2, false);
        let s3: usize = punctured
            .summands
            .iter()
            .filter(|s| s.sphere_dim == 3)
            .map(|s| s.multiplicity)
            .sum();
        let s4: usize = punctured
            .summands
            .iter()
            .filter(|s| s.sphere_dim == 4)
            .map(|s| s.multiplicity)
            .sum();
        assert_eq!((s3, s4), (5, 5));
        assert_eq!(punctured.total_multiplicity(), 10);
        assert!(punctured.summands.iter().all(|s| s.degree == 0));
        assert!(!punctured.has_torsion());

        let closed = wedge_summands(&pentagon(), 2, true);
        let top: Vec<_> = closed
            .summands
            .iter()
            .filter(|s| s.iset == VertexSet::full(5))
            .collect();
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].sphere_dim, 7);
        assert_eq!(top[0].degree, 1);
    }

    #[test]
    fn pentagon_summands_disc_three() {
        let punctured = wedge_summands(&pentagon(), 3, false);
        let mut dims: Vec<(usize, usize)> = punctured
            .summands
            .iter()
            .map(|s| (s.sphere_dim, s.multiplicity))
            .collect();
        dims.sort();
        // Diagonals lift to S^5, triples with one edge to S^7.
        let s5: usize = dims.iter().filter(|d| d.0 == 5).map(|d| d.1).sum();
        let s7: usize = dims.iter().filter(|d| d.0 == 7).map(|d| d.1).sum();
        assert_eq!((s5, s7), (5, 5));
        assert_eq!(punctured.total_multiplicity(), 10);
    }

    #[test]
    fn betti_vectors() {
        assert_eq!(zk_betti(&pentagon(), 2), vec![1, 0, 0, 5, 5, 0, 0, 1]);
        assert_eq!(zk_betti(&hexagon(), 2), vec![1, 0, 0, 9, 16, 9, 0, 0, 1]);

        let square = complex(4, &[&[1, 2], &[2, 3], &[3, 4], &[4, 1]]);
        assert_eq!(zk_betti(&square, 2), vec![1, 0, 0, 2, 0, 0, 1]);

        let bd4 = complex(
            5,
            &[
                &[1, 2, 3, 4],
                &[1, 2, 3, 5],
                &[1, 2, 4, 5],
                &[1, 3, 4, 5],
                &[2, 3, 4, 5],
            ],
        );
        assert_eq!(zk_betti(&bd4, 2), vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 1]);

        // Full simplex: contractible manifold, unit only.
        let simplex = complex(3, &[&[1, 2, 3]]);
        assert_eq!(zk_betti(&simplex, 2), vec![1]);
    }

    #[test]
    fn wedge_check_passes_on_cycles() {
        let report = check_wedge_hypothesis(&pentagon(), 0);
        assert!(report.pass);
        assert_eq!(report.checked, 21);
        assert!(report.to_string().contains("holds"));

        assert!(check_wedge_hypothesis(&hexagon(), 0).pass);
    }

    #[test]
    fn wedge_check_flags_bad_top() {
        // Two disjoint edges: every proper non-face hull is fine, but the
        // full vertex set does not look like a 1-sphere.
        let k = complex(4, &[&[1, 2], &[3, 4]]);
        let report = check_wedge_hypothesis(&k, 0);
        assert!(!report.pass);
        assert_eq!(report.offenders.len(), 1);
        assert_eq!(report.offenders[0].0, VertexSet::full(4));
        assert!(report.to_string().contains("{1,2,3,4}"));
    }

    #[test]
    fn torsion_is_carried_not_dropped() {
        let rp2 = complex(
            6,
            &[
                &[1, 2, 3],
                &[1, 2, 6],
                &[1, 3, 4],
                &[1, 4, 5],
                &[1, 5, 6],
                &[2, 3, 5],
                &[2, 4, 5],
                &[2, 4, 6],
                &[3, 4, 6],
                &[3, 5, 6],
            ],
        );
        let punctured = wedge_summands(&rp2, 2, false);
        assert!(!punctured.has_torsion());
        let closed = wedge_summands(&rp2, 2, true);
        assert_eq!(closed.torsion.len(), 1);
        assert_eq!(closed.torsion[0].iset, VertexSet::full(6));
        assert_eq!(closed.torsion[0].degree, 1);
        assert_eq!(closed.torsion[0].divisors, vec![BigUint::from(2u8)]);
    }

    #[test]
    fn subset_homology_is_shared_state() {
        let k = pentagon();
        let subsets = SubsetHomology::compute(&k);
        assert_eq!(subsets.nonfaces().count(), 21);
        assert_eq!(subsets.rank(set(5, &[1, 3]), 0), 1);
        assert_eq!(subsets.rank(set(5, &[1, 2]), 0), 0); // a face
        let t2 = subsets.table(2, false);
        let t3 = subsets.table(3, false);
        assert_eq!(t2.total_multiplicity(), t3.total_multiplicity());
    }
}
