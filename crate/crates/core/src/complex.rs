use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::vertex_set::{VertexSet, MAX_VERTICES};

/// Abstract simplicial complex on the vertex universe `{1, ..., m}`, stored
/// as its inclusion-maximal faces. Immutable once built; every derived
/// complex is a fresh value.
///
/// The empty complex (`m = 0`, no facets) is a valid value: it is what a full
/// subcomplex along the empty vertex set returns, and its only face is the
/// empty set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    m: usize,
    facets: Vec<VertexSet>,
}

impl SimplicialComplex {
    /// Builds from candidate faces: dedupes, drops faces contained in others,
    /// orders canonically. Every vertex of `{1, ..., m}` must lie in some
    /// facet; use [`SimplicialComplex::build_allowing_ghosts`] to lift that.
    pub fn build(m: usize, faces: Vec<VertexSet>) -> Result<Self> {
        let complex = Self::build_allowing_ghosts(m, faces)?;
        let covered = complex
            .facets
            .iter()
            .fold(VertexSet::EMPTY, |acc, &f| acc.union(f));
        if let Some(v) = VertexSet::full(m).minus(covered).min_member() {
            return Err(Error::GhostVertex { vertex: v });
        }
        Ok(complex)
    }

    /// Same as [`SimplicialComplex::build`] but permits vertices of the
    /// universe that lie in no face.
    pub fn build_allowing_ghosts(m: usize, faces: Vec<VertexSet>) -> Result<Self> {
        if m > MAX_VERTICES {
            return Err(Error::BadParameters {
                message: format!("{m} vertices exceeds the supported maximum {MAX_VERTICES}"),
            });
        }
        if faces.is_empty() {
            return Err(Error::EmptyFacetList);
        }
        for (index, f) in faces.iter().enumerate() {
            if f.is_empty() {
                return Err(Error::EmptyFacet { index });
            }
            if !f.is_subset_of(VertexSet::full(m)) {
                let vertex = f.minus(VertexSet::full(m)).min_member().unwrap();
                return Err(Error::VertexOutOfRange { vertex, m });
            }
        }
        Ok(Self::from_maximal(m, faces))
    }

    /// The complex `{∅}` on zero vertices.
    pub fn empty() -> Self {
        SimplicialComplex {
            m: 0,
            facets: Vec::new(),
        }
    }

    /// Antichain reduction plus canonical ordering. Input faces may repeat or
    /// nest; they must already be range-checked.
    fn from_maximal(m: usize, mut faces: Vec<VertexSet>) -> Self {
        faces.sort();
        faces.dedup();
        // Descending size: a set can only be contained in a larger one.
        faces.sort_by_key(|f| std::cmp::Reverse(f.card()));
        let mut maximal: Vec<VertexSet> = Vec::with_capacity(faces.len());
        for f in faces {
            if !maximal.iter().any(|&g| f.is_subset_of(g)) {
                maximal.push(f);
            }
        }
        maximal.sort();
        SimplicialComplex { m, facets: maximal }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn facets(&self) -> &[VertexSet] {
        &self.facets
    }

    /// Dimension; `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.max_face_card() as isize - 1
    }

    /// Cardinality of the largest face (0 for the empty complex).
    pub fn max_face_card(&self) -> usize {
        self.facets.iter().map(|f| f.card()).max().unwrap_or(0)
    }

    /// Face test with range validation of the query set.
    pub fn is_face(&self, s: VertexSet) -> Result<bool> {
        if !s.is_subset_of(VertexSet::full(self.m)) {
            let vertex = s.minus(VertexSet::full(self.m)).min_member().unwrap();
            return Err(Error::VertexOutOfRange { vertex, m: self.m });
        }
        Ok(self.has_face(s))
    }

    /// Face test for sets already known to lie in the universe.
    pub(crate) fn has_face(&self, s: VertexSet) -> bool {
        s.is_empty() || self.facets.iter().any(|&f| s.is_subset_of(f))
    }

    /// All faces with `j + 1` vertices, ascending-lex.
    pub fn faces_of_dim(&self, j: usize) -> Vec<VertexSet> {
        let card = j + 1;
        if card > self.max_face_card() {
            return Vec::new();
        }
        (1..=self.m)
            .combinations(card)
            .map(|c| {
                c.iter()
                    .fold(VertexSet::EMPTY, |acc, &v| acc.insert(v))
            })
            .filter(|&s| self.has_face(s))
            .collect()
    }

    /// Face counts `(f_{-1} = 1, f_0, ..., f_dim)`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![1];
        for j in 0..self.max_face_card() {
            f.push(self.faces_of_dim(j).len());
        }
        f
    }

    /// Full subcomplex on `iset`: all faces contained in `iset`, relabeled
    /// onto `{1, ..., |iset|}` preserving order. The mapping back is given by
    /// `iset.members()` (new label `p` was old label `members[p - 1]`).
    pub fn full_subcomplex(&self, iset: VertexSet) -> SimplicialComplex {
        debug_assert!(iset.is_subset_of(VertexSet::full(self.m)));
        if iset.is_empty() {
            return SimplicialComplex::empty();
        }
        let restricted: Vec<VertexSet> = self
            .facets
            .iter()
            .map(|&f| f.intersection(iset).reindex_into(iset))
            .filter(|s| !s.is_empty())
            .collect();
        // Ghost-free inputs keep this nonempty: each member of iset is a face.
        debug_assert!(!restricted.is_empty());
        Self::from_maximal(iset.card(), restricted)
    }

    /// Deletes one vertex: the full subcomplex on the remaining `m - 1`
    /// labels, relabeled order-preservingly.
    pub fn vertex_deletion(&self, v: usize) -> Result<SimplicialComplex> {
        if v == 0 || v > self.m {
            return Err(Error::VertexOutOfRange { vertex: v, m: self.m });
        }
        Ok(self.full_subcomplex(VertexSet::full(self.m).remove(v)))
    }

    /// Link of a vertex, relabeled onto its own vertex set order-preservingly.
    pub fn vertex_link(&self, v: usize) -> Result<SimplicialComplex> {
        if v == 0 || v > self.m {
            return Err(Error::VertexOutOfRange { vertex: v, m: self.m });
        }
        let star: Vec<VertexSet> = self
            .facets
            .iter()
            .filter(|f| f.contains(v))
            .map(|&f| f.remove(v))
            .filter(|s| !s.is_empty())
            .collect();
        if star.is_empty() {
            return Ok(SimplicialComplex::empty());
        }
        let universe = star.iter().fold(VertexSet::EMPTY, |acc, &f| acc.union(f));
        let relabeled = star
            .into_iter()
            .map(|s| s.reindex_into(universe))
            .collect();
        Ok(Self::from_maximal(universe.card(), relabeled))
    }

    /// True iff every `(l + 1)`-subset of the universe is a face.
    pub fn is_l_neighbourly(&self, l: usize) -> bool {
        if l + 1 > self.m {
            return true;
        }
        (1..=self.m)
            .combinations(l + 1)
            .all(|c| self.has_face(c.iter().fold(VertexSet::EMPTY, |acc, &v| acc.insert(v))))
    }

    /// Largest `l` such that the complex is `l`-neighbourly. For the full
    /// simplex (no non-faces) this is capped at `m - 1`, the largest `l` for
    /// which there is anything to test.
    pub fn max_neighbourliness(&self) -> usize {
        debug_assert!(self.m >= 1, "needs at least one vertex");
        match self.smallest_non_face_card() {
            Some(c) => c - 2,
            None => self.m - 1,
        }
    }

    /// Cardinality of the smallest non-face; `None` for the full simplex.
    /// Singleton non-faces cannot occur on ghost-free complexes.
    pub fn smallest_non_face_card(&self) -> Option<usize> {
        for card in 1..=self.m {
            let missing = (1..=self.m)
                .combinations(card)
                .any(|c| !self.has_face(c.iter().fold(VertexSet::EMPTY, |acc, &v| acc.insert(v))));
            if missing {
                return Some(card);
            }
        }
        None
    }

    /// Inclusion-minimal non-faces in size-then-lex order. The scan is
    /// exponential in `m`; fine at the intended scale (m well below 30).
    pub fn minimal_non_faces(&self) -> Vec<VertexSet> {
        let mut found: Vec<VertexSet> = Vec::new();
        for card in 1..=self.m {
            for c in (1..=self.m).combinations(card) {
                let s = c.iter().fold(VertexSet::EMPTY, |acc, &v| acc.insert(v));
                if found.iter().any(|&n| n.is_subset_of(s)) {
                    continue;
                }
                if !self.has_face(s) {
                    found.push(s);
                }
            }
        }
        found
    }

    /// Purity plus the two pseudomanifold conditions in dimension `d`: every
    /// `(d - 1)`-face lies in exactly two facets, and the facet adjacency
    /// graph across those ridges is connected.
    pub fn is_pure_pseudomanifold(&self, d: usize) -> bool {
        if self.facets.is_empty() {
            return false;
        }
        if self.facets.iter().any(|f| f.card() != d + 1) {
            return false;
        }
        let mut ridge_facets: HashMap<VertexSet, Vec<usize>> = HashMap::new();
        for (i, &f) in self.facets.iter().enumerate() {
            for v in f.iter() {
                ridge_facets.entry(f.remove(v)).or_default().push(i);
            }
        }
        if ridge_facets.values().any(|fs| fs.len() != 2) {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.facets.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for fs in ridge_facets.values() {
            let (a, b) = (find(&mut parent, fs[0]), find(&mut parent, fs[1]));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..self.facets.len()).all(|i| find(&mut parent, i) == root)
    }
}

impl std::fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SimplicialComplex(m={}, facets=[", self.m)?;
        for (i, facet) in self.facets.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{facet}")?;
        }
        write!(f, "])")
    }
}
