use std::cmp::Ordering;
use std::fmt;

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Subset of a vertex universe `{1, ..., m}`, stored as a bitmask.
///
/// Vertices are 1-based everywhere outside this type; bit `v - 1` of the mask
/// represents vertex `v`. That translation happens here and nowhere else.
/// The mask width caps the universe at 128 vertices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(u128);

pub const MAX_VERTICES: usize = 128;

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// Builds a set from 1-based labels, validating the range `1..=m`.
    /// Repeated labels are rejected: every caller feeding us duplicates so far
    /// had a malformed input file, not an intentional multiset.
    pub fn from_labels(labels: &[usize], m: usize) -> Result<Self> {
        let mut mask = 0u128;
        for &v in labels {
            if v == 0 || v > m || v > MAX_VERTICES {
                return Err(Error::VertexOutOfRange { vertex: v, m });
            }
            let bit = 1u128 << (v - 1);
            if mask & bit != 0 {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("vertex {v} repeated within one face"),
                });
            }
            mask |= bit;
        }
        Ok(VertexSet(mask))
    }

    /// The full set `{1, ..., m}`.
    pub fn full(m: usize) -> Self {
        debug_assert!(m <= MAX_VERTICES);
        if m == 0 {
            VertexSet(0)
        } else {
            VertexSet(u128::MAX >> (128 - m))
        }
    }

    pub fn singleton(v: usize) -> Self {
        debug_assert!((1..=MAX_VERTICES).contains(&v));
        VertexSet(1u128 << (v - 1))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn card(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, v: usize) -> bool {
        (1..=MAX_VERTICES).contains(&v) && self.0 & (1u128 << (v - 1)) != 0
    }

    pub fn is_subset_of(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn minus(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn intersects(self, other: VertexSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Complement inside `{1, ..., m}`.
    pub fn complement_in(self, m: usize) -> VertexSet {
        VertexSet(Self::full(m).0 & !self.0)
    }

    pub fn insert(self, v: usize) -> VertexSet {
        debug_assert!((1..=MAX_VERTICES).contains(&v));
        VertexSet(self.0 | (1u128 << (v - 1)))
    }

    pub fn remove(self, v: usize) -> VertexSet {
        debug_assert!((1..=MAX_VERTICES).contains(&v));
        VertexSet(self.0 & !(1u128 << (v - 1)))
    }

    /// Ascending 1-based labels.
    pub fn members(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Iterates members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let v = rest.trailing_zeros() as usize + 1;
                rest &= rest - 1;
                Some(v)
            }
        })
    }

    /// Smallest member, if any.
    pub fn min_member(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize + 1)
        }
    }

    /// Position of `v` within the ascending member list (0-based).
    /// `v` must be a member.
    pub fn rank_of(self, v: usize) -> usize {
        debug_assert!(self.contains(v));
        (self.0 & ((1u128 << (v - 1)) - 1)).count_ones() as usize
    }

    /// Order-preserving relabeling onto `{1, ..., card(universe)}`: each member
    /// of `self` (which must lie in `universe`) maps to its rank in `universe`.
    pub fn reindex_into(self, universe: VertexSet) -> VertexSet {
        debug_assert!(self.is_subset_of(universe));
        let mut out = VertexSet::EMPTY;
        for v in self.iter() {
            out = out.insert(universe.rank_of(v) + 1);
        }
        out
    }
}

/// Cardinality first, then lexicographic on ascending member lists. This is
/// the enumeration order used for faces, non-face streams and table keys.
impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.card().cmp(&other.card()) {
            Ordering::Equal => {}
            o => return o,
        }
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        // Equal size: the owner of the lowest differing bit has the smaller
        // first distinct member, hence the lexicographically smaller list.
        let diff = self.0 ^ other.0;
        let low = diff & diff.wrapping_neg();
        if self.0 & low != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.members().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(deserializer)?;
        VertexSet::from_labels(&labels, MAX_VERTICES).map_err(|e| D::Error::custom(e.to_string()))
    }
}
