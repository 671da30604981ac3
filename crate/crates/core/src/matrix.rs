use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Exact integer matrix. Built sparsely (boundary matrices carry two to four
/// nonzeros per column); densified only inside eliminations, whose inputs at
/// the intended scale stay small.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, BigInt)>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    /// `entries` must have in-range indices; repeated positions are summed.
    pub fn from_triplets(rows: usize, cols: usize, entries: Vec<(usize, usize, BigInt)>) -> Self {
        let mut entries = entries;
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut compact: Vec<(usize, usize, BigInt)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            match compact.last_mut() {
                Some((lr, lc, lv)) if *lr == r && *lc == c => *lv += v,
                _ => compact.push((r, c, v)),
            }
        }
        compact.retain(|(_, _, v)| !v.is_zero());
        IntMatrix {
            rows,
            cols,
            entries: compact,
        }
    }

    pub fn from_dense(dense: &[Vec<BigInt>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, |r| r.len());
        let mut entries = Vec::new();
        for (r, row) in dense.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    entries.push((r, c, v.clone()));
                }
            }
        }
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn transpose(&self) -> IntMatrix {
        let entries = self
            .entries
            .iter()
            .map(|(r, c, v)| (*c, *r, v.clone()))
            .collect();
        IntMatrix::from_triplets(self.cols, self.rows, entries)
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut dense = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            dense[*r][*c] = v.clone();
        }
        dense
    }

    /// Matrix-vector product, exact.
    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![BigInt::zero(); self.rows];
        for (r, c, v) in &self.entries {
            out[*r] += v * &x[*c];
        }
        out
    }
}

pub(crate) fn dense_identity(n: usize) -> Vec<Vec<BigInt>> {
    let mut id = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in id.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    id
}

pub(crate) fn dense_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let (ar, ac) = (a.len(), a.first().map_or(0, |r| r.len()));
    let (br, bc) = (b.len(), b.first().map_or(0, |r| r.len()));
    assert_eq!(ac, br, "shape mismatch {ar}x{ac} * {br}x{bc}");
    let mut out = vec![vec![BigInt::zero(); bc]; ar];
    for i in 0..ar {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..bc {
                if !b[k][j].is_zero() {
                    out[i][j] += aik * &b[k][j];
                }
            }
        }
    }
    out
}
