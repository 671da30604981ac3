use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::matrix::{dense_identity, IntMatrix};

/// Smith normal form `U * A * V = S` with `S` diagonal, entries positive and
/// each dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub rank: usize,
    /// Positive invariant factors `d_1 | d_2 | ... | d_rank`.
    pub diagonal: Vec<BigInt>,
    pub transforms: Option<Transforms>,
}

/// Unimodular change-of-basis pairs. Inverses are carried along because the
/// homology routines need both directions.
#[derive(Clone, Debug)]
pub struct Transforms {
    pub u: Vec<Vec<BigInt>>,
    pub u_inv: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub v_inv: Vec<Vec<BigInt>>,
}

impl SmithForm {
    /// Invariant factors greater than one: the torsion of the cokernel.
    pub fn torsion_divisors(&self) -> Vec<BigUint> {
        self.diagonal
            .iter()
            .filter(|d| d.magnitude() > &BigUint::from(1u8))
            .map(|d| d.magnitude().clone())
            .collect()
    }

    /// |det| of a square matrix: product of invariant factors, zero if
    /// rank-deficient. Panics on non-square input.
    pub fn det_abs(&self, n: usize) -> BigUint {
        if self.rank < n {
            return BigUint::zero();
        }
        self.diagonal
            .iter()
            .fold(BigUint::from(1u8), |acc, d| acc * d.magnitude())
    }
}

struct Eliminator {
    s: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
    tr: Option<Transforms>,
}

impl Eliminator {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.s.swap(a, b);
        if let Some(tr) = &mut self.tr {
            tr.u.swap(a, b);
            for row in &mut tr.u_inv {
                row.swap(a, b);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for row in &mut self.s {
            row.swap(a, b);
        }
        if let Some(tr) = &mut self.tr {
            for row in &mut tr.v {
                row.swap(a, b);
            }
            tr.v_inv.swap(a, b);
        }
    }

    /// row_a -= q * row_b
    fn row_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = q * &self.s[b][j];
            self.s[a][j] -= t;
        }
        if let Some(tr) = &mut self.tr {
            for j in 0..self.rows {
                let t = q * &tr.u[b][j];
                tr.u[a][j] -= t;
            }
            for i in 0..self.rows {
                let t = q * &tr.u_inv[i][a];
                tr.u_inv[i][b] += t;
            }
        }
    }

    /// col_a -= q * col_b
    fn col_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for row in &mut self.s {
            let t = q * &row[b];
            row[a] -= t;
        }
        if let Some(tr) = &mut self.tr {
            for row in &mut tr.v {
                let t = q * &row[b];
                row[a] -= t;
            }
            for j in 0..self.cols {
                let t = q * &tr.v_inv[a][j];
                tr.v_inv[b][j] += t;
            }
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = std::mem::take(&mut self.s[a][j]);
            self.s[a][j] = -v;
        }
        if let Some(tr) = &mut self.tr {
            for j in 0..self.rows {
                let v = std::mem::take(&mut tr.u[a][j]);
                tr.u[a][j] = -v;
            }
            for i in 0..self.rows {
                let v = std::mem::take(&mut tr.u_inv[i][a]);
                tr.u_inv[i][a] = -v;
            }
        }
    }

    /// Pivot minimizing (|value|, fill, position) over the trailing submatrix.
    /// Small pivots keep quotients small; low fill limits coefficient growth.
    fn pick_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut row_nnz = vec![0usize; self.rows];
        let mut col_nnz = vec![0usize; self.cols];
        for (i, row) in self.s.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() {
                    row_nnz[i] += 1;
                    col_nnz[j] += 1;
                }
            }
        }
        let mut best: Option<(BigUint, usize, usize, usize)> = None;
        for (i, row) in self.s.iter().enumerate().skip(t) {
            if row_nnz[i] == 0 {
                continue;
            }
            for (j, v) in row.iter().enumerate().skip(t) {
                if v.is_zero() {
                    continue;
                }
                let abs = v.magnitude().clone();
                let fill = (row_nnz[i] - 1) * (col_nnz[j] - 1);
                let better = match &best {
                    None => true,
                    Some((babs, bfill, bi, bj)) => {
                        (&abs, fill, i, j) < (babs, *bfill, *bi, *bj)
                    }
                };
                if better {
                    best = Some((abs, fill, i, j));
                }
            }
        }
        best.map(|(_, _, i, j)| (i, j))
    }
}

/// Computes the Smith normal form by elementary row and column operations
/// over arbitrary-precision integers. Deterministic: the pivot rule has no
/// ties left unbroken.
pub fn smith_normal_form(a: &IntMatrix, with_transforms: bool) -> SmithForm {
    let (rows, cols) = (a.rows(), a.cols());
    let mut e = Eliminator {
        s: a.to_dense(),
        rows,
        cols,
        tr: with_transforms.then(|| Transforms {
            u: dense_identity(rows),
            u_inv: dense_identity(rows),
            v: dense_identity(cols),
            v_inv: dense_identity(cols),
        }),
    };

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = e.pick_pivot(t) else {
            break;
        };
        e.swap_rows(t, pi);
        e.swap_cols(t, pj);

        'isolate: loop {
            // Clear column t by Euclidean steps; a nonzero remainder becomes
            // the new, strictly smaller pivot.
            let mut i = t + 1;
            while i < rows {
                if e.s[i][t].is_zero() {
                    i += 1;
                    continue;
                }
                let q = &e.s[i][t] / &e.s[t][t];
                e.row_sub(i, t, &q);
                if !e.s[i][t].is_zero() {
                    e.swap_rows(i, t);
                }
            }
            let mut j = t + 1;
            while j < cols {
                if e.s[t][j].is_zero() {
                    j += 1;
                    continue;
                }
                let q = &e.s[t][j] / &e.s[t][t];
                e.col_sub(j, t, &q);
                if !e.s[t][j].is_zero() {
                    e.swap_cols(j, t);
                    // The incoming column may have nonzeros below row t.
                    continue 'isolate;
                }
            }
            if (t + 1..rows).any(|i| !e.s[i][t].is_zero()) {
                continue 'isolate;
            }

            // Pivot isolated; enforce divisibility into the remaining block.
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&e.s[i][j] % &e.s[t][t]).is_zero());
            match offender {
                Some((i, _)) => {
                    // Fold the offending row into the pivot row and restart;
                    // the next gcd round strictly shrinks the pivot.
                    let minus_one = BigInt::from(-1);
                    e.row_sub(t, i, &minus_one);
                    continue 'isolate;
                }
                None => break 'isolate,
            }
        }

        if e.s[t][t].is_negative() {
            e.negate_row(t);
        }
        t += 1;
    }

    let diagonal: Vec<BigInt> = (0..t).map(|i| e.s[i][i].clone()).collect();
    debug_assert!(diagonal
        .windows(2)
        .all(|w| (&w[1] % &w[0]).is_zero()));
    SmithForm {
        rank: t,
        diagonal,
        transforms: e.tr,
    }
}
