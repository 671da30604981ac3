use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::matrix::{dense_mul, IntMatrix};
use crate::snf::smith_normal_form;
use crate::vertex_set::VertexSet;

/// Reduced integral homology, one rank and one torsion list per degree from
/// `-1` up to the dimension of the complex. Degree `-1` exists so that the
/// empty complex reports `H~_{-1} = Z` and subset bookkeeping stays uniform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyProfile {
    // Index 0 holds degree -1.
    betti: Vec<usize>,
    torsion: Vec<Vec<BigUint>>,
}

impl HomologyProfile {
    pub fn betti(&self, j: isize) -> usize {
        usize::try_from(j + 1)
            .ok()
            .and_then(|i| self.betti.get(i))
            .copied()
            .unwrap_or(0)
    }

    pub fn torsion(&self, j: isize) -> &[BigUint] {
        usize::try_from(j + 1)
            .ok()
            .and_then(|i| self.torsion.get(i))
            .map_or(&[], |v| v.as_slice())
    }

    pub fn max_degree(&self) -> isize {
        self.betti.len() as isize - 2
    }

    pub fn is_trivial(&self) -> bool {
        self.betti.iter().all(|&b| b == 0) && !self.has_torsion()
    }

    pub fn has_torsion(&self) -> bool {
        self.torsion.iter().any(|t| !t.is_empty())
    }

    pub fn total_rank(&self) -> usize {
        self.betti.iter().sum()
    }

    /// Degrees carrying a nonzero rank or torsion.
    pub fn support(&self) -> Vec<isize> {
        (-1..=self.max_degree())
            .filter(|&j| self.betti(j) > 0 || !self.torsion(j).is_empty())
            .collect()
    }

    /// Matches the reduced homology of a `d`-sphere: one free class in degree
    /// `d`, nothing else. `d = -1` matches the empty complex.
    pub fn is_sphere(&self, d: isize) -> bool {
        !self.has_torsion() && self.total_rank() == 1 && self.betti(d) == 1
    }

    /// Alternating rank sum with degree `-1` included (weight `-1`).
    pub fn reduced_euler(&self) -> i64 {
        let mut chi = 0i64;
        for j in -1..=self.max_degree() {
            let sign = if (j.rem_euclid(2)) == 0 { 1 } else { -1 };
            chi += sign * self.betti(j) as i64;
        }
        chi
    }

    /// Short human-readable form, torsion included: `H~1 = Z^2 + Z/2`.
    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        for j in -1..=self.max_degree() {
            let b = self.betti(j);
            let tor = self.torsion(j);
            if b == 0 && tor.is_empty() {
                continue;
            }
            let mut group = match b {
                0 => String::new(),
                1 => "Z".to_string(),
                _ => format!("Z^{b}"),
            };
            for d in tor {
                if !group.is_empty() {
                    group.push_str(" + ");
                }
                group.push_str(&format!("Z/{d}"));
            }
            parts.push(format!("H~{j} = {group}"));
        }
        if parts.is_empty() {
            "trivial".to_string()
        } else {
            parts.join(", ")
        }
    }
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary())
    }
}

/// Boundary operator in the augmented chain complex, over the ascending-lex
/// face order of each dimension. `j = 0` is the augmentation: every vertex
/// maps to the generator of the degree `-1` chain group with coefficient 1.
/// Signs alternate with the position of the omitted vertex.
pub fn boundary_matrix(k: &SimplicialComplex, j: usize) -> Result<IntMatrix> {
    let top = k.max_face_card();
    if j > top {
        return Err(Error::DegreeOutOfRange { degree: j, max: top });
    }
    if j == 0 {
        let cols = k.faces_of_dim(0).len();
        let entries = (0..cols).map(|c| (0, c, BigInt::from(1))).collect();
        return Ok(IntMatrix::from_triplets(1, cols, entries));
    }
    let rows_faces = k.faces_of_dim(j - 1);
    let cols_faces = k.faces_of_dim(j);
    let row_index: HashMap<VertexSet, usize> = rows_faces
        .iter()
        .enumerate()
        .map(|(i, &f)| (f, i))
        .collect();
    let mut entries = Vec::with_capacity(cols_faces.len() * (j + 1));
    for (c, &face) in cols_faces.iter().enumerate() {
        for (pos, v) in face.iter().enumerate() {
            let sub = face.remove(v);
            let r = row_index[&sub];
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            entries.push((r, c, BigInt::from(sign)));
        }
    }
    Ok(IntMatrix::from_triplets(
        rows_faces.len(),
        cols_faces.len(),
        entries,
    ))
}

/// Reduced integral homology in every degree, by Smith normal form of the
/// augmented boundary matrices.
pub fn reduced_homology(k: &SimplicialComplex) -> HomologyProfile {
    let top = k.max_face_card();
    // rank of the boundary operator leaving degree j, for j in 0..=top.
    let mut ranks = vec![0usize; top + 1];
    let mut divisors: Vec<Vec<BigUint>> = vec![Vec::new(); top + 1];
    for j in 0..top {
        let form = smith_normal_form(&boundary_matrix(k, j).expect("degree in range"), false);
        ranks[j] = form.rank;
        divisors[j] = form.torsion_divisors();
    }

    let f = k.f_vector();
    let mut betti = Vec::with_capacity(top + 1);
    let mut torsion = Vec::with_capacity(top + 1);
    // Degree -1: the kernel of the (zero) map below, modulo the augmentation.
    betti.push(1 - ranks.first().copied().unwrap_or(0));
    torsion.push(Vec::new());
    for j in 0..top {
        let out_rank = ranks[j];
        let in_rank = if j + 1 < top { ranks[j + 1] } else { 0 };
        betti.push(f[j + 1] - out_rank - in_rank);
        torsion.push(if j + 1 < top {
            divisors[j + 1].clone()
        } else {
            Vec::new()
        });
    }
    HomologyProfile { betti, torsion }
}

/// Integral representatives spanning the free part of reduced cohomology in
/// one degree, as coefficient vectors over the ascending-lex faces of that
/// dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleBasis {
    pub degree: usize,
    pub representatives: Vec<Vec<BigInt>>,
}

/// Cocycle representatives for the free part of `H~^j`. Errors with
/// `TorsionPresent` when the cohomology group is not free, since a basis of
/// representatives is then ill-defined for the torsion part.
pub fn cocycle_basis(k: &SimplicialComplex, j: usize) -> Result<CocycleBasis> {
    if j as isize > k.dim() {
        return Err(Error::DegreeOutOfRange {
            degree: j,
            max: k.max_face_card().saturating_sub(1),
        });
    }
    let d_out = boundary_matrix(k, j + 1)?.transpose();
    let d_in = boundary_matrix(k, j)?.transpose();
    let fq = free_quotient(&d_out, &d_in);
    if !fq.torsion.is_empty() {
        return Err(Error::TorsionPresent {
            degree: j,
            divisors: fq.torsion,
        });
    }
    debug_assert!(fq
        .representatives
        .iter()
        .all(|rep| d_out.apply(rep).iter().all(|x| x.is_zero())));
    Ok(CocycleBasis {
        degree: j,
        representatives: fq.representatives,
    })
}

pub(crate) struct FreeQuotient {
    pub torsion: Vec<BigUint>,
    /// Ambient vectors representing a basis of the free part.
    pub representatives: Vec<Vec<BigInt>>,
}

/// The subquotient `ker(d_out) / im(d_in)` of `Z^n`, where `d_out` has `n`
/// columns, `d_in` has `n` rows and `d_out * d_in = 0`. Representatives are
/// deterministic: both Smith forms use the deterministic pivot rule.
pub(crate) fn free_quotient(d_out: &IntMatrix, d_in: &IntMatrix) -> FreeQuotient {
    let n = d_out.cols();
    assert_eq!(n, d_in.rows(), "chain degrees do not line up");
    let out_form = smith_normal_form(d_out, true);
    let tr_out = out_form.transforms.expect("requested transforms");
    let r = out_form.rank;
    let z = n - r;

    // Columns r.. of V are a basis of the kernel; express incoming columns
    // in those coordinates. Their first r coordinates vanish exactly because
    // the composite is zero.
    let vinv_din = dense_mul(&tr_out.v_inv, &d_in.to_dense());
    debug_assert!(vinv_din[..r].iter().all(|row| row.iter().all(Zero::is_zero)));
    let coords: Vec<Vec<BigInt>> = vinv_din[r..].to_vec();
    let coord_mat = if z == 0 {
        IntMatrix::zero(0, d_in.cols())
    } else {
        IntMatrix::from_dense(&coords)
    };
    let q_form = smith_normal_form(&coord_mat, true);
    let torsion = q_form.torsion_divisors();
    let tr_q = q_form.transforms.expect("requested transforms");
    let r2 = q_form.rank;

    let mut representatives = Vec::with_capacity(z - r2);
    for c in r2..z {
        let mut ambient = vec![BigInt::zero(); n];
        for i in 0..z {
            let coeff = &tr_q.u_inv[i][c];
            if coeff.is_zero() {
                continue;
            }
            for (row, amb) in ambient.iter_mut().enumerate() {
                *amb += coeff * &tr_out.v[row][r + i];
            }
        }
        representatives.push(ambient);
    }
    debug_assert_eq!(representatives.len(), z - r2);
    FreeQuotient {
        torsion,
        representatives,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snf::smith_normal_form;

    fn complex(m: usize, facets: &[&[usize]]) -> SimplicialComplex {
        let sets = facets
            .iter()
            .map(|f| VertexSet::from_labels(f, m).unwrap())
            .collect();
        SimplicialComplex::build(m, sets).unwrap()
    }

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn single_edge_boundary_column() {
        let k = complex(2, &[&[1, 2]]);
        let d1 = boundary_matrix(&k, 1).unwrap();
        assert_eq!(d1.to_dense(), vec![vec![b(-1)], vec![b(1)]]);
        let d0 = boundary_matrix(&k, 0).unwrap();
        assert_eq!(d0.to_dense(), vec![vec![b(1), b(1)]]);
        assert!(boundary_matrix(&k, 3).is_err());
    }

    #[test]
    fn boundary_squares_to_zero() {
        let k = complex(4, &[&[1, 2, 3], &[1, 2, 4], &[1, 3, 4], &[2, 3, 4]]);
        for j in 1..=2 {
            let a = boundary_matrix(&k, j).unwrap();
            let bmat = boundary_matrix(&k, j + 1).unwrap();
            let prod = dense_mul(&a.to_dense(), &bmat.to_dense());
            assert!(prod.iter().all(|row| row.iter().all(Zero::is_zero)));
        }
    }

    #[test]
    fn sphere_profiles() {
        // Boundary of the tetrahedron is a 2-sphere.
        let s2 = complex(4, &[&[1, 2, 3], &[1, 2, 4], &[1, 3, 4], &[2, 3, 4]]);
        let h = reduced_homology(&s2);
        assert!(h.is_sphere(2));
        assert_eq!(h.betti(2), 1);
        assert_eq!(h.betti(0), 0);

        // Pentagon is a circle.
        let s1 = complex(5, &[&[1, 2], &[2, 3], &[3, 4], &[4, 5], &[5, 1]]);
        assert!(reduced_homology(&s1).is_sphere(1));

        // Two points form a 0-sphere.
        let s0 = complex(2, &[&[1], &[2]]);
        assert!(reduced_homology(&s0).is_sphere(0));

        // The empty complex is the (-1)-sphere.
        let h = reduced_homology(&SimplicialComplex::empty());
        assert!(h.is_sphere(-1));
        assert_eq!(h.betti(-1), 1);
    }

    #[test]
    fn contractible_things_are_trivial() {
        let path = complex(3, &[&[1, 2], &[2, 3]]);
        assert!(reduced_homology(&path).is_trivial());
        let simplex = complex(3, &[&[1, 2, 3]]);
        assert!(reduced_homology(&simplex).is_trivial());
        let point = complex(1, &[&[1]]);
        assert!(reduced_homology(&point).is_trivial());
    }

    #[test]
    fn disconnected_pieces_raise_degree_zero() {
        let k = complex(4, &[&[1, 2], &[3, 4]]);
        let h = reduced_homology(&k);
        assert_eq!(h.betti(0), 1);
        assert_eq!(h.betti(1), 0);
        assert!(!h.has_torsion());
    }

    #[test]
    fn projective_plane_has_two_torsion() {
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
        let h = reduced_homology(&rp2);
        assert_eq!(h.betti(0), 0);
        assert_eq!(h.betti(1), 0);
        assert_eq!(h.betti(2), 0);
        assert_eq!(h.torsion(1), &[BigUint::from(2u8)]);
        assert!(!h.is_sphere(2));
        assert_eq!(h.summary(), "H~1 = Z/2");
    }

    #[test]
    fn octahedron_is_a_two_sphere() {
        // Boundary of the cross-polytope: triangles avoiding the antipodal
        // pairs {1,4}, {2,5}, {3,6}.
        let mut facets = Vec::new();
        for &a in &[1usize, 4] {
            for &b in &[2usize, 5] {
                for &c in &[3usize, 6] {
                    facets.push(vec![a, b, c]);
                }
            }
        }
        let refs: Vec<&[usize]> = facets.iter().map(|f| f.as_slice()).collect();
        let oct = complex(6, &refs);
        assert_eq!(oct.f_vector(), vec![1, 6, 12, 8]);
        assert!(reduced_homology(&oct).is_sphere(2));
    }

    #[test]
    fn two_circles() {
        let k = complex(6, &[&[1, 2], &[2, 3], &[1, 3], &[4, 5], &[5, 6], &[4, 6]]);
        let h = reduced_homology(&k);
        assert_eq!((h.betti(0), h.betti(1)), (1, 2));
        assert!(!h.has_torsion());
    }

    #[test]
    fn pentagon_cocycle_pairs_with_fundamental_cycle() {
        let k = complex(5, &[&[1, 2], &[2, 3], &[3, 4], &[4, 5], &[5, 1]]);
        let basis = cocycle_basis(&k, 1).unwrap();
        assert_eq!(basis.representatives.len(), 1);
        let rep = &basis.representatives[0];

        // Fundamental cycle: generator of ker(boundary) in degree 1.
        let d1 = boundary_matrix(&k, 1).unwrap();
        let form = smith_normal_form(&d1, true);
        let tr = form.transforms.unwrap();
        let n = d1.cols();
        assert_eq!(form.rank, n - 1);
        let cycle: Vec<BigInt> = (0..n).map(|i| tr.v[i][n - 1].clone()).collect();
        assert!(d1.apply(&cycle).iter().all(Zero::is_zero));

        let pairing: BigInt = rep.iter().zip(&cycle).map(|(a, c)| a * c).sum();
        assert_eq!(pairing.magnitude(), &BigUint::from(1u8));
    }

    #[test]
    fn two_points_cocycle_separates_them() {
        let k = complex(2, &[&[1], &[2]]);
        let basis = cocycle_basis(&k, 0).unwrap();
        assert_eq!(basis.representatives.len(), 1);
        let rep = &basis.representatives[0];
        let diff = &rep[0] - &rep[1];
        assert_eq!(diff.magnitude(), &BigUint::from(1u8));
    }

    #[test]
    fn path_has_no_reduced_cocycles() {
        let k = complex(3, &[&[1, 2], &[2, 3]]);
        let basis = cocycle_basis(&k, 0).unwrap();
        assert!(basis.representatives.is_empty());
    }

    #[test]
    fn torsion_blocks_cocycle_basis() {
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
        // H~^2 of the projective plane carries the torsion.
        match cocycle_basis(&rp2, 2) {
            Err(Error::TorsionPresent { degree: 2, divisors }) => {
                assert_eq!(divisors, vec![BigUint::from(2u8)]);
            }
            other => panic!("expected torsion, got {other:?}"),
        }
        assert!(cocycle_basis(&rp2, 3).is_err());
    }

    #[test]
    fn euler_characteristic_matches_f_vector() {
        for k in [
            complex(5, &[&[1, 2], &[2, 3], &[3, 4], &[4, 5], &[5, 1]]),
            complex(4, &[&[1, 2, 3], &[1, 2, 4], &[1, 3, 4], &[2, 3, 4]]),
            complex(4, &[&[1, 2], &[3, 4]]),
        ] {
            let f = k.f_vector();
            let mut chi = -1i64; // f_{-1} with weight (-1)^{-1}
            for (j, count) in f.iter().enumerate().skip(1) {
                let sign = if (j - 1) % 2 == 0 { 1 } else { -1 };
                chi += sign * *count as i64;
            }
            assert_eq!(reduced_homology(&k).reduced_euler(), chi);
        }
    }
}
