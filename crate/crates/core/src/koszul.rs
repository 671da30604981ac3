use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::homology::free_quotient;
use crate::matrix::IntMatrix;
use crate::snf::smith_normal_form;
use crate::vertex_set::VertexSet;

/// Basis monomial `u_sigma v_tau` of the cochain algebra: exterior-type
/// generators `u_i` of degree `disc_k - 1`, face-type generators `v_i` of
/// degree `disc_k`, subject to `v_i^2 = u_i v_i = 0` and `v_tau = 0` for
/// `tau` not a face. `sigma` and `tau` are disjoint; `tau` is a face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KoszulMonomial {
    pub sigma: VertexSet,
    pub tau: VertexSet,
}

impl KoszulMonomial {
    pub fn degree(&self, disc_k: usize) -> usize {
        (disc_k - 1) * self.sigma.card() + disc_k * self.tau.card()
    }

    /// Vertices used by the monomial; the differential preserves it.
    pub fn multidegree(&self) -> VertexSet {
        self.sigma.union(self.tau)
    }
}

impl fmt::Display for KoszulMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sigma.is_empty() && self.tau.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for v in self.sigma.iter() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "u{v}")?;
            first = false;
        }
        for v in self.tau.iter() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "v{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// Integral cochain in one (degree, multidegree) component, as coefficients
/// over the canonical monomial basis of that component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainClass {
    pub degree: usize,
    pub multidegree: VertexSet,
    pub coeffs: Vec<BigInt>,
}

impl CochainClass {
    pub fn zero(degree: usize, multidegree: VertexSet, basis_len: usize) -> Self {
        CochainClass {
            degree,
            multidegree,
            coeffs: vec![BigInt::zero(); basis_len],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// Result of a cup product. A product of classes sharing a vertex is zero by
/// the monomial relations; the flag records that this was the reason.
#[derive(Clone, Debug)]
pub struct CupProduct {
    pub class: CochainClass,
    pub multidegree_overlap: bool,
}

/// Cohomology of one multidegree component, graded internally by the face
/// part size `s`; the total degree is `base_degree + s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentCohomology {
    pub iset: VertexSet,
    pub base_degree: usize,
    pub free: Vec<usize>,
    pub torsion: Vec<Vec<BigUint>>,
}

impl ComponentCohomology {
    pub fn rank_at(&self, total_degree: usize) -> usize {
        total_degree
            .checked_sub(self.base_degree)
            .and_then(|s| self.free.get(s))
            .copied()
            .unwrap_or(0)
    }

    pub fn torsion_at(&self, total_degree: usize) -> &[BigUint] {
        total_degree
            .checked_sub(self.base_degree)
            .and_then(|s| self.torsion.get(s))
            .map_or(&[], |v| v.as_slice())
    }

    pub fn has_torsion(&self) -> bool {
        self.torsion.iter().any(|t| !t.is_empty())
    }
}

/// Full multigraded cohomology of the cochain algebra: one component per
/// vertex subset. Totals per degree must agree with the subset-homology
/// route; that comparison is the standing cross-check of the whole pipeline.
#[derive(Clone, Debug)]
pub struct RingCohomology {
    pub m: usize,
    pub disc_k: usize,
    pub components: BTreeMap<VertexSet, ComponentCohomology>,
}

impl RingCohomology {
    pub fn component(&self, iset: VertexSet) -> Option<&ComponentCohomology> {
        self.components.get(&iset)
    }

    /// Free rank per total degree, summed over all multidegrees.
    pub fn totals(&self) -> Vec<usize> {
        let len = self
            .components
            .values()
            .map(|c| c.base_degree + c.free.len())
            .max()
            .unwrap_or(0);
        let mut totals = vec![0usize; len];
        for c in self.components.values() {
            for (s, rank) in c.free.iter().enumerate() {
                totals[c.base_degree + s] += rank;
            }
        }
        totals
    }
}

/// Sign-carrying evaluation of the top cohomology class against the chosen
/// orientation: the generator takes value +1 on the lexicographically first
/// monomial whose class survives.
#[derive(Clone, Debug)]
pub struct TopForm {
    pub degree: usize,
    functional: Vec<BigInt>,
}

/// The bigraded cochain algebra of a complex for one disc dimension. All
/// signs are derived from generator degrees, so every `disc_k >= 2` runs
/// through the same code path.
pub struct KoszulAlgebra<'a> {
    complex: &'a SimplicialComplex,
    disc_k: usize,
    top: OnceLock<Result<TopForm>>,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum GenKind {
    U,
    V,
}

impl<'a> KoszulAlgebra<'a> {
    pub fn new(complex: &'a SimplicialComplex, disc_k: usize) -> Self {
        assert!(disc_k >= 2, "disc dimension must be at least 2");
        KoszulAlgebra {
            complex,
            disc_k,
            top: OnceLock::new(),
        }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        self.complex
    }

    pub fn disc_k(&self) -> usize {
        self.disc_k
    }

    fn gen_degree(&self, kind: GenKind) -> usize {
        match kind {
            GenKind::U => self.disc_k - 1,
            GenKind::V => self.disc_k,
        }
    }

    /// Sorts a generator word into canonical order (u-part then v-part, each
    /// ascending), returning the sign accumulated from graded transpositions.
    /// Words never contain equal generators.
    fn sort_word(&self, word: &mut [(GenKind, usize)]) -> i8 {
        let mut sign = 1i8;
        for i in 1..word.len() {
            let mut j = i;
            while j > 0 && word[j] < word[j - 1] {
                let d = self.gen_degree(word[j].0) * self.gen_degree(word[j - 1].0);
                if d % 2 == 1 {
                    sign = -sign;
                }
                word.swap(j, j - 1);
                j -= 1;
            }
        }
        sign
    }

    /// Faces `tau` of size `s` inside `iset`, ascending-lex: the face parts
    /// of the multidegree-`iset` monomials with `|tau| = s`.
    fn tau_candidates(&self, iset: VertexSet, s: usize) -> Vec<VertexSet> {
        if s == 0 {
            return vec![VertexSet::EMPTY];
        }
        if s > iset.card() {
            return Vec::new();
        }
        iset.members()
            .into_iter()
            .combinations(s)
            .map(|c| c.iter().fold(VertexSet::EMPTY, |acc, &v| acc.insert(v)))
            .filter(|&t| self.complex.has_face(t))
            .collect()
    }

    /// Monomial basis of one (total degree, multidegree) component, ordered
    /// by ascending face part.
    pub fn basis(&self, degree: usize, iset: VertexSet) -> Vec<KoszulMonomial> {
        let base = (self.disc_k - 1) * iset.card();
        let Some(s) = degree.checked_sub(base) else {
            return Vec::new();
        };
        if s > iset.card() {
            return Vec::new();
        }
        self.tau_candidates(iset, s)
            .into_iter()
            .map(|tau| KoszulMonomial {
                sigma: iset.minus(tau),
                tau,
            })
            .collect()
    }

    /// Expands `d(u_sigma v_tau)` as signed monomials. The differential sends
    /// `u_i` to `v_i` and kills `v_i`; terms whose face part leaves the
    /// complex vanish.
    fn differential_of_monomial(&self, mon: KoszulMonomial) -> Vec<(KoszulMonomial, i8)> {
        let mut out = Vec::new();
        for (a, i) in mon.sigma.iter().enumerate() {
            let new_tau = mon.tau.insert(i);
            if !self.complex.has_face(new_tau) {
                continue;
            }
            // Derivation walks over the `a` preceding u-generators.
            let mut sign = if ((self.disc_k - 1) * a) % 2 == 1 { -1i8 } else { 1 };
            let mut word: Vec<(GenKind, usize)> = Vec::with_capacity(mon.sigma.card() + mon.tau.card());
            for v in mon.sigma.iter() {
                word.push(if v == i { (GenKind::V, v) } else { (GenKind::U, v) });
            }
            for v in mon.tau.iter() {
                word.push((GenKind::V, v));
            }
            sign *= self.sort_word(&mut word);
            out.push((
                KoszulMonomial {
                    sigma: mon.sigma.remove(i),
                    tau: new_tau,
                },
                sign,
            ));
        }
        out
    }

    /// Differential of a cochain, staying in its multidegree.
    pub fn differential(&self, class: &CochainClass) -> CochainClass {
        let basis = self.basis(class.degree, class.multidegree);
        assert_eq!(basis.len(), class.coeffs.len(), "coefficients off basis");
        let target = self.basis(class.degree + 1, class.multidegree);
        let index: HashMap<KoszulMonomial, usize> = target
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i))
            .collect();
        let mut out = CochainClass::zero(class.degree + 1, class.multidegree, target.len());
        for (mon, coeff) in basis.iter().zip(&class.coeffs) {
            if coeff.is_zero() {
                continue;
            }
            for (tm, sign) in self.differential_of_monomial(*mon) {
                let pos = index[&tm];
                if sign > 0 {
                    out.coeffs[pos] += coeff;
                } else {
                    out.coeffs[pos] -= coeff;
                }
            }
        }
        out
    }

    /// Matrix of the differential of the multidegree-`iset` component from
    /// face-part size `s` to `s + 1`.
    fn component_matrix(&self, iset: VertexSet, s: usize) -> IntMatrix {
        let cols_basis = self.tau_candidates(iset, s);
        let rows_basis = self.tau_candidates(iset, s + 1);
        let index: HashMap<VertexSet, usize> = rows_basis
            .iter()
            .enumerate()
            .map(|(i, &t)| (t, i))
            .collect();
        let mut entries = Vec::new();
        for (c, &tau) in cols_basis.iter().enumerate() {
            let mon = KoszulMonomial {
                sigma: iset.minus(tau),
                tau,
            };
            for (tm, sign) in self.differential_of_monomial(mon) {
                entries.push((index[&tm.tau], c, BigInt::from(sign)));
            }
        }
        IntMatrix::from_triplets(rows_basis.len(), cols_basis.len(), entries)
    }

    /// Cohomology of one multidegree component by Smith normal form of its
    /// differentials.
    pub fn component_cohomology(&self, iset: VertexSet) -> ComponentCohomology {
        let mut dims = vec![1usize]; // s = 0: the single monomial u_iset
        let mut s = 1;
        loop {
            let n = self.tau_candidates(iset, s).len();
            if n == 0 {
                break;
            }
            dims.push(n);
            s += 1;
        }
        // ranks[s] = rank of d: s -> s+1
        let mut ranks = vec![0usize; dims.len()];
        let mut divisors: Vec<Vec<BigUint>> = vec![Vec::new(); dims.len()];
        for s in 0..dims.len() {
            if s + 1 >= dims.len() {
                break;
            }
            let form = smith_normal_form(&self.component_matrix(iset, s), false);
            ranks[s] = form.rank;
            divisors[s] = form.torsion_divisors();
        }
        let mut free = Vec::with_capacity(dims.len());
        let mut torsion = Vec::with_capacity(dims.len());
        for s in 0..dims.len() {
            let below = if s == 0 { 0 } else { ranks[s - 1] };
            free.push(dims[s] - ranks[s] - below);
            torsion.push(if s == 0 { Vec::new() } else { divisors[s - 1].clone() });
        }
        ComponentCohomology {
            iset,
            base_degree: (self.disc_k - 1) * iset.card(),
            free,
            torsion,
        }
    }

    /// Integral cocycle representatives spanning the free part of the
    /// component cohomology in one total degree.
    pub fn cocycle_basis(&self, iset: VertexSet, degree: usize) -> Result<Vec<CochainClass>> {
        let base = (self.disc_k - 1) * iset.card();
        let Some(s) = degree.checked_sub(base) else {
            return Ok(Vec::new());
        };
        if s > iset.card() {
            return Ok(Vec::new());
        }
        let d_out = self.component_matrix(iset, s);
        let d_in = if s == 0 {
            IntMatrix::zero(d_out.cols(), 0)
        } else {
            self.component_matrix(iset, s - 1)
        };
        let fq = free_quotient(&d_out, &d_in);
        if !fq.torsion.is_empty() {
            return Err(Error::TorsionPresent {
                degree,
                divisors: fq.torsion,
            });
        }
        Ok(fq
            .representatives
            .into_iter()
            .map(|coeffs| CochainClass {
                degree,
                multidegree: iset,
                coeffs,
            })
            .collect())
    }

    /// Cup product at cochain level. Classes sharing a vertex multiply to
    /// zero; the flag reports it. Signs come from merging the generator
    /// words, weighted by generator degrees.
    pub fn cup_product(&self, a: &CochainClass, b: &CochainClass) -> CupProduct {
        let degree = a.degree + b.degree;
        let multidegree = a.multidegree.union(b.multidegree);
        let target = self.basis(degree, multidegree);
        if a.multidegree.intersects(b.multidegree) {
            return CupProduct {
                class: CochainClass::zero(degree, multidegree, target.len()),
                multidegree_overlap: true,
            };
        }
        let basis_a = self.basis(a.degree, a.multidegree);
        let basis_b = self.basis(b.degree, b.multidegree);
        assert_eq!(basis_a.len(), a.coeffs.len(), "coefficients off basis");
        assert_eq!(basis_b.len(), b.coeffs.len(), "coefficients off basis");
        let index: HashMap<KoszulMonomial, usize> = target
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i))
            .collect();
        let mut out = CochainClass::zero(degree, multidegree, target.len());
        for (ma, ca) in basis_a.iter().zip(&a.coeffs) {
            if ca.is_zero() {
                continue;
            }
            for (mb, cb) in basis_b.iter().zip(&b.coeffs) {
                if cb.is_zero() {
                    continue;
                }
                let tau = ma.tau.union(mb.tau);
                if !self.complex.has_face(tau) {
                    continue;
                }
                let mut word: Vec<(GenKind, usize)> = Vec::new();
                for v in ma.sigma.iter() {
                    word.push((GenKind::U, v));
                }
                for v in ma.tau.iter() {
                    word.push((GenKind::V, v));
                }
                for v in mb.sigma.iter() {
                    word.push((GenKind::U, v));
                }
                for v in mb.tau.iter() {
                    word.push((GenKind::V, v));
                }
                let sign = self.sort_word(&mut word);
                let mon = KoszulMonomial {
                    sigma: ma.sigma.union(mb.sigma),
                    tau,
                };
                let term = ca * cb;
                let pos = index[&mon];
                if sign > 0 {
                    out.coeffs[pos] += term;
                } else {
                    out.coeffs[pos] -= term;
                }
            }
        }
        CupProduct {
            class: out,
            multidegree_overlap: false,
        }
    }

    /// Top total degree of the full-support component.
    pub fn top_degree(&self) -> usize {
        (self.disc_k - 1) * self.complex.m() + self.complex.max_face_card()
    }

    /// The orientation functional on the top component. Errors when the top
    /// cohomology is not infinite cyclic.
    pub fn top_form(&self) -> Result<&TopForm> {
        self.top
            .get_or_init(|| self.build_top_form())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn build_top_form(&self) -> Result<TopForm> {
        let full = VertexSet::full(self.complex.m());
        let s_top = self.complex.max_face_card();
        let dim_top = self.tau_candidates(full, s_top).len();
        debug_assert!(self.tau_candidates(full, s_top + 1).is_empty());
        let d_in = if s_top == 0 {
            IntMatrix::zero(dim_top, 0)
        } else {
            self.component_matrix(full, s_top - 1)
        };
        let form = smith_normal_form(&d_in, true);
        let torsion = form.torsion_divisors();
        let rank = dim_top - form.rank;
        if rank != 1 || !torsion.is_empty() {
            return Err(Error::TopRankNotOne { rank, torsion });
        }
        let tr = form.transforms.expect("requested transforms");
        let mut functional: Vec<BigInt> = tr.u[form.rank].clone();
        // Orientation: +1 on the first monomial whose class is nonzero.
        let first = functional
            .iter()
            .find(|x| !x.is_zero())
            .expect("free quotient functional cannot vanish");
        if first < &BigInt::zero() {
            for x in &mut functional {
                let v = std::mem::take(x);
                *x = -v;
            }
        }
        Ok(TopForm {
            degree: self.top_degree(),
            functional,
        })
    }

    /// Coefficient of a top-component cocycle against the orientation class.
    pub fn top_coefficient(&self, class: &CochainClass) -> Result<BigInt> {
        let full = VertexSet::full(self.complex.m());
        let expected = self.top_degree();
        if class.multidegree != full || class.degree != expected {
            return Err(Error::NotTopDegree {
                degree: class.degree,
                multidegree: class.multidegree,
                expected_degree: expected,
            });
        }
        let form = self.top_form()?;
        assert_eq!(class.coeffs.len(), form.functional.len(), "coefficients off basis");
        Ok(form
            .functional
            .iter()
            .zip(&class.coeffs)
            .map(|(f, c)| f * c)
            .sum())
    }
}

/// Cohomology of the whole algebra, one component per subset of the vertex
/// universe. Exponential in `m` by nature; intended for small complexes.
pub fn ring_cohomology(k: &SimplicialComplex, disc_k: usize) -> RingCohomology {
    let algebra = KoszulAlgebra::new(k, disc_k);
    let m = k.m();
    let subsets: Vec<VertexSet> = std::iter::once(VertexSet::EMPTY)
        .chain(
            (1..=m)
                .flat_map(|card| (1..=m).combinations(card))
                .map(|c| c.iter().fold(VertexSet::EMPTY, |acc, &v| acc.insert(v))),
        )
        .collect();
    let components = subsets
        .into_par_iter()
        .map(|iset| (iset, algebra.component_cohomology(iset)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    RingCohomology {
        m,
        disc_k,
        components,
    }
}
