//! Matroids given by an explicit basis family.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::subset::{k_subsets, Subset};

/// Largest ground set for which full rank tables are materialized.
const RANK_TABLE_LIMIT: usize = 24;

/// A matroid on `{0, .., n-1}` with its bases stored as sorted bit masks.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: Vec<Subset>,
}

impl Matroid {
    /// Validating constructor: checks cardinalities and the exchange axiom.
    pub fn from_bases(n: usize, r: usize, bases: impl IntoIterator<Item = Subset>) -> Result<Self> {
        let m = Self::build(n, r, bases)?;
        m.check_exchange()?;
        Ok(m)
    }

    /// Trusted constructor for families that are matroids by construction.
    pub(crate) fn from_bases_unchecked(n: usize, r: usize, bases: impl IntoIterator<Item = Subset>) -> Self {
        Self::build(n, r, bases).expect("structurally valid basis family")
    }

    fn build(n: usize, r: usize, bases: impl IntoIterator<Item = Subset>) -> Result<Self> {
        if n > 64 {
            return Err(Error::GroundSetTooLarge(n));
        }
        if r > n {
            return Err(Error::InvalidRank { r: r as i64, n });
        }
        let set: BTreeSet<Subset> = bases.into_iter().collect();
        if set.is_empty() {
            return Err(Error::EmptyBases);
        }
        let full = Subset::full(n);
        for b in &set {
            if !b.is_subset(full) {
                return Err(Error::Malformed(format!("basis {b} leaves the ground set of size {n}")));
            }
            if b.len() != r {
                return Err(Error::NotAMatroid(format!("basis {b} does not have {r} elements")));
            }
        }
        Ok(Matroid { n, rank: r, bases: set.into_iter().collect() })
    }

    fn check_exchange(&self) -> Result<()> {
        for &b1 in &self.bases {
            for &b2 in &self.bases {
                for i in b1.difference(b2).iter() {
                    let ok = b2.difference(b1).iter().any(|j| self.is_basis(b1.remove(i).insert(j)));
                    if !ok {
                        return Err(Error::NotAMatroid(format!("exchange fails for {b1}, {b2} at element {}", i + 1)));
                    }
                }
            }
        }
        Ok(())
    }

    /// `U_{r,n}`: every `r`-subset is a basis.
    pub fn uniform(r: usize, n: usize) -> Result<Self> {
        if r > n {
            return Err(Error::InvalidRank { r: r as i64, n });
        }
        if n > 64 {
            return Err(Error::GroundSetTooLarge(n));
        }
        Ok(Self::from_bases_unchecked(n, r, k_subsets(n, r)))
    }

    /// Column matroid of a rational matrix given as rows.
    pub fn from_matrix(rows: &[Vec<BigRational>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed("matrix rows have different lengths".into()));
        }
        if n > 64 {
            return Err(Error::GroundSetTooLarge(n));
        }
        let columns: Vec<Vec<BigRational>> = (0..n).map(|c| rows.iter().map(|row| row[c].clone()).collect()).collect();
        let all: Vec<usize> = (0..n).collect();
        let r = rational_rank(&columns, &all);
        let bases = k_subsets(n, r).into_iter().filter(|s| {
            let idx: Vec<usize> = s.iter().collect();
            rational_rank(&columns, &idx) == r
        });
        Ok(Self::from_bases_unchecked(n, r, bases))
    }

    /// Cycle matroid of a multigraph; vertices and edges are 0-based.
    pub fn graphic(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let n = edges.len();
        if n == 0 {
            return Err(Error::Malformed("graph has no edges".into()));
        }
        if n > 64 {
            return Err(Error::GroundSetTooLarge(n));
        }
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= vertices || b >= vertices) {
            return Err(Error::Malformed(format!("edge ({}, {}) uses a missing vertex", a + 1, b + 1)));
        }
        let forest_rank = |s: Subset| -> usize {
            let mut parent: Vec<usize> = (0..vertices).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                let mut r = x;
                while p[r] != r {
                    r = p[r];
                }
                let mut y = x;
                while p[y] != r {
                    let next = p[y];
                    p[y] = r;
                    y = next;
                }
                r
            }
            let mut joined = 0;
            for e in s.iter() {
                let (a, b) = edges[e];
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                    joined += 1;
                }
            }
            joined
        };
        let r = forest_rank(Subset::full(n));
        let bases = k_subsets(n, r).into_iter().filter(|&s| forest_rank(s) == r);
        Ok(Self::from_bases_unchecked(n, r, bases))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[Subset] {
        &self.bases
    }

    pub fn is_basis(&self, s: Subset) -> bool {
        self.bases.binary_search(&s).is_ok()
    }

    /// Rank of a subset: the largest intersection with a basis.
    pub fn rank_of(&self, s: Subset) -> usize {
        self.bases.iter().map(|b| b.intersection(s).len()).max().unwrap_or(0)
    }

    pub fn is_independent(&self, s: Subset) -> bool {
        self.bases.iter().any(|b| s.is_subset(*b))
    }

    pub fn is_spanning(&self, s: Subset) -> bool {
        self.rank_of(s) == self.rank
    }

    /// Ranks of all `2^n` subsets, indexed by mask.
    ///
    /// Panics if `n` is larger than the materialization limit.
    pub fn rank_table(&self) -> Vec<u8> {
        assert!(self.n <= RANK_TABLE_LIMIT, "rank table requested for n = {}", self.n);
        let size = 1usize << self.n;
        let mut indep = vec![false; size];
        for b in &self.bases {
            indep[b.0 as usize] = true;
        }
        for s in (0..size).rev() {
            if !indep[s] {
                let mut rest = !s & (size - 1);
                while rest != 0 {
                    let bit = rest & rest.wrapping_neg();
                    if indep[s | bit] {
                        indep[s] = true;
                        break;
                    }
                    rest &= rest - 1;
                }
            }
        }
        let mut table = vec![0u8; size];
        for s in 1..size {
            table[s] = if indep[s] {
                s.count_ones() as u8
            } else {
                let low = s & s.wrapping_neg();
                let mut best = table[s ^ low];
                let mut rest = s ^ low;
                while rest != 0 {
                    let bit = rest & rest.wrapping_neg();
                    best = best.max(table[s ^ bit]);
                    rest &= rest - 1;
                }
                best
            };
        }
        table
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.bases.iter().all(|b| !b.contains(e))
    }

    pub fn is_coloop(&self, e: usize) -> bool {
        self.bases.iter().all(|b| b.contains(e))
    }

    pub fn loops(&self) -> Subset {
        Subset::from_elems((0..self.n).filter(|&e| self.is_loop(e)))
    }

    pub fn coloops(&self) -> Subset {
        Subset::from_elems((0..self.n).filter(|&e| self.is_coloop(e)))
    }

    /// Bases are the complements of the bases of `self`.
    pub fn dual(&self) -> Matroid {
        Self::from_bases_unchecked(self.n, self.n - self.rank, self.bases.iter().map(|b| b.complement(self.n)))
    }

    /// `M \ deletions / contractions`, relabelled to `0..n'` in increasing order.
    ///
    /// The second component maps each new label to its old label.
    pub fn minor(&self, deletions: Subset, contractions: Subset) -> Result<(Matroid, Vec<usize>)> {
        if !deletions.intersection(contractions).is_empty() {
            return Err(Error::Malformed("deleted and contracted sets overlap".into()));
        }
        let removed = deletions.union(contractions);
        let full = Subset::full(self.n);
        if !removed.is_subset(full) {
            return Err(Error::Malformed("minor removes elements outside the ground set".into()));
        }
        let keep = full.difference(removed);
        if keep.is_empty() {
            return Err(Error::GroundSetExhausted);
        }
        let relabel: Vec<usize> = keep.iter().collect();
        let rc = self.rank_of(contractions);
        let new_rank = self.rank_of(full.difference(deletions)) - rc;
        let mut fresh = BTreeSet::new();
        for b in &self.bases {
            let x = b.intersection(keep);
            if x.len() == new_rank && self.rank_of(x.union(contractions)) == new_rank + rc {
                fresh.insert(compress(x, &relabel));
            }
        }
        Ok((Self::from_bases_unchecked(relabel.len(), new_rank, fresh), relabel))
    }

    /// Single-element deletion.
    pub fn delete(&self, e: usize) -> Result<(Matroid, Vec<usize>)> {
        self.minor(Subset::singleton(e), Subset::EMPTY)
    }

    /// Single-element contraction.
    pub fn contract(&self, e: usize) -> Result<(Matroid, Vec<usize>)> {
        self.minor(Subset::EMPTY, Subset::singleton(e))
    }

    /// Direct sum with the second ground set placed after the first.
    pub fn direct_sum(&self, other: &Matroid) -> Result<Matroid> {
        let n = self.n + other.n;
        if n > 64 {
            return Err(Error::GroundSetTooLarge(n));
        }
        let mut bases = Vec::with_capacity(self.bases.len() * other.bases.len());
        for b1 in &self.bases {
            for b2 in &other.bases {
                bases.push(Subset(b1.0 | (b2.0 << self.n)));
            }
        }
        Ok(Self::from_bases_unchecked(n, self.rank + other.rank, bases))
    }
}

/// Renumber the elements of `s` (a subset of the kept labels) to `0..relabel.len()`.
pub(crate) fn compress(s: Subset, relabel: &[usize]) -> Subset {
    Subset::from_elems(relabel.iter().enumerate().filter(|(_, &old)| s.contains(old)).map(|(i, _)| i))
}

/// Is `m1` a quotient of `m2`? Decided by the single-element local form of the
/// rank inequality.
pub fn is_quotient(m1: &Matroid, m2: &Matroid) -> Result<bool> {
    if m1.n != m2.n {
        return Err(Error::GroundSetMismatch(m1.n, m2.n));
    }
    let n = m1.n;
    if m1.rank > m2.rank {
        return Ok(false);
    }
    if n <= RANK_TABLE_LIMIT {
        let (t1, t2) = (m1.rank_table(), m2.rank_table());
        for a in 0..1usize << n {
            for e in 0..n {
                if a >> e & 1 == 0 {
                    let b = a | 1 << e;
                    if t2[b] - t2[a] < t1[b] - t1[a] {
                        return Ok(false);
                    }
                }
            }
        }
        return Ok(true);
    }
    Err(Error::Malformed(format!("quotient test needs n <= {RANK_TABLE_LIMIT}")))
}

fn rational_rank(columns: &[Vec<BigRational>], idx: &[usize]) -> usize {
    let mut m: Vec<Vec<BigRational>> = idx.iter().map(|&c| columns[c].clone()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        let (top, bottom) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in bottom {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot;
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x -= &f * y;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Parse `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Malformed(format!("not a rational number: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = p.trim().parse().map_err(|_| bad())?;
            let q: num_bigint::BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::new(s.parse().map_err(|_| bad())?, One::one())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[usize]) -> Subset {
        Subset::from_elems(e.iter().map(|i| i - 1))
    }

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect()
    }

    #[test]
    fn from_bases_examples() {
        let u12 = Matroid::from_bases(2, 1, [set(&[1]), set(&[2])]).unwrap();
        assert_eq!(u12, Matroid::uniform(1, 2).unwrap());
        let path = Matroid::from_bases(3, 2, [set(&[1, 2]), set(&[1, 3])]).unwrap();
        assert_eq!(path.bases().len(), 2);
        let with_loop = Matroid::from_bases(3, 1, [set(&[1]), set(&[3])]).unwrap();
        assert!(with_loop.is_loop(1));
    }

    #[test]
    fn from_bases_rejects() {
        assert_eq!(Matroid::from_bases(3, 1, []), Err(Error::EmptyBases));
        assert!(matches!(Matroid::from_bases(4, 2, [set(&[1, 2]), set(&[3, 4])]), Err(Error::NotAMatroid(_))));
        assert!(matches!(Matroid::from_bases(3, 1, [set(&[1]), set(&[2, 3])]), Err(Error::NotAMatroid(_))));
    }

    #[test]
    fn uniform_examples() {
        assert_eq!(Matroid::uniform(1, 3).unwrap().bases(), &[set(&[1]), set(&[2]), set(&[3])]);
        assert_eq!(Matroid::uniform(0, 4).unwrap().bases(), &[Subset::EMPTY]);
        assert_eq!(Matroid::uniform(2, 3).unwrap().bases().len(), 3);
        assert!(matches!(Matroid::uniform(4, 3), Err(Error::InvalidRank { .. })));
    }

    #[test]
    fn matrix_examples() {
        let m = Matroid::from_matrix(&ints(&[&[1, 0, 1], &[0, 1, 1]])).unwrap();
        assert_eq!(m, Matroid::uniform(2, 3).unwrap());
        let m = Matroid::from_matrix(&ints(&[&[1, 1, 1]])).unwrap();
        assert_eq!(m, Matroid::uniform(1, 3).unwrap());
        let m = Matroid::from_matrix(&ints(&[&[1, 0, 0], &[0, 1, 0]])).unwrap();
        assert_eq!(m.bases(), &[set(&[1, 2])]);
        assert!(m.is_loop(2));
        assert_eq!(Matroid::from_matrix(&[]), Err(Error::EmptyMatrix));
    }

    #[test]
    fn matrix_with_fractions() {
        let rows = vec![
            vec![parse_rational("1/2").unwrap(), parse_rational("1").unwrap()],
            vec![parse_rational("1").unwrap(), parse_rational("2").unwrap()],
        ];
        assert_eq!(Matroid::from_matrix(&rows).unwrap(), Matroid::uniform(1, 2).unwrap());
    }

    #[test]
    fn graphic_examples() {
        let k3 = Matroid::graphic(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3, Matroid::uniform(2, 3).unwrap());
        let digon = Matroid::graphic(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(digon, Matroid::uniform(1, 2).unwrap());
        let selfloop = Matroid::graphic(1, &[(0, 0)]).unwrap();
        assert_eq!(selfloop, Matroid::uniform(0, 1).unwrap());
    }

    #[test]
    fn rank_examples() {
        let u23 = Matroid::uniform(2, 3).unwrap();
        assert_eq!(u23.rank_of(set(&[1])), 1);
        assert_eq!(u23.rank_of(set(&[1, 2, 3])), 2);
        assert_eq!(Matroid::uniform(0, 4).unwrap().rank_of(set(&[1, 2])), 0);
    }

    #[test]
    fn rank_table_agrees_with_rank() {
        let m =
            Matroid::from_bases(4, 2, [set(&[1, 2]), set(&[1, 3]), set(&[2, 3]), set(&[1, 4]), set(&[2, 4])]).unwrap();
        let t = m.rank_table();
        for s in 0..16u64 {
            assert_eq!(t[s as usize] as usize, m.rank_of(Subset(s)));
        }
    }

    #[test]
    fn dual_examples() {
        assert_eq!(Matroid::uniform(1, 3).unwrap().dual(), Matroid::uniform(2, 3).unwrap());
        let path = Matroid::from_bases(3, 2, [set(&[1, 2]), set(&[1, 3])]).unwrap();
        assert_eq!(path.dual().dual(), path);
        assert_eq!(Matroid::uniform(0, 2).unwrap().dual(), Matroid::uniform(2, 2).unwrap());
    }

    #[test]
    fn minor_examples() {
        let u23 = Matroid::uniform(2, 3).unwrap();
        let (d, map) = u23.minor(set(&[3]), Subset::EMPTY).unwrap();
        assert_eq!(d, Matroid::uniform(2, 2).unwrap());
        assert_eq!(map, vec![0, 1]);
        let (c, map) = u23.minor(Subset::EMPTY, set(&[1])).unwrap();
        assert_eq!(c, Matroid::uniform(1, 2).unwrap());
        assert_eq!(map, vec![1, 2]);
        assert_eq!(u23.minor(Subset::EMPTY, Subset::EMPTY).unwrap().0, u23);
        assert_eq!(u23.minor(set(&[1, 2, 3]), Subset::EMPTY), Err(Error::GroundSetExhausted));
    }

    #[test]
    fn contracting_a_loop_is_deleting_it() {
        let m = Matroid::from_bases(3, 1, [set(&[1]), set(&[3])]).unwrap();
        assert_eq!(m.contract(1).unwrap(), m.delete(1).unwrap());
    }

    #[test]
    fn direct_sum_examples() {
        let s = Matroid::uniform(1, 1).unwrap().direct_sum(&Matroid::uniform(0, 1).unwrap()).unwrap();
        assert_eq!(s.bases(), &[set(&[1])]);
        let s = Matroid::uniform(1, 2).unwrap().direct_sum(&Matroid::uniform(1, 2).unwrap()).unwrap();
        assert_eq!((s.n(), s.rank(), s.bases().len()), (4, 2, 4));
        let u23 = Matroid::uniform(2, 3).unwrap();
        let empty = Matroid::from_bases_unchecked(0, 0, [Subset::EMPTY]);
        assert_eq!(u23.direct_sum(&empty).unwrap(), u23);
    }

    #[test]
    fn quotient_examples() {
        let u13 = Matroid::uniform(1, 3).unwrap();
        let u23 = Matroid::uniform(2, 3).unwrap();
        assert!(is_quotient(&u13, &u23).unwrap());
        assert!(!is_quotient(&u23, &u13).unwrap());
        assert!(is_quotient(&u23, &u23).unwrap());
        assert_eq!(is_quotient(&u13, &Matroid::uniform(1, 2).unwrap()), Err(Error::GroundSetMismatch(3, 2)));
        // same ranks, different matroids: not a quotient
        let a = Matroid::from_bases(3, 1, [set(&[1]), set(&[2])]).unwrap();
        let b = Matroid::from_bases(3, 1, [set(&[1]), set(&[3])]).unwrap();
        assert!(!is_quotient(&a, &b).unwrap());
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(parse_rational("7").unwrap(), BigRational::from_integer(7.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
