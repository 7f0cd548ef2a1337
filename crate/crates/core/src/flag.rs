//! Flag matroids: chains of matroid quotients, their bases and base polytopes.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::matroid::{is_quotient, Matroid};
use crate::subset::Subset;

/// A chain `(M_1, .., M_k)` on a common ground set with each `M_i` a quotient
/// of `M_{i+1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FlagMatroid {
    constituents: Vec<Matroid>,
}

/// A nested chain `B_1 ⊆ .. ⊆ B_k` of constituent bases.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FlagBasis {
    pub chain: Vec<Subset>,
}

impl FlagBasis {
    /// The vertex `e_{B_1} + .. + e_{B_k}` of the base polytope.
    pub fn vertex(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0i64; n];
        for b in &self.chain {
            for i in b.iter() {
                v[i] += 1;
            }
        }
        v
    }
}

impl FlagMatroid {
    /// Validates the quotient chain.
    pub fn new(constituents: Vec<Matroid>) -> Result<Self> {
        let first = constituents.first().ok_or(Error::EmptyBases)?;
        let n = first.n();
        if let Some(m) = constituents.iter().find(|m| m.n() != n) {
            return Err(Error::GroundSetMismatch(n, m.n()));
        }
        for (index, pair) in constituents.windows(2).enumerate() {
            if !is_quotient(&pair[0], &pair[1])? {
                return Err(Error::NotAQuotientChain { index });
            }
        }
        Ok(FlagMatroid { constituents })
    }

    pub fn single(m: Matroid) -> Self {
        FlagMatroid { constituents: vec![m] }
    }

    pub fn constituents(&self) -> &[Matroid] {
        &self.constituents
    }

    pub fn n(&self) -> usize {
        self.constituents[0].n()
    }

    /// Number of constituents.
    pub fn len(&self) -> usize {
        self.constituents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constituents.is_empty()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.constituents.iter().map(Matroid::rank).collect()
    }

    pub fn first(&self) -> &Matroid {
        &self.constituents[0]
    }

    pub fn last(&self) -> &Matroid {
        self.constituents.last().expect("flag matroids are nonempty")
    }

    /// `(M_k^*, .., M_1^*)`.
    pub fn dual(&self) -> FlagMatroid {
        FlagMatroid { constituents: self.constituents.iter().rev().map(Matroid::dual).collect() }
    }

    /// All flag bases, ordered lexicographically by their chains of masks.
    pub fn flag_bases(&self) -> Vec<FlagBasis> {
        let mut out = Vec::new();
        let mut chain = Vec::with_capacity(self.len());
        self.extend_bases(&mut chain, &mut out);
        out
    }

    fn extend_bases(&self, chain: &mut Vec<Subset>, out: &mut Vec<FlagBasis>) {
        let level = chain.len();
        if level == self.len() {
            out.push(FlagBasis { chain: chain.clone() });
            return;
        }
        for &b in self.constituents[level].bases() {
            if chain.last().is_none_or(|prev| prev.is_subset(b)) {
                chain.push(b);
                self.extend_bases(chain, out);
                chain.pop();
            }
        }
    }

    pub fn is_flag_basis(&self, b: &FlagBasis) -> bool {
        b.chain.len() == self.len()
            && b.chain.windows(2).all(|w| w[0].is_subset(w[1]))
            && b.chain.iter().zip(&self.constituents).all(|(s, m)| m.is_basis(*s))
    }

    /// A flag basis `B` with `|B_i ∩ S_j| = rk_i(S_j)` for a nested chain `S`.
    ///
    /// Runs the matroid greedy algorithm in every constituent under the common
    /// element order `S_1, S_2 \ S_1, .., [n] \ S_m`.
    pub fn face_basis(&self, chain: &[Subset]) -> Result<FlagBasis> {
        let n = self.n();
        if chain.windows(2).any(|w| !w[0].is_subset(w[1])) {
            return Err(Error::Malformed("face chain is not nested".into()));
        }
        let mut order = Vec::with_capacity(n);
        let mut seen = Subset::EMPTY;
        for s in chain.iter().copied().chain(std::iter::once(Subset::full(n))) {
            for i in s.difference(seen).iter() {
                order.push(i);
            }
            seen = seen.union(s);
        }
        let greedy: Vec<Subset> = self
            .constituents
            .iter()
            .map(|m| {
                order.iter().fold(Subset::EMPTY, |b, &i| {
                    let next = b.insert(i);
                    if m.is_independent(next) {
                        next
                    } else {
                        b
                    }
                })
            })
            .collect();
        let fb = FlagBasis { chain: greedy };
        if !self.is_flag_basis(&fb) {
            return Err(Error::Internal("greedy face basis is not a nested flag basis".into()));
        }
        for (b, m) in fb.chain.iter().zip(&self.constituents) {
            for s in chain {
                if b.intersection(*s).len() != m.rank_of(*s) {
                    return Err(Error::Internal("greedy face basis misses a face equation".into()));
                }
            }
        }
        Ok(fb)
    }

    /// Is `w` a lattice point of the base polytope `Q`?
    ///
    /// Decided by the summed submodular inequalities, independently of any cone
    /// machinery.
    pub fn polytope_membership(&self, w: &[i64]) -> bool {
        let n = self.n();
        let k = self.len() as i64;
        if w.len() != n || w.iter().any(|&x| x < 0 || x > k) {
            return false;
        }
        let total: i64 = self.ranks().iter().map(|&r| r as i64).sum();
        if w.iter().sum::<i64>() != total {
            return false;
        }
        let tables: Vec<Vec<u8>> = self.constituents.iter().map(Matroid::rank_table).collect();
        (0..1usize << n).all(|s| {
            let lhs: i64 = (0..n).filter(|i| s >> i & 1 == 1).map(|i| w[i]).sum();
            let rhs: i64 = tables.iter().map(|t| t[s] as i64).sum();
            lhs <= rhs
        })
    }
}

/// Subsets spanning `m1` and independent in `m2`.
pub fn pseudo_bases(m1: &Matroid, m2: &Matroid) -> Result<Vec<Subset>> {
    if !is_quotient(m1, m2)? {
        return Err(Error::NotAQuotient);
    }
    let full = Subset::full(m1.n());
    let t1 = m1.rank_table();
    let mut out: Vec<Subset> =
        full.subsets().filter(|&s| t1[s.0 as usize] as usize == m1.rank() && m2.is_independent(s)).collect();
    out.sort();
    Ok(out)
}

/// The Higgs factorization `M^(0) = m2, .., M^(d) = m1`, `d = r2 - r1`, where
/// `M^(i)` has as bases the pseudo-bases of size `r2 - i`.
pub fn higgs_factorization(m1: &Matroid, m2: &Matroid) -> Result<Vec<Matroid>> {
    let pb = pseudo_bases(m1, m2)?;
    let (r1, r2) = (m1.rank(), m2.rank());
    let layers = (0..=r2 - r1)
        .map(|i| {
            let size = r2 - i;
            let layer: BTreeSet<Subset> = pb.iter().copied().filter(|s| s.len() == size).collect();
            Matroid::from_bases(m1.n(), size, layer)
        })
        .collect::<Result<Vec<_>>>()?;
    for pair in layers.windows(2) {
        if !is_quotient(&pair[1], &pair[0])? {
            return Err(Error::Internal("Higgs layers do not form a quotient chain".into()));
        }
    }
    Ok(layers)
}
