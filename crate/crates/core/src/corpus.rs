//! Deterministic families of small matroids, quotients and flag matroids
//! used by the verification suite.
//!
//! Matroids are deduplicated by basis list only; isomorphic copies on
//! different labellings are kept.

use std::collections::HashSet;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::flag::{higgs_factorization, FlagMatroid};
use crate::matroid::{is_quotient, Matroid};
use crate::subset::Subset;

pub const DEFAULT_SEED: u64 = 20210611;

/// Keeps the first occurrence of every item.
struct Dedup<T> {
    seen: HashSet<T>,
    items: Vec<T>,
}

impl<T: Clone + Eq + std::hash::Hash> Dedup<T> {
    fn new() -> Self {
        Dedup { seen: HashSet::new(), items: Vec::new() }
    }

    fn push(&mut self, x: T) {
        if self.seen.insert(x.clone()) {
            self.items.push(x);
        }
    }
}

const K4_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Small multigraphs on three vertices with loops and parallel edges.
const MULTIGRAPHS: &[&[(usize, usize)]] = &[
    &[(0, 1), (0, 1)],
    &[(0, 1), (0, 1), (1, 2)],
    &[(0, 1), (0, 1), (0, 1)],
    &[(0, 0), (0, 1)],
    &[(0, 0), (0, 1), (1, 2), (0, 2)],
    &[(0, 1), (0, 1), (1, 2), (1, 2)],
    &[(0, 1), (1, 2), (0, 2), (0, 2)],
    &[(0, 1), (0, 1), (1, 2), (0, 2), (2, 2)],
    &[(0, 1), (1, 2), (0, 2), (0, 1), (1, 2), (0, 2)],
    &[(0, 1), (0, 1), (0, 1), (1, 2), (1, 2)],
];

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<BigRational>> {
    (0..rows).map(|_| (0..cols).map(|_| BigRational::from_integer(rng.gen_range(-1i64..=1).into())).collect()).collect()
}

/// Matroids on at most `max_n` elements (`max_n <= 7`).
///
/// Uniform matroids, cycle matroids of every edge subset of `K_4`, a few
/// multigraphs, column matroids of seeded random `{-1, 0, 1}` matrices,
/// direct sums of small members, and all duals.
pub fn matroids(max_n: usize, seed: u64) -> Vec<Matroid> {
    let mut out = Dedup::new();
    for n in 1..=max_n {
        for r in 0..=n {
            out.push(Matroid::uniform(r, n).expect("valid uniform"));
        }
    }
    for mask in 1u32..64 {
        let edges: Vec<(usize, usize)> = (0..6).filter(|i| mask >> i & 1 == 1).map(|i| K4_EDGES[i]).collect();
        if edges.len() <= max_n {
            out.push(Matroid::graphic(4, &edges).expect("valid graph"));
        }
    }
    for edges in MULTIGRAPHS {
        if edges.len() <= max_n {
            out.push(Matroid::graphic(3, edges).expect("valid graph"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 2..=max_n {
        for rows in 1..n {
            for _ in 0..3 {
                out.push(Matroid::from_matrix(&random_matrix(&mut rng, rows, n)).expect("nonempty matrix"));
            }
        }
    }
    let small: Vec<Matroid> = out.items.iter().filter(|m| m.n() <= 3).cloned().collect();
    for a in &small {
        for b in &small {
            if a.n() + b.n() <= max_n {
                out.push(a.direct_sum(b).expect("small direct sum"));
            }
        }
    }
    let current = out.items.clone();
    for m in current {
        out.push(m.dual());
    }
    out.items
}

/// The default corpus of matroids on at most six elements.
pub fn default_matroids() -> Vec<Matroid> {
    matroids(6, DEFAULT_SEED)
}

/// Two-step quotients `(M1, M2)` on at most `max_n` elements.
///
/// Includes `(M, M)`, `(U_{0,n}, M)`, `(U_{1,n}, M)` for loopless `M`,
/// `(M, U_{n,n})`, elementary quotients `(N / e, N \ e)` and their
/// two-element versions from matroids on up to `max_n + 2` elements, and all
/// pairs of Higgs layers.
pub fn quotients(max_n: usize, seed: u64) -> Vec<(Matroid, Matroid)> {
    let base = matroids(max_n, seed);
    let mut out = Dedup::new();
    for m in &base {
        let n = m.n();
        out.push((m.clone(), m.clone()));
        out.push((Matroid::uniform(0, n).expect("valid"), m.clone()));
        if m.loops().is_empty() && m.rank() >= 1 {
            out.push((Matroid::uniform(1, n).expect("valid"), m.clone()));
        }
        out.push((m.clone(), Matroid::uniform(n, n).expect("valid")));
    }
    let bigger = matroids((max_n + 2).min(7), seed);
    for nm in &bigger {
        let n = nm.n();
        if n < 2 {
            continue;
        }
        for e in 0..n {
            if nm.is_loop(e) || nm.is_coloop(e) || n - 1 > max_n {
                continue;
            }
            let (con, _) = nm.contract(e).expect("minor");
            let (del, _) = nm.delete(e).expect("minor");
            out.push((con, del));
        }
        if n >= 3 && n - 2 <= max_n {
            for f in 1..n {
                let pair = Subset::singleton(0).insert(f);
                if nm.rank_of(pair) == 2 && nm.dual().rank_of(pair) == 2 {
                    let (con, _) = nm.minor(Subset::EMPTY, pair).expect("minor");
                    let (del, _) = nm.minor(pair, Subset::EMPTY).expect("minor");
                    out.push((con, del));
                }
            }
        }
    }
    let current = out.items.clone();
    for (m1, m2) in current {
        if m2.rank() - m1.rank() >= 2 {
            let layers = higgs_factorization(&m1, &m2).expect("corpus pairs are quotients");
            for i in 0..layers.len() {
                for j in i + 1..layers.len() {
                    out.push((layers[j].clone(), layers[i].clone()));
                }
            }
        }
    }
    debug_assert!(out.items.iter().all(|(a, b)| is_quotient(a, b).unwrap_or(false)));
    out.items
}

pub fn default_quotients() -> Vec<(Matroid, Matroid)> {
    quotients(6, DEFAULT_SEED)
}

/// Flag matroids: every matroid as a one-step flag, every quotient as a
/// two-step flag, and three-step flags cut from Higgs factorizations on at
/// most five elements.
pub fn flags(max_n: usize, seed: u64) -> Vec<FlagMatroid> {
    let mut out = Dedup::new();
    for m in matroids(max_n, seed) {
        out.push(FlagMatroid::single(m));
    }
    let qs = quotients(max_n, seed);
    for (m1, m2) in &qs {
        out.push(FlagMatroid::new(vec![m1.clone(), m2.clone()]).expect("quotient"));
    }
    for (m1, m2) in &qs {
        if m2.rank() - m1.rank() >= 2 && m1.n() <= 5 {
            let layers = higgs_factorization(m1, m2).expect("quotient");
            let d = layers.len() - 1;
            let chain = vec![layers[d].clone(), layers[d / 2].clone(), layers[0].clone()];
            out.push(FlagMatroid::new(chain).expect("Higgs layers form a chain"));
        }
    }
    out.items
}

pub fn default_flags() -> Vec<FlagMatroid> {
    flags(6, DEFAULT_SEED)
}
