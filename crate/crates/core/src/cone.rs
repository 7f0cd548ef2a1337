//! Tangent cones of base polytopes, half-open unimodular triangulations and
//! cone flips.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Deref, Neg, Sub};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flag::{FlagBasis, FlagMatroid};
use crate::linalg::{self, Frame};

/// An integer vector; exponents of torus characters.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn zero(n: usize) -> Self {
        LatticeVector(vec![0; n])
    }

    /// `e_j - e_i`.
    pub fn difference(n: usize, j: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[j] += 1;
        v[i] -= 1;
        LatticeVector(v)
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        LatticeVector(v)
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Divides by the gcd of the entries.
    pub fn primitive(&self) -> Self {
        let g = self.0.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g <= 1 {
            self.clone()
        } else {
            LatticeVector(self.0.iter().map(|x| x / g).collect())
        }
    }
}

impl Deref for LatticeVector {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        LatticeVector(v)
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

/// `sign * t^apex * prod_closed 1/(1-t^v) * prod_open t^v/(1-t^v)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct HalfOpenSimplicialCone {
    pub apex: LatticeVector,
    pub rays: Vec<LatticeVector>,
    pub open: Vec<bool>,
    pub sign: i8,
}

impl HalfOpenSimplicialCone {
    /// Checks independence and unimodularity of the rays.
    pub fn new(apex: LatticeVector, rays: Vec<LatticeVector>, open: Vec<bool>, sign: i8) -> Result<Self> {
        if open.len() != rays.len() || !(sign == 1 || sign == -1) {
            return Err(Error::Malformed("cone flags or sign malformed".into()));
        }
        if rays.iter().any(|r| r.len() != apex.len()) {
            return Err(Error::Malformed("ray length differs from apex length".into()));
        }
        let raw: Vec<Vec<i64>> = rays.iter().map(|r| r.0.clone()).collect();
        if !raw.is_empty() && Frame::new(&raw).is_none() {
            return Err(Error::Malformed("cone rays are linearly dependent".into()));
        }
        if linalg::maximal_minor_gcd(&raw) != 1 {
            return Err(Error::NotUnimodular);
        }
        Ok(HalfOpenSimplicialCone { apex, rays, open, sign })
    }

    /// A closed cone with sign +1.
    pub fn closed(apex: LatticeVector, rays: Vec<LatticeVector>) -> Result<Self> {
        let open = vec![false; rays.len()];
        Self::new(apex, rays, open, 1)
    }

    pub fn n(&self) -> usize {
        self.apex.len()
    }

    pub fn dim(&self) -> usize {
        self.rays.len()
    }

    pub fn frame(&self) -> Frame {
        let raw: Vec<Vec<i64>> = self.rays.iter().map(|r| r.0.clone()).collect();
        Frame::new(&raw).expect("cone rays are independent")
    }

    pub fn translate(&self, by: &LatticeVector) -> Self {
        HalfOpenSimplicialCone { apex: &self.apex + by, ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("cone serializes")
    }
}

/// A direction `ζ` together with the lexicographic tie-break that realizes an
/// infinitesimal irrational perturbation `ζ'`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Direction {
    zeta: Vec<BigRational>,
    lex_tiebreak: Vec<usize>,
}

impl Direction {
    pub fn new(zeta: Vec<BigRational>, lex_tiebreak: Vec<usize>) -> Result<Self> {
        if zeta.iter().all(Zero::is_zero) {
            return Err(Error::Malformed("direction must be nonzero".into()));
        }
        let mut sorted = lex_tiebreak.clone();
        sorted.sort_unstable();
        if sorted != (0..zeta.len()).collect::<Vec<_>>() {
            return Err(Error::Malformed("tie-break is not a permutation".into()));
        }
        Ok(Direction { zeta, lex_tiebreak })
    }

    /// Integer direction with the identity tie-break.
    pub fn from_ints(zeta: &[i64]) -> Result<Self> {
        Self::new(zeta.iter().map(|&z| BigRational::from_integer(z.into())).collect(), (0..zeta.len()).collect())
    }

    /// `(n, n-1, .., 1)` with the identity tie-break.
    pub fn default_for(n: usize) -> Self {
        Self::from_ints(&(1..=n as i64).rev().collect::<Vec<_>>()).expect("nonzero direction")
    }

    pub fn zeta(&self) -> &[BigRational] {
        &self.zeta
    }

    pub fn pair(&self, v: &[i64]) -> BigRational {
        self.zeta.iter().zip(v).map(|(z, &x)| z * BigRational::from_integer(x.into())).sum()
    }

    /// Sign of `<ζ', v>`.
    pub fn symbolic_sign(&self, v: &[i64]) -> Ordering {
        let p = self.pair(v);
        if !p.is_zero() {
            return if p.is_positive() { Ordering::Greater } else { Ordering::Less };
        }
        self.lex_tiebreak.iter().map(|&i| v[i].cmp(&0)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
    }
}

/// Generators `e_j - e_i` of the tangent cone of `Q(FM)` at the vertex of `b`.
pub fn tangent_cone_generators(fm: &FlagMatroid, b: &FlagBasis) -> Result<Vec<LatticeVector>> {
    if !fm.is_flag_basis(b) {
        return Err(Error::NotABasis);
    }
    let n = fm.n();
    let mut out: Vec<LatticeVector> = Vec::new();
    for (m, bl) in fm.constituents().iter().zip(&b.chain) {
        for i in bl.iter() {
            for j in bl.complement(n).iter() {
                if m.is_basis(bl.remove(i).insert(j)) {
                    out.push(LatticeVector::difference(n, j, i));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn is_difference_vector(v: &[i64]) -> Option<(usize, usize)> {
    let mut plus = None;
    let mut minus = None;
    for (k, &x) in v.iter().enumerate() {
        match x {
            0 => {}
            1 if plus.is_none() => plus = Some(k),
            -1 if minus.is_none() => minus = Some(k),
            _ => return None,
        }
    }
    Some((plus?, minus?))
}

/// Pointedness and extreme rays for generators of the form `e_j - e_i`,
/// read off the digraph with an arc `i -> j` per generator.
fn digraph_extreme(n: usize, arcs: &[(usize, usize)]) -> Result<Vec<bool>> {
    let mut adj = vec![Vec::new(); n];
    for (k, &(i, j)) in arcs.iter().enumerate() {
        adj[i].push((j, k));
    }
    // a directed cycle gives a zero positive combination
    let mut state = vec![0u8; n];
    fn cyclic(u: usize, adj: &[Vec<(usize, usize)>], state: &mut [u8]) -> bool {
        state[u] = 1;
        for &(w, _) in &adj[u] {
            if state[w] == 1 || (state[w] == 0 && cyclic(w, adj, state)) {
                return true;
            }
        }
        state[u] = 2;
        false
    }
    if (0..n).any(|u| state[u] == 0 && cyclic(u, &adj, &mut state)) {
        return Err(Error::NotPointed);
    }
    // an arc is extreme iff no other path joins its ends
    Ok(arcs
        .iter()
        .enumerate()
        .map(|(skip, &(i, j))| {
            let mut seen = vec![false; n];
            let mut stack = vec![i];
            seen[i] = true;
            while let Some(u) = stack.pop() {
                for &(w, k) in &adj[u] {
                    if k != skip && !seen[w] {
                        if w == j {
                            return false;
                        }
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            true
        })
        .collect())
}

/// Is there a linear functional positive on every generator? Decided by
/// Fourier–Motzkin elimination of `{c : <c, g> >= 1}`.
fn is_pointed_general(gens: &[Vec<i64>]) -> bool {
    if gens.is_empty() {
        return true;
    }
    let n = gens[0].len();
    // rows: coefficients a (len n) and bound b, meaning a.c >= b
    let mut rows: Vec<(Vec<BigRational>, BigRational)> = gens
        .iter()
        .map(|g| {
            (g.iter().map(|&x| BigRational::from_integer(x.into())).collect(), BigRational::from_integer(1.into()))
        })
        .collect();
    for var in 0..n {
        let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            match r.0[var].cmp(&BigRational::zero()) {
                Ordering::Greater => pos.push(r),
                Ordering::Less => neg.push(r),
                Ordering::Equal => zero.push(r),
            }
        }
        for p in &pos {
            for q in &neg {
                let (fp, fq) = (-&q.0[var], p.0[var].clone());
                let a: Vec<BigRational> = p.0.iter().zip(&q.0).map(|(x, y)| x * &fp + y * &fq).collect();
                let b = &p.1 * &fp + &q.1 * &fq;
                zero.push((a, b));
            }
        }
        zero.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        zero.dedup();
        rows = zero;
    }
    rows.iter().all(|(_, b)| !b.is_positive())
}

/// Closed membership in the cone generated by `gens` (assumed pointed), by
/// triangulating and solving in each cell.
fn in_closed_cone(gens: &[Vec<i64>], x: &[i64]) -> bool {
    if gens.is_empty() {
        return x.iter().all(|&c| c == 0);
    }
    let cells = placing_triangulation(gens);
    cells.iter().any(|cell| {
        let rays: Vec<Vec<i64>> = cell.iter().map(|&k| gens[k].clone()).collect();
        let f = Frame::new(&rays).expect("cells are independent");
        f.coords(x).is_some_and(|a| a.iter().all(|&c| c >= 0))
    })
}

/// Placing triangulation of a pointed vector configuration, as index lists.
fn placing_triangulation(gens: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let mut cells: Vec<Vec<usize>> = vec![vec![0]];
    let mut placed: Vec<Vec<i64>> = vec![gens[0].clone()];
    for (k, g) in gens.iter().enumerate().skip(1) {
        let span = linalg::rank(&placed);
        placed.push(g.clone());
        if linalg::rank(&placed) > span {
            for c in &mut cells {
                c.push(k);
            }
            continue;
        }
        // boundary facets are the facets of exactly one cell
        let mut count: HashMap<Vec<usize>, usize> = HashMap::new();
        for c in &cells {
            for drop in 0..c.len() {
                let mut f: Vec<usize> = c.iter().copied().filter(|&x| x != c[drop]).collect();
                f.sort_unstable();
                *count.entry(f).or_default() += 1;
            }
        }
        let mut fresh = Vec::new();
        for c in &cells {
            let rays: Vec<Vec<i64>> = c.iter().map(|&x| gens[x].clone()).collect();
            let frame = Frame::new(&rays).expect("cells are independent");
            let a = frame.coords(g).expect("new generator lies in the span");
            for drop in 0..c.len() {
                if a[drop] < 0 {
                    let mut f: Vec<usize> = c.iter().copied().filter(|&x| x != c[drop]).collect();
                    f.sort_unstable();
                    if count[&f] == 1 {
                        let mut cell = f;
                        cell.push(k);
                        fresh.push(cell);
                    }
                }
            }
        }
        cells.extend(fresh);
    }
    cells
}

/// Decomposes the lattice points of `apex + Cone(generators)` into disjoint
/// half-open unimodular simplicial cones.
pub fn triangulate_half_open(
    apex: &LatticeVector,
    generators: &[LatticeVector],
) -> Result<Vec<HalfOpenSimplicialCone>> {
    let n = apex.len();
    if generators.iter().any(|g| g.len() != n) {
        return Err(Error::Malformed("generator length differs from apex length".into()));
    }
    let mut gens: Vec<Vec<i64>> = generators.iter().filter(|g| !g.is_zero()).map(|g| g.primitive().0).collect();
    gens.sort();
    gens.dedup();
    if gens.is_empty() {
        return Ok(vec![HalfOpenSimplicialCone::closed(apex.clone(), Vec::new())?]);
    }
    let arcs: Option<Vec<(usize, usize)>> = gens.iter().map(|g| is_difference_vector(g).map(|(j, i)| (i, j))).collect();
    let extreme: Vec<bool> = match arcs {
        Some(arcs) => digraph_extreme(n, &arcs)?,
        None => {
            if !is_pointed_general(&gens) {
                return Err(Error::NotPointed);
            }
            (0..gens.len())
                .map(|k| {
                    let others: Vec<Vec<i64>> =
                        gens.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, g)| g.clone()).collect();
                    !in_closed_cone(&others, &gens[k])
                })
                .collect()
        }
    };
    let rays: Vec<Vec<i64>> = gens.into_iter().zip(extreme).filter(|(_, e)| *e).map(|(g, _)| g).collect();
    let cells = placing_triangulation(&rays);
    // generic interior point: sum of rays, then lexicographic perturbation by the rays
    let interior: Vec<i64> = (0..n).map(|c| rays.iter().map(|r| r[c]).sum()).collect();
    let mut out = Vec::with_capacity(cells.len());
    for cell in cells {
        let cell_rays: Vec<Vec<i64>> = cell.iter().map(|&k| rays[k].clone()).collect();
        let frame = Frame::new(&cell_rays).expect("cells are independent");
        let probes: Vec<Vec<i128>> = std::iter::once(&interior)
            .chain(rays.iter())
            .map(|p| frame.coords(p).expect("probe lies in the span"))
            .collect();
        let open = (0..cell.len())
            .map(|i| {
                let s = probes.iter().map(|a| a[i]).find(|&x| x != 0).expect("own ray has coordinate 1");
                s < 0
            })
            .collect();
        let cone =
            HalfOpenSimplicialCone::new(apex.clone(), cell_rays.into_iter().map(LatticeVector).collect(), open, 1)?;
        out.push(cone);
    }
    Ok(out)
}

/// Exact lattice membership in a half-open cone.
pub fn cone_membership(c: &HalfOpenSimplicialCone, w: &LatticeVector) -> bool {
    if w.len() != c.n() {
        return false;
    }
    let x = w - &c.apex;
    if c.rays.is_empty() {
        return x.is_zero();
    }
    let frame = c.frame();
    let den = frame.den();
    match frame.coords(&x) {
        None => false,
        Some(a) => a.iter().zip(&c.open).all(|(&ai, &open)| ai % den == 0 && if open { ai > 0 } else { ai >= 0 }),
    }
}

/// Replaces `c` by the ζ'-pointed cone with the same generating function.
pub fn flip_cone(c: &HalfOpenSimplicialCone, d: &Direction) -> Result<HalfOpenSimplicialCone> {
    let mut out = c.clone();
    for (ray, open) in out.rays.iter_mut().zip(out.open.iter_mut()) {
        match d.symbolic_sign(ray) {
            Ordering::Greater => {}
            Ordering::Less => {
                *ray = -&*ray;
                *open = !*open;
                out.sign = -out.sign;
            }
            Ordering::Equal => return Err(Error::ZeroPairing),
        }
    }
    Ok(out)
}
