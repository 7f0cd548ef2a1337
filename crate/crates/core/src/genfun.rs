//! Formal sums `Σ a_λ Hilb(C_λ)` of half-open cone generating functions.
//!
//! Terms are stored grouped: a group is a list of cells (usually the
//! triangulation of one tangent cone) together with numerator shifts
//! `(t^offset, coefficient)`, so every cell is paired with every shift.
//! Coefficients are interned in a table and referenced by index, which keeps
//! the extraction loops in integer arithmetic.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cone::{
    cone_membership, flip_cone, triangulate_half_open, Direction, HalfOpenSimplicialCone, LatticeVector,
};
use crate::equivariant::EquivariantPolynomial;
use crate::error::{Error, Result};
use crate::linalg::Frame;
use crate::poly::{binomial, AuxPolynomial};

/// `mult * coeffs[coeff] * t^offset`, multiplying every cell of its group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Shift {
    pub offset: LatticeVector,
    pub coeff: usize,
    pub mult: i64,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TermGroup {
    pub cells: Vec<HalfOpenSimplicialCone>,
    pub shifts: Vec<Shift>,
}

/// A single term `coeff * Hilb(cone)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenFunTerm {
    pub coeff: AuxPolynomial,
    pub cone: HalfOpenSimplicialCone,
}

#[derive(Clone, Debug)]
pub struct GenFun {
    n: usize,
    coeffs: Vec<AuxPolynomial>,
    index: HashMap<AuxPolynomial, usize>,
    groups: Vec<TermGroup>,
}

/// Coordinates and span defect of lattice points relative to one cell.
struct CellEval {
    frame: Option<Frame>,
    den: i128,
    /// Smallest admissible coordinate numerator per ray.
    lower: Vec<i128>,
}

impl CellEval {
    fn new(cell: &HalfOpenSimplicialCone) -> Self {
        if cell.rays.is_empty() {
            return CellEval { frame: None, den: 1, lower: Vec::new() };
        }
        let frame = cell.frame();
        let den = frame.den();
        let lower = cell.open.iter().map(|&o| if o { den } else { 0 }).collect();
        CellEval { frame: Some(frame), den, lower }
    }

    /// Coordinate numerators and residual of `x`.
    fn key(&self, x: &[i64]) -> (Vec<i128>, Vec<i128>) {
        match &self.frame {
            None => (Vec::new(), x.iter().map(|&c| c as i128).collect()),
            Some(f) => {
                let raw = f.raw_coords(x);
                let res = f.residual(x, &raw);
                (raw, res)
            }
        }
    }

    /// Does `w - s` lie in the cell (cell apex at the origin)?
    fn admits(&self, aw: &[i128], a_s: &[i128]) -> bool {
        aw.iter().zip(a_s).zip(&self.lower).all(|((&x, &y), &lo)| {
            let diff = x - y;
            diff >= lo && (self.den == 1 || diff % self.den == 0)
        })
    }
}

impl GenFun {
    pub fn new(n: usize) -> Self {
        GenFun { n, coeffs: Vec::new(), index: HashMap::new(), groups: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn groups(&self) -> &[TermGroup] {
        &self.groups
    }

    pub fn coeff_table(&self) -> &[AuxPolynomial] {
        &self.coeffs
    }

    /// Index of `c` in the coefficient table, adding it if new.
    pub fn intern(&mut self, c: AuxPolynomial) -> usize {
        if let Some(&i) = self.index.get(&c) {
            return i;
        }
        self.coeffs.push(c.clone());
        self.index.insert(c, self.coeffs.len() - 1);
        self.coeffs.len() - 1
    }

    fn check_len(&self, v: &LatticeVector) -> Result<()> {
        if v.len() == self.n {
            Ok(())
        } else {
            Err(Error::Malformed(format!("vector of length {} in a sum over Z^{}", v.len(), self.n)))
        }
    }

    pub fn push_term(&mut self, coeff: AuxPolynomial, cone: HalfOpenSimplicialCone) -> Result<()> {
        self.check_len(&cone.apex)?;
        let id = self.intern(coeff);
        let offset = LatticeVector::zero(self.n);
        self.groups.push(TermGroup { cells: vec![cone], shifts: vec![Shift { offset, coeff: id, mult: 1 }] });
        Ok(())
    }

    /// Adds a group; `shifts` reference the coefficient table.
    pub fn push_group(&mut self, cells: Vec<HalfOpenSimplicialCone>, shifts: Vec<Shift>) -> Result<()> {
        for c in &cells {
            self.check_len(&c.apex)?;
        }
        for s in &shifts {
            self.check_len(&s.offset)?;
            if s.coeff >= self.coeffs.len() {
                return Err(Error::Malformed("shift references a missing coefficient".into()));
            }
        }
        if !cells.is_empty() && !shifts.is_empty() {
            self.groups.push(TermGroup { cells, shifts });
        }
        Ok(())
    }

    /// Appends all terms of `other`.
    pub fn extend(&mut self, other: &GenFun) -> Result<()> {
        if other.n != self.n {
            return Err(Error::Malformed("ambient dimensions differ".into()));
        }
        for g in &other.groups {
            let shifts = g
                .shifts
                .iter()
                .map(|s| Shift { coeff: self.intern(other.coeffs[s.coeff].clone()), ..s.clone() })
                .collect();
            self.groups.push(TermGroup { cells: g.cells.clone(), shifts });
        }
        Ok(())
    }

    pub fn negated(&self) -> GenFun {
        let mut out = self.clone();
        for g in &mut out.groups {
            for s in &mut g.shifts {
                s.mult = -s.mult;
            }
        }
        out
    }

    /// Number of `(cell, shift)` terms.
    pub fn len(&self) -> usize {
        self.groups.iter().map(|g| g.cells.len() * g.shifts.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Expanded term list.
    pub fn terms(&self) -> Vec<GenFunTerm> {
        let mut out = Vec::with_capacity(self.len());
        for g in &self.groups {
            for s in &g.shifts {
                let coeff = self.coeffs[s.coeff].scale_int(s.mult);
                for c in &g.cells {
                    out.push(GenFunTerm { coeff: coeff.clone(), cone: c.translate(&s.offset) });
                }
            }
        }
        out
    }

    /// Distinct vertices of all terms.
    pub fn apexes(&self) -> Vec<LatticeVector> {
        let mut v: Vec<LatticeVector> = self
            .groups
            .iter()
            .flat_map(|g| g.cells.iter().flat_map(move |c| g.shifts.iter().map(move |s| &c.apex + &s.offset)))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    fn collect_counts(&self, counts: &HashMap<usize, i64>) -> AuxPolynomial {
        let mut out = AuxPolynomial::zero();
        let mut ids: Vec<_> = counts.iter().filter(|(_, &c)| c != 0).collect();
        ids.sort();
        for (&id, &c) in ids {
            out = &out + &self.coeffs[id].scale_int(c);
        }
        out
    }

    /// Coefficient of `t^w`, by flipping along the default direction.
    pub fn coefficient_at(&self, w: &LatticeVector) -> Result<AuxPolynomial> {
        self.coefficient_at_with(w, &Direction::default_for(self.n))
    }

    pub fn coefficient_at_with(&self, w: &LatticeVector, dir: &Direction) -> Result<AuxPolynomial> {
        self.check_len(w)?;
        let mut counts: HashMap<usize, i64> = HashMap::new();
        for g in &self.groups {
            for cell in &g.cells {
                let f = flip_cone(cell, dir)?;
                for s in &g.shifts {
                    if cone_membership(&f, &(w - &s.offset)) {
                        *counts.entry(s.coeff).or_default() += i64::from(f.sign) * s.mult;
                    }
                }
            }
        }
        Ok(self.collect_counts(&counts))
    }

    /// Candidate support: the bounding box of the vertices, cut down to the
    /// vertex coordinate sums when every ray has coordinate sum zero, and to
    /// the vertex ranges of the pairwise functionals `x_i ± x_j`.
    fn candidates(&self) -> Vec<Vec<i64>> {
        let apexes = self.apexes();
        if apexes.is_empty() {
            return Vec::new();
        }
        let n = self.n;
        let lo: Vec<i64> = (0..n).map(|i| apexes.iter().map(|a| a[i]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..n).map(|i| apexes.iter().map(|a| a[i]).max().unwrap()).collect();
        let sum_zero = self.groups.iter().all(|g| g.cells.iter().all(|c| c.rays.iter().all(|r| r.sum() == 0)));
        let mut sums: Vec<i64> = apexes.iter().map(|a| a.sum()).collect();
        sums.sort_unstable();
        sums.dedup();
        let (smin, smax) = (sums[0], *sums.last().unwrap());
        // suffix bounds on the remaining coordinates prune the sum filter early
        let mut rest_lo = vec![0i64; n + 1];
        let mut rest_hi = vec![0i64; n + 1];
        for i in (0..n).rev() {
            rest_lo[i] = rest_lo[i + 1] + lo[i];
            rest_hi[i] = rest_hi[i + 1] + hi[i];
        }
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        #[allow(clippy::too_many_arguments)]
        fn rec(
            i: usize,
            acc: i64,
            cur: &mut Vec<i64>,
            lo: &[i64],
            hi: &[i64],
            bounds: (&[i64], &[i64], i64, i64),
            sums: Option<&[i64]>,
            out: &mut Vec<Vec<i64>>,
        ) {
            let (rest_lo, rest_hi, smin, smax) = bounds;
            if sums.is_some() && (acc + rest_hi[i] < smin || acc + rest_lo[i] > smax) {
                return;
            }
            if i == lo.len() {
                if sums.is_none_or(|s| s.binary_search(&acc).is_ok()) {
                    out.push(cur.clone());
                }
                return;
            }
            for x in lo[i]..=hi[i] {
                cur.push(x);
                rec(i + 1, acc + x, cur, lo, hi, bounds, sums, out);
                cur.pop();
            }
        }
        let filter = if sum_zero { Some(sums.as_slice()) } else { None };
        rec(0, 0, &mut cur, &lo, &hi, (&rest_lo, &rest_hi, smin, smax), filter, &mut out);
        // the support lies in the convex hull of the vertices, so the range of
        // every functional x_i ± x_j over the vertices also bounds it
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let range = |f: &dyn Fn(&[i64]) -> i64| -> (i64, i64) {
            apexes.iter().fold((i64::MAX, i64::MIN), |(a, b), v| (a.min(f(v)), b.max(f(v))))
        };
        let bounds: Vec<((i64, i64), (i64, i64))> =
            pairs.iter().map(|&(i, j)| (range(&|v| v[i] + v[j]), range(&|v| v[i] - v[j]))).collect();
        out.retain(|p| {
            pairs.iter().zip(&bounds).all(|(&(i, j), &((a, b), (c, d)))| {
                (a..=b).contains(&(p[i] + p[j])) && (c..=d).contains(&(p[i] - p[j]))
            })
        });
        out
    }

    /// Full support of the (Laurent polynomial) sum, by cone flipping.
    pub fn expand(&self) -> Result<EquivariantPolynomial> {
        self.expand_with(&Direction::default_for(self.n))
    }

    pub fn expand_with(&self, dir: &Direction) -> Result<EquivariantPolynomial> {
        let points = self.candidates();
        let k = self.coeffs.len().max(1);
        let point_keys: Vec<&[i64]> = points.iter().map(Vec::as_slice).collect();
        let zero = || vec![0i64; points.len() * k];
        let counts = self
            .groups
            .par_iter()
            .try_fold(zero, |mut acc, g| {
                accumulate_group(g, dir, &point_keys, k, &mut acc)?;
                Ok::<_, Error>(acc)
            })
            .try_reduce(zero, |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                Ok(a)
            })?;
        let mut out = EquivariantPolynomial::zero(self.n);
        for (pi, p) in points.iter().enumerate() {
            let row = &counts[pi * k..(pi + 1) * k];
            if row.iter().all(|&c| c == 0) {
                continue;
            }
            let mut c = AuxPolynomial::zero();
            for (id, &m) in row.iter().enumerate() {
                if m != 0 {
                    c = &c + &self.coeffs[id].scale_int(m);
                }
            }
            out.add_term(LatticeVector(p.clone()), &c);
        }
        Ok(out)
    }

    /// Restriction of the sum to the hyperplane `<ζ, x> = b`.
    pub fn slice(&self, zeta: &[BigRational], b: &BigRational) -> Result<GenFun> {
        if zeta.len() != self.n || zeta.iter().all(Zero::is_zero) {
            return Err(Error::HypothesisViolated(0));
        }
        let pair = |v: &[i64]| -> BigRational {
            zeta.iter().zip(v).map(|(z, &x)| z * BigRational::from_integer(x.into())).sum()
        };
        let mut out = GenFun::new(self.n);
        out.coeffs = self.coeffs.clone();
        out.index = self.index.clone();
        let mut term = 0usize;
        for g in &self.groups {
            for s in &g.shifts {
                for cell in &g.cells {
                    let apex = &cell.apex + &s.offset;
                    let pw = pair(&apex);
                    let pr: Vec<BigRational> = cell.rays.iter().map(|r| pair(r)).collect();
                    let pointed = pr.iter().all(|p| !p.is_negative());
                    if !pointed {
                        if pw < *b {
                            return Err(Error::HypothesisViolated(term));
                        }
                        term += 1;
                        continue;
                    }
                    term += 1;
                    let budget = b - &pw;
                    if budget.is_negative() {
                        continue;
                    }
                    let positive: Vec<usize> = (0..pr.len()).filter(|&i| pr[i].is_positive()).collect();
                    let flat: Vec<usize> = (0..pr.len()).filter(|&i| pr[i].is_zero()).collect();
                    let mut solutions = Vec::new();
                    let lower: Vec<i64> = positive.iter().map(|&i| i64::from(cell.open[i])).collect();
                    let weights: Vec<BigRational> = positive.iter().map(|&i| pr[i].clone()).collect();
                    distribute(&weights, &lower, budget, &mut Vec::new(), &mut solutions);
                    for a in solutions {
                        let mut new_apex = apex.clone();
                        for (&i, &ai) in positive.iter().zip(&a) {
                            for (x, r) in new_apex.0.iter_mut().zip(cell.rays[i].iter()) {
                                *x += ai * r;
                            }
                        }
                        let face = HalfOpenSimplicialCone {
                            apex: new_apex,
                            rays: flat.iter().map(|&i| cell.rays[i].clone()).collect(),
                            open: flat.iter().map(|&i| cell.open[i]).collect(),
                            sign: cell.sign,
                        };
                        out.groups.push(TermGroup {
                            cells: vec![face],
                            shifts: vec![Shift { offset: LatticeVector::zero(self.n), coeff: s.coeff, mult: s.mult }],
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Value of the sum at `t_1 = .. = t_n = 1`.
    ///
    /// Substitutes `t_i = z^{c_i}` for a generic weight vector `c`, expands
    /// every term as a Laurent series in `h = z - 1` and adds the constant
    /// terms; the negative-order parts must cancel.
    pub fn evaluate_t1(&self) -> Result<AuxPolynomial> {
        let c = self.generic_weights()?;
        let dot = |v: &[i64]| -> i64 { c.iter().zip(v).map(|(a, b)| a * b).sum() };
        let max_dim = self.groups.iter().flat_map(|g| g.cells.iter().map(|c| c.dim())).max().unwrap_or(0);
        // totals[id][j] is the coefficient of h^{-j}
        let zero = || vec![vec![BigRational::zero(); max_dim + 1]; self.coeffs.len()];
        let mut pairings: Vec<i64> =
            self.groups.iter().flat_map(|g| g.cells.iter().flat_map(|cell| cell.rays.iter().map(|r| dot(r)))).collect();
        pairings.sort_unstable();
        pairings.dedup();
        let inverses: HashMap<i64, Vec<BigRational>> =
            pairings.into_iter().map(|d| (d, inverse_series(d, max_dim))).collect();
        let totals = self
            .groups
            .par_iter()
            .fold(zero, |mut totals, g| {
                // cells of equal dimension share one summed series
                let mut by_dim: HashMap<usize, Vec<BigRational>> = HashMap::new();
                for cell in &g.cells {
                    let series = cell_series(cell, &dot, &inverses);
                    match by_dim.get_mut(&cell.dim()) {
                        Some(acc) => acc.iter_mut().zip(series).for_each(|(a, b)| *a += b),
                        None => {
                            by_dim.insert(cell.dim(), series);
                        }
                    }
                }
                let m_group = by_dim.keys().copied().max().unwrap_or(0);
                // binomial moments of the shifts, per coefficient id
                let mut weights: HashMap<(usize, i64), i64> = HashMap::new();
                for s in &g.shifts {
                    *weights.entry((s.coeff, dot(&s.offset))).or_default() += s.mult;
                }
                let mut moments: HashMap<usize, Vec<BigInt>> = HashMap::new();
                for (&(coeff, e), &mult) in &weights {
                    let row = moments.entry(coeff).or_insert_with(|| vec![BigInt::zero(); m_group + 1]);
                    match small_binomials(e, m_group) {
                        Some(bs) => {
                            for (slot, b) in row.iter_mut().zip(bs) {
                                *slot += BigInt::from(b * i128::from(mult));
                            }
                        }
                        None => {
                            let e = BigInt::from(e);
                            for (l, slot) in row.iter_mut().enumerate() {
                                *slot += binomial(&e, l) * mult;
                            }
                        }
                    }
                }
                for (&m, series) in &by_dim {
                    // integer numerators over a common denominator
                    let den = series.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                    let nums: Vec<BigInt> = series.iter().map(|x| x.numer() * (&den / x.denom())).collect();
                    for (&id, mom) in &moments {
                        for j in 0..=m {
                            // coefficient of h^{-j}: sum over l of series[m - j - l] * mom[l]
                            let mut acc = BigInt::zero();
                            for l in 0..=(m - j) {
                                if !mom[l].is_zero() {
                                    acc += &nums[m - j - l] * &mom[l];
                                }
                            }
                            if !acc.is_zero() {
                                totals[id][j] += BigRational::new(acc, den.clone());
                            }
                        }
                    }
                }
                totals
            })
            .reduce(zero, |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    x.iter_mut().zip(y).for_each(|(p, q)| *p += q);
                }
                a
            });
        let mut out = AuxPolynomial::zero();
        for (id, t) in totals.iter().enumerate() {
            if t[1..].iter().any(|x| !x.is_zero()) {
                return Err(Error::NonCancellingPole);
            }
            out = &out + &self.coeffs[id].scale(&t[0]);
        }
        Ok(out)
    }

    fn generic_weights(&self) -> Result<Vec<i64>> {
        let n = self.n as i64;
        let mut candidates: Vec<Vec<i64>> = vec![(1..=n).collect()];
        let geometric: Option<Vec<i64>> = (0..n as u32).map(|i| (n + 1).checked_pow(i)).collect();
        candidates.extend(geometric.filter(|g| g.iter().all(|&x| x < 1 << 20)));
        candidates.push(first_primes(self.n));
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..8 {
            candidates.push((0..self.n).map(|_| rng.gen_range(1..=1000)).collect());
        }
        candidates
            .into_iter()
            .find(|c| {
                self.groups.iter().all(|g| {
                    g.cells
                        .iter()
                        .all(|cell| cell.rays.iter().all(|r| r.iter().zip(c).map(|(a, b)| a * b).sum::<i64>() != 0))
                })
            })
            .ok_or(Error::DegenerateWeights)
    }
}

/// Integer points `a >= lower` with `Σ a_i w_i = budget`, all `w_i > 0`.
fn distribute(
    weights: &[BigRational],
    lower: &[i64],
    budget: BigRational,
    cur: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    let i = cur.len();
    if i == weights.len() {
        if budget.is_zero() {
            out.push(cur.clone());
        }
        return;
    }
    if i + 1 == weights.len() {
        let a = &budget / &weights[i];
        if a.is_integer() {
            let a = a.to_integer().to_i64().expect("slice coordinate fits in i64");
            if a >= lower[i] {
                cur.push(a);
                out.push(cur.clone());
                cur.pop();
            }
        }
        return;
    }
    let mut a = lower[i];
    loop {
        let rest = &budget - &weights[i] * BigRational::from_integer(a.into());
        if rest.is_negative() {
            break;
        }
        cur.push(a);
        distribute(weights, lower, rest, cur, out);
        cur.pop();
        a += 1;
    }
}

/// Coefficients `R_0..R_m` with `sign * z^{<c,apex>} * Π(open? z^d : 1)/(1 - z^d)`
/// equal to `h^{-m} Σ R_k h^k + O(h)` at `z = 1 + h`.
fn cell_series(
    cell: &HalfOpenSimplicialCone,
    dot: &dyn Fn(&[i64]) -> i64,
    inverses: &HashMap<i64, Vec<BigRational>>,
) -> Vec<BigRational> {
    let m = cell.dim();
    let mut series = vec![BigRational::zero(); m + 1];
    series[0] = BigRational::from_integer(if m.is_multiple_of(2) == (cell.sign > 0) { 1 } else { -1 }.into());
    let mut e = dot(&cell.apex);
    for (ray, &open) in cell.rays.iter().zip(&cell.open) {
        let d = dot(ray);
        if open {
            e += d;
        }
        series = truncated_mul(&series, &inverses[&d], m);
    }
    let e_big = BigInt::from(e);
    let shift: Vec<BigRational> = (0..=m).map(|k| BigRational::from_integer(binomial(&e_big, k))).collect();
    truncated_mul(&series, &shift, m)
}

/// `C(e, 0), .., C(e, m)` in machine integers, if they fit.
fn small_binomials(e: i64, m: usize) -> Option<Vec<i128>> {
    let mut out = Vec::with_capacity(m + 1);
    let mut b: i128 = 1;
    out.push(b);
    for l in 0..m as i128 {
        b = b.checked_mul(i128::from(e) - l)? / (l + 1);
        out.push(b);
    }
    out.iter().all(|x| x.checked_mul(1 << 62).is_some()).then_some(out)
}

/// `1/P_d(h)` up to `h^m`, where `P_d(h) = Σ_{k>=1} C(d,k) h^{k-1}`.
fn inverse_series(d: i64, m: usize) -> Vec<BigRational> {
    let d_big = BigInt::from(d);
    let p: Vec<BigRational> = (0..=m).map(|k| BigRational::from_integer(binomial(&d_big, k + 1))).collect();
    let mut inv = vec![BigRational::zero(); m + 1];
    inv[0] = p[0].recip();
    for k in 1..=m {
        let s: BigRational = (1..=k).map(|i| &p[i] * &inv[k - i]).sum();
        inv[k] = -s / &p[0];
    }
    inv
}

fn truncated_mul(a: &[BigRational], b: &[BigRational], m: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); m + 1];
    for (i, x) in a.iter().enumerate().take(m + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(m + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn first_primes(k: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(k);
    let mut x = 2i64;
    while out.len() < k {
        if (2..x).take_while(|d| d * d <= x).all(|d| x % d != 0) {
            out.push(x);
        }
        x += 1;
    }
    out
}

/// Adds the flipped contributions of one group to the dense count table.
fn accumulate_group(g: &TermGroup, dir: &Direction, points: &[&[i64]], k: usize, acc: &mut [i64]) -> Result<()> {
    // shifts sharing an offset are tested once
    let mut by_offset: HashMap<&LatticeVector, Vec<(usize, i64)>> = HashMap::new();
    for s in &g.shifts {
        by_offset.entry(&s.offset).or_default().push((s.coeff, s.mult));
    }
    let mut offsets: Vec<_> = by_offset.into_iter().collect();
    offsets.sort();
    for cell in &g.cells {
        let f = flip_cone(cell, dir)?;
        let eval = CellEval::new(&f);
        let m = f.dim();
        // bucket candidate points by span residual; coordinates stored flat
        let mut buckets: HashMap<Vec<i128>, (Vec<usize>, Vec<i128>)> = HashMap::new();
        let base = eval.key(&f.apex);
        for (pi, p) in points.iter().enumerate() {
            let (a, r) = eval.key(p);
            let slot = buckets.entry(r).or_default();
            slot.0.push(pi);
            slot.1.extend(a);
        }
        let sign = i64::from(f.sign);
        for (offset, contributions) in &offsets {
            let (mut a_s, mut r_s) = eval.key(offset);
            for (x, y) in a_s.iter_mut().zip(&base.0) {
                *x += y;
            }
            for (x, y) in r_s.iter_mut().zip(&base.1) {
                *x += y;
            }
            let Some((idx, coords)) = buckets.get(&r_s) else { continue };
            for (j, &pi) in idx.iter().enumerate() {
                if eval.admits(&coords[j * m..(j + 1) * m], &a_s) {
                    for &(coeff, mult) in contributions {
                        acc[pi * k + coeff] += sign * mult;
                    }
                }
            }
        }
    }
    Ok(())
}

/// Lattice-point series of a polytope from its vertex cones.
pub fn brion_series(vertex_cones: &[(LatticeVector, Vec<LatticeVector>)]) -> Result<EquivariantPolynomial> {
    let n = vertex_cones.first().map_or(0, |(a, _)| a.len());
    let mut g = GenFun::new(n);
    let one = g.intern(AuxPolynomial::one());
    for (apex, gens) in vertex_cones {
        let cells = triangulate_half_open(apex, gens)?;
        g.push_group(cells, vec![Shift { offset: LatticeVector::zero(n), coeff: one, mult: 1 }])?;
    }
    g.expand()
}
