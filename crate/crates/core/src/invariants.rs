//! Tutte-type polynomial invariants of matroids, quotients and flag matroids.
//!
//! The corank-nullity invariants are summed directly over subsets. The
//! flag-geometric ones are assembled as localization sums over flag bases:
//! one tangent-cone triangulation per flag basis, with the `(p, q)` numerator
//! monomials carried as shifts of a single term group.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rayon::prelude::*;

use crate::cone::{tangent_cone_generators, triangulate_half_open, HalfOpenSimplicialCone, LatticeVector};
use crate::equivariant::EquivariantPolynomial;
use crate::error::{Error, Result};
use crate::flag::{higgs_factorization, FlagBasis, FlagMatroid};
use crate::genfun::{GenFun, Shift};
use crate::matroid::{is_quotient, Matroid};
use crate::poly::{AuxPolynomial, Var};
use crate::subset::Subset;

const MAX_SUBSET_N: usize = 24;

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn x_minus_one() -> AuxPolynomial {
    &AuxPolynomial::var(Var::X) - &AuxPolynomial::one()
}

fn y_minus_one() -> AuxPolynomial {
    &AuxPolynomial::var(Var::Y) - &AuxPolynomial::one()
}

/// `u = x - 1`, `v = y - 1`.
fn uv_to_xy(p: &AuxPolynomial) -> AuxPolynomial {
    p.substitute(&[(Var::U, x_minus_one()), (Var::V, y_minus_one())]).with_vars(&[Var::X, Var::Y])
}

/// `Σ count * u^a v^b w^c` from a table of exponent counts.
fn counts_to_poly(counts: &HashMap<[u32; 3], i64>) -> AuxPolynomial {
    let mut out = AuxPolynomial::zero();
    let mut keys: Vec<_> = counts.keys().copied().collect();
    keys.sort_unstable();
    for k in keys {
        out = &out + &AuxPolynomial::term(counts[&k], &[(Var::U, k[0]), (Var::V, k[1]), (Var::W, k[2])]);
    }
    out
}

fn check_subset_size(n: usize) -> Result<()> {
    if n > MAX_SUBSET_N {
        Err(Error::GroundSetTooLarge(n))
    } else {
        Ok(())
    }
}

fn check_quotient(m1: &Matroid, m2: &Matroid) -> Result<()> {
    if m1.n() != m2.n() {
        return Err(Error::GroundSetMismatch(m1.n(), m2.n()));
    }
    if is_quotient(m1, m2)? {
        Ok(())
    } else {
        Err(Error::NotAQuotient)
    }
}

/// Corank-nullity exponents `(r1 - r1(S), |S| - r2(S), (r2 - r2(S)) - (r1 - r1(S)))`
/// for every subset `S`, indexed by the subset bits.
fn lv_exponents(m1: &Matroid, m2: &Matroid) -> Vec<[u32; 3]> {
    let (t1, t2) = (m1.rank_table(), m2.rank_table());
    let (r1, r2) = (m1.rank() as u32, m2.rank() as u32);
    (0..t1.len())
        .map(|s| {
            let (a, b) = (u32::from(t1[s]), u32::from(t2[s]));
            let size = (s as u64).count_ones();
            [r1 - a, size - b, (r2 - b) - (r1 - a)]
        })
        .collect()
}

/// The Tutte polynomial in `x, y`.
pub fn tutte(m: &Matroid) -> Result<AuxPolynomial> {
    check_subset_size(m.n())?;
    let mut counts = HashMap::new();
    for e in lv_exponents(m, m) {
        *counts.entry([e[0], e[1], 0]).or_insert(0) += 1;
    }
    Ok(uv_to_xy(&counts_to_poly(&counts)))
}

/// The characteristic polynomial `(-1)^r T(1 - q, 0)` in `q`.
pub fn characteristic_polynomial(m: &Matroid) -> Result<AuxPolynomial> {
    let t = tutte(m)?;
    let one_minus_q = &AuxPolynomial::one() - &AuxPolynomial::var(Var::Q);
    Ok(t.substitute(&[(Var::X, one_minus_q), (Var::Y, AuxPolynomial::zero())])
        .scale_int(sign(m.rank()))
        .with_vars(&[Var::Q]))
}

/// The Las Vergnas Tutte polynomial of a quotient, in `x, y, z`.
pub fn lv_tutte(m1: &Matroid, m2: &Matroid) -> Result<AuxPolynomial> {
    check_quotient(m1, m2)?;
    check_subset_size(m1.n())?;
    let mut counts = HashMap::new();
    for e in lv_exponents(m1, m2) {
        *counts.entry(e).or_insert(0) += 1;
    }
    let p = counts_to_poly(&counts);
    Ok(p.substitute(&[(Var::U, x_minus_one()), (Var::V, y_minus_one()), (Var::W, AuxPolynomial::var(Var::Z))])
        .with_vars(&[Var::X, Var::Y, Var::Z]))
}

/// `Σ_S t^{e_S} u^{r1 - r1(S)} v^{|S| - r2(S)} w^{r2 - r1 - r2(S) + r1(S)}`.
pub fn lv_tutte_equivariant(m1: &Matroid, m2: &Matroid) -> Result<EquivariantPolynomial> {
    check_quotient(m1, m2)?;
    check_subset_size(m1.n())?;
    let n = m1.n();
    let mut out = EquivariantPolynomial::zero(n);
    for (s, e) in lv_exponents(m1, m2).into_iter().enumerate() {
        let c = AuxPolynomial::term(1, &[(Var::U, e[0]), (Var::V, e[1]), (Var::W, e[2])]);
        out.add_term(LatticeVector(Subset(s as u64).indicator(n)), &c);
    }
    Ok(out)
}

/// Numerator data for one flag basis: `(offset, [a, b, c])` standing for
/// `t^offset u^a v^b w^c`.
type Numerators = Vec<(Vec<i64>, [u32; 3])>;

/// Tangent-cone triangulation at the origin for every flag basis.
fn basis_cells(fm: &FlagMatroid) -> Result<Vec<(FlagBasis, Vec<HalfOpenSimplicialCone>)>> {
    let zero = LatticeVector::zero(fm.n());
    fm.flag_bases()
        .into_par_iter()
        .map(|b| {
            let gens = tangent_cone_generators(fm, &b)?;
            let cells = triangulate_half_open(&zero, &gens)?;
            Ok((b, cells))
        })
        .collect()
}

type ShiftCounts = HashMap<(Vec<i64>, [u32; 3]), i64>;

/// `Σ_B Hilb(Cone_B) * numerators(B)`.
fn localization_sum(fm: &FlagMatroid, numerators: impl Fn(&FlagBasis) -> Numerators + Sync) -> Result<GenFun> {
    let cells = basis_cells(fm)?;
    let shifts: Vec<ShiftCounts> = cells
        .par_iter()
        .map(|(b, _)| {
            let mut merged = HashMap::new();
            for key in numerators(b) {
                *merged.entry(key).or_insert(0i64) += 1;
            }
            merged
        })
        .collect();
    let mut g = GenFun::new(fm.n());
    let mut ids: HashMap<[u32; 3], usize> = HashMap::new();
    for ((_, cells), merged) in cells.into_iter().zip(shifts) {
        let mut entries: Vec<_> = merged.into_iter().collect();
        entries.sort();
        let mut group = Vec::with_capacity(entries.len());
        for ((offset, key), mult) in entries {
            let coeff = *ids.entry(key).or_insert_with(|| {
                g.intern(AuxPolynomial::term(1, &[(Var::U, key[0]), (Var::V, key[1]), (Var::W, key[2])]))
            });
            group.push(Shift { offset: LatticeVector(offset), coeff, mult });
        }
        g.push_group(cells, group)?;
    }
    Ok(g)
}

fn indicator_sum(n: usize, sets: &[Subset]) -> Vec<i64> {
    let mut v = vec![0i64; n];
    for s in sets {
        for i in s.iter() {
            v[i] += 1;
        }
    }
    v
}

/// Localization sum for `KT^T(u + 1, v + 1)`:
/// `Σ_B Hilb(Cone_B) Σ_{p ⊆ B_k, q ⊆ [n] \ B_1} t^{e_{B_1} + .. + e_{B_{k-1}} + e_p + e_q} u^{r_k - |p|} v^{|q|}`.
pub fn kt_genfun(fm: &FlagMatroid) -> Result<GenFun> {
    let n = fm.n();
    let rk = fm.last().rank() as u32;
    localization_sum(fm, |b| {
        let k = b.chain.len();
        let base = indicator_sum(n, &b.chain[..k - 1]);
        let (first, last) = (b.chain[0], b.chain[k - 1]);
        let mut out = Vec::new();
        for p in last.subsets() {
            for q in first.complement(n).subsets() {
                let mut off = base.clone();
                for i in p.iter().chain(q.iter()) {
                    off[i] += 1;
                }
                out.push((off, [rk - p.len() as u32, q.len() as u32, 0]));
            }
        }
        out
    })
}

/// The equivariant flag-geometric Tutte polynomial at `(u + 1, v + 1)`.
pub fn kt_equivariant(fm: &FlagMatroid) -> Result<EquivariantPolynomial> {
    kt_genfun(fm)?.expand()
}

/// `KT(u + 1, v + 1)` in `u, v`.
pub fn kt_uv(fm: &FlagMatroid) -> Result<AuxPolynomial> {
    Ok(kt_genfun(fm)?.evaluate_t1()?.with_vars(&[Var::U, Var::V]))
}

/// The flag-geometric Tutte polynomial in `x, y`.
pub fn kt(fm: &FlagMatroid) -> Result<AuxPolynomial> {
    Ok(uv_to_xy(&kt_uv(fm)?))
}

/// The equivariant Las Vergnas polynomial of a two-step flag as a
/// localization sum with `p ⊆ B_1`, `m ⊆ B_2 \ B_1`, `q ⊆ [n] \ B_2`.
pub fn lv_tutte_equivariant_via_cones(m1: &Matroid, m2: &Matroid) -> Result<EquivariantPolynomial> {
    let fm = FlagMatroid::new(vec![m1.clone(), m2.clone()]).map_err(|e| match e {
        Error::NotAQuotientChain { .. } => Error::NotAQuotient,
        other => other,
    })?;
    let n = fm.n();
    let (r1, r2) = (m1.rank() as u32, m2.rank() as u32);
    let g = localization_sum(&fm, |b| {
        let (b1, b2) = (b.chain[0], b.chain[1]);
        let mut out = Vec::new();
        for p in b1.subsets() {
            for m in b2.difference(b1).subsets() {
                for q in b2.complement(n).subsets() {
                    let off = p.union(m).union(q).indicator(n);
                    out.push((off, [r1 - p.len() as u32, q.len() as u32, r2 - r1 - m.len() as u32]));
                }
            }
        }
        out
    })?;
    g.expand()
}

/// Every `M_1` loop-free and `M_k` coloop-free, which forces the same on
/// every constituent.
fn check_loopless_coloopless(fm: &FlagMatroid) -> Result<()> {
    if !fm.first().loops().is_empty() || !fm.last().coloops().is_empty() {
        return Err(Error::HasLoopOrColoop);
    }
    Ok(())
}

/// `φ(u, v) = Σ_B Hilb(Cone_B) Σ t^{-e_p + e_q} u^{|p|} v^{|q|}` at `t = 1`,
/// with `p ⊆ B_k`, `q ⊆ [n] \ B_1`.
pub fn h_phi(fm: &FlagMatroid) -> Result<AuxPolynomial> {
    check_loopless_coloopless(fm)?;
    let n = fm.n();
    let g = localization_sum(fm, |b| {
        let (first, last) = (b.chain[0], b.chain[b.chain.len() - 1]);
        twisted_numerators(n, last, first.complement(n))
    })?;
    Ok(g.evaluate_t1()?.with_vars(&[Var::U, Var::V]))
}

fn twisted_numerators(n: usize, p_from: Subset, q_from: Subset) -> Numerators {
    let mut out = Vec::new();
    for p in p_from.subsets() {
        for q in q_from.subsets() {
            let mut off = q.indicator(n);
            for i in p.iter() {
                off[i] -= 1;
            }
            out.push((off, [p.len() as u32, q.len() as u32, 0]));
        }
    }
    out
}

/// `h(s)` with `φ(u, v) = h(1 - s)` evaluated at `uv = 1 - s`.
pub fn h_polynomial(fm: &FlagMatroid) -> Result<AuxPolynomial> {
    let phi = h_phi(fm)?;
    if !phi.is_diagonal_in(Var::U, Var::V) {
        return Err(Error::NotInUV);
    }
    let one_minus_s = &AuxPolynomial::one() - &AuxPolynomial::var(Var::S);
    let mut out = AuxPolynomial::zero();
    for (e, c) in phi.terms() {
        out = &out + &one_minus_s.pow(e[Var::U.index()]).scale(c);
    }
    Ok(out.with_vars(&[Var::S]))
}

/// The same sum with `p ⊆ B_1` and `q ⊆ [n] \ B_k`, and whether it lies in `Q[uv]`.
pub fn h_candidate_lv(fm: &FlagMatroid) -> Result<(AuxPolynomial, bool)> {
    check_loopless_coloopless(fm)?;
    let n = fm.n();
    let g = localization_sum(fm, |b| {
        let (first, last) = (b.chain[0], b.chain[b.chain.len() - 1]);
        twisted_numerators(n, first, last.complement(n))
    })?;
    let phi = g.evaluate_t1()?.with_vars(&[Var::U, Var::V]);
    let in_uv = phi.is_diagonal_in(Var::U, Var::V);
    Ok((phi, in_uv))
}

/// `(-1)^{r-1} χ'(1)`.
pub fn beta_invariant(m: &Matroid) -> Result<BigRational> {
    let chi = characteristic_polynomial(m)?;
    let d = chi.derivative(Var::Q).evaluate_all(&[(Var::Q, 1)]).expect("univariate in q");
    // (-1)^{r-1} = -(-1)^r
    Ok(d * BigRational::from_integer((-sign(m.rank())).into()))
}

/// `β(q) = (-1)^{r2 - r1} LVT(0, 0, -q)`.
pub fn beta_polynomial_unreduced(m1: &Matroid, m2: &Matroid) -> Result<AuxPolynomial> {
    let lvt = lv_tutte(m1, m2)?;
    let minus_q = AuxPolynomial::var(Var::Q).scale_int(-1);
    Ok(lvt
        .substitute(&[(Var::X, AuxPolynomial::zero()), (Var::Y, AuxPolynomial::zero()), (Var::Z, minus_q)])
        .scale_int(sign(m2.rank() - m1.rank()))
        .with_vars(&[Var::Q]))
}

/// `(β(q), β(q) / (q - 1))`.
pub fn beta_polynomial(m1: &Matroid, m2: &Matroid) -> Result<(AuxPolynomial, AuxPolynomial)> {
    let beta = beta_polynomial_unreduced(m1, m2)?;
    if m1.rank() == m2.rank() {
        return Err(Error::RankGapZero);
    }
    let reduced = beta.div_linear(Var::Q, 1)?.with_vars(&[Var::Q]);
    Ok((beta, reduced))
}

/// `Σ_{i<d} (-1)^{d-1-i} (β(M^(i)) + β(M^(i+1))) q^i` over the Higgs factorization.
pub fn reduced_beta_via_higgs(m1: &Matroid, m2: &Matroid) -> Result<AuxPolynomial> {
    check_quotient(m1, m2)?;
    if m1.rank() == m2.rank() {
        return Err(Error::RankGapZero);
    }
    let layers = higgs_factorization(m1, m2)?;
    let betas = layers.iter().map(beta_invariant).collect::<Result<Vec<_>>>()?;
    let d = layers.len() - 1;
    let mut out = AuxPolynomial::zero().with_vars(&[Var::Q]);
    for i in 0..d {
        let c = (&betas[i] + &betas[i + 1]) * BigRational::from_integer(sign(d - 1 - i).into());
        let mut e = [0u32; crate::poly::NVARS];
        e[Var::Q.index()] = i as u32;
        out.add_term(e, &c);
    }
    Ok(out)
}

/// `(-1)^{r2} LVT(1 - q, 0, -s)`.
pub fn poincare(m1: &Matroid, m2: &Matroid) -> Result<AuxPolynomial> {
    let lvt = lv_tutte(m1, m2)?;
    let one_minus_q = &AuxPolynomial::one() - &AuxPolynomial::var(Var::Q);
    let minus_s = AuxPolynomial::var(Var::S).scale_int(-1);
    Ok(lvt
        .substitute(&[(Var::X, one_minus_q), (Var::Y, AuxPolynomial::zero()), (Var::Z, minus_s)])
        .scale_int(sign(m2.rank()))
        .with_vars(&[Var::Q, Var::S]))
}

/// `(-1)^{r_k} KT(1 - q, 0)`.
pub fn k_char(fm: &FlagMatroid) -> Result<AuxPolynomial> {
    let uv = kt_uv(fm)?;
    // x = 1 - q, y = 0 means u = -q, v = -1
    let minus_q = AuxPolynomial::var(Var::Q).scale_int(-1);
    Ok(uv
        .substitute(&[(Var::U, minus_q), (Var::V, AuxPolynomial::from_int(-1))])
        .scale_int(sign(fm.last().rank()))
        .with_vars(&[Var::Q]))
}

/// Invariant names understood by [`compute`].
pub const INVARIANTS: &[&str] =
    &["tutte", "lvt", "kt", "h", "h-lv", "beta", "beta-poly", "beta-higgs", "poincare", "kchar", "chi"];

/// A computed invariant with its provenance.
#[derive(Clone, Debug)]
pub struct InvariantResult {
    pub invariant: String,
    pub polynomial: AuxPolynomial,
    pub equivariant: Option<EquivariantPolynomial>,
    pub input_hash: u64,
    pub elapsed: Duration,
}

/// Stable hash of the flag matroid's basis lists.
pub fn input_hash(fm: &FlagMatroid) -> u64 {
    let mut h = DefaultHasher::new();
    fm.hash(&mut h);
    h.finish()
}

fn single(fm: &FlagMatroid) -> Result<&Matroid> {
    match fm.constituents() {
        [m] => Ok(m),
        _ => Err(Error::Malformed(format!("expected a single matroid, got {} constituents", fm.len()))),
    }
}

fn pair(fm: &FlagMatroid) -> Result<(&Matroid, &Matroid)> {
    match fm.constituents() {
        [m] => Ok((m, m)),
        [m1, m2] => Ok((m1, m2)),
        _ => Err(Error::Malformed(format!("expected a matroid quotient, got {} constituents", fm.len()))),
    }
}

/// Computes a named invariant. `equivariant` additionally returns the
/// torus-equivariant refinement where one exists (`kt`, `lvt`).
pub fn compute(name: &str, fm: &FlagMatroid, equivariant: bool) -> Result<InvariantResult> {
    let start = Instant::now();
    let mut eq = None;
    let polynomial = match name {
        "tutte" => tutte(single(fm)?)?,
        "chi" => characteristic_polynomial(single(fm)?)?,
        "lvt" => {
            let (m1, m2) = pair(fm)?;
            if equivariant {
                eq = Some(lv_tutte_equivariant(m1, m2)?);
            }
            lv_tutte(m1, m2)?
        }
        "kt" => {
            if equivariant {
                let e = kt_equivariant(fm)?;
                let p = uv_to_xy(&e.at_t_one());
                eq = Some(e);
                p
            } else {
                kt(fm)?
            }
        }
        "h" => h_polynomial(fm)?,
        "h-lv" => h_candidate_lv(fm)?.0,
        "beta" => AuxPolynomial::constant(beta_invariant(single(fm)?)?),
        "beta-poly" => {
            let (m1, m2) = pair(fm)?;
            beta_polynomial_unreduced(m1, m2)?
        }
        "beta-higgs" => {
            let (m1, m2) = pair(fm)?;
            reduced_beta_via_higgs(m1, m2)?
        }
        "poincare" => {
            let (m1, m2) = pair(fm)?;
            poincare(m1, m2)?
        }
        "kchar" => k_char(fm)?,
        other => return Err(Error::UnknownInvariant(other.to_string())),
    };
    Ok(InvariantResult {
        invariant: name.to_string(),
        polynomial,
        equivariant: eq,
        input_hash: input_hash(fm),
        elapsed: start.elapsed(),
    })
}

/// Number of lattice points of the flag matroid polytope, by brute force
/// over the box `[0, k]^n` on the hyperplane `Σ w = Σ r_i`.
pub fn lattice_point_count(fm: &FlagMatroid) -> u64 {
    let n = fm.n();
    let k = fm.len() as i64;
    let total: i64 = fm.ranks().iter().map(|&r| r as i64).sum();
    let mut count = 0;
    let mut w = vec![0i64; n];
    loop {
        if w.iter().sum::<i64>() == total && fm.polytope_membership(&w) {
            count += 1;
        }
        let mut i = 0;
        while i < n && w[i] == k {
            w[i] = 0;
            i += 1;
        }
        if i == n {
            return count;
        }
        w[i] += 1;
    }
}

/// `(size, count)` pairs of a family of subsets, by increasing size.
pub fn size_profile(sets: &[Subset]) -> Vec<(usize, usize)> {
    let mut counts: std::collections::BTreeMap<usize, usize> = Default::default();
    for s in sets {
        *counts.entry(s.len()).or_default() += 1;
    }
    counts.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn u(r: usize, n: usize) -> Matroid {
        Matroid::uniform(r, n).unwrap()
    }

    fn p(s: &str) -> AuxPolynomial {
        AuxPolynomial::parse(s).unwrap()
    }

    fn flag(ms: &[(usize, usize)]) -> FlagMatroid {
        FlagMatroid::new(ms.iter().map(|&(r, n)| u(r, n)).collect()).unwrap()
    }

    #[test]
    fn tutte_small_uniforms() {
        assert_eq!(tutte(&u(1, 2)).unwrap(), p("x + y"));
        assert_eq!(tutte(&u(2, 3)).unwrap(), p("x^2 + x + y"));
        let t = tutte(&u(2, 5)).unwrap();
        assert_eq!(t.evaluate_all(&[(Var::X, 2), (Var::Y, 2)]).unwrap(), BigRational::from_integer(32.into()));
    }

    #[test]
    fn lv_tutte_examples() {
        let lvt = lv_tutte(&u(1, 3), &u(2, 3)).unwrap();
        assert_eq!(lvt, p("x*z + 2*z + y + 2"));
        assert_eq!(lvt.to_string(), "x*z + y + 2*z + 2");
        assert_eq!(lv_tutte(&u(2, 3), &u(2, 3)).unwrap(), tutte(&u(2, 3)).unwrap());
        let shifted = tutte(&u(1, 3)).unwrap().substitute(&[(Var::X, p("z + 1"))]);
        assert_eq!(lv_tutte(&u(0, 3), &u(1, 3)).unwrap(), shifted);
        assert_eq!(lv_tutte(&u(2, 3), &u(1, 3)), Err(Error::NotAQuotient));
    }

    #[test]
    fn lv_tutte_equivariant_examples() {
        let e = lv_tutte_equivariant(&u(1, 1), &u(1, 1)).unwrap();
        assert_eq!(e.get(&[0]), p("u"));
        assert_eq!(e.get(&[1]), p("1"));
        let e = lv_tutte_equivariant(&u(1, 3), &u(2, 3)).unwrap();
        assert_eq!(e.get(&[1, 1, 0]), p("1"));
        let flat = e.at_t_one().substitute(&[(Var::U, p("x - 1")), (Var::V, p("y - 1")), (Var::W, p("z"))]);
        assert_eq!(flat, lv_tutte(&u(1, 3), &u(2, 3)).unwrap());
        assert_eq!(lv_tutte_equivariant_via_cones(&u(1, 3), &u(2, 3)).unwrap(), e);
    }

    #[test]
    fn kt_examples() {
        assert_eq!(kt(&flag(&[(1, 3), (2, 3)])).unwrap(), p("x^2*y^2 + x^2*y + x*y^2 + x^2 + 2*x*y + y^2"));
        assert_eq!(kt(&flag(&[(1, 3), (2, 3)])).unwrap().to_string(), "x^2*y^2 + x^2*y + x*y^2 + x^2 + 2*x*y + y^2");
        assert_eq!(kt(&flag(&[(0, 2), (1, 2)])).unwrap(), p("x*y^2 + y^2"));
        assert_eq!(kt(&flag(&[(1, 2), (1, 2)])).unwrap(), p("x*y + x + y"));
        assert_eq!(kt(&flag(&[(1, 2), (2, 2)])).unwrap(), p("x^2*y + x^2"));
        assert_eq!(kt(&flag(&[(0, 3), (1, 3)])).unwrap(), p("x*y^3 + 2*y^3"));
        assert_eq!(kt(&flag(&[(1, 2)])).unwrap(), p("x + y"));
    }

    #[test]
    fn kt_equivariant_agrees_with_kt() {
        let fm = flag(&[(1, 3), (2, 3)]);
        let e = kt_equivariant(&fm).unwrap();
        assert_eq!(uv_to_xy(&e.at_t_one()), kt(&fm).unwrap());
        let single = kt_equivariant(&flag(&[(1, 2)])).unwrap();
        let mut expect = EquivariantPolynomial::zero(2);
        expect.add_term(LatticeVector(vec![0, 0]), &p("u"));
        expect.add_term(LatticeVector(vec![1, 0]), &p("1"));
        expect.add_term(LatticeVector(vec![0, 1]), &p("1"));
        expect.add_term(LatticeVector(vec![1, 1]), &p("v"));
        assert_eq!(single, expect);
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_polynomial(&flag(&[(1, 2)])).unwrap(), p("s"));
        assert_eq!(h_phi(&flag(&[(1, 2)])).unwrap(), p("1 - u*v"));
        assert_eq!(h_polynomial(&flag(&[(0, 2), (1, 2)])), Err(Error::HasLoopOrColoop));
        assert_eq!(h_polynomial(&flag(&[(1, 3), (2, 3)])).unwrap(), p("s^2"));
        assert_eq!(h_polynomial(&flag(&[(2, 4), (3, 4)])).unwrap(), p("s^2"));
        // the literal S_1 / Q_k construction stays diagonal on this input
        let (lv, in_uv) = h_candidate_lv(&flag(&[(2, 4), (3, 4)])).unwrap();
        assert_eq!(lv, p("2*u*v + 1"));
        assert!(in_uv);
        let (lv, in_uv) = h_candidate_lv(&flag(&[(1, 2)])).unwrap();
        assert!(in_uv);
        assert_eq!(lv, h_phi(&flag(&[(1, 2)])).unwrap());
    }

    #[test]
    fn beta_examples() {
        let one = BigRational::one();
        assert_eq!(beta_invariant(&u(1, 2)).unwrap(), one);
        assert_eq!(beta_invariant(&u(2, 3)).unwrap(), one);
        let with_loop = Matroid::from_bases(2, 1, [Subset::singleton(0)]).unwrap();
        assert!(beta_invariant(&with_loop).unwrap().is_zero());
        let (b, r) = beta_polynomial(&u(1, 3), &u(2, 3)).unwrap();
        assert_eq!(b, p("2*q - 2"));
        assert_eq!(r, p("2"));
        assert_eq!(reduced_beta_via_higgs(&u(1, 3), &u(2, 3)).unwrap(), p("2"));
        assert_eq!(
            beta_polynomial_unreduced(&u(0, 3), &u(2, 3)).unwrap(),
            characteristic_polynomial(&u(2, 3)).unwrap()
        );
        assert_eq!(beta_polynomial(&u(2, 3), &u(2, 3)), Err(Error::RankGapZero));
        assert_eq!(reduced_beta_via_higgs(&u(2, 3), &u(2, 3)), Err(Error::RankGapZero));
        let (_, r) = beta_polynomial(&u(1, 4), &u(3, 4)).unwrap();
        assert_eq!(r, reduced_beta_via_higgs(&u(1, 4), &u(3, 4)).unwrap());
    }

    #[test]
    fn poincare_and_kchar() {
        assert_eq!(poincare(&u(1, 3), &u(2, 3)).unwrap(), p("q*s - 3*s + 2"));
        assert_eq!(poincare(&u(2, 3), &u(2, 3)).unwrap(), characteristic_polynomial(&u(2, 3)).unwrap());
        assert_eq!(k_char(&flag(&[(1, 3), (2, 3)])).unwrap(), p("q^2 - 2*q + 1"));
        assert_eq!(k_char(&flag(&[(2, 3)])).unwrap(), characteristic_polynomial(&u(2, 3)).unwrap());
        assert!(k_char(&flag(&[(0, 2), (1, 2)])).unwrap().is_zero());
    }

    #[test]
    fn lattice_points_of_hexagon() {
        assert_eq!(lattice_point_count(&flag(&[(1, 3), (2, 3)])), 7);
        let k = kt(&flag(&[(1, 3), (2, 3)])).unwrap();
        assert_eq!(k.evaluate_all(&[(Var::X, 1), (Var::Y, 1)]).unwrap(), BigRational::from_integer(7.into()));
    }

    #[test]
    fn compute_dispatch() {
        let fm = flag(&[(1, 3), (2, 3)]);
        let r = compute("kt", &fm, true).unwrap();
        assert_eq!(r.polynomial, kt(&fm).unwrap());
        assert!(r.equivariant.is_some());
        assert_eq!(compute("nope", &fm, false).unwrap_err(), Error::UnknownInvariant("nope".into()));
        assert!(compute("tutte", &fm, false).is_err());
    }
}
