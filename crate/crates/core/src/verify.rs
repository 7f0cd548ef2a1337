//! Identity checks over single inputs and over the deterministic corpus.
//!
//! Every check compares two independently computed exact values. A failed
//! comparison is reported in the [`IdentityReport`]; errors are reserved for
//! inputs an identity does not apply to.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::cone::{tangent_cone_generators, triangulate_half_open, LatticeVector};
use crate::corpus;
use crate::equivariant::EquivariantPolynomial;
use crate::error::{Error, Result};
use crate::flag::{pseudo_bases, FlagMatroid};
use crate::genfun::GenFun;
use crate::invariants::{
    beta_polynomial, beta_polynomial_unreduced, characteristic_polynomial, h_candidate_lv, h_phi, h_polynomial, k_char,
    kt, kt_equivariant, kt_uv, lattice_point_count, lv_tutte, lv_tutte_equivariant, lv_tutte_equivariant_via_cones,
    reduced_beta_via_higgs, tutte,
};
use crate::io::{flag_to_json, Diagram, Document, Input};
use crate::matroid::Matroid;
use crate::poly::{AuxPolynomial, Exponents, Var, NVARS};
use crate::subset::Subset;

/// Identity names understood by [`run_identity`].
pub const IDENTITIES: &[&str] = &[
    "delcont",
    "kt22",
    "lvt-special",
    "lvt-delcont",
    "duality",
    "direct-sum",
    "divisibility",
    "latticepoints",
    "coefficients",
    "h-uv",
    "beta-higgs",
    "kchi-conjecture",
    "brion-example",
];

/// Outcome of one comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub instance: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(instance: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { instance: instance.into(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    /// Observations only: failures are reported but do not falsify.
    pub observational: bool,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl IdentityReport {
    fn new(identity: &str, checks: Vec<Check>) -> Self {
        IdentityReport { identity: identity.to_string(), observational: false, checks, elapsed: Duration::ZERO }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn passed(&self) -> bool {
        self.observational || self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// One line per check, then a summary line.
impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = match (c.passed, self.observational) {
                (true, _) => "PASS",
                (false, false) => "FAIL",
                (false, true) => "VIOLATED",
            };
            writeln!(f, "{tag} {} {}", c.instance, c.detail)?;
        }
        let failed = self.failures().count();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {} checks, {failed} failed", self.identity, self.checks.len())
    }
}

/// Memoized equivariant flag-geometric Tutte polynomials.
#[derive(Default)]
pub struct KtMemo {
    table: Mutex<HashMap<FlagMatroid, EquivariantPolynomial>>,
}

impl KtMemo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, fm: &FlagMatroid) -> Result<EquivariantPolynomial> {
        if let Some(p) = self.table.lock().expect("memo lock").get(fm) {
            return Ok(p.clone());
        }
        let p = kt_equivariant(fm)?;
        self.table.lock().expect("memo lock").insert(fm.clone(), p.clone());
        Ok(p)
    }
}

fn label(fm: &FlagMatroid) -> String {
    flag_to_json(fm).to_string()
}

fn quotient_flag(m1: &Matroid, m2: &Matroid) -> Result<FlagMatroid> {
    FlagMatroid::new(vec![m1.clone(), m2.clone()])
}

fn var(v: Var) -> AuxPolynomial {
    AuxPolynomial::var(v)
}

fn power(v: Var, k: u32) -> Exponents {
    let mut e = [0; NVARS];
    e[v.index()] = k;
    e
}

/// `Π (1 + t_i q)` as an equivariant polynomial with coefficients in `q`.
fn product_one_plus_tq(n: usize, q: &AuxPolynomial) -> EquivariantPolynomial {
    let mut out = EquivariantPolynomial::monomial(LatticeVector::zero(n), AuxPolynomial::one());
    for i in 0..n {
        let factor = &EquivariantPolynomial::monomial(LatticeVector::zero(n), AuxPolynomial::one())
            + &EquivariantPolynomial::monomial(LatticeVector::unit(n, i), q.clone());
        out = &out * &factor;
    }
    out
}

fn embed_minor(
    p: &EquivariantPolynomial,
    n: usize,
    relabel: &[usize],
    t_e: usize,
    power: i64,
) -> EquivariantPolynomial {
    let mut w = LatticeVector::zero(n);
    w.0[t_e] = power;
    p.embed(n, relabel).shift(&w)
}

/// `KT^T(1 + q^{-1}, 1 + q) = q^{-(r_1 + r_2)} Π(1 + t_i q) Σ_{S ∈ pB} t^{e_S} q^{|S|}`
/// for a two-step flag, with its specializations at `t = 1`, at `q = 1`, and
/// `KT(2, 2) = 2^n |pB|`.
///
/// A monomial `t^k u^a v^b` of `KT^T` has `Σk = r_1 + r_2 - a + b`, which
/// fixes the power of `q` in front.
pub fn verify_kt22(fm: &FlagMatroid, memo: &KtMemo) -> Result<Check> {
    let [m1, m2] = fm.constituents() else {
        return Err(Error::Malformed(format!("kt22 needs a two-step flag, got {} constituents", fm.len())));
    };
    let n = fm.n();
    let shift = (m1.rank() + m2.rank()) as i64;
    let pb = pseudo_bases(m1, m2)?;
    let eq = memo.get(fm)?;
    let q = var(Var::Q);

    // u = q^{-1}, v = q, cleared by q^{r1 + r2}
    let to_q = |c: &AuxPolynomial| {
        let mut out = AuxPolynomial::zero().with_vars(&[Var::Q]);
        for (e, coeff) in c.terms() {
            let k = shift - i64::from(e[Var::U.index()]) + i64::from(e[Var::V.index()]);
            out.add_term(power(Var::Q, k as u32), coeff);
        }
        out
    };
    let lhs = eq.map_coeffs(to_q);
    let mut sum_pb = EquivariantPolynomial::zero(n);
    for s in &pb {
        sum_pb.add_term(LatticeVector(s.indicator(n)), &AuxPolynomial::term(1, &[(Var::Q, s.len() as u32)]));
    }
    let rhs = &product_one_plus_tq(n, &q) * &sum_pb;
    let equivariant_ok = lhs == rhs;

    // t = 1 from the evaluation route
    let uv = kt_uv(fm)?;
    let lhs1 = to_q(&uv);
    let mut sizes = AuxPolynomial::zero();
    for s in &pb {
        sizes = &sizes + &AuxPolynomial::term(1, &[(Var::Q, s.len() as u32)]);
    }
    let rhs1 = &(&AuxPolynomial::one() + &q).pow(n as u32) * &sizes;
    let numeric_ok = lhs1 == rhs1;

    // q = 1: KT^T(2, 2) = Π(1 + t_i) Σ t^{e_S}
    let at_one = eq.map_coeffs(|c| c.evaluate(&[(Var::U, 1), (Var::V, 1)]));
    let rhs2 = (&product_one_plus_tq(n, &AuxPolynomial::one()) * &sum_pb).substitute(&[(Var::Q, AuxPolynomial::one())]);
    let torus_ok = at_one == rhs2;

    // x = y = 2 is u = v = 1
    let kt22 = uv.evaluate_all(&[(Var::U, 1), (Var::V, 1)]).expect("bivariate");
    let expected = BigRational::from_integer(BigInt::from(pb.len()) << n);
    let count_ok = kt22 == expected;

    let passed = equivariant_ok && numeric_ok && torus_ok && count_ok;
    let mut detail = format!("KT(2,2)={kt22}, |pB|={}", pb.len());
    if !passed {
        detail += &format!(
            " (equivariant {equivariant_ok}, t=1 {numeric_ok}, q=1 {torus_ok}, 2^n|pB| {count_ok}) {}",
            label(fm)
        );
    }
    Ok(Check::new(format!("n={n} ranks={:?}", fm.ranks()), passed, detail))
}

/// `KT^T` of the `ℓ` copies `(M, .., M)` against
/// `Σ_j t_e^j KT^T((M/e)^j, (M\e)^{ℓ-j})`, equivariantly and at `t = 1`.
pub fn verify_delcont_fold(m: &Matroid, e: usize, ell: usize, memo: &KtMemo) -> Result<Check> {
    if e >= m.n() {
        return Err(Error::Malformed(format!("element {} outside the ground set", e + 1)));
    }
    if m.is_loop(e) || m.is_coloop(e) {
        return Err(Error::LoopOrColoop(e));
    }
    if ell == 0 {
        return Err(Error::Malformed("fold length must be positive".into()));
    }
    let n = m.n();
    let (con, relabel) = m.contract(e)?;
    let (del, relabel_del) = m.delete(e)?;
    debug_assert_eq!(relabel, relabel_del);
    let lhs = memo.get(&FlagMatroid::new(vec![m.clone(); ell])?)?;
    let mut rhs = EquivariantPolynomial::zero(n);
    let mut rhs_numeric = AuxPolynomial::zero();
    for j in 0..=ell {
        let mut chain = vec![con.clone(); j];
        chain.extend(std::iter::repeat_n(del.clone(), ell - j));
        let part = FlagMatroid::new(chain)?;
        rhs = &rhs + &embed_minor(&memo.get(&part)?, n, &relabel, e, j as i64);
        rhs_numeric = &rhs_numeric + &kt(&part)?;
    }
    let equivariant_ok = lhs == rhs;
    let numeric_ok = kt(&FlagMatroid::new(vec![m.clone(); ell])?)? == rhs_numeric;
    let passed = equivariant_ok && numeric_ok;
    let mut detail = format!("l={ell} e={}", e + 1);
    if !passed {
        detail +=
            &format!(" (equivariant {equivariant_ok}, t=1 {numeric_ok}) {}", label(&FlagMatroid::single(m.clone())));
    }
    Ok(Check::new(format!("n={n} r={}", m.rank()), passed, detail))
}

pub fn verify_delcont(m: &Matroid, e: usize, memo: &KtMemo) -> Result<Check> {
    verify_delcont_fold(m, e, 2, memo)
}

fn xyz_from_uvw(p: &AuxPolynomial) -> AuxPolynomial {
    p.substitute(&[
        (Var::U, &var(Var::X) - &AuxPolynomial::one()),
        (Var::V, &var(Var::Y) - &AuxPolynomial::one()),
        (Var::W, var(Var::Z)),
    ])
}

/// Consistency of the Las Vergnas polynomial with its closed equivariant
/// form, with the Tutte polynomial of each constituent and with the value
/// `2^n` at `(2, 2, 1)`. With `cones`, also compares the closed form with
/// the tangent-cone localization sum.
pub fn verify_lvt_special(m1: &Matroid, m2: &Matroid, cones: bool) -> Result<Check> {
    let n = m1.n();
    let lvt = lv_tutte(m1, m2)?;
    let closed = lv_tutte_equivariant(m1, m2)?;
    let closed_ok = xyz_from_uvw(&closed.at_t_one()) == lvt;
    let cones_ok = !cones || lv_tutte_equivariant_via_cones(m1, m2)? == closed;
    let value = lvt.evaluate_all(&[(Var::X, 2), (Var::Y, 2), (Var::Z, 1)]).expect("trivariate");
    let value_ok = value == BigRational::from_integer(BigInt::one() << n);
    let mut tutte_ok = true;
    let mut free_ok = true;
    for m in [m1, m2] {
        let t = tutte(m)?;
        let z = lv_tutte(m, m)?.substitute(&[(Var::Z, AuxPolynomial::zero())]);
        tutte_ok &= z == t;
        let from_free = lv_tutte(&Matroid::uniform(0, n)?, m)?;
        let shifted = t.substitute(&[(Var::X, &var(Var::Z) + &AuxPolynomial::one())]);
        free_ok &= from_free == shifted;
    }
    let passed = closed_ok && cones_ok && value_ok && tutte_ok && free_ok;
    let mut detail = format!("LVT(2,2,1)={value}");
    if !passed {
        detail += &format!(
            " (closed {closed_ok}, cones {cones_ok}, 2^n {value_ok}, (M,M) {tutte_ok}, (U0n,M) {free_ok}) {}",
            label(&quotient_flag(m1, m2)?)
        );
    }
    Ok(Check::new(format!("n={n} ranks=[{}, {}]", m1.rank(), m2.rank()), passed, detail))
}

/// `LVT(M1, M2) = LVT(M1 \ i, M2 \ i) + LVT(M1 / i, M2 / i)` for `i` neither
/// a loop nor a coloop of `M2`.
pub fn verify_lvt_delcont(m1: &Matroid, m2: &Matroid, i: usize) -> Result<Check> {
    if i >= m2.n() {
        return Err(Error::Malformed(format!("element {} outside the ground set", i + 1)));
    }
    if m2.is_loop(i) || m2.is_coloop(i) {
        return Err(Error::LoopOrColoop(i));
    }
    let lhs = lv_tutte(m1, m2)?;
    let del = lv_tutte(&m1.delete(i)?.0, &m2.delete(i)?.0)?;
    let con = lv_tutte(&m1.contract(i)?.0, &m2.contract(i)?.0)?;
    let passed = lhs == &del + &con;
    let detail = if passed { format!("i={}", i + 1) } else { format!("i={} {lhs} vs {del} + {con}", i + 1) };
    Ok(Check::new(format!("n={} ranks=[{}, {}]", m1.n(), m1.rank(), m2.rank()), passed, detail))
}

/// `kt(FM^∨)(x, y) = kt(FM)(y, x)` and
/// `t^{k e_[n]} KT^T_FM(t^{-1}; u <-> v) = KT^T_{FM^∨}`.
pub fn verify_duality(fm: &FlagMatroid, memo: &KtMemo) -> Result<Check> {
    let n = fm.n();
    let dual = fm.dual();
    let swapped = kt(fm)?.substitute(&[(Var::X, var(Var::Y)), (Var::Y, var(Var::X))]);
    let numeric_ok = swapped == kt(&dual)?;
    let shift = LatticeVector(vec![fm.len() as i64; n]);
    let lhs = memo.get(fm)?.invert_t().shift(&shift).substitute(&[(Var::U, var(Var::V)), (Var::V, var(Var::U))]);
    let equivariant_ok = lhs == memo.get(&dual)?;
    let passed = numeric_ok && equivariant_ok;
    let detail =
        if passed { String::new() } else { format!("(t=1 {numeric_ok}, equivariant {equivariant_ok}) {}", label(fm)) };
    Ok(Check::new(format!("n={n} ranks={:?}", fm.ranks()), passed, detail))
}

/// Constituentwise direct sum of two flags of equal length.
pub fn flag_direct_sum(a: &FlagMatroid, b: &FlagMatroid) -> Result<FlagMatroid> {
    if a.len() != b.len() {
        return Err(Error::Malformed(format!("flags of lengths {} and {} cannot be summed", a.len(), b.len())));
    }
    let chain =
        a.constituents().iter().zip(b.constituents()).map(|(x, y)| x.direct_sum(y)).collect::<Result<Vec<_>>>()?;
    FlagMatroid::new(chain)
}

/// `KT^T(FM1 ⊕ FM2) = KT^T(FM1) KT^T(FM2)` over the split torus.
pub fn verify_direct_sum(a: &FlagMatroid, b: &FlagMatroid, memo: &KtMemo) -> Result<Check> {
    let sum = flag_direct_sum(a, b)?;
    let n = sum.n();
    let left: Vec<usize> = (0..a.n()).collect();
    let right: Vec<usize> = (a.n()..n).collect();
    let product = &memo.get(a)?.embed(n, &left) * &memo.get(b)?.embed(n, &right);
    let equivariant_ok = memo.get(&sum)? == product;
    let numeric_ok = kt(&sum)? == &kt(a)? * &kt(b)?;
    let passed = equivariant_ok && numeric_ok;
    let detail = if passed {
        String::new()
    } else {
        format!("(equivariant {equivariant_ok}, t=1 {numeric_ok}) {} + {}", label(a), label(b))
    };
    Ok(Check::new(format!("n={}+{} ranks={:?}+{:?}", a.n(), b.n(), a.ranks(), b.ranks()), passed, detail))
}

/// `x^c y^l` divides `kt` with `l` the loops of `M_1` and `c` the coloops of `M_k`.
pub fn verify_divisibility(fm: &FlagMatroid) -> Result<Check> {
    let l = fm.first().loops().len() as u32;
    let c = fm.last().coloops().len() as u32;
    let p = kt(fm)?;
    let passed = p.terms().all(|(e, _)| e[Var::X.index()] >= c && e[Var::Y.index()] >= l);
    let detail = if passed { format!("x^{c} y^{l}") } else { format!("x^{c} y^{l} does not divide {p} {}", label(fm)) };
    Ok(Check::new(format!("n={} ranks={:?}", fm.n(), fm.ranks()), passed, detail))
}

/// `kt(1, 1)` against a direct count of lattice points of the polytope.
pub fn verify_latticepoints(fm: &FlagMatroid) -> Result<Check> {
    let value = kt(fm)?.evaluate_all(&[(Var::X, 1), (Var::Y, 1)]).expect("bivariate");
    let count = lattice_point_count(fm);
    let passed = value == BigRational::from_integer(count.into());
    let detail =
        if passed { format!("{count} points") } else { format!("kt(1,1)={value} vs {count} points {}", label(fm)) };
    Ok(Check::new(format!("n={} ranks={:?}", fm.n(), fm.ranks()), passed, detail))
}

/// The coefficient rule for two-step flags: every monomial `t^k u^{r2-i} v^j`
/// of `KT^T` has `Σk = r1 + i + j`, and when `k` has at most `|r1 + j - i|`
/// entries equal to 1 its coefficient is 1 exactly when there are `|r1 + j - i|`
/// of them, the one of `S1 ⊆ S2` (with `k = e_{S1} + e_{S2}`) of size `i` is
/// independent in `M2` and the one of size `r1 + j` spans `M1`.
pub fn verify_coefficients(fm: &FlagMatroid, memo: &KtMemo) -> Result<Check> {
    let [m1, m2] = fm.constituents() else {
        return Err(Error::Malformed(format!("coefficient rule needs a two-step flag, got {} constituents", fm.len())));
    };
    let n = fm.n();
    let (r1, r2) = (m1.rank() as i64, m2.rank() as i64);
    let eq = memo.get(fm)?;
    let mut bad = Vec::new();
    for (k, c) in eq.terms() {
        for (e, _) in c.terms() {
            let i = r2 - i64::from(e[Var::U.index()]);
            let j = i64::from(e[Var::V.index()]);
            if k.sum() != r1 + i + j {
                bad.push(format!("degree of t^{:?} u^{} v^{j}", k.0, r2 - i));
            }
        }
    }
    for i in 0..=r2 {
        for j in 0..=(n as i64 - r1) {
            let gap = (r1 + j - i).unsigned_abs() as usize;
            let mono = power_uv(r2 - i, j);
            let mut k = vec![0i64; n];
            loop {
                let ones = k.iter().filter(|&&x| x == 1).count();
                if k.iter().sum::<i64>() == r1 + i + j && ones <= gap {
                    let s1 = Subset::from_elems((0..n).filter(|&l| k[l] == 2));
                    let s2 = Subset::from_elems((0..n).filter(|&l| k[l] >= 1));
                    // p has size i, e_{B_1} + e_q has size r1 + j
                    let (p_set, q_set) = if i <= r1 + j { (s1, s2) } else { (s2, s1) };
                    let expected = i64::from(ones == gap && m1.is_spanning(q_set) && m2.is_independent(p_set));
                    let got = eq.get(&k).coeff(&mono);
                    if got != BigRational::from_integer(expected.into()) {
                        bad.push(format!("t^{k:?} u^{} v^{j}: {got} vs {expected}", r2 - i));
                    }
                }
                if !next_digit_vector(&mut k, 2) {
                    break;
                }
            }
        }
    }
    // support outside {0,1,2}^n must not fall under the rule
    for (k, c) in eq.terms() {
        if k.0.iter().any(|&x| !(0..=2).contains(&x)) {
            for (e, _) in c.terms() {
                let i = r2 - i64::from(e[Var::U.index()]);
                let j = i64::from(e[Var::V.index()]);
                let ones = k.0.iter().filter(|&&x| x == 1).count();
                if ones <= (r1 + j - i).unsigned_abs() as usize {
                    bad.push(format!("t^{:?} outside the 0/1/2 range", k.0));
                }
            }
        }
    }
    let passed = bad.is_empty();
    let detail = if passed { format!("{} monomials", eq.len()) } else { format!("{} {}", bad.join("; "), label(fm)) };
    Ok(Check::new(format!("n={n} ranks=[{r1}, {r2}]"), passed, detail))
}

fn power_uv(a: i64, b: i64) -> Exponents {
    let mut e = [0; NVARS];
    e[Var::U.index()] = a as u32;
    e[Var::V.index()] = b as u32;
    e
}

/// Advances `k` through `{0, .., max}^n` in little-endian order.
fn next_digit_vector(k: &mut [i64], max: i64) -> bool {
    for x in k.iter_mut() {
        if *x < max {
            *x += 1;
            return true;
        }
        *x = 0;
    }
    false
}

/// `φ` lies in `Q[uv]` for the flag push-pull; with the Las Vergnas diagram
/// the check passes when the sum is detected outside `Q[uv]`.
pub fn verify_h_uv(fm: &FlagMatroid, diagram: Diagram) -> Result<Check> {
    let instance = format!("n={} ranks={:?}", fm.n(), fm.ranks());
    match diagram {
        Diagram::Flag => {
            let phi = h_phi(fm)?;
            let passed = phi.is_diagonal_in(Var::U, Var::V);
            let detail =
                if passed { format!("h = {}", h_polynomial(fm)?) } else { format!("phi = {phi} {}", label(fm)) };
            Ok(Check::new(instance, passed, detail))
        }
        Diagram::LasVergnas => {
            let (phi, in_uv) = h_candidate_lv(fm)?;
            let detail = format!("phi = {phi}, in Q[uv]: {in_uv}");
            Ok(Check::new(instance + " lv-diagram", !in_uv, detail))
        }
    }
}

/// `β̄` from the Las Vergnas polynomial against the Higgs-layer formula.
pub fn verify_beta_higgs(m1: &Matroid, m2: &Matroid) -> Result<Check> {
    let (_, reduced) = beta_polynomial(m1, m2)?;
    let higgs = reduced_beta_via_higgs(m1, m2)?;
    let passed = reduced == higgs;
    let detail =
        if passed { format!("{reduced}") } else { format!("{reduced} vs {higgs} {}", label(&quotient_flag(m1, m2)?)) };
    Ok(Check::new(format!("n={} ranks=[{}, {}]", m1.n(), m1.rank(), m2.rank()), passed, detail))
}

/// `β_{(U_{0,n}, M)} = χ_M`.
pub fn verify_beta_chi(m: &Matroid) -> Result<Check> {
    let beta = beta_polynomial_unreduced(&Matroid::uniform(0, m.n())?, m)?;
    let chi = characteristic_polynomial(m)?;
    let passed = beta == chi;
    let detail =
        if passed { format!("{chi}") } else { format!("{beta} vs {chi} {}", label(&FlagMatroid::single(m.clone()))) };
    Ok(Check::new(format!("(U0n, M) n={} r={}", m.n(), m.rank()), passed, detail))
}

/// Observation `k_char((U_{1,n}, M)) = (q - 1)^r` for loopless `M` of rank `r >= 1`.
pub fn observe_kchi(m: &Matroid) -> Result<Check> {
    if !m.loops().is_empty() || m.rank() == 0 {
        return Err(Error::Malformed("kchi observation needs a loopless matroid of positive rank".into()));
    }
    let fm = FlagMatroid::new(vec![Matroid::uniform(1, m.n())?, m.clone()])?;
    let got = k_char(&fm)?;
    let expected = (&var(Var::Q) - &AuxPolynomial::one()).pow(m.rank() as u32);
    let passed = got == expected;
    let detail = if passed { format!("{got}") } else { format!("{got} vs {expected} {}", label(&fm)) };
    Ok(Check::new(format!("(U1n, M) n={} r={}", m.n(), m.rank()), passed, detail))
}

/// Vertex cones of `Q(U_{1,3}, U_{2,3})` placed at the apex monomials of the
/// localization sum, as one generating function.
pub fn brion_example() -> GenFun {
    let fm = FlagMatroid::new(vec![Matroid::uniform(1, 3).expect("valid"), Matroid::uniform(2, 3).expect("valid")])
        .expect("quotient");
    let placed = [
        ([2, 1, 0], [1, 1, 0]),
        ([2, 0, 1], [1, 0, 1]),
        ([1, 2, 0], [0, 2, 0]),
        ([1, 0, 2], [0, 0, 2]),
        ([0, 2, 1], [0, 2, 0]),
        ([0, 1, 2], [0, 0, 2]),
    ];
    let bases = fm.flag_bases();
    let mut g = GenFun::new(3);
    for (vertex, apex) in placed {
        let b = bases.iter().find(|b| b.vertex(3) == vertex).expect("vertex of the hexagon");
        let gens = tangent_cone_generators(&fm, b).expect("flag basis");
        for cell in triangulate_half_open(&LatticeVector(apex.to_vec()), &gens).expect("unimodular cone") {
            g.push_term(AuxPolynomial::one(), cell).expect("dimension 3");
        }
    }
    g
}

fn t_sum(n: usize, exps: &[[i64; 3]]) -> EquivariantPolynomial {
    let mut out = EquivariantPolynomial::zero(n);
    for w in exps {
        out.add_term(LatticeVector(w.to_vec()), &AuxPolynomial::one());
    }
    out
}

/// The worked hexagon example: its sum, its `e_1 = 0` slice and two vertex
/// coefficients.
pub fn verify_brion_example() -> Result<Vec<Check>> {
    let g = brion_example();
    let sum = g.expand()?;
    let expected = t_sum(3, &[[1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]]);
    let zeta = [BigRational::one(), BigRational::from_integer(0.into()), BigRational::from_integer(0.into())];
    let slice = g.slice(&zeta, &BigRational::from_integer(0.into()))?.expand()?;
    let expected_slice = t_sum(3, &[[0, 2, 0], [0, 1, 1], [0, 0, 2]]);
    let c200 = g.coefficient_at(&LatticeVector(vec![2, 0, 0]))?;
    let c020 = g.coefficient_at(&LatticeVector(vec![0, 2, 0]))?;
    Ok(vec![
        Check::new("sum", sum == expected, render_t(&sum)),
        Check::new("slice e1=0", slice == expected_slice, render_t(&slice)),
        Check::new("coefficient t1^2", c200.is_zero(), format!("{c200}")),
        Check::new("coefficient t2^2", c020 == AuxPolynomial::one(), format!("{c020}")),
    ])
}

/// `t_1t_2+t_1t_3+t_2^2+...` for polynomials with constant coefficients.
pub fn render_t(p: &EquivariantPolynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<(&LatticeVector, &AuxPolynomial)> = p.terms().collect();
    // descending lex on exponents, so t1 powers come first
    terms.sort_by(|a, b| b.0.cmp(a.0));
    let mut out = String::new();
    for (k, (w, c)) in terms.into_iter().enumerate() {
        let mono: String =
            w.0.iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| if e == 1 { format!("t_{}", i + 1) } else { format!("t_{}^{e}", i + 1) })
                .collect();
        let coeff = if *c == AuxPolynomial::one() { String::new() } else { format!("({c})") };
        if k > 0 {
            out.push('+');
        }
        out += &coeff;
        out += if mono.is_empty() && coeff.is_empty() { "1" } else { &mono };
    }
    out
}

fn collect<T: Sync>(items: Vec<T>, f: impl Fn(&T) -> Result<Check> + Sync + Send) -> Result<Vec<Check>> {
    items.par_iter().map(f).collect()
}

fn indexed(mut checks: Vec<Check>) -> Vec<Check> {
    for (i, c) in checks.iter_mut().enumerate() {
        c.instance = format!("#{i} {}", c.instance);
    }
    checks
}

fn non_loop_coloop(m: &Matroid) -> Vec<usize> {
    (0..m.n()).filter(|&e| !m.is_loop(e) && !m.is_coloop(e)).collect()
}

fn loopless_coloopless(fm: &FlagMatroid) -> bool {
    fm.first().loops().is_empty() && fm.last().coloops().is_empty()
}

/// Deletion-contraction on every corpus matroid with `n <= max_n` and every
/// element that is neither a loop nor a coloop; the three-fold version on
/// `n <= fold_max_n`.
pub fn corpus_delcont(max_n: usize, fold_max_n: usize, seed: u64, memo: &KtMemo) -> Result<Vec<Check>> {
    let mut jobs = Vec::new();
    for m in corpus::matroids(max_n, seed) {
        for e in non_loop_coloop(&m) {
            jobs.push((m.clone(), e, 2));
            if m.n() <= fold_max_n {
                jobs.push((m.clone(), e, 3));
            }
        }
    }
    collect(jobs, |(m, e, ell)| verify_delcont_fold(m, *e, *ell, memo))
}

/// Two-step corpus quotients on at most `max_n` elements.
pub fn corpus_quotient_flags(max_n: usize, seed: u64) -> Vec<FlagMatroid> {
    corpus::quotients(max_n, seed)
        .into_iter()
        .map(|(a, b)| FlagMatroid::new(vec![a, b]).expect("corpus quotient"))
        .collect()
}

/// Pairs of corpus flags of equal length whose direct sum has at most
/// `max_n` elements.
pub fn corpus_direct_sum_pairs(max_n: usize, seed: u64) -> Vec<(FlagMatroid, FlagMatroid)> {
    let small = corpus::flags(max_n.saturating_sub(1).clamp(1, 3), seed);
    let mut out = Vec::new();
    for (i, a) in small.iter().enumerate() {
        // a fixed stride keeps the pair count moderate
        for b in small.iter().skip(i % 7).step_by(7) {
            if a.len() == b.len() && a.n() + b.n() <= max_n {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Runs one identity on `input`, or over the default corpus with `seed`
/// when no input is given.
pub fn run_identity(name: &str, input: Option<&Document>, seed: u64) -> Result<IdentityReport> {
    let start = Instant::now();
    let memo = KtMemo::new();
    let flag = input.map(|d| d.input.clone().into_flag());
    let quotient = |fm: &FlagMatroid| -> Result<(Matroid, Matroid)> {
        match fm.constituents() {
            [m] => Ok((m.clone(), m.clone())),
            [a, b] => Ok((a.clone(), b.clone())),
            _ => Err(Error::Malformed(format!("{name} needs a matroid quotient, got {} constituents", fm.len()))),
        }
    };
    let matroid = |fm: &FlagMatroid| -> Result<Matroid> {
        match fm.constituents() {
            [m] => Ok(m.clone()),
            _ => Err(Error::Malformed(format!("{name} needs a single matroid, got {} constituents", fm.len()))),
        }
    };
    let mut observational = false;
    let checks = match name {
        "delcont" => match &flag {
            Some(fm) => {
                let m = matroid(fm)?;
                let mut out = Vec::new();
                for e in non_loop_coloop(&m) {
                    out.push(verify_delcont(&m, e, &memo)?);
                    out.push(verify_delcont_fold(&m, e, 3, &memo)?);
                }
                out
            }
            None => indexed(corpus_delcont(6, 5, seed, &memo)?),
        },
        "kt22" => match &flag {
            Some(fm) => {
                let (a, b) = quotient(fm)?;
                vec![verify_kt22(&quotient_flag(&a, &b)?, &memo)?]
            }
            None => indexed(collect(corpus_quotient_flags(6, seed), |fm| verify_kt22(fm, &memo))?),
        },
        "lvt-special" => match &flag {
            Some(fm) => {
                let (a, b) = quotient(fm)?;
                vec![verify_lvt_special(&a, &b, true)?]
            }
            None => indexed(collect(corpus::quotients(6, seed), |(a, b)| verify_lvt_special(a, b, a.n() <= 4))?),
        },
        "lvt-delcont" => {
            let pairs = match &flag {
                Some(fm) => vec![quotient(fm)?],
                None => corpus::quotients(6, seed),
            };
            let jobs: Vec<_> =
                pairs.iter().flat_map(|(a, b)| non_loop_coloop(b).into_iter().map(move |i| (a, b, i))).collect();
            indexed(collect(jobs, |(a, b, i)| verify_lvt_delcont(a, b, *i))?)
        }
        "duality" => match &flag {
            Some(fm) => vec![verify_duality(fm, &memo)?],
            None => indexed(collect(corpus::flags(5, seed), |fm| verify_duality(fm, &memo))?),
        },
        "direct-sum" => match &flag {
            Some(fm) => vec![verify_direct_sum(fm, fm, &memo)?],
            None => indexed(collect(corpus_direct_sum_pairs(6, seed), |(a, b)| verify_direct_sum(a, b, &memo))?),
        },
        "divisibility" => match &flag {
            Some(fm) => vec![verify_divisibility(fm)?],
            None => indexed(collect(corpus::flags(6, seed), verify_divisibility)?),
        },
        "latticepoints" => match &flag {
            Some(fm) => vec![verify_latticepoints(fm)?],
            None => indexed(collect(corpus::flags(6, seed), verify_latticepoints)?),
        },
        "coefficients" => match &flag {
            Some(fm) => {
                let (a, b) = quotient(fm)?;
                vec![verify_coefficients(&quotient_flag(&a, &b)?, &memo)?]
            }
            None => indexed(collect(corpus_quotient_flags(5, seed), |fm| verify_coefficients(fm, &memo))?),
        },
        "h-uv" => match (&flag, input) {
            (Some(fm), Some(doc)) => vec![verify_h_uv(fm, doc.diagram)?],
            _ => {
                let flags: Vec<FlagMatroid> = corpus::flags(5, seed).into_iter().filter(loopless_coloopless).collect();
                let mut out = indexed(collect(flags, |fm| verify_h_uv(fm, Diagram::Flag))?);
                let u12 = FlagMatroid::single(Matroid::uniform(1, 2)?);
                let h = h_polynomial(&u12)?;
                out.push(Check::new("U12", h == var(Var::S), format!("h = {h}")));
                let control = FlagMatroid::new(vec![Matroid::uniform(2, 4)?, Matroid::uniform(3, 4)?])?;
                out.push(verify_h_uv(&control, Diagram::LasVergnas)?);
                out
            }
        },
        "beta-higgs" => match &flag {
            Some(fm) => {
                let (a, b) = quotient(fm)?;
                vec![verify_beta_higgs(&a, &b)?]
            }
            None => {
                let pairs: Vec<_> =
                    corpus::quotients(6, seed).into_iter().filter(|(a, b)| b.rank() > a.rank()).collect();
                let mut out = indexed(collect(pairs, |(a, b)| verify_beta_higgs(a, b))?);
                out.extend(collect(corpus::matroids(6, seed), verify_beta_chi)?);
                let (beta, _) = beta_polynomial(&Matroid::uniform(1, 3)?, &Matroid::uniform(2, 3)?)?;
                let expected = (&var(Var::Q) - &AuxPolynomial::one()).scale_int(2);
                out.push(Check::new("(U13, U23)", beta == expected, format!("beta = {beta}")));
                out
            }
        },
        "kchi-conjecture" => {
            observational = true;
            let ms = match &flag {
                Some(fm) => vec![fm.last().clone()],
                None => {
                    corpus::matroids(6, seed).into_iter().filter(|m| m.loops().is_empty() && m.rank() >= 1).collect()
                }
            };
            indexed(collect(ms, observe_kchi)?)
        }
        "brion-example" => verify_brion_example()?,
        other => return Err(Error::UnknownIdentity(other.to_string())),
    };
    let mut report = IdentityReport::new(name, checks);
    report.observational = observational;
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Convenience for single-matroid documents.
pub fn document_for(fm: FlagMatroid) -> Document {
    Document { input: Input::Flag(fm), diagram: Diagram::Flag }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn u(r: usize, n: usize) -> Matroid {
        Matroid::uniform(r, n).unwrap()
    }

    fn flag(ms: &[(usize, usize)]) -> FlagMatroid {
        FlagMatroid::new(ms.iter().map(|&(r, n)| u(r, n)).collect()).unwrap()
    }

    #[test]
    fn kt22_spot_values() {
        let memo = KtMemo::new();
        let c = verify_kt22(&flag(&[(1, 3), (2, 3)]), &memo).unwrap();
        assert!(c.passed, "{c:?}");
        assert_eq!(c.detail, "KT(2,2)=48, |pB|=6");
        let c = verify_kt22(&flag(&[(1, 2), (2, 2)]), &memo).unwrap();
        assert_eq!(c.detail, "KT(2,2)=12, |pB|=3");
        assert!(verify_kt22(&flag(&[(1, 3)]), &memo).is_err());
    }

    #[test]
    fn delcont_small_cases() {
        let memo = KtMemo::new();
        assert!(verify_delcont(&u(2, 3), 0, &memo).unwrap().passed);
        assert!(verify_delcont(&u(1, 2), 0, &memo).unwrap().passed);
        assert!(verify_delcont_fold(&u(2, 4), 1, 3, &memo).unwrap().passed);
        assert_eq!(verify_delcont(&u(1, 1), 0, &memo), Err(Error::LoopOrColoop(0)));
    }

    #[test]
    fn brion_example_reproduces_the_hexagon() {
        let checks = verify_brion_example().unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        assert_eq!(checks[0].detail, "t_1t_2+t_1t_3+t_2^2+t_2t_3+t_3^2");
        assert_eq!(checks[1].detail, "t_2^2+t_2t_3+t_3^2");
    }

    #[test]
    fn single_instance_identities() {
        let memo = KtMemo::new();
        let fm = flag(&[(1, 3), (2, 3)]);
        assert!(verify_lvt_special(&u(1, 3), &u(2, 3), true).unwrap().passed);
        assert!(verify_lvt_delcont(&u(1, 3), &u(2, 3), 0).unwrap().passed);
        assert!(verify_duality(&fm, &memo).unwrap().passed);
        assert!(verify_direct_sum(&fm, &flag(&[(0, 1), (1, 1)]), &memo).unwrap().passed);
        assert!(verify_divisibility(&fm).unwrap().passed);
        assert_eq!(verify_latticepoints(&fm).unwrap().detail, "7 points");
        assert!(verify_coefficients(&fm, &memo).unwrap().passed);
        assert!(verify_beta_higgs(&u(1, 4), &u(3, 4)).unwrap().passed);
        assert!(verify_beta_chi(&u(2, 4)).unwrap().passed);
        assert!(observe_kchi(&u(2, 3)).unwrap().passed);
        assert!(verify_h_uv(&flag(&[(1, 2)]), Diagram::Flag).unwrap().passed);
    }

    #[test]
    fn coefficient_rule_uses_set_sizes() {
        // M2 has the coloop 3, so e_p with |p| = 3 always contains t_3
        let m2 = Matroid::from_bases(4, 3, [Subset(0b0111), Subset(0b1101), Subset(0b1110)]).unwrap();
        let fm = FlagMatroid::new(vec![u(0, 4), m2]).unwrap();
        let memo = KtMemo::new();
        let eq = memo.get(&fm).unwrap();
        assert!(eq.get(&[1, 1, 0, 1]).coeff(&power_uv(0, 0)).is_zero());
        assert!(verify_coefficients(&fm, &memo).unwrap().passed);
    }

    #[test]
    fn unknown_identity() {
        assert_eq!(run_identity("nope", None, 0).unwrap_err(), Error::UnknownIdentity("nope".into()));
    }

    #[test]
    fn report_display() {
        let r = run_identity("brion-example", None, corpus::DEFAULT_SEED).unwrap();
        assert!(r.passed());
        let text = r.to_string();
        assert!(text.ends_with("PASS brion-example: 4 checks, 0 failed"), "{text}");
    }
}
