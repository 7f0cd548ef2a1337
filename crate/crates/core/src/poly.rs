//! Polynomials with exact rational coefficients in the auxiliary variables
//! `u, v, w, x, y, z, q, s`.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NVARS: usize = 8;

/// Exponent vector over all auxiliary variables in declaration order.
pub type Exponents = [u32; NVARS];

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    U,
    V,
    W,
    X,
    Y,
    Z,
    Q,
    S,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::U, Var::V, Var::W, Var::X, Var::Y, Var::Z, Var::Q, Var::S];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["u", "v", "w", "x", "y", "z", "q", "s"][self.index()]
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }
}

/// A polynomial in the auxiliary variables.
///
/// Equality and hashing look at the terms only; the declared variable list
/// affects display and serialization.
#[derive(Clone, Debug, Default)]
pub struct AuxPolynomial {
    /// Bit `i` set when `Var::ALL[i]` is declared.
    declared: u8,
    terms: BTreeMap<Exponents, BigRational>,
}

impl PartialEq for AuxPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for AuxPolynomial {}

impl Hash for AuxPolynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

fn used_mask(e: &Exponents) -> u8 {
    e.iter().enumerate().filter(|(_, &k)| k > 0).fold(0, |m, (i, _)| m | 1 << i)
}

impl AuxPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, [0; NVARS])
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; NVARS];
        e[v.index()] = 1;
        Self::monomial(BigRational::one(), e)
    }

    pub fn monomial(c: BigRational, e: Exponents) -> Self {
        let mut p = Self { declared: used_mask(&e), terms: BTreeMap::new() };
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// `c * prod v^k` from a short list of powers.
    pub fn term(c: i64, powers: &[(Var, u32)]) -> Self {
        let mut e = [0; NVARS];
        for &(v, k) in powers {
            e[v.index()] += k;
        }
        Self::monomial(BigRational::from_integer(c.into()), e)
    }

    /// Declares additional variables without changing the value.
    pub fn with_vars(mut self, vars: &[Var]) -> Self {
        for v in vars {
            self.declared |= 1 << v.index();
        }
        self
    }

    /// Declared variables in canonical order.
    pub fn vars(&self) -> Vec<Var> {
        Var::ALL.into_iter().filter(|v| self.declared >> v.index() & 1 == 1).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &Exponents) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of the monomial given as a power list.
    pub fn coeff_of(&self, powers: &[(Var, u32)]) -> BigRational {
        let mut e = [0; NVARS];
        for &(v, k) in powers {
            e[v.index()] += k;
        }
        self.coeff(&e)
    }

    /// The constant value if the polynomial has no variable terms.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&[0; NVARS]).cloned(),
            _ => None,
        }
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|e| e[v.index()]).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, e: Exponents, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        self.declared |= used_mask(&e);
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self { declared: self.declared, terms: BTreeMap::new() };
        }
        Self { declared: self.declared, terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect() }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigRational::from_integer(c.into()))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one().with_vars(&self.vars());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Simultaneous substitution of polynomials for variables.
    pub fn substitute(&self, subs: &[(Var, AuxPolynomial)]) -> Self {
        let mut out = Self::zero();
        let mut declared = self.declared;
        for (v, p) in subs {
            declared &= !(1 << v.index());
            declared |= p.declared;
        }
        let mut powers: Vec<Vec<AuxPolynomial>> = vec![vec![Self::one()]; subs.len()];
        for (e, c) in &self.terms {
            let mut rest = *e;
            let mut prod = Self::one();
            for (k, (v, p)) in subs.iter().enumerate() {
                let deg = rest[v.index()] as usize;
                rest[v.index()] = 0;
                while powers[k].len() <= deg {
                    let next = powers[k].last().unwrap() * p;
                    powers[k].push(next);
                }
                prod = &prod * &powers[k][deg];
            }
            let shifted = prod.mul_monomial(&rest).scale(c);
            out = &out + &shifted;
        }
        out.declared |= declared;
        out
    }

    fn mul_monomial(&self, e: &Exponents) -> Self {
        Self {
            declared: self.declared | used_mask(e),
            terms: self
                .terms
                .iter()
                .map(|(f, c)| {
                    let mut g = *f;
                    for i in 0..NVARS {
                        g[i] += e[i];
                    }
                    (g, c.clone())
                })
                .collect(),
        }
    }

    /// Substitutes integer values for some variables.
    pub fn evaluate(&self, values: &[(Var, i64)]) -> Self {
        let subs: Vec<(Var, AuxPolynomial)> = values.iter().map(|&(v, c)| (v, Self::from_int(c))).collect();
        self.substitute(&subs)
    }

    /// Value when every variable is assigned, or `None` if some variable remains.
    pub fn evaluate_all(&self, values: &[(Var, i64)]) -> Option<BigRational> {
        self.evaluate(values).as_constant()
    }

    pub fn derivative(&self, v: Var) -> Self {
        let mut out = Self { declared: self.declared, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            let k = e[v.index()];
            if k > 0 {
                let mut f = *e;
                f[v.index()] -= 1;
                out.add_term(f, &(c * BigRational::from_integer(k.into())));
            }
        }
        out
    }

    /// Exact quotient by `v - root`, or `NotDivisible`.
    pub fn div_linear(&self, v: Var, root: i64) -> Result<Self> {
        let i = v.index();
        let root = BigRational::from_integer(root.into());
        // group by the exponents of the other variables
        let mut groups: BTreeMap<Exponents, BTreeMap<u32, BigRational>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = *e;
            rest[i] = 0;
            groups.entry(rest).or_default().insert(e[i], c.clone());
        }
        let mut out = Self { declared: self.declared, terms: BTreeMap::new() };
        for (rest, coeffs) in groups {
            let deg = *coeffs.keys().next_back().unwrap();
            // synthetic division from the top degree down
            let mut carry = BigRational::zero();
            for k in (0..=deg).rev() {
                let a = coeffs.get(&k).cloned().unwrap_or_else(BigRational::zero) + &carry;
                if k == 0 {
                    if !a.is_zero() {
                        return Err(Error::NotDivisible);
                    }
                } else {
                    let mut e = rest;
                    e[i] = k - 1;
                    out.add_term(e, &a);
                    carry = a * &root;
                }
            }
        }
        Ok(out)
    }

    /// Is every term of the form `c * (a*b)^k` times nothing else?
    pub fn is_diagonal_in(&self, a: Var, b: Var) -> bool {
        self.terms.iter().all(|(e, _)| {
            e[a.index()] == e[b.index()]
                && e.iter().enumerate().all(|(i, &k)| k == 0 || i == a.index() || i == b.index())
        })
    }

    /// Parses the text format, e.g. `x^2*y - 3/2*z + 1`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |why: &str| Error::Malformed(format!("cannot parse polynomial {text:?}: {why}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        let mut out = Self::zero();
        let mut pieces = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with('^') {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        pieces.push(&compact[start..]);
        for piece in pieces {
            let (sign, body) = match piece.as_bytes().first() {
                Some(b'-') => (-1, &piece[1..]),
                Some(b'+') => (1, &piece[1..]),
                _ => (1, piece),
            };
            if body.is_empty() {
                return Err(bad("dangling sign"));
            }
            if body == "0" {
                continue;
            }
            let mut coeff = BigRational::from_integer(sign.into());
            let mut e = [0; NVARS];
            for factor in body.split('*') {
                if let Some(first) = factor.chars().next().filter(|c| c.is_ascii_alphabetic()) {
                    let v = Var::from_name(&first.to_string()).ok_or_else(|| bad("unknown variable"))?;
                    let k = match factor[1..].strip_prefix('^') {
                        Some(k) => k.parse::<u32>().map_err(|_| bad("bad exponent"))?,
                        None if factor.len() == 1 => 1,
                        None => return Err(bad("bad factor")),
                    };
                    e[v.index()] += k;
                } else {
                    coeff *= crate::matroid::parse_rational(factor).map_err(|_| bad("bad number"))?;
                }
            }
            out.add_term(e, &coeff);
            out.declared |= used_mask(&e);
        }
        Ok(out)
    }

    fn graded_order(&self) -> Vec<(&Exponents, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }
}

impl fmt::Display for AuxPolynomial {
    /// Graded-lex text with explicit `*`, variables ordered `u > v > w > x > y > z > q > s`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.graded_order().into_iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let mut factors = Vec::new();
            let is_const = e.iter().all(|&x| x == 0);
            if !a.is_one() || is_const {
                factors.push(a.to_string());
            }
            for v in Var::ALL {
                match e[v.index()] {
                    0 => {}
                    1 => factors.push(v.name().to_string()),
                    p => factors.push(format!("{}^{p}", v.name())),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &AuxPolynomial {
    type Output = AuxPolynomial;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: &AuxPolynomial) -> AuxPolynomial {
        let mut out = self.clone();
        out.declared |= rhs.declared;
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl Sub for &AuxPolynomial {
    type Output = AuxPolynomial;
    fn sub(self, rhs: &AuxPolynomial) -> AuxPolynomial {
        let mut out = self.clone();
        out.declared |= rhs.declared;
        for (e, c) in &rhs.terms {
            out.add_term(*e, &-c);
        }
        out
    }
}

impl Mul for &AuxPolynomial {
    type Output = AuxPolynomial;
    fn mul(self, rhs: &AuxPolynomial) -> AuxPolynomial {
        let mut out = AuxPolynomial { declared: self.declared | rhs.declared, terms: BTreeMap::new() };
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let mut e = *a;
                for i in 0..NVARS {
                    e[i] += b[i];
                }
                out.add_term(e, &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &AuxPolynomial {
    type Output = AuxPolynomial;
    fn neg(self) -> AuxPolynomial {
        self.scale_int(-1)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for AuxPolynomial {
            type Output = AuxPolynomial;
            fn $m(self, rhs: AuxPolynomial) -> AuxPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for AuxPolynomial {
    type Output = AuxPolynomial;
    fn neg(self) -> AuxPolynomial {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct MonomialJson {
    e: Vec<u32>,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    vars: Vec<String>,
    monomials: Vec<MonomialJson>,
}

impl Serialize for AuxPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let vars = self.vars();
        let json = PolyJson {
            vars: vars.iter().map(|v| v.name().to_string()).collect(),
            monomials: self
                .graded_order()
                .into_iter()
                .map(|(e, c)| MonomialJson { e: vars.iter().map(|v| e[v.index()]).collect(), c: c.to_string() })
                .collect(),
        };
        json.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AuxPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let json = PolyJson::deserialize(d)?;
        let vars = json
            .vars
            .iter()
            .map(|n| Var::from_name(n).ok_or_else(|| D::Error::custom(format!("unknown variable {n:?}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let mut out = AuxPolynomial::zero().with_vars(&vars);
        for m in json.monomials {
            if m.e.len() != vars.len() {
                return Err(D::Error::custom("exponent length differs from variable list"));
            }
            let mut e = [0; NVARS];
            for (v, k) in vars.iter().zip(&m.e) {
                e[v.index()] = *k;
            }
            let c = crate::matroid::parse_rational(&m.c).map_err(D::Error::custom)?;
            out.add_term(e, &c);
        }
        Ok(out)
    }
}

/// Exact binomial coefficient `C(e, k)` for any integer `e`.
pub fn binomial(e: &BigInt, k: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= e - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}
