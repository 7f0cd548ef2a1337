//! Laurent polynomials in torus characters `t_1, .., t_n` with
//! auxiliary-polynomial coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::cone::LatticeVector;
use crate::error::{Error, Result};
use crate::poly::{AuxPolynomial, Var};

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct EquivariantPolynomial {
    n: usize,
    terms: BTreeMap<LatticeVector, AuxPolynomial>,
}

impl EquivariantPolynomial {
    pub fn zero(n: usize) -> Self {
        EquivariantPolynomial { n, terms: BTreeMap::new() }
    }

    /// `coeff * t^w`.
    pub fn monomial(w: LatticeVector, coeff: AuxPolynomial) -> Self {
        let mut p = Self::zero(w.len());
        p.add_term(w, &coeff);
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVector, &AuxPolynomial)> {
        self.terms.iter()
    }

    pub fn get(&self, w: &[i64]) -> AuxPolynomial {
        self.terms.get(&LatticeVector(w.to_vec())).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: LatticeVector, coeff: &AuxPolynomial) {
        assert_eq!(w.len(), self.n, "exponent length mismatch");
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(c) => {
                *c = &*c + coeff;
                if c.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, coeff.clone());
            }
        }
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&AuxPolynomial) -> AuxPolynomial) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &f(c));
        }
        out
    }

    /// Every `t_i` set to 1.
    pub fn at_t_one(&self) -> AuxPolynomial {
        self.terms.values().fold(AuxPolynomial::zero(), |acc, c| &acc + c)
    }

    /// Multiplication by `t^w`.
    pub fn shift(&self, w: &LatticeVector) -> Self {
        EquivariantPolynomial { n: self.n, terms: self.terms.iter().map(|(k, c)| (k + w, c.clone())).collect() }
    }

    /// `t_i -> t_i^{-1}` for all `i`.
    pub fn invert_t(&self) -> Self {
        EquivariantPolynomial { n: self.n, terms: self.terms.iter().map(|(k, c)| (-k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &AuxPolynomial) -> Self {
        self.map_coeffs(|x| x * c)
    }

    /// Places coordinates into a larger torus: old coordinate `i` becomes
    /// `relabel[i]`; every other coordinate gets exponent zero.
    pub fn embed(&self, n: usize, relabel: &[usize]) -> Self {
        assert_eq!(relabel.len(), self.n, "relabel map length");
        let mut out = Self::zero(n);
        for (k, c) in &self.terms {
            let mut w = vec![0; n];
            for (i, &j) in relabel.iter().enumerate() {
                w[j] = k[i];
            }
            out.add_term(LatticeVector(w), c);
        }
        out
    }

    /// Keeps the terms whose exponent satisfies `pick`.
    pub fn restrict_exponents(&self, pick: impl Fn(&LatticeVector) -> bool) -> Self {
        EquivariantPolynomial {
            n: self.n,
            terms: self.terms.iter().filter(|(k, _)| pick(k)).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    /// Substitutes auxiliary variables in every coefficient.
    pub fn substitute(&self, subs: &[(Var, AuxPolynomial)]) -> Self {
        self.map_coeffs(|c| c.substitute(subs))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }
}

impl Add for &EquivariantPolynomial {
    type Output = EquivariantPolynomial;
    fn add(self, rhs: &EquivariantPolynomial) -> EquivariantPolynomial {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl Sub for &EquivariantPolynomial {
    type Output = EquivariantPolynomial;
    fn sub(self, rhs: &EquivariantPolynomial) -> EquivariantPolynomial {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), &-c);
        }
        out
    }
}

impl Mul for &EquivariantPolynomial {
    type Output = EquivariantPolynomial;
    fn mul(self, rhs: &EquivariantPolynomial) -> EquivariantPolynomial {
        assert_eq!(self.n, rhs.n, "torus dimension mismatch");
        let mut out = EquivariantPolynomial::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a + b, &(ca * cb));
            }
        }
        out
    }
}

/// One term per line: exponent vector, then coefficient.
impl fmt::Display for EquivariantPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str("\n")?;
            }
            write!(f, "t^{:?}: {}", w.0, c)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    t: Vec<i64>,
    coeff: AuxPolynomial,
}

#[derive(Serialize, Deserialize)]
struct EquivariantJson {
    n: usize,
    terms: Vec<TermJson>,
}

impl Serialize for EquivariantPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EquivariantJson {
            n: self.n,
            terms: self.terms.iter().map(|(w, c)| TermJson { t: w.0.clone(), coeff: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EquivariantPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let json = EquivariantJson::deserialize(d)?;
        let mut out = EquivariantPolynomial::zero(json.n);
        for t in json.terms {
            if t.t.len() != json.n {
                return Err(D::Error::custom("exponent length differs from n"));
            }
            out.add_term(LatticeVector(t.t), &t.coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> AuxPolynomial {
        AuxPolynomial::parse(s).unwrap()
    }

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector(v.to_vec())
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let a = EquivariantPolynomial::monomial(lv(&[1, 0]), p("u"));
        let b = EquivariantPolynomial::monomial(lv(&[0, 1]), p("1"));
        let s = &a + &b;
        assert_eq!(s.len(), 2);
        assert!((&s - &s).is_zero());
        let sq = &s * &s;
        assert_eq!(sq.get(&[1, 1]), p("2*u"));
        assert_eq!(sq.at_t_one(), p("u^2 + 2*u + 1"));
    }

    #[test]
    fn embed_and_invert() {
        let a = EquivariantPolynomial::monomial(lv(&[2, -1]), p("v"));
        let e = a.embed(3, &[0, 2]);
        assert_eq!(e.get(&[2, 0, -1]), p("v"));
        assert_eq!(a.invert_t().get(&[-2, 1]), p("v"));
        assert_eq!(a.shift(&lv(&[1, 1])).get(&[3, 0]), p("v"));
    }

    #[test]
    fn json_roundtrip() {
        let a = &EquivariantPolynomial::monomial(lv(&[1, 0]), p("2*u"))
            + &EquivariantPolynomial::monomial(lv(&[0, 1]), p("1"));
        let text = a.to_json();
        assert_eq!(
            text,
            r#"{"n":2,"terms":[{"t":[0,1],"coeff":{"vars":[],"monomials":[{"e":[],"c":"1"}]}},{"t":[1,0],"coeff":{"vars":["u"],"monomials":[{"e":[1],"c":"2"}]}}]}"#
        );
        assert_eq!(EquivariantPolynomial::from_json(&text).unwrap(), a);
    }
}
