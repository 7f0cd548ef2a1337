//! Library results against independent oracles written here from first
//! principles.

mod common;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use common::{cell_value, t_power};
use flagtutte::invariants::{
    beta_invariant, characteristic_polynomial, kt, kt_equivariant, kt_genfun, lattice_point_count, tutte,
};
use flagtutte::{
    brion_series, corpus, pseudo_bases, tangent_cone_generators, AuxPolynomial, EquivariantPolynomial, FlagMatroid,
    GenFun, LatticeVector, Matroid, Subset, Var,
};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn rank(m: &Matroid, s: Subset) -> usize {
    m.bases().iter().map(|b| b.intersection(s).len()).max().unwrap()
}

/// Tutte polynomial by deletion-contraction, as a coefficient table in x, y.
fn tutte_recursive(m: &Matroid) -> HashMap<(u32, u32), i64> {
    let mut out = HashMap::new();
    let Some(e) = (0..m.n()).next() else {
        out.insert((0, 0), 1);
        return out;
    };
    let times = |t: HashMap<(u32, u32), i64>, dx: u32, dy: u32| -> HashMap<(u32, u32), i64> {
        t.into_iter().map(|((a, b), c)| ((a + dx, b + dy), c)).collect()
    };
    if m.n() == 1 {
        let key = if m.is_loop(0) { (0, 1) } else { (1, 0) };
        out.insert(key, 1);
        return out;
    }
    let (del, _) = m.delete(e).unwrap();
    let (con, _) = m.contract(e).unwrap();
    if m.is_coloop(e) {
        return times(tutte_recursive(&con), 1, 0);
    }
    if m.is_loop(e) {
        return times(tutte_recursive(&del), 0, 1);
    }
    for part in [tutte_recursive(&del), tutte_recursive(&con)] {
        for (k, c) in part {
            *out.entry(k).or_insert(0) += c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn table_of(p: &AuxPolynomial) -> HashMap<(u32, u32), i64> {
    p.terms().map(|(e, c)| ((e[Var::X.index()], e[Var::Y.index()]), c.to_integer().try_into().unwrap())).collect()
}

#[test]
fn tutte_and_kt_match_deletion_contraction() {
    let ms = corpus::default_matroids();
    assert!(ms.len() >= 200);
    for m in &ms {
        let oracle = tutte_recursive(m);
        assert_eq!(table_of(&tutte(m).unwrap()), oracle, "tutte {m:?}");
        assert_eq!(table_of(&kt(&FlagMatroid::single(m.clone())).unwrap()), oracle, "kt {m:?}");
    }
}

#[test]
fn characteristic_polynomial_and_beta_match_whitney_sums() {
    for m in corpus::matroids(5, corpus::DEFAULT_SEED) {
        let r = m.rank() as i64;
        let mut chi = AuxPolynomial::zero();
        // χ'(1) = Σ (-1)^{|S|} (r - r(S))
        let mut slope = 0i64;
        for s in Subset::full(m.n()).subsets() {
            let sign = if s.len() % 2 == 0 { 1 } else { -1 };
            let corank = r - rank(&m, s) as i64;
            chi = &chi + &AuxPolynomial::term(sign, &[(Var::Q, corank as u32)]);
            slope += sign * corank;
        }
        assert_eq!(characteristic_polynomial(&m).unwrap(), chi, "{m:?}");
        let beta = if r % 2 == 1 { slope } else { -slope };
        assert_eq!(beta_invariant(&m).unwrap(), BigRational::from_integer(beta.into()), "{m:?}");
    }
}

#[test]
fn pseudo_bases_match_brute_force() {
    for (m1, m2) in corpus::quotients(5, corpus::DEFAULT_SEED) {
        let mut oracle: Vec<Subset> =
            Subset::full(m1.n()).subsets().filter(|&s| rank(&m1, s) == m1.rank() && rank(&m2, s) == s.len()).collect();
        oracle.sort();
        let mut got = pseudo_bases(&m1, &m2).unwrap();
        got.sort();
        assert_eq!(got, oracle);
    }
}

/// Lattice points of `Q(FM)` as Minkowski sums of constituent bases.
fn minkowski_points(fm: &FlagMatroid) -> Vec<Vec<i64>> {
    let n = fm.n();
    let mut points: Vec<Vec<i64>> = vec![vec![0; n]];
    for m in fm.constituents() {
        let mut next = Vec::new();
        for p in &points {
            for b in m.bases() {
                let mut q = p.clone();
                for i in b.iter() {
                    q[i] += 1;
                }
                next.push(q);
            }
        }
        next.sort();
        next.dedup();
        points = next;
    }
    points
}

#[test]
fn brion_sums_and_lattice_points_match_enumeration() {
    // matroid polytopes are normal: the lattice points of the Minkowski sum
    // are the sums of vertices
    for fm in corpus::flags(4, corpus::DEFAULT_SEED) {
        let points = minkowski_points(&fm);
        assert_eq!(lattice_point_count(&fm), points.len() as u64, "{fm:?}");
        let cones: Vec<(LatticeVector, Vec<LatticeVector>)> = fm
            .flag_bases()
            .into_iter()
            .map(|b| (LatticeVector(b.vertex(fm.n())), tangent_cone_generators(&fm, &b).unwrap()))
            .collect();
        let series = brion_series(&cones).unwrap();
        let mut expected = EquivariantPolynomial::zero(fm.n());
        for p in points {
            expected.add_term(LatticeVector(p), &AuxPolynomial::one());
        }
        assert_eq!(series, expected, "{fm:?}");
    }
}

/// The rational function of a generating function evaluated at a point.
fn evaluate_rational(g: &GenFun, t: &[BigRational], aux: &[(Var, i64)]) -> BigRational {
    let coeffs: Vec<BigRational> =
        g.coeff_table().iter().map(|c| c.evaluate_all(aux).expect("all variables fixed")).collect();
    let mut total = BigRational::zero();
    for group in g.groups() {
        let cells: BigRational = group.cells.iter().map(|c| cell_value(c, t)).sum();
        let mut shifts = BigRational::zero();
        for s in &group.shifts {
            shifts += t_power(t, &s.offset.0) * &coeffs[s.coeff] * BigRational::from_integer(s.mult.into());
        }
        total += cells * shifts;
    }
    total
}

fn evaluate_laurent(p: &EquivariantPolynomial, t: &[BigRational], aux: &[(Var, i64)]) -> BigRational {
    p.terms().map(|(w, c)| t_power(t, &w.0) * c.evaluate_all(aux).expect("all variables fixed")).sum()
}

#[test]
fn expansions_agree_with_the_rational_function() {
    let points = [
        vec![rat(2, 1), rat(3, 1), rat(5, 1), rat(7, 1), rat(11, 1)],
        vec![rat(1, 2), rat(-3, 1), rat(2, 5), rat(-7, 3), rat(4, 1)],
    ];
    let aux = [(Var::U, 3), (Var::V, -2), (Var::W, 5)];
    for fm in corpus::flags(4, corpus::DEFAULT_SEED).into_iter().step_by(3) {
        let g = kt_genfun(&fm).unwrap();
        let p = kt_equivariant(&fm).unwrap();
        for t in &points {
            let t = &t[..fm.n()];
            assert_eq!(evaluate_rational(&g, t, &aux), evaluate_laurent(&p, t, &aux), "{fm:?} at {t:?}");
        }
    }
}

#[test]
fn kt_at_one_one_counts_lattice_points() {
    for fm in corpus::flags(5, corpus::DEFAULT_SEED).into_iter().step_by(5) {
        let value = kt(&fm).unwrap().evaluate_all(&[(Var::X, 1), (Var::Y, 1)]).unwrap();
        assert_eq!(value, BigRational::from_integer(minkowski_points(&fm).len().into()), "{fm:?}");
    }
}
