//! Randomized properties over matroids of small rational matrices.

mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use common::cell_value;
use flagtutte::invariants::{kt, kt_equivariant, kt_genfun, tutte};
use flagtutte::poly::{Exponents, NVARS};
use flagtutte::{
    flip_cone, higgs_factorization, is_quotient, pseudo_bases, tangent_cone_generators, triangulate_half_open,
    AuxPolynomial, Direction, EquivariantPolynomial, FlagMatroid, LatticeVector, Matroid, Subset, Var,
};

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-1i64..=1, cols), rows)
}

fn column_matroid(rows: &[Vec<i64>]) -> Matroid {
    let rows: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
    Matroid::from_matrix(&rows).unwrap()
}

/// A matroid on 2..=6 elements of rank at most 3.
fn any_matroid() -> impl Strategy<Value = Matroid> {
    (1usize..=3, 2usize..=6).prop_flat_map(|(r, n)| matrix(r, n)).prop_map(|m| column_matroid(&m))
}

/// `(M(A'), M(A))` where `A'` keeps the first rows of `A`; row-space
/// inclusion makes this a quotient.
fn any_quotient(max_n: usize) -> impl Strategy<Value = (Matroid, Matroid)> {
    (2usize..=3, 2usize..=max_n)
        .prop_flat_map(|(r, n)| (matrix(r, n), 0..r))
        .prop_map(|(a, keep)| (column_matroid(&a[..keep.max(1)]), column_matroid(&a)))
}

fn swap_xy(p: &AuxPolynomial) -> AuxPolynomial {
    p.substitute(&[(Var::X, AuxPolynomial::var(Var::Y)), (Var::Y, AuxPolynomial::var(Var::X))])
}

/// Sum-zero `x` lies in the cone of the edges `e_j - e_i` iff no set closed
/// under outgoing edges has negative total.
fn in_edge_cone(gens: &[LatticeVector], x: &[i64]) -> bool {
    let n = x.len();
    if x.iter().sum::<i64>() != 0 {
        return false;
    }
    let edges: Vec<(usize, usize)> = gens
        .iter()
        .map(|g| (g.iter().position(|&c| c == -1).unwrap(), g.iter().position(|&c| c == 1).unwrap()))
        .collect();
    Subset::full(n).subsets().all(|s| {
        let closed = edges.iter().all(|&(i, j)| !s.contains(i) || s.contains(j));
        !closed || s.iter().map(|i| x[i]).sum::<i64>() >= 0
    })
}

fn box_around(apex: &[i64], radius: i64) -> Vec<Vec<i64>> {
    let mut pts = vec![vec![]];
    for &a in apex {
        pts = pts
            .into_iter()
            .flat_map(|p: Vec<i64>| (a - radius..=a + radius).map(move |x| [p.clone(), vec![x]].concat()))
            .collect();
    }
    pts
}

fn random_poly() -> impl Strategy<Value = AuxPolynomial> {
    prop::collection::vec((-5i64..=5, 1i64..=3, prop::collection::vec(0u32..=3, NVARS)), 0..6).prop_map(|terms| {
        let mut p = AuxPolynomial::zero();
        for (num, den, e) in terms {
            let e: Exponents = e.try_into().unwrap();
            p.add_term(e, &BigRational::new(num.into(), den.into()));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_is_an_involution(m in any_matroid()) {
        prop_assert_eq!(m.dual().dual(), m);
    }

    #[test]
    fn bases_satisfy_exchange(m in any_matroid()) {
        for &a in m.bases() {
            for &b in m.bases() {
                for x in a.difference(b).iter() {
                    prop_assert!(b.difference(a).iter().any(|y| m.is_basis(a.remove(x).insert(y))));
                }
            }
        }
    }

    #[test]
    fn kt_of_a_matroid_is_tutte(m in any_matroid()) {
        let t = tutte(&m).unwrap();
        prop_assert_eq!(kt(&FlagMatroid::single(m.clone())).unwrap(), t.clone());
        prop_assert_eq!(tutte(&m.dual()).unwrap(), swap_xy(&t));
    }

    #[test]
    fn contraction_is_a_quotient_of_deletion(m in any_matroid(), mask in any::<u64>()) {
        let s = Subset(mask).intersection(Subset::full(m.n()));
        prop_assume!(s != Subset::full(m.n()));
        let (con, _) = m.minor(Subset::EMPTY, s).unwrap();
        let (del, _) = m.minor(s, Subset::EMPTY).unwrap();
        prop_assert!(is_quotient(&con, &del).unwrap());
    }

    #[test]
    fn pseudo_bases_of_a_matroid_are_its_bases(m in any_matroid()) {
        prop_assert_eq!(pseudo_bases(&m, &m).unwrap(), m.bases().to_vec());
    }

    #[test]
    fn higgs_layers_step_by_one((m1, m2) in any_quotient(6)) {
        prop_assume!(is_quotient(&m1, &m2).unwrap());
        let layers = higgs_factorization(&m1, &m2).unwrap();
        prop_assert_eq!(layers.first().unwrap(), &m2);
        prop_assert_eq!(layers.last().unwrap(), &m1);
        for (i, l) in layers.iter().enumerate() {
            prop_assert_eq!(l.rank(), m2.rank() - i);
        }
    }

    #[test]
    fn face_bases_meet_their_faces((m1, m2) in any_quotient(6), order in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(), cuts in prop::collection::vec(0usize..=6, 0..3)) {
        let fm = FlagMatroid::new(vec![m1, m2]).unwrap();
        let n = fm.n();
        let order: Vec<usize> = order.into_iter().filter(|&i| i < n).collect();
        let mut cuts: Vec<usize> = cuts.into_iter().map(|c| c.min(n)).collect();
        cuts.sort();
        let chain: Vec<Subset> = cuts.iter().map(|&c| Subset::from_elems(order[..c].iter().copied())).collect();
        let b = fm.face_basis(&chain).unwrap();
        prop_assert!(fm.is_flag_basis(&b));
        for (bi, m) in b.chain.iter().zip(fm.constituents()) {
            for s in &chain {
                prop_assert_eq!(bi.intersection(*s).len(), m.rank_of(*s));
            }
        }
    }

    #[test]
    fn vertices_are_polytope_points((m1, m2) in any_quotient(6)) {
        let fm = FlagMatroid::new(vec![m1, m2]).unwrap();
        for b in fm.flag_bases() {
            let mut v = b.vertex(fm.n());
            prop_assert!(fm.polytope_membership(&v));
            v[0] += 1;
            prop_assert!(!fm.polytope_membership(&v));
        }
    }

    #[test]
    fn triangulations_cover_tangent_cones_exactly((m1, m2) in any_quotient(4), pick in any::<prop::sample::Index>()) {
        let fm = FlagMatroid::new(vec![m1, m2]).unwrap();
        let bases = fm.flag_bases();
        let b = pick.get(&bases);
        let apex = LatticeVector(b.vertex(fm.n()));
        let gens = tangent_cone_generators(&fm, b).unwrap();
        let cells = triangulate_half_open(&apex, &gens).unwrap();
        for p in box_around(&apex, 2) {
            let w = LatticeVector(p);
            let covered = cells.iter().filter(|c| flagtutte::cone_membership(c, &w)).count();
            let x: Vec<i64> = (&w - &apex).0;
            prop_assert_eq!(covered, usize::from(in_edge_cone(&gens, &x)), "{:?}", w);
        }
    }

    #[test]
    fn flips_preserve_the_rational_function((m1, m2) in any_quotient(4), zeta in prop::collection::vec(-3i64..=3, 4)) {
        prop_assume!(zeta.iter().any(|&z| z != 0));
        let fm = FlagMatroid::new(vec![m1, m2]).unwrap();
        let n = fm.n();
        let dir = Direction::from_ints(&zeta[..n]).unwrap_or_else(|_| Direction::default_for(n));
        let t: Vec<BigRational> = [2, 3, 5, 7][..n].iter().map(|&p| int(p)).collect();
        for b in fm.flag_bases() {
            let apex = LatticeVector(b.vertex(n));
            for c in triangulate_half_open(&apex, &tangent_cone_generators(&fm, &b).unwrap()).unwrap() {
                let flipped = flip_cone(&c, &dir).unwrap();
                prop_assert_eq!(cell_value(&c, &t), cell_value(&flipped, &t));
            }
        }
    }

    #[test]
    fn expansion_does_not_depend_on_direction((m1, m2) in any_quotient(4)) {
        let fm = FlagMatroid::new(vec![m1, m2]).unwrap();
        let g = kt_genfun(&fm).unwrap();
        let n = fm.n();
        let reference = g.expand().unwrap();
        for zeta in [vec![1, 3, 9, 27], vec![-5, 2, 11, -7]] {
            prop_assert_eq!(&g.expand_with(&Direction::from_ints(&zeta[..n]).unwrap()).unwrap(), &reference);
        }
        prop_assert_eq!(g.evaluate_t1().unwrap(), reference.at_t_one());
    }

    #[test]
    fn kt_support_lies_in_the_apex_box((m1, m2) in any_quotient(5)) {
        let fm = FlagMatroid::new(vec![m1, m2]).unwrap();
        let apexes = kt_genfun(&fm).unwrap().apexes();
        for (w, _) in kt_equivariant(&fm).unwrap().terms() {
            for i in 0..fm.n() {
                let lo = apexes.iter().map(|a| a[i]).min().unwrap();
                let hi = apexes.iter().map(|a| a[i]).max().unwrap();
                prop_assert!(lo <= w[i] && w[i] <= hi);
            }
        }
    }

    #[test]
    fn polynomial_text_roundtrips(p in random_poly()) {
        prop_assert_eq!(AuxPolynomial::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn equivariant_json_roundtrips(terms in prop::collection::vec((prop::collection::vec(-3i64..=3, 3), random_poly()), 0..5)) {
        let mut e = EquivariantPolynomial::zero(3);
        for (w, c) in terms {
            e.add_term(LatticeVector(w), &c);
        }
        prop_assert_eq!(EquivariantPolynomial::from_json(&e.to_json()).unwrap(), e);
    }
}
