use std::sync::Arc;

use normext::family::{zhang_twist, zhang_twist_presentation};
use normext::freealg::{parse_poly, Context, FreeElement};
use normext::quotient::{Engine, Presentation, Quotient};
use normext::scalars::{specialize, unit_of, Assignment, Scalar, UnitScalar};
use normext::superpotential::{DiagonalMap, Superpotential};
use normext::tuples::{goodness_system, is_good, matrix_goodness_system};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const W_POLY: &str = "x*y*z + y*z*x + z*x*y - x*z*y - z*y*x - y*x*z";

fn ctx3() -> Arc<Context> {
    Context::new(&["x", "y", "z"], 1, &[]).unwrap()
}

fn cyclotomic(n: u32, coeffs: &[i64]) -> Scalar {
    Scalar::from_poly(n, coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (prop::sample::select(vec![1u32, 3, 4, 5, 12]), prop::collection::vec(-4i64..=4, 1..5))
        .prop_map(|(n, c)| cyclotomic(n, &c))
}

/// Random homogeneous element: up to `terms` words of length `deg` over 3 letters.
fn element(deg: usize, terms: usize) -> impl Strategy<Value = Vec<(Vec<usize>, i64)>> {
    prop::collection::vec((prop::collection::vec(0usize..3, deg), -3i64..=3), 1..=terms)
}

fn build(ctx: &Arc<Context>, spec: &[(Vec<usize>, i64)]) -> FreeElement<Scalar> {
    let mut f = FreeElement::zero(ctx);
    for (w, c) in spec {
        f = f.add(&FreeElement::word(ctx, w).scale(&Scalar::from_int(*c)).unwrap()).unwrap();
    }
    f
}

fn presentation(ctx: &Arc<Context>, rels: &[Vec<(Vec<usize>, i64)>]) -> Option<Presentation> {
    let rels: Vec<_> = rels.iter().map(|r| build(ctx, r)).filter(|r| !r.is_zero()).collect();
    if rels.is_empty() {
        return None;
    }
    Presentation::new(ctx, rels, "random").ok()
}

fn small_unit() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3])
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn field_laws(a in scalar(), b in scalar(), c in scalar()) {
        let ab = a.checked_mul(&b).unwrap();
        prop_assert_eq!(&ab, &b.checked_mul(&a).unwrap());
        prop_assert_eq!(ab.checked_mul(&c).unwrap(), a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap());
        let lhs = a.checked_mul(&b.checked_add(&c).unwrap()).unwrap();
        let rhs = ab.checked_add(&a.checked_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.checked_sub(&b).unwrap().checked_add(&b).unwrap(), a.clone());
        if !a.is_zero() {
            prop_assert!(a.checked_mul(&a.inv().unwrap()).unwrap().is_one());
        }
    }

    #[test]
    fn roots_of_unity_round_trip(n in prop::sample::select(vec![1u32, 2, 3, 4, 6, 12]), k in -24i64..24, num in 1i64..6, den in 1i64..6) {
        let s = Scalar::root_of_unity(n, k).unwrap().checked_mul(&Scalar::from_ratio(num, den).unwrap()).unwrap();
        let u: UnitScalar = unit_of(&s).unwrap();
        let back = specialize(&u, &Assignment::new(&[], n), 0).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn engines_agree_on_random_quadratic_algebras(rels in prop::collection::vec(element(2, 4), 1..4)) {
        let ctx = ctx3();
        let Some(p) = presentation(&ctx, &rels) else { return Ok(()) };
        let la = Quotient::compute(&p, 4, Engine::La).unwrap();
        let gb = Quotient::compute(&p, 4, Engine::Gb).unwrap();
        prop_assert_eq!(la.dims(), gb.dims());
    }

    #[test]
    fn membership_is_linear(
        rels in prop::collection::vec(element(2, 3), 1..3),
        mults in prop::collection::vec((0usize..3, any::<bool>(), 0usize..3, -3i64..=3), 1..4),
        extra in element(3, 3),
    ) {
        let ctx = ctx3();
        let Some(p) = presentation(&ctx, &rels) else { return Ok(()) };
        let q = Quotient::compute(&p, 5, Engine::Both).unwrap();
        let mut member = FreeElement::zero(&ctx);
        for (i, left, g, c) in &mults {
            let r = &p.relations()[i % p.relations().len()];
            let t = if *left { r.lmul_gen(*g) } else { r.rmul_gen(*g) };
            member = member.add(&t.scale(&Scalar::from_int(*c)).unwrap()).unwrap();
        }
        prop_assert!(q.contains(&member).unwrap());
        let f = build(&ctx, &extra);
        prop_assert_eq!(q.contains(&f).unwrap(), q.contains(&f.add(&member).unwrap()).unwrap());
        prop_assert!(q.normal_form(&member).unwrap().is_zero());
    }

    #[test]
    fn more_relations_never_enlarge_the_quotient(rels in prop::collection::vec(element(2, 3), 1..3), more in element(2, 3)) {
        let ctx = ctx3();
        let Some(p) = presentation(&ctx, &rels) else { return Ok(()) };
        let mut bigger = rels.clone();
        bigger.push(more);
        let p2 = presentation(&ctx, &bigger).unwrap();
        let small = Quotient::compute(&p, 4, Engine::La).unwrap().dims();
        let large = Quotient::compute(&p2, 4, Engine::La).unwrap().dims();
        prop_assert!(large.iter().zip(&small).all(|(a, b)| a <= b), "{large:?} vs {small:?}");
    }

    #[test]
    fn zhang_twist_is_undone_by_the_inverse(f in element(4, 5), s in prop::collection::vec(small_unit(), 3)) {
        let ctx = ctx3();
        let f = build(&ctx, &f);
        let sigma = DiagonalMap::new(s.iter().map(|&c| Scalar::from_int(c)).collect());
        let twisted = zhang_twist(&f, &sigma).unwrap();
        prop_assert_eq!(zhang_twist(&twisted, &sigma.inverse().unwrap()).unwrap(), f);
    }

    #[test]
    fn zhang_twist_keeps_the_hilbert_table(
        pairs in prop::collection::vec((prop::collection::vec(0usize..3, 2), -3i64..=3, -3i64..=3), 1..4),
        s in prop::collection::vec(small_unit(), 3),
    ) {
        // c·ab + d·ba is an eigenvector of every diagonal map, so σ preserves the ideal.
        let rels: Vec<_> = pairs.iter().map(|(w, c, d)| vec![(w.clone(), *c), (vec![w[1], w[0]], *d)]).collect();
        let ctx = ctx3();
        let Some(p) = presentation(&ctx, &rels) else { return Ok(()) };
        let twisted = zhang_twist_presentation(&p, &DiagonalMap::new(s.iter().map(|&c| Scalar::from_int(c)).collect())).unwrap();
        let before = Quotient::compute(&p, 4, Engine::Gb).unwrap().dims();
        prop_assert_eq!(Quotient::compute(&twisted, 4, Engine::Gb).unwrap().dims(), before);
    }

    #[test]
    fn goodness_routes_agree(k in 0usize..3, p in prop::collection::vec(small_unit(), 3)) {
        let ctx = ctx3();
        let sp = Superpotential::new(parse_poly::<UnitScalar>(W_POLY, &ctx).unwrap()).unwrap();
        let mut p: Vec<UnitScalar> = p.iter().map(|&c| UnitScalar::from_int(c).unwrap()).collect();
        p[k] = sp.q[k].clone();
        let direct = is_good(&sp, k, &p).unwrap().good;
        prop_assert_eq!(direct, goodness_system(&sp, k).unwrap().satisfied_by(&p));
        prop_assert_eq!(direct, matrix_goodness_system(&sp, k).unwrap().satisfied_by(&p));
        // For the polynomial ring the only condition is p_1 p_2 p_3 = 1.
        let product = p.iter().fold(UnitScalar::one(), |acc, c| acc.mul(c));
        prop_assert_eq!(direct, product.is_one());
    }
}
