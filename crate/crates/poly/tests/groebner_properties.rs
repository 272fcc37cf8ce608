use eigenmoduli_poly::{
    buchberger, divide, eliminate, gcd, is_groebner_basis, is_reduced, normal_form,
    s_polynomial, squarefree_part, MPoly, Monomial, MonomialOrder,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const ARITY: usize = 3;

fn arb_order() -> impl Strategy<Value = MonomialOrder> {
    prop_oneof![
        Just(MonomialOrder::Lex),
        Just(MonomialOrder::GrevLex),
        (1usize..ARITY).prop_map(|front| MonomialOrder::Block { front }),
    ]
}

fn arb_poly(max_deg: u16, max_terms: usize) -> impl Strategy<Value = MPoly> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_deg, ARITY), -6i64..=6, 1i64..=3),
        1..=max_terms,
    )
    .prop_map(|terms| {
        MPoly::from_terms(
            ARITY,
            MonomialOrder::GrevLex,
            terms
                .into_iter()
                .map(|(e, n, d)| {
                    (
                        Monomial::from_exponents(&e),
                        BigRational::new(BigInt::from(n), BigInt::from(d)),
                    )
                })
                .collect(),
        )
    })
}

fn small_system() -> impl Strategy<Value = Vec<MPoly>> {
    prop::collection::vec(arb_poly(2, 3), 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bases_are_reduced_groebner_bases(gens in small_system(), order in arb_order()) {
        prop_assume!(gens.iter().any(|g| !g.is_zero()));
        let basis = buchberger(&gens, order).unwrap();
        prop_assert!(is_groebner_basis(&basis, order).unwrap());
        prop_assert!(is_reduced(&basis, order));
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                let s = s_polynomial(&basis[i], &basis[j], order).unwrap();
                prop_assert!(normal_form(&s, &basis, order).unwrap().is_zero());
            }
        }
        for g in &gens {
            prop_assert!(normal_form(&g.with_order(order), &basis, order).unwrap().is_zero());
        }
    }

    #[test]
    fn division_identity(p in arb_poly(3, 5), divs in prop::collection::vec(arb_poly(2, 3), 1..=3), order in arb_order()) {
        let p = p.with_order(order);
        let divs: Vec<MPoly> = divs.into_iter().filter(|d| !d.is_zero()).map(|d| d.with_order(order)).collect();
        prop_assume!(!divs.is_empty());
        let (qs, r) = divide(&p, &divs, order).unwrap();
        let mut acc = r.clone();
        for (q, d) in qs.iter().zip(&divs) {
            acc = acc.add(&q.mul(d).unwrap()).unwrap();
        }
        prop_assert_eq!(acc, p);
        for (m, _) in r.terms() {
            prop_assert!(divs.iter().all(|d| !d.leading_monomial().unwrap().divides(m)));
        }
    }

    #[test]
    fn squarefree_part_of_a_square(p in arb_poly(1, 3)) {
        prop_assume!(!p.is_constant());
        let sq = p.mul(&p).unwrap();
        prop_assert_eq!(squarefree_part(&sq).unwrap(), p.primitive());
    }

    #[test]
    fn gcd_recovers_common_factor(a in arb_poly(1, 2), b in arb_poly(1, 2), c in arb_poly(1, 2)) {
        prop_assume!(!a.is_constant() && !b.is_constant() && !c.is_constant());
        let g = gcd(&a.mul(&c).unwrap(), &b.mul(&c).unwrap()).unwrap();
        // c divides the gcd
        prop_assert!(eigenmoduli_poly::div_exact(&g, &c).is_ok());
    }
}

/// Normal forms are idempotent, `NF(NF(p)) = NF(p)`: 50 seeded bases times
/// 20 seeded polynomials, 1,000 instances in all.
#[test]
fn normal_form_is_idempotent_on_1000_instances() {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

    let mut runner = TestRunner::new_with_rng(
        Config::default(),
        TestRng::from_seed(RngAlgorithm::ChaCha, &[7u8; 32]),
    );
    let systems = (small_system(), arb_order());
    let polys = arb_poly(4, 6);
    let mut instances = 0;
    while instances < 1000 {
        let (gens, order) = systems.new_tree(&mut runner).unwrap().current();
        if gens.iter().all(|g| g.is_zero()) {
            continue;
        }
        let basis = buchberger(&gens, order).unwrap();
        for _ in 0..20 {
            let p = polys.new_tree(&mut runner).unwrap().current().with_order(order);
            let once = normal_form(&p, &basis, order).unwrap();
            let twice = normal_form(&once, &basis, order).unwrap();
            assert_eq!(once, twice);
            instances += 1;
        }
    }
}

#[test]
fn twisted_cubic_relation_up_to_unit() {
    // (t, y, z) with y = t², z = t³.
    let o = MonomialOrder::GrevLex;
    let f1 = MPoly::from_int_terms(3, o, &[(&[0, 1, 0], 1, 1), (&[2, 0, 0], -1, 1)]);
    let f2 = MPoly::from_int_terms(3, o, &[(&[0, 0, 1], 1, 1), (&[3, 0, 0], -1, 1)]);
    let elim = eliminate(&[f1, f2], 1).unwrap();
    assert_eq!(elim.len(), 1);
    let target = MPoly::from_int_terms(2, o, &[(&[3, 0], 1, 1), (&[0, 2], -1, 1)]);
    let g = &elim[0];
    let unit = g.leading_coefficient().unwrap() / target.leading_coefficient().unwrap();
    assert_eq!(*g, target.scale(&unit));
}

#[test]
fn circle_parametrization() {
    // x = (1−t²)/(1+t²), y = 2t/(1+t²) ⇒ x² + y² − 1.
    let o = MonomialOrder::GrevLex;
    // (t, x, y): (1+t²)x − (1−t²), (1+t²)y − 2t
    let g1 = MPoly::from_int_terms(
        3,
        o,
        &[(&[0, 1, 0], 1, 1), (&[2, 1, 0], 1, 1), (&[0, 0, 0], -1, 1), (&[2, 0, 0], 1, 1)],
    );
    let g2 = MPoly::from_int_terms(
        3,
        o,
        &[(&[0, 0, 1], 1, 1), (&[2, 0, 1], 1, 1), (&[1, 0, 0], -2, 1)],
    );
    let elim = eliminate(&[g1, g2], 1).unwrap();
    let circle = MPoly::from_int_terms(2, o, &[(&[2, 0], 1, 1), (&[0, 2], 1, 1), (&[0, 0], -1, 1)]);
    assert!(elim.contains(&circle.primitive()), "{elim:?}");
}
