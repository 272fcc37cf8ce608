use eigenmoduli_core::fock::total_number_operator;
use eigenmoduli_core::{
    build_dft_family, enumerate_basis, hopping_operator, number_operator, CoreError, FockBasis,
    HamiltonianFamily, ModelSpec, Operator, Statistics,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

/// Lattice models with up to four sites and three particles.
fn arb_spec() -> impl Strategy<Value = ModelSpec> {
    (2usize..=4, 1usize..=3, any::<bool>())
        .prop_flat_map(|(q, n, bose)| {
            let statistics = if bose || n > q {
                Statistics::Bose
            } else {
                Statistics::Fermi
            };
            let pairs = q * (q - 1) / 2;
            (
                Just((q, n, statistics)),
                prop::collection::vec(rational(), pairs),
                rational(),
                prop::collection::vec(rational(), pairs),
            )
        })
        .prop_map(|((q, n, statistics), hop, onsite, inter)| {
            let zero = || vec![vec![BigRational::from_integer(0.into()); q]; q];
            let (mut hopping, mut intersite) = (zero(), zero());
            let mut k = 0;
            for i in 0..q {
                for j in (i + 1)..q {
                    hopping[i][j] = hop[k].clone();
                    hopping[j][i] = hop[k].clone();
                    intersite[i][j] = inter[k].clone();
                    intersite[j][i] = inter[k].clone();
                    k += 1;
                }
            }
            ModelSpec {
                sites: q,
                particles: n,
                statistics,
                hopping,
                onsite,
                intersite,
                potentials: vec![BigRational::from_integer(0.into()); q],
            }
        })
}

fn squarefree_part(mut n: u64) -> u64 {
    let mut out = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    out * n
}

fn sum_of_numbers(basis: &FockBasis) -> Operator {
    (0..basis.sites()).fold(Operator::zero(basis.dim()), |acc, i| {
        acc.add(&number_operator(basis, i).unwrap()).unwrap()
    })
}

/// The family for `spec`, or `None` when construction is rightly refused:
/// the Fock space is too small for its `M` operators (`M ≥ 2·dim`), or the
/// random couplings made the operators linearly dependent.
fn family_or_too_small(spec: &ModelSpec) -> Option<HamiltonianFamily> {
    let dim = spec.basis().unwrap().dim();
    let m = 1 + spec.sites;
    match build_dft_family(spec) {
        Ok(fam) => {
            assert!(m < 2 * dim);
            assert_eq!(fam.size(), m);
            Some(fam)
        }
        Err(CoreError::InvalidFamily(_)) if m >= 2 * dim => None,
        Err(CoreError::LinearlyDependent { size, .. }) if size == m => None,
        Err(e) => panic!("{e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn family_operators_are_hermitian_and_conserve_number(spec in arb_spec()) {
        let basis = spec.basis().unwrap();
        let total = total_number_operator(&basis);
        prop_assert_eq!(&sum_of_numbers(&basis), &total);
        let Some(fam) = family_or_too_small(&spec) else { return Ok(()) };
        for op in fam.operators() {
            prop_assert!(op.is_hermitian());
            prop_assert!(op.commutator(&total).unwrap().is_zero());
        }
    }

    #[test]
    fn hopping_moves_one_particle_between_its_sites(spec in arb_spec()) {
        let basis = spec.basis().unwrap();
        let q = basis.sites();
        for i in 0..q {
            for j in (i + 1)..q {
                let hop = hopping_operator(&basis, i, j).unwrap();
                let pair = number_operator(&basis, i).unwrap().add(&number_operator(&basis, j).unwrap()).unwrap();
                prop_assert!(hop.commutator(&pair).unwrap().is_zero());
                for k in (0..q).filter(|&k| k != i && k != j) {
                    prop_assert!(hop.commutator(&number_operator(&basis, k).unwrap()).unwrap().is_zero());
                }
                // Zero only when no particle can move, e.g. a filled fermionic band.
                let moves = !hop.is_zero();
                prop_assert_eq!(moves, !hop.commutator(&number_operator(&basis, i).unwrap()).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn float_view_tracks_exact_products(spec in arb_spec()) {
        let Some(fam) = family_or_too_small(&spec) else { return Ok(()) };
        let basis = spec.basis().unwrap();
        let a = &fam.operators()[0];
        let b = hopping_operator(&basis, 0, 1).unwrap();
        let exact = a.matmul(&b).unwrap();
        let float = a.float_view().matmul(b.float_view());
        let bound = 4.0 * basis.dim() as f64 * f64::EPSILON
            * a.float_view().frobenius_norm() * b.float_view().frobenius_norm();
        for (x, y) in exact.float_view().data().iter().zip(float.data()) {
            prop_assert!((x - y).norm() <= bound.max(1e-15));
        }
    }
}

/// Every bosonic amplitude `√((n_to + 1) n_from)` is stored as an exact surd
/// whose radicands are the squarefree parts of those products.
#[test]
fn bosonic_radicands_match_transition_products() {
    for (q, n) in [(2, 2), (2, 3), (3, 3), (2, 5), (4, 2)] {
        let basis = enumerate_basis(q, n, Statistics::Bose).unwrap();
        let hop = hopping_operator(&basis, 0, 1).unwrap();
        let mut expected: Vec<u64> = basis
            .states()
            .iter()
            .filter(|s| s[1] > 0)
            .map(|s| squarefree_part(((s[0] + 1) * s[1]) as u64))
            .filter(|&r| r > 1)
            .collect();
        expected.sort_unstable();
        expected.dedup();
        assert_eq!(hop.radicands(), expected, "q={q} n={n}");
        for (src, s) in basis.states().iter().enumerate() {
            if s[1] == 0 {
                continue;
            }
            let mut t = s.clone();
            t[0] += 1;
            t[1] -= 1;
            let target = basis.position(&t).unwrap();
            let sq = hop.entry(target, src).re.square_if_monomial().unwrap();
            assert_eq!(sq, BigRational::from_integer(((s[0] + 1) * s[1]).into()));
        }
    }
}

/// `(c_i†c_j + c_j†c_i)² = n_i(1 − n_j) + n_j(1 − n_i)` for fermions,
/// which pins the Jordan–Wigner signs up to the allowed gauge.
#[test]
fn fermionic_hopping_squares_to_occupation_difference() {
    for (q, n) in [(2, 1), (3, 1), (3, 2), (4, 2), (5, 3)] {
        let basis = enumerate_basis(q, n, Statistics::Fermi).unwrap();
        assert!(hopping_operator(&basis, 0, 1).unwrap().radicands().is_empty());
        for i in 0..q {
            for j in (i + 1)..q {
                let hop = hopping_operator(&basis, i, j).unwrap();
                let ni = number_operator(&basis, i).unwrap();
                let nj = number_operator(&basis, j).unwrap();
                let both = ni.matmul(&nj).unwrap();
                let expected = ni.add(&nj).unwrap().sub(&both.scale(&BigRational::from_integer(2.into()))).unwrap();
                assert_eq!(hop.matmul(&hop).unwrap(), expected, "q={q} n={n} ({i},{j})");
            }
        }
    }
}

/// Three fermions on four sites: hopping across an occupied site picks up a
/// sign, so the two paths 0→2 through different intermediate states differ.
#[test]
fn fermionic_signs_are_not_all_positive() {
    let basis = enumerate_basis(4, 2, Statistics::Fermi).unwrap();
    let hop = hopping_operator(&basis, 0, 2).unwrap();
    let signs: Vec<f64> = hop
        .float_view()
        .data()
        .iter()
        .map(|z| z.re)
        .filter(|x| x.abs() > 0.5)
        .collect();
    assert!(signs.iter().any(|&s| s < 0.0) && signs.iter().any(|&s| s > 0.0));
}
