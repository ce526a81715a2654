use std::sync::OnceLock;

use hamrep::cartan::{build_hhat, Derivation, RestrictedAlgebra};
use hamrep::dividedpowers::{dp_mul, DPElement};
use hamrep::induction::build_induced;
use hamrep::primefield::{Fp, FpMatrix};
use hamrep::repstructure::{canonical_class, composition_series, composition_series_random, hhat_acting};
use hamrep::wittrestrict::{expected_restriction, multiset_dim, FactorMultiset};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const P: u32 = 5;

fn hhat5() -> &'static RestrictedAlgebra {
    static A: OnceLock<RestrictedAlgebra> = OnceLock::new();
    A.get_or_init(|| build_hhat(P).unwrap())
}

fn dp() -> impl Strategy<Value = DPElement> {
    prop::collection::vec(0..P, (P * P) as usize).prop_map(|v| DPElement::from_dense(P, &v))
}

fn derivation() -> impl Strategy<Value = Derivation> {
    (dp(), dp()).prop_map(|(f, g)| Derivation::new(f, g))
}

proptest! {
    #[test]
    fn field_axioms(a in 0..P, b in 0..P, c in 0..P) {
        let f = Fp::new(P).unwrap();
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.pow(a, (P - 1) as u64), 1);
        }
    }

    #[test]
    fn rref_is_idempotent(rows in prop::collection::vec(prop::collection::vec(-10i64..10, 6), 1..6)) {
        let f = Fp::new(7).unwrap();
        let m = FpMatrix::from_rows(f, &rows);
        let (r, rank, _) = m.rref();
        let (rr, rank2, _) = r.rref();
        prop_assert_eq!(&r, &rr);
        prop_assert_eq!(rank, rank2);
        for v in m.nullspace() {
            prop_assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
        }
        prop_assert_eq!(m.nullspace().len() + rank, m.cols());
    }

    #[test]
    fn divided_power_product_is_commutative_and_associative(u in dp(), v in dp(), w in dp()) {
        prop_assert_eq!(dp_mul(&u, &v), dp_mul(&v, &u));
        prop_assert_eq!(dp_mul(&dp_mul(&u, &v), &w), dp_mul(&u, &dp_mul(&v, &w)));
    }

    #[test]
    fn derivations_satisfy_leibniz(d in derivation(), u in dp(), v in dp()) {
        let lhs = d.apply(&dp_mul(&u, &v));
        let rhs = dp_mul(&d.apply(&u), &v).add(&dp_mul(&u, &d.apply(&v)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobi_on_random_elements(a in prop::collection::vec(0..P, 26), b in prop::collection::vec(0..P, 26), c in prop::collection::vec(0..P, 26)) {
        let alg = hhat5();
        let f = alg.field();
        let n = alg.dim();
        let (a, b, c) = (&a[..n], &b[..n], &c[..n]);
        let t1 = alg.bracket(a, &alg.bracket(b, c));
        let t2 = alg.bracket(b, &alg.bracket(c, a));
        let t3 = alg.bracket(c, &alg.bracket(a, b));
        prop_assert!((0..n).all(|i| f.add(f.add(t1[i], t2[i]), t3[i]) == 0));
    }

    #[test]
    fn expected_restriction_accounts_for_the_whole_module(pi in 0usize..4, a in 0u32..13, b in 0u32..13) {
        let p = [5u32, 7, 11, 13][pi];
        let w = canonical_class(p, (a % p, b % p));
        let r = (w.0 + p - w.1) % p;
        let dim = match w {
            (0, 0) => 1,
            w if w == (p - 1, p - 1) || w == (0, p - 1) => (p * p - 1) as usize,
            _ => (p * p * (r + 1)) as usize,
        };
        let m: FactorMultiset = expected_restriction(p, w);
        prop_assert_eq!(multiset_dim(p, &m), dim);
    }
}

#[test]
fn series_classes_are_independent_of_maximal_vector_choices() {
    let alg = hhat5();
    let acting = hhat_acting(alg);
    for w in [(0, 0), (1, 0), (0, 4), (3, 2), (4, 4)] {
        let z = build_induced(alg, w).unwrap();
        let base = composition_series(&z.module, &acting, Some(w)).unwrap().classes(P);
        for seed in 0..5 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let again = composition_series_random(&z.module, &acting, Some(w), &mut rng).unwrap().classes(P);
            assert_eq!(again, base, "Z{w:?}, seed {seed}");
        }
    }
}
