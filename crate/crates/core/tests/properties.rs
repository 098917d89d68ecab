use proptest::prelude::*;

use albertkit_core::corestriction::{albert_value, TensorAlgebra};
use albertkit_core::field::{Elem, Field};
use albertkit_core::form::QuadraticForm;
use albertkit_core::oracle::{self, IsotropyVerdict};
use albertkit_core::quaternion::{QuatElem, Quaternion};
use albertkit_core::transfer::transfer;

fn q_sqrt2() -> Field {
    let q = Field::rationals();
    Field::quadratic(&q, &q.zero(), &q.from_i64(2), "r").unwrap()
}

/// `a + b r` over Q(sqrt2) from small integers.
fn k_elem(k: &Field, a: i64, b: i64) -> Elem {
    k.from_i64(a) + k.from_i64(b) * k.generator()
}

fn quat_from(q: &Quaternion, c: &[(i64, i64)]) -> QuatElem {
    let k = q.base();
    q.elem(std::array::from_fn(|i| k_elem(k, c[i].0, c[i].1)))
}

fn coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-6i64..=6, -6i64..=6), 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trd_is_linear_and_nrd_multiplicative(x in coeffs(), y in coeffs()) {
        let k = q_sqrt2();
        let q = Quaternion::new(&k, &k.one(), &k.from_i64(-3), &k_elem(&k, 1, 1)).unwrap();
        let (x, y) = (quat_from(&q, &x), quat_from(&q, &y));
        prop_assert_eq!(q.trd(&q.add(&x, &y)), q.trd(&x) + q.trd(&y));
        prop_assert_eq!(q.nrd(&q.mul(&x, &y)), q.nrd(&x) * q.nrd(&y));
        // x sigma(x) = Nrd(x)
        prop_assert_eq!(q.mul(&x, &q.sigma(&x)), q.scalar(&q.nrd(&x)));
    }

    #[test]
    fn switch_is_a_semilinear_involution(x in coeffs(), y in coeffs(), a in -5i64..5, b in -5i64..5) {
        let k = q_sqrt2();
        let q = Quaternion::hamilton(&k).unwrap();
        let t = TensorAlgebra::new(&q).unwrap();
        let v = t.pure(&quat_from(&q, &x), &quat_from(&q, &y));
        let c = k_elem(&k, a, b);
        prop_assert_eq!(t.switch(&t.switch(&v)), v.clone());
        prop_assert_eq!(t.switch(&t.scale(&c, &v)), t.scale(&c.conj(), &t.switch(&v)));
    }

    #[test]
    fn switch_is_multiplicative(x in coeffs(), y in coeffs(), u in coeffs(), w in coeffs()) {
        let k = q_sqrt2();
        let q = Quaternion::hamilton(&k).unwrap();
        let t = TensorAlgebra::new(&q).unwrap();
        let a = t.pure(&quat_from(&q, &x), &quat_from(&q, &y));
        let b = t.pure(&quat_from(&q, &u), &quat_from(&q, &w));
        prop_assert_eq!(t.switch(&t.mul(&a, &b)), t.mul(&t.switch(&a), &t.switch(&b)));
    }

    #[test]
    fn albert_values_lie_in_the_base(c in coeffs()) {
        let k = q_sqrt2();
        let q = Quaternion::hamilton(&k).unwrap();
        // pure quaternions have Trd = 0
        let y = q.elem([k.zero(), k_elem(&k, c[1].0, c[1].1), k_elem(&k, c[2].0, c[2].1), k_elem(&k, c[3].0, c[3].1)]);
        let v = albert_value(&q, &k.kappa(), &y).unwrap();
        prop_assert_eq!(v.field(), &Field::rationals());
    }

    #[test]
    fn transfer_of_diagonal_forms_stays_nonsingular(a in 1i64..20, b in -20i64..20, c in 1i64..20) {
        let k = q_sqrt2();
        let phi = QuadraticForm::diagonal(&k, &[k.from_i64(a), k_elem(&k, b, 1), k.from_i64(-c)]);
        let t = transfer(&phi).unwrap();
        prop_assert_eq!(t.dim(), 6);
        prop_assert!(t.classify().unwrap().nonsingular);
    }

    #[test]
    fn rational_witnesses_are_zeros(a in -30i64..30, b in -30i64..30, c in -30i64..30, d in -30i64..30) {
        prop_assume!(a != 0 && b != 0 && c != 0 && d != 0);
        let q = Field::rationals();
        let phi = QuadraticForm::diagonal(&q, &[q.from_i64(a), q.from_i64(b), q.from_i64(c), q.from_i64(d)]);
        match oracle::isotropy(&phi) {
            IsotropyVerdict::Isotropic(w) => {
                prop_assert!(w.iter().any(|x| !x.is_zero()));
                prop_assert!(phi.evaluate(&w).unwrap().is_zero());
            }
            IsotropyVerdict::Anisotropic(_) => {
                // no small zero either
                prop_assert!(!oracle::bounded_search(&phi, 2).is_isotropic());
            }
            IsotropyVerdict::Unknown(_) => prop_assert!(false, "Q oracle returned unknown"),
        }
    }

    #[test]
    fn finite_field_inverse_and_frobenius(e in 1u64..9) {
        let f = Field::finite(9).unwrap();
        let x = f.generator().pow(e);
        prop_assert!((x.clone() * x.inv().unwrap()).is_one());
        // Frobenius is additive in characteristic 3
        let y = f.one() + f.generator();
        prop_assert_eq!((x.clone() + y.clone()).pow(3), x.pow(3) + y.pow(3));
    }
}
