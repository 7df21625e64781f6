//! Property-based invariants over randomized inputs.

use proptest::prelude::*;

use pairlab::chain::{self, Policy};
use pairlab::field::Field;
use pairlab::poly::{self, Poly};

fn poly_strategy(p: u64, max_deg: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..p, 0..=max_deg + 1)
}

proptest! {
    #[test]
    fn divmod_recomposes(u in poly_strategy(31, 6), v in poly_strategy(31, 4)) {
        let f = Field::prime(31).unwrap();
        let u = Poly::from_u64s(&f, &u);
        let v = Poly::from_u64s(&f, &v);
        prop_assume!(!v.is_zero());
        let (q, r) = poly::divmod(&f, &u, &v).unwrap();
        if let (Some(dr), Some(dv)) = (r.degree(), v.degree()) {
            prop_assert!(dr < dv);
        }
        let back = poly::add(&f, &poly::mul(&f, &q, &v), &r);
        prop_assert_eq!(back, u);
    }

    #[test]
    fn gcd_divides_operands(u in poly_strategy(31, 5), v in poly_strategy(31, 5)) {
        let f = Field::prime(31).unwrap();
        let u = Poly::from_u64s(&f, &u);
        let v = Poly::from_u64s(&f, &v);
        prop_assume!(!(u.is_zero() && v.is_zero()));
        let g = poly::gcd(&f, &u, &v).unwrap();
        prop_assert!(g.is_monic(&f));
        for w in [&u, &v] {
            if !w.is_zero() {
                prop_assert!(poly::rem(&f, w, &g).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn chains_replay_to_m(m in 1u64..1_000_000, naf in any::<bool>()) {
        let policy = if naf { Policy::Naf } else { Policy::Binary };
        let steps = chain::build_chain(m, policy).unwrap();
        prop_assert!(chain::verify_chain(&steps, m));
        let bits = 64 - m.leading_zeros().min(63);
        prop_assert!(steps.len() <= 2 * bits as usize + 1);
        if policy == Policy::Binary {
            prop_assert!(steps.iter().all(|s| s.kind != chain::StepKind::Subtract));
        }
    }

    #[test]
    fn field_inverse_cancels(a in 1u64..31, b in 1u64..31) {
        let f = Field::prime(31).unwrap();
        let x = f.from_u64(a);
        let y = f.from_u64(b);
        let q = f.div(&x, &y).unwrap();
        prop_assert_eq!(f.mul(&q, &y), x);
        prop_assert_eq!(f.mul(&f.inv(&y).unwrap(), &y), f.one());
    }

    #[test]
    fn cantor_closure(seed in 0u64..5000) {
        use rand::SeedableRng;
        let f = Field::prime(31).unwrap();
        let fx = Poly::from_u64s(&f, &[1, 11, 4, 2, 13, 1]);
        let c = pairlab::jacobian::HyperellipticCurve::new(f, fx).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let x = c.random_divisor(&mut rng);
        let y = c.random_divisor(&mut rng);
        let sum = c.add(&x, &y);
        prop_assert!(c.check_divisor(&sum).is_ok());
        prop_assert_eq!(c.add(&y, &x), sum);
    }
}
