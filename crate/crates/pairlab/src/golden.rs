//! The embedded genus-2 worked example over F_31 and its verification suite.
//!
//! Curve: y^2 = x^5 + 13x^4 + 2x^3 + 4x^2 + 11x + 1 over F_31, Jacobian of
//! order 1040. D is a 5-torsion divisor, E an order-260 divisor, and the
//! squared Tate pairing values of their small multiples are pinned below,
//! together with a closed form for the degree-5 intermediate function that
//! is evaluated directly as an independent cross-check of the iterative
//! engine.

use serde::Serialize;

use crate::error::Result;
use crate::field::Field;
use crate::hec_pairings::{squared_tate_hec, EvalPoints, HecPairingOpts};
use crate::jacobian::{HyperellipticCurve, MumfordDivisor};
use crate::poly::{self, Poly};
use crate::testkit;

pub const DEMO_P: u64 = 31;
pub const DEMO_M: u64 = 5;
pub const DEMO_ORDER: u64 = 1040;
/// f coefficients, constant term first.
pub const DEMO_F: [u64; 6] = [1, 11, 4, 2, 13, 1];
pub const DEMO_D_A: [u64; 3] = [15, 23, 1];
pub const DEMO_D_B: [u64; 2] = [28, 13];
pub const DEMO_E_A: [u64; 3] = [2, 4, 1];
pub const DEMO_E_B: [u64; 2] = [20, 29];
pub const DEMO_2D_A: [u64; 3] = [9, 25, 1];
pub const DEMO_2D_B: [u64; 2] = [6, 10];
pub const DEMO_3D_A: [u64; 3] = [9, 25, 1];
pub const DEMO_3D_B: [u64; 2] = [25, 21];
pub const DEMO_2E_A: [u64; 3] = [3, 1, 1];
pub const DEMO_2E_B: [u64; 2] = [3, 26];
/// v_5 values for (D,E), (2D,E), (D,2E), (3D,E).
pub const DEMO_PAIRING_VALUES: [u64; 4] = [4, 16, 16, 2];

/// Closed form of the degree-5 intermediate function for D:
/// (x + 26)^2 (x^4 + 19x^3 + 23x^2 + 16x + 19)(x^2 + 23x + 15)
/// divided by (x^3 + 6x^2 + 9x + 21 + y).
pub const DEMO_H_LINEAR: [u64; 2] = [26, 1];
pub const DEMO_H_QUARTIC: [u64; 5] = [19, 16, 23, 19, 1];
pub const DEMO_H_DENOM: [u64; 4] = [21, 9, 6, 1];

pub fn demo_curve() -> HyperellipticCurve {
    let f = Field::prime(DEMO_P).expect("31 is prime");
    HyperellipticCurve::new(f.clone(), Poly::from_u64s(&f, &DEMO_F)).expect("valid model")
}

pub fn demo_divisors(curve: &HyperellipticCurve) -> (MumfordDivisor, MumfordDivisor) {
    let d = curve
        .divisor_from_u64s(&DEMO_D_A, &DEMO_D_B)
        .expect("valid divisor");
    let e = curve
        .divisor_from_u64s(&DEMO_E_A, &DEMO_E_B)
        .expect("valid divisor");
    (d, e)
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub expected: String,
    pub actual: String,
}

impl Check {
    fn compare<T: PartialEq + std::fmt::Debug>(name: &str, expected: T, actual: T) -> Check {
        Check {
            name: name.to_string(),
            pass: expected == actual,
            expected: format!("{expected:?}"),
            actual: format!("{actual:?}"),
        }
    }
}

/// Run every check of the embedded worked example.
pub fn run_worked_example(seed: u64) -> Result<Vec<Check>> {
    use rand::SeedableRng;
    let curve = demo_curve();
    let f = curve.field();
    let (d, e) = demo_divisors(&curve);
    let mut checks = vec![];

    // group order, twice: L-polynomial point counts and annihilation
    let order = testkit::jacobian_order(&curve);
    checks.push(Check::compare("jacobian order", DEMO_ORDER, order));
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut killed = true;
    for _ in 0..20 {
        let x = curve.random_divisor(&mut rng);
        killed = killed && curve.scalar_mul(DEMO_ORDER as i128, &x).is_identity();
    }
    checks.push(Check::compare(
        "1040 * X = id for 20 random X",
        true,
        killed,
    ));

    // pinned small multiples
    let two_d = curve.add(&d, &d);
    let three_d = curve.add(&d, &two_d);
    let two_e = curve.add(&e, &e);
    checks.push(Check::compare(
        "2D",
        curve.divisor_from_u64s(&DEMO_2D_A, &DEMO_2D_B)?,
        two_d.clone(),
    ));
    checks.push(Check::compare(
        "3D",
        curve.divisor_from_u64s(&DEMO_3D_A, &DEMO_3D_B)?,
        three_d.clone(),
    ));
    checks.push(Check::compare(
        "2E",
        curve.divisor_from_u64s(&DEMO_2E_A, &DEMO_2E_B)?,
        two_e.clone(),
    ));
    checks.push(Check::compare(
        "3D = -2D (5-torsion)",
        curve.neg(&two_d),
        three_d.clone(),
    ));
    checks.push(Check::compare(
        "5D = id",
        true,
        curve.scalar_mul(DEMO_M as i128, &d).is_identity(),
    ));

    // the four pairing values
    let opts = HecPairingOpts::default();
    let pairs = [
        ("v5(D,E)", &d, &e, DEMO_PAIRING_VALUES[0]),
        ("v5(2D,E)", &two_d, &e, DEMO_PAIRING_VALUES[1]),
        ("v5(D,2E)", &d, &two_e, DEMO_PAIRING_VALUES[2]),
        ("v5(3D,E)", &three_d, &e, DEMO_PAIRING_VALUES[3]),
    ];
    for (name, dd, ee, want) in pairs {
        let got = squared_tate_hec(&curve, dd, ee, DEMO_M, &opts)?;
        checks.push(Check::compare(name, f.from_u64(want), got.value));
    }

    // direct evaluation of the closed-form intermediate function at
    // Q1 - Q1' + Q2 - Q2', raised to (q-1)/m
    let ev = EvalPoints::for_divisor(&curve, &e)?;
    let ef = &ev.field;
    let lin = poly::embed(ef, &Poly::from_u64s(f, &DEMO_H_LINEAR))?;
    let quart = poly::embed(ef, &Poly::from_u64s(f, &DEMO_H_QUARTIC))?;
    let a_d = poly::embed(ef, &Poly::from_u64s(f, &DEMO_D_A))?;
    let den = poly::embed(ef, &Poly::from_u64s(f, &DEMO_H_DENOM))?;
    let h_at = |x: &crate::field::FieldElement,
                y: &crate::field::FieldElement|
     -> Result<crate::field::FieldElement> {
        let l = poly::eval(ef, &lin, x);
        let num = ef.mul(
            &ef.mul(&ef.sq(&l), &poly::eval(ef, &quart, x)),
            &poly::eval(ef, &a_d, x),
        );
        let dval = ef.add(&poly::eval(ef, &den, x), y);
        ef.div(&num, &dval)
    };
    let (q1, q2) = (&ev.points[0], &ev.points[1]);
    let h_q1 = h_at(&q1.0, &q1.1)?;
    let h_q2 = h_at(&q2.0, &q2.1)?;
    let h_q1m = h_at(&q1.0, &ef.neg(&q1.1))?;
    let h_q2m = h_at(&q2.0, &ef.neg(&q2.1))?;
    let ratio = ef.div(&ef.mul(&h_q1, &h_q2), &ef.mul(&h_q1m, &h_q2m))?;
    let ratio = if ev.extended {
        ef.descend_to_base(&ratio).expect("Galois-stable ratio")
    } else {
        ratio
    };
    let exponent = (f.q() - 1) / DEMO_M as u128;
    let direct = f.pow(&ratio, exponent);
    checks.push(Check::compare(
        "closed-form h evaluation ^((q-1)/m)",
        f.from_u64(DEMO_PAIRING_VALUES[0]),
        direct,
    ));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_all_pass() {
        let checks = run_worked_example(7).unwrap();
        assert!(checks.len() >= 12);
        for c in &checks {
            assert!(
                c.pass,
                "{}: expected {} got {}",
                c.name, c.expected, c.actual
            );
        }
    }
}
