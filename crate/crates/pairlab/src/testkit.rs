//! Brute-force search and enumeration support for the verification suites.
//!
//! Everything here is an independent oracle: group orders come from point
//! enumeration, torsion structure from exhaustive scalar multiplication, and
//! Jacobian orders from curve point counts over F_p and F_{p^2}. The
//! property suites and the acceptance tests derive their test curves live
//! through these helpers instead of trusting frozen constants.

use std::collections::HashMap;

use crate::ec::{CurvePoint, EllipticCurve};
use crate::field::{Field, FieldElement};
use crate::jacobian::{HyperellipticCurve, MumfordDivisor};
use crate::poly::{self, Poly};

/// All points of a small curve, found by exhausting x and matching squares.
pub fn enumerate_ec_points(curve: &EllipticCurve) -> Vec<CurvePoint> {
    let f = curve.field();
    let mut roots: HashMap<FieldElement, Vec<FieldElement>> = HashMap::new();
    let mut y = f.zero();
    loop {
        roots.entry(f.sq(&y)).or_default().push(y.clone());
        match f.next_element(&y) {
            Some(n) => y = n,
            None => break,
        }
    }
    let mut pts = vec![CurvePoint::Infinity];
    let mut x = f.zero();
    loop {
        if let Some(ys) = roots.get(&curve.rhs(&x)) {
            for y in ys {
                pts.push(CurvePoint::affine(x.clone(), y.clone()));
            }
        }
        match f.next_element(&x) {
            Some(n) => x = n,
            None => break,
        }
    }
    pts
}

/// A curve with fully rational m-torsion plus that torsion subgroup.
pub struct WeilTestCurve {
    pub curve: EllipticCurve,
    pub m: u64,
    /// All m^2 points killed by m, the identity included.
    pub torsion: Vec<CurvePoint>,
}

/// Find a small curve whose full m-torsion is rational by exhaustive
/// group-structure enumeration over F_{p^k} with q below `q_cap`.
pub fn find_full_torsion_curve(m: u64, q_cap: u128) -> Option<WeilTestCurve> {
    for p in primes_below(100) {
        for k in 1..=2usize {
            let q = (p as u128).pow(k as u32);
            if q > q_cap || !(q - 1).is_multiple_of(m as u128) {
                continue;
            }
            let field = match Field::extension(p, k, None) {
                Ok(f) => f,
                Err(_) => continue,
            };
            // coefficient scan; base-subfield coefficients suffice in practice
            for a4v in 0..p.min(24) {
                for a6v in 0..p.min(24) {
                    let curve = match EllipticCurve::new(
                        field.clone(),
                        field.from_u64(a4v),
                        field.from_u64(a6v),
                    ) {
                        Ok(c) => c,
                        Err(_) => continue,
                    };
                    let pts = enumerate_ec_points(&curve);
                    if !(pts.len() as u64).is_multiple_of(m * m) {
                        continue;
                    }
                    let torsion: Vec<CurvePoint> = pts
                        .iter()
                        .filter(|pt| curve.scalar_mul(m as i128, pt).is_infinity())
                        .cloned()
                        .collect();
                    if torsion.len() as u64 == m * m {
                        return Some(WeilTestCurve { curve, m, torsion });
                    }
                }
            }
        }
    }
    None
}

/// A prime-field curve with a point of exact order m and m | p - 1.
pub struct TateTestCurve {
    pub curve: EllipticCurve,
    pub m: u64,
    pub base: CurvePoint,
    pub group_order: u64,
}

pub fn find_tate_curve(m: u64, skip: usize) -> Option<TateTestCurve> {
    let mut found = 0usize;
    for p in primes_below(400) {
        if p <= 3 || (p - 1) % m != 0 {
            continue;
        }
        let field = Field::prime(p).ok()?;
        for a4v in 0..p.min(16) {
            for a6v in 0..p.min(16) {
                let curve = match EllipticCurve::new(
                    field.clone(),
                    field.from_u64(a4v),
                    field.from_u64(a6v),
                ) {
                    Ok(c) => c,
                    Err(_) => continue,
                };
                let pts = enumerate_ec_points(&curve);
                let order = pts.len() as u64;
                if !order.is_multiple_of(m) {
                    continue;
                }
                let cof = (order / m) as i128;
                let base = pts.iter().find_map(|pt| {
                    let cand = curve.scalar_mul(cof, pt);
                    if cand.is_infinity() {
                        return None;
                    }
                    if !has_exact_order(&curve, &cand, m) {
                        return None;
                    }
                    Some(cand)
                })?;
                if found < skip {
                    found += 1;
                    continue;
                }
                return Some(TateTestCurve {
                    curve,
                    m,
                    base,
                    group_order: order,
                });
            }
        }
    }
    None
}

fn has_exact_order(curve: &EllipticCurve, pt: &CurvePoint, m: u64) -> bool {
    if !curve.scalar_mul(m as i128, pt).is_infinity() {
        return false;
    }
    for r in prime_factors(m) {
        if curve.scalar_mul((m / r) as i128, pt).is_infinity() {
            return false;
        }
    }
    true
}

pub fn primes_below(n: u64) -> Vec<u64> {
    let mut sieve = vec![true; n as usize];
    let mut out = vec![];
    for i in 2..n as usize {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < n as usize {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---------------------------------------------------------------------------
// genus-2 support
// ---------------------------------------------------------------------------

/// #C(F) for y^2 = f(x): one point at infinity plus the affine matches.
pub fn hyperelliptic_point_count(field: &Field, f_base: &Poly) -> u64 {
    let f_here = poly::embed(field, f_base).expect("same characteristic");
    let mut squares: HashMap<FieldElement, u64> = HashMap::new();
    let mut y = field.zero();
    loop {
        *squares.entry(field.sq(&y)).or_insert(0) += 1;
        match field.next_element(&y) {
            Some(n) => y = n,
            None => break,
        }
    }
    let mut count = 1u64; // infinity
    let mut x = field.zero();
    loop {
        let v = poly::eval(field, &f_here, &x);
        count += squares.get(&v).copied().unwrap_or(0);
        match field.next_element(&x) {
            Some(n) => x = n,
            None => break,
        }
    }
    count
}

/// |J(F_p)| for a genus-2 curve from the point counts over F_p and F_{p^2}
/// via the L-polynomial evaluated at 1.
pub fn jacobian_order(curve: &HyperellipticCurve) -> u64 {
    let base = curve.field();
    let p = base.p() as i128;
    let n1 = hyperelliptic_point_count(base, &curve.f) as i128;
    let ext = base.quadratic_extension().expect("prime base");
    let n2 = hyperelliptic_point_count(&ext, &curve.f) as i128;
    let s1 = p + 1 - n1;
    let s2 = p * p + 1 - n2;
    let order = 1 + p * p - (1 + p) * s1 + (s1 * s1 - s2) / 2;
    u64::try_from(order).expect("positive group order")
}

/// A genus-2 curve with m | |J| and m | p - 1, plus an m-torsion divisor of
/// full degree.
pub struct HecTestCurve {
    pub curve: HyperellipticCurve,
    pub m: u64,
    pub torsion: MumfordDivisor,
    pub order: u64,
}

/// Derive `count` distinct test curves (the first call may include the
/// well-known F_31 example if it shows up in the scan).
pub fn find_hec_curves(m: u64, count: usize, seed: u64) -> Vec<HecTestCurve> {
    use rand::{Rng, SeedableRng};
    let mut out: Vec<HecTestCurve> = vec![];
    for p in primes_below(80) {
        if out.len() >= count {
            break;
        }
        if p <= 3 || (p - 1) % m != 0 {
            continue;
        }
        let field = match Field::prime(p) {
            Ok(f) => f,
            Err(_) => continue,
        };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ p);
        'curves: for _ in 0..200 {
            let coeffs: Vec<u64> = (0..5).map(|_| rng.random_range(0..p)).collect();
            let mut full = coeffs.clone();
            full.push(1);
            let curve = match HyperellipticCurve::new(field.clone(), Poly::from_u64s(&field, &full))
            {
                Ok(c) => c,
                Err(_) => continue,
            };
            let order = jacobian_order(&curve);
            if !order.is_multiple_of(m) {
                continue;
            }
            let cof = (order / m) as i128;
            for _ in 0..40 {
                let x = curve.random_divisor(&mut rng);
                let t = curve.scalar_mul(cof, &x);
                if t.is_identity() || t.a.degree() != Some(2) {
                    continue;
                }
                if !curve.scalar_mul(m as i128, &t).is_identity() {
                    continue;
                }
                let mut exact = true;
                for r in prime_factors(m) {
                    if curve.scalar_mul((m / r) as i128, &t).is_identity() {
                        exact = false;
                        break;
                    }
                }
                if !exact {
                    continue;
                }
                out.push(HecTestCurve {
                    curve,
                    m,
                    torsion: t,
                    order,
                });
                if out.len() >= count {
                    return out;
                }
                continue 'curves;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_jacobian_order_is_1040() {
        let f = Field::prime(31).unwrap();
        let fx = Poly::from_u64s(&f, &[1, 11, 4, 2, 13, 1]);
        let c = HyperellipticCurve::new(f, fx).unwrap();
        assert_eq!(jacobian_order(&c), 1040);
    }

    #[test]
    fn full_torsion_finder_works() {
        for m in [3u64, 4, 5] {
            let tc = find_full_torsion_curve(m, 2500).expect("curve exists below the cap");
            assert_eq!(tc.torsion.len() as u64, m * m);
            for pt in &tc.torsion {
                assert!(tc.curve.scalar_mul(m as i128, pt).is_infinity());
            }
        }
    }

    #[test]
    fn tate_finder_works() {
        for m in [5u64, 7] {
            let tc = find_tate_curve(m, 0).expect("curve exists");
            assert_eq!((tc.curve.field().p() - 1) % m, 0);
            assert!(tc.curve.scalar_mul(m as i128, &tc.base).is_infinity());
            assert!(!tc.base.is_infinity());
            assert_eq!(tc.group_order % m, 0);
        }
    }

    #[test]
    fn hec_finder_works() {
        let curves = find_hec_curves(5, 2, 7);
        assert_eq!(curves.len(), 2);
        for tc in &curves {
            assert!(tc.curve.scalar_mul(5, &tc.torsion).is_identity());
            assert!(!tc.torsion.is_identity());
            assert_eq!(tc.order % 5, 0);
        }
    }
}
