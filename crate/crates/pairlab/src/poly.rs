//! Dense polynomials over a counted field.
//!
//! Canonical form: no trailing zero coefficients; the zero polynomial is the
//! empty vector, so `degree()` returns `None` for it (the "-infinity"
//! sentinel) and `Some(0)` for nonzero constants. Every coefficient
//! operation routes through the [`Field`] context and is therefore counted.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    pub coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: vec![] }
    }

    pub fn one(f: &Field) -> Poly {
        Poly {
            coeffs: vec![f.one()],
        }
    }

    pub fn x(f: &Field) -> Poly {
        Poly {
            coeffs: vec![f.zero(), f.one()],
        }
    }

    /// Build from coefficients (constant first), trimming trailing zeros.
    pub fn new(coeffs: Vec<FieldElement>) -> Poly {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn from_u64s(f: &Field, coeffs: &[u64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| f.from_u64(c)).collect())
    }

    pub fn constant(c: FieldElement) -> Poly {
        Poly::new(vec![c])
    }

    fn trim(&mut self) {
        while self.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.coeffs.pop();
        }
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self, f: &Field) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == f.one()
    }

    pub fn lead(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self, f: &Field) -> bool {
        self.lead().map(|c| *c == f.one()).unwrap_or(false)
    }

    pub fn coeff(&self, f: &Field, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn to_display(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(",")
        }
    }
}

pub fn add(f: &Field, a: &Poly, b: &Poly) -> Poly {
    let n = a.coeffs.len().max(b.coeffs.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(f.add(&a.coeff(f, i), &b.coeff(f, i)));
    }
    Poly::new(out)
}

pub fn sub(f: &Field, a: &Poly, b: &Poly) -> Poly {
    let n = a.coeffs.len().max(b.coeffs.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(f.sub(&a.coeff(f, i), &b.coeff(f, i)));
    }
    Poly::new(out)
}

pub fn neg(f: &Field, a: &Poly) -> Poly {
    Poly::new(a.coeffs.iter().map(|c| f.neg(c)).collect())
}

pub fn scale(f: &Field, s: &FieldElement, a: &Poly) -> Poly {
    Poly::new(a.coeffs.iter().map(|c| f.mul(s, c)).collect())
}

/// Schoolbook product.
pub fn mul(f: &Field, a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![f.zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    Poly::new(out)
}

/// Long division: u = q*v + r with deg r < deg v.
pub fn divmod(f: &Field, u: &Poly, v: &Poly) -> Result<(Poly, Poly)> {
    let dv = v.degree().ok_or(Error::DivisionByZero)?;
    let mut rem = u.clone();
    if rem.degree().map(|d| d < dv).unwrap_or(true) {
        return Ok((Poly::zero(), rem));
    }
    let lead_inv = if v.is_monic(f) {
        None
    } else {
        Some(f.inv(v.lead().unwrap())?)
    };
    let mut quot = vec![f.zero(); rem.coeffs.len() - dv];
    while let Some(dr) = rem.degree() {
        if dr < dv {
            break;
        }
        let mut c = rem.coeffs[dr].clone();
        if let Some(li) = &lead_inv {
            c = f.mul(&c, li);
        }
        for i in 0..=dv {
            let t = f.mul(&c, &v.coeffs[i]);
            rem.coeffs[dr - dv + i] = f.sub(&rem.coeffs[dr - dv + i], &t);
        }
        quot[dr - dv] = c;
        rem.trim();
    }
    Ok((Poly::new(quot), rem))
}

pub fn rem(f: &Field, u: &Poly, v: &Poly) -> Result<Poly> {
    Ok(divmod(f, u, v)?.1)
}

/// Monic greatest common divisor.
pub fn gcd(f: &Field, u: &Poly, v: &Poly) -> Result<Poly> {
    if u.is_zero() && v.is_zero() {
        return Err(Error::UndefinedGcd);
    }
    let (mut r0, mut r1) = (u.clone(), v.clone());
    while !r1.is_zero() {
        let r2 = rem(f, &r0, &r1)?;
        r0 = r1;
        r1 = r2;
    }
    monic(f, &r0)
}

/// Extended Euclid: returns (g, s, t) monic with s*u + t*v = g.
pub fn gcd_ext(f: &Field, u: &Poly, v: &Poly) -> Result<(Poly, Poly, Poly)> {
    if u.is_zero() && v.is_zero() {
        return Err(Error::UndefinedGcd);
    }
    let (mut r0, mut r1) = (u.clone(), v.clone());
    let (mut s0, mut s1) = (Poly::one(f), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one(f));
    while !r1.is_zero() {
        let (q, r2) = divmod(f, &r0, &r1)?;
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let lead = r0.lead().unwrap().clone();
    let li = f.inv(&lead)?;
    Ok((scale(f, &li, &r0), scale(f, &li, &s0), scale(f, &li, &t0)))
}

pub fn monic(f: &Field, a: &Poly) -> Result<Poly> {
    let lead = a.lead().ok_or(Error::DivisionByZero)?;
    if *lead == f.one() {
        return Ok(a.clone());
    }
    let li = f.inv(lead)?;
    Ok(scale(f, &li, a))
}

/// Horner evaluation; performs exactly deg(u) multiplications.
pub fn eval(f: &Field, u: &Poly, x0: &FieldElement) -> FieldElement {
    let mut it = u.coeffs.iter().rev();
    let mut acc = match it.next() {
        None => return f.zero(),
        Some(c) => c.clone(),
    };
    for c in it {
        acc = f.add(&f.mul(&acc, x0), c);
    }
    acc
}

/// Horner evaluation of a monic polynomial, skipping the multiplication by
/// the leading 1: deg(u) - 1 multiplications.
pub fn eval_monic(f: &Field, u: &Poly, x0: &FieldElement) -> FieldElement {
    debug_assert!(u.is_monic(f));
    let mut it = u.coeffs.iter().rev();
    it.next();
    let mut acc = match it.next() {
        None => return f.one(),
        Some(c) => f.add(x0, c),
    };
    for c in it {
        acc = f.add(&f.mul(&acc, x0), c);
    }
    acc
}

/// Product of two monic quadratics with the three-multiplication schedule.
pub fn mul_monic_quadratics(f: &Field, a: &Poly, b: &Poly) -> Poly {
    debug_assert_eq!(a.degree(), Some(2));
    debug_assert_eq!(b.degree(), Some(2));
    debug_assert!(a.is_monic(f) && b.is_monic(f));
    let (a1, a0) = (&a.coeffs[1], &a.coeffs[0]);
    let (b1, b0) = (&b.coeffs[1], &b.coeffs[0]);
    let m1 = f.mul(a1, b1);
    let m2 = f.mul(a0, b0);
    let m3 = f.mul(&f.add(a1, a0), &f.add(b1, b0));
    let cross = f.sub(&f.sub(&m3, &m1), &m2);
    Poly::new(vec![
        m2,
        cross,
        f.add(&f.add(a0, b0), &m1),
        f.add(a1, b1),
        f.one(),
    ])
}

/// Formal derivative (coefficient scaling by small integers, add ticks only).
pub fn derivative(f: &Field, u: &Poly) -> Poly {
    if u.coeffs.len() <= 1 {
        return Poly::zero();
    }
    let mut out = Vec::with_capacity(u.coeffs.len() - 1);
    for (i, c) in u.coeffs.iter().enumerate().skip(1) {
        out.push(f.mul_small(i as u64, c));
    }
    Poly::new(out)
}

/// Map a polynomial over F_p into an extension of the same characteristic.
pub fn embed(f_ext: &Field, a: &Poly) -> Result<Poly> {
    Ok(Poly::new(
        a.coeffs
            .iter()
            .map(|c| f_ext.embed_base(c))
            .collect::<Result<Vec<_>>>()?,
    ))
}
