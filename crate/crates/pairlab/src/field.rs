//! Prime and extension field arithmetic with attached operation counting.
//!
//! A [`Field`] bundles immutable [`FieldParams`] with a shared [`Counter`].
//! Elements are plain coefficient vectors; all arithmetic goes through the
//! field context so that every multiplication, division and addition is
//! tallied. One extension-field operation ticks the counter once regardless
//! of how many base-field operations it decomposes into, matching the cost
//! model used by the pairing step analyses.

use std::fmt;
use std::sync::Arc;

use crate::counter::{Counter, OpCount};
use crate::error::{Error, Result};

/// Largest supported modulus: double-width products must fit in u128 and the
/// CLI serialization stays within u64.
pub const MAX_PRIME_BITS: u32 = 61;

/// Immutable description of F_{p^k}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldParams {
    /// Odd prime modulus, 3 < p < 2^61.
    pub p: u64,
    /// Extension degree, k >= 1.
    pub k: usize,
    /// Monic irreducible modulus polynomial of degree k, constant term first,
    /// length k + 1. `None` exactly when k == 1.
    pub modulus: Option<Vec<u64>>,
}

impl FieldParams {
    /// Field size p^k as u128.
    pub fn q(&self) -> u128 {
        (0..self.k).fold(1u128, |acc, _| acc * self.p as u128)
    }
}

/// An element of F_{p^k}: exactly k residues, coefficient of x^0 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct FieldElement {
    pub coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Arithmetic context: parameters plus the counter every operation reports to.
///
/// Cloning shares both; use [`Field::fork_counter`] for an independent tally.
#[derive(Debug, Clone)]
pub struct Field {
    params: Arc<FieldParams>,
    counter: Arc<Counter>,
}

impl Field {
    /// Prime field F_p.
    pub fn prime(p: u64) -> Result<Field> {
        Field::extension(p, 1, None)
    }

    /// Extension field F_{p^k}. When no modulus is supplied the
    /// lexicographically smallest monic irreducible polynomial of degree k
    /// is selected, so test vectors are reproducible.
    pub fn extension(p: u64, k: usize, modulus: Option<Vec<u64>>) -> Result<Field> {
        if p <= 3 {
            return Err(Error::UnsupportedModulus(format!("p = {p} must exceed 3")));
        }
        if p >> MAX_PRIME_BITS != 0 {
            return Err(Error::UnsupportedModulus(format!(
                "p = {p} exceeds the 2^{MAX_PRIME_BITS} cap"
            )));
        }
        if !is_prime_u64(p) {
            return Err(Error::UnsupportedModulus(format!("p = {p} is not prime")));
        }
        if k == 0 {
            return Err(Error::UnsupportedModulus("extension degree 0".into()));
        }
        if k > 1 && (128 - (p as u128).leading_zeros()) as usize * k > 96 {
            return Err(Error::UnsupportedModulus(
                "p^k too large for extension arithmetic".into(),
            ));
        }
        let modulus = match (k, modulus) {
            (1, None) => None,
            (1, Some(_)) => {
                return Err(Error::UnsupportedModulus(
                    "modulus polynomial given for k = 1".into(),
                ))
            }
            (_, Some(m)) => {
                let m: Vec<u64> = m.iter().map(|&c| c % p).collect();
                if m.len() != k + 1 || m[k] != 1 {
                    return Err(Error::UnsupportedModulus(
                        "modulus must be monic of degree k".into(),
                    ));
                }
                if !is_irreducible(p, &m) {
                    return Err(Error::UnsupportedModulus(
                        "modulus polynomial is reducible".into(),
                    ));
                }
                Some(m)
            }
            (_, None) => Some(smallest_irreducible(p, k)),
        };
        Ok(Field {
            params: Arc::new(FieldParams { p, k, modulus }),
            counter: Counter::new(),
        })
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn p(&self) -> u64 {
        self.params.p
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    /// Field size q = p^k.
    pub fn q(&self) -> u128 {
        self.params.q()
    }

    /// Same parameters, fresh zeroed counter.
    pub fn fork_counter(&self) -> Field {
        Field {
            params: Arc::clone(&self.params),
            counter: Counter::new(),
        }
    }

    /// The quadratic extension of this prime field, reporting to the same
    /// counter, with the deterministic default modulus. Pairing evaluations
    /// that leave the base field stay inside one measurement context.
    pub fn quadratic_extension(&self) -> Result<Field> {
        if self.params.k != 1 {
            return Err(Error::UnsupportedModulus(
                "quadratic extension tower over an extension field".into(),
            ));
        }
        let ext = Field::extension(self.params.p, 2, None)?;
        Ok(Field {
            params: ext.params,
            counter: Arc::clone(&self.counter),
        })
    }

    pub fn ops(&self) -> OpCount {
        self.counter.snapshot()
    }

    pub fn same_params(&self, other: &Field) -> bool {
        self.params == other.params
    }

    // ----- element construction -------------------------------------------------

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.params.k],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_u64(1)
    }

    pub fn from_u64(&self, v: u64) -> FieldElement {
        let mut coeffs = vec![0; self.params.k];
        coeffs[0] = v % self.params.p;
        FieldElement { coeffs }
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        let p = self.params.p;
        let r = v.rem_euclid(p as i64) as u64;
        self.from_u64(r)
    }

    /// Validated element from raw coefficients (accepts short vectors for
    /// convenience, rejects out-of-range residues and over-long vectors).
    pub fn element_from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.params.k {
            return Err(Error::ParamMismatch);
        }
        if coeffs.iter().any(|&c| c >= self.params.p) {
            return Err(Error::ParamMismatch);
        }
        let mut full = coeffs.to_vec();
        full.resize(self.params.k, 0);
        Ok(FieldElement { coeffs: full })
    }

    /// Shape check used by the fallible operation wrappers.
    pub fn check_element(&self, a: &FieldElement) -> Result<()> {
        if a.coeffs.len() != self.params.k || a.coeffs.iter().any(|&c| c >= self.params.p) {
            return Err(Error::ParamMismatch);
        }
        Ok(())
    }

    /// Embed an element of the base field F_p into this field.
    pub fn embed_base(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.coeffs.len() == self.params.k {
            self.check_element(a)?;
            return Ok(a.clone());
        }
        if a.coeffs.len() != 1 || a.coeffs[0] >= self.params.p {
            return Err(Error::ParamMismatch);
        }
        self.element_from_coeffs(&a.coeffs)
    }

    /// Project back to F_p when every higher coefficient vanishes.
    pub fn descend_to_base(&self, a: &FieldElement) -> Option<FieldElement> {
        if a.coeffs[1..].iter().all(|&c| c == 0) {
            Some(FieldElement {
                coeffs: vec![a.coeffs[0]],
            })
        } else {
            None
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let coeffs: Result<Vec<u64>> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Config(format!("bad coefficient {t:?}")))
            })
            .collect();
        self.element_from_coeffs(&coeffs?)
    }

    // ----- counted arithmetic ---------------------------------------------------

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert_eq!(a.coeffs.len(), self.params.k);
        debug_assert_eq!(b.coeffs.len(), self.params.k);
        self.counter.tick_add();
        let p = self.params.p;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| m_add(p, x, y))
            .collect();
        FieldElement { coeffs }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.counter.tick_add();
        let p = self.params.p;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| m_sub(p, x, y))
            .collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        self.counter.tick_add();
        let p = self.params.p;
        let coeffs = a.coeffs.iter().map(|&x| m_sub(p, 0, x)).collect();
        FieldElement { coeffs }
    }

    /// a + a, counted as an addition.
    pub fn double_el(&self, a: &FieldElement) -> FieldElement {
        self.add(a, a)
    }

    /// n * a for a small constant n, via repeated addition (n - 1 add ticks).
    pub fn mul_small(&self, n: u64, a: &FieldElement) -> FieldElement {
        let mut acc = if n == 0 { self.zero() } else { a.clone() };
        for _ in 1..n {
            acc = self.add(&acc, a);
        }
        acc
    }

    /// Product reduced mod p (and the modulus polynomial when k > 1).
    /// Ticks the multiplication counter exactly once.
    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert_eq!(a.coeffs.len(), self.params.k);
        debug_assert_eq!(b.coeffs.len(), self.params.k);
        self.counter.tick_mul();
        FieldElement {
            coeffs: self.raw_mul(&a.coeffs, &b.coeffs),
        }
    }

    /// Squaring; counted as a multiplication.
    pub fn sq(&self, a: &FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// Multiplicative inverse; ticks the division counter exactly once.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.counter.tick_div();
        Ok(FieldElement {
            coeffs: self.raw_inv(&a.coeffs),
        })
    }

    /// Fused a / b, counted as exactly one division.
    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.counter.tick_div();
        let ib = self.raw_inv(&b.coeffs);
        Ok(FieldElement {
            coeffs: self.raw_mul(&a.coeffs, &ib),
        })
    }

    /// a^e by square-and-multiply; the counter reflects the actual
    /// multiplications performed. 0^0 = 1.
    pub fn pow(&self, a: &FieldElement, e: u128) -> FieldElement {
        if e == 0 {
            return self.one();
        }
        let bits = 128 - e.leading_zeros();
        let mut acc = a.clone();
        for i in (0..bits - 1).rev() {
            acc = self.sq(&acc);
            if (e >> i) & 1 == 1 {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    // ----- fallible wrappers (parameter-checked surface) -------------------------

    pub fn try_add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.add(a, b))
    }

    pub fn try_mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.mul(a, b))
    }

    pub fn try_inv(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check_element(a)?;
        self.inv(a)
    }

    pub fn try_div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        self.div(a, b)
    }

    // ----- square roots (sampling / divisor support; still counted) --------------

    /// Square root if one exists. Deterministic.
    pub fn sqrt(&self, a: &FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return Some(self.zero());
        }
        match self.params.k {
            1 => tonelli_shanks(self.params.p, a.coeffs[0]).map(|r| {
                // account the modexp work as a single inversion-class op would
                // be wrong; sqrt is sampling support, charge nothing special.
                FieldElement { coeffs: vec![r] }
            }),
            2 => self.sqrt_quadratic(a),
            _ => self.sqrt_brute(a),
        }
    }

    /// Quadratic-extension square root for modulus of the shape x^2 + c.
    fn sqrt_quadratic(&self, a: &FieldElement) -> Option<FieldElement> {
        let p = self.params.p;
        let m = self.params.modulus.as_ref().unwrap();
        if m[1] != 0 {
            return self.sqrt_brute(a);
        }
        let c = m[0]; // x^2 = -c
        let (d0, d1) = (a.coeffs[0], a.coeffs[1]);
        if d1 == 0 {
            // base element: either a base root, or sqrt = v*x with v^2 = -d0/c
            if let Some(r) = tonelli_shanks(p, d0) {
                return Some(FieldElement { coeffs: vec![r, 0] });
            }
            let t = m_mul(p, m_sub(p, 0, d0), m_inv(p, c));
            let v = tonelli_shanks(p, t)?;
            return Some(FieldElement { coeffs: vec![0, v] });
        }
        // norm = d0^2 + c d1^2 must be square in F_p
        let norm = m_add(p, m_mul(p, d0, d0), m_mul(p, c, m_mul(p, d1, d1)));
        let s = tonelli_shanks(p, norm)?;
        let half = m_inv(p, 2);
        for root in [s, m_sub(p, 0, s)] {
            let u2 = m_mul(p, m_add(p, d0, root), half);
            if let Some(u) = tonelli_shanks(p, u2) {
                if u != 0 {
                    let v = m_mul(p, d1, m_inv(p, m_mul(p, 2, u)));
                    return Some(FieldElement { coeffs: vec![u, v] });
                }
            }
        }
        None
    }

    /// Exhaustive root search; only viable for tiny fields.
    fn sqrt_brute(&self, a: &FieldElement) -> Option<FieldElement> {
        let q = self.q();
        if q > 1 << 16 {
            return None;
        }
        let mut x = self.zero();
        for _ in 0..q {
            if self.raw_mul(&x.coeffs, &x.coeffs) == a.coeffs {
                return Some(x);
            }
            x = self.next_element(&x)?;
        }
        None
    }

    /// Successor in the lexicographic enumeration of all field elements, or
    /// None after the last one. Used by exhaustive test oracles.
    pub fn next_element(&self, a: &FieldElement) -> Option<FieldElement> {
        let mut coeffs = a.coeffs.clone();
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < self.params.p {
                return Some(FieldElement { coeffs });
            }
            *c = 0;
        }
        None
    }

    // ----- raw (non-ticking) kernels ---------------------------------------------

    fn raw_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.params.p;
        if self.params.k == 1 {
            return vec![m_mul(p, a[0], b[0])];
        }
        let k = self.params.k;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = m_add(p, prod[i + j], m_mul(p, x, y));
            }
        }
        reduce_by_modulus(p, &mut prod, self.params.modulus.as_ref().unwrap());
        prod.truncate(k);
        prod
    }

    fn raw_inv(&self, a: &[u64]) -> Vec<u64> {
        let p = self.params.p;
        if self.params.k == 1 {
            return vec![m_inv(p, a[0])];
        }
        let m = self.params.modulus.as_ref().unwrap();
        let inv = poly_inv_mod(p, a, m).expect("nonzero element of a field is invertible");
        let mut out = inv;
        out.resize(self.params.k, 0);
        out
    }
}

// ----- base-field helpers (u64 residues) ------------------------------------------

#[inline]
pub(crate) fn m_add(p: u64, a: u64, b: u64) -> u64 {
    let s = a as u128 + b as u128;
    (if s >= p as u128 { s - p as u128 } else { s }) as u64
}

#[inline]
pub(crate) fn m_sub(p: u64, a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

#[inline]
pub(crate) fn m_mul(p: u64, a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn m_pow(p: u64, mut a: u64, mut e: u128) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = m_mul(p, acc, a);
        }
        a = m_mul(p, a, a);
        e >>= 1;
    }
    acc
}

pub(crate) fn m_inv(p: u64, a: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    m_pow(p, a, (p - 2) as u128)
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = m_pow(n, a, d as u128);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = m_mul(n, x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Tonelli-Shanks square root mod an odd prime; None for non-residues.
pub(crate) fn tonelli_shanks(p: u64, a: u64) -> Option<u64> {
    if a == 0 {
        return Some(0);
    }
    if m_pow(p, a, ((p - 1) / 2) as u128) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(m_pow(p, a, ((p + 1) / 4) as u128));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while m_pow(p, z, ((p - 1) / 2) as u128) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = m_pow(p, z, q as u128);
    let mut t = m_pow(p, a, q as u128);
    let mut r = m_pow(p, a, q.div_ceil(2) as u128);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = m_mul(p, t2, t2);
            i += 1;
        }
        let b = m_pow(p, c, 1u128 << (m - i - 1));
        m = i;
        c = m_mul(p, b, b);
        t = m_mul(p, t, c);
        r = m_mul(p, r, b);
    }
    Some(r)
}

// ----- raw coefficient-polynomial helpers (modulus handling, no counting) ----------

fn poly_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn reduce_by_modulus(p: u64, prod: &mut Vec<u64>, m: &[u64]) {
    let k = m.len() - 1;
    while let Some(d) = poly_deg(prod) {
        if d < k {
            break;
        }
        let lead = prod[d];
        // subtract lead * x^(d-k) * m  (m is monic)
        for (i, &mc) in m.iter().enumerate() {
            let idx = d - k + i;
            prod[idx] = m_sub(p, prod[idx], m_mul(p, lead, mc));
        }
    }
    prod.resize(k.max(prod.len().min(k)), 0);
    prod.resize(k, 0);
}

fn poly_mul_raw(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = m_add(p, out[i + j], m_mul(p, x, y));
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_divmod_raw(p: u64, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let db = poly_deg(b).expect("division by zero polynomial");
    let lead_inv = m_inv(p, b[db]);
    let mut rem: Vec<u64> = a.to_vec();
    poly_trim(&mut rem);
    if rem.len() <= db {
        return (vec![], rem);
    }
    let mut quot = vec![0u64; rem.len() - db];
    while let Some(dr) = poly_deg(&rem) {
        if dr < db {
            break;
        }
        let coef = m_mul(p, rem[dr], lead_inv);
        quot[dr - db] = coef;
        for (i, &bc) in b.iter().enumerate().take(db + 1) {
            rem[dr - db + i] = m_sub(p, rem[dr - db + i], m_mul(p, coef, bc));
        }
    }
    poly_trim(&mut rem);
    poly_trim(&mut quot);
    (quot, rem)
}

/// Extended Euclid: inverse of a modulo m over F_p, or None when not coprime.
fn poly_inv_mod(p: u64, a: &[u64], m: &[u64]) -> Option<Vec<u64>> {
    let (mut r0, mut r1): (Vec<u64>, Vec<u64>) = (m.to_vec(), a.to_vec());
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    let (mut t0, mut t1): (Vec<u64>, Vec<u64>) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r2) = poly_divmod_raw(p, &r0, &r1);
        let qt1 = poly_mul_raw(p, &q, &t1);
        let mut t2 = vec![0u64; t0.len().max(qt1.len())];
        for (i, slot) in t2.iter_mut().enumerate() {
            let x = t0.get(i).copied().unwrap_or(0);
            let y = qt1.get(i).copied().unwrap_or(0);
            *slot = m_sub(p, x, y);
        }
        poly_trim(&mut t2);
        r0 = std::mem::take(&mut r1);
        r1 = r2;
        t0 = std::mem::take(&mut t1);
        t1 = t2;
    }
    let d = poly_deg(&r0)?;
    if d != 0 {
        return None;
    }
    let scale = m_inv(p, r0[0]);
    let mut out: Vec<u64> = t0.iter().map(|&c| m_mul(p, c, scale)).collect();
    let (_, rem) = poly_divmod_raw(p, &out, m);
    out = rem;
    Some(out)
}

fn poly_pow_mod(p: u64, a: &[u64], e: u128, m: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = poly_divmod_raw(p, a, m).1;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_divmod_raw(p, &poly_mul_raw(p, &acc, &base), m).1;
        }
        base = poly_divmod_raw(p, &poly_mul_raw(p, &base, &base), m).1;
        e >>= 1;
    }
    acc
}

fn poly_gcd_raw(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    while !r1.is_empty() {
        let (_, r2) = poly_divmod_raw(p, &r0, &r1);
        r0 = std::mem::take(&mut r1);
        r1 = r2;
    }
    r0
}

/// Rabin irreducibility test for a monic polynomial over F_p.
pub fn is_irreducible(p: u64, m: &[u64]) -> bool {
    let k = match poly_deg(m) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if k == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // x^(p^k) == x mod m
    let mut xp = x.clone();
    for _ in 0..k {
        xp = poly_pow_mod(p, &xp, p as u128, m);
    }
    let mut diff = xp.clone();
    diff.resize(diff.len().max(2), 0);
    diff[1] = m_sub(p, diff[1], 1);
    poly_trim(&mut diff);
    if !diff.is_empty() {
        return false;
    }
    // gcd(x^(p^(k/r)) - x, m) == 1 for every prime r | k
    let mut primes = vec![];
    let mut n = k;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            primes.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    for r in primes {
        let mut xp = x.clone();
        for _ in 0..k / r {
            xp = poly_pow_mod(p, &xp, p as u128, m);
        }
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = m_sub(p, diff[1], 1);
        poly_trim(&mut diff);
        if poly_deg(&poly_gcd_raw(p, &diff, m)) != Some(0) && !diff.is_empty() {
            return false;
        }
        if diff.is_empty() {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree k,
/// ordering coefficient tuples (c_{k-1}, ..., c_0) like base-p integers.
fn smallest_irreducible(p: u64, k: usize) -> Vec<u64> {
    let mut n: u128 = 0;
    loop {
        let mut m = vec![0u64; k + 1];
        m[k] = 1;
        let mut v = n;
        for slot in m.iter_mut().take(k) {
            *slot = (v % p as u128) as u64;
            v /= p as u128;
        }
        if is_irreducible(p, &m) {
            return m;
        }
        n += 1;
    }
}
