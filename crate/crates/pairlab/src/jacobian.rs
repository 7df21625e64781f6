//! Genus-2 hyperelliptic Jacobians in Mumford representation.
//!
//! Curves are y^2 = f(x) with f monic, squarefree, of degree 5 over an odd
//! prime field, so there is a single point at infinity. Divisor classes are
//! pairs (a, b) with a monic of degree <= 2, deg b < deg a and b^2 = f mod a;
//! the identity is (1, 0).
//!
//! The group law is Cantor composition followed by at most one reduction
//! step. The generic cases run through hand-scheduled kernels whose field
//! operation budgets are pinned by the cost suite: 26 multiplications and 2
//! inversions for adding distinct degree-2 divisors, 34 and 2 for doubling
//! (squarings counted as multiplications, constant multiples as additions).
//! Non-generic geometry falls back to the general polynomial path, which the
//! kernels are also property-tested against.

use crate::chain::{self, Policy, StepKind};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::{self, Poly};

#[derive(Debug, Clone)]
pub struct HyperellipticCurve {
    field: Field,
    /// Monic squarefree quintic, constant term first.
    pub f: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MumfordDivisor {
    pub a: Poly,
    pub b: Poly,
}

impl MumfordDivisor {
    pub fn identity(f: &Field) -> MumfordDivisor {
        MumfordDivisor {
            a: Poly::one(f),
            b: Poly::zero(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a.degree() == Some(0)
    }

    /// `a0,a1,...;b0,b1,...` with base-10 coefficients, constant term first.
    pub fn to_display(&self) -> String {
        format!("{};{}", self.a.to_display(), self.b.to_display())
    }
}

/// Exposed intermediates of one composition: the semi-reduced composite
/// (comp_a, comp_b), the gcd d(x) of the composition, and whether a
/// reduction step was applied to reach the reduced result.
#[derive(Debug, Clone)]
pub struct CompositionOutput {
    pub result: MumfordDivisor,
    pub comp_a: Poly,
    pub comp_b: Poly,
    pub gcd_d: Poly,
    pub reduced: bool,
}

/// Composition result without the materialized composite a-polynomial.
///
/// The pairing accumulators never evaluate comp_a (for the squared pairing
/// the mirrored evaluation points cancel it; the baseline evaluates the
/// input a-polynomials separately), so the hot path skips the two
/// multiplications needed to assemble it. `jac_compose` adds them back for
/// the public [`CompositionOutput`].
#[derive(Debug, Clone)]
pub struct StepOutput {
    pub result: MumfordDivisor,
    pub comp_b: Poly,
    pub gcd_d: Poly,
    pub reduced: bool,
    /// True when the hand-scheduled generic kernel was used.
    pub generic: bool,
}

impl HyperellipticCurve {
    pub fn new(field: Field, f: Poly) -> Result<HyperellipticCurve> {
        if f.degree() != Some(5) {
            return Err(Error::InvalidInput(
                "genus-2 model requires deg f = 5 (genus > 2 is unsupported)".into(),
            ));
        }
        if !f.is_monic(&field) {
            return Err(Error::InvalidInput("f must be monic".into()));
        }
        for c in &f.coeffs {
            field.check_element(c)?;
        }
        let df = poly::derivative(&field, &f);
        let g = poly::gcd(&field, &f, &df)?;
        if g.degree() != Some(0) {
            return Err(Error::InvalidInput("f must be squarefree".into()));
        }
        Ok(HyperellipticCurve { field, f })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Check the Mumford invariants: a monic of degree <= 2, deg b < deg a,
    /// b^2 = f (mod a).
    pub fn check_divisor(&self, d: &MumfordDivisor) -> Result<()> {
        let f = &self.field;
        let da =
            d.a.degree()
                .ok_or_else(|| Error::InvalidInput("a = 0".into()))?;
        if da > 2 || !d.a.is_monic(f) {
            return Err(Error::InvalidInput("a must be monic of degree <= 2".into()));
        }
        if let Some(db) = d.b.degree() {
            if db >= da {
                return Err(Error::InvalidInput("deg b must be below deg a".into()));
            }
        }
        let bb = poly::mul(f, &d.b, &d.b);
        let diff = poly::sub(f, &self.f, &bb);
        if !poly::rem(f, &diff, &d.a)?.is_zero() {
            return Err(Error::InvalidInput("b^2 != f (mod a)".into()));
        }
        Ok(())
    }

    pub fn divisor(&self, a: Poly, b: Poly) -> Result<MumfordDivisor> {
        let d = MumfordDivisor { a, b };
        self.check_divisor(&d)?;
        Ok(d)
    }

    pub fn divisor_from_u64s(&self, a: &[u64], b: &[u64]) -> Result<MumfordDivisor> {
        self.divisor(
            Poly::from_u64s(&self.field, a),
            Poly::from_u64s(&self.field, b),
        )
    }

    pub fn parse_divisor(&self, s: &str) -> Result<MumfordDivisor> {
        let (sa, sb) = s
            .split_once(';')
            .ok_or_else(|| Error::Config("divisor must look like a0,a1,..;b0,b1,..".into()))?;
        let parse_poly = |t: &str| -> Result<Poly> {
            let vals: Result<Vec<u64>> = t
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Config(format!("bad coefficient {x:?}")))
                })
                .collect();
            Ok(Poly::from_u64s(&self.field, &vals?))
        };
        self.divisor(parse_poly(sa)?, parse_poly(sb)?)
    }

    /// -D = (a, -b).
    pub fn neg(&self, d: &MumfordDivisor) -> MumfordDivisor {
        MumfordDivisor {
            a: d.a.clone(),
            b: poly::neg(&self.field, &d.b),
        }
    }

    // ------------------------------------------------------------------
    // group law
    // ------------------------------------------------------------------

    /// Composition + reduction via the cheapest applicable path.
    pub fn compose_step(&self, d1: &MumfordDivisor, d2: &MumfordDivisor) -> StepOutput {
        let same = d1 == d2;
        if d1.a.degree() == Some(2) && d2.a.degree() == Some(2) {
            if same {
                if let Some(out) = self.kernel_double(d1) {
                    return out;
                }
            } else if d1.a != d2.a {
                if let Some(out) = self.kernel_add(d1, d2) {
                    return out;
                }
            }
        }
        let (out, _) = self.general_compose(d1, d2);
        out
    }

    /// The full composition surface: like [`Self::compose_step`] plus the
    /// materialized composite comp_a = a1 a2 / d^2.
    pub fn jac_compose(&self, d1: &MumfordDivisor, d2: &MumfordDivisor) -> CompositionOutput {
        let f = &self.field;
        let same = d1 == d2;
        if d1.a.degree() == Some(2) && d2.a.degree() == Some(2) {
            let kernel = if same {
                self.kernel_double(d1)
            } else if d1.a != d2.a {
                self.kernel_add(d1, d2)
            } else {
                None
            };
            if let Some(step) = kernel {
                // assemble comp_a from the factor polynomials
                let comp_a = if same {
                    let a1 = &d1.a.coeffs[1];
                    let a0 = &d1.a.coeffs[0];
                    let mid = f.add(&f.sq(a1), &f.double_el(a0));
                    Poly::new(vec![
                        f.sq(a0),
                        f.double_el(&f.mul(a1, a0)),
                        mid,
                        f.double_el(a1),
                        f.one(),
                    ])
                } else {
                    poly::mul_monic_quadratics(f, &d1.a, &d2.a)
                };
                return CompositionOutput {
                    result: step.result,
                    comp_a,
                    comp_b: step.comp_b,
                    gcd_d: step.gcd_d,
                    reduced: step.reduced,
                };
            }
        }
        let (step, comp_a) = self.general_compose(d1, d2);
        CompositionOutput {
            result: step.result,
            comp_a,
            comp_b: step.comp_b,
            gcd_d: step.gcd_d,
            reduced: step.reduced,
        }
    }

    /// Plain group addition.
    pub fn add(&self, d1: &MumfordDivisor, d2: &MumfordDivisor) -> MumfordDivisor {
        self.compose_step(d1, d2).result
    }

    /// n * D by binary-chain replay of the composition step.
    pub fn scalar_mul(&self, n: i128, d: &MumfordDivisor) -> MumfordDivisor {
        if n == 0 || d.is_identity() {
            return MumfordDivisor::identity(&self.field);
        }
        let base = if n < 0 { self.neg(d) } else { d.clone() };
        let steps = chain::build_chain(n.unsigned_abs() as u64, Policy::Binary).expect("n >= 1");
        let mut entries = vec![base];
        for s in &steps {
            let v = match s.kind {
                StepKind::Double => self.add(&entries[s.left], &entries[s.left]),
                StepKind::Add => self.add(&entries[s.left], &entries[s.right]),
                StepKind::Subtract => {
                    let neg = self.neg(&entries[s.right]);
                    self.add(&entries[s.left], &neg)
                }
            };
            entries.push(v);
        }
        entries.pop().unwrap()
    }

    // ------------------------------------------------------------------
    // generic kernels
    // ------------------------------------------------------------------

    /// Generic distinct addition: both inputs of degree 2, coprime a's,
    /// full-degree composite. 26 mul + 2 inv.
    fn kernel_add(&self, d1: &MumfordDivisor, d2: &MumfordDivisor) -> Option<StepOutput> {
        let f = &self.field;
        let a11 = &d1.a.coeffs[1];
        let a10 = &d1.a.coeffs[0];
        let a21 = &d2.a.coeffs[1];
        let a20 = &d2.a.coeffs[0];
        let b11 = d1.b.coeff(f, 1);
        let b10 = d1.b.coeff(f, 0);
        let b21 = d2.b.coeff(f, 1);
        let b20 = d2.b.coeff(f, 0);

        let c1 = f.sub(a11, a21);
        let c0 = f.sub(a10, a20);
        // solve a1 * s = b2 - b1 (mod a2) by Cramer; the determinant is the
        // resultant of a1 and a2 up to sign, so it vanishes iff gcd != 1
        let alpha = f.mul(&c1, a21);
        let beta = f.mul(&c1, a20);
        let gamma = f.sub(&c0, &alpha);
        let delta = f.add(&f.mul(&c0, &gamma), &f.mul(&c1, &beta));
        if delta.is_zero() {
            return None;
        }
        let t1 = f.sub(&b21, &b11);
        let t0 = f.sub(&b20, &b10);
        let s1num = f.sub(&f.mul(&c0, &t1), &f.mul(&c1, &t0));
        let s0num = f.add(&f.mul(&t1, &beta), &f.mul(&t0, &gamma));
        let w = f.inv(&delta).expect("delta != 0");
        let s1 = f.mul(&w, &s1num);
        let s0 = f.mul(&w, &s0num);
        if s1.is_zero() {
            return None;
        }
        let a3 = f.add(a11, a21);
        let a2c = f.add(&f.add(a10, a20), &f.mul(a11, a21));

        // comp_b = b1 + a1 * s  (degree 3, leading coefficient s1)
        let m11 = f.mul(a11, &s1);
        let m10 = f.mul(a11, &s0);
        let m01 = f.mul(a10, &s1);
        let m00 = f.mul(a10, &s0);
        let b3 = s1.clone();
        let b2 = f.add(&s0, &m11);
        let b1c = f.add(&f.add(&m10, &m01), &b11);
        let b0 = f.add(&m00, &b10);

        let (atilde, btilde) = self.reduce_fused(&b3, &b2, &b1c, &b0, &a3, &a2c);
        Some(StepOutput {
            result: MumfordDivisor {
                a: atilde,
                b: btilde,
            },
            comp_b: Poly::new(vec![b0, b1c, b2, b3]),
            gcd_d: Poly::one(f),
            reduced: true,
            generic: true,
        })
    }

    /// Generic doubling: degree-2 input coprime to 2b. 34 mul + 2 inv.
    fn kernel_double(&self, d: &MumfordDivisor) -> Option<StepOutput> {
        let f = &self.field;
        let a1 = &d.a.coeffs[1];
        let a0 = &d.a.coeffs[0];
        let b1 = d.b.coeff(f, 1);
        let b0 = d.b.coeff(f, 0);
        let f4 = self.f.coeff(f, 4);
        let f3 = self.f.coeff(f, 3);
        let f2 = self.f.coeff(f, 2);

        // quotient of (f - b^2) / a; the division is exact so only the
        // quotient rows are computed
        let kq2 = f.sub(&f4, a1);
        let p1 = f.mul(a1, &kq2);
        let kq1 = f.sub(&f.sub(&f3, &p1), a0);
        let w1 = f.sq(&b1);
        let p2 = f.mul(a1, &kq1);
        let p3 = f.mul(a0, &kq2);
        let kq0 = f.sub(&f.sub(&f.sub(&f2, &w1), &p2), &p3);
        // k mod a
        let g = f.sub(&kq2, a1);
        let kbar1 = f.sub(&f.sub(&kq1, a0), &f.mul(&g, a1));
        let kbar0 = f.sub(&kq0, &f.mul(&g, a0));

        // solve (2b) * s = kbar (mod a) by Cramer
        let t1 = f.double_el(&b1);
        let t0 = f.double_el(&b0);
        let eta = f.mul(&t1, a1);
        let theta = f.mul(&t1, a0);
        let gamma = f.sub(&t0, &eta);
        let delta = f.add(&f.mul(&t0, &gamma), &f.mul(&t1, &theta));
        if delta.is_zero() {
            return None;
        }
        let s1num = f.sub(&f.mul(&t0, &kbar1), &f.mul(&t1, &kbar0));
        let s0num = f.add(&f.mul(&kbar1, &theta), &f.mul(&kbar0, &gamma));
        let w = f.inv(&delta).expect("delta != 0");
        let s1 = f.mul(&w, &s1num);
        let s0 = f.mul(&w, &s0num);
        if s1.is_zero() {
            return None;
        }
        let a3 = f.double_el(a1);
        let a2c = f.add(&f.sq(a1), &f.double_el(a0));

        let m11 = f.mul(a1, &s1);
        let m10 = f.mul(a1, &s0);
        let m01 = f.mul(a0, &s1);
        let m00 = f.mul(a0, &s0);
        let b3 = s1.clone();
        let b2 = f.add(&s0, &m11);
        let b1c = f.add(&f.add(&m10, &m01), &b1);
        let b0c = f.add(&m00, &b0);

        let (atilde, btilde) = self.reduce_plain(&b3, &b2, &b1c, &b0c, &a3, &a2c);
        Some(StepOutput {
            result: MumfordDivisor {
                a: atilde,
                b: btilde,
            },
            comp_b: Poly::new(vec![b0c, b1c, b2, b3]),
            gcd_d: Poly::one(f),
            reduced: true,
            generic: true,
        })
    }

    /// Reduction of the degree-4 composite with the monic normalization
    /// folded into the quotient coefficients (7 mul + 1 inv), then
    /// b~ = -comp_b mod a~ (4 mul).
    fn reduce_fused(
        &self,
        b3: &FieldElement,
        b2: &FieldElement,
        b1: &FieldElement,
        b0: &FieldElement,
        a3: &FieldElement,
        a2: &FieldElement,
    ) -> (Poly, Poly) {
        let f = &self.field;
        let f4 = self.f.coeff(f, 4);
        let q2 = f.neg(&f.sq(b3));
        let iq = f.inv(&q2).expect("leading coefficient s1^2 != 0");
        let n5 = f.sub(&f.one(), &f.double_el(&f.mul(b3, b2)));
        let at1 = f.sub(&f.mul(&n5, &iq), a3);
        let n4 = f.sub(&f.sub(&f4, &f.double_el(&f.mul(b3, b1))), &f.sq(b2));
        let at0 = f.sub(&f.sub(&f.mul(&n4, &iq), a2), &f.mul(&at1, a3));
        self.finish_reduction(b3, b2, b1, b0, at1, at0)
    }

    /// Same reduction with the quotient computed first and normalized
    /// afterwards (9 mul + 1 inv); the doubling kernel uses this variant.
    fn reduce_plain(
        &self,
        b3: &FieldElement,
        b2: &FieldElement,
        b1: &FieldElement,
        b0: &FieldElement,
        a3: &FieldElement,
        a2: &FieldElement,
    ) -> (Poly, Poly) {
        let f = &self.field;
        let f4 = self.f.coeff(f, 4);
        let q2 = f.neg(&f.sq(b3));
        let n5 = f.sub(&f.one(), &f.double_el(&f.mul(b3, b2)));
        let q1 = f.sub(&n5, &f.mul(&q2, a3));
        let n4 = f.sub(&f.sub(&f4, &f.double_el(&f.mul(b3, b1))), &f.sq(b2));
        let q0 = f.sub(&f.sub(&n4, &f.mul(&q2, a2)), &f.mul(&q1, a3));
        let iq = f.inv(&q2).expect("leading coefficient s1^2 != 0");
        let at1 = f.mul(&iq, &q1);
        let at0 = f.mul(&iq, &q0);
        self.finish_reduction(b3, b2, b1, b0, at1, at0)
    }

    fn finish_reduction(
        &self,
        b3: &FieldElement,
        b2: &FieldElement,
        b1: &FieldElement,
        b0: &FieldElement,
        at1: FieldElement,
        at0: FieldElement,
    ) -> (Poly, Poly) {
        let f = &self.field;
        // b~ = -comp_b mod (x^2 + at1 x + at0), two reduction rows
        let u1 = f.sub(b2, &f.mul(b3, &at1));
        let v = f.sub(b1, &f.mul(b3, &at0));
        let bt1 = f.neg(&f.sub(&v, &f.mul(&u1, &at1)));
        let bt0 = f.neg(&f.sub(b0, &f.mul(&u1, &at0)));
        (
            Poly::new(vec![at0, at1, f.one()]),
            Poly::new(vec![bt0, bt1]),
        )
    }

    // ------------------------------------------------------------------
    // general Cantor path
    // ------------------------------------------------------------------

    /// Full Cantor composition and reduction; handles every input shape.
    /// Returns the step output plus the composite a-polynomial.
    fn general_compose(&self, d1: &MumfordDivisor, d2: &MumfordDivisor) -> (StepOutput, Poly) {
        let f = &self.field;
        let (gd1, e1, e2) = poly::gcd_ext(f, &d1.a, &d2.a).expect("a-polynomials are nonzero");
        let bsum = poly::add(f, &d1.b, &d2.b);
        let (d, c1, c2) = if gd1.degree() == Some(0) {
            (Poly::one(f), Poly::one(f), Poly::zero())
        } else if bsum.is_zero() {
            (gd1.clone(), Poly::one(f), Poly::zero())
        } else {
            poly::gcd_ext(f, &gd1, &bsum).expect("nonzero operands")
        };
        // s1 = c1 e1, s2 = c1 e2, s3 = c2 with s1 a1 + s2 a2 + s3 (b1 + b2) = d
        let s1 = poly::mul(f, &c1, &e1);
        let s2 = poly::mul(f, &c1, &e2);
        let s3 = c2;
        let a1a2 = poly::mul(f, &d1.a, &d2.a);
        let dd = poly::mul(f, &d, &d);
        let (comp_a, ra) = poly::divmod(f, &a1a2, &dd).expect("d != 0");
        debug_assert!(ra.is_zero());
        // comp_b = (s1 a1 b2 + s2 a2 b1 + s3 (b1 b2 + f)) / d mod comp_a
        let term1 = poly::mul(f, &poly::mul(f, &s1, &d1.a), &d2.b);
        let term2 = poly::mul(f, &poly::mul(f, &s2, &d2.a), &d1.b);
        let term3 = poly::mul(f, &s3, &poly::add(f, &poly::mul(f, &d1.b, &d2.b), &self.f));
        let num = poly::add(f, &poly::add(f, &term1, &term2), &term3);
        let (quot, rq) = poly::divmod(f, &num, &d).expect("d != 0");
        debug_assert!(rq.is_zero());
        let comp_b = poly::rem(f, &quot, &comp_a).expect("comp_a != 0");

        // reduction: for genus 2 at most one step is ever needed
        let mut red_a = comp_a.clone();
        let mut red_b = comp_b.clone();
        let mut reduced = false;
        while red_a.degree().map(|dg| dg > 2).unwrap_or(false) {
            let bb = poly::mul(f, &red_b, &red_b);
            let num = poly::sub(f, &self.f, &bb);
            let (quot, rr) = poly::divmod(f, &num, &red_a).expect("a != 0");
            debug_assert!(rr.is_zero());
            let new_a = poly::monic(f, &quot).expect("quotient nonzero");
            let new_b = poly::rem(f, &poly::neg(f, &red_b), &new_a).expect("a != 0");
            red_a = new_a;
            red_b = new_b;
            reduced = true;
        }
        let step = StepOutput {
            result: MumfordDivisor { a: red_a, b: red_b },
            comp_b,
            gcd_d: d,
            reduced,
            generic: false,
        };
        (step, comp_a)
    }

    // ------------------------------------------------------------------
    // divisor support points
    // ------------------------------------------------------------------

    /// The finite support of D as (x, b(x)) pairs with multiplicity, with
    /// coordinates in `target` (the base field itself or its quadratic
    /// extension). Errors with the minimal extension degree when the roots
    /// are not rational in `target`.
    pub fn divisor_points(
        &self,
        d: &MumfordDivisor,
        target: &Field,
    ) -> Result<Vec<(FieldElement, FieldElement)>> {
        let f = &self.field;
        if target.p() != f.p() || f.k() != 1 {
            return Err(Error::InvalidInput(
                "support extraction expects a prime base field and a matching target".into(),
            ));
        }
        match d.a.degree() {
            None => Err(Error::InvalidInput("a = 0".into())),
            Some(0) => Ok(vec![]),
            Some(1) => {
                let root = f.neg(&d.a.coeffs[0]);
                let y = poly::eval(f, &d.b, &root);
                let x = target.embed_base(&root)?;
                let y = target.embed_base(&y)?;
                Ok(vec![(x, y)])
            }
            Some(2) => {
                let a1 = &d.a.coeffs[1];
                let a0 = &d.a.coeffs[0];
                let disc = f.sub(&f.sq(a1), &f.mul_small(4, a0));
                let b_t = poly::embed(target, &d.b)?;
                let a1_t = target.embed_base(a1)?;
                if disc.is_zero() {
                    // ramified: double root at -a1/2
                    let half = target.inv(&target.from_u64(2))?;
                    let root = target.neg(&target.mul(&a1_t, &half));
                    let y = poly::eval(target, &b_t, &root);
                    return Ok(vec![(root.clone(), y.clone()), (root, y)]);
                }
                let disc_t = target.embed_base(&disc)?;
                let sq = match target.sqrt(&disc_t) {
                    Some(sq) => sq,
                    None => return Err(Error::NeedsFieldExtension(2)),
                };
                let half = target.inv(&target.from_u64(2))?;
                let mut out = vec![];
                for root_num in [
                    target.add(&target.neg(&a1_t), &sq),
                    target.sub(&target.neg(&a1_t), &sq),
                ] {
                    let x = target.mul(&root_num, &half);
                    let y = poly::eval(target, &b_t, &x);
                    out.push((x, y));
                }
                Ok(out)
            }
            Some(_) => Err(Error::InvalidInput(
                "semi-reduced divisors have deg a <= 2".into(),
            )),
        }
    }

    /// Random reduced divisor built from two random affine curve points,
    /// avoiding conjugate pairs so the result is semi-reduced of degree 2.
    pub fn random_divisor<R: rand::Rng>(&self, rng: &mut R) -> MumfordDivisor {
        let f = &self.field;
        loop {
            let p1 = self.random_curve_point(rng);
            let p2 = self.random_curve_point(rng);
            let (x1, y1) = &p1;
            let (x2, y2) = &p2;
            if x1 == x2 {
                if *y1 == f.neg(y2) {
                    continue; // conjugate pair (includes y = 0 twice)
                }
                // same point twice: tangency interpolation
                // b = y1 + t (x - x1) with 2 y1 t = f'(x1)
                let fp = poly::derivative(f, &self.f);
                let slope_num = poly::eval(f, &fp, x1);
                let t = match f.div(&slope_num, &f.double_el(y1)) {
                    Ok(t) => t,
                    Err(_) => continue,
                };
                let a = {
                    let lin = Poly::new(vec![f.neg(x1), f.one()]);
                    poly::mul(f, &lin, &lin)
                };
                let b0 = f.sub(y1, &f.mul(&t, x1));
                let b = Poly::new(vec![b0, t]);
                if let Ok(d) = self.divisor(a, b) {
                    return d;
                }
                continue;
            }
            // chord interpolation through two distinct-x points
            let slope = f.div(&f.sub(y2, y1), &f.sub(x2, x1)).expect("x1 != x2");
            let b0 = f.sub(y1, &f.mul(&slope, x1));
            let b = Poly::new(vec![b0, slope]);
            let a = poly::mul(
                f,
                &Poly::new(vec![f.neg(x1), f.one()]),
                &Poly::new(vec![f.neg(x2), f.one()]),
            );
            if let Ok(d) = self.divisor(a, b) {
                return d;
            }
        }
    }

    pub fn random_curve_point<R: rand::Rng>(&self, rng: &mut R) -> (FieldElement, FieldElement) {
        let f = &self.field;
        loop {
            let coeffs: Vec<u64> = (0..f.k()).map(|_| rng.random_range(0..f.p())).collect();
            let x = FieldElement { coeffs };
            let fx = poly::eval(f, &self.f, &x);
            if let Some(y) = f.sqrt(&fx) {
                let y = if rng.random_bool(0.5) { f.neg(&y) } else { y };
                return (x, y);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// The worked-example curve y^2 = x^5 + 13x^4 + 2x^3 + 4x^2 + 11x + 1
    /// over F_31 with its 5-torsion divisor D and order-260 divisor E.
    fn demo_curve() -> HyperellipticCurve {
        let f = Field::prime(31).unwrap();
        let fx = Poly::from_u64s(&f, &[1, 11, 4, 2, 13, 1]);
        HyperellipticCurve::new(f, fx).unwrap()
    }

    fn demo_d(c: &HyperellipticCurve) -> MumfordDivisor {
        c.divisor_from_u64s(&[15, 23, 1], &[28, 13]).unwrap()
    }

    fn demo_e(c: &HyperellipticCurve) -> MumfordDivisor {
        c.divisor_from_u64s(&[2, 4, 1], &[20, 29]).unwrap()
    }

    /// Larger prime so random divisor pairs are almost always generic.
    fn wide_curve() -> HyperellipticCurve {
        let f = Field::prime(1009).unwrap();
        let fx = Poly::from_u64s(&f, &[5, 11, 7, 3, 0, 1]);
        HyperellipticCurve::new(f, fx).unwrap()
    }

    #[test]
    fn known_multiples_of_the_demo_divisor() {
        let c = demo_curve();
        let d = demo_d(&c);
        let two_d = c.add(&d, &d);
        assert_eq!(two_d, c.divisor_from_u64s(&[9, 25, 1], &[6, 10]).unwrap());
        let three_d = c.add(&d, &two_d);
        assert_eq!(
            three_d,
            c.divisor_from_u64s(&[9, 25, 1], &[25, 21]).unwrap()
        );
        // 3D = -2D because D is 5-torsion
        assert_eq!(three_d, c.neg(&two_d));
        assert!(c.scalar_mul(5, &d).is_identity());
        let e = demo_e(&c);
        let two_e = c.add(&e, &e);
        assert_eq!(two_e, c.divisor_from_u64s(&[3, 1, 1], &[3, 26]).unwrap());
    }

    #[test]
    fn identity_and_negation() {
        let c = demo_curve();
        let d = demo_d(&c);
        let id = MumfordDivisor::identity(c.field());
        let out = c.jac_compose(&d, &id);
        assert_eq!(out.result, d);
        assert!(out.gcd_d.is_one(c.field()));
        assert!(!out.reduced);
        assert_eq!(c.neg(&id), id);
        assert!(c.add(&d, &c.neg(&d)).is_identity());
        assert!(c.scalar_mul(0, &d).is_identity());
    }

    #[test]
    fn group_axioms_sampled() {
        let c = demo_curve();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let x = c.random_divisor(&mut rng);
            let y = c.random_divisor(&mut rng);
            let z = c.random_divisor(&mut rng);
            assert_eq!(c.add(&x, &y), c.add(&y, &x));
            assert_eq!(c.add(&c.add(&x, &y), &z), c.add(&x, &c.add(&y, &z)));
            c.check_divisor(&c.add(&x, &y)).unwrap();
        }
    }

    #[test]
    fn demo_jacobian_order_annihilates() {
        let c = demo_curve();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = c.random_divisor(&mut rng);
            assert!(c.scalar_mul(1040, &x).is_identity());
        }
    }

    #[test]
    fn kernels_match_general_path() {
        let c = wide_curve();
        let f = c.field();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut kernel_hits = 0;
        for _ in 0..300 {
            let x = c.random_divisor(&mut rng);
            let y = c.random_divisor(&mut rng);
            let (gen_add, comp_a) = c.general_compose(&x, &y);
            let step = c.compose_step(&x, &y);
            assert_eq!(step.result, gen_add.result);
            if step.generic {
                kernel_hits += 1;
                assert_eq!(step.comp_b, gen_add.comp_b);
                assert!(step.gcd_d.is_one(f));
                assert_eq!(c.jac_compose(&x, &y).comp_a, comp_a);
            }
            let (gen_dbl, _) = c.general_compose(&x, &x);
            let dbl = c.compose_step(&x, &x);
            assert_eq!(dbl.result, gen_dbl.result);
            if dbl.generic {
                assert_eq!(dbl.comp_b, gen_dbl.comp_b);
            }
        }
        assert!(
            kernel_hits > 290,
            "kernel should handle generic inputs ({kernel_hits})"
        );
    }

    #[test]
    fn kernel_cost_contract() {
        let c = wide_curve();
        let f = c.field();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut adds = 0;
        let mut doubles = 0;
        for _ in 0..100 {
            let x = c.random_divisor(&mut rng);
            let y = c.random_divisor(&mut rng);
            let before = f.ops();
            let step = c.compose_step(&x, &y);
            let delta = f.ops() - before;
            if step.generic {
                assert_eq!((delta.mul, delta.div), (26, 2), "generic addition budget");
                adds += 1;
            }
            let before = f.ops();
            let step = c.compose_step(&x, &x);
            let delta = f.ops() - before;
            if step.generic {
                assert_eq!((delta.mul, delta.div), (34, 2), "generic doubling budget");
                doubles += 1;
            }
        }
        assert!(adds > 95 && doubles > 95);
    }

    #[test]
    fn composition_intermediates_invariants() {
        let c = demo_curve();
        let f = c.field();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let x = c.random_divisor(&mut rng);
            let y = c.random_divisor(&mut rng);
            let out = c.jac_compose(&x, &y);
            assert!(out.comp_a.degree().unwrap_or(0) <= 4);
            if out.reduced {
                // result.a = monic((f - comp_b^2) / comp_a)
                let bb = poly::mul(f, &out.comp_b, &out.comp_b);
                let num = poly::sub(f, &c.f, &bb);
                let (q, r) = poly::divmod(f, &num, &out.comp_a).unwrap();
                assert!(r.is_zero());
                assert_eq!(poly::monic(f, &q).unwrap(), out.result.a);
                assert!(out.result.a.degree().unwrap_or(0) <= 2);
                // b~ = -comp_b (mod result.a)
                let want_b = poly::rem(f, &poly::neg(f, &out.comp_b), &out.result.a).unwrap();
                assert_eq!(out.result.b, want_b);
            } else {
                assert_eq!(out.result.a, out.comp_a);
                assert_eq!(out.result.b, out.comp_b);
            }
        }
    }

    #[test]
    fn divisor_point_support() {
        let c = demo_curve();
        let f = c.field();
        let id = MumfordDivisor::identity(f);
        assert!(c.divisor_points(&id, f).unwrap().is_empty());

        // E = (x^2+4x+2, 29x+20) splits over F_31 into (21, 9) and (6, 8)
        let e = demo_e(&c);
        let pts = c.divisor_points(&e, f).unwrap();
        let mut got: Vec<(u64, u64)> = pts
            .iter()
            .map(|(x, y)| (x.coeffs[0], y.coeffs[0]))
            .collect();
        got.sort_unstable();
        assert_eq!(got, vec![(6, 8), (21, 9)]);
        for (x, y) in &pts {
            let fx = poly::eval(f, &c.f, x);
            assert_eq!(f.sq(y), fx);
        }

        // the same support must embed into the quadratic extension
        let ext = Field::extension(31, 2, None).unwrap();
        let pts_ext = c.divisor_points(&e, &ext).unwrap();
        for (x, y) in &pts_ext {
            let fx = poly::eval(&ext, &poly::embed(&ext, &c.f).unwrap(), x);
            assert_eq!(ext.sq(y), fx);
        }

        // an irreducible a-polynomial needs the extension
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let irr = loop {
            let d = c.random_divisor(&mut rng);
            let dd = c.add(&d, &d);
            if dd.a.degree() == Some(2) {
                let a1 = &dd.a.coeffs[1];
                let a0 = &dd.a.coeffs[0];
                let disc = f.sub(&f.sq(a1), &f.mul_small(4, a0));
                if !disc.is_zero() && f.sqrt(&disc).is_none() {
                    break dd;
                }
            }
        };
        assert_eq!(
            c.divisor_points(&irr, f),
            Err(Error::NeedsFieldExtension(2))
        );
        let pts = c.divisor_points(&irr, &ext).unwrap();
        assert_eq!(pts.len(), 2);
        for (x, y) in &pts {
            let fx = poly::eval(&ext, &poly::embed(&ext, &c.f).unwrap(), x);
            assert_eq!(ext.sq(y), fx);
        }

        // ramified double point
        let mut rng2 = ChaCha8Rng::seed_from_u64(10);
        loop {
            let (x0, y0) = c.random_curve_point(&mut rng2);
            if y0.is_zero() {
                continue;
            }
            let fp = poly::derivative(f, &c.f);
            let t = f.div(&poly::eval(f, &fp, &x0), &f.double_el(&y0)).unwrap();
            let lin = Poly::new(vec![f.neg(&x0), f.one()]);
            let a = poly::mul(f, &lin, &lin);
            let b = Poly::new(vec![f.sub(&y0, &f.mul(&t, &x0)), t]);
            if let Ok(d) = c.divisor(a, b) {
                let pts = c.divisor_points(&d, f).unwrap();
                assert_eq!(pts.len(), 2);
                assert_eq!(pts[0], pts[1]);
                assert_eq!(pts[0].0, x0);
                break;
            }
        }
    }

    #[test]
    fn random_divisor_is_valid_and_deterministic() {
        let c = demo_curve();
        let mut r1 = ChaCha8Rng::seed_from_u64(11);
        let mut r2 = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let d1 = c.random_divisor(&mut r1);
            let d2 = c.random_divisor(&mut r2);
            assert_eq!(d1, d2);
            c.check_divisor(&d1).unwrap();
        }
    }

    #[test]
    fn curve_validation() {
        let f = Field::prime(31).unwrap();
        // wrong degree
        assert!(HyperellipticCurve::new(f.clone(), Poly::from_u64s(&f, &[1, 1, 0, 1])).is_err());
        // non-monic
        assert!(
            HyperellipticCurve::new(f.clone(), Poly::from_u64s(&f, &[1, 11, 4, 2, 13, 2])).is_err()
        );
        // not squarefree: (x-1)^2 * (x-2)(x-3)(x-4)
        let sq = {
            let l1 = Poly::from_u64s(&f, &[30, 1]);
            let prod = poly::mul(&f, &l1, &l1);
            let prod = poly::mul(&f, &prod, &Poly::from_u64s(&f, &[29, 1]));
            let prod = poly::mul(&f, &prod, &Poly::from_u64s(&f, &[28, 1]));
            poly::mul(&f, &prod, &Poly::from_u64s(&f, &[27, 1]))
        };
        assert!(HyperellipticCurve::new(f.clone(), sq).is_err());
        // bad divisor shapes
        let c = demo_curve();
        assert!(c.divisor_from_u64s(&[15, 23, 1], &[28, 14]).is_err());
        assert!(c.parse_divisor("15,23,1;28,13").is_ok());
        assert!(c.parse_divisor("15,23,1").is_err());
    }
}
