//! Short-Weierstrass curves y^2 = x^3 + a4 x + a6 in affine coordinates.
//!
//! Affine formulas are used throughout because the cost contracts are stated
//! for them: a generic distinct-x addition costs 2 multiplications and 1
//! division, a generic doubling 3 multiplications and 1 division.
//!
//! Lines are kept in point-slope form. Evaluating a chord
//! `y - y0 - lambda*(x - x0)` at a point costs one multiplication, and the
//! mirrored pair (W, -W) shares that multiplication; materializing the
//! `c0 + c1 x + c2 y` coefficient view costs one extra multiplication and is
//! only done on demand.

use crate::chain::{self, Policy, StepKind};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

#[derive(Debug, Clone)]
pub struct EllipticCurve {
    field: Field,
    pub a4: FieldElement,
    pub a6: FieldElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine { x: FieldElement, y: FieldElement },
}

impl CurvePoint {
    pub fn affine(x: FieldElement, y: FieldElement) -> CurvePoint {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn xy(&self) -> Option<(&FieldElement, &FieldElement)> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, y } => Some((x, y)),
        }
    }
}

/// A line in point-slope form; the working representation of g_{U,V} and g_U.
#[derive(Debug, Clone)]
pub enum Line {
    /// y - y0 - slope * (x - x0)
    Chord {
        x0: FieldElement,
        y0: FieldElement,
        slope: FieldElement,
    },
    /// x - x0
    Vertical { x0: FieldElement },
}

/// Coefficient view c0 + c1 x + c2 y. Chords are normalized to c2 = 1,
/// verticals to c1 = 1, c2 = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineCoeffs {
    pub c0: FieldElement,
    pub c1: FieldElement,
    pub c2: FieldElement,
}

impl Line {
    /// Materialize coefficients; costs one multiplication for a chord.
    pub fn coeffs(&self, f: &Field) -> LineCoeffs {
        match self {
            Line::Chord { x0, y0, slope } => LineCoeffs {
                c0: f.sub(&f.mul(slope, x0), y0),
                c1: f.neg(slope),
                c2: f.one(),
            },
            Line::Vertical { x0 } => LineCoeffs {
                c0: f.neg(x0),
                c1: f.one(),
                c2: f.zero(),
            },
        }
    }
}

impl EllipticCurve {
    pub fn new(field: Field, a4: FieldElement, a6: FieldElement) -> Result<EllipticCurve> {
        field.check_element(&a4)?;
        field.check_element(&a6)?;
        // nonsingular: 4 a4^3 + 27 a6^2 != 0
        let a4cubed = field.mul(&field.sq(&a4), &a4);
        let disc = field.add(
            &field.mul_small(4, &a4cubed),
            &field.mul_small(27, &field.sq(&a6)),
        );
        if disc.is_zero() {
            return Err(Error::InvalidInput("singular curve".into()));
        }
        Ok(EllipticCurve { field, a4, a6 })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// x^3 + a4 x + a6.
    pub fn rhs(&self, x: &FieldElement) -> FieldElement {
        let f = &self.field;
        let x2 = f.sq(x);
        f.add(&f.mul(&f.add(&x2, &self.a4), x), &self.a6)
    }

    pub fn contains(&self, pt: &CurvePoint) -> bool {
        match pt {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => self.field.sq(y) == self.rhs(x),
        }
    }

    pub fn check_point(&self, pt: &CurvePoint) -> Result<()> {
        if let CurvePoint::Affine { x, y } = pt {
            self.field.check_element(x)?;
            self.field.check_element(y)?;
        }
        if !self.contains(pt) {
            return Err(Error::InvalidInput("point not on curve".into()));
        }
        Ok(())
    }

    pub fn neg(&self, pt: &CurvePoint) -> CurvePoint {
        match pt {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: x.clone(),
                y: self.field.neg(y),
            },
        }
    }

    /// Group sum. Generic distinct-x case: 2 mul + 1 div.
    pub fn add(&self, u: &CurvePoint, v: &CurvePoint) -> CurvePoint {
        self.add_with_line(u, v).0
    }

    /// 2U. Generic case: 3 mul + 1 div.
    pub fn double(&self, u: &CurvePoint) -> CurvePoint {
        self.double_with_line(u).0
    }

    /// Sum plus the line through the operands (None when an operand is at
    /// infinity; the recurrences treat those factors as units).
    pub fn add_with_line(&self, u: &CurvePoint, v: &CurvePoint) -> (CurvePoint, Option<Line>) {
        let f = &self.field;
        let (x1, y1) = match u.xy() {
            None => return (v.clone(), None),
            Some(p) => p,
        };
        let (x2, y2) = match v.xy() {
            None => return (u.clone(), None),
            Some(p) => p,
        };
        if x1 == x2 {
            if *y1 == f.neg(y2) {
                // vertical line; covers U = -V and the order-2 case
                return (
                    CurvePoint::Infinity,
                    Some(Line::Vertical { x0: x1.clone() }),
                );
            }
            return self.double_with_line(u);
        }
        let slope = f
            .div(&f.sub(y2, y1), &f.sub(x2, x1))
            .expect("distinct x-coordinates");
        let x3 = f.sub(&f.sub(&f.sq(&slope), x1), x2);
        let y3 = f.sub(&f.mul(&slope, &f.sub(x1, &x3)), y1);
        let line = Line::Chord {
            x0: x1.clone(),
            y0: y1.clone(),
            slope,
        };
        (CurvePoint::Affine { x: x3, y: y3 }, Some(line))
    }

    pub fn double_with_line(&self, u: &CurvePoint) -> (CurvePoint, Option<Line>) {
        let f = &self.field;
        let (x, y) = match u.xy() {
            None => return (CurvePoint::Infinity, None),
            Some(p) => p,
        };
        if y.is_zero() {
            return (CurvePoint::Infinity, Some(Line::Vertical { x0: x.clone() }));
        }
        let num = f.add(&f.mul_small(3, &f.sq(x)), &self.a4);
        let slope = f.div(&num, &f.double_el(y)).expect("y != 0");
        let x3 = f.sub(&f.sub(&f.sq(&slope), x), x);
        let y3 = f.sub(&f.mul(&slope, &f.sub(x, &x3)), y);
        let line = Line::Chord {
            x0: x.clone(),
            y0: y.clone(),
            slope,
        };
        (CurvePoint::Affine { x: x3, y: y3 }, Some(line))
    }

    /// U - V together with the line through (U-V) and V, whose slope is the
    /// negated addition slope (the negatives of three collinear points are
    /// collinear), anchored at V. No extra field operations beyond the add.
    pub fn sub_with_line(&self, u: &CurvePoint, v: &CurvePoint) -> (CurvePoint, Option<Line>) {
        let f = &self.field;
        let (diff, line) = self.add_with_line(u, &self.neg(v));
        let line = line.map(|l| match l {
            Line::Chord { slope, .. } => match v.xy() {
                Some((xv, yv)) => Line::Chord {
                    x0: xv.clone(),
                    y0: yv.clone(),
                    slope: f.neg(&slope),
                },
                None => unreachable!("chord implies affine operands"),
            },
            Line::Vertical { x0 } => Line::Vertical { x0 },
        });
        (diff, line)
    }

    /// The line through U and V: tangent when U = V, vertical when the
    /// x-coordinates coincide. Errors when both are at infinity.
    pub fn line_through(&self, u: &CurvePoint, v: &CurvePoint) -> Result<Line> {
        match (u.is_infinity(), v.is_infinity()) {
            (true, true) => Err(Error::DegenerateLine),
            // convention: the line "through O and V" is the vertical at V
            (true, false) => Ok(Line::Vertical {
                x0: v.xy().unwrap().0.clone(),
            }),
            (false, true) => Ok(Line::Vertical {
                x0: u.xy().unwrap().0.clone(),
            }),
            (false, false) => {
                let line = if u == v {
                    self.double_with_line(u).1
                } else {
                    self.add_with_line(u, v).1
                };
                Ok(line.expect("affine operands always produce a line"))
            }
        }
    }

    /// Evaluate a line at an affine point; one multiplication for a chord.
    pub fn eval_line(&self, line: &Line, w: &CurvePoint) -> Result<FieldElement> {
        let f = &self.field;
        let (x, y) = w.xy().ok_or(Error::InfinityEvaluation)?;
        Ok(match line {
            Line::Chord { x0, y0, slope } => f.sub(&f.sub(y, y0), &f.mul(slope, &f.sub(x, x0))),
            Line::Vertical { x0 } => f.sub(x, x0),
        })
    }

    /// Evaluate a line at W and its mirror -W, sharing the x-only work:
    /// one multiplication for a chord, none for a vertical.
    pub fn eval_line_pair(
        &self,
        line: &Line,
        w: &CurvePoint,
    ) -> Result<(FieldElement, FieldElement)> {
        let f = &self.field;
        let (x, y) = w.xy().ok_or(Error::InfinityEvaluation)?;
        Ok(match line {
            Line::Chord { x0, y0, slope } => {
                let t = f.add(y0, &f.mul(slope, &f.sub(x, x0)));
                (f.sub(y, &t), f.sub(&f.neg(y), &t))
            }
            Line::Vertical { x0 } => {
                let v = f.sub(x, x0);
                (v.clone(), v)
            }
        })
    }

    /// Evaluate the coefficient view c0 + c1 x + c2 y at an affine point.
    pub fn eval_line_coeffs(&self, lc: &LineCoeffs, w: &CurvePoint) -> Result<FieldElement> {
        let f = &self.field;
        let (x, y) = w.xy().ok_or(Error::InfinityEvaluation)?;
        let mut acc = lc.c0.clone();
        if !lc.c1.is_zero() {
            acc = f.add(&acc, &f.mul(&lc.c1, x));
        }
        if !lc.c2.is_zero() {
            acc = f.add(&acc, &f.mul(&lc.c2, y));
        }
        Ok(acc)
    }

    /// n * U by replaying a binary chain; negative n negates the base first.
    pub fn scalar_mul(&self, n: i128, u: &CurvePoint) -> CurvePoint {
        if n == 0 {
            return CurvePoint::Infinity;
        }
        let base = if n < 0 { self.neg(u) } else { u.clone() };
        let m = n.unsigned_abs() as u64;
        let steps = chain::build_chain(m, Policy::Binary).expect("m >= 1");
        let mut entries = vec![base];
        for s in &steps {
            let v = match s.kind {
                StepKind::Double => self.double(&entries[s.left]),
                StepKind::Add => self.add(&entries[s.left], &entries[s.right]),
                StepKind::Subtract => self.add(&entries[s.left], &self.neg(&entries[s.right])),
            };
            entries.push(v);
        }
        entries.pop().unwrap()
    }

    /// Uniform random point (including possibly a 2-torsion point), by
    /// sampling x until the cubic is a square.
    pub fn random_point<R: rand::Rng>(&self, rng: &mut R) -> CurvePoint {
        let f = &self.field;
        loop {
            let coeffs: Vec<u64> = (0..f.k()).map(|_| rng.random_range(0..f.p())).collect();
            let x = FieldElement { coeffs };
            let rhs = self.rhs(&x);
            if let Some(y) = f.sqrt(&rhs) {
                let y = if rng.random_bool(0.5) { f.neg(&y) } else { y };
                return CurvePoint::Affine { x, y };
            }
        }
    }

    pub fn parse_point(&self, s: &str) -> Result<CurvePoint> {
        let s = s.trim();
        if s == "inf" || s == "O" {
            return Ok(CurvePoint::Infinity);
        }
        let vals: Result<Vec<u64>> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Config(format!("bad coordinate {t:?}")))
            })
            .collect();
        let vals = vals?;
        let k = self.field.k();
        if vals.len() != 2 * k {
            return Err(Error::Config(format!(
                "expected {} coordinates or 'inf'",
                2 * k
            )));
        }
        let x = self.field.element_from_coeffs(&vals[..k])?;
        let y = self.field.element_from_coeffs(&vals[k..])?;
        let pt = CurvePoint::Affine { x, y };
        self.check_point(&pt)?;
        Ok(pt)
    }

    pub fn format_point(&self, pt: &CurvePoint) -> String {
        match pt {
            CurvePoint::Infinity => "inf".to_string(),
            CurvePoint::Affine { x, y } => format!("{x},{y}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve_f7() -> EllipticCurve {
        // y^2 = x^3 + 1 over F_7, 12 points
        let f = Field::prime(7).unwrap();
        let a4 = f.zero();
        let a6 = f.one();
        EllipticCurve::new(f, a4, a6).unwrap()
    }

    fn all_points(c: &EllipticCurve) -> Vec<CurvePoint> {
        let f = c.field();
        let mut pts = vec![CurvePoint::Infinity];
        let mut x = f.zero();
        loop {
            for ycand in 0..f.p() {
                let y = f.from_u64(ycand);
                let pt = CurvePoint::affine(x.clone(), y);
                if c.contains(&pt) {
                    pts.push(pt);
                }
            }
            match f.next_element(&x) {
                Some(nx) => x = nx,
                None => break,
            }
        }
        pts
    }

    /// Chord-and-tangent oracle independent of the group-law formulas:
    /// substitute the line y = sx + t into the curve equation and peel off
    /// the two known roots by polynomial division; the leftover linear
    /// factor is the third intersection point.
    fn oracle_add(c: &EllipticCurve, u: &CurvePoint, v: &CurvePoint) -> CurvePoint {
        use crate::poly::{self, Poly};
        let f = c.field();
        let (x1, y1) = match u.xy() {
            None => return v.clone(),
            Some(p) => p,
        };
        let (x2, y2) = match v.xy() {
            None => return u.clone(),
            Some(p) => p,
        };
        if x1 == x2 && *y1 == f.neg(y2) {
            return CurvePoint::Infinity;
        }
        let slope = if u == v {
            let num = f.add(&f.mul_small(3, &f.sq(x1)), &c.a4);
            f.div(&num, &f.double_el(y1)).unwrap()
        } else {
            f.div(&f.sub(y2, y1), &f.sub(x2, x1)).unwrap()
        };
        let t = f.sub(y1, &f.mul(&slope, x1));
        // x^3 + a4 x + a6 - (s x + t)^2
        let cubic = Poly::new(vec![
            f.sub(&c.a6, &f.sq(&t)),
            f.sub(&c.a4, &f.double_el(&f.mul(&slope, &t))),
            f.neg(&f.sq(&slope)),
            f.one(),
        ]);
        let lin1 = Poly::new(vec![f.neg(x1), f.one()]);
        let lin2 = Poly::new(vec![f.neg(x2), f.one()]);
        let (q1, r1) = poly::divmod(f, &cubic, &lin1).unwrap();
        assert!(r1.is_zero());
        let (q2, r2) = poly::divmod(f, &q1, &lin2).unwrap();
        assert!(r2.is_zero());
        assert_eq!(q2.degree(), Some(1));
        let x3 = f.neg(&q2.coeffs[0]);
        let y3 = f.add(&f.mul(&slope, &x3), &t);
        c.neg(&CurvePoint::affine(x3, y3))
    }

    #[test]
    fn identity_and_inverse() {
        let c = curve_f7();
        let pts = all_points(&c);
        assert_eq!(pts.len(), 12);
        for p in &pts {
            assert_eq!(c.add(p, &CurvePoint::Infinity), *p);
            assert_eq!(c.add(&CurvePoint::Infinity, p), *p);
            assert!(c.add(p, &c.neg(p)).is_infinity());
        }
    }

    #[test]
    fn exhaustive_group_law_matches_chord_tangent_oracle() {
        let c = curve_f7();
        let pts = all_points(&c);
        for u in &pts {
            for v in &pts {
                let got = c.add(u, v);
                let want = oracle_add(&c, u, v);
                assert_eq!(got, want, "u={u:?} v={v:?}");
                assert!(c.contains(&got));
            }
        }
    }

    #[test]
    fn doubling_matches_self_addition() {
        use rand::SeedableRng;
        let f = Field::prime(101).unwrap();
        let c = EllipticCurve::new(f.clone(), f.from_u64(3), f.from_u64(7)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let p = c.random_point(&mut rng);
            assert_eq!(c.double(&p), c.add(&p, &p));
        }
        assert!(c.double(&CurvePoint::Infinity).is_infinity());
    }

    #[test]
    fn two_torsion_doubles_to_infinity() {
        // y^2 = x^3 + 1 has (-1, 0) = (6, 0) of order 2 over F_7
        let c = curve_f7();
        let f = c.field();
        let t = CurvePoint::affine(f.from_u64(6), f.zero());
        assert!(c.contains(&t));
        assert!(c.double(&t).is_infinity());
    }

    #[test]
    fn associativity_sampled() {
        use rand::SeedableRng;
        let f = Field::prime(211).unwrap();
        let c = EllipticCurve::new(f.clone(), f.from_u64(5), f.from_u64(11)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..500 {
            let (u, v, w) = (
                c.random_point(&mut rng),
                c.random_point(&mut rng),
                c.random_point(&mut rng),
            );
            assert_eq!(c.add(&c.add(&u, &v), &w), c.add(&u, &c.add(&v, &w)));
        }
    }

    #[test]
    fn scalar_mul_consistency() {
        use rand::SeedableRng;
        let c = curve_f7();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = c.random_point(&mut rng);
            let mut acc = CurvePoint::Infinity;
            for n in 0..=64i128 {
                assert_eq!(c.scalar_mul(n, &p), acc, "n={n}");
                acc = c.add(&acc, &p);
            }
            assert_eq!(c.scalar_mul(-1, &p), c.neg(&p));
            assert!(c.scalar_mul(0, &p).is_infinity());
        }
        // every point of the 12-point curve is killed by 12
        for p in all_points(&c) {
            assert!(c.scalar_mul(12, &p).is_infinity());
        }
    }

    #[test]
    fn line_vanishes_exactly_at_expected_points() {
        let c = curve_f7();
        let pts = all_points(&c);
        for u in &pts {
            for v in &pts {
                if u.is_infinity() || v.is_infinity() {
                    continue;
                }
                let line = c.line_through(u, v).unwrap();
                let (sum, _) = if u == v {
                    c.double_with_line(u)
                } else {
                    c.add_with_line(u, v)
                };
                let mut expected: Vec<CurvePoint> = vec![u.clone(), v.clone(), c.neg(&sum)];
                expected.retain(|p| !p.is_infinity());
                for w in &pts {
                    if w.is_infinity() {
                        continue;
                    }
                    let val = c.eval_line(&line, w).unwrap();
                    let should_vanish = expected.contains(w);
                    assert_eq!(
                        val.is_zero(),
                        should_vanish,
                        "line through {u:?},{v:?} at {w:?}"
                    );
                    // coefficient view agrees with point-slope evaluation
                    let lc = line.coeffs(c.field());
                    assert_eq!(c.eval_line_coeffs(&lc, w).unwrap(), val);
                }
            }
        }
    }

    #[test]
    fn vertical_line_conventions() {
        let c = curve_f7();
        let f = c.field();
        let p = CurvePoint::affine(f.from_u64(0), f.from_u64(1));
        let line = c.line_through(&p, &c.neg(&p)).unwrap();
        let lc = line.coeffs(f);
        assert!(lc.c2.is_zero());
        assert_eq!(lc.c1, f.one());
        assert!(c
            .eval_line(&line, &CurvePoint::affine(f.from_u64(0), f.from_u64(6)))
            .unwrap()
            .is_zero());
        assert!(c
            .line_through(&CurvePoint::Infinity, &CurvePoint::Infinity)
            .is_err());
        assert!(c.eval_line(&line, &CurvePoint::Infinity).is_err());
        // constant-line coefficient view evaluates to c0
        let unit = LineCoeffs {
            c0: f.one(),
            c1: f.zero(),
            c2: f.zero(),
        };
        assert_eq!(c.eval_line_coeffs(&unit, &p).unwrap(), f.one());
    }

    #[test]
    fn tangent_vanishes_at_double_negation() {
        use rand::SeedableRng;
        let f = Field::prime(31).unwrap();
        let c = EllipticCurve::new(f.clone(), f.from_u64(2), f.from_u64(9)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let u = c.random_point(&mut rng);
            if u.is_infinity() {
                continue;
            }
            let (du, line) = c.double_with_line(&u);
            if du.is_infinity() {
                continue;
            }
            let minus = c.neg(&du);
            assert!(c.eval_line(&line.unwrap(), &minus).unwrap().is_zero());
        }
    }

    #[test]
    fn counter_contract_for_group_ops() {
        use rand::SeedableRng;
        let f = Field::prime(10007).unwrap();
        let c = EllipticCurve::new(f.clone(), f.from_u64(31), f.from_u64(17)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let mut generic_adds = 0;
        let mut generic_doubles = 0;
        for _ in 0..50 {
            let u = c.random_point(&mut rng);
            let v = c.random_point(&mut rng);
            if let (Some((xu, _)), Some((xv, _))) = (u.xy(), v.xy()) {
                if xu != xv {
                    let before = f.ops();
                    c.add(&u, &v);
                    let d = f.ops() - before;
                    assert_eq!((d.mul, d.div), (2, 1));
                    generic_adds += 1;
                }
            }
            if let Some((_, yu)) = u.xy() {
                if !yu.is_zero() {
                    let before = f.ops();
                    c.double(&u);
                    let d = f.ops() - before;
                    assert_eq!((d.mul, d.div), (3, 1));
                    generic_doubles += 1;
                }
            }
        }
        assert!(generic_adds > 30 && generic_doubles > 30);
    }

    #[test]
    fn point_parsing_roundtrip() {
        let c = curve_f7();
        let p = c.parse_point("0,1").unwrap();
        assert_eq!(c.format_point(&p), "0,1");
        assert_eq!(c.parse_point("inf").unwrap(), CurvePoint::Infinity);
        assert!(c.parse_point("1,1").is_err()); // not on curve
    }
}
