//! The four elliptic-curve pairing engines.
//!
//! * `miller_weil` / `miller_tate`: the probabilistic baselines that evaluate
//!   Miller functions at a randomly shifted divisor and retry on zero hits.
//! * `squared_weil` / `squared_tate`: the deterministic variants that track
//!   the quotient n_j/d_j of Miller-function values at mirrored points, so no
//!   auxiliary randomness is needed.
//!
//! Generic per-step budgets (distinct-x addition steps, counted in field
//! multiplications/divisions): Miller Weil 18/2, squared Weil 12/2, Miller
//! Tate 10/1, squared Tate 7/1; doubling steps add 2 more multiplications for
//! the Weil variants and 1 for the Tate variants. The step recorder in this
//! module is what the cost-reproduction suite measures.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chain::{self, ChainStep, Policy, StepKind};
use crate::counter::OpCount;
use crate::ec::{CurvePoint, EllipticCurve, Line};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

pub const RETRY_CAP: usize = 64;

/// Per-step measurement emitted by every engine.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StepRecord {
    pub kind: StepKind,
    /// True when the step followed the generic-geometry fast path; cost
    /// contracts apply to generic steps only.
    pub generic: bool,
    pub ops: OpCount,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct StepStats {
    pub records: Vec<StepRecord>,
}

impl StepStats {
    pub fn count(&self, kind: StepKind) -> usize {
        self.records.iter().filter(|r| r.kind == kind).count()
    }

    pub fn generic_records(&self, kind: StepKind) -> impl Iterator<Item = &StepRecord> {
        self.records
            .iter()
            .filter(move |r| r.generic && r.kind == kind)
    }

    /// Mean (mul, div) over generic steps of one kind, if any exist.
    pub fn generic_mean(&self, kind: StepKind) -> Option<(f64, f64)> {
        let recs: Vec<&StepRecord> = self.generic_records(kind).collect();
        if recs.is_empty() {
            return None;
        }
        let n = recs.len() as f64;
        let mul: u64 = recs.iter().map(|r| r.ops.mul).sum();
        let div: u64 = recs.iter().map(|r| r.ops.div).sum();
        Some((mul as f64 / n, div as f64 / n))
    }

    pub fn specials(&self) -> usize {
        self.records.iter().filter(|r| !r.generic).count()
    }
}

/// Counter deltas split the way the cost analyses split them: the Miller
/// loop is reported separately from setup and final exponentiation.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct OpsBreakdown {
    pub setup: OpCount,
    pub miller_loop: OpCount,
    pub final_exp: OpCount,
}

impl OpsBreakdown {
    pub fn total(&self) -> OpCount {
        self.setup + self.miller_loop + self.final_exp
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairingResult {
    pub value: FieldElement,
    pub degenerate: bool,
    pub ops: OpsBreakdown,
    pub steps: StepStats,
}

#[derive(Debug, Clone, Copy)]
pub struct EcPairingOpts {
    pub policy: Policy,
    /// Divide the raw squared-Weil output by (-1)^m.
    pub normalized: bool,
    pub seed: u64,
    /// Verify torsion/divisibility preconditions (disabled by the step-cost
    /// benches, which only exercise generic loop arithmetic).
    pub check_preconditions: bool,
}

impl Default for EcPairingOpts {
    fn default() -> Self {
        EcPairingOpts {
            policy: Policy::Naf,
            normalized: false,
            seed: 1,
            check_preconditions: true,
        }
    }
}

// ---------------------------------------------------------------------------
// shared chain walking
// ---------------------------------------------------------------------------

struct Walker<'a> {
    field: &'a Field,
    stats: StepStats,
}

impl<'a> Walker<'a> {
    fn new(field: &'a Field) -> Self {
        Walker {
            field,
            stats: StepStats::default(),
        }
    }

    fn walk<T: Clone, E>(
        &mut self,
        steps: &[ChainStep],
        init: T,
        mut step_fn: impl FnMut(&T, &T, StepKind) -> std::result::Result<(T, bool), E>,
    ) -> std::result::Result<T, E> {
        let mut entries = vec![init];
        for s in steps {
            let before = self.field.ops();
            let (next, generic) = step_fn(&entries[s.left], &entries[s.right], s.kind)?;
            self.stats.records.push(StepRecord {
                kind: s.kind,
                generic,
                ops: self.field.ops() - before,
            });
            entries.push(next);
        }
        Ok(entries.pop().expect("chain has an initial entry"))
    }
}

fn is_generic_pair(u: &CurvePoint, v: &CurvePoint, kind: StepKind) -> bool {
    match kind {
        StepKind::Double => match u.xy() {
            Some((_, y)) => !y.is_zero(),
            None => false,
        },
        StepKind::Add | StepKind::Subtract => match (u.xy(), v.xy()) {
            (Some((xu, _)), Some((xv, _))) => xu != xv,
            _ => false,
        },
    }
}

/// Apply the chain operation to a bare point, returning the result and the
/// connecting line (None when an operand sits at infinity).
fn point_step(
    curve: &EllipticCurve,
    u: &CurvePoint,
    v: &CurvePoint,
    kind: StepKind,
) -> (CurvePoint, Option<Line>) {
    match kind {
        StepKind::Double => curve.double_with_line(u),
        StepKind::Add => curve.add_with_line(u, v),
        StepKind::Subtract => curve.sub_with_line(u, v),
    }
}

// ---------------------------------------------------------------------------
// squared Tate pairing
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct TateAcc {
    pt: CurvePoint,
    n: FieldElement,
    d: FieldElement,
}

/// Deterministic squared Tate pairing v_m(P, Q) = phi_m(P, Q)^2.
///
/// A zero numerator or denominator mid-chain can happen only when Q is a
/// multiple of P, which violates the preconditions and is reported as such.
pub fn squared_tate(
    curve: &EllipticCurve,
    p: &CurvePoint,
    q: &CurvePoint,
    m: u64,
    opts: &EcPairingOpts,
) -> Result<PairingResult> {
    let f = curve.field();
    if m == 0 {
        return Err(Error::InvalidOrder);
    }
    if p.is_infinity() || q.is_infinity() {
        return Err(Error::InvalidInput("base points must be affine".into()));
    }
    let start = f.ops();
    if opts.check_preconditions {
        curve.check_point(p)?;
        curve.check_point(q)?;
        if !(f.q() - 1).is_multiple_of(m as u128) {
            return Err(Error::InvalidInput("m must divide q - 1".into()));
        }
        if !curve.scalar_mul(m as i128, p).is_infinity() {
            return Err(Error::NotTorsion);
        }
    }
    let steps = chain::build_chain(m, opts.policy)?;
    let setup = f.ops() - start;

    let loop_start = f.ops();
    let mut walker = Walker::new(f);
    let init = TateAcc {
        pt: p.clone(),
        n: f.one(),
        d: f.one(),
    };
    let out = walker.walk(&steps, init, |l, r, kind| -> Result<(TateAcc, bool)> {
        let generic = is_generic_pair(&l.pt, &r.pt, kind);
        let (sum, line) = point_step(curve, &l.pt, &r.pt, kind);
        match line {
            Some(Line::Chord { .. }) => {
                let line = line.unwrap();
                let (g_at_q, g_at_mq) = curve.eval_line_pair(&line, q)?;
                if g_at_q.is_zero() || g_at_mq.is_zero() {
                    return Err(Error::MultipleOfBasePoint);
                }
                let (n, d) = match kind {
                    StepKind::Double | StepKind::Add => (
                        f.mul(&f.mul(&l.n, &r.n), &g_at_q),
                        f.mul(&f.mul(&l.d, &r.d), &g_at_mq),
                    ),
                    StepKind::Subtract => (
                        f.mul(&f.mul(&l.n, &r.d), &g_at_mq),
                        f.mul(&f.mul(&l.d, &r.n), &g_at_q),
                    ),
                };
                Ok((TateAcc { pt: sum, n, d }, generic))
            }
            // operand at infinity or a vertical step: every line factor
            // contributes equally at Q and -Q, so the quotient is untouched
            _ => {
                let (n, d) = match kind {
                    StepKind::Double | StepKind::Add => (f.mul(&l.n, &r.n), f.mul(&l.d, &r.d)),
                    StepKind::Subtract => (f.mul(&l.n, &r.d), f.mul(&l.d, &r.n)),
                };
                Ok((TateAcc { pt: sum, n, d }, false))
            }
        }
    })?;
    let miller_loop = f.ops() - loop_start;

    let fe_start = f.ops();
    let ratio = f
        .div(&out.n, &out.d)
        .map_err(|_| Error::MultipleOfBasePoint)?;
    let value = if (f.q() - 1).is_multiple_of(m as u128) {
        f.pow(&ratio, (f.q() - 1) / m as u128)
    } else {
        ratio
    };
    let final_exp = f.ops() - fe_start;

    Ok(PairingResult {
        value,
        degenerate: false,
        ops: OpsBreakdown {
            setup,
            miller_loop,
            final_exp,
        },
        steps: walker.stats,
    })
}

// ---------------------------------------------------------------------------
// squared Weil pairing
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct WeilAcc {
    jp: CurvePoint,
    jq: CurvePoint,
    n: FieldElement,
    d: FieldElement,
}

/// Deterministic squared Weil pairing; returns (-1)^m e_m(P, Q)^2 raw, or
/// e_m(P, Q)^2 when `opts.normalized` is set. A vanished factor proves Q is
/// a multiple of P, in which case the pairing is 1 and the result is flagged
/// degenerate.
pub fn squared_weil(
    curve: &EllipticCurve,
    p: &CurvePoint,
    q: &CurvePoint,
    m: u64,
    opts: &EcPairingOpts,
) -> Result<PairingResult> {
    let f = curve.field();
    if m == 0 {
        return Err(Error::InvalidOrder);
    }
    if p.is_infinity() || q.is_infinity() {
        return Err(Error::InvalidInput("base points must be affine".into()));
    }
    if p == q || *p == curve.neg(q) {
        return Err(Error::InvalidInput("P must differ from +-Q".into()));
    }
    let start = f.ops();
    if opts.check_preconditions {
        curve.check_point(p)?;
        curve.check_point(q)?;
        if !curve.scalar_mul(m as i128, p).is_infinity()
            || !curve.scalar_mul(m as i128, q).is_infinity()
        {
            return Err(Error::NotTorsion);
        }
    }
    let steps = chain::build_chain(m, opts.policy)?;
    let setup = f.ops() - start;

    struct DegenerateHit;
    let loop_start = f.ops();
    let mut walker = Walker::new(f);
    let init = WeilAcc {
        jp: p.clone(),
        jq: q.clone(),
        n: f.one(),
        d: f.one(),
    };
    let walked = walker.walk(&steps, init, |l, r, kind| {
        let generic = is_generic_pair(&l.jp, &r.jp, kind) && is_generic_pair(&l.jq, &r.jq, kind);
        let (sum_p, line_p) = point_step(curve, &l.jp, &r.jp, kind);
        let (sum_q, line_q) = point_step(curve, &l.jq, &r.jq, kind);
        // chord factors; vertical or missing lines contribute equally at
        // mirrored points and drop out of the quotient
        let pair_p = match &line_p {
            Some(line @ Line::Chord { .. }) => {
                Some(curve.eval_line_pair(line, q).expect("Q is affine"))
            }
            _ => None,
        };
        let pair_q = match &line_q {
            Some(line @ Line::Chord { .. }) => {
                Some(curve.eval_line_pair(line, p).expect("P is affine"))
            }
            _ => None,
        };
        if let Some((a, b)) = &pair_p {
            if a.is_zero() || b.is_zero() {
                return Err(DegenerateHit);
            }
        }
        if let Some((a, b)) = &pair_q {
            if a.is_zero() || b.is_zero() {
                return Err(DegenerateHit);
            }
        }
        let generic = generic && pair_p.is_some() && pair_q.is_some();
        let (mut n, mut d) = match kind {
            StepKind::Double | StepKind::Add => (f.mul(&l.n, &r.n), f.mul(&l.d, &r.d)),
            StepKind::Subtract => (f.mul(&l.n, &r.d), f.mul(&l.d, &r.n)),
        };
        match kind {
            StepKind::Double | StepKind::Add => {
                if let Some((gq, gmq)) = &pair_p {
                    n = f.mul(&n, gq);
                    d = f.mul(&d, gmq);
                }
                if let Some((gp, gmp)) = &pair_q {
                    n = f.mul(&n, gmp);
                    d = f.mul(&d, gp);
                }
            }
            StepKind::Subtract => {
                if let Some((gq, gmq)) = &pair_p {
                    n = f.mul(&n, gmq);
                    d = f.mul(&d, gq);
                }
                if let Some((gp, gmp)) = &pair_q {
                    n = f.mul(&n, gp);
                    d = f.mul(&d, gmp);
                }
            }
        }
        Ok((
            WeilAcc {
                jp: sum_p,
                jq: sum_q,
                n,
                d,
            },
            generic,
        ))
    });
    let miller_loop = f.ops() - loop_start;

    match walked {
        Err(DegenerateHit) => Ok(PairingResult {
            value: f.one(),
            degenerate: true,
            ops: OpsBreakdown {
                setup,
                miller_loop,
                final_exp: OpCount::default(),
            },
            steps: walker.stats,
        }),
        Ok(out) => {
            let fe_start = f.ops();
            let mut value = f.div(&out.n, &out.d).expect("nonzero checked per step");
            if opts.normalized && m % 2 == 1 {
                value = f.neg(&value);
            }
            let final_exp = f.ops() - fe_start;
            Ok(PairingResult {
                value,
                degenerate: false,
                ops: OpsBreakdown {
                    setup,
                    miller_loop,
                    final_exp,
                },
                steps: walker.stats,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Miller baselines
// ---------------------------------------------------------------------------

/// Factors of one Miller step on one side: the chord evaluated at the two
/// points of the evaluation divisor, and the vertical at `vert_anchor`
/// (the new multiple for additions, the left operand for subtractions).
struct MillerEval {
    line_at_plus: FieldElement,
    line_at_base: FieldElement,
    vert_at_plus: FieldElement,
    vert_at_base: FieldElement,
}

fn miller_side_eval(
    curve: &EllipticCurve,
    line: &Option<Line>,
    vert_anchor: &CurvePoint,
    plus: &CurvePoint,
    base: &CurvePoint,
) -> Result<MillerEval> {
    let f = curve.field();
    let one = f.one();
    let (line_at_plus, line_at_base) = match line {
        Some(l) => (curve.eval_line(l, plus)?, curve.eval_line(l, base)?),
        None => (one.clone(), one.clone()),
    };
    let (vert_at_plus, vert_at_base) = match vert_anchor.xy() {
        Some((xs, _)) => {
            let (xp, _) = plus.xy().ok_or(Error::InfinityEvaluation)?;
            let (xb, _) = base.xy().ok_or(Error::InfinityEvaluation)?;
            (f.sub(xp, xs), f.sub(xb, xs))
        }
        None => (one.clone(), one),
    };
    Ok(MillerEval {
        line_at_plus,
        line_at_base,
        vert_at_plus,
        vert_at_base,
    })
}

impl MillerEval {
    fn any_zero(&self) -> bool {
        self.line_at_plus.is_zero()
            || self.line_at_base.is_zero()
            || self.vert_at_plus.is_zero()
            || self.vert_at_base.is_zero()
    }
}

/// Miller's algorithm for the Tate pairing phi_m(P, Q), evaluating f_{m,P}
/// at the random divisor (Q + R2) - (R2) and retrying on zero hits.
pub fn miller_tate(
    curve: &EllipticCurve,
    p: &CurvePoint,
    q: &CurvePoint,
    m: u64,
    opts: &EcPairingOpts,
) -> Result<PairingResult> {
    let f = curve.field();
    if m == 0 {
        return Err(Error::InvalidOrder);
    }
    if p.is_infinity() || q.is_infinity() {
        return Err(Error::InvalidInput("base points must be affine".into()));
    }
    if opts.check_preconditions {
        curve.check_point(p)?;
        curve.check_point(q)?;
        if !(f.q() - 1).is_multiple_of(m as u128) {
            return Err(Error::InvalidInput("m must divide q - 1".into()));
        }
        if !curve.scalar_mul(m as i128, p).is_infinity() {
            return Err(Error::NotTorsion);
        }
    }
    let steps = chain::build_chain(m, opts.policy)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    'attempt: for _ in 0..RETRY_CAP {
        let start = f.ops();
        let r2 = curve.random_point(&mut rng);
        let qr2 = curve.add(q, &r2);
        if r2.is_infinity() || qr2.is_infinity() || r2 == *p || qr2 == *p {
            continue 'attempt;
        }
        let setup = f.ops() - start;

        let loop_start = f.ops();
        let mut walker = Walker::new(f);
        let init = TateAcc {
            pt: p.clone(),
            n: f.one(),
            d: f.one(),
        };
        struct ZeroHit;
        let walked = walker.walk(&steps, init, |l, r, kind| {
            let generic = is_generic_pair(&l.pt, &r.pt, kind);
            let (sum, line) = point_step(curve, &l.pt, &r.pt, kind);
            // f_{j-k} = f_j g_{jP} / (f_k g_{(j-k)P,kP}); the vertical sits at
            // jP (the left operand) for subtractions, at the sum otherwise
            let anchor = match kind {
                StepKind::Subtract => l.pt.clone(),
                _ => sum.clone(),
            };
            let ev = miller_side_eval(curve, &line, &anchor, &qr2, &r2).map_err(|_| ZeroHit)?;
            if ev.any_zero() {
                return Err(ZeroHit);
            }
            let generic = generic && matches!(line, Some(Line::Chord { .. })) && !sum.is_infinity();
            let (n, d) = match kind {
                StepKind::Double | StepKind::Add => (
                    f.mul(
                        &f.mul(&f.mul(&l.n, &r.n), &ev.line_at_plus),
                        &ev.vert_at_base,
                    ),
                    f.mul(
                        &f.mul(&f.mul(&l.d, &r.d), &ev.line_at_base),
                        &ev.vert_at_plus,
                    ),
                ),
                StepKind::Subtract => (
                    f.mul(
                        &f.mul(&f.mul(&l.n, &r.d), &ev.vert_at_plus),
                        &ev.line_at_base,
                    ),
                    f.mul(
                        &f.mul(&f.mul(&l.d, &r.n), &ev.vert_at_base),
                        &ev.line_at_plus,
                    ),
                ),
            };
            Ok((TateAcc { pt: sum, n, d }, generic))
        });
        let miller_loop = f.ops() - loop_start;
        let out = match walked {
            Ok(out) => out,
            Err(ZeroHit) => continue 'attempt,
        };
        if out.n.is_zero() || out.d.is_zero() {
            continue 'attempt;
        }

        let fe_start = f.ops();
        let ratio = f.div(&out.n, &out.d).expect("nonzero");
        let value = if (f.q() - 1).is_multiple_of(m as u128) {
            f.pow(&ratio, (f.q() - 1) / m as u128)
        } else {
            ratio
        };
        let final_exp = f.ops() - fe_start;
        return Ok(PairingResult {
            value,
            degenerate: false,
            ops: OpsBreakdown {
                setup,
                miller_loop,
                final_exp,
            },
            steps: walker.stats,
        });
    }
    Err(Error::RandomnessExhausted)
}

/// Miller's algorithm for the Weil pairing e_m(P, Q) with shifted divisors
/// A_P = (P + R1) - (R1), A_Q = (Q + R2) - (R2).
pub fn miller_weil(
    curve: &EllipticCurve,
    p: &CurvePoint,
    q: &CurvePoint,
    m: u64,
    opts: &EcPairingOpts,
) -> Result<PairingResult> {
    let f = curve.field();
    if m == 0 {
        return Err(Error::InvalidOrder);
    }
    if p.is_infinity() || q.is_infinity() {
        return Err(Error::InvalidInput("base points must be affine".into()));
    }
    if opts.check_preconditions {
        curve.check_point(p)?;
        curve.check_point(q)?;
        if !curve.scalar_mul(m as i128, p).is_infinity()
            || !curve.scalar_mul(m as i128, q).is_infinity()
        {
            return Err(Error::NotTorsion);
        }
    }
    let steps = chain::build_chain(m, opts.policy)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    'attempt: for _ in 0..RETRY_CAP {
        let start = f.ops();
        let r1 = curve.random_point(&mut rng);
        let r2 = curve.random_point(&mut rng);
        let pr1 = curve.add(p, &r1);
        let qr2 = curve.add(q, &r2);
        let support_p = [pr1.clone(), r1.clone()];
        let support_q = [qr2.clone(), r2.clone()];
        if support_p.iter().any(|s| s.is_infinity())
            || support_q.iter().any(|s| s.is_infinity())
            || support_p.iter().any(|s| support_q.contains(s))
        {
            continue 'attempt;
        }
        // t_1: f_{1,A_P}(A_Q) * f_{1,A_Q}(A_P)^{-1} with
        // f_{1,A_P} = g_{P+R1} / g_{P,R1}
        let t1 = (|| -> Result<Option<(FieldElement, FieldElement)>> {
            let mut n = f.one();
            let mut d = f.one();
            for (p_side, base, shift, shifted, evals) in [
                (true, p, &r1, &pr1, &support_q),
                (false, q, &r2, &qr2, &support_p),
            ] {
                let chord = curve.line_through(base, shift)?;
                let vert = Line::Vertical {
                    x0: shifted.xy().unwrap().0.clone(),
                };
                let c_plus = curve.eval_line(&chord, &evals[0])?;
                let c_base = curve.eval_line(&chord, &evals[1])?;
                let v_plus = curve.eval_line(&vert, &evals[0])?;
                let v_base = curve.eval_line(&vert, &evals[1])?;
                if c_plus.is_zero() || c_base.is_zero() || v_plus.is_zero() || v_base.is_zero() {
                    return Ok(None);
                }
                // numerator-direction for the P side, inverted for the Q side
                let (num, den) = (f.mul(&v_plus, &c_base), f.mul(&c_plus, &v_base));
                if p_side {
                    n = f.mul(&n, &num);
                    d = f.mul(&d, &den);
                } else {
                    n = f.mul(&n, &den);
                    d = f.mul(&d, &num);
                }
            }
            Ok(Some((n, d)))
        })()?;
        let (n1, d1) = match t1 {
            Some(pair) => pair,
            None => continue 'attempt,
        };
        let setup = f.ops() - start;

        let loop_start = f.ops();
        let mut walker = Walker::new(f);
        let init = WeilAcc {
            jp: p.clone(),
            jq: q.clone(),
            n: n1,
            d: d1,
        };
        struct ZeroHit;
        let walked = walker.walk(&steps, init, |l, r, kind| {
            let generic =
                is_generic_pair(&l.jp, &r.jp, kind) && is_generic_pair(&l.jq, &r.jq, kind);
            let (sum_p, line_p) = point_step(curve, &l.jp, &r.jp, kind);
            let (sum_q, line_q) = point_step(curve, &l.jq, &r.jq, kind);
            let (anchor_p, anchor_q) = match kind {
                StepKind::Subtract => (l.jp.clone(), l.jq.clone()),
                _ => (sum_p.clone(), sum_q.clone()),
            };
            let ev_p =
                miller_side_eval(curve, &line_p, &anchor_p, &qr2, &r2).map_err(|_| ZeroHit)?;
            let ev_q =
                miller_side_eval(curve, &line_q, &anchor_q, &pr1, &r1).map_err(|_| ZeroHit)?;
            if ev_p.any_zero() || ev_q.any_zero() {
                return Err(ZeroHit);
            }
            let generic = generic
                && matches!(line_p, Some(Line::Chord { .. }))
                && matches!(line_q, Some(Line::Chord { .. }))
                && !sum_p.is_infinity()
                && !sum_q.is_infinity();
            let (n, d) = match kind {
                StepKind::Double | StepKind::Add => (
                    f.mul(
                        &f.mul(
                            &f.mul(
                                &f.mul(&f.mul(&l.n, &r.n), &ev_p.line_at_plus),
                                &ev_p.vert_at_base,
                            ),
                            &ev_q.line_at_base,
                        ),
                        &ev_q.vert_at_plus,
                    ),
                    f.mul(
                        &f.mul(
                            &f.mul(
                                &f.mul(&f.mul(&l.d, &r.d), &ev_p.line_at_base),
                                &ev_p.vert_at_plus,
                            ),
                            &ev_q.line_at_plus,
                        ),
                        &ev_q.vert_at_base,
                    ),
                ),
                StepKind::Subtract => (
                    f.mul(
                        &f.mul(
                            &f.mul(
                                &f.mul(&f.mul(&l.n, &r.d), &ev_p.vert_at_plus),
                                &ev_p.line_at_base,
                            ),
                            &ev_q.vert_at_base,
                        ),
                        &ev_q.line_at_plus,
                    ),
                    f.mul(
                        &f.mul(
                            &f.mul(
                                &f.mul(&f.mul(&l.d, &r.n), &ev_p.vert_at_base),
                                &ev_p.line_at_plus,
                            ),
                            &ev_q.vert_at_plus,
                        ),
                        &ev_q.line_at_base,
                    ),
                ),
            };
            Ok((
                WeilAcc {
                    jp: sum_p,
                    jq: sum_q,
                    n,
                    d,
                },
                generic,
            ))
        });
        let miller_loop = f.ops() - loop_start;
        let out = match walked {
            Ok(out) => out,
            Err(ZeroHit) => continue 'attempt,
        };
        if out.n.is_zero() || out.d.is_zero() {
            continue 'attempt;
        }
        let fe_start = f.ops();
        let value = f.div(&out.n, &out.d).expect("nonzero");
        let final_exp = f.ops() - fe_start;
        return Ok(PairingResult {
            value,
            degenerate: false,
            ops: OpsBreakdown {
                setup,
                miller_loop,
                final_exp,
            },
            steps: walker.stats,
        });
    }
    Err(Error::RandomnessExhausted)
}

/// (-1)^m as a field element.
pub fn minus_one_to_m(f: &Field, m: u64) -> FieldElement {
    if m.is_multiple_of(2) {
        f.one()
    } else {
        f.neg(&f.one())
    }
}


#[cfg(test)]
mod exhaustion_tests {
    use super::*;
    use crate::ec::EllipticCurve;
    use crate::field::Field;
    use rand::Rng;

    #[test]
    fn pathological_group_exhausts_randomness() {
        // y^2 = x^3 + x over F_5 has exactly {O, (0,0), (2,0), (3,0)}; every
        // auxiliary divisor collides, so the Weil baseline must give up.
        let f = Field::prime(5).unwrap();
        let c = EllipticCurve::new(f.clone(), f.from_u64(1), f.from_u64(0)).unwrap();
        let p = CurvePoint::affine(f.from_u64(0), f.from_u64(0));
        let q = CurvePoint::affine(f.from_u64(2), f.from_u64(0));
        let opts = EcPairingOpts::default();
        assert_eq!(
            miller_weil(&c, &p, &q, 2, &opts).unwrap_err(),
            Error::RandomnessExhausted
        );
    }

    #[test]
    fn miller_tate_additive_bilinearity() {
        use crate::testkit::{enumerate_ec_points, find_tate_curve};
        let tc = find_tate_curve(5, 0).expect("test curve");
        let f = tc.curve.field();
        let pts = enumerate_ec_points(&tc.curve);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut checked = 0;
        while checked < 10 {
            let q1 = &pts[rng.random_range(0..pts.len())];
            let q2 = &pts[rng.random_range(0..pts.len())];
            let q12 = tc.curve.add(q1, q2);
            if q1.is_infinity() || q2.is_infinity() || q12.is_infinity() {
                continue;
            }
            let opts = EcPairingOpts {
                seed: rng.random(),
                ..Default::default()
            };
            let (a, b, c) = match (
                miller_tate(&tc.curve, &tc.base, q1, 5, &opts),
                miller_tate(&tc.curve, &tc.base, q2, 5, &opts),
                miller_tate(&tc.curve, &tc.base, &q12, 5, &opts),
            ) {
                (Ok(a), Ok(b), Ok(c)) => (a, b, c),
                _ => continue,
            };
            assert_eq!(c.value, f.mul(&a.value, &b.value));
            checked += 1;
        }
    }

    #[test]
    fn naf_subtract_steps_share_the_addition_budget() {
        use rand::SeedableRng as _;
        let f = Field::prime(crate::bench::BENCH_PRIME).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let c = loop {
            let a4 = f.from_u64(rng.random_range(0..f.p()));
            let a6 = f.from_u64(rng.random_range(0..f.p()));
            if let Ok(c) = EllipticCurve::new(f.clone(), a4, a6) {
                break c;
            }
        };
        let p = c.random_point(&mut rng);
        let q = c.random_point(&mut rng);
        // 2^20 - 1: the NAF is 100...0(-1), forcing a subtraction step
        let m = (1u64 << 20) - 1;
        let opts = EcPairingOpts {
            policy: Policy::Naf,
            check_preconditions: false,
            ..Default::default()
        };
        let budgets = [
            (squared_tate(&c, &p, &q, m, &opts).unwrap(), (7, 1), (8, 1)),
            (miller_tate(&c, &p, &q, m, &opts).unwrap(), (10, 1), (11, 1)),
            (
                squared_weil(&c, &p, &q, m, &opts).unwrap(),
                (12, 2),
                (14, 2),
            ),
            (miller_weil(&c, &p, &q, m, &opts).unwrap(), (18, 2), (20, 2)),
        ];
        for (res, addlike, dbl) in budgets {
            let mut subtracts = 0;
            for r in res.steps.records.iter().filter(|r| r.generic) {
                match r.kind {
                    StepKind::Subtract => {
                        subtracts += 1;
                        assert_eq!((r.ops.mul, r.ops.div), addlike);
                    }
                    StepKind::Add => assert_eq!((r.ops.mul, r.ops.div), addlike),
                    StepKind::Double => assert_eq!((r.ops.mul, r.ops.div), dbl),
                }
            }
            assert!(subtracts >= 1, "NAF chain must contain a subtraction");
        }
    }
}
