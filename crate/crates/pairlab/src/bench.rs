//! Paired operation-count benches: baseline vs squared pairing on shared
//! chains, measured with the instrumented counters.
//!
//! Step costs do not depend on torsion validity, so the bench derives random
//! curves and points over a large prime, disables the torsion preconditions
//! and measures the per-step counter deltas of every engine over a chain
//! long enough to contain well over twenty generic steps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{Policy, StepKind};
use crate::ec::EllipticCurve;
use crate::ec_pairings::{self, EcPairingOpts, StepStats};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hec_pairings::{self, HecPairingOpts};
use crate::jacobian::HyperellipticCurve;
use crate::poly::Poly;
use crate::report::{AlgCost, BenchReport, ClassCost};

/// Default bench prime (2^31 - 1), large enough that special geometry never
/// occurs in practice.
pub const BENCH_PRIME: u64 = 2_147_483_647;

/// Default pairing order: 21 bits, alternating, giving 20 doubling steps and
/// 9 generic addition steps plus the final special one.
pub const BENCH_ORDER: u64 = 1_398_101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BenchFamily {
    /// Miller Weil vs squared Weil.
    EcWeil,
    /// Miller Tate vs squared Tate.
    EcTate,
    /// Frey-Rueck baseline vs squared Tate on a genus-2 Jacobian.
    Hec,
}

impl BenchFamily {
    pub fn name(&self) -> &'static str {
        match self {
            BenchFamily::EcWeil => "ec-weil",
            BenchFamily::EcTate => "ec-tate",
            BenchFamily::Hec => "hec",
        }
    }

    /// The conventional division/inversion weight for this family's
    /// operation model: 5 for elliptic divisions, 4 for genus-2 inversions.
    pub fn default_div_weight(&self) -> f64 {
        match self {
            BenchFamily::EcWeil | BenchFamily::EcTate => 5.0,
            BenchFamily::Hec => 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BenchOpts {
    pub trials: usize,
    pub m: u64,
    pub div_weight: Option<f64>,
    pub seed: u64,
}

impl Default for BenchOpts {
    fn default() -> Self {
        BenchOpts {
            trials: 5,
            m: BENCH_ORDER,
            div_weight: None,
            seed: 1,
        }
    }
}

fn class_cost(stats: &[StepStats], kind: StepKind, weight: f64) -> ClassCost {
    let mut steps = 0usize;
    let mut mul = 0u64;
    let mut div = 0u64;
    for s in stats {
        for r in s.generic_records(kind) {
            steps += 1;
            mul += r.ops.mul;
            div += r.ops.div;
        }
    }
    let n = steps.max(1) as f64;
    let mul_mean = mul as f64 / n;
    let div_mean = div as f64 / n;
    ClassCost {
        steps,
        mul_mean,
        div_mean,
        weighted: mul_mean + weight * div_mean,
    }
}

fn alg_cost(stats: &[StepStats], weight: f64) -> AlgCost {
    AlgCost {
        double: class_cost(stats, StepKind::Double, weight),
        add: class_cost(stats, StepKind::Add, weight),
        special_steps: stats.iter().map(|s| s.specials()).sum(),
    }
}

fn weighted_total(stats: &[StepStats], weight: f64) -> f64 {
    let mut total = 0.0;
    for s in stats {
        for r in s.records.iter().filter(|r| r.generic) {
            total += r.ops.mul as f64 + weight * r.ops.div as f64;
        }
    }
    total
}

fn savings(base: f64, squared: f64) -> f64 {
    if base == 0.0 {
        0.0
    } else {
        1.0 - squared / base
    }
}

/// Run the paired bench and report measured per-step means and savings.
pub fn run_bench(family: BenchFamily, opts: &BenchOpts) -> Result<BenchReport> {
    if opts.trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let weight = opts
        .div_weight
        .unwrap_or_else(|| family.default_div_weight());
    let (baseline, squared) = match family {
        BenchFamily::EcWeil | BenchFamily::EcTate => ec_trials(family, opts)?,
        BenchFamily::Hec => hec_trials(opts)?,
    };
    let base_cost = alg_cost(&baseline, weight);
    let sq_cost = alg_cost(&squared, weight);
    Ok(BenchReport {
        schema: 1,
        family: family.name().to_string(),
        trials: opts.trials,
        m: opts.m,
        div_weight: weight,
        savings_double: savings(base_cost.double.weighted, sq_cost.double.weighted),
        savings_add: savings(base_cost.add.weighted, sq_cost.add.weighted),
        savings_aggregate: savings(
            weighted_total(&baseline, weight),
            weighted_total(&squared, weight),
        ),
        baseline: base_cost,
        squared: sq_cost,
    })
}

fn ec_trials(family: BenchFamily, opts: &BenchOpts) -> Result<(Vec<StepStats>, Vec<StepStats>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut baseline = vec![];
    let mut squared = vec![];
    for trial in 0..opts.trials {
        let field = Field::prime(BENCH_PRIME)?;
        let curve = loop {
            let a4 = field.from_u64(rng.random_range(0..BENCH_PRIME));
            let a6 = field.from_u64(rng.random_range(0..BENCH_PRIME));
            if let Ok(c) = EllipticCurve::new(field.clone(), a4, a6) {
                break c;
            }
        };
        let p = curve.random_point(&mut rng);
        let q = curve.random_point(&mut rng);
        let run_opts = EcPairingOpts {
            policy: Policy::Binary,
            normalized: false,
            seed: opts.seed ^ (trial as u64 + 1),
            check_preconditions: false,
        };
        let (b, s) = match family {
            BenchFamily::EcWeil => (
                ec_pairings::miller_weil(&curve, &p, &q, opts.m, &run_opts)?,
                ec_pairings::squared_weil(&curve, &p, &q, opts.m, &run_opts)?,
            ),
            BenchFamily::EcTate => (
                ec_pairings::miller_tate(&curve, &p, &q, opts.m, &run_opts)?,
                ec_pairings::squared_tate(&curve, &p, &q, opts.m, &run_opts)?,
            ),
            BenchFamily::Hec => unreachable!(),
        };
        baseline.push(b.steps);
        squared.push(s.steps);
    }
    Ok((baseline, squared))
}

fn hec_trials(opts: &BenchOpts) -> Result<(Vec<StepStats>, Vec<StepStats>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut baseline = vec![];
    let mut squared = vec![];
    for trial in 0..opts.trials {
        let field = Field::prime(BENCH_PRIME)?;
        let curve = loop {
            let mut coeffs: Vec<u64> = (0..5).map(|_| rng.random_range(0..BENCH_PRIME)).collect();
            coeffs.push(1);
            if let Ok(c) = HyperellipticCurve::new(field.clone(), Poly::from_u64s(&field, &coeffs))
            {
                break c;
            }
        };
        let d = curve.random_divisor(&mut rng);
        let e = curve.random_divisor(&mut rng);
        let run_opts = HecPairingOpts {
            alt_chain: false,
            seed: opts.seed ^ (trial as u64 + 1),
            check_preconditions: false,
        };
        let b = hec_pairings::standard_tate_hec(&curve, &d, &e, opts.m, &run_opts)?;
        let s = hec_pairings::squared_tate_hec(&curve, &d, &e, opts.m, &run_opts)?;
        baseline.push(b.steps);
        squared.push(s.steps);
    }
    Ok((baseline, squared))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ec_tate_step_budgets() {
        let opts = BenchOpts {
            trials: 2,
            ..Default::default()
        };
        let report = run_bench(BenchFamily::EcTate, &opts).unwrap();
        assert_eq!(
            (report.baseline.add.mul_mean, report.baseline.add.div_mean),
            (10.0, 1.0)
        );
        assert_eq!(
            (report.squared.add.mul_mean, report.squared.add.div_mean),
            (7.0, 1.0)
        );
        assert_eq!(report.baseline.double.mul_mean, 11.0);
        assert_eq!(report.squared.double.mul_mean, 8.0);
        assert!(report.baseline.add.steps >= 2 * 9);
        assert!(report.savings_aggregate > 0.18 && report.savings_aggregate < 0.22);
    }

    #[test]
    fn ec_weil_step_budgets() {
        let opts = BenchOpts {
            trials: 2,
            ..Default::default()
        };
        let report = run_bench(BenchFamily::EcWeil, &opts).unwrap();
        assert_eq!(
            (report.baseline.add.mul_mean, report.baseline.add.div_mean),
            (18.0, 2.0)
        );
        assert_eq!(
            (report.squared.add.mul_mean, report.squared.add.div_mean),
            (12.0, 2.0)
        );
        assert_eq!(report.baseline.double.mul_mean, 20.0);
        assert_eq!(report.squared.double.mul_mean, 14.0);
        assert!(report.savings_aggregate > 0.18 && report.savings_aggregate < 0.22);
    }

    #[test]
    fn hec_step_budgets() {
        let opts = BenchOpts {
            trials: 2,
            ..Default::default()
        };
        let report = run_bench(BenchFamily::Hec, &opts).unwrap();
        assert_eq!(
            (report.baseline.add.mul_mean, report.baseline.add.div_mean),
            (60.0, 2.0)
        );
        assert_eq!(
            (report.squared.add.mul_mean, report.squared.add.div_mean),
            (38.0, 2.0)
        );
        assert_eq!(report.baseline.double.mul_mean, 64.0);
        assert_eq!(report.squared.double.mul_mean, 46.0);
        // paired savings at inversion = 4 multiplications
        assert!((report.savings_double - 0.25).abs() < 1e-12);
        assert!(report.savings_add > 0.32);
    }
}
