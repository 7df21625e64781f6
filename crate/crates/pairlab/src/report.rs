//! Machine- and human-readable rendering of pairing runs and benches.
//!
//! The JSON schema is versioned with `"schema": 1`:
//!
//! ```json
//! {
//!   "schema": 1,
//!   "alg": "tate2",
//!   "m": 5,
//!   "value": [4],
//!   "degenerate": false,
//!   "ops": {"mul": 123, "div": 7, "add": 200},
//!   "ops_detail": {"setup": {...}, "miller_loop": {...}, "final_exp": {...}},
//!   "steps": {"double": 2, "add": 1, "subtract": 0, "special": 1},
//!   "case_counts": {"case_i": 2, "case_ii": 1}   // genus-2 runs only
//! }
//! ```

use serde::{Deserialize, Serialize};

use crate::chain::StepKind;
use crate::counter::OpCount;
use crate::ec_pairings::{OpsBreakdown, PairingResult, StepStats};
use crate::hec_pairings::HecPairingResult;

#[derive(Debug, Serialize, Deserialize)]
pub struct StepCounts {
    pub double: usize,
    pub add: usize,
    pub subtract: usize,
    /// Steps excluded from the generic-cost accounting.
    pub special: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CaseCounts {
    pub case_i: usize,
    pub case_ii: usize,
}

#[derive(Debug, Serialize)]
pub struct PairingReport {
    pub schema: u32,
    pub alg: String,
    pub m: u64,
    pub value: Vec<u64>,
    pub degenerate: bool,
    pub ops: OpCount,
    pub ops_detail: OpsBreakdown,
    pub steps: StepCounts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case_counts: Option<CaseCounts>,
}

fn step_counts(stats: &StepStats) -> StepCounts {
    StepCounts {
        double: stats.count(StepKind::Double),
        add: stats.count(StepKind::Add),
        subtract: stats.count(StepKind::Subtract),
        special: stats.specials(),
    }
}

impl PairingReport {
    pub fn from_ec(alg: &str, m: u64, res: &PairingResult) -> PairingReport {
        PairingReport {
            schema: 1,
            alg: alg.to_string(),
            m,
            value: res.value.coeffs.clone(),
            degenerate: res.degenerate,
            ops: res.ops.total(),
            ops_detail: res.ops,
            steps: step_counts(&res.steps),
            case_counts: None,
        }
    }

    pub fn from_hec(alg: &str, m: u64, res: &HecPairingResult) -> PairingReport {
        PairingReport {
            schema: 1,
            alg: alg.to_string(),
            m,
            value: res.value.coeffs.clone(),
            degenerate: res.degenerate,
            ops: res.ops.total(),
            ops_detail: res.ops,
            steps: step_counts(&res.steps),
            case_counts: Some(CaseCounts {
                case_i: res.case_i,
                case_ii: res.case_ii,
            }),
        }
    }

    pub fn human(&self) -> String {
        let value = self
            .value
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let mut out = format!(
            "alg        {}\nm          {}\nvalue      {}\ndegenerate {}\n",
            self.alg, self.m, value, self.degenerate
        );
        out.push_str(&format!(
            "ops        {} mul, {} div, {} add\n",
            self.ops.mul, self.ops.div, self.ops.add
        ));
        out.push_str(&format!(
            "  loop     {} mul, {} div\n  finalexp {} mul, {} div\n  setup    {} mul, {} div\n",
            self.ops_detail.miller_loop.mul,
            self.ops_detail.miller_loop.div,
            self.ops_detail.final_exp.mul,
            self.ops_detail.final_exp.div,
            self.ops_detail.setup.mul,
            self.ops_detail.setup.div
        ));
        out.push_str(&format!(
            "steps      {} double, {} add, {} subtract ({} special)\n",
            self.steps.double, self.steps.add, self.steps.subtract, self.steps.special
        ));
        if let Some(cc) = &self.case_counts {
            out.push_str(&format!(
                "cases      {} reduced, {} unreduced\n",
                cc.case_i, cc.case_ii
            ));
        }
        out
    }
}

/// Mean per-step cost of one step class, measured over generic steps.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ClassCost {
    pub steps: usize,
    pub mul_mean: f64,
    pub div_mean: f64,
    /// mul_mean + weight * div_mean
    pub weighted: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AlgCost {
    pub double: ClassCost,
    pub add: ClassCost,
    pub special_steps: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema: u32,
    pub family: String,
    pub trials: usize,
    pub m: u64,
    /// Multiplication-equivalents per division/inversion.
    pub div_weight: f64,
    pub baseline: AlgCost,
    pub squared: AlgCost,
    /// 1 - weighted(squared)/weighted(baseline), per class and aggregated
    /// over all generic steps of the measured chains.
    pub savings_double: f64,
    pub savings_add: f64,
    pub savings_aggregate: f64,
}

impl BenchReport {
    pub fn human(&self) -> String {
        let row = |name: &str, c: &ClassCost| {
            format!(
                "  {:<9} {:>6} steps   {:>7.2} mul  {:>5.2} div  {:>8.2} weighted\n",
                name, c.steps, c.mul_mean, c.div_mean, c.weighted
            )
        };
        let mut out = format!(
            "family {}  trials {}  m {}  div-weight {}\nbaseline\n",
            self.family, self.trials, self.m, self.div_weight
        );
        out.push_str(&row("double", &self.baseline.double));
        out.push_str(&row("add", &self.baseline.add));
        out.push_str("squared\n");
        out.push_str(&row("double", &self.squared.double));
        out.push_str(&row("add", &self.squared.add));
        out.push_str(&format!(
            "savings   double {:.2}%   add {:.2}%   aggregate {:.2}%\n",
            100.0 * self.savings_double,
            100.0 * self.savings_add,
            100.0 * self.savings_aggregate
        ));
        out
    }
}
