//! Addition-subtraction chains driving every pairing loop.
//!
//! A chain starts from an implicit entry holding 1 (index 0); each step
//! combines two earlier entries and the final step produces the target m.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Double,
    Add,
    Subtract,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub kind: StepKind,
    /// Index of the left operand among chain entries (0 = the initial 1,
    /// i = the value produced by step i).
    pub left: usize,
    /// Index of the right operand (ignored for doubles, kept equal to left).
    pub right: usize,
    /// The integer this step produces.
    pub value: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    /// Left-to-right double-and-add; never emits subtract steps.
    Binary,
    /// Width-2 non-adjacent form; may emit subtract steps.
    Naf,
}

/// Build a chain from 1 to m. m = 1 yields the empty chain.
pub fn build_chain(m: u64, policy: Policy) -> Result<Vec<ChainStep>> {
    if m == 0 {
        return Err(Error::InvalidOrder);
    }
    match policy {
        Policy::Binary => Ok(binary_chain(m)),
        Policy::Naf => Ok(naf_chain(m)),
    }
}

fn binary_chain(m: u64) -> Vec<ChainStep> {
    let mut steps = vec![];
    if m == 1 {
        return steps;
    }
    let bits = 64 - m.leading_zeros();
    let mut cur_idx = 0usize;
    let mut cur_val = 1u64;
    for i in (0..bits - 1).rev() {
        cur_val *= 2;
        steps.push(ChainStep {
            kind: StepKind::Double,
            left: cur_idx,
            right: cur_idx,
            value: cur_val,
        });
        cur_idx = steps.len();
        if (m >> i) & 1 == 1 {
            cur_val += 1;
            steps.push(ChainStep {
                kind: StepKind::Add,
                left: cur_idx,
                right: 0,
                value: cur_val,
            });
            cur_idx = steps.len();
        }
    }
    steps
}

/// Standard width-2 NAF digits, least-significant first.
fn naf_digits(m: u64) -> Vec<i8> {
    let mut m = m as u128;
    let mut digits = vec![];
    while m > 0 {
        if m & 1 == 1 {
            let d: i8 = if m % 4 == 3 { -1 } else { 1 };
            digits.push(d);
            m = (m as i128 - d as i128) as u128;
        } else {
            digits.push(0);
        }
        m >>= 1;
    }
    digits
}

fn naf_chain(m: u64) -> Vec<ChainStep> {
    let mut steps = vec![];
    if m == 1 {
        return steps;
    }
    let digits = naf_digits(m);
    let mut cur_idx = 0usize;
    let mut cur_val = 1i128;
    // top digit of a NAF is always +1
    for &d in digits.iter().rev().skip(1) {
        cur_val *= 2;
        steps.push(ChainStep {
            kind: StepKind::Double,
            left: cur_idx,
            right: cur_idx,
            value: cur_val as u64,
        });
        cur_idx = steps.len();
        if d != 0 {
            cur_val += d as i128;
            steps.push(ChainStep {
                kind: if d == 1 {
                    StepKind::Add
                } else {
                    StepKind::Subtract
                },
                left: cur_idx,
                right: 0,
                value: cur_val as u64,
            });
            cur_idx = steps.len();
        }
    }
    steps
}

/// Replay the integer arithmetic and check every structural constraint.
pub fn verify_chain(steps: &[ChainStep], m: u64) -> bool {
    let mut values = vec![1i128];
    for (i, s) in steps.iter().enumerate() {
        let this = i + 1;
        if s.left >= this || s.right >= this {
            return false;
        }
        let (l, r) = (values[s.left], values[s.right]);
        let v = match s.kind {
            StepKind::Double => {
                if s.left != s.right {
                    return false;
                }
                2 * l
            }
            StepKind::Add => l + r,
            StepKind::Subtract => l - r,
        };
        if v <= 0 || v != s.value as i128 {
            return false;
        }
        values.push(v);
    }
    values.last().copied() == Some(m as i128)
}

/// Render one step per line as `idx: value = left op right`.
pub fn format_chain(steps: &[ChainStep]) -> String {
    let mut values = vec![1u64];
    let mut out = String::new();
    for (i, s) in steps.iter().enumerate() {
        let (l, r) = (values[s.left], values[s.right]);
        let op = match s.kind {
            StepKind::Double | StepKind::Add => '+',
            StepKind::Subtract => '-',
        };
        out.push_str(&format!("{}: {} = {} {} {}\n", i + 1, s.value, l, op, r));
        values.push(s.value);
    }
    out
}
