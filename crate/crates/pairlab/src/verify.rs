//! Named property suites behind the `verify` subcommand.
//!
//! Each suite samples inputs from live-derived test curves with a seeded
//! generator, so runs are reproducible, and reports how many samples were
//! exercised and how many failed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chain::Policy;
use crate::ec_pairings::{
    miller_tate, miller_weil, minus_one_to_m, squared_tate, squared_weil, EcPairingOpts,
};
use crate::error::{Error, Result};
use crate::golden;
use crate::hec_pairings::{squared_tate_hec, standard_tate_hec, HecPairingOpts};
use crate::poly;
use crate::testkit::{self, find_full_torsion_curve, find_tate_curve};

pub const PROPERTIES: &[&str] = &[
    "squared-weil-identity",
    "squared-tate-identity",
    "genus2-squared-identity",
    "bilinearity",
    "roots-of-unity",
    "chain-independence",
    "cantor-invariants",
    "nondegeneracy",
];

#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub samples: usize,
    pub failures: usize,
}

impl PropertyReport {
    pub fn pass(&self) -> bool {
        self.failures == 0 && self.samples > 0
    }
}

/// Run one property by name or all of them.
pub fn run_properties(
    filter: Option<&str>,
    samples: usize,
    seed: u64,
) -> Result<Vec<PropertyReport>> {
    let names: Vec<&str> = match filter {
        Some(name) => {
            if !PROPERTIES.contains(&name) {
                return Err(Error::InvalidInput(format!(
                    "unknown property {name:?}; available: {}",
                    PROPERTIES.join(", ")
                )));
            }
            vec![name]
        }
        None => PROPERTIES.to_vec(),
    };
    names
        .into_iter()
        .map(|n| run_property(n, samples, seed))
        .collect()
}

fn run_property(name: &str, samples: usize, seed: u64) -> Result<PropertyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut run = 0usize;
    let mut failures = 0usize;
    match name {
        "squared-weil-identity" => {
            for m in [3u64, 4, 5] {
                let tc = find_full_torsion_curve(m, 2500)
                    .ok_or_else(|| Error::InvalidInput("no torsion curve found".into()))?;
                let f = tc.curve.field();
                let mut done = 0;
                while done < samples.div_ceil(3) {
                    let p = &tc.torsion[rng.random_range(0..tc.torsion.len())];
                    let q = &tc.torsion[rng.random_range(0..tc.torsion.len())];
                    if p.is_infinity() || q.is_infinity() || p == q || *p == tc.curve.neg(q) {
                        continue;
                    }
                    let opts = EcPairingOpts {
                        seed: rng.random(),
                        ..Default::default()
                    };
                    let sq = squared_weil(&tc.curve, p, q, m, &opts)?;
                    if sq.degenerate {
                        continue;
                    }
                    let mw = miller_weil(&tc.curve, p, q, m, &opts)?;
                    let want = f.mul(&minus_one_to_m(f, m), &f.sq(&mw.value));
                    if sq.value != want {
                        failures += 1;
                    }
                    run += 1;
                    done += 1;
                }
            }
        }
        "squared-tate-identity" => {
            let tc = find_tate_curve(5, 0)
                .ok_or_else(|| Error::InvalidInput("no tate curve found".into()))?;
            let f = tc.curve.field();
            let pts = testkit::enumerate_ec_points(&tc.curve);
            while run < samples {
                let q = &pts[rng.random_range(0..pts.len())];
                if q.is_infinity() {
                    continue;
                }
                let opts = EcPairingOpts {
                    seed: rng.random(),
                    ..Default::default()
                };
                let sq = match squared_tate(&tc.curve, &tc.base, q, 5, &opts) {
                    Ok(r) => r,
                    Err(Error::MultipleOfBasePoint) => continue,
                    Err(e) => return Err(e),
                };
                let mt = miller_tate(&tc.curve, &tc.base, q, 5, &opts)?;
                if sq.value != f.sq(&mt.value) {
                    failures += 1;
                }
                run += 1;
            }
        }
        "genus2-squared-identity" => {
            let curves = testkit::find_hec_curves(5, 2, seed);
            let demo = golden::demo_curve();
            let (demo_d, demo_e) = golden::demo_divisors(&demo);
            let mut jobs: Vec<(
                crate::jacobian::HyperellipticCurve,
                crate::jacobian::MumfordDivisor,
            )> = vec![(demo, demo_d)];
            for tc in curves {
                jobs.push((tc.curve, tc.torsion));
            }
            let _ = demo_e;
            let per = samples.div_ceil(jobs.len());
            for (curve, d) in jobs {
                let f = curve.field();
                let mut done = 0;
                let mut attempts = 0;
                while done < per && attempts < 50 * per {
                    attempts += 1;
                    let e = curve.random_divisor(&mut rng);
                    let opts = HecPairingOpts {
                        seed: rng.random(),
                        ..Default::default()
                    };
                    let sq = match squared_tate_hec(&curve, &d, &e, 5, &opts) {
                        Ok(r) => r,
                        Err(Error::DivisorCollision(_)) => continue,
                        Err(e) => return Err(e),
                    };
                    let st = match standard_tate_hec(&curve, &d, &e, 5, &opts) {
                        Ok(r) => r,
                        Err(Error::RandomnessExhausted) => continue,
                        Err(e) => return Err(e),
                    };
                    // phi^4 = (+-phi^2)^2
                    if f.pow(&st.value, 4) != f.sq(&sq.value) {
                        failures += 1;
                    }
                    run += 1;
                    done += 1;
                }
            }
        }
        "bilinearity" => {
            // EC squared Tate side
            let tc = find_tate_curve(7, 0)
                .ok_or_else(|| Error::InvalidInput("no tate curve found".into()))?;
            let f = tc.curve.field();
            let pts = testkit::enumerate_ec_points(&tc.curve);
            let opts = EcPairingOpts::default();
            let mut done = 0;
            while done < samples / 2 {
                let q = &pts[rng.random_range(0..pts.len())];
                if q.is_infinity() {
                    continue;
                }
                let two_q = tc.curve.double(q);
                if two_q.is_infinity() {
                    continue;
                }
                let (a, b) = match (
                    squared_tate(&tc.curve, &tc.base, q, 7, &opts),
                    squared_tate(&tc.curve, &tc.base, &two_q, 7, &opts),
                ) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => continue,
                };
                if b.value != f.sq(&a.value) {
                    failures += 1;
                }
                run += 1;
                done += 1;
            }
            // genus-2 side: the full multiplication table of the embedded
            // example, v(jD, kE) = v(D,E)^(jk)
            let curve = golden::demo_curve();
            let (d, e) = golden::demo_divisors(&curve);
            let f = curve.field();
            let base = squared_tate_hec(&curve, &d, &e, 5, &HecPairingOpts::default())?.value;
            for j in 1..5u64 {
                for k in 1..5u64 {
                    let jd = curve.scalar_mul(j as i128, &d);
                    let ke = curve.scalar_mul(k as i128, &e);
                    let opts = HecPairingOpts::default();
                    let got = match squared_tate_hec(&curve, &jd, &ke, 5, &opts) {
                        Ok(r) => r.value,
                        Err(Error::DivisorCollision(_)) => {
                            // reroute past the colliding chain divisor
                            let alt = HecPairingOpts {
                                alt_chain: true,
                                ..opts
                            };
                            squared_tate_hec(&curve, &jd, &ke, 5, &alt)?.value
                        }
                        Err(err) => return Err(err),
                    };
                    let want = f.pow(&base, (j * k) as u128);
                    if got != want {
                        failures += 1;
                    }
                    run += 1;
                }
            }
        }
        "roots-of-unity" => {
            let tc = find_tate_curve(5, 0)
                .ok_or_else(|| Error::InvalidInput("no tate curve found".into()))?;
            let f = tc.curve.field();
            let pts = testkit::enumerate_ec_points(&tc.curve);
            let curve = golden::demo_curve();
            let (d, _) = golden::demo_divisors(&curve);
            let mut done = 0;
            while done < samples {
                if done % 2 == 0 {
                    let q = &pts[rng.random_range(0..pts.len())];
                    if q.is_infinity() {
                        continue;
                    }
                    let opts = EcPairingOpts {
                        seed: rng.random(),
                        ..Default::default()
                    };
                    match squared_tate(&tc.curve, &tc.base, q, 5, &opts) {
                        Ok(r) => {
                            if f.pow(&r.value, 5) != f.one() {
                                failures += 1;
                            }
                        }
                        Err(Error::MultipleOfBasePoint) => continue,
                        Err(e) => return Err(e),
                    }
                } else {
                    let e = curve.random_divisor(&mut rng);
                    let opts = HecPairingOpts::default();
                    match squared_tate_hec(&curve, &d, &e, 5, &opts) {
                        Ok(r) => {
                            let cf = curve.field();
                            if cf.pow(&r.value, 5) != cf.one() {
                                failures += 1;
                            }
                        }
                        Err(Error::DivisorCollision(_)) => continue,
                        Err(e) => return Err(e),
                    }
                }
                run += 1;
                done += 1;
            }
        }
        "chain-independence" => {
            let weil_tc = find_full_torsion_curve(5, 2500)
                .ok_or_else(|| Error::InvalidInput("no torsion curve found".into()))?;
            let tate_tc = find_tate_curve(13, 0)
                .ok_or_else(|| Error::InvalidInput("no tate curve found".into()))?;
            let pts = testkit::enumerate_ec_points(&tate_tc.curve);
            while run < samples {
                let s: u64 = rng.random();
                let naf = EcPairingOpts {
                    policy: Policy::Naf,
                    seed: s,
                    ..Default::default()
                };
                let bin = EcPairingOpts {
                    policy: Policy::Binary,
                    seed: s,
                    ..Default::default()
                };
                if run.is_multiple_of(2) {
                    let p = &weil_tc.torsion[rng.random_range(0..weil_tc.torsion.len())];
                    let q = &weil_tc.torsion[rng.random_range(0..weil_tc.torsion.len())];
                    if p.is_infinity() || q.is_infinity() || p == q || *p == weil_tc.curve.neg(q) {
                        continue;
                    }
                    let a = squared_weil(&weil_tc.curve, p, q, 5, &naf)?;
                    let b = squared_weil(&weil_tc.curve, p, q, 5, &bin)?;
                    if a.value != b.value {
                        failures += 1;
                    }
                } else {
                    let q = &pts[rng.random_range(0..pts.len())];
                    if q.is_infinity() {
                        continue;
                    }
                    let (a, b) = match (
                        squared_tate(&tate_tc.curve, &tate_tc.base, q, 13, &naf),
                        squared_tate(&tate_tc.curve, &tate_tc.base, q, 13, &bin),
                    ) {
                        (Ok(a), Ok(b)) => (a, b),
                        _ => continue,
                    };
                    if a.value != b.value {
                        failures += 1;
                    }
                }
                run += 1;
            }
        }
        "cantor-invariants" => {
            let curve = golden::demo_curve();
            let f = curve.field();
            while run < samples {
                let x = curve.random_divisor(&mut rng);
                let y = curve.random_divisor(&mut rng);
                let out = curve.jac_compose(&x, &y);
                let ok = curve.check_divisor(&out.result).is_ok()
                    && out.comp_a.degree().unwrap_or(0) <= 4
                    && {
                        // comp_b^2 = f (mod comp_a)
                        let bb = poly::mul(f, &out.comp_b, &out.comp_b);
                        let diff = poly::sub(f, &curve.f, &bb);
                        poly::rem(f, &diff, &out.comp_a)
                            .map(|r| r.is_zero())
                            .unwrap_or(false)
                    };
                if !ok {
                    failures += 1;
                }
                run += 1;
            }
        }
        "nondegeneracy" => {
            // one witness per derived curve: some argument pairs to a value != 1
            let tc = find_tate_curve(5, 0)
                .ok_or_else(|| Error::InvalidInput("no tate curve found".into()))?;
            let f = tc.curve.field();
            let pts = testkit::enumerate_ec_points(&tc.curve);
            let opts = EcPairingOpts::default();
            let ec_witness = pts.iter().any(|q| {
                !q.is_infinity()
                    && matches!(
                        squared_tate(&tc.curve, &tc.base, q, 5, &opts),
                        Ok(r) if r.value != f.one()
                    )
            });
            run += 1;
            if !ec_witness {
                failures += 1;
            }
            let curve = golden::demo_curve();
            let (d, e) = golden::demo_divisors(&curve);
            let v = squared_tate_hec(&curve, &d, &e, 5, &HecPairingOpts::default())?;
            run += 1;
            if v.value == curve.field().one() {
                failures += 1;
            }
        }
        _ => return Err(Error::InvalidInput(format!("unknown property {name:?}"))),
    }
    Ok(PropertyReport {
        name: name.to_string(),
        samples: run,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_properties_pass_small() {
        for report in run_properties(None, 12, 99).unwrap() {
            assert!(report.pass(), "{report:?}");
        }
    }

    #[test]
    fn filter_and_determinism() {
        let a = run_properties(Some("cantor-invariants"), 20, 5).unwrap();
        let b = run_properties(Some("cantor-invariants"), 20, 5).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].samples, b[0].samples);
        assert!(run_properties(Some("bogus"), 5, 1).is_err());
    }
}
