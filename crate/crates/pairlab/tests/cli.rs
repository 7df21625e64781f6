//! End-to-end tests of the command-line surface.

use std::path::PathBuf;
use std::process::{Command, Output};

fn pairlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pairlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_temp_config(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("pairlab-test-{}-{name}", std::process::id()));
    std::fs::write(&path, body).expect("temp config written");
    path
}

fn demo_config() -> PathBuf {
    write_temp_config("g2.cfg", "p=31\nf=1,11,4,2,13,1\n")
}

#[test]
fn worked_example_pairing_json() {
    let cfg = demo_config();
    let out = pairlab(&[
        "pair",
        "hec",
        "--config",
        cfg.to_str().unwrap(),
        "--m",
        "5",
        "--alg",
        "tate2",
        "--D",
        "15,23,1;28,13",
        "--E",
        "2,4,1;20,29",
        "--json",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(v["schema"], 1);
    assert_eq!(v["alg"], "tate2");
    assert_eq!(v["value"], serde_json::json!([4]));
    assert_eq!(v["degenerate"], false);
    assert!(v["ops"]["mul"].as_u64().unwrap() > 0);
    assert!(v["steps"]["double"].as_u64().unwrap() >= 2);
    assert!(v["case_counts"]["case_i"].as_u64().is_some());
}

#[test]
fn multiple_of_base_point_exit_code() {
    // derive a Tate curve, then ask for the pairing with Q = 3P
    let tc = pairlab::testkit::find_tate_curve(5, 0).expect("tate curve");
    let f = tc.curve.field();
    let cfg_body = format!(
        "p={}\na4={}\na6={}\n",
        f.p(),
        tc.curve.a4.coeffs[0],
        tc.curve.a6.coeffs[0]
    );
    let cfg = write_temp_config("ec.cfg", &cfg_body);
    let p_str = tc.curve.format_point(&tc.base);
    let q = tc.curve.scalar_mul(3, &tc.base);
    let q_str = tc.curve.format_point(&q);
    let out = pairlab(&[
        "pair",
        "ec",
        "--config",
        cfg.to_str().unwrap(),
        "--m",
        "5",
        "--alg",
        "tate2",
        "--P",
        &p_str,
        "--Q",
        &q_str,
    ]);
    assert_eq!(out.status.code(), Some(4), "MultipleOfBasePoint exit code");
}

#[test]
fn ec_pairing_roundtrip_and_normalized_flag() {
    let tc = pairlab::testkit::find_tate_curve(5, 0).expect("tate curve");
    let f = tc.curve.field();
    let cfg = write_temp_config(
        "ec2.cfg",
        &format!(
            "p={}\na4={}\na6={}\n",
            f.p(),
            tc.curve.a4.coeffs[0],
            tc.curve.a6.coeffs[0]
        ),
    );
    let pts = pairlab::testkit::enumerate_ec_points(&tc.curve);
    let q = pts
        .iter()
        .find(|q| {
            !q.is_infinity()
                && pairlab::ec_pairings::squared_tate(
                    &tc.curve,
                    &tc.base,
                    q,
                    5,
                    &Default::default(),
                )
                .is_ok()
        })
        .expect("usable Q");
    let out = pairlab(&[
        "pair",
        "ec",
        "--config",
        cfg.to_str().unwrap(),
        "--m",
        "5",
        "--alg",
        "tate2",
        "--P",
        &tc.curve.format_point(&tc.base),
        "--Q",
        &tc.curve.format_point(q),
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["m"], 5);
    assert!(v["value"].as_array().unwrap().len() == 1);
}

#[test]
fn chain_listing_format() {
    let out = pairlab(&["chain", "--m", "5", "--policy", "binary"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text, "1: 2 = 1 + 1\n2: 4 = 2 + 2\n3: 5 = 4 + 1\n");
    let out = pairlab(&["chain", "--m", "255", "--policy", "naf"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("256 - 1") || text.contains("- 1"));
}

#[test]
fn example_genus2_passes() {
    let out = pairlab(&["example-genus2"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
    assert!(text.contains("v5(D,E)"));
}

#[test]
fn verify_subcommand_filters() {
    let out = pairlab(&[
        "verify",
        "--property",
        "cantor-invariants",
        "--samples",
        "20",
        "--seed",
        "3",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS cantor-invariants"));
    let out = pairlab(&["verify", "--property", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_json_schema() {
    let out = pairlab(&["bench", "--family", "ec-tate", "--trials", "1", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["baseline"]["add"]["mul_mean"], 10.0);
    assert_eq!(v["squared"]["add"]["mul_mean"], 7.0);
    assert_eq!(v["div_weight"], 5.0);
}

#[test]
fn config_errors_exit_2() {
    let cfg = write_temp_config("bad.cfg", "p=31\nwat=1\n");
    let out = pairlab(&[
        "pair",
        "hec",
        "--config",
        cfg.to_str().unwrap(),
        "--m",
        "5",
        "--alg",
        "tate2",
        "--D",
        "15,23,1;28,13",
        "--E",
        "2,4,1;20,29",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown key"));
}

#[test]
fn collision_and_torsion_exit_codes() {
    let cfg = demo_config();
    // D paired with itself: shared support, exit 3
    let out = pairlab(&[
        "pair",
        "hec",
        "--config",
        cfg.to_str().unwrap(),
        "--m",
        "5",
        "--alg",
        "tate2",
        "--D",
        "15,23,1;28,13",
        "--E",
        "15,23,1;28,13",
    ]);
    assert_eq!(out.status.code(), Some(3));
    // E is not 5-torsion: exit 5
    let out = pairlab(&[
        "pair",
        "hec",
        "--config",
        cfg.to_str().unwrap(),
        "--m",
        "5",
        "--alg",
        "tate2",
        "--D",
        "2,4,1;20,29",
        "--E",
        "15,23,1;28,13",
    ]);
    assert_eq!(out.status.code(), Some(5));
}
