mod common;

use std::io::Write;
use std::process::Command;

use cogcap_cli::OutputRecord;
use common::{assert_valid, csv_rows, json, num, run, schema};
use serde_json::Value;

fn corpus() -> Vec<Vec<&'static str>> {
    vec![
        vec!["capacity"],
        vec![
            "capacity",
            "--p",
            "4",
            "--n",
            "2",
            "--rho-xs1",
            "0.5",
            "--rho-s2z",
            "0.5",
            "--label",
            "worked",
        ],
        vec!["capacity", "--rho-s2z", "1"],
        vec!["capacity", "--rho-xs1", "-1"],
        vec![
            "rate-curve",
            "--q1",
            "3",
            "--rho-xs1",
            "-0.4",
            "--steps",
            "7",
        ],
        vec![
            "sweep",
            "--parameter",
            "rho-s2z",
            "--from",
            "-1",
            "--to",
            "1",
            "--steps",
            "5",
        ],
        vec![
            "sweep",
            "--parameter",
            "rho-s2z",
            "--from",
            "0",
            "--to",
            "1",
            "--steps",
            "3",
            "--rho-xs1",
            "1",
        ],
        vec![
            "sweep",
            "--parameter",
            "snr",
            "--from",
            "0.5",
            "--to",
            "8",
            "--steps",
            "4",
            "--curves",
            "0,0.9,0.99",
        ],
        vec![
            "sweep",
            "--parameter",
            "rho-xs1",
            "--from",
            "-0.5",
            "--to",
            "0.5",
            "--steps",
            "3",
            "--curves",
            "0.3",
            "--curve-parameter",
            "snr",
        ],
        vec!["verify", "--samples", "20000", "--rho-s2z", "0.9"],
        vec!["verify", "--samples", "10"],
    ]
}

fn with_unit<'a>(args: &[&'a str], unit: &'a str) -> Vec<&'a str> {
    let mut v = args.to_vec();
    v.extend(["--unit", unit]);
    v
}

fn walk_numbers(v: &Value, out: &mut Vec<f64>) {
    match v {
        Value::Number(n) => out.push(n.as_f64().unwrap()),
        Value::Array(a) => a.iter().for_each(|x| walk_numbers(x, out)),
        Value::Object(o) => o.values().for_each(|x| walk_numbers(x, out)),
        Value::Null => panic!("null in output"),
        _ => {}
    }
}

#[test]
fn json_output_validates_against_schema() {
    let validator = schema("output.schema.json");
    for args in corpus() {
        for unit in ["bits", "nats"] {
            assert_valid(&validator, &json(&with_unit(&args, unit)));
        }
    }
}

#[test]
fn schema_rejects_malformed_records() {
    let validator = schema("output.schema.json");
    let good = json(&["capacity"]);
    let mut bad = good.clone();
    bad["results"]["capacity"] = Value::String("nan".into());
    assert!(!validator.is_valid(&bad));
    let mut bad = good.clone();
    bad["unit"] = Value::String("hartleys".into());
    assert!(!validator.is_valid(&bad));
    let mut bad = good;
    bad["command"] = Value::String("sweep".into());
    assert!(!validator.is_valid(&bad));
}

#[test]
fn json_round_trips_losslessly() {
    for args in corpus() {
        let text = run(&args).stdout;
        let record: OutputRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(record.to_json(), text, "{args:?}");
        let again: OutputRecord = serde_json::from_str(&record.to_json()).unwrap();
        assert_eq!(again, record);
    }
}

#[test]
fn every_number_is_finite() {
    for args in corpus() {
        let mut nums = Vec::new();
        walk_numbers(&json(&args), &mut nums);
        assert!(nums.iter().all(|x| x.is_finite()), "{args:?}");
        let csv = run(&with_unit(&args, "nats")
            .iter()
            .copied()
            .chain(["--format", "csv"])
            .collect::<Vec<_>>())
        .stdout;
        assert!(!csv.to_ascii_lowercase().contains("nan"), "{args:?}");
    }
}

fn information_fields(doc: &Value) -> Vec<Option<f64>> {
    let r = &doc["results"];
    let pick = |v: &Value| v.as_f64();
    match doc["command"].as_str().unwrap() {
        "capacity" => ["capacity", "achievability", "converse", "costa_reference"]
            .iter()
            .map(|k| pick(&r[*k]))
            .collect(),
        "rate-curve" => std::iter::once(pick(&r["capacity"]))
            .chain(
                r["rows"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|row| pick(&row["rate"])),
            )
            .collect(),
        "sweep" => r["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|row| pick(&row["capacity"]))
            .collect(),
        "verify" => r["checks"]
            .as_array()
            .unwrap()
            .iter()
            .flat_map(|c| {
                [
                    pick(&c["closed_form"]),
                    pick(&c["estimate"]),
                    pick(&c["std_error"]),
                ]
            })
            .collect(),
        other => panic!("unexpected command {other}"),
    }
}

#[test]
fn bits_are_nats_over_ln2() {
    for args in corpus() {
        let bits = json(&with_unit(&args, "bits"));
        let nats = json(&with_unit(&args, "nats"));
        assert_eq!(bits["unit"], "bits");
        assert_eq!(nats["unit"], "nats");
        let b = information_fields(&bits);
        let n = information_fields(&nats);
        assert_eq!(b.len(), n.len());
        for (b, n) in b.iter().zip(&n) {
            match (b, n) {
                (Some(b), Some(n)) => {
                    assert!((b - n / std::f64::consts::LN_2).abs() <= 1e-12 * b.abs().max(1.0))
                }
                (None, None) => {}
                _ => panic!("token mismatch in {args:?}"),
            }
        }
        if bits["command"] == "sweep" {
            let tb: Vec<_> = bits["results"]["rows"]
                .as_array()
                .unwrap()
                .iter()
                .map(|r| r["capacity"].clone())
                .collect();
            let tn: Vec<_> = nats["results"]["rows"]
                .as_array()
                .unwrap()
                .iter()
                .map(|r| r["capacity"].clone())
                .collect();
            for (b, n) in tb.iter().zip(&tn) {
                if b.is_string() {
                    assert_eq!(b, n);
                }
            }
        }
    }
}

#[test]
fn csv_layout_is_stable() {
    let cases: [(&[&str], &str); 5] = [
        (
            &["capacity"],
            "capacity,achievability,converse,alpha_star,costa_reference,unit",
        ),
        (&["rate-curve"], "alpha,rate,unit"),
        (
            &["sweep", "--from", "0", "--to", "0.5"],
            "rho_s2z,capacity,unit",
        ),
        (
            &[
                "sweep",
                "--parameter",
                "snr",
                "--from",
                "1",
                "--to",
                "2",
                "--curves",
                "0",
            ],
            "snr,rho_s2z,capacity,unit",
        ),
        (
            &["verify", "--samples", "10"],
            "name,closed_form,estimate,std_error,z_score,pass,unit",
        ),
    ];
    for (args, header) in cases {
        let mut a = args.to_vec();
        a.extend(["--format", "csv"]);
        let out = run(&a).stdout;
        assert!(!out.contains('\r'));
        assert!(out.ends_with('\n'));
        assert_eq!(out.lines().next().unwrap(), header);
        let (_, rows) = csv_rows(&out);
        assert!(rows.iter().all(|r| r.last().unwrap() == "bits"));
    }
}

#[test]
fn config_file_is_read_and_flags_win() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, r#"{{"p": 4, "q1": 1, "q2": 1, "n": 2, "rho_xs1": 0.5, "rho_s2z": 0.5, "unit": "nats", "label": "from-file"}}"#)
        .unwrap();
    let path = file.path().to_str().unwrap();
    let doc = json(&["capacity", "--config", path]);
    assert_eq!(doc["label"], "from-file");
    assert_eq!(doc["unit"], "nats");
    assert!((num(&doc["results"]["capacity"]) - 0.5 * 3f64.ln()).abs() < 1e-12);

    let doc = json(&[
        "capacity",
        "--config",
        path,
        "--rho-xs1",
        "0",
        "--rho-s2z",
        "0",
        "--unit",
        "bits",
    ]);
    assert_eq!(doc["unit"], "bits");
    assert_eq!(num(&doc["params"]["rho_xs1"]), 0.0);
    assert_eq!(num(&doc["params"]["p"]), 4.0);
    assert!((num(&doc["results"]["capacity"]) - 0.5 * 3f64.log2()).abs() < 1e-12);
}

#[test]
fn config_schema_matches_parser() {
    let validator = schema("config.schema.json");
    let good = [
        r#"{}"#,
        r#"{"p": 10, "n": 1, "unit": "bits"}"#,
        r#"{"rho_xs1": -1, "rho_s2z": 1, "label": "edge"}"#,
    ];
    for text in good {
        assert_valid(&validator, &serde_json::from_str(text).unwrap());
        assert!(cogcap_cli::ChannelConfig::from_json(text).is_ok());
    }
    for text in [
        r#"{"p": 1, "sigma": 2}"#,
        r#"{"unit": "hartleys"}"#,
        r#"{"p": "four"}"#,
    ] {
        assert!(
            !validator.is_valid(&serde_json::from_str(text).unwrap()),
            "{text}"
        );
        assert!(
            cogcap_cli::ChannelConfig::from_json(text).is_err(),
            "{text}"
        );
    }
}

#[test]
fn malformed_config_exits_2() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "{{\"p\": 1, \"pp\": 2}}").unwrap();
    let inv = run(&["capacity", "--config", file.path().to_str().unwrap()]);
    assert_eq!(inv.exit_code, 2);
    assert_eq!(
        run(&["capacity", "--config", "/definitely/not/here.json"]).exit_code,
        2
    );
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_cogcap");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();

    let out = status(&["capacity", "--p", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["command"], "capacity");

    let out = status(&["capacity", "--p", "-3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(out.stdout.is_empty());

    assert_eq!(
        status(&["capacity", "--rho-xs1", "1", "--rho-s2z", "-1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        status(&["verify", "--samples", "10"]).status.code(),
        Some(1)
    );
    assert_eq!(status(&["verify", "--rho-s2z", "1"]).status.code(), Some(2));
    assert_eq!(status(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(status(&["--help"]).status.code(), Some(0));
}
