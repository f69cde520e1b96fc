#![allow(dead_code)]

use cogcap_cli::{run_args, Invocation};
use serde_json::Value;

pub fn run(args: &[&str]) -> Invocation {
    run_args(std::iter::once("cogcap").chain(args.iter().copied()))
}

pub fn json(args: &[&str]) -> Value {
    let inv = run(args);
    assert!(inv.exit_code <= 1, "{args:?} failed: {}", inv.stderr);
    serde_json::from_str(&inv.stdout).expect("stdout is JSON")
}

pub fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

pub fn num(v: &Value) -> f64 {
    v.as_f64()
        .unwrap_or_else(|| panic!("expected a number, got {v}"))
}

pub fn schema(name: &str) -> jsonschema::Validator {
    let path = format!("{}/schemas/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

pub fn assert_valid(validator: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations {errors:?} in {doc}");
}
