#![allow(dead_code)]

use std::path::PathBuf;

use jsonschema::{Registry, Validator};
use serde_json::Value;

pub const SCHEMAS: [&str; 11] = [
    "abduce", "check", "contrast", "error", "explain", "graph", "inconsistency", "models", "requests", "session",
    "state",
];

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn data_text(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap()
}

pub fn schema_uri(name: &str) -> String {
    format!("https://xplain.local/schemas/{name}.schema.json")
}

pub fn load_schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Validator for `name` (or a `#/$defs/...` fragment of it) with every
/// shipped schema registered, so cross-file references resolve offline.
pub fn validator(name: &str) -> Validator {
    let mut registry = Registry::new();
    for s in SCHEMAS {
        registry = registry.add(schema_uri(s), load_schema(s)).unwrap();
    }
    let registry = registry.prepare().unwrap();
    let (file, fragment) = name.split_once('#').unwrap_or((name, ""));
    let root = if fragment.is_empty() {
        serde_json::json!({ "$ref": schema_uri(file) })
    } else {
        serde_json::json!({ "$ref": format!("{}#{fragment}", schema_uri(file)) })
    };
    jsonschema::options().with_registry(&registry).build(&root).unwrap()
}

pub fn assert_valid(schema: &str, text: &str) {
    let v: Value = serde_json::from_str(text).unwrap_or_else(|e| panic!("{e}: {text}"));
    let validator = validator(schema);
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}\n{text}");
}

/// Run the CLI in process; returns (exit code, stdout, stderr).
pub fn cli(args: &[&str]) -> (i32, String, String) {
    cli_with_input(args, "")
}

pub fn cli_with_input(args: &[&str], input: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("xplain").chain(args.iter().copied());
    let code = xplain::cli::run(argv, input.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

pub fn path_str(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}
