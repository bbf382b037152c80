mod common;

use common::c;
use proptest::prelude::*;
use serde_json::{Map, Value};
use uniformize_core::dynamics::TargetPath;
use uniformize_core::io::{
    family_config_json, load_family_config, parse_family_config, parse_versioned, render, table_csv, FamilyConfig,
    Format, LatticeConfig, Output, Table, RATIONAL_EXAMPLE, TORUS_EXAMPLE,
};
use uniformize_core::nuttall::{classify_sheets, GridSpec, NuttallContext};
use uniformize_core::rational::RationalFamilySpec;

fn err_name(text: &str) -> &'static str {
    parse_family_config(text).unwrap_err().name()
}

#[test]
fn bundled_examples_round_trip() {
    for text in [RATIONAL_EXAMPLE, TORUS_EXAMPLE] {
        let cfg = parse_family_config(text).unwrap();
        let again = parse_family_config(&family_config_json(&cfg).unwrap()).unwrap();
        assert_eq!(cfg, again);
    }
}

#[test]
fn load_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    std::fs::write(&path, TORUS_EXAMPLE).unwrap();
    assert!(matches!(load_family_config(&path).unwrap(), FamilyConfig::Torus(_)));
    let missing = load_family_config(&dir.path().join("none.json")).unwrap_err();
    assert_eq!(missing.name(), "IoError");
}

#[test]
fn malformed_documents_are_classified() {
    assert_eq!(err_name("{ not json"), "ParseError");
    assert_eq!(err_name("[1, 2]"), "SchemaError");
    assert_eq!(err_name(r#"{"family": "torus"}"#), "SchemaError");
    assert_eq!(err_name(r#"{"v": 2, "family": "torus"}"#), "SchemaError");
    assert_eq!(err_name(r#"{"v": 1, "family": "sphere"}"#), "SchemaError");
    assert_eq!(err_name(r#"{"v": 1}"#), "SchemaError");
    let extra = RATIONAL_EXAMPLE.replacen("\"m\"", "\"bogus\": 1, \"m\"", 1);
    assert_eq!(err_name(&extra), "SchemaError");
    let unbalanced = RATIONAL_EXAMPLE.replacen("[3, 3]", "[3, 2]", 1);
    assert_eq!(err_name(&unbalanced), "ValidationError");
}

#[test]
fn lattice_config_parses() {
    let cfg: LatticeConfig = parse_versioned(r#"{"v": 1, "omega1": [1, 0], "omega2": [0, 1]}"#).unwrap();
    assert_eq!(cfg.omega2, c(0.0, 1.0));
    assert!(cfg.points.is_empty());
    let e = parse_versioned::<LatticeConfig>(r#"{"v": 1, "omega1": [1, 0]}"#).unwrap_err();
    assert_eq!(e.name(), "SchemaError");
}

#[test]
fn renders_are_deterministic() {
    let ctx = NuttallContext::real(0.5).unwrap();
    let f1 = classify_sheets(&ctx, &GridSpec::standard(60)).unwrap();
    let f2 = classify_sheets(&ctx, &GridSpec::standard(60)).unwrap();
    for fmt in [Format::Csv, Format::Json, Format::Svg] {
        assert_eq!(render(&Output::Field(&f1), fmt).unwrap(), render(&Output::Field(&f2), fmt).unwrap());
    }
    let mut m = Map::new();
    m.insert("z".into(), Value::from(1.0));
    m.insert("a".into(), Value::from(2.0));
    let s = render(&Output::Scalars { kind: "k", values: &m }, Format::Json).unwrap();
    assert_eq!(s, render(&Output::Scalars { kind: "k", values: &m }, Format::Json).unwrap());
    assert_eq!(render(&Output::Scalars { kind: "k", values: &m }, Format::Svg).unwrap_err().name(), "InvalidArgument");
    assert_eq!("png".parse::<Format>().unwrap_err().name(), "InvalidArgument");
}

fn complex() -> impl Strategy<Value = uniformize_core::C64> {
    (-1e3..1e3f64, -1e3..1e3f64).prop_map(|(a, b)| c(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_config_round_trips(a1 in complex(), b in complex(), s in complex(), d in complex()) {
        // m = [3, 3], n = [3]: the normalization 2a₁ + 2a₂ = 4b holds by construction
        let spec = RationalFamilySpec {
            m: vec![3, 3],
            n: vec![3],
            a0: vec![a1, 2.0 * b - a1],
            b0: vec![b],
            paths: vec![TargetPath::new(s, d), TargetPath::new(d, s)],
        };
        prop_assume!(spec.validate().is_ok());
        let cfg = FamilyConfig::Rational(spec);
        let back = parse_family_config(&family_config_json(&cfg).unwrap()).unwrap();
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn csv_numbers_parse_back(t in -1e6..1e6f64, re in -1e300..1e300f64, im in -1e-300..1e-300f64) {
        let table = Table { kind: "x".into(), index: "t".into(), columns: vec!["a".into()], rows: vec![(t, vec![c(re, im)])] };
        let text = table_csv(&table);
        let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
        for (got, want) in row.iter().zip([t, re, im]) {
            prop_assert!((got - want).abs() <= 1e-14 * want.abs());
        }
    }
}
