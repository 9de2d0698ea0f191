use std::process::Command;

use kgalilei::cli::{self, parse_reports, render, replay_nogo_report, Format, Group, NogoConfig, SuiteConfig, CSV_COLUMNS};
use kgalilei::report::{CheckReport, Status};
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kgalilei"))
}

fn sample_reports() -> Vec<CheckReport> {
    vec![
        CheckReport::new("x.pass", Status::Pass, "0").param("N", 2).param("D", 4),
        CheckReport::new("x.info", Status::ReportOnly, "1.5e0").artifact("rows", vec![(1.0, 2.0)]),
    ]
}

#[test]
fn empty_report_list() {
    assert_eq!(render(&[], Format::Json).unwrap(), "[]\n");
    assert_eq!(render(&[], Format::Csv).unwrap(), format!("{}\n", CSV_COLUMNS.join(",")));
    assert_eq!(cli::exit_code(&[]), 0);
}

#[test]
fn json_round_trip_is_byte_stable() {
    let a = render(&sample_reports(), Format::Json).unwrap();
    let back = parse_reports(&a).unwrap();
    assert_eq!(back, sample_reports());
    assert_eq!(render(&back, Format::Json).unwrap(), a);
}

#[test]
fn csv_layout() {
    let csv = render(&sample_reports(), Format::Csv).unwrap();
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), CSV_COLUMNS);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][0], "x.pass");
    assert_eq!(&rows[0][3], "D=4;N=2");
    assert_eq!(&rows[0][4], "");
    assert_eq!(&rows[1][1], "report-only");
    let art: serde_json::Value = serde_json::from_str(&rows[1][4]).unwrap();
    assert_eq!(art["rows"][0][1], 2.0);
}

#[test]
fn exit_code_ignores_report_only() {
    let mut r = sample_reports();
    assert_eq!(cli::exit_code(&r), 0);
    r.push(CheckReport::new("x.fail", Status::Fail, "1"));
    assert_eq!(cli::exit_code(&r), 1);
}

#[test]
fn config_toml_round_trip() {
    let d = SuiteConfig::default();
    let text = d.to_toml().unwrap();
    assert_eq!(SuiteConfig::from_toml(&text).unwrap(), d);
    let partial = SuiteConfig::from_toml("seed = 3\n[nogo]\nmax_degree = 2\n").unwrap();
    assert_eq!(partial.seed, 3);
    assert_eq!(partial.nogo.max_degree, 2);
    assert_eq!(partial.hopf, d.hopf);
    assert!(SuiteConfig::from_toml("[nogo]\nmax_degre = 2\n").is_err());
    assert!(SuiteConfig::from_toml("groups = [\"nope\"]\n").is_err());
}

#[test]
fn nogo_witness_survives_serialization() {
    let reports = cli::run_nogo(&NogoConfig { max_degree: 2, quantum: false }).unwrap();
    let text = render(&reports, Format::Json).unwrap();
    let back = parse_reports(&text).unwrap();
    let cob: Vec<_> = back.iter().filter(|r| r.check_id == "nogo.coboundary").collect();
    assert_eq!(cob.len(), 2);
    for r in &cob {
        assert!(r.passed());
        assert!(replay_nogo_report(r).unwrap(), "D={}", r.params["D"]);
    }

    let mut forged = cob[0].clone();
    let entries = forged.artifacts.as_mut().unwrap()["witness"]["entries"].as_object_mut().unwrap();
    for v in entries.values_mut() {
        *v = serde_json::json!(["0", "0"]);
    }
    assert!(!replay_nogo_report(&forged).unwrap());

    let mut no_witness = cob[0].clone();
    no_witness.artifacts = None;
    assert!(replay_nogo_report(&no_witness).is_err());
}

#[test]
fn group_runs_are_deterministic() {
    let mut cfg = SuiteConfig::default();
    cfg.appendix.samples = 4;
    let a = cli::run_group(Group::Appendix, &cfg).unwrap();
    let b = cli::run_group(Group::Appendix, &cfg).unwrap();
    assert_eq!(render(&a, Format::Json).unwrap(), render(&b, Format::Json).unwrap());
    cfg.seed += 1;
    let c = cli::run_group(Group::Appendix, &cfg).unwrap();
    assert_ne!(render(&a, Format::Json).unwrap(), render(&c, Format::Json).unwrap());
}

#[test]
fn binary_eval_and_exit_codes() {
    let out = bin().args(["eval", "[tau, a1] - i*L*a1", "--order", "2", "--degree", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = parse_reports(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].residual, "0");

    let out = bin().args(["eval", "a1 +"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: parse error"));

    let out = bin().args(["contract", "multiplier", "--k", "1", "--c-grid", "1e2:1e3:2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mass schedule"));

    let out = bin().args(["nogo", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn binary_writes_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let out = bin()
        .args(["--format", "csv", "--out"])
        .arg(&path)
        .args(["contract", "multiplier", "--M", "1", "--k", "-1", "--v", "0.1,0,0", "--c-grid", "1e2:1e6:9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("check_id,status,residual,params,artifacts\n"));
    assert!(text.contains("contract.multiplier,pass,"));
}

#[test]
fn binary_default_config_loads() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin().arg("default-config").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let path = dir.path().join("suite.toml");
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(SuiteConfig::from_toml(&text).unwrap(), SuiteConfig::default());
    std::fs::write(&path, text.replace("samples = 20", "samples = 2")).unwrap();
    let out = bin().arg("--config").arg(&path).args(["contract", "appendix"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = parse_reports(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(r.iter().all(|r| r.check_id.starts_with("contract.appendix")));
}

proptest! {
    #[test]
    fn arbitrary_reports_round_trip(
        id in "[a-z]{1,8}(\\.[a-z-]{1,8}){0,2}",
        residual in "[ -~]{0,20}",
        params in proptest::collection::btree_map("[A-Za-z]{1,3}", "[ -~]{0,10}", 0..4),
        status in prop_oneof![Just(Status::Pass), Just(Status::Fail), Just(Status::ReportOnly)],
        x in proptest::option::of(-1e300f64..1e300),
    ) {
        let mut r = CheckReport::new(id, status, residual);
        r.params = params;
        if let Some(x) = x {
            r = r.artifact("x", x);
        }
        let text = render(std::slice::from_ref(&r), Format::Json).unwrap();
        let back = parse_reports(&text).unwrap();
        prop_assert_eq!(&back[0], &r);
        prop_assert_eq!(render(&back, Format::Json).unwrap(), text);
    }
}
