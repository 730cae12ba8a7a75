use std::process::Command as Proc;

use clap::Parser;
use weightraise::config::Cli;
use weightraise::{execute, CliError, Command, Format, Report, RunConfig, Subgroup};

fn bin() -> Proc {
    let mut c = Proc::new(env!("CARGO_BIN_EXE_weightraise"));
    c.env_remove("WEIGHTRAISE_CACHE_DIR");
    c
}

fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
    let mut v = vec!["weightraise"];
    v.extend_from_slice(args);
    RunConfig::from_cli(Cli::try_parse_from(v).map_err(|e| CliError::Usage(e.to_string()))?)
}

fn stripped(r: &Report) -> String {
    let mut r = r.clone();
    r.timing = Default::default();
    r.to_json().unwrap()
}

#[test]
fn config_validation() {
    let c = parse(&["verify", "--level", "11", "--p", "5"]).unwrap();
    assert_eq!((c.command, c.level, c.p), (Command::Verify, Some(11), 5));
    assert_eq!(c.subgroup, Some(Subgroup::Gamma1));
    let e = parse(&["verify", "--level", "10", "--p", "5"]).unwrap_err();
    assert!(matches!(&e, CliError::Hypothesis(s) if s.contains("divide")), "{e}");
    assert!(matches!(parse(&["verify", "--level", "11", "--p", "3"]), Err(CliError::Hypothesis(_))));
    assert!(matches!(parse(&["verify", "--level", "11", "--p", "9"]), Err(CliError::Hypothesis(_))));
    assert!(matches!(parse(&["rep", "--q", "27", "--p", "5"]), Err(CliError::Hypothesis(_))));
    assert!(matches!(parse(&["rep", "--q", "125", "--p", "5"]), Err(CliError::Usage(_))));
    assert!(matches!(parse(&["classical", "--p", "7", "--format", "csv"]), Err(CliError::Usage(_))));
    assert!(parse(&["eig", "--level", "13", "--p", "5", "--subgroup", "gammaH:3"]).is_ok());
    assert!(parse(&["eig", "--level", "12", "--p", "5", "--subgroup", "gammaH:2"]).is_err());
    assert!(parse(&["eig", "--level", "11", "--p", "5", "--weight", "1"]).is_err());
    assert!(parse(&["levelraise", "--level", "11", "--p", "5"]).is_err());
    // p | N is allowed when only reading off eigensystems
    assert!(parse(&["eig", "--level", "10", "--p", "5"]).is_ok());
}

#[test]
fn exit_codes() {
    let out = bin().args(["verify", "--level", "10", "--p", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("divides"));
    let out = bin().args(["verify", "--level", "11", "--p", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(r.checks.len(), 5);
    assert!(r.pass);
    // literal Gamma_0(11), p = 5: Lemma 1 and 2 fail, report still written
    let out = bin().args(["verify", "--level", "11", "--p", "5", "--subgroup", "gamma0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let r = Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(!r.pass);
    assert!(!r.check("lemma1_dual_rank").unwrap().pass);
    assert!(r.check("corollary1_occurrence").unwrap().pass);
    let out = bin().args(["verify", "--level", "11", "--p", "5", "--output", "/nonexistent/dir/r.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(bin().args(["frobnicate"]).output().unwrap().status.code(), Some(2));
}

#[test]
fn section_suites() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rep.json");
    let st = bin().args(["rep", "--q", "25", "--p", "5", "--output"]).arg(&path).status().unwrap();
    assert_eq!(st.code(), Some(0));
    let r = Report::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.check("twisted_tensor_irreducible").unwrap().witness("dim"), Some(25));
    assert!(r.check("ss_equal_induced").unwrap().pass);
    assert!(r.check("induced_semisimple").unwrap().pass);
    let r = execute(&parse(&["classical", "--p", "11"]).unwrap()).unwrap();
    assert!(r.pass, "{:?}", r.checks);
    let r = execute(&parse(&["levelraise", "--level", "1", "--weight", "12", "--p", "7"]).unwrap()).unwrap();
    assert!(r.pass);
    assert!(r.notes.iter().any(|n| n.contains("mod-p shadow")));
    assert_eq!(r.eigensystems[0].occurs, Some(true));
}

#[test]
fn report_round_trip_and_determinism() {
    for args in [
        &["verify", "--level", "11", "--p", "5"][..],
        &["eig", "--level", "23", "--p", "7", "--weight", "2"],
        &["rep", "--q", "7", "--p", "7"],
        &["classical", "--p", "5", "--precision", "40"],
    ] {
        let c = parse(args).unwrap();
        let a = execute(&c).unwrap();
        let text = a.to_json().unwrap();
        assert_eq!(Report::from_json(&text).unwrap(), a);
        let b = execute(&c).unwrap();
        assert_eq!(stripped(&a), stripped(&b), "{args:?}");
    }
}

#[test]
fn eigensystem_tables() {
    let c = parse(&["eig", "--level", "23", "--p", "7", "--format", "csv"]).unwrap();
    assert_eq!(c.format, Format::Csv);
    let r = execute(&c).unwrap();
    // a_2 of 23a generates F_49 over F_7
    assert_eq!(r.eigensystems.len(), 2);
    for t in &r.eigensystems {
        assert_eq!(t.field.degree, 2);
        assert_eq!(t.field.modulus.len(), 3);
        assert!(t.rows.iter().all(|row| row.value.len() == 2 && row.degree == 2));
    }
    let csv = weightraise::run::render(&c, &r).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("system,source,orbit,multiplicity,occurs,prime,value,degree"));
    let n = r.eigensystems.iter().map(|t| t.rows.len()).sum::<usize>();
    assert_eq!(lines.count(), n);
    let r11 = execute(&parse(&["eig", "--level", "11", "--p", "5", "--bound", "13"]).unwrap()).unwrap();
    let a: Vec<(u64, Vec<u32>)> = r11.eigensystems[0].rows.iter().map(|x| (x.prime, x.value.clone())).collect();
    assert_eq!(&a[..2], &[(2, vec![3]), (3, vec![4])]);
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        bin()
            .env("WEIGHTRAISE_CACHE_DIR", dir.path())
            .args(["eig", "--level", "11", "--p", "5", "--weight", "4"])
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(first.status.code(), Some(0));
    let files = std::fs::read_dir(dir.path()).unwrap().count();
    assert!(files > 0);
    let second = run();
    let a = Report::from_json(&String::from_utf8(first.stdout).unwrap()).unwrap();
    let b = Report::from_json(&String::from_utf8(second.stdout).unwrap()).unwrap();
    assert_eq!(a.timing.cache_hits, 0);
    assert_eq!(b.timing.cache_misses, 0);
    assert!(b.timing.cache_hits > 0);
    assert_eq!(stripped(&a), stripped(&b));
    // flag wins over the environment
    let other = tempfile::tempdir().unwrap();
    let out = bin()
        .env("WEIGHTRAISE_CACHE_DIR", dir.path())
        .args(["eig", "--level", "11", "--p", "5", "--cache-dir"])
        .arg(other.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_dir(other.path()).unwrap().count() > 0);
}
