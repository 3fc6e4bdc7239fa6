use std::path::PathBuf;
use std::process::{Command, Output};

use facloc::campaign::{parse_profile, CampaignReport, MechanismConfig};
use facloc::scenarios::ScenarioReport;
use facloc::Mechanism;

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn facloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_facloc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_prints_output_and_losses() {
    let cfg = config("strong_gsp_mechanism.toml");
    let o = facloc(&["eval", "--config", cfg.to_str().unwrap(), "--profile", "[[2,4],[2],[4]]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2\nlosses: [2, 0, 2]\n");

    let cfg = config("nonidentifying_mechanism.toml");
    let o = facloc(&["eval", "--config", cfg.to_str().unwrap(), "--profile", "[[0],[1,1,1,2]]"]);
    assert_eq!(stdout(&o).lines().next(), Some("2"));

    let cfg = config("constant3.toml");
    let o = facloc(&["eval", "--config", cfg.to_str().unwrap(), "--profile", r#"[["1/2"],[9]]"#]);
    assert_eq!(stdout(&o), "3\nlosses: [5/2, 6]\n");
}

#[test]
fn eval_rejects_bad_input() {
    let cfg = config("constant3.toml");
    let o = facloc(&["eval", "--config", cfg.to_str().unwrap(), "--profile", "[[1],"]);
    assert_eq!(o.status.code(), Some(2));
    let o = facloc(&["eval", "--config", config("standard_suite.toml").to_str().unwrap(), "--profile", "[[1]]"]);
    assert_eq!(o.status.code(), Some(2));
    let o = facloc(&["eval", "--config", "/nonexistent.toml", "--profile", "[[1]]"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("standard.json");
    let o = facloc(&["verify", "--config", config("standard_suite.toml").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report: CampaignReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.verdicts.len(), 4);
    assert!(report.verdicts.iter().all(|v| v.pass && v.witness.is_none() && v.space_size > 0));

    let out = dir.path().join("relabeled.json");
    let o = facloc(&[
        "--threads",
        "1",
        "verify",
        "--config",
        config("relabeled_replication.toml").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let report: CampaignReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let w = report.verdicts[0].witness.clone().unwrap();
    w.replay(&report.mechanism).unwrap();

    let o = facloc(&["verify", "--config", config("missing_breakpoint.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("breakpoint not on grid"));
}

#[test]
fn reported_witnesses_feed_back_into_eval() {
    let o = facloc(&["verify", "--config", config("relabeled_replication.toml").to_str().unwrap()]);
    let report: CampaignReport = serde_json::from_str(&stdout(&o)).unwrap();
    let w = report.verdicts[0].witness.clone().unwrap();
    let mech_file = tempfile::NamedTempFile::new().unwrap();
    let mech = MechanismConfig { version: 1, mechanism: report.mechanism.clone() };
    std::fs::write(mech_file.path(), toml::to_string(&mech).unwrap()).unwrap();
    for (profile, expected) in [(w.true_profile.clone(), w.output_before), (w.deviated_profile(), w.output_after)] {
        let literal = serde_json::to_string(&profile).unwrap();
        let o = facloc(&["eval", "--config", mech_file.path().to_str().unwrap(), "--profile", &literal]);
        assert_eq!(stdout(&o).lines().next().unwrap(), expected.to_string());
        assert_eq!(report.mechanism.evaluate(&parse_profile(&literal).unwrap()).unwrap(), expected);
    }
}

#[test]
fn verify_csv() {
    let o = facloc(&["verify", "--config", config("relabeled_replication.toml").to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let row = rd.records().next().unwrap().unwrap();
    assert_eq!(&row[0], "sp");
    assert_eq!(&row[1], "false");
}

#[test]
fn scenarios() {
    let o = facloc(&["scenario", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let reports: Vec<ScenarioReport> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(reports.len(), 7);
    assert!(reports.iter().all(ScenarioReport::pass));

    let o = facloc(&["scenario", "thm1_nonidentifying"]);
    let reports: Vec<ScenarioReport> = serde_json::from_str(&stdout(&o)).unwrap();
    let w = &reports[0].witnesses[0];
    assert_eq!((w.losses_before[0].to_string(), w.losses_after[0].to_string()), ("3".into(), "1".into()));

    assert_eq!(facloc(&["scenario", "nosuch"]).status.code(), Some(2));
}

#[test]
fn list_mechanisms() {
    let o = facloc(&["list-mechanisms"]);
    assert_eq!(stdout(&o).lines().count(), 6);
    let o = facloc(&["list-mechanisms", "--agents", "3"]);
    assert!(stdout(&o).contains("representative_median(phantoms=[0,4], beta=1/2)"));
    assert_eq!(facloc(&["--seed-order", "random", "list-mechanisms"]).status.code(), Some(2));
}
