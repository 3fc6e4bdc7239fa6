//! Config-driven verification campaigns and their reports.
//!
//! A campaign file is TOML:
//!
//! ```toml
//! version = 1
//! checks = ["sp", "group_sp", "anonymous", "efficient"]
//! format = "json"
//!
//! [mechanism]
//! kind = "representative_median"
//! phantoms = ["0", "10"]
//! beta = "1"
//!
//! [search]
//! agents = 3
//! grid = [0, 1, 2, 3, 4, 10]
//! max_true_size = 2
//! max_coalition = 3
//!
//! [search.actions]
//! actions = ["manipulation", "replication", "hiding"]
//! max_report_size = 3
//! ```
//!
//! Rationals may be written as integers or as `"p/q"` strings; infinities as
//! `"inf"` and `"-inf"`. Unknown keys are rejected.

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mechanisms::{Mechanism, MechanismSpec};
use crate::model::Profile;
use crate::verify::{self, Property, SearchConfig, Verdict};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub version: u32,
    pub mechanism: MechanismSpec,
    pub search: SearchConfig,
    pub checks: Vec<Property>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

/// Just a mechanism, for `eval`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MechanismConfig {
    pub version: u32,
    pub mechanism: MechanismSpec,
}

fn check_version(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(Error::Config(format!("unsupported config version {v}, expected {SCHEMA_VERSION}")));
    }
    Ok(())
}

impl CampaignConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg: CampaignConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        check_version(cfg.version)?;
        if cfg.checks.is_empty() {
            return Err(Error::Config("no checks requested".into()));
        }
        cfg.mechanism = cfg.mechanism.validated(Some(cfg.search.agents))?;
        cfg.search.validate_for(&cfg.mechanism)?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        CampaignConfig::parse(&text)
    }
}

impl MechanismConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg: MechanismConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        check_version(cfg.version)?;
        cfg.mechanism = cfg.mechanism.validated(None)?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        MechanismConfig::parse(&text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub version: u32,
    pub mechanism: MechanismSpec,
    pub search: SearchConfig,
    pub verdicts: Vec<Verdict>,
    pub elapsed_ms: u64,
}

impl CampaignReport {
    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    /// One row per verdict; structured witness fields are embedded as compact
    /// JSON so every rational keeps its exact `p/q` form.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Config(e.to_string());
        w.write_record([
            "check",
            "pass",
            "space_size",
            "true_profile",
            "coalition",
            "deviated_reports",
            "losses_before",
            "losses_after",
            "output_before",
            "output_after",
            "permutation",
        ])
        .map_err(io)?;
        let json = |v: &dyn erased::Json| v.json();
        for v in &self.verdicts {
            let mut row = vec![v.check.name().to_string(), v.pass.to_string(), v.space_size.to_string()];
            match &v.witness {
                Some(wt) => row.extend([
                    json(&wt.true_profile),
                    json(&wt.coalition),
                    json(&wt.deviated_reports),
                    json(&wt.losses_before),
                    json(&wt.losses_after),
                    wt.output_before.to_string(),
                    wt.output_after.to_string(),
                    wt.permutation.as_ref().map(|p| json(p)).unwrap_or_default(),
                ]),
                None => row.extend(std::iter::repeat_n(String::new(), 8)),
            }
            w.write_record(&row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("utf-8"))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }
}

mod erased {
    pub trait Json {
        fn json(&self) -> String;
    }

    impl<T: serde::Serialize> Json for T {
        fn json(&self) -> String {
            serde_json::to_string(self).expect("serializable")
        }
    }
}

pub fn run_check(mech: &dyn Mechanism, cfg: &SearchConfig, check: Property) -> Result<Verdict> {
    match check {
        Property::Sp => verify::check_strategyproof(mech, cfg),
        Property::GroupSp => verify::check_group_sp(mech, cfg),
        Property::StrongGroupSp => verify::check_strong_group_sp(mech, cfg),
        Property::Anonymous => verify::check_anonymous(mech, cfg),
        Property::Efficient => verify::check_efficient(mech, cfg),
        Property::Constant => verify::check_constant(mech, cfg),
    }
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    let start = Instant::now();
    cfg.search.validate_for(&cfg.mechanism)?;
    let verdicts = cfg
        .checks
        .iter()
        .map(|&check| run_check(&cfg.mechanism, &cfg.search, check))
        .collect::<Result<Vec<_>>>()?;
    Ok(CampaignReport {
        version: SCHEMA_VERSION,
        mechanism: cfg.mechanism.clone(),
        search: cfg.search.clone(),
        verdicts,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Parses a profile literal such as `[[2,4],[2],[4]]` or `[["1/2"],["inf"]]`.
pub fn parse_profile(text: &str) -> Result<Profile> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("profile literal: {e}")))
}
