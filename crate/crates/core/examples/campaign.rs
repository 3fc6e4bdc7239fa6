//! Build a campaign from TOML text, run it and emit both report formats.

use facloc::campaign::{run_campaign, CampaignConfig};

const CONFIG: &str = r#"
version = 1
checks = ["sp", "anonymous", "efficient"]

[mechanism]
kind = "representative_median"
phantoms = ["-inf", "-inf"]
beta = 0

[search]
agents = 3
grid = [0, 1, 2, 3]
max_true_size = 2

[search.actions]
actions = ["manipulation", "replication", "hiding"]
max_report_size = 3
"#;

fn main() -> facloc::Result<()> {
    let cfg = CampaignConfig::parse(CONFIG)?;
    let report = run_campaign(&cfg)?;
    println!("{}", report.to_json());
    print!("{}", report.to_csv()?);
    println!("exit code {}", report.exit_code());
    Ok(())
}
