use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use facloc::campaign::{parse_profile, run_campaign, CampaignConfig, Format, MechanismConfig};
use facloc::mechanisms::{catalog, Mechanism, KINDS};
use facloc::scenarios::{run_all, run_scenario};
use facloc::Error;

/// Facility location mechanisms for agents with several locations.
#[derive(Parser)]
#[command(name = "facloc", version)]
struct Cli {
    /// Cap on worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Enumeration order for profiles and deviations. Only `lex` exists.
    #[arg(long, global = true, value_enum, default_value_t = SeedOrder::Lex)]
    seed_order: SeedOrder,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeedOrder {
    Lex,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a mechanism on one profile and print the output and losses.
    Eval {
        #[arg(long)]
        config: PathBuf,
        /// JSON list of reports, e.g. `[[2,4],[2],[4]]`.
        #[arg(long)]
        profile: String,
    },
    /// Run a verification campaign.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Run a named scenario, or `all`.
    Scenario {
        name: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// List mechanism kinds, or the catalog for a given number of agents.
    ListMechanisms {
        #[arg(long)]
        agents: Option<usize>,
    },
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Eval { config, profile } => {
            let cfg = MechanismConfig::load(&config)?;
            let profile = parse_profile(&profile)?;
            let out = cfg.mechanism.evaluate(&profile)?;
            let losses: Vec<String> = profile.losses_at(&out).iter().map(|l| l.to_string()).collect();
            println!("{out}");
            println!("losses: [{}]", losses.join(", "));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { config, out, format } => {
            let cfg = CampaignConfig::load(&config)?;
            let report = run_campaign(&cfg)?;
            let format = format.unwrap_or(cfg.format);
            write_out(out.as_ref().or(cfg.output.as_ref()), &report.render(format)?)?;
            for v in &report.verdicts {
                eprintln!("{:<16} {} ({} triples)", v.check.name(), if v.pass { "pass" } else { "FAIL" }, v.space_size);
            }
            Ok(ExitCode::from(report.exit_code() as u8))
        }
        Command::Scenario { name, format } => {
            let reports = if name == "all" { run_all()? } else { vec![run_scenario(&name)?] };
            let ok = reports.iter().all(|r| r.pass());
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&reports).expect("serializable")),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(std::io::stdout());
                    let io = |e: csv::Error| Error::Config(e.to_string());
                    w.write_record(["scenario", "claim", "expected", "observed", "pass"]).map_err(io)?;
                    for r in &reports {
                        for c in &r.claims {
                            let pass = c.pass.to_string();
                            w.write_record([r.name.as_str(), &c.description, &c.expected, &c.observed, &pass]).map_err(io)?;
                        }
                    }
                    w.flush().map_err(|e| Error::Config(e.to_string()))?;
                }
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::ListMechanisms { agents } => {
            match agents {
                Some(n) => catalog(n).iter().for_each(|m| println!("{}", m.label())),
                None => KINDS.iter().for_each(|k| println!("{k}")),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let SeedOrder::Lex = cli.seed_order;
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            return fail(Error::Config(e.to_string()));
        }
    }
    run(cli).unwrap_or_else(fail)
}
