use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use credal::Document;
use credal_cli::commands::{self, Criterion, Failure, FamilyKind, Outcome, PoolArgs};

#[derive(Parser)]
#[command(
    name = "credal",
    version,
    about = "Credal sets, envelopes, decisions, pooling and bet books"
)]
struct Cli {
    /// Output rendering.
    #[arg(long, value_enum, global = true, default_value_t = Format::Table)]
    format: Format,
    /// Overrides numeric tolerances (example checks, independence tests).
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Seed for the randomized property suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Replay the built-in worked examples.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
    /// Lower and upper probabilities of events.
    Envelope {
        file: String,
        /// Whitespace-separated atom labels; repeat for several events.
        /// Defaults to every singleton.
        #[arg(long)]
        event: Vec<String>,
    },
    /// Belief function and Möbius masses of a mass file or a credal set's
    /// lower envelope.
    Belief { file: String },
    /// Condition the credal set on an event.
    Condition {
        file: String,
        #[arg(long)]
        given: String,
        /// Also bound p(target | given).
        #[arg(long)]
        target: Option<String>,
    },
    /// Linear opinion pool of the document's distributions.
    Pool(PoolOpts),
    /// Decision criteria over a utility matrix.
    Decide {
        file: String,
        #[arg(long, value_enum, default_value_t = CriterionArg::EAdmissible)]
        criterion: CriterionArg,
    },
    /// Bet book analysis.
    Bet {
        #[command(subcommand)]
        action: BetAction,
    },
    /// Run the randomized property suites.
    Properties,
}

#[derive(Subcommand)]
enum ExamplesAction {
    List,
    Run {
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        all: bool,
    },
}

#[derive(Args)]
struct PoolOpts {
    file: String,
    #[arg(long, num_args = 1..)]
    weights: Option<Vec<f64>>,
    /// Variables to keep when checking commutation with marginalization.
    #[arg(long, num_args = 1..)]
    marginal: Option<Vec<String>>,
    /// Check whether X ⫫ Z survives pooling.
    #[arg(long, num_args = 2, value_names = ["X", "Z"])]
    independence: Option<Vec<String>>,
    #[arg(long, requires = "independence")]
    given: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    EAdmissible,
    GroupMinimax,
    Pareto,
}

#[derive(Subcommand)]
enum BetAction {
    /// Payoff table, expectation, and the booked-in-expectation verdict.
    Eval {
        file: String,
        #[arg(long, value_enum, requires = "range")]
        family: Option<FamilyArg>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        range: Option<Vec<f64>>,
        /// Expectation under a named distribution of the document.
        #[arg(long)]
        under: Option<String>,
    },
    /// Reprice every ticket fairly under a named distribution.
    Fair {
        file: String,
        #[arg(long)]
        under: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// iid tosses of a coin, parametrized by the heads probability.
    Coin,
    /// Two independent tosses, parametrized by P(HH).
    Square,
}

fn load(path: &str) -> Result<Document, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("reading {path}: {e}")))?
    };
    Ok(Document::parse(&text)?)
}

fn labels(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}

fn run(cli: &Cli) -> Outcome {
    if let Some(t) = cli.tolerance {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Failure::Usage(format!(
                "tolerance must be a nonnegative number, got {t}"
            )));
        }
    }
    match &cli.command {
        Command::Examples { action } => match action {
            ExamplesAction::List => commands::examples_list(),
            ExamplesAction::Run { name, all } => {
                if name.is_none() && !all {
                    return Err(Failure::Usage("give an example name or --all".into()));
                }
                commands::examples_run(name.as_deref(), cli.tolerance, cli.seed)
            }
        },
        Command::Envelope { file, event } => {
            let events: Vec<Vec<String>> = event.iter().map(|e| labels(e)).collect();
            commands::envelope_cmd(&load(file)?, &events)
        }
        Command::Belief { file } => commands::belief_cmd(&load(file)?),
        Command::Condition { file, given, target } => {
            let t = target.as_deref().map(labels);
            commands::condition_cmd(&load(file)?, &labels(given), t.as_deref())
        }
        Command::Pool(o) => {
            let ind = o.independence.as_ref().map(|v| (v[0].as_str(), v[1].as_str()));
            commands::pool_cmd(
                &load(&o.file)?,
                PoolArgs {
                    weights: o.weights.clone(),
                    marginal: o.marginal.as_deref(),
                    independence: ind,
                    given: o.given.as_deref(),
                    tolerance: cli.tolerance.unwrap_or(1e-9),
                },
            )
        }
        Command::Decide { file, criterion } => {
            let c = match criterion {
                CriterionArg::EAdmissible => Criterion::EAdmissible,
                CriterionArg::GroupMinimax => Criterion::GroupMinimax,
                CriterionArg::Pareto => Criterion::Pareto,
            };
            commands::decide_cmd(&load(file)?, c)
        }
        Command::Bet { action } => match action {
            BetAction::Eval {
                file,
                family,
                range,
                under,
            } => {
                let fam = match (family, range) {
                    (Some(f), Some(r)) => {
                        let kind = match f {
                            FamilyArg::Coin => FamilyKind::Coin,
                            FamilyArg::Square => FamilyKind::Square,
                        };
                        Some((kind, r[0], r[1]))
                    }
                    (None, Some(_)) => return Err(Failure::Usage("--range needs --family".into())),
                    _ => None,
                };
                commands::bet_eval_cmd(&load(file)?, fam, under.as_deref())
            }
            BetAction::Fair { file, under } => commands::bet_fair_cmd(&load(file)?, under),
        },
        Command::Properties => commands::properties_cmd(cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Table => print!("{}", out.text),
                Format::Structured => println!("{}", out.doc.to_json()),
            }
            ExitCode::from(if out.failed { 1 } else { 0 })
        }
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
