//! `simkno`: model checking, translation, rewriting and bounded
//! satisfiability for epistemic logic over weighted similarity models.
//!
//! Every command prints one JSON document on stdout (`soundness` prints
//! JSON lines). Exit status: 0 for a positive result, 1 for a negative one,
//! 2 for errors.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use simkno_core::formula::{closure, parse, parse_open, Agent, Formula, Group};
use simkno_core::model::{fixture, random_model, RandomModelParams, FIXTURE_NAMES};
use simkno_core::rewrite::{apply, Rule};
use simkno_core::satbench::{
    bounded_sat, instantiate_axioms, soundness_sweep, SatBounds, SatStatus, SystemId,
};
use simkno_core::semantics::{satisfies, truthset};
use simkno_core::translate::{reverse_translation, similarity_lift, standard_translation};
use simkno_core::{KripkeModel, WeightedModel};

#[derive(Parser)]
#[command(name = "simkno", version, about)]
struct Cli {
    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a formula holds at a state of a model.
    Check {
        model: PathBuf,
        formula: String,
        state: String,
        /// Also list every state where the formula holds.
        #[arg(long)]
        truthset: bool,
    },
    /// Report whether a model is symmetric and positive.
    Validate { model: PathBuf },
    /// Convert between weighted and relational models.
    Translate {
        model: PathBuf,
        #[arg(long, value_enum)]
        direction: Direction,
        /// Write the result here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Apply a satisfiability-preserving rewriting.
    Rewrite {
        formula: String,
        #[arg(long)]
        rule: String,
        /// Agent universe for rho-s (comma separated); defaults to the
        /// agents of the formula.
        #[arg(long, value_delimiter = ',')]
        agents: Vec<String>,
    },
    /// Search small models for one satisfying the formula.
    Sat {
        formula: String,
        #[arg(long, default_value_t = 4)]
        max_states: usize,
        #[arg(long, default_value_t = 3)]
        max_abilities: usize,
        #[arg(long, default_value_t = 10_000_000)]
        max_candidates: u64,
        /// Only consider similarity models.
        #[arg(long)]
        similarity: bool,
    },
    /// Check an axiom system's instances on sampled models.
    Soundness {
        /// K, KB, K(C), KB(CDM), ...
        system: String,
        #[arg(long, default_value_t = 200)]
        models: usize,
        #[arg(long, default_value_t = 4)]
        max_states: usize,
        #[arg(long, default_value_t = 3)]
        max_abilities: usize,
        /// Formula pool for the schema variables (repeatable).
        #[arg(long = "formula")]
        formulas: Vec<String>,
        /// Add a named fixture to the sampled models (repeatable).
        #[arg(long = "include-fixture")]
        include_fixtures: Vec<String>,
    },
    /// List the closure of a formula.
    Closure { formula: String },
    /// Print a reference model, or write all of them to a directory.
    Fixtures {
        name: Option<String>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    ToKripke,
    FromKripke,
    Lift,
}

/// Seed for every randomized sampler, from `SIMKNO_SEED` (default 0).
fn seed() -> Result<u64> {
    match std::env::var("SIMKNO_SEED") {
        Ok(s) => s
            .parse()
            .with_context(|| format!("SIMKNO_SEED={s:?} is not an integer")),
        Err(_) => Ok(0),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_model(path: &Path) -> Result<WeightedModel> {
    WeightedModel::from_json_str(&read(path)?)
        .with_context(|| format!("loading {}", path.display()))
}

fn formula(text: &str) -> Result<Formula> {
    parse_open(text).with_context(|| format!("parsing {text:?}"))
}

fn render(value: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(value).expect("serializable")
    } else {
        value.to_string()
    }
}

/// The output document and exit status of one command.
struct Outcome {
    body: Vec<Value>,
    positive: bool,
}

impl Outcome {
    fn ok(v: Value) -> Self {
        Outcome {
            body: vec![v],
            positive: true,
        }
    }

    fn with(v: Value, positive: bool) -> Self {
        Outcome {
            body: vec![v],
            positive,
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Check {
            model,
            formula: text,
            state,
            truthset: want_set,
        } => {
            let m = load_model(&model)?;
            let universe: BTreeSet<Agent> = m.agents().iter().cloned().collect();
            let phi = parse(&text, &universe).with_context(|| format!("parsing {text:?}"))?;
            let holds = satisfies(&m, &state, &phi)?;
            let mut out = json!({ "holds": holds });
            if want_set {
                let t = truthset(&m, &phi)?;
                out["truthset"] = json!(t.state_names(&m));
            }
            Ok(Outcome::with(out, holds))
        }
        Command::Validate { model } => {
            let class = load_model(&model)?.validate();
            Ok(Outcome::with(
                json!({ "symmetric": class.is_symmetric, "positive": class.is_positive }),
                class.is_similarity(),
            ))
        }
        Command::Translate {
            model,
            direction,
            output,
        } => {
            let text = read(&model)?;
            let result = match direction {
                Direction::ToKripke => {
                    standard_translation(&WeightedModel::from_json_str(&text)?).to_json_value()
                }
                Direction::FromKripke => {
                    reverse_translation(&KripkeModel::from_json_str(&text)?)?.to_json_value()
                }
                Direction::Lift => {
                    similarity_lift(&WeightedModel::from_json_str(&text)?)?.to_json_value()
                }
            };
            match output {
                Some(path) => {
                    let text = serde_json::to_string_pretty(&result).expect("serializable");
                    fs::write(&path, text)
                        .with_context(|| format!("writing {}", path.display()))?;
                    Ok(Outcome::ok(
                        json!({ "written": path.display().to_string() }),
                    ))
                }
                None => Ok(Outcome::ok(result)),
            }
        }
        Command::Rewrite {
            formula: text,
            rule,
            agents,
        } => {
            let Some(rule) = Rule::from_name(&rule) else {
                let names: Vec<_> = Rule::ALL.iter().map(|r| r.name()).collect();
                bail!(
                    "unknown rule {rule:?}; expected one of {}",
                    names.join(", ")
                );
            };
            let phi = formula(&text)?;
            let universe: BTreeSet<Agent> = if agents.is_empty() {
                phi.agents()
            } else {
                agents.into_iter().map(Agent::new).collect()
            };
            let r = apply(rule, &phi, &universe)?;
            Ok(Outcome::ok(json!({
                "formula": r.output.to_string(),
                "sidecar": r.sidecar(),
            })))
        }
        Command::Sat {
            formula: text,
            max_states,
            max_abilities,
            max_candidates,
            similarity,
        } => {
            let bounds = SatBounds {
                max_states,
                max_abilities,
                max_candidates,
            };
            if max_states == 0 {
                bail!("--max-states must be at least 1");
            }
            let v = bounded_sat(&formula(&text)?, &bounds, similarity);
            Ok(Outcome::with(v.to_json(), v.status == SatStatus::Sat))
        }
        Command::Soundness {
            system,
            models,
            max_states,
            max_abilities,
            formulas,
            include_fixtures,
        } => {
            let system: SystemId = system.parse().map_err(anyhow::Error::msg)?;
            let pool: Vec<Formula> = if formulas.is_empty() {
                ["p", "~p", "q", "K{a} p", "(p -> q)"]
                    .iter()
                    .map(|t| formula(t))
                    .collect::<Result<_>>()?
            } else {
                formulas.iter().map(|t| formula(t)).collect::<Result<_>>()?
            };
            let agents: Vec<Agent> = vec!["a".into(), "b".into()];
            let groups = vec![
                Group::new(["a"])?,
                Group::new(["b"])?,
                Group::new(["a", "b"])?,
            ];
            if max_states == 0 {
                bail!("--max-states must be at least 1");
            }
            let mut params = RandomModelParams::new(max_states, max_abilities);
            params.agents = agents.clone();
            let mut props: BTreeSet<String> = pool.iter().flat_map(Formula::props).collect();
            props.retain(|p| p != simkno_core::formula::RESERVED_PROP);
            params.props = props.into_iter().collect();
            if system.symmetric {
                params = params.similarity();
            }
            let base = seed()?;
            let mut sample: Vec<WeightedModel> = (0..models as u64)
                .map(|i| random_model(base.wrapping_add(i), &params))
                .collect();
            for name in &include_fixtures {
                sample.push(fixture(name)?);
            }
            let instances = instantiate_axioms(system, &pool, &agents, &groups);
            let report = soundness_sweep(&instances, &sample);
            let mut body: Vec<Value> = report.violations.iter().map(|v| v.to_json()).collect();
            body.push(json!({
                "system": system.to_string(),
                "instances": report.instances,
                "models": report.models,
                "violations": report.violations.len(),
                "sound": report.is_sound(),
            }));
            Ok(Outcome {
                body,
                positive: report.is_sound(),
            })
        }
        Command::Closure { formula: text } => {
            let phi = formula(&text)?.expand_everyone();
            let set = closure(&phi)?;
            let list: Vec<String> = set.iter().map(ToString::to_string).collect();
            Ok(Outcome::ok(json!(list)))
        }
        Command::Fixtures { name, out_dir } => {
            let names: Vec<&str> = match &name {
                Some(n) => vec![n.as_str()],
                None => FIXTURE_NAMES.to_vec(),
            };
            let models: Vec<(&str, WeightedModel)> = names
                .iter()
                .map(|n| Ok((*n, fixture(n)?)))
                .collect::<Result<_>>()?;
            if let Some(dir) = out_dir {
                fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                let mut written = Vec::new();
                for (n, m) in &models {
                    let path = dir.join(format!("{n}.json"));
                    fs::write(&path, m.to_json_string())
                        .with_context(|| format!("writing {}", path.display()))?;
                    written.push(path.display().to_string());
                }
                return Ok(Outcome::ok(json!({ "written": written })));
            }
            let single = name.is_some();
            Ok(Outcome::ok(match models.as_slice() {
                [(_, m)] if single => m.to_json_value(),
                _ => Value::Object(
                    models
                        .iter()
                        .map(|(n, m)| (n.to_string(), m.to_json_value()))
                        .collect(),
                ),
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(outcome) => {
            for v in &outcome.body {
                println!("{}", render(v, cli.pretty));
            }
            ExitCode::from(if outcome.positive { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
