mod render;
mod source;
mod suite;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use qcomm_core::catalog::all_entries;
use qcomm_core::densecoding::sdc_report;
use qcomm_core::ket::complement;
use qcomm_core::qkd::{assess_split, expected_rates, qkd_verdict, simulate_qkd_with, QkdVerdict};
use qcomm_core::teleport::{
    build_measurement_basis, build_measurement_basis_unchecked, check_feasibility, simulate_with_basis, AlphaSource,
    TeleportTask,
};
use qcomm_core::{entropy_table, parse_scalar, schmidt_decompose, Bipartition};
use serde_json::{json, Value};

use source::{check_labels, load_state, parse_labels};

#[derive(Parser)]
#[command(
    name = "qcomm",
    version,
    about = "Entanglement analysis and protocol checks for small qubit states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Built-in resource states.
    States {
        #[command(subcommand)]
        action: StatesAction,
    },
    /// Von Neumann entropy of every bipartition.
    Entropy {
        #[command(flatten)]
        state: StateArg,
        #[arg(long)]
        json: bool,
    },
    /// Schmidt decomposition across one cut.
    Schmidt {
        #[command(flatten)]
        state: StateArg,
        /// Qubits on one side of the cut, e.g. 1,2.
        #[arg(long)]
        cut: String,
        #[arg(long)]
        json: bool,
    },
    /// Exact teleportation of an m-level state to Bob's qubits.
    Teleport {
        #[command(subcommand)]
        action: TeleportAction,
    },
    /// Superdense coding capacity with Pauli encodings.
    Sdc {
        #[command(flatten)]
        state: StateArg,
        /// Qubits the sender encodes on, e.g. 1,2.
        #[arg(long)]
        sender: String,
        #[arg(long)]
        json: bool,
    },
    /// Entanglement-based key distribution on four-qubit states.
    Qkd {
        #[command(subcommand)]
        action: QkdAction,
    },
    /// Runs the reference battery of entropies, teleportation, capacities
    /// and key-distribution verdicts; exits 1 if any check fails.
    #[command(name = "reference-suite", visible_alias = "paper-suite")]
    ReferenceSuite {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct StateArg {
    /// Catalog name (see `states list`), or a .ket or .json file.
    #[arg(long)]
    state: String,
}

#[derive(Subcommand)]
enum StatesAction {
    List {
        #[arg(long)]
        json: bool,
    },
    Show {
        name: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct TeleportArgs {
    #[command(flatten)]
    state: StateArg,
    /// Bob's qubits, e.g. 3,4.
    #[arg(long)]
    bob: String,
    /// Dimension of the state to teleport.
    #[arg(long)]
    m: usize,
    #[arg(long)]
    json: bool,
    /// Exit with status 1 when the task is infeasible.
    #[arg(long)]
    strict: bool,
}

#[derive(Subcommand)]
enum TeleportAction {
    Check {
        #[command(flatten)]
        args: TeleportArgs,
    },
    Run {
        #[command(flatten)]
        args: TeleportArgs,
        /// Comma-separated input coefficients, e.g. 0.6,0.8i.
        #[arg(long, conflicts_with = "seed", allow_hyphen_values = true)]
        alpha: Option<String>,
        /// Seed for a random input state.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum QkdAction {
    Check {
        #[command(flatten)]
        state: StateArg,
        /// Alice's two qubits; without it all three balanced splits are tried.
        #[arg(long)]
        alice: Option<String>,
        #[arg(long)]
        json: bool,
        /// Exit with status 1 when no split is suitable.
        #[arg(long)]
        strict: bool,
    },
    Run {
        #[command(flatten)]
        state: StateArg,
        #[arg(long)]
        alice: String,
        #[arg(long, default_value_t = 10_000)]
        rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

/// What a command produced: text or one JSON document, plus whether the
/// analysis came out negative.
struct Report {
    text: String,
    json: Option<Value>,
    negative: bool,
}

impl Report {
    fn new(json_mode: bool, text: String, json: impl FnOnce() -> Value) -> Self {
        Report {
            json: json_mode.then(json),
            text,
            negative: false,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let strict = matches!(
        &cli.command,
        Command::Teleport {
            action: TeleportAction::Check {
                args: TeleportArgs { strict: true, .. }
            } | TeleportAction::Run {
                args: TeleportArgs { strict: true, .. },
                ..
            }
        } | Command::Qkd {
            action: QkdAction::Check { strict: true, .. }
        } | Command::ReferenceSuite { .. }
    );
    match dispatch(cli.command) {
        Ok(report) => {
            let body = match report.json {
                Some(doc) => serde_json::to_string_pretty(&doc).expect("serializable") + "\n",
                None => report.text,
            };
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            if strict && report.negative {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {}", one_line(&e));
            ExitCode::from(2)
        }
    }
}

fn one_line(e: &anyhow::Error) -> String {
    e.chain().map(|c| c.to_string()).collect::<Vec<_>>().join(": ")
}

fn dispatch(command: Command) -> Result<Report> {
    match command {
        Command::States { action } => states(action),
        Command::Entropy { state, json } => entropy(&state.state, json),
        Command::Schmidt { state, cut, json } => schmidt(&state.state, &cut, json),
        Command::Teleport { action } => match action {
            TeleportAction::Check { args } => teleport_check(&args),
            TeleportAction::Run { args, alpha, seed } => teleport_run(&args, alpha.as_deref(), seed),
        },
        Command::Sdc { state, sender, json } => sdc(&state.state, &sender, json),
        Command::Qkd { action } => match action {
            QkdAction::Check { state, alice, json, .. } => qkd_check(&state.state, alice.as_deref(), json),
            QkdAction::Run {
                state,
                alice,
                rounds,
                seed,
                json,
            } => qkd_run(&state.state, &alice, rounds, seed, json),
        },
        Command::ReferenceSuite { json } => {
            let results = suite::run();
            let negative = results.iter().any(|c| !c.passed);
            let mut report = Report::new(json, render::suite(&results), || suite::to_json(&results));
            report.negative = negative;
            Ok(report)
        }
    }
}

fn states(action: StatesAction) -> Result<Report> {
    match action {
        StatesAction::List { json } => {
            let entries = all_entries();
            Ok(Report::new(json, render::state_list(&entries), || {
                Value::Array(
                    entries
                        .iter()
                        .map(|e| json!({"name": e.name, "n_qubits": e.state.n_qubits(), "source": e.source}))
                        .collect(),
                )
            }))
        }
        StatesAction::Show { name, json } => {
            let entry = qcomm_core::catalog_entry(&name)
                .map_err(|_| anyhow::anyhow!("unknown state '{name}'; run `qcomm states list`"))?;
            Ok(Report::new(
                json,
                render::state_show(&entry),
                || json!({"name": entry.name, "source": entry.source, "state": entry.state}),
            ))
        }
    }
}

fn entropy(state_arg: &str, json: bool) -> Result<Report> {
    let loaded = load_state(state_arg)?;
    let table = entropy_table(&loaded.state)?;
    Ok(Report::new(
        json,
        render::entropy(&loaded.label, &table),
        || json!({"state": loaded.label, "n_qubits": table.n_qubits, "rows": table.rows}),
    ))
}

fn schmidt(state_arg: &str, cut: &str, json: bool) -> Result<Report> {
    let loaded = load_state(state_arg)?;
    let side_a = parse_labels(cut)?;
    check_labels(&side_a, &loaded.state)?;
    let partition = Bipartition::new(loaded.state.n_qubits(), &side_a)?;
    let form = schmidt_decompose(&loaded.state, &partition)?;
    Ok(Report::new(json, render::schmidt(&loaded.label, &form), || {
        json!({
            "state": loaded.label,
            "side_a": form.partition.side_a(),
            "side_b": form.partition.side_b(),
            "rank": form.rank(),
            "entropy_bits": form.entropy_bits(),
            "coefficients": form.coefficients,
            "left_basis": form.left_basis,
            "right_basis": form.right_basis,
        })
    }))
}

fn teleport_task(args: &TeleportArgs) -> Result<(String, TeleportTask)> {
    let loaded = load_state(&args.state.state)?;
    let bob = parse_labels(&args.bob)?;
    check_labels(&bob, &loaded.state)?;
    let task = TeleportTask::new(loaded.state, &bob, args.m)?;
    Ok((loaded.label, task))
}

fn teleport_check(args: &TeleportArgs) -> Result<Report> {
    let (label, task) = teleport_task(args)?;
    let verdict = check_feasibility(&task)?;
    let mut report = Report::new(
        args.json,
        render::feasibility(&verdict),
        || json!({"state": label, "bob": task.bob_qubits(), "alice": task.alice_qubits(), "verdict": verdict}),
    );
    report.negative = !verdict.feasible;
    Ok(report)
}

fn parse_alpha(csv: &str) -> Result<Vec<Complex64>> {
    csv.split(',')
        .map(|part| parse_scalar(part).with_context(|| format!("bad coefficient '{}' in --alpha", part.trim())))
        .collect()
}

fn teleport_run(args: &TeleportArgs, alpha: Option<&str>, seed: u64) -> Result<Report> {
    let (label, task) = teleport_task(args)?;
    let verdict = check_feasibility(&task)?;
    let source = match alpha {
        Some(csv) => AlphaSource::Explicit(parse_alpha(csv)?),
        None => AlphaSource::Seeded(seed),
    };
    let alpha = source.resolve(task.m())?;
    let basis = if verdict.feasible {
        build_measurement_basis(&task)?
    } else {
        build_measurement_basis_unchecked(&task)?
    };
    let outcome = simulate_with_basis(&task, &basis, &alpha)?;
    let text = render::teleport_run(&verdict, &basis, &outcome);
    let mut report = Report::new(args.json, text, || {
        let outcomes: Vec<Value> = outcome
            .outcome_probabilities
            .iter()
            .zip(&outcome.per_outcome_fidelity)
            .enumerate()
            .map(|(i, (p, f))| {
                let label = basis.outcome_labels.get(i).filter(|_| i < basis.active_count);
                json!({
                    "index": i,
                    "label": label.map(|(j, k)| json!({"j": j, "k": k})),
                    "probability": p,
                    "fidelity": f,
                })
            })
            .collect();
        json!({
            "state": label,
            "bob": task.bob_qubits(),
            "alice": task.alice_qubits(),
            "verdict": verdict,
            "exact": verdict.feasible,
            "alpha": outcome.alpha,
            "min_fidelity": outcome.min_fidelity,
            "cbits_required": outcome.cbits_required,
            "outcomes": outcomes,
        })
    });
    report.negative = !verdict.feasible;
    Ok(report)
}

fn sdc(state_arg: &str, sender: &str, json: bool) -> Result<Report> {
    let loaded = load_state(state_arg)?;
    let sender = parse_labels(sender)?;
    check_labels(&sender, &loaded.state)?;
    let r = sdc_report(&loaded.state, &sender)?;
    Ok(Report::new(json, render::sdc(&loaded.label, &r), || {
        let mut doc = serde_json::to_value(&r).expect("serializable");
        doc["state"] = json!(loaded.label);
        doc
    }))
}

fn qkd_split(alice_arg: &str, n: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let alice = parse_labels(alice_arg)?;
    if n != 4 || alice.len() != 2 {
        bail!("key distribution needs a four-qubit state and two qubits for Alice, e.g. --alice 1,3");
    }
    if let Some(&bad) = alice.iter().find(|&&l| l == 0 || l > n) {
        bail!("qubit label {bad} is out of range; the state has qubits 1..={n}");
    }
    let bob = complement(n, &alice);
    Ok((alice, bob))
}

fn qkd_check(state_arg: &str, alice: Option<&str>, json: bool) -> Result<Report> {
    let loaded = load_state(state_arg)?;
    let verdict = match alice {
        Some(a) => {
            let (alice, bob) = qkd_split(a, loaded.state.n_qubits())?;
            let split = assess_split(&loaded.state, &alice, &bob)?;
            QkdVerdict {
                suitable: split.suitable,
                witness: split.suitable.then_some(0),
                splits: vec![split],
            }
        }
        None => {
            if loaded.state.n_qubits() != 4 {
                bail!("key distribution needs a four-qubit state");
            }
            qkd_verdict(&loaded.state)?
        }
    };
    let mut report = Report::new(json, render::qkd_check(&loaded.label, &verdict), || {
        let mut doc = serde_json::to_value(&verdict).expect("serializable");
        doc["state"] = json!(loaded.label);
        doc
    });
    report.negative = !verdict.suitable;
    Ok(report)
}

fn qkd_run(state_arg: &str, alice: &str, rounds: usize, seed: u64, json: bool) -> Result<Report> {
    let loaded = load_state(state_arg)?;
    let (alice, bob) = qkd_split(alice, loaded.state.n_qubits())?;
    let split = assess_split(&loaded.state, &alice, &bob)?;
    let scheme = split.scheme();
    let (sift, agreement) = expected_rates(&loaded.state, &alice, &bob, &scheme)?;
    let run = simulate_qkd_with(&loaded.state, &alice, &bob, &scheme, rounds, seed)?;
    let text = render::qkd_run(&loaded.label, &split, &run, sift, agreement);
    Ok(Report::new(json, text, || {
        json!({
            "state": loaded.label,
            "alice": alice,
            "bob": bob,
            "split_suitable": split.suitable,
            "scheme": scheme,
            "expected_sift_rate": sift,
            "expected_agreement_rate": agreement,
            "run": run,
        })
    }))
}
