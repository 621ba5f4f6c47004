//! Command-line front end: parameter sweeps to CSV and the self-check suite.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cavity_repeater::sweep::{
    load_preset, parse_config, parse_range, preset_names, run_sweep, Axis, Quantity, SweepConfig,
};
use cavity_repeater::{acceptance, Error};

#[derive(Parser)]
#[command(
    name = "cavity-repeater",
    version,
    about = "Heralded atomic-ensemble quantum repeater model: sweeps and self-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate reflection, gate or protocol quantities over a grid as CSV.
    Sweep {
        /// Built-in preset to start from (see --list-presets).
        #[arg(long)]
        preset: Option<String>,
        /// Key/value config file; explicit flags override its entries.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Quantity family: reflection_magnitudes | phase_shifts |
        /// gate_fidelities | gate_efficiencies | distribution_fidelities |
        /// distribution_efficiencies.
        #[arg(long)]
        quantity: Option<String>,
        /// Swept axis: delta_p | g_over_kappa.
        #[arg(long)]
        axis: Option<String>,
        /// Grid as start:stop:steps.
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
        /// Held-constant ratio, e.g. --set g_over_kappa=4.0566 (repeatable).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// List the built-in presets and exit.
        #[arg(long)]
        list_presets: bool,
    },
    /// Run every self-check and print one pass/fail line per check.
    Accept {
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Sweep { preset, config, quantity, axis, range, set, out, list_presets } => {
            if list_presets {
                for name in preset_names() {
                    println!("{name}");
                }
                return ExitCode::SUCCESS;
            }
            match run_sweep_command(preset, config, quantity, axis, range, set, out) {
                Ok(()) => ExitCode::SUCCESS,
                Err(message) => {
                    eprintln!("error: {message}");
                    ExitCode::from(2)
                }
            }
        }
        Command::Accept { json } => run_accept_command(json),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_sweep_command(
    preset: Option<String>,
    config: Option<PathBuf>,
    quantity: Option<String>,
    axis: Option<String>,
    range: Option<String>,
    set: Vec<String>,
    out: Option<PathBuf>,
) -> Result<(), String> {
    let mut base = SweepConfig::default();
    if let Some(name) = preset {
        // Surface unknown-preset names before merging anything else.
        load_preset(&name).map_err(|e| e.to_string())?;
        base = parse_config(cavity_repeater::sweep::preset_text(&name).unwrap())
            .map_err(|e| e.to_string())?;
    }
    if let Some(path) = config {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        base = base.merge(parse_config(&text).map_err(|e| e.to_string())?);
    }

    let mut overrides = SweepConfig::default();
    if let Some(q) = quantity {
        overrides.quantity = Some(Quantity::parse(&q).map_err(|e| e.to_string())?);
    }
    if let Some(a) = axis {
        overrides.axis = Some(Axis::parse(&a).map_err(|e| e.to_string())?);
    }
    if let Some(r) = range {
        overrides.range = Some(parse_range(&r).map_err(|e| e.to_string())?);
    }
    for entry in set {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| format!("--set expects KEY=VALUE, got `{entry}`"))?;
        let parsed: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("--set {key}: bad number `{value}`"))?;
        overrides
            .set(key.trim(), parsed)
            .map_err(|e: Error| e.to_string())?;
    }

    let spec = base.merge(overrides).build().map_err(|e| e.to_string())?;
    let table = run_sweep(&spec).map_err(|e| e.to_string())?;
    let csv = table.to_csv();
    match out {
        Some(path) => std::fs::write(&path, csv)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn run_accept_command(json: bool) -> ExitCode {
    let results = acceptance::run_all();
    if json {
        let checks: Vec<serde_json::Value> = results
            .iter()
            .map(|r| {
                serde_json::json!({
                    "id": r.id,
                    "name": r.name,
                    "pass": r.pass,
                    "millis": r.millis,
                    "details": r.details,
                })
            })
            .collect();
        let doc = serde_json::json!({
            "checks": checks,
            "passed": results.iter().filter(|r| r.pass).count(),
            "total": results.len(),
            "all_pass": acceptance::all_pass(&results),
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        print!("{}", acceptance::report(&results));
    }
    if acceptance::all_pass(&results) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
