//! Reproduce every figure-style dataset from the built-in presets and print a
//! one-line summary per column; pass an output directory to also write CSVs.
//!
//! Run: cargo run -p cavity-repeater --example figure_tables [-- out_dir]

use cavity_repeater::sweep::{load_preset, preset_names, run_sweep};

fn main() {
    let out_dir = std::env::args().nth(1);
    if let Some(dir) = &out_dir {
        std::fs::create_dir_all(dir).expect("create output directory");
    }

    for name in preset_names() {
        let spec = load_preset(name).unwrap();
        let table = run_sweep(&spec).unwrap();
        println!(
            "{name}: {} rows over {} in [{}, {}]",
            table.rows.len(),
            table.header[0],
            spec.start,
            spec.stop
        );
        for (k, column) in table.header.iter().enumerate().skip(1) {
            let values: Vec<f64> = table.rows.iter().map(|row| row[k]).collect();
            let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            println!("  {column:<14} min {min:.6}  max {max:.6}");
        }
        if let Some(dir) = &out_dir {
            let path = format!("{dir}/{name}.csv");
            std::fs::write(&path, table.to_csv()).expect("write CSV");
            println!("  wrote {path}");
        }
        println!();
    }
}
