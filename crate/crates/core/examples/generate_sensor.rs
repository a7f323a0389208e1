//! Generate the trait, definition and skeleton files for the sensor sample
//! into a directory, then print the definition file.
//!
//! cargo run --example generate_sensor [OUT_DIR]

use std::path::PathBuf;
use std::process::ExitCode;

use tecs_rustgen::{run, Options, Plugin, RunError};

fn main() -> ExitCode {
    let out_dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("tecs-rustgen-sensor"));
    let options = Options {
        inputs: vec![concat!(env!("CARGO_MANIFEST_DIR"), "/samples/sensor.cdl").into()],
        out_dir: out_dir.clone(),
        // Celltypes without a directive are generated too.
        plugin: Some(Plugin::RustGen),
        diagram: None,
    };
    let outcome = match run(&options) {
        Ok(o) => o,
        Err(RunError::Diagnostics(diags)) => {
            diags.iter().for_each(|d| eprintln!("{d}"));
            return ExitCode::from(1);
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    for path in &outcome.written {
        println!("wrote {}", path.display());
    }
    for path in &outcome.skipped {
        println!("kept  {} (already exists)", path.display());
    }
    let def = std::fs::read_to_string(out_dir.join("t_sensor.rs")).unwrap();
    println!("\n{def}");
    ExitCode::SUCCESS
}
