use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tecs_rustgen::driver::{run, run_bindgen_lite, Options, RunError, EXIT_USAGE};
use tecs_rustgen::Plugin;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PluginArg {
    #[value(name = "RustGenPlugin")]
    RustGen,
    #[value(name = "ItronrsGenPlugin")]
    ItronrsGen,
}

/// Generate Rust sources and RTOS configuration from CDL files.
#[derive(Debug, Parser)]
#[command(name = "tecs-rustgen", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Generator for celltypes that carry no `generate` directive.
    #[arg(long, value_enum)]
    plugin: Option<PluginArg>,

    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,

    /// Also write a Graphviz component diagram to this path.
    #[arg(long)]
    diagram: Option<PathBuf>,

    /// Print the per-file line-count table.
    #[arg(long)]
    report: bool,

    /// CDL input files, read in order.
    files: Vec<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert integer `#define`s of a C header into Rust constants.
    BindgenLite {
        header: PathBuf,
        #[arg(short = 'o')]
        out: PathBuf,
    },
}

fn fail(err: &RunError) -> ExitCode {
    match err {
        RunError::Diagnostics(diags) => {
            for d in diags {
                eprintln!("{d}");
            }
        }
        other => eprintln!("tecs-rustgen: {other}"),
    }
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Some(Command::BindgenLite { header, out }) = cli.command {
        return match run_bindgen_lite(&header, &out) {
            Ok(conversion) => {
                for w in &conversion.warnings {
                    eprintln!("{w}");
                }
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        };
    }

    if cli.files.is_empty() {
        eprintln!("tecs-rustgen: no input files (see --help)");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    let options = Options {
        inputs: cli.files,
        out_dir: cli.out,
        plugin: cli.plugin.map(|p| match p {
            PluginArg::RustGen => Plugin::RustGen,
            PluginArg::ItronrsGen => Plugin::ItronrsGen,
        }),
        diagram: cli.diagram,
    };
    match run(&options) {
        Ok(outcome) => {
            if cli.report {
                print!("{}", outcome.compilation.report.render());
            }
            for path in &outcome.skipped {
                eprintln!("kept existing {}", path.display());
            }
            println!(
                "wrote {} file(s), kept {}",
                outcome.written.len(),
                outcome.skipped.len()
            );
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
