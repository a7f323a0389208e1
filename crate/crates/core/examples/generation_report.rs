//! Count how many lines of a generated crate are written by the tool and
//! how many are stubs left for the developer.
//!
//! cargo run --example generation_report

use tecs_rustgen::{compile, LinkOptions, Plugin};

fn main() {
    let src = include_str!("../samples/sensor.cdl");
    let options = LinkOptions {
        default_plugin: Some(Plugin::RustGen),
    };
    let c = compile(&[("sensor.cdl".into(), src.into())], &options).unwrap_or_else(|diags| {
        diags.iter().for_each(|d| eprintln!("{d}"));
        std::process::exit(1);
    });
    print!("{}", c.report.render());
    println!(
        "{:.1}% of all lines generated",
        c.report.auto_generated_share()
    );
}
