//! Compile the kernel sample: an ItronrsGen task celltype whose factory
//! writes a `CRE_TSK` line into the kernel configuration.
//!
//! cargo run --example rtos_task

use tecs_rustgen::{compile, LinkOptions, OutputKind};

fn main() {
    let src = include_str!("../samples/kernel_rs.cdl");
    let compilation = match compile(
        &[("kernel_rs.cdl".into(), src.into())],
        &LinkOptions::default(),
    ) {
        Ok(c) => c,
        Err(diags) => {
            diags.iter().for_each(|d| eprintln!("{d}"));
            std::process::exit(1);
        }
    };
    for f in &compilation.files {
        println!("{:<28} {}", f.path, f.kind.label());
    }
    for f in compilation
        .files
        .iter()
        .filter(|f| f.kind == OutputKind::Config)
    {
        println!("\n== {} ==\n{}", f.path, f.content);
    }
    let def = compilation
        .files
        .iter()
        .find(|f| f.path == "t_task_rs.rs")
        .unwrap();
    println!("== {} ==\n{}", def.path, def.content);
}
