//! Turn `#define NAME <int>` lines of a C header into Rust constants.
//!
//! cargo run --example header_constants [HEADER]

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/samples/kernel_cfg.h").into());
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| {
        eprintln!("{path}: {e}");
        std::process::exit(2);
    });
    let conv = tecs_rustgen::header_const::convert_defines(&text, &path);
    for w in &conv.warnings {
        eprintln!("{w}");
    }
    print!("{}", conv.text);
    eprintln!("{} constant(s)", conv.constant_count());
}
