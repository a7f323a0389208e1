//! Feed broken descriptions to the compiler and print the diagnostics.
//! Each one is reported at the line that causes it and no file is produced.
//!
//! cargo run --example diagnostics

use tecs_rustgen::{compile, LinkOptions};

const CASES: &[(&str, &str)] = &[
    (
        "unbound call port",
        "signature sA { void f(void); };\n\
         celltype tUser { call sA cA; };\n\
         cell tUser U { };\n",
    ),
    (
        "out parameter without pointer",
        "signature sA { void get([out] int32_t v); };\n",
    ),
    (
        "binding to a port of another signature",
        "signature sA { void f(void); };\n\
         signature sB { void g(void); };\n\
         celltype tUser { call sA cA; };\n\
         celltype tProv { entry sB eB; };\n\
         cell tProv P { };\n\
         cell tUser U { cA = P.eB; };\n",
    ),
    (
        "unknown macro in a default",
        "signature sA { void f(void); };\n\
         [generate(RustGenPlugin, \"lib\")]\n\
         celltype tA { entry sA eA; attr { int32_t n = C_EXP(\"$nope$\"); }; };\n\
         cell tA A { };\n",
    ),
];

fn main() {
    for (what, src) in CASES {
        println!("-- {what}");
        match compile(
            &[("case.cdl".into(), (*src).into())],
            &LinkOptions::default(),
        ) {
            Ok(c) => println!("accepted, {} file(s)", c.files.len()),
            Err(diags) => diags.iter().for_each(|d| println!("{d}")),
        }
    }
}
