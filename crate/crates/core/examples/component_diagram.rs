//! Print a Graphviz diagram of the cells and bindings in a model.
//!
//! cargo run --example component_diagram | dot -Tsvg > components.svg

use tecs_rustgen::diagram::emit_diagram;
use tecs_rustgen::{compile, LinkOptions};

const PIPELINE: &str = r#"
signature sNext { void step(void); };
celltype tSource { call sNext cNext; };
celltype tFilter { call sNext cNext; entry sNext eIn; };
celltype tSink { entry sNext eIn; };
cell tSink Sink { };
cell tFilter Filter { cNext = Sink.eIn; };
cell tSource Source { cNext = Filter.eIn; };
"#;

fn main() {
    let sources = [("pipeline.cdl".to_string(), PIPELINE.to_string())];
    let c = compile(&sources, &LinkOptions::default()).unwrap_or_else(|diags| {
        diags.iter().for_each(|d| eprintln!("{d}"));
        std::process::exit(1);
    });
    print!("{}", emit_diagram(&c.model));
}
