//! Graphviz rendering of a resolved model: one box per cell, one edge per
//! binding from the calling cell to the providing cell.

use std::fmt::Write;

use crate::linker::ResolvedModel;

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Nodes and edges follow cell declaration order, edges within a cell follow
/// call-port order.
pub fn emit_diagram(model: &ResolvedModel) -> String {
    let mut out = String::from("digraph components {\n");
    if !model.cells.is_empty() {
        out.push_str("    node [shape=box];\n");
    }
    for cell in &model.cells {
        let ct = model.celltype_of(cell);
        let _ = writeln!(
            out,
            "    \"{}\" [label=\"{}\\n{}\"];",
            escape(&cell.cell.name),
            escape(&ct.name),
            escape(&cell.cell.name)
        );
    }
    for cell in &model.cells {
        let ct = model.celltype_of(cell);
        for b in &cell.bindings {
            let (target, _, entry) = model.binding_target(b);
            let signature = ct
                .call_port(&b.call_port)
                .map_or("", |p| p.signature_name.as_str());
            let _ = writeln!(
                out,
                "    \"{}\" -> \"{}\" [label=\"{}\", taillabel=\"{}\", headlabel=\"{}\", arrowhead=normal];",
                escape(&cell.cell.name),
                escape(&target.name),
                escape(signature),
                escape(&b.call_port),
                escape(&entry.port_name)
            );
        }
    }
    out.push_str("}\n");
    out
}
