//! Canonical CDL text for a unit. Four-space indentation, one blank line
//! between top-level items.

use std::fmt::Write;

use crate::model::*;

const INDENT: &str = "    ";

pub fn render_unit(unit: &CdlUnit) -> String {
    let mut out = String::new();
    for (i, item) in unit.items.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match item {
            Item::Signature(s) => render_signature(&mut out, s),
            Item::Celltype(c) => render_celltype(&mut out, c),
            Item::Cell(c) => render_cell(&mut out, c),
        }
    }
    out
}

pub fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn render_directive(out: &mut String, d: &Option<PluginDirective>) {
    if let Some(d) = d {
        let _ = writeln!(
            out,
            "[generate({}, {})]",
            d.plugin.name(),
            quote(&d.argument)
        );
    }
}

fn render_signature(out: &mut String, sig: &SignatureDef) {
    let _ = writeln!(out, "signature {} {{", sig.name);
    for f in &sig.functions {
        let params = if f.params.is_empty() {
            "void".to_string()
        } else {
            f.params
                .iter()
                .map(|p| {
                    format!(
                        "[{}] {}{} {}",
                        p.specifier.keyword(),
                        p.c_type,
                        "*".repeat(p.pointer_depth as usize),
                        p.name
                    )
                })
                .collect::<Vec<_>>()
                .join(", ")
        };
        let _ = writeln!(out, "{INDENT}{} {}({params});", f.return_type, f.name);
    }
    out.push_str("};\n");
}

fn render_modifiers(mods: &[Modifier]) -> String {
    if mods.is_empty() {
        String::new()
    } else {
        let words: Vec<_> = mods.iter().map(|m| m.keyword()).collect();
        format!("[{}] ", words.join(", "))
    }
}

fn render_init(init: &Option<Initializer>) -> String {
    match init {
        None => String::new(),
        Some(i) => format!(" = {}", initializer_text(i)),
    }
}

fn initializer_text(init: &Initializer) -> String {
    match init.kind {
        InitKind::CExp => format!("C_EXP({})", quote(&init.text)),
        InitKind::Literal => init.text.clone(),
    }
}

fn render_celltype(out: &mut String, ct: &CelltypeDef) {
    render_directive(out, &ct.generate_directive);
    let _ = writeln!(out, "celltype {} {{", ct.name);
    for (kw, ports) in [("call", &ct.call_ports), ("entry", &ct.entry_ports)] {
        for p in ports {
            let _ = writeln!(
                out,
                "{INDENT}{}{kw} {} {};",
                render_modifiers(&p.modifiers),
                p.signature_name,
                p.port_name
            );
        }
    }
    if !ct.attrs.is_empty() {
        let _ = writeln!(out, "{INDENT}attr {{");
        for a in &ct.attrs {
            let omit = if a.omit { "[omit] " } else { "" };
            let _ = writeln!(
                out,
                "{INDENT}{INDENT}{omit}{} {}{};",
                a.c_type,
                a.name,
                render_init(&a.default)
            );
        }
        let _ = writeln!(out, "{INDENT}}};");
    }
    if !ct.vars.is_empty() {
        let _ = writeln!(out, "{INDENT}var {{");
        for v in &ct.vars {
            let _ = writeln!(
                out,
                "{INDENT}{INDENT}{} {}{};",
                v.type_text,
                v.name,
                render_init(&v.default)
            );
        }
        let _ = writeln!(out, "{INDENT}}};");
    }
    for block in &ct.factory_blocks {
        let kw = match block.scope {
            FactoryScope::PerCell => "factory",
            FactoryScope::PerCelltype => "FACTORY",
        };
        let _ = writeln!(out, "{INDENT}{kw} {{");
        for w in &block.writes {
            let mut args = String::new();
            for a in &w.args {
                let _ = write!(args, ", {a}");
            }
            let _ = writeln!(
                out,
                "{INDENT}{INDENT}write({}, {}{args});",
                quote(&w.target_file),
                quote(&w.template)
            );
        }
        let _ = writeln!(out, "{INDENT}}};");
    }
    out.push_str("};\n");
}

fn render_cell(out: &mut String, cell: &CellDef) {
    render_directive(out, &cell.generate_directive);
    let _ = writeln!(out, "cell {} {} {{", cell.celltype_name, cell.name);
    for b in &cell.bindings {
        let _ = writeln!(
            out,
            "{INDENT}{} = {}.{};",
            b.call_port, b.target_cell, b.target_entry_port
        );
    }
    for i in &cell.attr_inits {
        let _ = writeln!(out, "{INDENT}{} = {};", i.name, initializer_text(&i.value));
    }
    out.push_str("};\n");
}
