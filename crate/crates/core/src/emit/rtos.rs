//! RTOS-side output: factory `write` rendering into configuration files and
//! the kernel preamble for definition files that touch kernel objects.

use crate::diagnostic::{Diagnostic, Span};
use crate::emit::macros::{attr_value, macro_diagnostic, substitute_macros, MacroEnv};
use crate::emit::templates::KERNEL_PREAMBLE;
use crate::linker::{ConfigWriteRequest, ResolvedModel};

/// Kernel object wrapper types; a definition file whose fields use any of
/// them gets the kernel preamble.
pub const KERNEL_TYPES: [&str; 8] = [
    "TaskRef",
    "SemaphoreRef",
    "EventflagRef",
    "DataqueueRef",
    "MutexRef",
    "MemoryPoolRef",
    "CyclicHandlerRef",
    "AlarmHandlerRef",
];

/// One rendered factory line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigWrite {
    pub target_file: String,
    pub line: String,
}

pub fn uses_kernel_types<S: AsRef<str>>(field_types: &[S]) -> bool {
    field_types.iter().any(|ty| {
        ty.as_ref()
            .split(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .any(|word| KERNEL_TYPES.contains(&word))
    })
}

/// Prepends the kernel `use` lines. Applying it twice changes nothing.
pub fn apply_kernel_preamble(content: &str) -> String {
    if content.starts_with(KERNEL_PREAMBLE) {
        return content.to_string();
    }
    let sep = if content.is_empty() || content.starts_with("use ") {
        ""
    } else {
        "\n"
    };
    format!("{KERNEL_PREAMBLE}{sep}{content}")
}

/// Fills `%s` placeholders left to right.
fn fill_placeholders(template: &str, values: &[String], span: &Span) -> Result<String, Diagnostic> {
    let slots = template.matches("%s").count();
    if slots != values.len() {
        return Err(Diagnostic::error(
            "factory-arity",
            span,
            format!(
                "write template has {slots} `%s` placeholder(s) but {} argument(s)",
                values.len()
            ),
        ));
    }
    let mut out = String::with_capacity(template.len());
    let mut parts = template.split("%s");
    out.push_str(parts.next().unwrap_or_default());
    for (part, value) in parts.zip(values) {
        out.push_str(value);
        out.push_str(part);
    }
    Ok(out)
}

pub fn render_write(
    model: &ResolvedModel,
    req: &ConfigWriteRequest,
) -> Result<ConfigWrite, Diagnostic> {
    let ct = &model.celltypes[req.celltype].def;
    let cell = req.cell.map(|i| &model.cells[i].cell);
    let env = match cell {
        Some(cell) => MacroEnv::for_cell(ct, cell),
        None => MacroEnv::for_celltype(ct),
    };
    let span = &req.write.span;
    let target_file =
        substitute_macros(&req.write.target_file, &env).map_err(|e| macro_diagnostic(e, span))?;
    let template =
        substitute_macros(&req.write.template, &env).map_err(|e| macro_diagnostic(e, span))?;

    let mut values = Vec::new();
    for arg in &req.write.args {
        let attr = ct.attr(arg).ok_or_else(|| {
            Diagnostic::error(
                "unknown-factory-argument",
                span,
                format!(
                    "write argument `{arg}` is not an attribute of `{}`",
                    ct.name
                ),
            )
        })?;
        let cell = cell.ok_or_else(|| {
            Diagnostic::error(
                "unknown-factory-argument",
                span,
                format!("FACTORY write cannot refer to attribute `{arg}`; it has no cell"),
            )
        })?;
        values.push(attr_value(ct, cell, attr)?);
    }
    let line = fill_placeholders(&template, &values, span)?;
    if line.contains('$') || target_file.contains('$') {
        return Err(Diagnostic::error(
            "unresolved-macro",
            span,
            format!("`$` left in rendered output \"{line}\""),
        ));
    }
    if target_file.is_empty() {
        return Err(Diagnostic::error(
            "empty-write-target",
            span,
            "factory write target file name is empty",
        ));
    }
    Ok(ConfigWrite { target_file, line })
}

/// Renders every planned write, in plan order.
pub fn run_factory(
    model: &ResolvedModel,
    requests: &[ConfigWriteRequest],
) -> Result<Vec<ConfigWrite>, Vec<Diagnostic>> {
    let mut writes = Vec::new();
    let mut diags = Vec::new();
    for req in requests {
        match render_write(model, req) {
            Ok(w) => writes.push(w),
            Err(d) => diags.push(d),
        }
    }
    if diags.is_empty() {
        Ok(writes)
    } else {
        Err(diags)
    }
}

/// Groups lines per target file in order of first appearance. Each file is
/// its lines joined by newlines, with a trailing newline.
pub fn collate(writes: &[ConfigWrite]) -> Vec<(String, String)> {
    let mut files: Vec<(String, String)> = Vec::new();
    for w in writes {
        let idx = match files.iter().position(|(t, _)| *t == w.target_file) {
            Some(i) => i,
            None => {
                files.push((w.target_file.clone(), String::new()));
                files.len() - 1
            }
        };
        files[idx].1.push_str(&w.line);
        files[idx].1.push('\n');
    }
    files
}
