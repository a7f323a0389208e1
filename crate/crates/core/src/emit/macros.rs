//! `$name$` substitution and effective attribute values.
//!
//! Substitution is a single left-to-right pass; substituted text is never
//! rescanned. `$ct$` and `$cell$` are built in; any other name refers to an
//! attribute of the cell being rendered and expands to the raw text of its
//! initializer.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diagnostic::{Diagnostic, Span};
use crate::model::{AttrDecl, CellDef, CelltypeDef, InitKind, Initializer, VarDecl};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MacroEnv {
    pub celltype: String,
    pub cell: Option<String>,
    pub attr_values: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MacroError {
    #[error("unresolved macro `${0}$`")]
    Unresolved(String),
    #[error("unbalanced `$` in \"{0}\"")]
    Unbalanced(String),
}

impl MacroEnv {
    /// Environment for per-celltype rendering: only `$ct$` is bound.
    pub fn for_celltype(ct: &CelltypeDef) -> Self {
        MacroEnv {
            celltype: ct.name.clone(),
            ..MacroEnv::default()
        }
    }

    /// Environment for one cell. An attribute the cell does not initialize
    /// takes its default's text when that text has no holes of its own.
    pub fn for_cell(ct: &CelltypeDef, cell: &CellDef) -> Self {
        let mut attr_values = BTreeMap::new();
        for attr in &ct.attrs {
            let text = match (cell.init(&attr.name), &attr.default) {
                (Some(init), _) => Some(init.text.clone()),
                (None, Some(d)) if !d.text.contains('$') => Some(d.text.clone()),
                _ => None,
            };
            if let Some(text) = text {
                attr_values.insert(attr.name.clone(), text);
            }
        }
        MacroEnv {
            celltype: ct.name.clone(),
            cell: Some(cell.name.clone()),
            attr_values,
        }
    }

    fn lookup(&self, name: &str) -> Option<&str> {
        match name {
            "ct" => Some(&self.celltype),
            "cell" => self.cell.as_deref(),
            _ => self.attr_values.get(name).map(String::as_str),
        }
    }
}

pub fn substitute_macros(template: &str, env: &MacroEnv) -> Result<String, MacroError> {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(start) = rest.find('$') {
        out.push_str(&rest[..start]);
        let after = &rest[start + 1..];
        let Some(end) = after.find('$') else {
            return Err(MacroError::Unbalanced(template.to_string()));
        };
        let name = &after[..end];
        let value = env
            .lookup(name)
            .ok_or_else(|| MacroError::Unresolved(name.to_string()))?;
        out.push_str(value);
        rest = &after[end + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

fn expand(init: &Initializer, env: &MacroEnv) -> Result<String, Diagnostic> {
    match init.kind {
        InitKind::Literal => Ok(init.text.clone()),
        InitKind::CExp => {
            substitute_macros(&init.text, env).map_err(|e| macro_diagnostic(e, &init.span))
        }
    }
}

pub fn macro_diagnostic(err: MacroError, span: &Span) -> Diagnostic {
    let code = match err {
        MacroError::Unresolved(_) => "unresolved-macro",
        MacroError::Unbalanced(_) => "unbalanced-macro",
    };
    Diagnostic::error(code, span, err.to_string())
}

/// The Rust expression an attribute of `cell` is initialized with.
///
/// A literal cell value fills a default `C_EXP` that refers to the
/// attribute itself (`TSKID_$id$` with `id = 1` gives `TSKID_1`); otherwise
/// the cell value wins over the default.
pub fn attr_value(ct: &CelltypeDef, cell: &CellDef, attr: &AttrDecl) -> Result<String, Diagnostic> {
    let env = MacroEnv::for_cell(ct, cell);
    let self_hole = format!("${}$", attr.name);
    match (cell.init(&attr.name), &attr.default) {
        (Some(v), Some(d))
            if v.kind == InitKind::Literal
                && d.kind == InitKind::CExp
                && d.text.contains(&self_hole) =>
        {
            expand(d, &env)
        }
        (Some(v), _) => expand(v, &env),
        (None, Some(d)) => expand(d, &env),
        (None, None) => Err(Diagnostic::error(
            "uninitialized-attribute",
            &cell.span,
            format!(
                "attribute `{}` of cell `{}` has no initializer and no default",
                attr.name, cell.name
            ),
        )),
    }
}

pub fn var_value(ct: &CelltypeDef, cell: &CellDef, var: &VarDecl) -> Result<String, Diagnostic> {
    let env = MacroEnv::for_cell(ct, cell);
    match cell.init(&var.name).or(var.default.as_ref()) {
        Some(init) => expand(init, &env),
        None => Err(Diagnostic::error(
            "uninitialized-variable",
            &cell.span,
            format!(
                "variable `{}` of cell `{}` has no initializer and no default",
                var.name, cell.name
            ),
        )),
    }
}
