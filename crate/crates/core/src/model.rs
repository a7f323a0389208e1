//! Abstract syntax of the supported CDL subset.
//!
//! Everything here is a plain value: no I/O, no interior mutability. Source
//! spans are carried for diagnostics but are ignored by equality, see
//! [`Span`].

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::diagnostic::{Diagnostic, Span};
use crate::naming::{demangle_var_type, CTypeName, MangledTypeName};

/// One parsed `.cdl` file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdlUnit {
    pub source_name: String,
    pub items: Vec<Item>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Item {
    Signature(SignatureDef),
    Celltype(CelltypeDef),
    Cell(CellDef),
}

impl CdlUnit {
    pub fn new(source_name: impl Into<String>) -> Self {
        CdlUnit {
            source_name: source_name.into(),
            items: Vec::new(),
        }
    }

    pub fn signatures(&self) -> impl Iterator<Item = &SignatureDef> {
        self.items.iter().filter_map(|item| match item {
            Item::Signature(s) => Some(s),
            _ => None,
        })
    }

    pub fn celltypes(&self) -> impl Iterator<Item = &CelltypeDef> {
        self.items.iter().filter_map(|item| match item {
            Item::Celltype(c) => Some(c),
            _ => None,
        })
    }

    pub fn cells(&self) -> impl Iterator<Item = &CellDef> {
        self.items.iter().filter_map(|item| match item {
            Item::Cell(c) => Some(c),
            _ => None,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureDef {
    pub name: String,
    pub functions: Vec<FunctionDecl>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionDecl {
    pub name: String,
    pub return_type: CTypeName,
    pub params: Vec<ParamDecl>,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Specifier {
    In,
    Out,
}

impl Specifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Specifier::In => "in",
            Specifier::Out => "out",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamDecl {
    pub specifier: Specifier,
    pub c_type: CTypeName,
    pub pointer_depth: u32,
    pub name: String,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PortDirection {
    Call,
    Entry,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Modifier {
    Inline,
    Omit,
}

impl Modifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Modifier::Inline => "inline",
            Modifier::Omit => "omit",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        match word {
            "inline" => Some(Modifier::Inline),
            "omit" => Some(Modifier::Omit),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortDecl {
    pub direction: PortDirection,
    pub signature_name: String,
    pub port_name: String,
    /// Sorted, no duplicates.
    pub modifiers: Vec<Modifier>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttrDecl {
    pub name: String,
    pub c_type: CTypeName,
    pub default: Option<Initializer>,
    pub omit: bool,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarDecl {
    pub name: String,
    /// Either a plain C type name or an underscore-mangled Rust type, see
    /// [`crate::naming::demangle_var_type`].
    pub type_text: String,
    pub default: Option<Initializer>,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InitKind {
    /// `C_EXP("...")`; the text is the unescaped string argument and may
    /// contain `$macro$` holes.
    CExp,
    /// A bare integer or identifier.
    Literal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Initializer {
    pub kind: InitKind,
    pub text: String,
    pub span: Span,
}

impl Initializer {
    pub fn c_exp(text: impl Into<String>) -> Self {
        Initializer {
            kind: InitKind::CExp,
            text: text.into(),
            span: Span::default(),
        }
    }

    pub fn literal(text: impl Into<String>) -> Self {
        Initializer {
            kind: InitKind::Literal,
            text: text.into(),
            span: Span::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CelltypeDef {
    pub name: String,
    pub call_ports: Vec<PortDecl>,
    pub entry_ports: Vec<PortDecl>,
    pub attrs: Vec<AttrDecl>,
    pub vars: Vec<VarDecl>,
    pub factory_blocks: Vec<FactoryBlock>,
    pub generate_directive: Option<PluginDirective>,
    pub span: Span,
}

impl CelltypeDef {
    pub fn call_port(&self, name: &str) -> Option<&PortDecl> {
        self.call_ports.iter().find(|p| p.port_name == name)
    }

    pub fn entry_port(&self, name: &str) -> Option<&PortDecl> {
        self.entry_ports.iter().find(|p| p.port_name == name)
    }

    pub fn attr(&self, name: &str) -> Option<&AttrDecl> {
        self.attrs.iter().find(|a| a.name == name)
    }

    pub fn var(&self, name: &str) -> Option<&VarDecl> {
        self.vars.iter().find(|v| v.name == name)
    }

    /// Attributes that become record fields.
    pub fn emitted_attrs(&self) -> impl Iterator<Item = &AttrDecl> {
        self.attrs.iter().filter(|a| !a.omit)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Binding {
    pub call_port: String,
    pub target_cell: String,
    pub target_entry_port: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellInit {
    pub name: String,
    pub value: Initializer,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDef {
    pub name: String,
    pub celltype_name: String,
    pub bindings: Vec<Binding>,
    /// Attribute and variable initializers, in source order.
    pub attr_inits: Vec<CellInit>,
    pub generate_directive: Option<PluginDirective>,
    pub span: Span,
}

impl CellDef {
    pub fn binding(&self, call_port: &str) -> Option<&Binding> {
        self.bindings.iter().find(|b| b.call_port == call_port)
    }

    pub fn init(&self, name: &str) -> Option<&Initializer> {
        self.attr_inits
            .iter()
            .find(|i| i.name == name)
            .map(|i| &i.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Plugin {
    RustGen,
    ItronrsGen,
    /// Anything else the source names; rejected by [`validate_unit`].
    Unknown(String),
}

impl Plugin {
    pub fn from_name(name: &str) -> Self {
        match name {
            "RustGenPlugin" => Plugin::RustGen,
            "ItronrsGenPlugin" => Plugin::ItronrsGen,
            other => Plugin::Unknown(other.to_string()),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Plugin::RustGen => "RustGenPlugin",
            Plugin::ItronrsGen => "ItronrsGenPlugin",
            Plugin::Unknown(name) => name,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PluginDirective {
    pub plugin: Plugin,
    pub argument: String,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactoryScope {
    /// Lowercase `factory`: rendered once per cell.
    PerCell,
    /// Uppercase `FACTORY`: rendered once per celltype.
    PerCelltype,
}

/// `write("target", "template", arg, ...);`
///
/// `%s` placeholders in the template take the rendered values of the named
/// attributes in order; `$name$` holes are substituted from the macro
/// environment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoryWrite {
    pub target_file: String,
    pub template: String,
    pub args: Vec<String>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoryBlock {
    pub scope: FactoryScope,
    pub writes: Vec<FactoryWrite>,
    pub span: Span,
}

/// Checks that every `$` in `text` is part of a `$name$` pair.
pub fn macro_holes_balanced(text: &str) -> bool {
    text.matches('$').count() % 2 == 0
}

/// Structural checks on a single unit: duplicate names within a scope,
/// parameter rules, plugin names, and macro hole balance. Cross-unit name
/// resolution is the linker's job.
pub fn validate_unit(unit: &CdlUnit) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for item in &unit.items {
        match item {
            Item::Signature(sig) => validate_signature(sig, &mut out),
            Item::Celltype(ct) => validate_celltype(ct, &mut out),
            Item::Cell(cell) => validate_cell(cell, &mut out),
        }
    }
    out
}

fn check_unique<'a>(
    names: impl IntoIterator<Item = (&'a str, &'a Span)>,
    code: &'static str,
    what: &str,
    owner: &str,
    out: &mut Vec<Diagnostic>,
) {
    let mut seen = HashSet::new();
    for (name, span) in names {
        if !seen.insert(name) {
            out.push(Diagnostic::error(
                code,
                span,
                format!("duplicate {what} `{name}` in `{owner}`"),
            ));
        }
    }
}

fn validate_directive(directive: &Option<PluginDirective>, out: &mut Vec<Diagnostic>) {
    if let Some(PluginDirective {
        plugin: Plugin::Unknown(name),
        span,
        ..
    }) = directive
    {
        out.push(Diagnostic::error(
            "unknown-plugin",
            span,
            format!(
                "unknown generator plugin `{name}` (expected RustGenPlugin or ItronrsGenPlugin)"
            ),
        ));
    }
}

fn validate_initializer(init: &Initializer, out: &mut Vec<Diagnostic>) {
    if init.kind == InitKind::CExp && !macro_holes_balanced(&init.text) {
        out.push(Diagnostic::error(
            "unbalanced-macro",
            &init.span,
            format!("unbalanced `$` in C_EXP(\"{}\")", init.text),
        ));
    }
}

fn validate_signature(sig: &SignatureDef, out: &mut Vec<Diagnostic>) {
    check_unique(
        sig.functions.iter().map(|f| (f.name.as_str(), &f.span)),
        "duplicate-function",
        "function",
        &sig.name,
        out,
    );
    for func in &sig.functions {
        check_unique(
            func.params.iter().map(|p| (p.name.as_str(), &p.span)),
            "duplicate-parameter",
            "parameter",
            &format!("{}::{}", sig.name, func.name),
            out,
        );
        for param in &func.params {
            if param.pointer_depth > 1 {
                out.push(Diagnostic::error(
                    "pointer-depth",
                    &param.span,
                    format!(
                        "parameter `{}` has {} levels of indirection; at most one is supported",
                        param.name, param.pointer_depth
                    ),
                ));
            } else if param.specifier == Specifier::Out && param.pointer_depth == 0 {
                out.push(Diagnostic::error(
                    "out-requires-pointer",
                    &param.span,
                    format!("[out] parameter `{}` must be a pointer", param.name),
                ));
            }
        }
    }
}

fn validate_celltype(ct: &CelltypeDef, out: &mut Vec<Diagnostic>) {
    validate_directive(&ct.generate_directive, out);
    check_unique(
        ct.call_ports
            .iter()
            .chain(&ct.entry_ports)
            .map(|p| (p.port_name.as_str(), &p.span)),
        "duplicate-port",
        "port",
        &ct.name,
        out,
    );
    check_unique(
        ct.attrs
            .iter()
            .map(|a| (a.name.as_str(), &a.span))
            .chain(ct.vars.iter().map(|v| (v.name.as_str(), &v.span))),
        "duplicate-field",
        "attribute or variable",
        &ct.name,
        out,
    );
    for init in ct
        .attrs
        .iter()
        .filter_map(|a| a.default.as_ref())
        .chain(ct.vars.iter().filter_map(|v| v.default.as_ref()))
    {
        validate_initializer(init, out);
    }
    for var in &ct.vars {
        if let Err(e) = demangle_var_type(&MangledTypeName(var.type_text.clone())) {
            out.push(Diagnostic::error(
                "unrecognized-mangling",
                &var.span,
                e.to_string(),
            ));
        }
    }
    for write in ct.factory_blocks.iter().flat_map(|b| &b.writes) {
        if write.target_file.is_empty() {
            out.push(Diagnostic::error(
                "empty-write-target",
                &write.span,
                "factory write target file name is empty",
            ));
        }
        for text in [&write.target_file, &write.template] {
            if !macro_holes_balanced(text) {
                out.push(Diagnostic::error(
                    "unbalanced-macro",
                    &write.span,
                    format!("unbalanced `$` in \"{text}\""),
                ));
            }
        }
    }
}

fn validate_cell(cell: &CellDef, out: &mut Vec<Diagnostic>) {
    validate_directive(&cell.generate_directive, out);
    check_unique(
        cell.bindings
            .iter()
            .map(|b| (b.call_port.as_str(), &b.span)),
        "duplicate-binding",
        "binding of call port",
        &cell.name,
        out,
    );
    check_unique(
        cell.attr_inits.iter().map(|i| (i.name.as_str(), &i.span)),
        "duplicate-initializer",
        "initializer for",
        &cell.name,
        out,
    );
    for init in &cell.attr_inits {
        validate_initializer(&init.value, out);
    }
}
