//! Rust source emission: one contract (trait) file per signature, one
//! definition file per celltype, one implementation skeleton per celltype
//! with entry ports.

use crate::diagnostic::Diagnostic;
use crate::emit::macros::{attr_value, var_value};
use crate::emit::templates::{self as t, fill};
use crate::linker::{ResolvedCell, ResolvedModel};
use crate::model::{CelltypeDef, FunctionDecl, SignatureDef};
use crate::naming::{
    contract_name, demangle_var_type, entry_impl_name, entry_static_name, field_name, file_stem,
    map_base_type, map_param_type, record_name, static_names, MangledTypeName,
};

/// Generic parameter names handed out to call ports in declaration order.
const TYPE_PARAMS: [&str; 7] = ["T", "U", "V", "W", "X", "Y", "Z"];

fn type_param(index: usize) -> String {
    TYPE_PARAMS
        .get(index)
        .map_or_else(|| format!("T{index}"), |p| p.to_string())
}

fn method_params(f: &FunctionDecl) -> String {
    f.params
        .iter()
        .map(|p| {
            format!(
                ", {}: {}",
                p.name,
                map_param_type(&p.c_type, p.pointer_depth, p.specifier)
            )
        })
        .collect()
}

fn method_return(f: &FunctionDecl) -> String {
    if f.return_type.is_void() {
        String::new()
    } else {
        format!(" -> {}", map_base_type(f.return_type.as_str()))
    }
}

fn named<T>(result: Result<String, T>, span: &crate::diagnostic::Span) -> Result<String, Diagnostic>
where
    T: std::fmt::Display,
{
    result.map_err(|e| Diagnostic::error("invalid-name", span, e.to_string()))
}

pub fn emit_contract(sig: &SignatureDef) -> Result<String, Vec<Diagnostic>> {
    let name = named(contract_name(&sig.name), &sig.span).map_err(|d| vec![d])?;
    let methods: String = sig
        .functions
        .iter()
        .map(|f| {
            fill(
                t::CONTRACT_METHOD,
                &[
                    ("name", &f.name),
                    ("params", &method_params(f)),
                    ("ret", &method_return(f)),
                ],
            )
        })
        .collect();
    Ok(fill(t::CONTRACT, &[("name", &name), ("methods", &methods)]))
}

/// `use crate::{a::*, b::*};` with the first occurrence of each module kept.
fn use_crate(groups: Vec<Vec<String>>) -> Option<String> {
    let mut modules: Vec<String> = Vec::new();
    for mut group in groups {
        group.sort();
        for m in group {
            if !modules.contains(&m) {
                modules.push(m);
            }
        }
    }
    if modules.is_empty() {
        return None;
    }
    let list = modules
        .iter()
        .map(|m| format!("{m}::*"))
        .collect::<Vec<_>>()
        .join(", ");
    Some(fill(t::USE_CRATE, &[("modules", &list)]))
}

fn tuple(items: &[String]) -> String {
    match items {
        [] => "()".to_string(),
        [one] => format!("({one},)"),
        many => format!("({})", many.join(", ")),
    }
}

/// Everything about a celltype's shape that both the definition and the
/// skeleton file need.
struct Shape<'m> {
    ct: &'m CelltypeDef,
    cells: Vec<&'m ResolvedCell>,
    record: String,
    var_record: String,
    /// `(type parameter, contract)` per call port.
    params: Vec<(String, String)>,
    /// Concrete entry type bound to each call port, shared by all cells.
    /// `None` when the celltype has call ports but no cells.
    targets: Option<Vec<String>>,
    target_modules: Vec<String>,
    /// Demangled var types in declaration order.
    var_types: Vec<String>,
}

impl<'m> Shape<'m> {
    fn new(model: &'m ResolvedModel, ct_idx: usize) -> Result<Self, Vec<Diagnostic>> {
        let ct = &model.celltypes[ct_idx].def;
        let mut diags = Vec::new();
        let record = named(record_name(&ct.name), &ct.span).unwrap_or_else(|d| {
            diags.push(d);
            String::new()
        });
        let mut params = Vec::new();
        for (i, port) in ct.call_ports.iter().enumerate() {
            match named(contract_name(&port.signature_name), &port.span) {
                Ok(c) => params.push((type_param(i), c)),
                Err(d) => diags.push(d),
            }
        }
        let mut var_types = Vec::new();
        for var in &ct.vars {
            match demangle_var_type(&MangledTypeName(var.type_text.clone())) {
                Ok(ty) => var_types.push(ty),
                Err(e) => diags.push(Diagnostic::error(
                    "unrecognized-mangling",
                    &var.span,
                    e.to_string(),
                )),
            }
        }
        let cells: Vec<&ResolvedCell> = model.cells_of(ct_idx).collect();
        let (targets, target_modules) = match cells.first() {
            Some(cell) if !ct.call_ports.is_empty() => {
                let mut types = Vec::new();
                let mut modules = Vec::new();
                for b in &cell.bindings {
                    let (_, target_ct, entry) = model.binding_target(b);
                    types.push(entry_impl_name(&entry.port_name, &target_ct.name));
                    modules.push(file_stem(&target_ct.name));
                }
                (Some(types), modules)
            }
            _ if ct.call_ports.is_empty() => (Some(Vec::new()), Vec::new()),
            _ => (None, Vec::new()),
        };
        if !diags.is_empty() {
            return Err(diags);
        }
        Ok(Shape {
            ct,
            cells,
            var_record: format!("{record}Var"),
            record,
            params,
            targets,
            target_modules,
            var_types,
        })
    }

    fn has_lifetime(&self) -> bool {
        !self.ct.call_ports.is_empty() || !self.ct.vars.is_empty()
    }

    fn has_vars(&self) -> bool {
        !self.ct.vars.is_empty()
    }

    fn var_lifetime(&self) -> bool {
        self.var_types.iter().any(|t| t.contains("'a"))
    }

    /// `TSensorVar<'a>` or `TSensorVar`.
    fn var_type(&self) -> String {
        if self.var_lifetime() {
            format!("{}<'a>", self.var_record)
        } else {
            self.var_record.clone()
        }
    }

    fn call_contract_modules(&self) -> Vec<String> {
        self.ct
            .call_ports
            .iter()
            .map(|p| file_stem(&p.signature_name))
            .collect()
    }

    fn entry_contract_modules(&self) -> Vec<String> {
        self.ct
            .entry_ports
            .iter()
            .map(|p| file_stem(&p.signature_name))
            .collect()
    }

    fn bounds(&self) -> String {
        self.params
            .iter()
            .map(|(p, c)| fill(t::BOUND, &[("param", p), ("contract", c)]))
            .collect()
    }

    fn param_list(&self) -> String {
        self.params.iter().map(|(p, _)| format!(", {p}")).collect()
    }

    fn bounded_param_list(&self) -> String {
        self.params
            .iter()
            .map(|(p, c)| format!(", {p}: {c}"))
            .collect()
    }

    /// Field types of the main record, in field order.
    fn field_types(&self) -> Vec<(String, String)> {
        let mut fields = Vec::new();
        for (port, (param, _)) in self.ct.call_ports.iter().zip(&self.params) {
            fields.push((field_name(&port.port_name), format!("&'a {param}")));
        }
        for attr in self.ct.emitted_attrs() {
            fields.push((field_name(&attr.name), map_base_type(attr.c_type.as_str())));
        }
        if self.has_vars() {
            fields.push((
                "variable".to_string(),
                format!("&'a Mutex<{}>", self.var_type()),
            ));
        }
        fields
    }
}

fn record(name: &str, generics: &str, bounds: &str, fields: &str) -> String {
    let holes = [
        ("name", name),
        ("generics", generics),
        ("bounds", bounds),
        ("fields", fields),
    ];
    if bounds.is_empty() {
        fill(t::RECORD, &holes)
    } else {
        fill(t::RECORD_WHERE, &holes)
    }
}

fn field_lines(fields: &[(String, String)]) -> String {
    fields
        .iter()
        .map(|(n, ty)| fill(t::FIELD, &[("name", n), ("ty", ty)]))
        .collect()
}

fn init_lines(fields: &[(String, String)]) -> String {
    fields
        .iter()
        .map(|(n, v)| fill(t::FIELD_INIT, &[("name", n), ("value", v)]))
        .collect()
}

/// Field types appearing in a celltype's definition file, used to decide
/// whether the kernel preamble applies.
pub fn definition_field_types(model: &ResolvedModel, ct_idx: usize) -> Vec<String> {
    match Shape::new(model, ct_idx) {
        Ok(shape) => shape
            .field_types()
            .into_iter()
            .map(|(_, ty)| ty)
            .chain(shape.var_types.iter().cloned())
            .collect(),
        Err(_) => Vec::new(),
    }
}

pub fn emit_definition(model: &ResolvedModel, ct_idx: usize) -> Result<String, Vec<Diagnostic>> {
    let shape = Shape::new(model, ct_idx)?;
    let ct = shape.ct;
    let mut diags = Vec::new();
    let mut sections: Vec<String> = Vec::new();

    let mut imports = String::new();
    if shape.has_vars() {
        imports.push_str(t::USE_MUTEX);
    }
    if let Some(line) = use_crate(vec![
        shape.call_contract_modules(),
        shape.target_modules.clone(),
        shape.entry_contract_modules(),
    ]) {
        imports.push_str(&line);
    }
    if !imports.is_empty() {
        sections.push(imports);
    }

    let generics = if shape.has_lifetime() {
        format!("<'a{}>", shape.param_list())
    } else {
        String::new()
    };
    sections.push(record(
        &shape.record,
        &generics,
        &shape.bounds(),
        &field_lines(&shape.field_types()),
    ));

    if shape.has_vars() {
        let fields: Vec<(String, String)> = ct
            .vars
            .iter()
            .zip(&shape.var_types)
            .map(|(v, ty)| (field_name(&v.name), ty.clone()))
            .collect();
        let generics = if shape.var_lifetime() { "<'a>" } else { "" };
        sections.push(record(
            &shape.var_record,
            generics,
            "",
            &field_lines(&fields),
        ));
    }

    // The record type as seen from an entry record.
    let (entry_generics, entry_bounds, cell_type) = match &shape.targets {
        Some(targets) if shape.has_lifetime() => {
            let args: String = targets.iter().map(|t| format!(", {t}<'a>")).collect();
            (
                "<'a>".to_string(),
                String::new(),
                format!("{}<'a{args}>", shape.record),
            )
        }
        Some(_) => ("<'a>".to_string(), String::new(), shape.record.clone()),
        None => (
            format!("<'a{}>", shape.param_list()),
            shape.bounds(),
            format!("{}<'a{}>", shape.record, shape.param_list()),
        ),
    };
    for port in &ct.entry_ports {
        let name = entry_impl_name(&port.port_name, &ct.name);
        let fields = vec![("cell".to_string(), format!("&'a {cell_type}"))];
        sections.push(record(
            &name,
            &entry_generics,
            &entry_bounds,
            &field_lines(&fields),
        ));
    }

    for cell in &shape.cells {
        match cell_statics(model, &shape, cell) {
            Ok(mut s) => sections.append(&mut s),
            Err(mut d) => diags.append(&mut d),
        }
    }

    let self_ty = if shape.has_lifetime() {
        format!("{}{}", shape.record, generics)
    } else {
        shape.record.clone()
    };
    let impl_generics = if shape.has_lifetime() {
        format!("<'a{}>", shape.bounded_param_list())
    } else {
        String::new()
    };
    let mut tuple_types: Vec<String> = shape.params.iter().map(|(p, _)| format!("&{p}")).collect();
    let mut tuple_values: Vec<String> = ct
        .call_ports
        .iter()
        .map(|p| format!("&self.{}", field_name(&p.port_name)))
        .collect();
    for attr in ct.emitted_attrs() {
        tuple_types.push(format!("&{}", map_base_type(attr.c_type.as_str())));
        tuple_values.push(format!("&self.{}", field_name(&attr.name)));
    }
    if shape.has_vars() {
        tuple_types.push(format!("&Mutex<{}>", shape.var_type()));
        tuple_values.push("self.variable".to_string());
    }
    sections.push(fill(
        t::ACCESSOR,
        &[
            ("impl_generics", &impl_generics),
            ("self_ty", &self_ty),
            (
                "fn_generics",
                if shape.var_lifetime() { "<'a>" } else { "" },
            ),
            ("tuple_ty", &tuple(&tuple_types)),
            ("tuple", &tuple(&tuple_values)),
        ],
    ));

    if diags.is_empty() {
        Ok(sections.join("\n"))
    } else {
        Err(diags)
    }
}

fn cell_statics(
    model: &ResolvedModel,
    shape: &Shape,
    cell: &ResolvedCell,
) -> Result<Vec<String>, Vec<Diagnostic>> {
    let ct = shape.ct;
    let entry_ports: Vec<&str> = ct
        .entry_ports
        .iter()
        .map(|p| p.port_name.as_str())
        .collect();
    let names = static_names(&cell.cell.name, &entry_ports);
    let mut diags = Vec::new();
    let mut sections = Vec::new();

    let mut fields = Vec::new();
    for b in &cell.bindings {
        let (target_cell, _, entry) = model.binding_target(b);
        fields.push((
            field_name(&b.call_port),
            format!(
                "&{}",
                entry_static_name(&entry.port_name, &target_cell.name)
            ),
        ));
    }
    for attr in ct.emitted_attrs() {
        match attr_value(ct, &cell.cell, attr) {
            Ok(v) => fields.push((field_name(&attr.name), v)),
            Err(d) => diags.push(d),
        }
    }
    if shape.has_vars() {
        fields.push(("variable".to_string(), format!("&{}", names.var_instance)));
    }
    let ty = match shape.targets.as_deref() {
        Some([]) | None => shape.record.clone(),
        Some(targets) => format!("{}<{}>", shape.record, targets.join(", ")),
    };
    sections.push(fill(
        t::STATIC,
        &[
            ("name", &names.instance),
            ("ty", &ty),
            ("ctor", &shape.record),
            ("fields", &init_lines(&fields)),
        ],
    ));

    if shape.has_vars() {
        let mut fields = Vec::new();
        for var in &ct.vars {
            match var_value(ct, &cell.cell, var) {
                Ok(v) => fields.push((field_name(&var.name), v)),
                Err(d) => diags.push(d),
            }
        }
        sections.push(fill(
            t::STATIC_MUTEX,
            &[
                ("name", &names.var_instance),
                ("ty", &shape.var_record),
                ("ctor", &shape.var_record),
                ("fields", &init_lines(&fields)),
            ],
        ));
    }

    for (port, static_name) in ct.entry_ports.iter().zip(&names.entry_instances) {
        let entry_ty = entry_impl_name(&port.port_name, &ct.name);
        let fields = vec![("cell".to_string(), format!("&{}", names.instance))];
        sections.push(fill(
            t::STATIC,
            &[
                ("name", static_name),
                ("ty", &entry_ty),
                ("ctor", &entry_ty),
                ("fields", &init_lines(&fields)),
            ],
        ));
    }

    if diags.is_empty() {
        Ok(sections)
    } else {
        Err(diags)
    }
}

pub fn emit_skeleton(model: &ResolvedModel, ct_idx: usize) -> Result<String, Vec<Diagnostic>> {
    let shape = Shape::new(model, ct_idx)?;
    let ct = shape.ct;
    let mut diags = Vec::new();
    let mut sections = Vec::new();

    let mut imports = String::new();
    if shape.has_vars() {
        imports.push_str(t::USE_MUTEX);
    }
    if let Some(line) = use_crate(vec![
        vec![file_stem(&ct.name)],
        shape.call_contract_modules(),
        shape.entry_contract_modules(),
    ]) {
        imports.push_str(&line);
    }
    sections.push(imports);

    let (impl_generics, entry_args) = match shape.targets {
        Some(_) => (String::new(), "<'_>".to_string()),
        None => (
            format!("<{}>", shape.bounded_param_list().trim_start_matches(", ")),
            format!("<'_{}>", shape.param_list()),
        ),
    };
    for port in &ct.entry_ports {
        let Some(sig) = model.signature(&port.signature_name) else {
            continue;
        };
        let contract = match named(contract_name(&sig.name), &sig.span) {
            Ok(c) => c,
            Err(d) => {
                diags.push(d);
                continue;
            }
        };
        let methods: String = sig
            .functions
            .iter()
            .map(|f| {
                fill(
                    t::SKELETON_METHOD,
                    &[
                        ("name", &f.name),
                        ("params", &method_params(f)),
                        ("ret", &method_return(f)),
                    ],
                )
            })
            .collect();
        let entry = format!("{}{entry_args}", entry_impl_name(&port.port_name, &ct.name));
        sections.push(fill(
            t::SKELETON_IMPL,
            &[
                ("impl_generics", &impl_generics),
                ("contract", &contract),
                ("entry", &entry),
                ("methods", &methods),
            ],
        ));
    }

    if diags.is_empty() {
        Ok(sections.join("\n"))
    } else {
        Err(diags)
    }
}
