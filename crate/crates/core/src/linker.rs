//! Name resolution, binding checks and emission planning.
//!
//! [`resolve`] turns parsed units into a [`ResolvedModel`] in which every
//! call port of every cell points at a concrete `(cell, entry port)` pair of
//! the same signature. [`plan_emission`] then decides which files the
//! generator owes for that model.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::diagnostic::{has_errors, Diagnostic};
use crate::model::*;
use crate::naming::{file_name, FileKind};

#[derive(Clone, Debug, Default)]
pub struct LinkOptions {
    /// Plugin for celltypes where neither the celltype nor any of its cells
    /// carries a `generate` directive.
    pub default_plugin: Option<Plugin>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedCelltype {
    pub def: CelltypeDef,
    /// The governing generator, `None` if the celltype is not generated.
    pub plugin: Option<Plugin>,
}

impl ResolvedCelltype {
    pub fn is_generated(&self) -> bool {
        self.plugin.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedBinding {
    pub call_port: String,
    /// Index into [`ResolvedModel::cells`].
    pub target_cell: usize,
    /// Index into the target celltype's `entry_ports`.
    pub target_entry: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedCell {
    pub cell: CellDef,
    /// Index into [`ResolvedModel::celltypes`].
    pub celltype: usize,
    /// One per call port, in the celltype's call-port order.
    pub bindings: Vec<ResolvedBinding>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResolvedModel {
    pub units: Vec<CdlUnit>,
    pub signatures: Vec<SignatureDef>,
    pub celltypes: Vec<ResolvedCelltype>,
    pub cells: Vec<ResolvedCell>,
    signature_index: BTreeMap<String, usize>,
    celltype_index: BTreeMap<String, usize>,
}

impl ResolvedModel {
    pub fn signature(&self, name: &str) -> Option<&SignatureDef> {
        self.signature_index.get(name).map(|&i| &self.signatures[i])
    }

    pub fn celltype_index(&self, name: &str) -> Option<usize> {
        self.celltype_index.get(name).copied()
    }

    pub fn celltype(&self, name: &str) -> Option<&ResolvedCelltype> {
        self.celltype_index(name).map(|i| &self.celltypes[i])
    }

    pub fn cells_of(&self, celltype: usize) -> impl Iterator<Item = &ResolvedCell> {
        self.cells.iter().filter(move |c| c.celltype == celltype)
    }

    pub fn celltype_of(&self, cell: &ResolvedCell) -> &CelltypeDef {
        &self.celltypes[cell.celltype].def
    }

    /// `(target cell, target celltype, target entry port)` of a binding.
    pub fn binding_target(&self, binding: &ResolvedBinding) -> (&CellDef, &CelltypeDef, &PortDecl) {
        let target = &self.cells[binding.target_cell];
        let ct = self.celltype_of(target);
        (&target.cell, ct, &ct.entry_ports[binding.target_entry])
    }
}

pub fn resolve(units: &[CdlUnit]) -> Result<ResolvedModel, Vec<Diagnostic>> {
    resolve_with(units, &LinkOptions::default())
}

pub fn resolve_with(
    units: &[CdlUnit],
    options: &LinkOptions,
) -> Result<ResolvedModel, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut model = ResolvedModel {
        units: units.to_vec(),
        ..ResolvedModel::default()
    };

    for sig in units.iter().flat_map(CdlUnit::signatures) {
        if model.signature_index.contains_key(&sig.name) {
            diags.push(Diagnostic::error(
                "duplicate-signature",
                &sig.span,
                format!("signature `{}` is defined more than once", sig.name),
            ));
            continue;
        }
        model
            .signature_index
            .insert(sig.name.clone(), model.signatures.len());
        model.signatures.push(sig.clone());
    }

    for ct in units.iter().flat_map(CdlUnit::celltypes) {
        if model.celltype_index.contains_key(&ct.name) {
            diags.push(Diagnostic::error(
                "duplicate-celltype",
                &ct.span,
                format!("celltype `{}` is defined more than once", ct.name),
            ));
            continue;
        }
        for port in ct.call_ports.iter().chain(&ct.entry_ports) {
            if !model.signature_index.contains_key(&port.signature_name) {
                diags.push(Diagnostic::error(
                    "unknown-signature",
                    &port.span,
                    format!(
                        "port `{}` of `{}` uses unknown signature `{}`",
                        port.port_name, ct.name, port.signature_name
                    ),
                ));
            }
        }
        model
            .celltype_index
            .insert(ct.name.clone(), model.celltypes.len());
        model.celltypes.push(ResolvedCelltype {
            def: ct.clone(),
            plugin: None,
        });
    }

    // Cells first get indexed so bindings may point forward.
    let mut cell_index: HashMap<&str, usize> = HashMap::new();
    let mut cell_defs: Vec<(&CellDef, usize)> = Vec::new();
    for cell in units.iter().flat_map(CdlUnit::cells) {
        if cell_index.contains_key(cell.name.as_str()) {
            diags.push(Diagnostic::error(
                "duplicate-cell",
                &cell.span,
                format!("cell `{}` is defined more than once", cell.name),
            ));
            continue;
        }
        let Some(ct) = model.celltype_index(&cell.celltype_name) else {
            diags.push(Diagnostic::error(
                "unknown-celltype",
                &cell.span,
                format!(
                    "cell `{}` has unknown celltype `{}`",
                    cell.name, cell.celltype_name
                ),
            ));
            continue;
        };
        cell_index.insert(&cell.name, cell_defs.len());
        cell_defs.push((cell, ct));
    }

    for &(cell, ct_idx) in &cell_defs {
        let ct = &model.celltypes[ct_idx].def;
        let mut bindings = Vec::new();

        for b in &cell.bindings {
            if ct.call_port(&b.call_port).is_none() {
                diags.push(Diagnostic::error(
                    "unknown-call-port",
                    &b.span,
                    format!("celltype `{}` has no call port `{}`", ct.name, b.call_port),
                ));
            }
        }

        for port in &ct.call_ports {
            let Some(b) = cell.binding(&port.port_name) else {
                diags.push(Diagnostic::error(
                    "unbound-call-port",
                    &cell.span,
                    format!(
                        "call port `{}` of cell `{}` is not bound",
                        port.port_name, cell.name
                    ),
                ));
                continue;
            };
            let Some(&target) = cell_index.get(b.target_cell.as_str()) else {
                diags.push(Diagnostic::error(
                    "unknown-cell",
                    &b.span,
                    format!("binding target cell `{}` does not exist", b.target_cell),
                ));
                continue;
            };
            let target_ct = &model.celltypes[cell_defs[target].1].def;
            let Some(entry_idx) = target_ct
                .entry_ports
                .iter()
                .position(|e| e.port_name == b.target_entry_port)
            else {
                diags.push(Diagnostic::error(
                    "unknown-entry-port",
                    &b.span,
                    format!(
                        "cell `{}` (celltype `{}`) has no entry port `{}`",
                        b.target_cell, target_ct.name, b.target_entry_port
                    ),
                ));
                continue;
            };
            let entry = &target_ct.entry_ports[entry_idx];
            if entry.signature_name != port.signature_name {
                diags.push(Diagnostic::error(
                    "signature-mismatch",
                    &b.span,
                    format!(
                        "call port `{}` ({}) cannot bind to `{}.{}` ({})",
                        port.port_name,
                        port.signature_name,
                        b.target_cell,
                        b.target_entry_port,
                        entry.signature_name
                    ),
                ));
                continue;
            }
            bindings.push(ResolvedBinding {
                call_port: port.port_name.clone(),
                target_cell: target,
                target_entry: entry_idx,
            });
        }

        for init in &cell.attr_inits {
            if ct.attr(&init.name).is_none() && ct.var(&init.name).is_none() {
                diags.push(Diagnostic::error(
                    "unknown-attribute",
                    &init.span,
                    format!(
                        "celltype `{}` has no attribute or variable `{}`",
                        ct.name, init.name
                    ),
                ));
            }
        }
        for attr in &ct.attrs {
            if attr.default.is_none() && cell.init(&attr.name).is_none() {
                diags.push(Diagnostic::error(
                    "uninitialized-attribute",
                    &cell.span,
                    format!(
                        "attribute `{}` of cell `{}` has no initializer and no default",
                        attr.name, cell.name
                    ),
                ));
            }
        }
        for var in &ct.vars {
            if var.default.is_none() && cell.init(&var.name).is_none() {
                diags.push(Diagnostic::error(
                    "uninitialized-variable",
                    &cell.span,
                    format!(
                        "variable `{}` of cell `{}` has no initializer and no default",
                        var.name, cell.name
                    ),
                ));
            }
        }

        model.cells.push(ResolvedCell {
            cell: cell.clone(),
            celltype: ct_idx,
            bindings,
        });
    }

    check_homogeneous_bindings(&model, &mut diags);
    assign_plugins(&mut model, options, &mut diags);

    if has_errors(&diags) {
        Err(diags)
    } else {
        Ok(model)
    }
}

/// All cells of one celltype must bind a given call port to the same
/// `(celltype, entry port)`, since the definition file names that concrete
/// entry type.
fn check_homogeneous_bindings(model: &ResolvedModel, diags: &mut Vec<Diagnostic>) {
    let mut seen: HashMap<(usize, &str), (&str, &str, &str)> = HashMap::new();
    for cell in &model.cells {
        for b in &cell.bindings {
            let (target_cell, target_ct, entry) = model.binding_target(b);
            let key = (cell.celltype, b.call_port.as_str());
            let found = (
                target_ct.name.as_str(),
                entry.port_name.as_str(),
                target_cell.name.as_str(),
            );
            match seen.get(&key) {
                None => {
                    seen.insert(key, found);
                }
                Some(first) if (first.0, first.1) != (found.0, found.1) => {
                    let span = &cell.cell.binding(&b.call_port).unwrap().span;
                    diags.push(Diagnostic::error(
                        "heterogeneous-binding-unsupported",
                        span,
                        format!(
                            "cell `{}` binds `{}` to {}.{} of `{}`, but cell `{}` binds it to `{}` of `{}`; all cells of `{}` must use one target celltype and entry port",
                            cell.cell.name,
                            b.call_port,
                            found.2,
                            found.1,
                            found.0,
                            first.2,
                            first.1,
                            first.0,
                            model.celltype_of(cell).name
                        ),
                    ));
                }
                Some(_) => {}
            }
        }
    }
}

fn assign_plugins(model: &mut ResolvedModel, options: &LinkOptions, diags: &mut Vec<Diagnostic>) {
    for idx in 0..model.celltypes.len() {
        let mut governing: Option<&PluginDirective> =
            model.celltypes[idx].def.generate_directive.as_ref();
        for cell in model.cells.iter().filter(|c| c.celltype == idx) {
            let Some(d) = &cell.cell.generate_directive else {
                continue;
            };
            match governing {
                None => governing = Some(d),
                Some(g) if g.plugin != d.plugin => diags.push(Diagnostic::error(
                    "conflicting-plugin",
                    &d.span,
                    format!(
                        "cell `{}` requests {} but celltype `{}` is already generated by {}",
                        cell.cell.name,
                        d.plugin.name(),
                        model.celltypes[idx].def.name,
                        g.plugin.name()
                    ),
                )),
                Some(_) => {}
            }
        }
        let plugin = match governing {
            Some(d) => Some(d.plugin.clone()),
            None => options.default_plugin.clone(),
        };
        model.celltypes[idx].plugin = plugin.filter(|p| !matches!(p, Plugin::Unknown(_)));
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlannedFile {
    pub kind: FileKind,
    /// The CDL name the file is derived from.
    pub source_name: String,
    pub path: String,
}

/// A factory `write` waiting to be rendered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigWriteRequest {
    pub scope: FactoryScope,
    pub celltype: usize,
    /// Index into [`ResolvedModel::cells`]; set for per-cell writes.
    pub cell: Option<usize>,
    pub write: FactoryWrite,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EmissionPlan {
    pub contract_files: Vec<PlannedFile>,
    pub definition_files: Vec<PlannedFile>,
    pub skeleton_files: Vec<PlannedFile>,
    /// Per-celltype writes first, then per-cell writes in cell order.
    pub config_writes: Vec<ConfigWriteRequest>,
}

impl EmissionPlan {
    pub fn source_files(&self) -> impl Iterator<Item = &PlannedFile> {
        self.contract_files
            .iter()
            .chain(&self.definition_files)
            .chain(&self.skeleton_files)
    }
}

pub fn plan_emission(model: &ResolvedModel) -> EmissionPlan {
    let mut plan = EmissionPlan::default();
    let generated: Vec<usize> = (0..model.celltypes.len())
        .filter(|&i| model.celltypes[i].is_generated())
        .collect();

    let referenced: BTreeSet<&str> = generated
        .iter()
        .flat_map(|&i| {
            let ct = &model.celltypes[i].def;
            ct.call_ports.iter().chain(&ct.entry_ports)
        })
        .map(|p| p.signature_name.as_str())
        .collect();
    plan.contract_files = model
        .signatures
        .iter()
        .filter(|s| referenced.contains(s.name.as_str()))
        .map(|s| planned(FileKind::Contract, &s.name))
        .collect();

    for &i in &generated {
        let ct = &model.celltypes[i].def;
        plan.definition_files
            .push(planned(FileKind::Definition, &ct.name));
        if !ct.entry_ports.is_empty() {
            plan.skeleton_files
                .push(planned(FileKind::Skeleton, &ct.name));
        }
    }

    for &i in &generated {
        for block in &model.celltypes[i].def.factory_blocks {
            if block.scope != FactoryScope::PerCelltype {
                continue;
            }
            for write in &block.writes {
                plan.config_writes.push(ConfigWriteRequest {
                    scope: FactoryScope::PerCelltype,
                    celltype: i,
                    cell: None,
                    write: write.clone(),
                });
            }
        }
    }
    for (cell_idx, cell) in model.cells.iter().enumerate() {
        let ct = &model.celltypes[cell.celltype];
        if !ct.is_generated() {
            continue;
        }
        for block in &ct.def.factory_blocks {
            if block.scope != FactoryScope::PerCell {
                continue;
            }
            for write in &block.writes {
                plan.config_writes.push(ConfigWriteRequest {
                    scope: FactoryScope::PerCell,
                    celltype: cell.celltype,
                    cell: Some(cell_idx),
                    write: write.clone(),
                });
            }
        }
    }
    plan
}

fn planned(kind: FileKind, name: &str) -> PlannedFile {
    PlannedFile {
        kind,
        source_name: name.to_string(),
        path: file_name(kind, name),
    }
}
