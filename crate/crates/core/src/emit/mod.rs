//! Turning an [`EmissionPlan`] into file contents.
//!
//! Nothing here touches the filesystem; [`generate`] returns the complete
//! set of files or the complete set of diagnostics.

pub mod macros;
pub mod rtos;
pub mod sources;
pub mod templates;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::diagnostic::{dedup, Diagnostic, Span};
use crate::linker::{EmissionPlan, ResolvedModel};
use crate::model::Plugin;
use crate::naming::FileKind;

pub use macros::{substitute_macros, MacroEnv, MacroError};
pub use rtos::{apply_kernel_preamble, run_factory, ConfigWrite};
pub use sources::{emit_contract, emit_definition, emit_skeleton};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WritePolicy {
    Overwrite,
    /// Hand-edited files: written once, never replaced.
    SkipIfExists,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OutputKind {
    Contract,
    Definition,
    Skeleton,
    Config,
}

impl OutputKind {
    pub fn label(self) -> &'static str {
        match self {
            OutputKind::Contract => "contract",
            OutputKind::Definition => "definition",
            OutputKind::Skeleton => "skeleton",
            OutputKind::Config => "config",
        }
    }

    /// Skeletons are starting points for hand-written code; everything
    /// else is fully generated.
    pub fn is_auto_generated(self) -> bool {
        self != OutputKind::Skeleton
    }
}

impl From<FileKind> for OutputKind {
    fn from(kind: FileKind) -> Self {
        match kind {
            FileKind::Contract => OutputKind::Contract,
            FileKind::Definition => OutputKind::Definition,
            FileKind::Skeleton => OutputKind::Skeleton,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedFile {
    /// Relative to the output directory.
    pub path: String,
    pub kind: OutputKind,
    pub content: String,
    pub policy: WritePolicy,
}

impl GeneratedFile {
    pub fn line_count(&self) -> usize {
        self.content.lines().count()
    }
}

/// Renders every planned file: contracts, definitions, skeletons, then
/// configuration files in order of first write.
pub fn generate(
    model: &ResolvedModel,
    plan: &EmissionPlan,
) -> Result<Vec<GeneratedFile>, Vec<Diagnostic>> {
    let mut files = Vec::new();
    let mut diags = Vec::new();
    let mut origins: Vec<Span> = Vec::new();

    for planned in &plan.contract_files {
        let Some(sig) = model.signature(&planned.source_name) else {
            continue;
        };
        match emit_contract(sig) {
            Ok(content) => {
                origins.push(sig.span.clone());
                files.push(GeneratedFile {
                    path: planned.path.clone(),
                    kind: OutputKind::Contract,
                    content,
                    policy: WritePolicy::Overwrite,
                });
            }
            Err(mut d) => diags.append(&mut d),
        }
    }

    for planned in plan.definition_files.iter().chain(&plan.skeleton_files) {
        let Some(ct_idx) = model.celltype_index(&planned.source_name) else {
            continue;
        };
        let ct = &model.celltypes[ct_idx];
        let (result, policy) = match planned.kind {
            FileKind::Skeleton => (emit_skeleton(model, ct_idx), WritePolicy::SkipIfExists),
            _ => (emit_definition(model, ct_idx), WritePolicy::Overwrite),
        };
        match result {
            Ok(mut content) => {
                if planned.kind == FileKind::Definition
                    && ct.plugin == Some(Plugin::ItronrsGen)
                    && rtos::uses_kernel_types(&sources::definition_field_types(model, ct_idx))
                {
                    content = apply_kernel_preamble(&content);
                }
                origins.push(ct.def.span.clone());
                files.push(GeneratedFile {
                    path: planned.path.clone(),
                    kind: planned.kind.into(),
                    content,
                    policy,
                });
            }
            Err(mut d) => diags.append(&mut d),
        }
    }

    match run_factory(model, &plan.config_writes) {
        Ok(writes) => {
            for (path, content) in rtos::collate(&writes) {
                let span = plan
                    .config_writes
                    .iter()
                    .zip(&writes)
                    .find(|(_, w)| w.target_file == path)
                    .map(|(r, _)| r.write.span.clone())
                    .unwrap_or_default();
                origins.push(span);
                files.push(GeneratedFile {
                    path,
                    kind: OutputKind::Config,
                    content,
                    policy: WritePolicy::Overwrite,
                });
            }
        }
        Err(mut d) => diags.append(&mut d),
    }

    let mut seen: HashMap<&str, usize> = HashMap::new();
    for (i, f) in files.iter().enumerate() {
        if let Some(&first) = seen.get(f.path.as_str()) {
            diags.push(Diagnostic::error(
                "path-collision",
                &origins[i],
                format!(
                    "{} file `{}` collides with the {} file of the same name",
                    f.kind.label(),
                    f.path,
                    files[first].kind.label()
                ),
            ));
        } else {
            seen.insert(&f.path, i);
        }
    }

    if diags.is_empty() {
        Ok(files)
    } else {
        dedup(&mut diags);
        Err(diags)
    }
}
