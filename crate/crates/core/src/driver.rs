//! The whole pipeline from CDL text to files on disk.
//!
//! [`compile`] is pure. [`run`] adds reading inputs and writing outputs;
//! it writes nothing unless every stage succeeded.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::diagnostic::{dedup, has_errors, Diagnostic};
use crate::diagram::emit_diagram;
use crate::emit::{generate, GeneratedFile, WritePolicy};
use crate::frontend::parse_unit;
use crate::header_const::{convert_defines, Conversion};
use crate::linker::{plan_emission, resolve_with, EmissionPlan, LinkOptions, ResolvedModel};
use crate::model::{validate_unit, CdlUnit, Plugin};
use crate::report::GenerationReport;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status when any Error diagnostic was reported.
pub const EXIT_DIAGNOSTICS: i32 = 1;
/// Exit status for bad arguments or I/O failure.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{} error(s) reported", .0.iter().filter(|d| d.is_error()).count())]
    Diagnostics(Vec<Diagnostic>),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Diagnostics(_) => EXIT_DIAGNOSTICS,
            RunError::Io { .. } | RunError::Usage(_) => EXIT_USAGE,
        }
    }

    fn io(path: &Path, source: io::Error) -> Self {
        RunError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Compilation {
    pub units: Vec<CdlUnit>,
    pub model: ResolvedModel,
    pub plan: EmissionPlan,
    pub files: Vec<GeneratedFile>,
    pub report: GenerationReport,
}

/// Parses, validates, resolves and emits `sources` (`(name, text)` pairs,
/// concatenated in order). Returns every diagnostic of the first failing
/// stage.
pub fn compile(
    sources: &[(String, String)],
    options: &LinkOptions,
) -> Result<Compilation, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut units = Vec::new();
    for (name, text) in sources {
        let parsed = parse_unit(text, name);
        diags.extend(parsed.diagnostics);
        if let Some(unit) = parsed.unit {
            diags.extend(validate_unit(&unit));
            units.push(unit);
        }
    }
    if has_errors(&diags) {
        dedup(&mut diags);
        return Err(diags);
    }
    let model = resolve_with(&units, options)?;
    let plan = plan_emission(&model);
    let files = generate(&model, &plan)?;
    let report = GenerationReport::from_files(&files);
    Ok(Compilation {
        units,
        model,
        plan,
        files,
        report,
    })
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub inputs: Vec<PathBuf>,
    pub out_dir: PathBuf,
    pub plugin: Option<Plugin>,
    pub diagram: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub compilation: Compilation,
    pub written: Vec<PathBuf>,
    /// `SkipIfExists` files that were already present.
    pub skipped: Vec<PathBuf>,
}

pub fn run(options: &Options) -> Result<Outcome, RunError> {
    if options.inputs.is_empty() {
        return Err(RunError::Usage("no input files".to_string()));
    }
    let mut sources = Vec::new();
    for path in &options.inputs {
        let text = fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
        sources.push((path.display().to_string(), text));
    }
    let link = LinkOptions {
        default_plugin: options.plugin.clone(),
    };
    let compilation = compile(&sources, &link).map_err(RunError::Diagnostics)?;

    let mut outputs: Vec<(PathBuf, &str)> = Vec::new();
    let mut skipped = Vec::new();
    for f in &compilation.files {
        let path = options.out_dir.join(&f.path);
        if f.policy == WritePolicy::SkipIfExists && path.exists() {
            skipped.push(path);
        } else {
            outputs.push((path, &f.content));
        }
    }
    let diagram;
    if let Some(path) = &options.diagram {
        diagram = emit_diagram(&compilation.model);
        outputs.push((path.clone(), &diagram));
    }
    let written = write_all(&outputs)?;
    Ok(Outcome {
        compilation,
        written,
        skipped,
    })
}

/// Stages every file next to its destination, then renames them all into
/// place. A failure while staging removes the staged files and leaves the
/// destinations untouched.
fn write_all(outputs: &[(PathBuf, &str)]) -> Result<Vec<PathBuf>, RunError> {
    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::new();
    let cleanup = |staged: &[(PathBuf, PathBuf)]| {
        for (tmp, _) in staged {
            let _ = fs::remove_file(tmp);
        }
    };
    for (path, content) in outputs {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            if let Err(e) = fs::create_dir_all(dir) {
                cleanup(&staged);
                return Err(RunError::io(dir, e));
            }
        }
        let file_name = path
            .file_name()
            .map(|n| n.to_string_lossy())
            .unwrap_or_default();
        let tmp = path.with_file_name(format!(".{file_name}.tmp"));
        if let Err(e) = fs::write(&tmp, content) {
            cleanup(&staged);
            return Err(RunError::io(&tmp, e));
        }
        staged.push((tmp, path.clone()));
    }
    let mut written = Vec::new();
    for (tmp, path) in &staged {
        fs::rename(tmp, path).map_err(|e| RunError::io(path, e))?;
        written.push(path.clone());
    }
    Ok(written)
}

/// Reads a C header and writes its integer defines as Rust constants.
pub fn run_bindgen_lite(header: &Path, out: &Path) -> Result<Conversion, RunError> {
    let text = fs::read_to_string(header).map_err(|e| RunError::io(header, e))?;
    let conversion = convert_defines(&text, &header.display().to_string());
    write_all(&[(out.to_path_buf(), conversion.text.as_str())])?;
    Ok(conversion)
}
