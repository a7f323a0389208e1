//! Line-count summary of a generation run.
//!
//! Skeleton files are counted separately: they are where hand-written
//! behavior goes, everything else needs no editing.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::emit::{GeneratedFile, OutputKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub path: String,
    pub kind: OutputKind,
    pub lines: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub entries: Vec<ReportEntry>,
    pub auto_generated_lines: usize,
    pub skeleton_lines: usize,
}

impl GenerationReport {
    pub fn from_files(files: &[GeneratedFile]) -> Self {
        let entries: Vec<ReportEntry> = files
            .iter()
            .map(|f| ReportEntry {
                path: f.path.clone(),
                kind: f.kind,
                lines: f.line_count(),
            })
            .collect();
        let sum = |auto: bool| {
            entries
                .iter()
                .filter(|e| e.kind.is_auto_generated() == auto)
                .map(|e| e.lines)
                .sum()
        };
        GenerationReport {
            auto_generated_lines: sum(true),
            skeleton_lines: sum(false),
            entries,
        }
    }

    pub fn total_lines(&self) -> usize {
        self.auto_generated_lines + self.skeleton_lines
    }

    /// Percentage of lines that need no hand editing, 0 for an empty run.
    pub fn auto_generated_share(&self) -> f64 {
        match self.total_lines() {
            0 => 0.0,
            total => 100.0 * self.auto_generated_lines as f64 / total as f64,
        }
    }

    pub fn render(&self) -> String {
        let width = self
            .entries
            .iter()
            .map(|e| e.path.len())
            .chain(["auto-generated total".len()])
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(out, "{:<width$}  {:<10}  {:>6}", "file", "kind", "lines");
        let _ = writeln!(out, "{}", "-".repeat(width + 20));
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{:<width$}  {:<10}  {:>6}",
                e.path,
                e.kind.label(),
                e.lines
            );
        }
        let _ = writeln!(out, "{}", "-".repeat(width + 20));
        let _ = writeln!(
            out,
            "{:<width$}  {:<10}  {:>6}",
            "auto-generated total", "", self.auto_generated_lines
        );
        let _ = writeln!(
            out,
            "{:<width$}  {:<10}  {:>6}",
            "skeleton-stub total", "", self.skeleton_lines
        );
        out
    }
}
