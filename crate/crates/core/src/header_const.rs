//! `#define NAME <integer>` lines of a kernel header to Rust constants.
//!
//! Only object-like defines whose body is a single decimal or hex integer
//! literal (optionally negative) that fits in `i32` are converted. Every
//! other `#define` is skipped with a warning; non-define lines are skipped
//! silently.

use crate::diagnostic::{Diagnostic, Span};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Conversion {
    pub text: String,
    pub warnings: Vec<Diagnostic>,
}

impl Conversion {
    pub fn constant_count(&self) -> usize {
        self.text.lines().count()
    }
}

enum Define<'a> {
    Literal { name: &'a str, value: &'a str },
    Skipped { code: &'static str, reason: String },
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_integer(text: &str) -> Option<i64> {
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let magnitude = if let Some(hex) = digits
        .strip_prefix("0x")
        .or_else(|| digits.strip_prefix("0X"))
    {
        if hex.is_empty() || !hex.chars().all(|c| c.is_ascii_hexdigit()) {
            return None;
        }
        i64::from_str_radix(hex, 16).ok()?
    } else {
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        digits.parse::<i64>().ok()?
    };
    Some(if negative { -magnitude } else { magnitude })
}

fn strip_comment(body: &str) -> &str {
    let cut = [body.find("//"), body.find("/*")]
        .into_iter()
        .flatten()
        .min()
        .unwrap_or(body.len());
    body[..cut].trim()
}

/// Classifies a line. `None` means the line is not a `#define` at all.
fn classify(line: &str) -> Option<Define<'_>> {
    let rest = line.trim_start().strip_prefix('#')?.trim_start();
    let rest = rest.strip_prefix("define")?;
    if !rest.starts_with(|c: char| c.is_whitespace()) {
        return None;
    }
    let rest = rest.trim_start();
    let name_end = rest
        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .unwrap_or(rest.len());
    let name = &rest[..name_end];
    if !is_ident(name) {
        return Some(Define::Skipped {
            code: "non-literal-define",
            reason: "malformed #define".to_string(),
        });
    }
    if rest[name_end..].starts_with('(') {
        return Some(Define::Skipped {
            code: "non-literal-define",
            reason: format!("`{name}` is a function-like macro"),
        });
    }
    let body = strip_comment(&rest[name_end..]);
    match parse_integer(body) {
        Some(v) if i32::try_from(v).is_ok() => Some(Define::Literal { name, value: body }),
        Some(_) => Some(Define::Skipped {
            code: "out-of-range-define",
            reason: format!("`{name}` = {body} does not fit in i32"),
        }),
        None => Some(Define::Skipped {
            code: "non-literal-define",
            reason: format!("`{name}` is not a bare integer literal"),
        }),
    }
}

/// Converts `header_text`; `source_name` only labels warnings.
pub fn convert_defines(header_text: &str, source_name: &str) -> Conversion {
    let mut out = Conversion::default();
    for (idx, line) in header_text.lines().enumerate() {
        match classify(line) {
            None => {}
            Some(Define::Literal { name, value }) => {
                out.text
                    .push_str(&format!("pub const {name}: i32 = {value};\n"));
            }
            Some(Define::Skipped { code, reason }) => {
                let column = line.len() - line.trim_start().len() + 1;
                let span = Span::new(source_name, idx as u32 + 1, column as u32);
                out.warnings.push(Diagnostic::warning(
                    code,
                    &span,
                    format!("{reason}; skipped"),
                ));
            }
        }
    }
    out
}
