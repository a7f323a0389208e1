//! Identifier, type and file-name conventions for generated code.
//!
//! All functions here are pure. The conventions are fixed:
//!
//! | CDL                      | generated                     |
//! |--------------------------|-------------------------------|
//! | signature `sSensor`      | trait `SSensor`, `s_sensor.rs` |
//! | celltype `tSensor`       | struct `TSensor`, `t_sensor.rs`, `t_sensor_impl.rs` |
//! | port / attr `cPowerdown` | field `c_powerdown`           |
//! | entry `eSensor` of `tSensor` | struct `ESensorForTSensor` |
//! | cell `Sensor`            | statics `SENSOR`, `SENSORVAR`, `ESENSORFORSENSOR` |

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::Specifier;

/// A C type name as written in CDL (`int32_t`, `void`, `pbio_port_id_t`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CTypeName(String);

impl CTypeName {
    pub fn new(text: impl Into<String>) -> Self {
        CTypeName(text.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_void(&self) -> bool {
        self.0 == "void"
    }
}

impl fmt::Display for CTypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A var type in underscore encoding, e.g. `Option_Ref_a_mut__pup_device_t__`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MangledTypeName(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NamingError {
    #[error("`{0}` has nothing after its leading marker character")]
    EmptySuffix(String),
    #[error("unrecognized type mangling `{0}`")]
    UnrecognizedMangling(String),
}

/// `sTask_body` -> `STaskBody`: first letter capitalized, underscores
/// dropped with the following letter capitalized.
pub fn upper_camel(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    let mut upper_next = true;
    for c in name.chars() {
        if c == '_' {
            upper_next = true;
        } else if upper_next {
            out.extend(c.to_uppercase());
            upper_next = false;
        } else {
            out.push(c);
        }
    }
    out
}

fn marked_camel(name: &str) -> Result<String, NamingError> {
    if name.chars().count() < 2 {
        return Err(NamingError::EmptySuffix(name.to_string()));
    }
    Ok(upper_camel(name))
}

/// Trait name for a signature: `sSensor` -> `SSensor`.
pub fn contract_name(signature_name: &str) -> Result<String, NamingError> {
    marked_camel(signature_name)
}

/// Struct name for a celltype: `tSensor` -> `TSensor`.
pub fn record_name(celltype_name: &str) -> Result<String, NamingError> {
    marked_camel(celltype_name)
}

/// lowerCamel to snake_case: `cTaskBody` -> `c_task_body`.
///
/// A break is inserted before an uppercase letter that follows a lowercase
/// letter or digit, and before the last capital of an acronym run
/// (`cHTTPServer` -> `c_http_server`).
pub fn snake_case(name: &str) -> String {
    let chars: Vec<char> = name.chars().collect();
    let mut out = String::with_capacity(name.len() + 4);
    for (i, &c) in chars.iter().enumerate() {
        if c.is_uppercase() && i > 0 {
            let prev = chars[i - 1];
            let next_lower = chars.get(i + 1).is_some_and(|n| n.is_lowercase());
            if prev.is_lowercase() || prev.is_ascii_digit() || (prev.is_uppercase() && next_lower) {
                out.push('_');
            }
        }
        out.extend(c.to_lowercase());
    }
    out
}

/// Field name for a port, attribute or variable.
pub fn field_name(port_or_attr_name: &str) -> String {
    snake_case(port_or_attr_name)
}

/// `(eSensor, tSensor)` -> `ESensorForTSensor`.
pub fn entry_impl_name(entry_port: &str, celltype: &str) -> String {
    format!("{}For{}", upper_camel(entry_port), upper_camel(celltype))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticNames {
    pub instance: String,
    pub var_instance: String,
    pub entry_instances: Vec<String>,
}

pub fn static_names<S: AsRef<str>>(cell_name: &str, entry_ports: &[S]) -> StaticNames {
    let instance = cell_name.to_uppercase();
    StaticNames {
        var_instance: format!("{instance}VAR"),
        entry_instances: entry_ports
            .iter()
            .map(|e| entry_static_name(e.as_ref(), cell_name))
            .collect(),
        instance,
    }
}

/// `(ePowerdown2, Powerdown)` -> `EPOWERDOWN2FORPOWERDOWN`.
pub fn entry_static_name(entry_port: &str, cell_name: &str) -> String {
    format!(
        "{}FOR{}",
        entry_port.to_uppercase(),
        cell_name.to_uppercase()
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FileKind {
    Contract,
    Definition,
    Skeleton,
}

pub fn file_stem(name: &str) -> String {
    snake_case(name)
}

pub fn file_name(kind: FileKind, name: &str) -> String {
    let stem = file_stem(name);
    match kind {
        FileKind::Contract | FileKind::Definition => format!("{stem}.rs"),
        FileKind::Skeleton => format!("{stem}_impl.rs"),
    }
}

/// Fixed C-to-Rust scalar table. Names not in the table pass through
/// verbatim; an external binding layer is expected to define them.
pub fn map_base_type(c_type: &str) -> String {
    match c_type {
        "int8_t" => "i8",
        "int16_t" => "i16",
        "int32_t" => "i32",
        "int64_t" => "i64",
        "uint8_t" => "u8",
        "uint16_t" => "u16",
        "uint32_t" => "u32",
        "uint64_t" => "u64",
        "float" => "f32",
        "double" => "f64",
        "void" => "()",
        other => other,
    }
    .to_string()
}

/// Parameter type: `[in]` becomes a shared borrow, `[out]` an exclusive
/// borrow. The borrow consumes the (single) pointer level.
pub fn map_param_type(c_type: &CTypeName, _pointer_depth: u32, specifier: Specifier) -> String {
    let base = map_base_type(c_type.as_str());
    match specifier {
        Specifier::In => format!("&{base}"),
        Specifier::Out => format!("&mut {base}"),
    }
}

const OPTION_PREFIX: &str = "Option_";
const REF_MUT_PREFIX: &str = "Ref_a_mut__";
const REF_SUFFIX: &str = "__";

/// Expands the underscore type encoding used for var declarations:
///
/// * `Option_X` -> `Option<X>`
/// * `Ref_a_mut__X__` -> `&'a mut X`
/// * anything else must be a plain identifier and goes through
///   [`map_base_type`].
pub fn demangle_var_type(mangled: &MangledTypeName) -> Result<String, NamingError> {
    demangle(&mangled.0).ok_or_else(|| NamingError::UnrecognizedMangling(mangled.0.clone()))
}

fn demangle(text: &str) -> Option<String> {
    if let Some(rest) = text.strip_prefix(OPTION_PREFIX) {
        return Some(format!("Option<{}>", demangle(rest)?));
    }
    if let Some(rest) = text.strip_prefix(REF_MUT_PREFIX) {
        let inner = rest.strip_suffix(REF_SUFFIX)?;
        return Some(format!("&'a mut {}", demangle(inner)?));
    }
    let plain = !text.is_empty()
        && !text.contains(REF_SUFFIX)
        && !text.starts_with(|c: char| c.is_ascii_digit())
        && text.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    plain.then(|| map_base_type(text))
}
