//! Snippet templates for generated Rust. Holes are written `@name@`.

pub const CONTRACT: &str = "pub trait @name@ {\n@methods@}\n";
pub const CONTRACT_METHOD: &str = "    fn @name@(&self@params@)@ret@;\n";

pub const USE_MUTEX: &str = "use spin::Mutex;\n";
pub const USE_CRATE: &str = "use crate::{@modules@};\n";

pub const RECORD: &str = "pub struct @name@@generics@{\n@fields@}\n";
pub const RECORD_WHERE: &str = "pub struct @name@@generics@\nwhere\n@bounds@{\n@fields@}\n";
pub const BOUND: &str = "    @param@: @contract@,\n";
pub const FIELD: &str = "    pub @name@: @ty@,\n";

pub const STATIC: &str = "pub static @name@: @ty@ = @ctor@ {\n@fields@};\n";
pub const STATIC_MUTEX: &str =
    "pub static @name@: Mutex<@ty@> = Mutex::new(@ctor@ {\n@fields@});\n";
pub const FIELD_INIT: &str = "    @name@: @value@,\n";

pub const ACCESSOR: &str = "impl@impl_generics@ @self_ty@ {
    #[inline]
    pub fn get_cell_ref@fn_generics@(&self) -> @tuple_ty@ {
        @tuple@
    }
}
";

pub const SKELETON_IMPL: &str = "impl@impl_generics@ @contract@ for @entry@{\n@methods@}\n";
pub const SKELETON_METHOD: &str = "    #[inline]
    fn @name@(&self@params@)@ret@ {
        let cell_ref = self.cell.get_cell_ref();
    }
";

pub const KERNEL_PREAMBLE: &str =
    "use crate::kernel_cfg::*;\nuse itron::abi::*;\nuse itron::TaskRef::*;\n";

/// Replaces each `@hole@` in `template` with its value.
///
/// Panics on a hole without a value; templates are fixed at compile time so
/// that is a programming error.
pub fn fill(template: &str, holes: &[(&str, &str)]) -> String {
    let mut out = String::with_capacity(template.len() * 2);
    let mut rest = template;
    while let Some(start) = rest.find('@') {
        out.push_str(&rest[..start]);
        let after = &rest[start + 1..];
        let end = after
            .find('@')
            .unwrap_or_else(|| panic!("unterminated hole in template {template:?}"));
        let name = &after[..end];
        let value = holes
            .iter()
            .find(|(k, _)| *k == name)
            .unwrap_or_else(|| panic!("no value for hole `{name}`"))
            .1;
        out.push_str(value);
        rest = &after[end + 1..];
    }
    out.push_str(rest);
    out
}
