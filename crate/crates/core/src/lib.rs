//! Generator from TECS component descriptions (CDL) to Rust.
//!
//! A CDL source goes through these stages:
//!
//! 1. [`frontend::parse_unit`] reads one file into a [`model::CdlUnit`];
//!    [`model::validate_unit`] checks it in isolation.
//! 2. [`linker::resolve`] joins units, resolves every binding and picks the
//!    generator for each celltype.
//! 3. [`linker::plan_emission`] lists the files owed.
//! 4. [`emit::generate`] renders trait, definition, skeleton and RTOS
//!    configuration files.
//!
//! [`driver::compile`] runs all four. [`driver::run`] also reads inputs and
//! writes the output directory.
//!
//! ```
//! use tecs_rustgen::driver::compile;
//! use tecs_rustgen::linker::LinkOptions;
//!
//! let src = r#"
//! signature sLed { void on(void); };
//! [generate(RustGenPlugin, "lib")]
//! celltype tLed { entry sLed eLed; };
//! cell tLed Led { };
//! "#;
//! let out = compile(&[("led.cdl".into(), src.into())], &LinkOptions::default()).unwrap();
//! let paths: Vec<_> = out.files.iter().map(|f| f.path.as_str()).collect();
//! assert_eq!(paths, ["s_led.rs", "t_led.rs", "t_led_impl.rs"]);
//! ```

pub mod diagnostic;
pub mod diagram;
pub mod driver;
pub mod emit;
pub mod frontend;
pub mod header_const;
pub mod linker;
pub mod model;
pub mod naming;
pub mod report;

pub use diagnostic::{Diagnostic, Severity, Span};
pub use driver::{compile, run, Compilation, Options, RunError};
pub use emit::{GeneratedFile, OutputKind, WritePolicy};
pub use linker::{plan_emission, resolve, EmissionPlan, LinkOptions, ResolvedModel};
pub use model::{CdlUnit, Plugin};
