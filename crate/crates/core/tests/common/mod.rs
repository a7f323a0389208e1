//! Fixtures, random model generators and independent oracles shared by the
//! integration tests and the acceptance harness.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use proptest::collection::vec;
use proptest::prelude::*;
use tecs_rustgen::frontend::{parse_unit, render_unit, Keyword};
use tecs_rustgen::model::*;
use tecs_rustgen::naming::CTypeName;
use tecs_rustgen::Span;

pub fn samples_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("samples")
}

pub fn sample(name: &str) -> String {
    std::fs::read_to_string(samples_dir().join(name)).unwrap()
}

// Listings as printed, kept with their one-space margin and two-space
// indentation. `reindent` turns them into the generator's layout.

pub const SIGNATURE_LISTING: &str = r#"
 signature sSensor {
   void set_device_ref( void );
   void get_distance( [out] int32_t* distance );
   void light_on( void );
   void light_set( [in] int32_t bv1, [in] int32_t bv2, [in] int32_t bv3, [in] int32_t bv4 );
   void light_off( void );
 };
"#;

pub const CELLTYPE_LISTING: &str = r#"
 [generate (RustGenPlugin, "lib")]
 celltype tSensor {
   call sPowerdown cPowerdown;
   entry sSensor eSensor;
   attr{
     pbio_port_id_t port = C_EXP("pbio_port_id_t::PBIO_PORT_ID_$port$");
   };
   var {
     Option_Ref_a_mut__pup_device_t__ ult = C_EXP("None");
   };
 };
"#;

pub const CELL_LISTING: &str = r#"
 [generate (RustGenPlugin, "lib")]
 cell tSensor Sensor {
   cPowerdown = Powerdown.ePowerdown2;
   port = C_EXP("pbio_port_id_t::PBIO_PORT_ID_B");
 };
"#;

/// The power-down side the sensor binds to; not part of any listing.
pub const POWERDOWN_CONTEXT: &str = r#"
signature sPowerdown {
    void powerdown( void );
};
[generate(RustGenPlugin, "lib")]
celltype tPowerdown {
    entry sPowerdown ePowerdown2;
};
cell tPowerdown Powerdown {
};
"#;

pub const TRAIT_LISTING: &str = r#"
 pub trait SSensor {
   fn set_device_ref(&self);
   fn get_distance(&self, distance: &mut i32);
   fn light_on(&self);
   fn light_set(&self, bv1: &i32, bv2: &i32, bv3: &i32, bv4: &i32);
   fn light_off(&self);
 }
"#;

pub const DEFINITION_LISTING: &str = r#"
 use spin::Mutex;
 use crate::{s_powerdown::*, t_powerdown::*, s_sensor::*};

 pub struct TSensor<'a, T>
 where
   T: SPowerdown,
 {
   pub c_powerdown: &'a T,
   pub port: pbio_port_id_t,
   pub variable: &'a Mutex<TSensorVar<'a>>,
 }

 pub struct TSensorVar<'a>{
   pub ult: Option<&'a mut pup_ultrasonic_sensor_t>,
 }

 pub struct ESensorForTSensor<'a>{
   pub cell: &'a TSensor<'a, EPowerdown2ForTPowerdown<'a>>,
 }

 pub static SENSOR: TSensor<EPowerdown2ForTPowerdown> = TSensor {
   c_powerdown: &EPOWERDOWN2FORPOWERDOWN,
   port: pbio_port_id_t::PBIO_PORT_ID_B,
   variable: &SENSORVAR,
 };

 pub static SENSORVAR: Mutex<TSensorVar> = Mutex::new(TSensorVar {
   ult: None,
 });

 pub static ESENSORFORSENSOR: ESensorForTSensor = ESensorForTSensor {
   cell: &SENSOR,
 };

 impl<'a, T: SPowerdown> TSensor<'a, T> {
   #[inline]
   pub fn get_cell_ref<'a>(&self) -> (&T, &pbio_port_id_t, &Mutex<TSensorVar<'a>>) {
     (&self.c_powerdown, &self.port, self.variable)
   }
 }
"#;

pub const SKELETON_LISTING: &str = r#"
 use spin::Mutex;
 use crate::{t_sensor::*, s_powerdown::*, s_sensor::*};

 impl SSensor for ESensorForTSensor<'_>{
   #[inline]
   fn set_device_ref(&self) {
     let cell_ref = self.cell.get_cell_ref();
   }
   #[inline]
   fn get_distance(&self, distance: &mut i32) {
     let cell_ref = self.cell.get_cell_ref();
   }
   #[inline]
   fn light_on(&self) {
     let cell_ref = self.cell.get_cell_ref();
   }
   #[inline]
   fn light_set(&self, bv1: &i32, bv2: &i32, bv3: &i32, bv4: &i32) {
     let cell_ref = self.cell.get_cell_ref();
   }
   #[inline]
   fn light_off(&self) {
     let cell_ref = self.cell.get_cell_ref();
   }
 }
"#;

pub const HEADER_LISTING: &str = "
 #define TNUM_TSKID\t1
 #define TSKID_1\t1
 #define TNUM_SEMID\t0
 #define TNUM_DTQID\t0
 #define TNUM_ISRID\t1
 #define ISRID_tISR_SIOPortTarget1_ISRInstance\t1
 #define TNUM_INIRTN\t2
 #define TNUM_TERRTN\t2
";

pub const CONSTANTS_LISTING: &str = "
 pub const TNUM_TSKID: i32 = 1;
 pub const TSKID_1: i32 = 1;
 pub const TNUM_SEMID: i32 = 0;
 pub const TNUM_DTQID: i32 = 0;
 pub const TNUM_ISRID: i32 = 1;
 pub const ISRID_tISR_SIOPortTarget1_ISRInstance: i32 = 1;
 pub const TNUM_INIRTN: i32 = 2;
 pub const TNUM_TERRTN: i32 = 2;
";

/// Drops the leading blank line and the one-space margin, and doubles the
/// leading indentation (two spaces per level become four). Trailing
/// whitespace goes too.
pub fn reindent(listing: &str) -> String {
    let mut out = String::new();
    for line in listing.strip_prefix('\n').unwrap_or(listing).lines() {
        let line = line.strip_prefix(' ').unwrap_or(line).trim_end();
        let indent = line.len() - line.trim_start_matches(' ').len();
        out.push_str(&" ".repeat(indent * 2));
        out.push_str(line.trim_start_matches(' '));
        out.push('\n');
    }
    out
}

/// Strips the margin only, keeping the listing's own indentation.
pub fn unmargin(listing: &str) -> String {
    let mut out = String::new();
    for line in listing.strip_prefix('\n').unwrap_or(listing).lines() {
        out.push_str(line.strip_prefix(' ').unwrap_or(line).trim_end());
        out.push('\n');
    }
    out
}

/// Trailing whitespace per line removed, one final newline.
pub fn normalize(text: &str) -> String {
    let mut out: String = text
        .lines()
        .map(|l| format!("{}\n", l.trim_end()))
        .collect();
    while out.ends_with("\n\n") {
        out.pop();
    }
    out
}

pub fn sensor_sources() -> Vec<(String, String)> {
    vec![
        ("signature.cdl".into(), SIGNATURE_LISTING.into()),
        ("powerdown.cdl".into(), POWERDOWN_CONTEXT.into()),
        ("celltype.cdl".into(), CELLTYPE_LISTING.into()),
        ("cell.cdl".into(), CELL_LISTING.into()),
    ]
}

// ---------------------------------------------------------------------------
// Random units for round-trip testing. These need not resolve.

fn word() -> impl Strategy<Value = String> {
    "[a-z][a-zA-Z0-9_]{0,7}".prop_filter("keyword", |w| {
        Keyword::from_word(w).is_none() && w != "void"
    })
}

fn prefixed(prefix: &'static str) -> impl Strategy<Value = String> {
    "[A-Z][a-zA-Z0-9_]{0,6}".prop_map(move |s| format!("{prefix}{s}"))
}

fn c_type() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("int32_t".to_string()),
        Just("uint8_t".to_string()),
        Just("double".to_string()),
        Just("ER".to_string()),
        Just("pbio_port_id_t".to_string()),
        prefixed("T"),
    ]
}

fn initializer() -> impl Strategy<Value = Initializer> {
    prop_oneof![
        "[ -~\t\n]{0,16}".prop_map(Initializer::c_exp),
        "-?[0-9]{1,5}".prop_map(Initializer::literal),
        "0x[0-9A-F]{1,4}".prop_map(Initializer::literal),
        prefixed("K").prop_map(Initializer::literal),
    ]
}

fn directive() -> impl Strategy<Value = Option<PluginDirective>> {
    let plugin = prop_oneof![
        Just(Plugin::RustGen),
        Just(Plugin::ItronrsGen),
        prefixed("X").prop_map(Plugin::Unknown),
    ];
    proptest::option::of(
        (plugin, "[ -~]{0,8}").prop_map(|(plugin, argument)| PluginDirective {
            plugin,
            argument,
            span: Span::default(),
        }),
    )
}

fn signature() -> impl Strategy<Value = SignatureDef> {
    let param =
        (any::<bool>(), c_type(), 0u32..3, word()).prop_map(|(out, c_type, depth, name)| {
            ParamDecl {
                specifier: if out { Specifier::Out } else { Specifier::In },
                c_type: CTypeName::new(c_type),
                pointer_depth: depth,
                name,
                span: Span::default(),
            }
        });
    let ret = prop_oneof![Just("void".to_string()), c_type()];
    let function = (ret, word(), vec(param, 0..4)).prop_map(|(ret, name, params)| FunctionDecl {
        name,
        return_type: CTypeName::new(ret),
        params,
        span: Span::default(),
    });
    (prefixed("s"), vec(function, 0..4)).prop_map(|(name, functions)| SignatureDef {
        name,
        functions,
        span: Span::default(),
    })
}

fn port(direction: PortDirection) -> impl Strategy<Value = PortDecl> {
    let mods = prop_oneof![
        Just(vec![]),
        Just(vec![Modifier::Inline]),
        Just(vec![Modifier::Omit]),
        Just(vec![Modifier::Inline, Modifier::Omit]),
    ];
    (mods, prefixed("s"), word()).prop_map(move |(modifiers, signature_name, port_name)| PortDecl {
        direction,
        signature_name,
        port_name,
        modifiers,
        span: Span::default(),
    })
}

fn celltype() -> impl Strategy<Value = CelltypeDef> {
    let attr = (
        any::<bool>(),
        c_type(),
        word(),
        proptest::option::of(initializer()),
    )
        .prop_map(|(omit, c_type, name, default)| AttrDecl {
            name,
            c_type: CTypeName::new(c_type),
            default,
            omit,
            span: Span::default(),
        });
    let var = (c_type(), word(), proptest::option::of(initializer())).prop_map(
        |(type_text, name, default)| VarDecl {
            name,
            type_text,
            default,
            span: Span::default(),
        },
    );
    let write = ("[ -~]{0,10}", "[ -~\n]{0,16}", vec(word(), 0..3)).prop_map(
        |(target_file, template, args)| FactoryWrite {
            target_file,
            template,
            args,
            span: Span::default(),
        },
    );
    let block = (any::<bool>(), vec(write, 0..3)).prop_map(|(per_cell, writes)| FactoryBlock {
        scope: if per_cell {
            FactoryScope::PerCell
        } else {
            FactoryScope::PerCelltype
        },
        writes,
        span: Span::default(),
    });
    (
        directive(),
        prefixed("t"),
        vec(port(PortDirection::Call), 0..3),
        vec(port(PortDirection::Entry), 0..3),
        vec(attr, 0..3),
        vec(var, 0..3),
        vec(block, 0..2),
    )
        .prop_map(
            |(generate_directive, name, call_ports, entry_ports, attrs, vars, factory_blocks)| {
                CelltypeDef {
                    name,
                    call_ports,
                    entry_ports,
                    attrs,
                    vars,
                    factory_blocks,
                    generate_directive,
                    span: Span::default(),
                }
            },
        )
}

fn cell() -> impl Strategy<Value = CellDef> {
    let binding =
        (word(), prefixed("C"), word()).prop_map(|(call_port, target_cell, target_entry_port)| {
            Binding {
                call_port,
                target_cell,
                target_entry_port,
                span: Span::default(),
            }
        });
    let init = (word(), initializer()).prop_map(|(name, value)| CellInit {
        name,
        value,
        span: Span::default(),
    });
    (
        directive(),
        prefixed("t"),
        prefixed("C"),
        vec(binding, 0..3),
        vec(init, 0..3),
    )
        .prop_map(
            |(generate_directive, celltype_name, name, bindings, attr_inits)| CellDef {
                name,
                celltype_name,
                bindings,
                attr_inits,
                generate_directive,
                span: Span::default(),
            },
        )
}

pub fn arb_unit() -> impl Strategy<Value = CdlUnit> {
    let item = prop_oneof![
        signature().prop_map(Item::Signature),
        celltype().prop_map(Item::Celltype),
        cell().prop_map(Item::Cell),
    ];
    vec(item, 0..7).prop_map(|items| CdlUnit {
        source_name: "gen.cdl".into(),
        items,
    })
}

// ---------------------------------------------------------------------------
// Random resolvable models for the file-count law.

#[derive(Clone, Debug)]
pub struct RawCelltype {
    /// 0: none, 1: RustGenPlugin, 2: ItronrsGenPlugin.
    directive: u8,
    entries: Vec<usize>,
    calls: Vec<usize>,
    cells: usize,
    directive_on_cell: bool,
    attrs: usize,
}

fn raw_celltype() -> impl Strategy<Value = RawCelltype> {
    (
        0u8..3,
        vec(0usize..8, 0..3),
        vec(0usize..8, 0..3),
        0usize..3,
        any::<bool>(),
        0usize..3,
    )
        .prop_map(
            |(directive, entries, calls, cells, directive_on_cell, attrs)| RawCelltype {
                directive,
                entries,
                calls,
                cells,
                directive_on_cell,
                attrs,
            },
        )
}

fn plugin_directive(code: u8) -> Option<PluginDirective> {
    let plugin = match code {
        1 => Plugin::RustGen,
        2 => Plugin::ItronrsGen,
        _ => return None,
    };
    Some(PluginDirective {
        plugin,
        argument: "lib".into(),
        span: Span::default(),
    })
}

/// Builds CDL text whose model resolves: every call port is bound to the
/// first cell of the first celltype providing that signature, and ports
/// with no provider are left out.
pub fn build_valid_sources(
    n_sigs: usize,
    raw: &[RawCelltype],
    split: usize,
) -> Vec<(String, String)> {
    let sig = |i: usize| format!("sSig{}", i % n_sigs);
    let mut items = Vec::new();
    for i in 0..n_sigs {
        items.push(Item::Signature(SignatureDef {
            name: sig(i),
            functions: (0..=i % 3)
                .map(|k| FunctionDecl {
                    name: format!("op{k}"),
                    return_type: CTypeName::new(if k == 1 { "int32_t" } else { "void" }),
                    params: (0..k)
                        .map(|p| ParamDecl {
                            specifier: if p == 0 {
                                Specifier::In
                            } else {
                                Specifier::Out
                            },
                            c_type: CTypeName::new("int32_t"),
                            pointer_depth: if p == 0 { 0 } else { 1 },
                            name: format!("arg{p}"),
                            span: Span::default(),
                        })
                        .collect(),
                    span: Span::default(),
                })
                .collect(),
            span: Span::default(),
        }));
    }

    // (celltype, entry index) providing each signature, among celltypes
    // that have a cell to bind to.
    let mut providers = vec![None; n_sigs];
    for (j, ct) in raw.iter().enumerate() {
        if ct.cells == 0 {
            continue;
        }
        for (k, &s) in ct.entries.iter().enumerate() {
            let s = s % n_sigs;
            if providers[s].is_none() {
                providers[s] = Some((j, k));
            }
        }
    }

    let mut cells = Vec::new();
    for (j, ct) in raw.iter().enumerate() {
        let calls: Vec<(usize, (usize, usize))> = ct
            .calls
            .iter()
            .filter_map(|&s| providers[s % n_sigs].map(|p| (s % n_sigs, p)))
            .collect();
        let def = CelltypeDef {
            name: format!("tKind{j}"),
            call_ports: calls
                .iter()
                .enumerate()
                .map(|(k, (s, _))| PortDecl {
                    direction: PortDirection::Call,
                    signature_name: sig(*s),
                    port_name: format!("cPort{k}"),
                    modifiers: vec![],
                    span: Span::default(),
                })
                .collect(),
            entry_ports: ct
                .entries
                .iter()
                .enumerate()
                .map(|(k, &s)| PortDecl {
                    direction: PortDirection::Entry,
                    signature_name: sig(s),
                    port_name: format!("ePort{k}"),
                    modifiers: vec![Modifier::Inline],
                    span: Span::default(),
                })
                .collect(),
            attrs: (0..ct.attrs)
                .map(|k| AttrDecl {
                    name: format!("level{k}"),
                    c_type: CTypeName::new("int32_t"),
                    default: Some(Initializer::literal(k.to_string())),
                    omit: k == 2,
                    span: Span::default(),
                })
                .collect(),
            vars: vec![],
            factory_blocks: vec![],
            generate_directive: plugin_directive(ct.directive),
            span: Span::default(),
        };
        items.push(Item::Celltype(def));
        for m in 0..ct.cells {
            let on_cell = ct.directive == 0 && ct.directive_on_cell && m == 0;
            cells.push(Item::Cell(CellDef {
                name: format!("Inst{j}x{m}"),
                celltype_name: format!("tKind{j}"),
                bindings: calls
                    .iter()
                    .enumerate()
                    .map(|(k, (_, (pj, pk)))| Binding {
                        call_port: format!("cPort{k}"),
                        target_cell: format!("Inst{pj}x0"),
                        target_entry_port: format!("ePort{pk}"),
                        span: Span::default(),
                    })
                    .collect(),
                attr_inits: vec![],
                generate_directive: if on_cell { plugin_directive(1) } else { None },
                span: Span::default(),
            }));
        }
    }
    items.extend(cells);

    let split = split.min(items.len());
    let second = items.split_off(split);
    [items, second]
        .into_iter()
        .enumerate()
        .map(|(i, items)| {
            let name = format!("part{i}.cdl");
            let text = render_unit(&CdlUnit {
                source_name: name.clone(),
                items,
            });
            (name, text)
        })
        .collect()
}

pub fn arb_valid_sources() -> impl Strategy<Value = Vec<(String, String)>> {
    (1usize..6, vec(raw_celltype(), 0..6), 0usize..40)
        .prop_map(|(n, raw, split)| build_valid_sources(n, &raw, split))
}

/// Expected `(contracts, definitions, skeletons)` counted straight from
/// the parsed text, without the linker.
pub fn count_expected_files(sources: &[(String, String)]) -> (usize, usize, usize) {
    let units: Vec<CdlUnit> = sources
        .iter()
        .map(|(n, t)| parse_unit(t, n).unit.expect("generated source parses"))
        .collect();
    let celltypes: Vec<&CelltypeDef> = units.iter().flat_map(|u| u.celltypes()).collect();
    let cells: Vec<&CellDef> = units.iter().flat_map(|u| u.cells()).collect();
    let mut signatures = BTreeSet::new();
    let mut definitions = 0;
    let mut skeletons = 0;
    for ct in celltypes {
        let generating = ct.generate_directive.is_some()
            || cells
                .iter()
                .any(|c| c.celltype_name == ct.name && c.generate_directive.is_some());
        if !generating {
            continue;
        }
        definitions += 1;
        if !ct.entry_ports.is_empty() {
            skeletons += 1;
        }
        for p in ct.call_ports.iter().chain(&ct.entry_ports) {
            signatures.insert(p.signature_name.clone());
        }
    }
    (signatures.len(), definitions, skeletons)
}

// ---------------------------------------------------------------------------
// Single-fault variants of the sensor sample.

pub struct FaultCase {
    pub name: &'static str,
    pub code: &'static str,
    pub source: String,
    /// Text on the line the diagnostic must point at.
    pub line_marker: &'static str,
}

fn replaced(src: &str, from: &str, to: &str) -> String {
    assert!(src.contains(from), "sample lacks {from:?}");
    src.replace(from, to)
}

pub fn fault_cases() -> Vec<FaultCase> {
    let base = sample("sensor.cdl");
    vec![
        FaultCase {
            name: "unbound call port",
            code: "unbound-call-port",
            source: replaced(&base, "    cPowerdown = Powerdown.ePowerdown2;\n", ""),
            line_marker: "cell tSensor Sensor",
        },
        FaultCase {
            name: "signature mismatch",
            code: "signature-mismatch",
            source: replaced(
                &replaced(
                    &base,
                    "    entry sPowerdown ePowerdown2;\n",
                    "    entry sPowerdown ePowerdown2;\n    entry sSensor eProbe;\n",
                ),
                "Powerdown.ePowerdown2",
                "Powerdown.eProbe",
            ),
            line_marker: "cPowerdown = Powerdown.eProbe",
        },
        FaultCase {
            name: "out parameter without pointer",
            code: "out-requires-pointer",
            source: replaced(&base, "[out] int32_t* distance", "[out] int32_t distance"),
            line_marker: "get_distance",
        },
        FaultCase {
            name: "unresolved macro",
            code: "unresolved-macro",
            source: replaced(
                &base,
                "port = C_EXP(\"pbio_port_id_t::PBIO_PORT_ID_B\");",
                "port = C_EXP(\"pbio_port_id_t::PBIO_PORT_ID_$side$\");",
            ),
            line_marker: "PBIO_PORT_ID_$side$",
        },
        FaultCase {
            name: "uninitialized attribute",
            code: "uninitialized-attribute",
            source: replaced(
                &replaced(
                    &base,
                    "pbio_port_id_t port = C_EXP(\"pbio_port_id_t::PBIO_PORT_ID_$port$\");",
                    "pbio_port_id_t port;",
                ),
                "    port = C_EXP(\"pbio_port_id_t::PBIO_PORT_ID_B\");\n",
                "",
            ),
            line_marker: "cell tSensor Sensor",
        },
    ]
}

/// 1-based line of the first line containing `marker`.
pub fn line_of(text: &str, marker: &str) -> u32 {
    text.lines()
        .position(|l| l.contains(marker))
        .expect("marker present") as u32
        + 1
}
