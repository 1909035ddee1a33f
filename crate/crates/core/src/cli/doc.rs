//! JSON structure documents: declarations, name resolution and export.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::construct::{direct_sum, AmalgamModule, AmalgamRing, FreeTensor, ProductModule};
use crate::error::Error;
use crate::lab::Caps;
use crate::module::{FiniteModule, ModuleHom, Submodule};
use crate::ring::{Diagnostic, FiniteRing, Ideal};

pub const DOC_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureDoc {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rings: Vec<RingDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ideals: Vec<IdealDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modules: Vec<ModuleDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub submodules: Vec<SubmoduleDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub homs: Vec<HomDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sets: Vec<SetDecl>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingDecl {
    pub name: String,
    #[serde(flatten)]
    pub def: RingDef,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingDef {
    Zmod { n: usize },
    Product { factors: Vec<String> },
    Amalgam { ring: String, ideal: Vec<usize> },
    Tables(RingTables),
}

/// Explicit tables: arrays of rows of element indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingTables {
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealDecl {
    pub name: String,
    pub ring: String,
    pub gens: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleDecl {
    pub name: String,
    #[serde(flatten)]
    pub def: ModuleDef,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleDef {
    RingAsModule { ring: String },
    Quotient { module: String, gens: Vec<usize> },
    Product { factors: Vec<String> },
    DirectSum { parts: Vec<String> },
    FreeTensor { module: String, k: usize },
    Amalgam { module: String, ideal: String },
    Tables(ModuleTables),
}

/// `add` is `|M| × |M|`; `action` has one row per ring element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleTables {
    pub ring: String,
    pub add: Vec<Vec<usize>>,
    pub action: Vec<Vec<usize>>,
    pub zero: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmoduleDecl {
    pub name: String,
    pub module: String,
    pub gens: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    pub gens: Vec<usize>,
    pub images: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetDecl {
    pub name: String,
    pub module: String,
    pub elements: Vec<usize>,
}

/// Why a document could not be loaded.
#[derive(Debug)]
pub enum LoadError {
    /// Malformed JSON or schema, with position when known.
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// A name that does not resolve, a duplicate, or a bad construction argument.
    Reference(String),
    /// Structures that were built but break an axiom.
    Axioms(Vec<String>),
    /// A declared structure is larger than a cap allows.
    TooLarge(String),
}

impl LoadError {
    /// 1 for axiom failures and exceeded caps, 2 for everything the user
    /// must fix in the file.
    pub fn exit_code(&self) -> i32 {
        match self {
            LoadError::Axioms(_) | LoadError::TooLarge(_) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Parse { line, column, message } => {
                write!(f, "parse error at line {line}, column {column}: {message}")
            }
            LoadError::Reference(m) | LoadError::TooLarge(m) => f.write_str(m),
            LoadError::Axioms(d) => f.write_str(&d.join("\n")),
        }
    }
}

impl StructureDoc {
    pub fn parse(text: &str) -> Result<StructureDoc, LoadError> {
        let doc: StructureDoc = serde_json::from_str(text).map_err(|e| LoadError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if doc.schema_version != DOC_SCHEMA_VERSION {
            return Err(LoadError::Parse {
                line: 1,
                column: 1,
                message: format!(
                    "unsupported schema_version {}, expected {DOC_SCHEMA_VERSION}",
                    doc.schema_version
                ),
            });
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize") + "\n"
    }
}

/// A loaded document: every declaration built, resolved and validated.
#[derive(Debug, Default)]
pub struct Workspace {
    pub rings: BTreeMap<String, Arc<FiniteRing>>,
    pub ideals: BTreeMap<String, Ideal>,
    pub modules: BTreeMap<String, Arc<FiniteModule>>,
    pub submodules: BTreeMap<String, Submodule>,
    pub homs: BTreeMap<String, ModuleHom>,
    pub sets: BTreeMap<String, (Arc<FiniteModule>, Bits)>,
    /// Declaration order, for stable output.
    pub ring_order: Vec<String>,
    pub module_order: Vec<String>,
}

fn flatten(rows: &[Vec<usize>], what: &str, name: &str) -> Result<Vec<usize>, LoadError> {
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(LoadError::Reference(format!(
            "{name}: {what} table rows have different lengths"
        )));
    }
    Ok(rows.concat())
}

fn rows(flat: &[usize], width: usize) -> Vec<Vec<usize>> {
    flat.chunks(width).map(<[usize]>::to_vec).collect()
}

fn built<T>(name: &str, r: crate::error::Result<T>) -> Result<T, LoadError> {
    r.map_err(|e| match e {
        crate::Error::TooLarge { .. } => LoadError::TooLarge(format!("{name}: {e}")),
        _ => LoadError::Reference(format!("{name}: {e}")),
    })
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, what: &str, name: &str, owner: &str) -> Result<&'a T, LoadError> {
    map.get(name)
        .ok_or_else(|| LoadError::Reference(format!("{owner}: unknown {what} `{name}`")))
}

fn diagnostics(what: &str, name: &str, diags: Vec<Diagnostic>) -> Vec<String> {
    diags.into_iter().map(|d| format!("{what} {name}: {d}")).collect()
}

impl Workspace {
    /// Builds every declaration in order. Axiom failures of table-declared
    /// structures are collected; anything declared on top of a failing
    /// structure is not built.
    pub fn load(doc: &StructureDoc, caps: &Caps) -> Result<Workspace, LoadError> {
        let mut ws = Workspace::default();
        let mut bad = Vec::new();
        for d in &doc.rings {
            if ws.rings.contains_key(&d.name) {
                return Err(LoadError::Reference(format!("duplicate ring `{}`", d.name)));
            }
            let ring = match &d.def {
                RingDef::Zmod { n } => built(&d.name, FiniteRing::zmod(*n))?.with_label(d.name.clone()),
                RingDef::Product { factors } => {
                    let fs = factors
                        .iter()
                        .map(|f| lookup(&ws.rings, "ring", f, &d.name).map(|r| r.as_ref()))
                        .collect::<Result<Vec<_>, _>>()?;
                    if fs.is_empty() {
                        return Err(LoadError::Reference(format!("{}: empty product", d.name)));
                    }
                    FiniteRing::product_n(&fs).with_label(d.name.clone())
                }
                RingDef::Amalgam { ring, ideal } => {
                    let base = lookup(&ws.rings, "ring", ring, &d.name)?;
                    let i = built(&d.name, Ideal::generated(base, ideal))?;
                    (**AmalgamRing::new(&i).ring()).clone().with_label(d.name.clone())
                }
                RingDef::Tables(t) => {
                    let n = t.add.len();
                    built(
                        &d.name,
                        FiniteRing::from_tables(
                            d.name.clone(),
                            n,
                            flatten(&t.add, "add", &d.name)?,
                            flatten(&t.mul, "mul", &d.name)?,
                            t.zero,
                            t.one,
                            t.names.clone(),
                        ),
                    )?
                }
            };
            if ring.size() > caps.max_ring {
                return Err(LoadError::Reference(format!(
                    "{}: ring of size {} exceeds max_ring {}",
                    d.name,
                    ring.size(),
                    caps.max_ring
                )));
            }
            let diags = ring.validate();
            if !diags.is_empty() {
                bad.extend(diagnostics("ring", &d.name, diags));
                continue;
            }
            ws.ring_order.push(d.name.clone());
            ws.rings.insert(d.name.clone(), Arc::new(ring));
        }
        if !bad.is_empty() {
            return Err(LoadError::Axioms(bad));
        }
        for d in &doc.ideals {
            let ring = lookup(&ws.rings, "ring", &d.ring, &d.name)?;
            let i = built(&d.name, Ideal::generated(ring, &d.gens))?;
            if ws.ideals.insert(d.name.clone(), i).is_some() {
                return Err(LoadError::Reference(format!("duplicate ideal `{}`", d.name)));
            }
        }
        for d in &doc.modules {
            if ws.modules.contains_key(&d.name) {
                return Err(LoadError::Reference(format!("duplicate module `{}`", d.name)));
            }
            let module = ws.build_module(d, caps)?;
            let diags = module.validate();
            if !diags.is_empty() {
                bad.extend(diagnostics("module", &d.name, diags));
                continue;
            }
            ws.module_order.push(d.name.clone());
            ws.modules.insert(d.name.clone(), Arc::new(module));
        }
        if !bad.is_empty() {
            return Err(LoadError::Axioms(bad));
        }
        for d in &doc.submodules {
            let m = lookup(&ws.modules, "module", &d.module, &d.name)?;
            let s = built(&d.name, Submodule::generated(m, &d.gens))?;
            if ws.submodules.insert(d.name.clone(), s).is_some() {
                return Err(LoadError::Reference(format!("duplicate submodule `{}`", d.name)));
            }
        }
        for d in &doc.homs {
            let s = lookup(&ws.modules, "module", &d.source, &d.name)?;
            let t = lookup(&ws.modules, "module", &d.target, &d.name)?;
            match ModuleHom::from_generator_images(Arc::clone(s), Arc::clone(t), &d.gens, &d.images) {
                Ok(h) => {
                    if ws.homs.insert(d.name.clone(), h).is_some() {
                        return Err(LoadError::Reference(format!("duplicate hom `{}`", d.name)));
                    }
                }
                Err(e @ Error::NotHomomorphism(_)) => bad.push(format!("hom {}: {e}", d.name)),
                Err(e) => return Err(LoadError::Reference(format!("{}: {e}", d.name))),
            }
        }
        if !bad.is_empty() {
            return Err(LoadError::Axioms(bad));
        }
        for d in &doc.sets {
            let m = lookup(&ws.modules, "module", &d.module, &d.name)?;
            if let Some(&x) = d.elements.iter().find(|&&x| x >= m.size()) {
                return Err(LoadError::Reference(format!(
                    "{}: element {x} out of range for {}",
                    d.name, d.module
                )));
            }
            let bits = Bits::from_indices(m.size(), d.elements.iter().copied());
            if ws.sets.insert(d.name.clone(), (Arc::clone(m), bits)).is_some() {
                return Err(LoadError::Reference(format!("duplicate set `{}`", d.name)));
            }
        }
        Ok(ws)
    }

    fn build_module(&self, d: &ModuleDecl, caps: &Caps) -> Result<FiniteModule, LoadError> {
        let name = &d.name;
        let module = |m: &str| lookup(&self.modules, "module", m, name);
        let m = match &d.def {
            ModuleDef::RingAsModule { ring } => FiniteModule::ring_as_module(lookup(&self.rings, "ring", ring, name)?),
            ModuleDef::Quotient { module: base, gens } => {
                let b = module(base)?;
                let l = built(name, Submodule::generated(b, gens))?;
                (*built(name, b.quotient(&l))?.0).clone()
            }
            ModuleDef::Product { factors } => {
                let fs = factors
                    .iter()
                    .map(|f| module(f).cloned())
                    .collect::<Result<Vec<_>, _>>()?;
                (**built(name, ProductModule::with_cap(&fs, caps.max_tensor_module))?.module()).clone()
            }
            ModuleDef::DirectSum { parts } => {
                let ps = parts.iter().map(|p| module(p)).collect::<Result<Vec<_>, _>>()?;
                built(name, direct_sum(&ps))?
            }
            ModuleDef::FreeTensor { module: base, k } => {
                let b = module(base)?;
                (**built(name, FreeTensor::with_cap(b, *k, caps.max_tensor_module))?.module()).clone()
            }
            ModuleDef::Amalgam { module: base, ideal } => {
                let b = module(base)?;
                let i = lookup(&self.ideals, "ideal", ideal, name)?;
                (**built(name, AmalgamModule::with_cap(b, i, caps.max_amalgam_module))?.module()).clone()
            }
            ModuleDef::Tables(t) => {
                let ring = lookup(&self.rings, "ring", &t.ring, name)?;
                built(
                    name,
                    FiniteModule::from_tables(
                        name.clone(),
                        Arc::clone(ring),
                        t.add.len(),
                        flatten(&t.add, "add", name)?,
                        flatten(&t.action, "action", name)?,
                        t.zero,
                        t.names.clone(),
                    ),
                )?
            }
        };
        Ok(m.with_label(name.clone()))
    }

    /// Every ring and module as explicit tables, plus the ideals,
    /// submodules, homs and sets by generators or elements.
    pub fn export(&self) -> StructureDoc {
        let rings = self
            .ring_order
            .iter()
            .map(|name| {
                let r = &self.rings[name];
                let n = r.size();
                RingDecl {
                    name: name.clone(),
                    def: RingDef::Tables(RingTables {
                        add: rows(&r.add_table(), n),
                        mul: rows(&r.mul_table(), n),
                        zero: r.zero(),
                        one: r.one(),
                        names: Some(r.names().to_vec()),
                    }),
                }
            })
            .collect();
        // Modules built by constructions carry their own ring; it is exported
        // under a derived name when it is not one of the declared rings.
        let mut extra_rings: Vec<RingDecl> = Vec::new();
        let mut modules = Vec::new();
        for name in &self.module_order {
            let m = &self.modules[name];
            let ring_name = self
                .ring_order
                .iter()
                .find(|r| *self.rings[*r] == **m.ring())
                .cloned()
                .or_else(|| {
                    extra_rings
                        .iter()
                        .find(|d| matches!(&d.def, RingDef::Tables(t) if tables_equal(t, m.ring())))
                        .map(|d| d.name.clone())
                })
                .unwrap_or_else(|| {
                    let r = m.ring();
                    let n = r.size();
                    let fresh = format!("ring of {name}");
                    extra_rings.push(RingDecl {
                        name: fresh.clone(),
                        def: RingDef::Tables(RingTables {
                            add: rows(&r.add_table(), n),
                            mul: rows(&r.mul_table(), n),
                            zero: r.zero(),
                            one: r.one(),
                            names: Some(r.names().to_vec()),
                        }),
                    });
                    fresh
                });
            modules.push(ModuleDecl {
                name: name.clone(),
                def: ModuleDef::Tables(ModuleTables {
                    ring: ring_name,
                    add: rows(&m.add_table(), m.size()),
                    action: rows(&m.action_table(), m.size()),
                    zero: m.zero(),
                    names: Some(m.names().to_vec()),
                }),
            });
        }
        let mut all_rings: Vec<RingDecl> = rings;
        all_rings.extend(extra_rings);
        let ring_name_of = |r: &Arc<FiniteRing>| -> String {
            all_rings
                .iter()
                .find(|d| matches!(&d.def, RingDef::Tables(t) if tables_equal(t, r)))
                .map(|d| d.name.clone())
                .expect("every ring was exported")
        };
        let module_name_of = |m: &Arc<FiniteModule>| -> String {
            self.module_order
                .iter()
                .find(|n| *self.modules[*n] == **m)
                .cloned()
                .expect("every module was exported")
        };
        let ideals = self
            .ideals
            .iter()
            .map(|(name, i)| IdealDecl {
                name: name.clone(),
                ring: ring_name_of(i.ring()),
                gens: i.elements(),
            })
            .collect();
        let submodules = self
            .submodules
            .iter()
            .map(|(name, s)| SubmoduleDecl {
                name: name.clone(),
                module: module_name_of(s.module()),
                gens: s.members().to_vec(),
            })
            .collect();
        let homs = self
            .homs
            .iter()
            .map(|(name, h)| HomDecl {
                name: name.clone(),
                source: module_name_of(h.source()),
                target: module_name_of(h.target()),
                gens: (0..h.source().size()).collect(),
                images: h.map().to_vec(),
            })
            .collect();
        let sets = self
            .sets
            .iter()
            .map(|(name, (m, s))| SetDecl {
                name: name.clone(),
                module: module_name_of(m),
                elements: s.to_vec(),
            })
            .collect();
        StructureDoc {
            schema_version: DOC_SCHEMA_VERSION,
            rings: all_rings,
            ideals,
            modules,
            submodules,
            homs,
            sets,
        }
    }
}

fn tables_equal(t: &RingTables, r: &FiniteRing) -> bool {
    t.add.concat() == r.add_table() && t.mul.concat() == r.mul_table() && t.zero == r.zero() && t.one == r.one()
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = include_str!("../../tests/data/basic.json");

    fn load(text: &str) -> Result<Workspace, LoadError> {
        Workspace::load(&StructureDoc::parse(text)?, &Caps::default())
    }

    #[test]
    fn basic_document_loads() {
        let ws = load(BASIC).unwrap();
        assert_eq!(ws.rings["Z2xZ3"].size(), 6);
        assert_eq!(ws.modules["T"].size(), 2 * 3 * 12);
        assert_eq!(ws.modules["F"].size(), 16);
        assert_eq!(ws.modules["D"].size(), 8);
        assert_eq!(ws.submodules["four"].len(), 2);
        assert_eq!(ws.homs["double"].map()[3], 6);
        assert_eq!(ws.module_order[0], "M4");
    }

    #[test]
    fn export_round_trips() {
        let once = load(BASIC).unwrap().export();
        let again = load(&once.to_json()).unwrap().export();
        assert_eq!(once.to_json(), again.to_json());
        assert_eq!(StructureDoc::parse(&once.to_json()).unwrap(), once);
    }

    #[test]
    fn parse_errors_carry_a_position() {
        let err = StructureDoc::parse("{\n  \"schema_version\": 1,\n  \"rings\": [,]\n}").unwrap_err();
        match &err {
            LoadError::Parse { line, .. } => assert_eq!(*line, 3),
            other => panic!("{other:?}"),
        }
        assert_eq!(err.exit_code(), 2);
        assert!(StructureDoc::parse(r#"{"schema_version": 2}"#).is_err());
        assert!(StructureDoc::parse(r#"{"schema_version": 1, "extra": 0}"#).is_err());
    }

    #[test]
    fn unknown_names_are_reference_errors() {
        let text = r#"{"schema_version": 1,
            "modules": [{"name": "M", "kind": "ring_as_module", "ring": "Z5"}]}"#;
        let err = load(text).unwrap_err();
        assert!(matches!(err, LoadError::Reference(_)), "{err:?}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn broken_tables_are_axiom_failures() {
        // Multiplication by "one" is not the identity.
        let text = r#"{"schema_version": 1, "rings": [{"name": "R", "kind": "tables",
            "add": [[0, 1], [1, 0]], "mul": [[0, 0], [0, 0]], "zero": 0, "one": 1}]}"#;
        let err = load(text).unwrap_err();
        assert!(matches!(err, LoadError::Axioms(_)), "{err:?}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn non_homomorphisms_are_axiom_failures() {
        let text = r#"{"schema_version": 1,
            "rings": [{"name": "Z4", "kind": "zmod", "n": 4}],
            "modules": [{"name": "M", "kind": "ring_as_module", "ring": "Z4"}],
            "homs": [{"name": "h", "source": "M", "target": "M", "gens": [1, 2], "images": [1, 1]}]}"#;
        assert_eq!(load(text).unwrap_err().exit_code(), 1);
    }
}
