//! Declarative theorem scripts: each check names an operation, its arguments
//! and the expected outcome; the runner recomputes and compares.

use std::collections::{BTreeMap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::builtins;
use super::entry::{load_entry, load_entry_over, CatalogEntry};
use super::table::table_row;
use crate::error::{Error, Result};
use crate::gmodule::GModule;
use crate::groups::{stabilizer, validate_character, Automorphism, Character};
use crate::invariants::{
    assemble_vu_generators, dimension_oracle, generator_profile, hilbert_complement_with, is_decomposable,
    project_weight, trivial_character, weight_space_basis, Grade,
};
use crate::scalar::{Field, Scalar};
use crate::separation::{agree_up_to_degree, finite_field_beta_sep, orbits_equal, zero_locus_check, SeparationCertificate};
use crate::zerosum::{davenport, AbelianGroupTable};

pub const THEOREM_SCHEMA: &str = "sepinv-theorem/1";

const SCRIPTS: &[&str] = &[
    include_str!("../../catalog/theorems/thm-C3C3C2.json"),
    include_str!("../../catalog/theorems/thm-A4tilde.json"),
    include_str!("../../catalog/theorems/prop-C6C2C2-mingen.json"),
    include_str!("../../catalog/theorems/thm-C6C2C2.json"),
    include_str!("../../catalog/theorems/thm-S4.json"),
    include_str!("../../catalog/theorems/prop-H27.json"),
    include_str!("../../catalog/theorems/prop-H27-gf4.json"),
    include_str!("../../catalog/theorems/thm-Dic12xC2.json"),
    include_str!("../../catalog/theorems/lemma-A4xC2-stab.json"),
    include_str!("../../catalog/theorems/thm-A4xC2.json"),
    include_str!("../../catalog/theorems/lemma-S3xC3-stab.json"),
    include_str!("../../catalog/theorems/thm-S3xC3.json"),
    include_str!("../../catalog/theorems/prop-C5C4-mingen.json"),
    include_str!("../../catalog/theorems/thm-C5C4.json"),
    include_str!("../../catalog/theorems/lemma-M27-stab.json"),
    include_str!("../../catalog/theorems/lemma-M27-zero-locus.json"),
    include_str!("../../catalog/theorems/thm-M27.json"),
];

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoremScript {
    pub schema: String,
    pub id: String,
    pub entry: String,
    pub title: String,
    /// Citation for steps delegated to results outside the catalog.
    #[serde(default)]
    pub external: Option<String>,
    pub checks: Vec<CheckSpec>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct CheckSpec {
    pub op: String,
    /// Where the expected value comes from: `stated`, `derived` or `definition`.
    #[serde(default = "default_source")]
    pub source: String,
    /// Field override such as `gf:4`.
    #[serde(default)]
    pub field: Option<String>,
    #[serde(flatten)]
    pub args: Map<String, Value>,
}

fn default_source() -> String {
    "stated".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubCheck {
    pub index: usize,
    pub op: String,
    pub source: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub theorem: String,
    pub entry: String,
    pub title: String,
    pub passed: bool,
    pub checks: Vec<SubCheck>,
}

impl CheckReport {
    /// Converts a failed report into `CheckFailure` naming the first failing check.
    pub fn into_result(self) -> Result<CheckReport> {
        match self.checks.iter().find(|c| !c.passed) {
            Some(c) => Err(Error::CheckFailure(format!("{} check {} ({}): {}", self.theorem, c.index, c.op, c.detail))),
            None => Ok(self),
        }
    }
}

pub fn theorem_scripts() -> Result<Vec<TheoremScript>> {
    SCRIPTS
        .iter()
        .map(|src| {
            let s: TheoremScript = serde_json::from_str(src).map_err(|e| Error::Parse(format!("theorem script: {e}")))?;
            if s.schema != THEOREM_SCHEMA {
                return Err(Error::ValidationFailure(format!("{}: schema `{}`", s.id, s.schema)));
            }
            Ok(s)
        })
        .collect()
}

pub fn theorem_ids() -> Result<Vec<String>> {
    Ok(theorem_scripts()?.into_iter().map(|s| s.id).collect())
}

pub fn theorem_script(id: &str) -> Result<TheoremScript> {
    theorem_scripts()?.into_iter().find(|s| s.id == id).ok_or_else(|| Error::UnknownEntry(id.to_string()))
}

/// Runs every check of one script; failures are recorded, not raised.
pub fn run_theorem_check(id: &str) -> Result<CheckReport> {
    run_script(&theorem_script(id)?)
}

/// Runs all scripts in parallel; reports come back in script order.
pub fn run_all() -> Result<Vec<CheckReport>> {
    theorem_scripts()?.par_iter().map(run_script).collect()
}

pub fn run_script(script: &TheoremScript) -> Result<CheckReport> {
    let mut ctx = Ctx { default_id: script.entry.clone(), entries: HashMap::new() };
    let checks: Vec<SubCheck> = script
        .checks
        .iter()
        .enumerate()
        .map(|(index, spec)| {
            let outcome = ctx.run(spec);
            SubCheck {
                index,
                op: spec.op.clone(),
                source: spec.source.clone(),
                passed: outcome.is_ok(),
                detail: outcome.unwrap_or_else(|e| e.to_string()),
            }
        })
        .collect();
    Ok(CheckReport {
        theorem: script.id.clone(),
        entry: script.entry.clone(),
        title: script.title.clone(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

/// Certificates described by a script's `certificate` checks, keyed by name.
pub fn script_certificates(script: &TheoremScript) -> Result<Vec<(String, SeparationCertificate)>> {
    let mut ctx = Ctx { default_id: script.entry.clone(), entries: HashMap::new() };
    let mut out = Vec::new();
    for spec in script.checks.iter().filter(|c| c.op == "certificate") {
        let a = Args(&spec.args);
        let entry = ctx.entry(spec)?;
        let name = a.str("name")?.to_string();
        out.push((name, build_certificate(entry, &a)?));
    }
    Ok(out)
}

struct Ctx {
    default_id: String,
    entries: HashMap<(String, Option<String>), CatalogEntry>,
}

pub(super) fn fail(msg: impl Into<String>) -> Error {
    Error::CheckFailure(msg.into())
}

pub(super) fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<()> {
    if got == want {
        Ok(())
    } else {
        Err(fail(format!("{what}: got {got:?}, expected {want:?}")))
    }
}

/// Typed access to a check's arguments.
pub(super) struct Args<'a>(pub &'a Map<String, Value>);

impl Args<'_> {
    fn get(&self, k: &str) -> Result<&Value> {
        self.0.get(k).ok_or_else(|| Error::Parse(format!("missing argument `{k}`")))
    }

    pub fn str(&self, k: &str) -> Result<&str> {
        self.get(k)?.as_str().ok_or_else(|| Error::Parse(format!("argument `{k}` must be a string")))
    }

    pub fn opt_str(&self, k: &str) -> Option<&str> {
        self.0.get(k).and_then(Value::as_str)
    }

    pub fn u64(&self, k: &str) -> Result<u64> {
        self.get(k)?.as_u64().ok_or_else(|| Error::Parse(format!("argument `{k}` must be a non-negative integer")))
    }

    pub fn opt_u64(&self, k: &str) -> Option<u64> {
        self.0.get(k).and_then(Value::as_u64)
    }

    pub fn bool_or(&self, k: &str, default: bool) -> bool {
        self.0.get(k).and_then(Value::as_bool).unwrap_or(default)
    }

    pub fn strs(&self, k: &str) -> Result<Vec<String>> {
        self.get(k)?
            .as_array()
            .ok_or_else(|| Error::Parse(format!("argument `{k}` must be a list")))?
            .iter()
            .map(|v| v.as_str().map(str::to_string).ok_or_else(|| Error::Parse(format!("argument `{k}` must hold strings"))))
            .collect()
    }

    pub fn points(&self, k: &str) -> Result<Vec<Vec<String>>> {
        self.get(k)?
            .as_array()
            .ok_or_else(|| Error::Parse(format!("argument `{k}` must be a list of points")))?
            .iter()
            .map(|p| {
                p.as_array()
                    .ok_or_else(|| Error::Parse(format!("argument `{k}` must be a list of points")))?
                    .iter()
                    .map(|x| x.as_str().map(str::to_string).ok_or_else(|| Error::Parse("coordinates are strings".into())))
                    .collect()
            })
            .collect()
    }

    pub fn string_map(&self, k: &str) -> Result<BTreeMap<String, String>> {
        self.get(k)?
            .as_object()
            .ok_or_else(|| Error::Parse(format!("argument `{k}` must be an object")))?
            .iter()
            .map(|(a, b)| {
                b.as_str()
                    .map(|b| (a.clone(), b.to_string()))
                    .ok_or_else(|| Error::Parse(format!("argument `{k}` must map to strings")))
            })
            .collect()
    }
}

impl Ctx {
    fn entry(&mut self, spec: &CheckSpec) -> Result<&CatalogEntry> {
        let id = spec.args.get("entry").and_then(Value::as_str).unwrap_or(&self.default_id).to_string();
        let key = (id.clone(), spec.field.clone());
        if !self.entries.contains_key(&key) {
            let e = match &spec.field {
                Some(f) => load_entry_over(&id, &f.parse::<Field>()?)?,
                None => load_entry(&id)?,
            };
            self.entries.insert(key.clone(), e);
        }
        Ok(&self.entries[&key])
    }

    fn run(&mut self, spec: &CheckSpec) -> Result<String> {
        let a = Args(&spec.args);
        let e = self.entry(spec)?;
        match spec.op.as_str() {
            "group_order" => {
                expect_eq("|G|", e.group().order() as u64, a.u64("expect")?)?;
                Ok(format!("|G| = {}", e.group().order()))
            }
            "element_order" => {
                let g = e.element(a.str("element")?)?;
                let n = e.group().element_order(g) as u64;
                expect_eq("element order", n, a.u64("expect")?)?;
                Ok(format!("{} has order {n}", a.str("element")?))
            }
            "kernel_order" => {
                let k = e.representation_kernel(a.str("summand")?)?.len() as u64;
                expect_eq("kernel order", k, a.u64("expect")?)?;
                Ok(format!("|ker {}| = {k}", a.str("summand")?))
            }
            "character_count" => op_character_count(e, &a),
            "character_group" => op_character_group(e, &a),
            "invalid_character" => {
                let vals = e.generator_values(&a.string_map("values")?)?;
                match validate_character(e.group(), &vals, "candidate") {
                    Err(Error::NotAHomomorphism(m)) => Ok(format!("rejected: {m}")),
                    Err(other) => Err(fail(format!("unexpected error {other}"))),
                    Ok(_) => Err(fail("candidate accepted as a character")),
                }
            }
            "automorphism" => {
                let alpha = automorphism(e, &a)?;
                let got = alpha.apply(e.element(a.str("element")?)?);
                expect_eq("α(element)", got, e.element(a.str("expect")?)?)?;
                Ok(format!("α({}) = {}", a.str("element")?, a.str("expect")?))
            }
            "twist" => {
                let alpha = automorphism(e, &a)?;
                let twisted = e.module(a.str("module")?)?.twist_by_automorphism(&alpha)?;
                let target = e.module(a.str("traces_of")?)?;
                if twisted.traces() != target.traces() {
                    return Err(fail("twisted module has different traces"));
                }
                Ok(format!("{}∘α has the traces of {}", a.str("module")?, a.str("traces_of")?))
            }
            "invariant" => {
                let m = e.module(a.str("module")?)?;
                let f = e.poly(a.str("poly")?, &m)?;
                let chi = weight(e, &m, &a)?;
                let got = !f.is_zero() && m.is_relative_invariant(&f, Some(&chi));
                expect_eq("relative invariance", got, a.bool_or("expect", true))?;
                Ok(format!("{} has weight {}: {got}", a.str("poly")?, chi.label))
            }
            "identity" => {
                let m = e.module(a.str("module")?)?;
                let lhs = e.poly(a.str("lhs")?, &m)?;
                let rhs = e.poly(a.str("rhs")?, &m)?;
                if lhs != rhs {
                    return Err(fail(format!("{} ≠ {}", a.str("lhs")?, a.str("rhs")?)));
                }
                Ok(format!("{} = {}", a.str("lhs")?, a.str("rhs")?))
            }
            "evaluate" => {
                let m = e.module(a.str("module")?)?;
                let f = e.poly(a.str("poly")?, &m)?;
                let v = e.point(&a.strs("point")?)?;
                let got = m.evaluate(&f, &v)?;
                expect_eq("value", got.clone(), e.scalar(a.str("expect")?)?)?;
                Ok(format!("value {got}"))
            }
            "act" => {
                let m = e.module(a.str("module")?)?;
                let f = e.poly(a.str("poly")?, &m)?;
                let g = e.element(a.str("element")?)?;
                if m.act(g, &f) != e.poly(a.str("expect")?, &m)? {
                    return Err(fail(format!("{}·f differs from {}", a.str("element")?, a.str("expect")?)));
                }
                Ok(format!("{}·({}) = {}", a.str("element")?, a.str("poly")?, a.str("expect")?))
            }
            "project" => {
                let m = e.module(a.str("module")?)?;
                let f = e.poly(a.str("poly")?, &m)?;
                let chi = weight(e, &m, &a)?;
                if project_weight(&m, &f, &chi)? != e.poly(a.str("expect")?, &m)? {
                    return Err(fail("projection differs"));
                }
                Ok(format!("P_{}({}) = {}", chi.label, a.str("poly")?, a.str("expect")?))
            }
            "dimension" => op_dimension(e, &a),
            "profile" => op_profile(e, &a),
            "complement" => op_complement(e, &a),
            "decomposable" => {
                let m = e.module(a.str("module")?)?;
                let f = e.poly(a.str("poly")?, &m)?;
                let chi = weight(e, &m, &a)?;
                let d = f.degree().ok_or_else(|| fail("zero polynomial"))?;
                let gens = if d > 1 { generator_profile(&m, d - 1)?.representatives } else { Vec::new() };
                let got = is_decomposable(&m, &chi, &f, &gens)?;
                expect_eq("decomposable", got, a.bool_or("expect", true))?;
                Ok(format!("{} decomposable: {got}", a.str("poly")?))
            }
            "assemble" => {
                let m = e.module(a.str("module")?)?;
                let cap = a.u64("cap")? as u32;
                let out = assemble_vu_generators(&m, cap)?;
                if let Some(v) = a.0.get("degrees") {
                    let want: Vec<u32> = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
                    expect_eq("generator degrees", out.degrees(), want)?;
                }
                for (origin, g) in &out.generators {
                    if !m.is_relative_invariant(g, None) {
                        return Err(fail(format!("assembled generator from set {origin} is not invariant")));
                    }
                }
                expect_eq("truncated", out.truncated, a.bool_or("truncated", false))?;
                Ok(format!("degrees {:?}, truncated {}", out.degrees(), out.truncated))
            }
            "certificate" => {
                let cert = build_certificate(e, &a)?;
                let m = e.module_from_labels(&cert.module)?;
                cert.verify(&m).map_err(|err| fail(err.to_string()))?;
                Ok(format!(
                    "agree through degree {} over {} cells, separator values {} vs {}",
                    cert.agree_bound,
                    cert.cells.len(),
                    cert.values[0],
                    cert.values[1]
                ))
            }
            "agree" => {
                let m = e.module(a.str("module")?)?;
                let v = e.point(&a.strs("v")?)?;
                let w = e.point(&a.strs("v2")?)?;
                let d = a.u64("degree")? as u32;
                let ag = agree_up_to_degree(&m, &v, &w, d)?;
                expect_eq("agreement", ag.agree, a.bool_or("expect", true))?;
                match ag.separator {
                    Some(s) => Ok(format!("separated in degree {}", s.poly.degree().unwrap_or(0))),
                    None => Ok(format!("agree through degree {d}")),
                }
            }
            "orbits_equal" => {
                let m = e.module(a.str("module")?)?;
                let v = e.point(&a.strs("v")?)?;
                let w = e.point(&a.strs("v2")?)?;
                if let Some(word) = a.opt_str("element") {
                    if m.act_on_point(e.element(word)?, &v) != w {
                        return Err(fail(format!("{word} does not move v to v2")));
                    }
                }
                let got = orbits_equal(&m, &v, &w)?;
                expect_eq("same orbit", got, a.bool_or("expect", true))?;
                Ok(format!("same orbit: {got}"))
            }
            "stabilizer" => {
                let m = e.module(a.str("module")?)?;
                let v = e.point(&a.strs("point")?)?;
                let stab = stabilizer(&m, &v)?;
                expect_eq("stabilizer order", stab.len() as u64, a.u64("order")?)?;
                if let Ok(words) = a.strs("generated_by") {
                    let gens = words.iter().map(|w| e.element(w)).collect::<Result<Vec<_>>>()?;
                    expect_eq("stabilizer", stab.clone(), e.group().subgroup_generated(&gens))?;
                }
                Ok(format!("|Stab| = {}", stab.len()))
            }
            "davenport" => {
                let t = AbelianGroupTable::parse(a.str("group")?)?;
                let d = davenport(&t)? as u64;
                expect_eq("Davenport constant", d, a.u64("expect")?)?;
                Ok(format!("D({}) = {d}", a.str("group")?))
            }
            "ff_beta_sep" => {
                let m = e.module(a.str("module")?)?;
                let res = finite_field_beta_sep(&m, a.u64("d_max")? as u32)?;
                expect_eq("separating degree", res.beta_sep.map(u64::from), Some(a.u64("expect")?))?;
                Ok(format!("{} points, {} orbits, classes by degree {:?}", res.points, res.orbits, res.classes_by_degree))
            }
            "zero_locus" => op_zero_locus(e, &a),
            "zero_locus_all" => op_zero_locus_all(e, &a),
            "table_row" => {
                let row = table_row(e.id())?;
                expect_eq("β", Some(row.beta), e.data.beta)?;
                expect_eq("β_sep", Some(row.beta_sep), e.data.beta_sep)?;
                expect_eq("status", row.status.as_str(), "catalog")?;
                Ok(format!("β = {}, β_sep = {}", row.beta, row.beta_sep))
            }
            "builtin" => builtins::run(e, a.str("name")?, &a),
            other => Err(Error::Parse(format!("unknown check operation `{other}`"))),
        }
    }
}

pub(super) fn weight(e: &CatalogEntry, m: &GModule, a: &Args) -> Result<Character> {
    match a.opt_str("weight") {
        Some(w) => e.character(w),
        None => Ok(trivial_character(m)),
    }
}

fn automorphism(e: &CatalogEntry, a: &Args) -> Result<Automorphism> {
    let images = a.string_map("images")?;
    let elems = e
        .data
        .generators
        .iter()
        .map(|g| e.element(images.get(g).ok_or_else(|| Error::Parse(format!("no image for {g}")))?))
        .collect::<Result<Vec<_>>>()?;
    Automorphism::new(e.group(), &elems)
}

fn op_character_count(e: &CatalogEntry, a: &Args) -> Result<String> {
    let chars = e.characters();
    let n = a.u64("expect")?;
    expect_eq("character count", chars.len() as u64, n)?;
    for (i, c) in chars.iter().enumerate() {
        if chars[..i].iter().any(|d| d.same_values(c)) {
            return Err(fail(format!("character {} is listed twice", c.label)));
        }
    }
    let (table, _) = AbelianGroupTable::from_characters(&chars, e.field().one())?;
    expect_eq("closure under products", table.order() as u64, n)?;
    Ok(format!("{n} distinct characters closed under products"))
}

fn op_character_group(e: &CatalogEntry, a: &Args) -> Result<String> {
    let (table, _) = AbelianGroupTable::from_characters(&e.characters(), e.field().one())?;
    let order_of = |x: usize| {
        let mut y = x;
        let mut k = 1;
        while y != table.identity() {
            y = table.op(y, x);
            k += 1;
        }
        k as u64
    };
    let exponent = (0..table.order()).map(order_of).max().unwrap_or(1);
    expect_eq("character group order", table.order() as u64, a.u64("order")?)?;
    expect_eq("largest element order", exponent, a.u64("max_element_order")?)?;
    Ok(format!("order {}, an element of order {exponent}", table.order()))
}

fn op_dimension(e: &CatalogEntry, a: &Args) -> Result<String> {
    let m = e.module(a.str("module")?)?;
    let chi = weight(e, &m, a)?;
    let grade = Grade::Total(a.u64("degree")? as u32);
    let dim = weight_space_basis(&m, &grade, &chi)?.dim();
    expect_eq("dimension", dim as u64, a.u64("expect")?)?;
    if e.field().characteristic() == 0 {
        expect_eq("dimension oracle", dimension_oracle(&m, &grade, &chi)?, dim)?;
    }
    Ok(format!("dim = {dim}"))
}

fn op_profile(e: &CatalogEntry, a: &Args) -> Result<String> {
    let m = e.module(a.str("module")?)?;
    let cap = a.u64("cap")? as u32;
    let profile = match generator_profile(&m, cap) {
        Err(Error::SizeGuardExceeded { count, limit }) if a.bool_or("best_effort", false) => {
            return Ok(format!("best effort: size guard hit ({count} > {limit} monomials), not evaluated"));
        }
        other => other?,
    };
    if let Some(v) = a.0.get("counts") {
        let want: BTreeMap<u32, usize> = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        expect_eq("generator counts", profile.counts.clone(), want)?;
    }
    if let Some(d) = a.opt_u64("max_degree") {
        expect_eq("largest generator degree", profile.max_degree().map(u64::from), Some(d))?;
    }
    for d in a.strs("present").unwrap_or_default() {
        let d: u32 = d.parse().map_err(|_| Error::Parse("degree".into()))?;
        if !profile.counts.contains_key(&d) {
            return Err(fail(format!("no generator in degree {d}")));
        }
    }
    for d in a.strs("absent").unwrap_or_default() {
        let d: u32 = d.parse().map_err(|_| Error::Parse("degree".into()))?;
        if profile.counts.contains_key(&d) {
            return Err(fail(format!("unexpected generators in degree {d}")));
        }
    }
    Ok(format!("generator counts {:?} up to degree {cap}", profile.counts))
}

fn op_complement(e: &CatalogEntry, a: &Args) -> Result<String> {
    let m = e.module(a.str("module")?)?;
    let chi = weight(e, &m, a)?;
    let d = a.u64("degree")? as u32;
    let gens = if d > 0 { generator_profile(&m, d)?.representatives } else { Vec::new() };
    let comp = hilbert_complement_with(&m, &chi, d, &gens)?;
    expect_eq("complement dimension", comp.dim() as u64, a.u64("dim")?)?;
    if let Some(src) = a.opt_str("representative") {
        let f = e.poly(src, &m)?;
        if f.degree() != Some(d) || !f.is_homogeneous() || !m.is_relative_invariant(&f, Some(&chi)) {
            return Err(fail(format!("{src} is not a degree-{d} relative invariant of weight {}", chi.label)));
        }
        if is_decomposable(&m, &chi, &f, &gens)? {
            return Err(fail(format!("{src} lies in the decomposable part")));
        }
    }
    Ok(format!("complement of dimension {} in degree {d}", comp.dim()))
}

fn build_certificate(e: &CatalogEntry, a: &Args) -> Result<SeparationCertificate> {
    let m = e.module(a.str("module")?)?;
    let v = e.point(&a.strs("v")?)?;
    let w = e.point(&a.strs("v2")?)?;
    let sep = e.poly(a.str("separator")?, &m)?;
    let cert = SeparationCertificate::build(e.id(), &m, &v, &w, a.u64("agree_bound")? as u32, Some(&sep))?;
    let want = e.point(&a.strs("values")?)?;
    expect_eq("separator values", cert.values.to_vec(), want)?;
    Ok(cert)
}

pub(super) fn sample_points(rng: &mut ChaCha8Rng, field: &Field, n: usize, count: usize, range: i64) -> Vec<Vec<Scalar>> {
    use rand::Rng;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p: Vec<i64> = (0..n).map(|_| rng.gen_range(-range..=range)).collect();
        if p.iter().any(|&x| x != 0) {
            out.push(p.into_iter().map(|x| field.int(x)).collect());
        }
    }
    out
}

fn op_zero_locus(e: &CatalogEntry, a: &Args) -> Result<String> {
    let m = e.module(a.str("module")?)?;
    let chi = weight(e, &m, a)?;
    let bound = a.u64("bound")? as u32;
    let mut points = match a.points("points") {
        Ok(ps) => ps.iter().map(|p| e.point(p)).collect::<Result<Vec<_>>>()?,
        Err(_) => Vec::new(),
    };
    if let Some(count) = a.opt_u64("random") {
        let mut rng = ChaCha8Rng::seed_from_u64(a.opt_u64("seed").unwrap_or(7));
        points.extend(sample_points(&mut rng, e.field(), m.dim(), count as usize, a.opt_u64("range").unwrap_or(3) as i64));
    }
    let report = zero_locus_check(&m, &chi, bound, &points)?;
    if let Some(want) = a.0.get("all_vanish").and_then(Value::as_bool) {
        if let Some(i) = report.rows.iter().position(|r| r.all_vanish != want) {
            return Err(fail(format!("point {i}: all weight-{} invariants vanish = {}", chi.label, !want)));
        }
    }
    let outside = report.rows.iter().filter(|r| r.stabilizer_outside_kernel).count();
    Ok(format!("{} points, {outside} with stabilizer outside the kernel, {} bound-limited", points.len(), report.bound_limited))
}

fn op_zero_locus_all(e: &CatalogEntry, a: &Args) -> Result<String> {
    let bound = a.u64("bound")? as u32;
    let max_vars = a.u64("max_vars")? as usize;
    let count = a.u64("random")? as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(a.opt_u64("seed").unwrap_or(11));
    let mut total = 0;
    let mut outside = 0;
    for name in e.module_names() {
        let m = e.module(&name)?;
        if m.dim() > max_vars {
            continue;
        }
        let mut points = structured_points(e.field(), &m);
        points.extend(sample_points(&mut rng, e.field(), m.dim(), count, 2));
        for chi in e.characters() {
            let report = zero_locus_check(&m, &chi, bound, &points).map_err(|err| fail(format!("{name}: {err}")))?;
            total += report.rows.len();
            outside += report.rows.iter().filter(|r| r.stabilizer_outside_kernel).count();
        }
    }
    Ok(format!("{total} (point, weight) pairs, {outside} with stabilizer outside the kernel"))
}

/// Coordinate vectors, all-ones vectors and roots-of-unity patterns per summand;
/// these tend to have large stabilizers.
pub(super) fn structured_points(field: &Field, m: &GModule) -> Vec<Vec<Scalar>> {
    let n = m.dim();
    let mut pts = Vec::new();
    for i in 0..n {
        let mut v = vec![field.zero(); n];
        v[i] = field.one();
        pts.push(v);
    }
    let off = m.offsets();
    for s in 0..off.len() - 1 {
        let mut v = vec![field.zero(); n];
        for x in &mut v[off[s]..off[s + 1]] {
            *x = field.one();
        }
        pts.push(v);
    }
    pts.push(vec![field.one(); n]);
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scripts_parse_and_reference_entries() {
        let scripts = theorem_scripts().unwrap();
        assert!(scripts.len() >= 10);
        for s in &scripts {
            assert!(load_entry(&s.entry).is_ok(), "{}", s.id);
        }
        assert!(matches!(theorem_script("nope"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn failing_expectation_is_reported() {
        let mut s = theorem_script("prop-H27").unwrap();
        s.checks.truncate(0);
        let spec: CheckSpec = serde_json::from_value(serde_json::json!({"op": "group_order", "expect": 28})).unwrap();
        s.checks.push(spec);
        let report = run_script(&s).unwrap();
        assert!(!report.passed);
        assert!(matches!(report.into_result(), Err(Error::CheckFailure(_))));
    }
}
