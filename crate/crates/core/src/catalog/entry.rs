//! Catalog entries: presentations, representation matrices, characters,
//! named modules and named relative invariants, validated on load.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use super::expr::{parse_poly, parse_scalar, parse_word, Resolver};
use crate::error::{Error, Result};
use crate::gmodule::{GModule, Summand};
use crate::groups::{close_group, validate_character, Character, Elem, FiniteGroup};
use crate::matrix::Matrix;
use crate::poly::SparsePolynomial;
use crate::scalar::{Field, Scalar};

pub const ENTRY_SCHEMA: &str = "sepinv-catalog/1";

const SOURCES: &[(&str, &str)] = &[
    ("18,3", include_str!("../../catalog/entries/18_3.json")),
    ("18,4", include_str!("../../catalog/entries/18_4.json")),
    ("20,3", include_str!("../../catalog/entries/20_3.json")),
    ("24,3", include_str!("../../catalog/entries/24_3.json")),
    ("24,7", include_str!("../../catalog/entries/24_7.json")),
    ("24,8", include_str!("../../catalog/entries/24_8.json")),
    ("24,12", include_str!("../../catalog/entries/24_12.json")),
    ("24,13", include_str!("../../catalog/entries/24_13.json")),
    ("27,3", include_str!("../../catalog/entries/27_3.json")),
    ("27,4", include_str!("../../catalog/entries/27_4.json")),
];

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationData {
    pub label: String,
    pub vars: Vec<String>,
    /// Generator name to matrix rows of scalar expressions.
    pub matrices: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterData {
    pub label: String,
    pub var: String,
    pub values: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleData {
    pub name: String,
    pub summands: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantData {
    pub name: String,
    pub module: String,
    /// Character label; absent means the trivial weight.
    #[serde(default)]
    pub weight: Option<String>,
    pub poly: String,
    /// A helper polynomial that is not itself a relative invariant.
    #[serde(default)]
    pub auxiliary: bool,
}

/// The raw JSON form of an entry.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryData {
    pub schema: String,
    pub gap_id: String,
    pub name: String,
    pub presentation: String,
    pub conductor: u32,
    pub generators: Vec<String>,
    /// Words that must evaluate to the identity.
    pub relations: Vec<String>,
    pub order: usize,
    pub representations: Vec<RepresentationData>,
    pub characters: Vec<CharacterData>,
    pub modules: Vec<ModuleData>,
    #[serde(default)]
    pub invariants: Vec<InvariantData>,
    pub beta: Option<u32>,
    pub beta_sep: Option<u32>,
}

/// A validated entry realized over one field.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub data: EntryData,
    field: Field,
    group: Arc<FiniteGroup>,
    reps: Vec<Summand>,
    chars: Vec<(Character, String)>,
}

/// Accepts `27,3`, `(27,3)`, `27_3` and `SmallGroup(27,3)`.
pub fn normalize_id(id: &str) -> String {
    let s = id.trim().trim_start_matches("SmallGroup").trim_matches(|c| c == '(' || c == ')');
    s.replace(['_', ' '], ",").split(',').filter(|p| !p.is_empty()).collect::<Vec<_>>().join(",")
}

/// Ids of all shipped entries.
pub fn entry_ids() -> Vec<&'static str> {
    SOURCES.iter().map(|(id, _)| *id).collect()
}

pub fn entry_data(id: &str) -> Result<EntryData> {
    let key = normalize_id(id);
    let src = SOURCES
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, s)| *s)
        .ok_or_else(|| Error::UnknownEntry(id.to_string()))?;
    let data: EntryData = serde_json::from_str(src).map_err(|e| Error::Parse(format!("entry {key}: {e}")))?;
    if data.schema != ENTRY_SCHEMA {
        return Err(Error::ValidationFailure(format!("entry {key}: schema `{}`", data.schema)));
    }
    Ok(data)
}

/// Loads an entry over its default cyclotomic field.
pub fn load_entry(id: &str) -> Result<CatalogEntry> {
    let data = entry_data(id)?;
    let field = Field::cyclotomic(data.conductor)?;
    CatalogEntry::from_data(data, field)
}

/// Loads an entry over an explicit field (e.g. `gf:4`).
pub fn load_entry_over(id: &str, field: &Field) -> Result<CatalogEntry> {
    CatalogEntry::from_data(entry_data(id)?, field.clone())
}

struct EntryRefs<'a> {
    entry: &'a CatalogEntry,
    depth: usize,
}

impl Resolver for EntryRefs<'_> {
    fn resolve(&self, name: &str, vars: &[String], field: &Field) -> Result<SparsePolynomial> {
        if self.depth > 16 {
            return Err(Error::Parse(format!("reference cycle through `${name}`")));
        }
        let inv = self
            .entry
            .data
            .invariants
            .iter()
            .find(|i| i.name == name)
            .ok_or_else(|| Error::UnknownEntry(format!("invariant `{name}` in {}", self.entry.data.gap_id)))?;
        parse_poly(&inv.poly, vars, field, &EntryRefs { entry: self.entry, depth: self.depth + 1 })
    }
}

impl CatalogEntry {
    fn from_data(data: EntryData, field: Field) -> Result<CatalogEntry> {
        let fail = |what: String| Error::ValidationFailure(format!("entry {}: {what}", data.gap_id));
        let ngen = data.generators.len();
        let mut gen_mats: Vec<Vec<Matrix>> = Vec::new();
        for rep in &data.representations {
            let mut mats = Vec::with_capacity(ngen);
            for g in &data.generators {
                let rows = rep.matrices.get(g).ok_or_else(|| fail(format!("{} lacks generator {g}", rep.label)))?;
                let rows = rows
                    .iter()
                    .map(|r| r.iter().map(|s| parse_scalar(s, &field)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let m = Matrix::from_rows(rows)?;
                if m.dim() != rep.vars.len() {
                    return Err(fail(format!("{} has {} variables but {}×{} matrices", rep.label, rep.vars.len(), m.dim(), m.dim())));
                }
                mats.push(m);
            }
            gen_mats.push(mats);
        }
        let mut char_vals: Vec<Vec<Scalar>> = Vec::new();
        for c in &data.characters {
            let vals = data
                .generators
                .iter()
                .map(|g| {
                    let s = c.values.get(g).ok_or_else(|| fail(format!("character {} lacks generator {g}", c.label)))?;
                    parse_scalar(s, &field)
                })
                .collect::<Result<Vec<_>>>()?;
            char_vals.push(vals);
        }
        // Close the group under the block sum of every representation.
        let faithful: Vec<Matrix> = (0..ngen)
            .map(|j| {
                let mut blocks: Vec<Matrix> = gen_mats.iter().map(|m| m[j].clone()).collect();
                blocks.extend(char_vals.iter().map(|v| Matrix::scalar(v[j].clone())));
                Matrix::direct_sum(&blocks.iter().collect::<Vec<_>>())
            })
            .collect();
        let group = close_group(&faithful, data.order + 1)
            .map_err(|e| fail(format!("closure: {e}")))?;
        if group.order() != data.order {
            return Err(fail(format!("generated group has order {}, expected {}", group.order(), data.order)));
        }
        for rel in &data.relations {
            let w = parse_word(rel, &data.generators)?;
            if group.eval_word(&w)? != 0 {
                return Err(fail(format!("relation `{rel}` does not hold")));
            }
        }
        let reps = data
            .representations
            .iter()
            .zip(&gen_mats)
            .map(|(r, m)| Summand::matrices(&group, &r.label, r.vars.clone(), m))
            .collect::<Result<Vec<_>>>()?;
        let chars = data
            .characters
            .iter()
            .zip(&char_vals)
            .map(|(c, v)| Ok((validate_character(&group, v, &c.label)?, c.var.clone())))
            .collect::<Result<Vec<_>>>()?;
        let entry = CatalogEntry { data, field, group: Arc::new(group), reps, chars };
        entry.validate_invariants()?;
        Ok(entry)
    }

    fn validate_invariants(&self) -> Result<()> {
        for inv in self.data.invariants.iter().filter(|i| !i.auxiliary) {
            let module = self.module(&inv.module)?;
            let f = self.poly(&inv.poly, &module)?;
            let chi = match &inv.weight {
                Some(w) => Some(self.character(w)?),
                None => None,
            };
            if f.is_zero() || !module.is_relative_invariant(&f, chi.as_ref()) {
                return Err(Error::ValidationFailure(format!(
                    "entry {}: `{}` is not a relative invariant of weight {} on {}",
                    self.data.gap_id,
                    inv.name,
                    inv.weight.as_deref().unwrap_or("1"),
                    inv.module
                )));
            }
        }
        Ok(())
    }

    pub fn id(&self) -> &str {
        &self.data.gap_id
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn characters(&self) -> Vec<Character> {
        self.chars.iter().map(|(c, _)| c.clone()).collect()
    }

    pub fn character(&self, label: &str) -> Result<Character> {
        if label == "1" {
            if let Some((c, _)) = self.chars.iter().find(|(c, _)| c.is_trivial()) {
                return Ok(c.clone());
            }
            return Ok(Character::trivial(&self.group, self.field.one()));
        }
        self.chars
            .iter()
            .find(|(c, _)| c.label == label)
            .map(|(c, _)| c.clone())
            .ok_or_else(|| Error::UnknownEntry(format!("character `{label}` in {}", self.data.gap_id)))
    }

    /// Generator values parsed over this entry's field, for ad hoc characters.
    pub fn generator_values(&self, values: &BTreeMap<String, String>) -> Result<Vec<Scalar>> {
        self.data
            .generators
            .iter()
            .map(|g| {
                let s = values.get(g).ok_or_else(|| Error::Parse(format!("missing value for generator {g}")))?;
                parse_scalar(s, &self.field)
            })
            .collect()
    }

    /// Matrix summand or character summand by label.
    pub fn summand(&self, label: &str) -> Result<Summand> {
        if let Some(s) = self.reps.iter().find(|s| s.label == label) {
            return Ok(s.clone());
        }
        if let Some((c, var)) = self.chars.iter().find(|(c, _)| c.label == label || format!("U{}", c.label) == label) {
            return Ok(Summand::character(&format!("U{}", c.label), var, c.clone()));
        }
        Err(Error::UnknownEntry(format!("summand `{label}` in {}", self.data.gap_id)))
    }

    pub fn module_from_labels(&self, labels: &[String]) -> Result<GModule> {
        let summands = labels.iter().map(|l| self.summand(l)).collect::<Result<Vec<_>>>()?;
        GModule::new(self.group.clone(), self.field.clone(), summands)
    }

    /// A named module, or summand labels joined by `+`.
    pub fn module(&self, name: &str) -> Result<GModule> {
        if let Some(m) = self.data.modules.iter().find(|m| m.name == name) {
            return self.module_from_labels(&m.summands);
        }
        let labels: Vec<String> = name.split('+').map(|s| s.trim().to_string()).collect();
        self.module_from_labels(&labels)
    }

    /// Modules named in the entry.
    pub fn module_names(&self) -> Vec<String> {
        self.data.modules.iter().map(|m| m.name.clone()).collect()
    }

    /// Parses a polynomial in the module's variables; `$name` expands a named invariant.
    pub fn poly(&self, src: &str, module: &GModule) -> Result<SparsePolynomial> {
        parse_poly(src, &module.var_names(), &self.field, &EntryRefs { entry: self, depth: 0 })
    }

    pub fn scalar(&self, src: &str) -> Result<Scalar> {
        parse_scalar(src, &self.field)
    }

    pub fn point(&self, coords: &[String]) -> Result<Vec<Scalar>> {
        coords.iter().map(|s| self.scalar(s)).collect()
    }

    pub fn element(&self, word: &str) -> Result<Elem> {
        self.group.eval_word(&parse_word(word, &self.data.generators)?)
    }

    /// Per-element matrices of a representation, for kernels.
    pub fn representation_kernel(&self, label: &str) -> Result<Vec<Elem>> {
        let s = self.summand(label)?;
        Ok(self.group.elements().filter(|&g| s.matrix(g).is_identity()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_loads() {
        for id in entry_ids() {
            let e = load_entry(id).unwrap_or_else(|err| panic!("{id}: {err}"));
            assert_eq!(e.group().order(), e.data.order);
        }
    }

    #[test]
    fn id_forms() {
        assert_eq!(normalize_id("SmallGroup(27,3)"), "27,3");
        assert_eq!(normalize_id("(24, 12)"), "24,12");
        assert_eq!(normalize_id("24_7"), "24,7");
        assert!(matches!(load_entry("99,1"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn broken_relation_is_rejected() {
        let mut data = entry_data("27,3").unwrap();
        data.relations.push("a".into());
        let f = Field::cyclotomic(3).unwrap();
        assert!(matches!(CatalogEntry::from_data(data, f), Err(Error::ValidationFailure(_))));
    }

    #[test]
    fn non_invariant_is_rejected() {
        let mut data = entry_data("27,3").unwrap();
        data.invariants.push(InvariantData { name: "bad".into(), module: "W".into(), weight: None, poly: "x1".into(), auxiliary: false });
        let f = Field::cyclotomic(3).unwrap();
        assert!(matches!(CatalogEntry::from_data(data, f), Err(Error::ValidationFailure(_))));
    }
}
