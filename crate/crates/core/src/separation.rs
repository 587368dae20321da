//! Orbits, degree-bounded agreement of invariants, zero-locus checks,
//! exhaustive separating degrees over finite fields and separation
//! certificates.

use std::collections::{HashMap, HashSet};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gmodule::GModule;
use crate::groups::{stabilizer, Character};
use crate::invariants::{cell_echelon, trivial_character, weight_space_basis, Grade};
use crate::poly::SparsePolynomial;
use crate::scalar::Scalar;

pub const CERTIFICATE_SCHEMA: &str = "sepinv-certificate/1";
pub const MAX_FINITE_POINTS: u64 = 1_000_000;

/// G·v in order of first discovery along the element list.
pub fn orbit(module: &GModule, v: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
    module.check_point(v)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in module.group().elements() {
        let w = module.act_on_point(g, v);
        if seen.insert(w.clone()) {
            out.push(w);
        }
    }
    Ok(out)
}

pub fn orbits_equal(module: &GModule, v: &[Scalar], w: &[Scalar]) -> Result<bool> {
    module.check_point(w)?;
    Ok(orbit(module, v)?.iter().any(|x| x.as_slice() == w))
}

/// Agreement evidence for one multidegree cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellEvidence {
    pub multidegree: Vec<u32>,
    pub dim: usize,
    pub checksum: String,
    /// Common value of each basis element at both points.
    pub values: Vec<Scalar>,
}

/// An invariant with different values at the two points.
#[derive(Clone, Debug, PartialEq)]
pub struct Separator {
    pub poly: SparsePolynomial,
    pub values: [Scalar; 2],
}

#[derive(Clone, Debug)]
pub struct Agreement {
    pub agree: bool,
    pub cells: Vec<CellEvidence>,
    pub separator: Option<Separator>,
}

/// Hex SHA-256 of the canonical JSON of a cell basis.
pub fn basis_checksum(basis: &[SparsePolynomial]) -> String {
    let json = Value::Array(basis.iter().map(SparsePolynomial::to_json).collect());
    hex::encode(Sha256::digest(json.to_string().as_bytes()))
}

/// Compares all invariants of degree 1..=d at v and w, cell by cell in
/// degree then multidegree order; stops at the first separating basis element.
pub fn agree_up_to_degree(module: &GModule, v: &[Scalar], w: &[Scalar], d: u32) -> Result<Agreement> {
    if d == 0 {
        return Err(Error::ValidationFailure("agreement degree must be at least 1".into()));
    }
    module.check_point(v)?;
    module.check_point(w)?;
    let chi = trivial_character(module);
    let mut cells = Vec::new();
    for deg in 1..=d {
        for alpha in module.multidegrees_of_degree(deg) {
            let basis = cell_echelon(module, &alpha, &chi)?.basis();
            let mut values = Vec::with_capacity(basis.len());
            for f in &basis {
                let (a, b) = (module.evaluate(f, v)?, module.evaluate(f, w)?);
                if a != b {
                    let separator = Separator { poly: f.clone(), values: [a, b] };
                    return Ok(Agreement { agree: false, cells, separator: Some(separator) });
                }
                values.push(a);
            }
            cells.push(CellEvidence { checksum: basis_checksum(&basis), dim: basis.len(), multidegree: alpha, values });
        }
    }
    Ok(Agreement { agree: true, cells, separator: None })
}

/// Per-point outcome of a zero-locus check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroLocusRow {
    pub stabilizer_order: usize,
    /// Stab(v) is not contained in ker χ.
    pub stabilizer_outside_kernel: bool,
    /// Every weight-χ basis element of degree 1..=bound vanishes at v.
    pub all_vanish: bool,
}

#[derive(Clone, Debug)]
pub struct ZeroLocusReport {
    pub rows: Vec<ZeroLocusRow>,
    /// Points where everything vanishes though the stabilizer lies in ker χ;
    /// such points only witness the degree bound.
    pub bound_limited: usize,
}

/// Checks that Stab(v) ⊄ ker χ forces every weight-χ relative invariant of
/// degree ≤ bound to vanish at v, failing on the first counterexample.
pub fn zero_locus_check(module: &GModule, chi: &Character, bound: u32, points: &[Vec<Scalar>]) -> Result<ZeroLocusReport> {
    let mut basis = Vec::new();
    for d in 1..=bound {
        basis.extend(weight_space_basis(module, &Grade::Total(d), chi)?.basis);
    }
    let kernel: HashSet<usize> = chi.kernel().into_iter().collect();
    let mut rows = Vec::with_capacity(points.len());
    let mut bound_limited = 0;
    for (i, v) in points.iter().enumerate() {
        let stab = stabilizer(module, v)?;
        let outside = stab.iter().any(|g| !kernel.contains(g));
        let mut all_vanish = true;
        for f in &basis {
            if !module.evaluate(f, v)?.is_zero() {
                all_vanish = false;
                break;
            }
        }
        if outside && !all_vanish {
            return Err(Error::CheckFailure(format!(
                "point {i}: stabilizer of order {} leaves ker {} but a weight invariant is nonzero",
                stab.len(),
                chi.label
            )));
        }
        if all_vanish && !outside {
            bound_limited += 1;
        }
        rows.push(ZeroLocusRow { stabilizer_order: stab.len(), stabilizer_outside_kernel: outside, all_vanish });
    }
    Ok(ZeroLocusReport { rows, bound_limited })
}

/// Outcome of the exhaustive separating-degree search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSeparation {
    pub points: usize,
    pub orbits: usize,
    /// Number of classes of points not separated by invariants of degree ≤ d,
    /// for d = 1, 2, ...
    pub classes_by_degree: Vec<usize>,
    /// Least d whose invariants separate all orbits, if at most d_max.
    pub beta_sep: Option<u32>,
}

/// Least d such that invariant functions of degree ≤ d on the finite space V
/// separate all orbits, found by refining the point partition degree by degree.
pub fn finite_field_beta_sep(module: &GModule, d_max: u32) -> Result<FiniteSeparation> {
    let elems = module
        .field()
        .elements()
        .ok_or_else(|| Error::Unsupported("exhaustive search needs a finite field".into()))?;
    let q = elems.len() as u64;
    let n = module.dim();
    let count = q.checked_pow(n as u32).filter(|&c| c <= MAX_FINITE_POINTS).ok_or(Error::SizeGuard(usize::MAX))?;
    crate::invariants::inverse_order(module)?;
    let index: HashMap<Scalar, usize> = elems.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let points: Vec<Vec<Scalar>> = (0..count)
        .map(|mut x| {
            (0..n)
                .map(|_| {
                    let s = elems[(x % q) as usize].clone();
                    x /= q;
                    s
                })
                .collect()
        })
        .collect();
    let encode = |v: &[Scalar]| v.iter().rev().fold(0usize, |acc, s| acc * q as usize + index[s]);
    let mut orbit_of = vec![usize::MAX; points.len()];
    let mut orbits = 0;
    for i in 0..points.len() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        for g in module.group().elements() {
            orbit_of[encode(&module.act_on_point(g, &points[i]))] = orbits;
        }
        orbits += 1;
    }
    let mut class = vec![0usize; points.len()];
    let mut classes_by_degree = Vec::new();
    let chi = trivial_character(module);
    let mut beta_sep = None;
    for d in 1..=d_max {
        for alpha in module.multidegrees_of_degree(d) {
            for f in cell_echelon(module, &alpha, &chi)?.basis() {
                let mut relabel: HashMap<(usize, usize), usize> = HashMap::new();
                for (i, p) in points.iter().enumerate() {
                    let val = index[&module.evaluate(&f, p)?];
                    let next = relabel.len();
                    class[i] = *relabel.entry((class[i], val)).or_insert(next);
                }
            }
        }
        let classes = class.iter().collect::<HashSet<_>>().len();
        classes_by_degree.push(classes);
        // Invariants are constant on orbits, so classes are unions of orbits.
        if classes == orbits {
            beta_sep = Some(d);
            break;
        }
    }
    Ok(FiniteSeparation { points: points.len(), orbits, classes_by_degree, beta_sep })
}

/// Witness-pair certificate: the points have distinct orbits, every invariant
/// of degree ≤ agree_bound agrees on them, and the separator tells them apart.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparationCertificate {
    pub group: String,
    pub module: Vec<String>,
    pub field: String,
    pub v: Vec<Scalar>,
    pub v2: Vec<Scalar>,
    pub agree_bound: u32,
    pub orbit_size: usize,
    pub cells: Vec<CellEvidence>,
    pub separator: SparsePolynomial,
    pub values: [Scalar; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("the two points lie in one orbit")]
    OrbitsEqual,
    #[error("orbit size {got} recorded as {expected}")]
    OrbitSize { expected: usize, got: usize },
    #[error("cell list does not match the multidegrees up to the agreement bound")]
    CellLayout,
    #[error("dimension mismatch in cell {multidegree:?}: recorded {expected}, recomputed {got}")]
    DimensionMismatch { multidegree: Vec<u32>, expected: usize, got: usize },
    #[error("basis checksum mismatch in cell {multidegree:?}")]
    ChecksumMismatch { multidegree: Vec<u32> },
    #[error("evaluation mismatch in cell {multidegree:?}, basis element {index}")]
    EvaluationMismatch { multidegree: Vec<u32>, index: usize },
    #[error("separator is not an invariant")]
    InvarianceFailure,
    #[error("separator must be homogeneous of degree {0}")]
    SeparatorDegree(u32),
    #[error("separator values are wrong or equal")]
    SeparatorValues,
    #[error("{0}")]
    Engine(#[from] Error),
}

impl SeparationCertificate {
    /// Builds a certificate; with no separator given, the first separating
    /// basis element of degree agree_bound + 1 is used.
    pub fn build(
        group: &str,
        module: &GModule,
        v: &[Scalar],
        v2: &[Scalar],
        agree_bound: u32,
        separator: Option<&SparsePolynomial>,
    ) -> Result<SeparationCertificate> {
        if orbits_equal(module, v, v2)? {
            return Err(Error::CheckFailure("witness points share an orbit".into()));
        }
        let agreement = agree_up_to_degree(module, v, v2, agree_bound)?;
        if let Some(s) = agreement.separator {
            return Err(Error::CheckFailure(format!(
                "invariants of degree {} already separate",
                s.poly.degree().unwrap_or(0)
            )));
        }
        let separator = match separator {
            Some(f) => f.clone(),
            None => {
                let next = agree_up_to_degree(module, v, v2, agree_bound + 1)?;
                next.separator
                    .ok_or_else(|| Error::CheckFailure(format!("no separator in degree {}", agree_bound + 1)))?
                    .poly
            }
        };
        let values = [module.evaluate(&separator, v)?, module.evaluate(&separator, v2)?];
        Ok(SeparationCertificate {
            group: group.to_string(),
            module: module.labels(),
            field: module.field().to_string(),
            v: v.to_vec(),
            v2: v2.to_vec(),
            agree_bound,
            orbit_size: orbit(module, v)?.len(),
            cells: agreement.cells,
            separator,
            values,
        })
    }

    /// Recomputes every recorded quantity against the module.
    pub fn verify(&self, module: &GModule) -> std::result::Result<(), CertificateError> {
        if orbits_equal(module, &self.v, &self.v2)? {
            return Err(CertificateError::OrbitsEqual);
        }
        let size = orbit(module, &self.v)?.len();
        if size != self.orbit_size {
            return Err(CertificateError::OrbitSize { expected: self.orbit_size, got: size });
        }
        let layout: Vec<Vec<u32>> = (1..=self.agree_bound).flat_map(|d| module.multidegrees_of_degree(d)).collect();
        if layout.len() != self.cells.len() || layout.iter().zip(&self.cells).any(|(a, c)| *a != c.multidegree) {
            return Err(CertificateError::CellLayout);
        }
        let chi = trivial_character(module);
        for cell in &self.cells {
            let basis = cell_echelon(module, &cell.multidegree, &chi)?.basis();
            let md = || cell.multidegree.clone();
            if basis.len() != cell.dim || cell.values.len() != cell.dim {
                return Err(CertificateError::DimensionMismatch { multidegree: md(), expected: cell.dim, got: basis.len() });
            }
            if basis_checksum(&basis) != cell.checksum {
                return Err(CertificateError::ChecksumMismatch { multidegree: md() });
            }
            for (index, (f, val)) in basis.iter().zip(&cell.values).enumerate() {
                if module.evaluate(f, &self.v)? != *val || module.evaluate(f, &self.v2)? != *val {
                    return Err(CertificateError::EvaluationMismatch { multidegree: md(), index });
                }
            }
        }
        let deg = self.agree_bound + 1;
        if self.separator.is_zero() || !self.separator.is_homogeneous() || self.separator.degree() != Some(deg) {
            return Err(CertificateError::SeparatorDegree(deg));
        }
        if !module.is_relative_invariant(&self.separator, None) {
            return Err(CertificateError::InvarianceFailure);
        }
        let a = module.evaluate(&self.separator, &self.v)?;
        let b = module.evaluate(&self.separator, &self.v2)?;
        if a == b || a != self.values[0] || b != self.values[1] {
            return Err(CertificateError::SeparatorValues);
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let pt = |v: &[Scalar]| Value::Array(v.iter().map(Scalar::to_json).collect());
        let cells: Vec<Value> = self
            .cells
            .iter()
            .map(|c| {
                json!({
                    "multidegree": c.multidegree,
                    "dim": c.dim,
                    "checksum": c.checksum,
                    "values": pt(&c.values),
                })
            })
            .collect();
        json!({
            "schema": CERTIFICATE_SCHEMA,
            "group": self.group,
            "module": self.module,
            "field": self.field,
            "v": pt(&self.v),
            "v2": pt(&self.v2),
            "agree_bound": self.agree_bound,
            "orbit_size": self.orbit_size,
            "cells": cells,
            "separator": self.separator.to_json(),
            "values": pt(&self.values),
        })
    }

    pub fn from_json(v: &Value) -> Result<SeparationCertificate> {
        let bad = |w: &str| Error::Parse(format!("certificate field `{w}`"));
        if v.get("schema").and_then(Value::as_str) != Some(CERTIFICATE_SCHEMA) {
            return Err(bad("schema"));
        }
        let s = |k: &str| v.get(k).and_then(Value::as_str).map(str::to_string).ok_or_else(|| bad(k));
        let u = |x: Option<&Value>, k: &str| x.and_then(Value::as_u64).ok_or_else(|| bad(k));
        let pts = |x: Option<&Value>, k: &str| -> Result<Vec<Scalar>> {
            x.and_then(Value::as_array).ok_or_else(|| bad(k))?.iter().map(Scalar::from_json).collect()
        };
        let module = v
            .get("module")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("module"))?
            .iter()
            .map(|l| l.as_str().map(str::to_string).ok_or_else(|| bad("module")))
            .collect::<Result<_>>()?;
        let cells = v
            .get("cells")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("cells"))?
            .iter()
            .map(|c| {
                let multidegree = c
                    .get("multidegree")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("multidegree"))?
                    .iter()
                    .map(|x| u(Some(x), "multidegree").map(|x| x as u32))
                    .collect::<Result<_>>()?;
                Ok(CellEvidence {
                    multidegree,
                    dim: u(c.get("dim"), "dim")? as usize,
                    checksum: c.get("checksum").and_then(Value::as_str).ok_or_else(|| bad("checksum"))?.to_string(),
                    values: pts(c.get("values"), "values")?,
                })
            })
            .collect::<Result<_>>()?;
        let values = pts(v.get("values"), "values")?;
        let values: [Scalar; 2] = values.try_into().map_err(|_| bad("values"))?;
        Ok(SeparationCertificate {
            group: s("group")?,
            module,
            field: s("field")?,
            v: pts(v.get("v"), "v")?,
            v2: pts(v.get("v2"), "v2")?,
            agree_bound: u(v.get("agree_bound"), "agree_bound")? as u32,
            orbit_size: u(v.get("orbit_size"), "orbit_size")? as usize,
            cells,
            separator: SparsePolynomial::from_json(v.get("separator").ok_or_else(|| bad("separator"))?)?,
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{load_entry, load_entry_over, script_certificates, theorem_script};
    use crate::scalar::Field;

    fn h27_certificate() -> SeparationCertificate {
        script_certificates(&theorem_script("prop-H27").unwrap()).unwrap().remove(0).1
    }

    #[test]
    fn orbit_times_stabilizer_is_group_order() {
        let e = load_entry("27,4").unwrap();
        let m = e.module("W1").unwrap();
        for coords in [["1", "1", "1"], ["1", "2", "3"], ["0", "0", "1"], ["E(3)", "E(3)^2", "1"]] {
            let v = e.point(&coords.map(String::from)).unwrap();
            let o = orbit(&m, &v).unwrap().len();
            let s = stabilizer(&m, &v).unwrap().len();
            assert_eq!(o * s, 27, "{coords:?}");
        }
    }

    #[test]
    fn points_of_one_orbit_agree() {
        let e = load_entry("24,3").unwrap();
        let m = e.module("V").unwrap();
        let v = e.point(&["1".into(), "2".into()]).unwrap();
        for g in [3, 7, 20] {
            let w = m.act_on_point(g, &v);
            assert!(orbits_equal(&m, &v, &w).unwrap());
            let a = agree_up_to_degree(&m, &v, &w, 8).unwrap();
            assert!(a.agree && a.separator.is_none());
            assert_eq!(a.cells.len(), 8);
        }
    }

    #[test]
    fn certificate_round_trips_and_verifies() {
        let cert = h27_certificate();
        let e = load_entry(&cert.group).unwrap();
        let m = e.module_from_labels(&cert.module).unwrap();
        assert_eq!(cert.verify(&m), Ok(()));
        let back = SeparationCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_json().to_string(), cert.to_json().to_string());
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let cert = h27_certificate();
        let m = load_entry(&cert.group).unwrap().module_from_labels(&cert.module).unwrap();

        let mut c = cert.clone();
        c.values.swap(0, 1);
        assert_eq!(c.verify(&m), Err(CertificateError::SeparatorValues));

        let mut c = cert.clone();
        c.agree_bound -= 1;
        assert_eq!(c.verify(&m), Err(CertificateError::CellLayout));

        let mut c = cert.clone();
        let cell = c.cells.iter_mut().find(|x| x.dim > 0).unwrap();
        cell.values[0] = &cell.values[0] + &m.field().one();
        assert!(matches!(c.verify(&m), Err(CertificateError::EvaluationMismatch { .. })));

        let mut c = cert.clone();
        c.cells[0].checksum = "00".into();
        assert!(matches!(c.verify(&m), Err(CertificateError::ChecksumMismatch { .. })));

        let mut c = cert.clone();
        c.v2 = m.act_on_point(1, &c.v);
        assert_eq!(c.verify(&m), Err(CertificateError::OrbitsEqual));

        let mut c = cert;
        c.separator = c.separator.add(&SparsePolynomial::var(3, 0, m.field().one()).pow(9, &m.field().one()));
        assert!(c.verify(&m).is_err());
    }

    #[test]
    fn weight_invariants_vanish_where_the_stabilizer_leaves_the_kernel() {
        let e = load_entry("24,13").unwrap();
        let m = e.module("W1").unwrap();
        let chi = e.character("(ω,1)").unwrap();
        let pts: Vec<Vec<Scalar>> =
            [["1", "1", "1"], ["1", "2", "3"]].iter().map(|p| e.point(&p.map(String::from)).unwrap()).collect();
        let r = zero_locus_check(&m, &chi, 6, &pts).unwrap();
        assert!(r.rows[0].stabilizer_outside_kernel && r.rows[0].all_vanish);
        assert_eq!(r.rows[1].stabilizer_order, 1);
        assert!(!r.rows[1].all_vanish);
    }

    #[test]
    fn heisenberg_over_four_elements() {
        let f: Field = "gf:4".parse().unwrap();
        let e = load_entry_over("27,3", &f).unwrap();
        let r = finite_field_beta_sep(&e.module("W").unwrap(), 8).unwrap();
        assert_eq!(r.points, 64);
        assert_eq!(r.beta_sep, Some(6));
    }
}
