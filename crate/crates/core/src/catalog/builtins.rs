//! Checks whose inputs are generated rather than listed: sampled stabilizer
//! classifications and the finite-field witness for S₄.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::entry::CatalogEntry;
use super::theorems::{expect_eq, fail, sample_points, Args};
use crate::error::{Error, Result};
use crate::gmodule::GModule;
use crate::groups::{stabilizer, Elem};
use crate::scalar::Scalar;
use crate::separation::SeparationCertificate;

pub(super) fn run(e: &CatalogEntry, name: &str, a: &Args) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.opt_u64("seed").unwrap_or(2024));
    let samples = a.opt_u64("random").unwrap_or(200) as usize;
    match name {
        "a4c2-stabilizer-cases" => a4c2_stabilizers(e, &mut rng, samples),
        "m27-stabilizer-lines" => m27_stabilizers(e, &mut rng, samples),
        "s3c3-stabilizer-families" => s3c3_stabilizers(e, &mut rng, samples),
        "s4-gf25-witness" => s4_gf25_witness(e),
        "c5c4-orbit-sample" => c5c4_orbit_sample(e, &mut rng, samples),
        other => Err(Error::Parse(format!("unknown builtin `{other}`"))),
    }
}

fn subgroup(e: &CatalogEntry, words: &[&str]) -> Result<Vec<Elem>> {
    let gens = words.iter().map(|w| e.element(w)).collect::<Result<Vec<_>>>()?;
    Ok(e.group().subgroup_generated(&gens))
}

fn scaled(v: &[Scalar], l: &Scalar) -> Vec<Scalar> {
    v.iter().map(|x| x * l).collect()
}

/// Nonzero v ∈ W₁ of A₄×C₂: |Stab| is 3 when all x_j² agree, 2 when exactly
/// one coordinate vanishes, 4 when exactly one is nonzero, and 1 otherwise.
fn a4c2_stabilizers(e: &CatalogEntry, rng: &mut ChaCha8Rng, samples: usize) -> Result<String> {
    let m = e.module("W1")?;
    let f = e.field();
    let predicted = |v: &[Scalar]| -> u64 {
        let zeros = v.iter().filter(|x| x.is_zero()).count();
        let sq: Vec<Scalar> = v.iter().map(|x| x * x).collect();
        match zeros {
            2 => 4,
            1 => 2,
            0 if sq[0] == sq[1] && sq[1] == sq[2] => 3,
            _ => 1,
        }
    };
    let mut points: Vec<Vec<Scalar>> =
        [[1, 1, 1], [1, -1, 1], [1, 2, 0], [0, 0, 1], [1, 2, 3]].iter().map(|p| p.iter().map(|&x| f.int(x)).collect()).collect();
    points.extend(sample_points(rng, f, 3, samples, 2));
    let mut seen = std::collections::BTreeSet::new();
    for v in &points {
        let order = stabilizer(&m, v)?.len() as u64;
        expect_eq(&format!("|Stab({})|", show(v)), order, predicted(v))?;
        seen.insert(order);
    }
    expect_eq("orders observed", seen.into_iter().collect::<Vec<_>>(), vec![1, 2, 3, 4])?;
    Ok(format!("{} points match the case list", points.len()))
}

/// Nonzero w in W₁ or W₂ of M₂₇ has a nontrivial stabilizer exactly on three
/// lines, with stabilizers ⟨b⟩, ⟨a³b⟩, ⟨a⁶b⟩.
fn m27_stabilizers(e: &CatalogEntry, rng: &mut ChaCha8Rng, samples: usize) -> Result<String> {
    let f = e.field();
    let eps = f.zeta_pow(3, 1)?;
    let eps2 = f.zeta_pow(3, 2)?;
    let one = f.one();
    let lines: [(&str, [[Scalar; 3]; 3]); 2] = [
        ("W1", [[one.clone(), one.clone(), one.clone()], [eps2.clone(), eps.clone(), one.clone()], [eps.clone(), eps2.clone(), one.clone()]]),
        ("W2", [[one.clone(), one.clone(), one.clone()], [eps.clone(), eps2.clone(), one.clone()], [eps2.clone(), eps.clone(), one.clone()]]),
    ];
    let stabs = [subgroup(e, &["b"])?, subgroup(e, &["a^3*b"])?, subgroup(e, &["a^6*b"])?];
    let multipliers = [f.int(1), f.int(-2), eps.clone(), &one + &eps2];
    let mut checked = 0;
    for (label, vecs) in &lines {
        let m = e.module(label)?;
        for (u, want) in vecs.iter().zip(&stabs) {
            for l in &multipliers {
                expect_eq(&format!("{label} Stab({})", show(&scaled(u, l))), stabilizer(&m, &scaled(u, l))?, want.clone())?;
                checked += 1;
            }
        }
        for v in sample_points(rng, f, 3, samples, 2) {
            let on_line = vecs.iter().position(|u| proportional(&v, u));
            let stab = stabilizer(&m, &v)?;
            match on_line {
                Some(i) => expect_eq(&format!("{label} Stab({})", show(&v)), stab, stabs[i].clone())?,
                None => expect_eq(&format!("{label} |Stab({})|", show(&v)), stab.len(), 1)?,
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} points match the three stabilizer lines"))
}

fn proportional(v: &[Scalar], u: &[Scalar]) -> bool {
    let Some(i) = u.iter().position(|x| !x.is_zero()) else { return false };
    let Ok(l) = v[i].div(&u[i]) else { return false };
    !l.is_zero() && v.iter().zip(u).all(|(x, y)| *x == y * &l)
}

/// S₃×C₃ on W₁, W₂, W₃: the order of Stab(w) is read off from the vanishing
/// of ξ₁³ − ξ₂³ and of ξ₁ξ₂.
fn s3c3_stabilizers(e: &CatalogEntry, rng: &mut ChaCha8Rng, samples: usize) -> Result<String> {
    let f = e.field();
    let w = f.zeta_pow(3, 1)?;
    let w2 = f.zeta_pow(3, 2)?;
    let reflections =
        [subgroup(e, &["b"])?, subgroup(e, &["a*b"])?, subgroup(e, &["a^2*b"])?];
    let with_c: Vec<Vec<Elem>> = ["b", "a*b", "a^2*b"]
        .iter()
        .map(|r| subgroup(e, &[r, "c"]))
        .collect::<Result<_>>()?;
    let rotations = [subgroup(e, &["a*c"])?, subgroup(e, &["a*c^2"])?];
    let mut base: Vec<Vec<Scalar>> = vec![
        vec![f.one(), f.one()],
        vec![f.one(), w.clone()],
        vec![f.one(), w2.clone()],
        vec![f.one(), f.zero()],
        vec![f.zero(), f.one()],
        vec![f.one(), f.int(-1)],
        vec![f.int(2), f.one()],
    ];
    base.extend(sample_points(rng, f, 2, samples, 3));
    let mut checked = 0;
    for (label, p) in [("W1", "x"), ("W2", "y"), ("W3", "z")] {
        let m = e.module(label)?;
        let pm = e.poly(&format!("{p}1^3 - {p}2^3"), &m)?;
        let q = e.poly(&format!("{p}1*{p}2"), &m)?;
        for v in base.iter().flat_map(|v| [v.clone(), scaled(v, &f.int(-2)), scaled(v, &w)]) {
            let stab = stabilizer(&m, &v)?;
            let pm0 = m.evaluate(&pm, &v)?.is_zero();
            let q0 = m.evaluate(&q, &v)?.is_zero();
            let ctx = format!("{label} Stab({})", show(&v));
            if label == "W1" {
                if pm0 {
                    if !with_c.contains(&stab) {
                        return Err(fail(format!("{ctx} is not a reflection times ⟨c⟩")));
                    }
                } else {
                    expect_eq(&ctx, stab, subgroup(e, &["c"])?)?;
                }
            } else if pm0 {
                if !reflections.contains(&stab) {
                    return Err(fail(format!("{ctx} should be generated by a reflection")));
                }
            } else if q0 {
                if !rotations.contains(&stab) {
                    return Err(fail(format!("{ctx} should be ⟨ac⟩ or ⟨ac²⟩")));
                }
            } else {
                expect_eq(&ctx, stab.len(), 1)?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} points match the stabilizer classification"))
}

/// Over GF(25), v collects the roots of x²+x+1 and x²−x+2; then σ₁(v) = 0,
/// σ₃(v) = −1, Δ(v) ≠ 0 and (v, −v) is a witness pair for degree 9.
fn s4_gf25_witness(e: &CatalogEntry) -> Result<String> {
    let f = e.field();
    let elems = f.elements().ok_or_else(|| fail("needs a finite field"))?;
    let roots = |b: i64, c: i64| -> Vec<Scalar> {
        elems.iter().filter(|z| (&(&(*z * *z) + &(&f.int(b) * *z)) + &f.int(c)).is_zero()).cloned().collect()
    };
    let mut v = roots(1, 1);
    v.extend(roots(-1, 2));
    expect_eq("number of roots", v.len(), 4)?;
    let m: GModule = e.module("V")?;
    let e1 = m.evaluate(&e.poly("$e1", &m)?, &v)?;
    let e3 = m.evaluate(&e.poly("$e3", &m)?, &v)?;
    let delta = m.evaluate(&e.poly("$Delta", &m)?, &v)?;
    expect_eq("σ₁(v)", e1, f.zero())?;
    expect_eq("σ₃(v)", e3, f.int(-1))?;
    if delta.is_zero() {
        return Err(fail("Δ(v) = 0"));
    }
    let w: Vec<Scalar> = v.iter().map(|x| -x).collect();
    let sep = e.poly("$e3*$Delta", &m)?;
    let cert = SeparationCertificate::build(e.id(), &m, &v, &w, 8, Some(&sep))?;
    cert.verify(&m).map_err(|err| fail(err.to_string()))?;
    Ok(format!("v = {}, separator values {} vs {}", show(&v), cert.values[0], cert.values[1]))
}

/// Points of one orbit give equal values of f₁..f₈ (sampled consistency).
fn c5c4_orbit_sample(e: &CatalogEntry, rng: &mut ChaCha8Rng, samples: usize) -> Result<String> {
    let m = e.module("W")?;
    let fs = (1..=8).map(|i| e.poly(&format!("$f{i}"), &m)).collect::<Result<Vec<_>>>()?;
    let order = e.group().order();
    for v in sample_points(rng, e.field(), 4, samples, 3) {
        let g = rng.gen_range(0..order);
        let w = m.act_on_point(g, &v);
        for (i, f) in fs.iter().enumerate() {
            expect_eq(&format!("f{} at v and g·v", i + 1), m.evaluate(f, &v)?, m.evaluate(f, &w)?)?;
        }
    }
    Ok(format!("{samples} orbit pairs agree on f1..f8"))
}

fn show(v: &[Scalar]) -> String {
    format!("[{}]", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}
