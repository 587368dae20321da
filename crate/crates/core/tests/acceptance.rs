//! Acceptance harness: prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod support;

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sepinv::catalog::{entry_ids, load_entry, load_entry_over, run_theorem_check, CatalogEntry, CheckReport};
use sepinv::cli::{certificate_text, check_certificate_file, cmd_verify, shipped_certificates, Format};
use sepinv::gmodule::GModule;
use sepinv::invariants::{dimension_oracle, generator_profile, weight_space_basis, Grade};
use sepinv::scalar::{Field, Scalar};
use sepinv::separation::{finite_field_beta_sep, zero_locus_check};
use sepinv::zerosum::{davenport, AbelianGroupTable};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e2s<T>(r: sepinv::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Theorem-script reports, each computed at most once.
struct Reports(Mutex<HashMap<String, CheckReport>>);

impl Reports {
    fn get(&self, id: &str) -> Result<CheckReport, String> {
        if let Some(r) = self.0.lock().unwrap().get(id) {
            return Ok(r.clone());
        }
        let r = e2s(run_theorem_check(id))?;
        self.0.lock().unwrap().insert(id.to_string(), r.clone());
        Ok(r)
    }

    fn passed(&self, id: &str) -> Result<CheckReport, String> {
        let r = self.get(id)?;
        match r.checks.iter().find(|c| !c.passed) {
            Some(c) => Err(format!("{id} check {} ({}) failed: {}", c.index, c.op, c.detail)),
            None => Ok(r),
        }
    }
}

fn certificate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("certificates")
}

fn counts(pairs: &[(u32, usize)]) -> BTreeMap<u32, usize> {
    pairs.iter().copied().collect()
}

fn profile(id: &str, module: &str, cap: u32) -> Result<BTreeMap<u32, usize>, String> {
    let e = e2s(load_entry(id))?;
    let m = e2s(e.module(module))?;
    Ok(e2s(generator_profile(&m, cap))?.counts)
}

fn criterion_1(reports: &Reports) -> Outcome {
    // (file, entry, agreement bound, separator values or None when only the degree is fixed)
    let expected: [(&str, u32, Option<[&str; 2]>); 6] = [
        ("C3C3C2", 5, Some(["1", "-1"])),
        ("A4tilde", 11, Some(["-64", "64"])),
        ("C6C2C2", 8, None),
        ("S4", 8, Some(["720", "-720"])),
        ("H27", 8, Some(["2^6", "2^3"])),
        ("M27", 9, Some(["E(3)", "E(3)^2"])),
    ];
    let fresh: HashMap<String, String> =
        e2s(shipped_certificates())?.iter().map(|(n, c)| (n.clone(), certificate_text(c))).collect();
    for (name, bound, values) in expected {
        let path = certificate_dir().join(format!("{name}.json"));
        let cert = e2s(check_certificate_file(&path))?;
        ensure(cert.agree_bound == bound, format!("{name}: agreement bound {}", cert.agree_bound))?;
        ensure(cert.separator.degree() == Some(bound + 1), format!("{name}: separator degree"))?;
        if let Some(vals) = values {
            let field: Field = e2s(cert.field.parse())?;
            let e = e2s(load_entry_over(&cert.group, &field))?;
            let want = [e2s(e.scalar(vals[0]))?, e2s(e.scalar(vals[1]))?];
            ensure(cert.values == want, format!("{name}: separator values {} vs {}", cert.values[0], cert.values[1]))?;
        }
        let shipped = fs::read_to_string(&path).map_err(|e| e.to_string())?;
        ensure(fresh.get(name) == Some(&shipped), format!("{name}: rebuilt certificate differs from the shipped file"))?;
    }
    // S₄: the separator is σ₃Δ.
    let s4 = e2s(check_certificate_file(&certificate_dir().join("S4.json")))?;
    let e = e2s(load_entry("24,12"))?;
    let m = e2s(e.module("V"))?;
    ensure(s4.separator == e2s(e.poly("$e3*$Delta", &m))?, "S4 separator is not σ₃Δ")?;
    // Dic₁₂×C₂: pairwise orbit coincidence of the triple and the separating cubic.
    let dic = reports.passed("thm-Dic12xC2")?;
    let orbit_checks = dic.checks.iter().filter(|c| c.op == "orbits_equal").count();
    ensure(orbit_checks == 3, format!("Dic12 triple has {orbit_checks} orbit checks"))?;
    Ok(format!("6 certificates verified and rebuilt byte-identically, Dic12xC2 triple ({orbit_checks} orbit checks)"))
}

fn criterion_2(reports: &Reports) -> Outcome {
    let mut timings = Vec::new();
    let mut timed = |label: &str, f: &mut dyn FnMut() -> Result<(), String>| -> Result<(), String> {
        let t = Instant::now();
        f()?;
        timings.push(format!("{label} {:.1}s", t.elapsed().as_secs_f64()));
        Ok(())
    };
    timed("A4tilde", &mut || {
        let c = profile("24,3", "V", 12)?;
        ensure(c == counts(&[(6, 1), (8, 1), (12, 1)]), format!("Ã4 profile {c:?}"))
    })?;
    timed("C6C2C2", &mut || {
        let c = profile("24,8", "W+Uχ", 9)?;
        ensure(c == counts(&[(2, 1), (4, 1), (6, 1), (9, 1)]), format!("C6C2C2 profile {c:?}"))?;
        reports.passed("prop-C6C2C2-mingen").map(|_| ())
    })?;
    timed("C5C4", &mut || {
        let c = profile("20,3", "W", 8)?;
        let want = counts(&[(2, 1), (3, 1), (4, 2), (5, 2), (6, 1), (7, 1)]);
        ensure(c == want, format!("C5C4 profile {c:?}"))
    })?;
    timed("S4", &mut || {
        let c = profile("24,12", "V", 9)?;
        let degrees: Vec<u32> = c.iter().flat_map(|(&d, &k)| std::iter::repeat_n(d, k)).collect();
        ensure(degrees == [2, 2, 4, 4, 6, 7, 9], format!("S4 degrees {degrees:?}"))
    })?;
    timed("A4xC2", &mut || {
        for module in ["W1", "W2+U"] {
            let c = profile("24,13", module, 8)?;
            ensure(c.keys().next_back() == Some(&6), format!("A4xC2 {module} profile {c:?}"))?;
        }
        Ok(())
    })?;
    timed("M27", &mut || {
        let c = profile("27,4", "W1+W2", 11)?;
        ensure(c.contains_key(&9) && !c.contains_key(&10) && !c.contains_key(&11), format!("M27 profile {c:?}"))
    })?;
    Ok(timings.join(", "))
}

fn criterion_3() -> Outcome {
    let mut cells = 0usize;
    for id in entry_ids() {
        let e = e2s(load_entry(id))?;
        for name in e.module_names() {
            let m = e2s(e.module(&name))?;
            let top = if m.dim() <= 3 { 12 } else { 8 };
            for chi in e.characters() {
                for d in 0..=top {
                    let grade = Grade::Total(d);
                    let built = e2s(weight_space_basis(&m, &grade, &chi))?.dim();
                    let oracle = e2s(dimension_oracle(&m, &grade, &chi))?;
                    ensure(built == oracle, format!("{id} {name} {} degree {d}: basis {built}, oracle {oracle}", chi.label))?;
                    cells += 1;
                }
            }
        }
    }
    ensure(cells >= 500, format!("only {cells} cells"))?;
    Ok(format!("{cells} cells, zero mismatches"))
}

fn criterion_4(reports: &Reports) -> Outcome {
    let t = Instant::now();
    let gf4: Field = e2s("gf:4".parse())?;
    let h27 = e2s(load_entry_over("27,3", &gf4))?;
    let r = e2s(finite_field_beta_sep(&e2s(h27.module("W"))?, 8))?;
    let elapsed = t.elapsed();
    ensure(r.beta_sep == Some(6), format!("β_sep over GF(4) = {:?}", r.beta_sep))?;
    ensure(elapsed < Duration::from_secs(60), format!("GF(4) search took {elapsed:?}"))?;

    let gf25: Field = e2s("gf:25".parse())?;
    let s4 = e2s(load_entry_over("24,12", &gf25))?;
    let m = e2s(s4.module("V"))?;
    let quartic = |z: &Scalar| {
        let z2 = z * z;
        &(&(&(&z2 * &z2) + &(&gf25.int(2) * &z2)) + z) + &gf25.int(2)
    };
    let v: Vec<Scalar> = gf25.elements().unwrap().into_iter().filter(|z| quartic(z).is_zero()).collect();
    ensure(v.len() == 4, format!("x⁴+2x²+x+2 has {} roots in GF(25)", v.len()))?;
    let at = |src: &str| -> Result<Scalar, String> { e2s(m.evaluate(&e2s(s4.poly(src, &m))?, &v)) };
    ensure(at("$e1")?.is_zero(), "σ₁(v) ≠ 0")?;
    ensure(at("$e3")? == gf25.int(-1), "σ₃(v) ≠ −1")?;
    ensure(!at("$Delta")?.is_zero(), "Δ(v) = 0")?;
    reports.passed("thm-S4")?;
    Ok(format!("β_sep(H27, GF(4)) = 6 in {:.2}s; GF(25) witness σ₁=0, σ₃=−1, Δ≠0", elapsed.as_secs_f64()))
}

fn criterion_5() -> Outcome {
    for (spec, d) in [("C3", 3), ("C4", 4), ("C6", 6), ("C3xC3", 5)] {
        let got = e2s(davenport(&e2s(AbelianGroupTable::parse(spec))?))?;
        ensure(got == d, format!("D({spec}) = {got}"))?;
    }
    Ok("D(C3)=3, D(C4)=4, D(C6)=6, D(C3xC3)=5".into())
}

fn criterion_6(reports: &Reports) -> Outcome {
    let mut details = Vec::new();
    for id in ["lemma-A4xC2-stab", "lemma-M27-stab", "lemma-S3xC3-stab"] {
        let r = reports.passed(id)?;
        let b = r.checks.iter().find(|c| c.op == "builtin").ok_or(format!("{id} has no sampled check"))?;
        details.push(format!("{id}: {}", b.detail));
    }
    Ok(details.join("; "))
}

fn criterion_7(reports: &Reports) -> Outcome {
    let mut n = 0;
    for id in ["thm-A4tilde", "prop-C5C4-mingen", "thm-S3xC3", "prop-C6C2C2-mingen"] {
        n += reports.passed(id)?.checks.iter().filter(|c| c.op == "identity").count();
    }
    ensure(n >= 9, format!("only {n} identities"))?;
    let same = |id: &str, module: &str, lhs: &str, rhs: &str| -> Result<(), String> {
        let e = e2s(load_entry(id))?;
        let m = e2s(e.module(module))?;
        ensure(e2s(e.poly(lhs, &m))? == e2s(e.poly(rhs, &m))?, format!("{id}: {lhs} ≠ {rhs}"))
    };
    same("24,3", "V", "$h12a", "-4*$h6^2")?;
    same("20,3", "W", "$f9", "$f1*$f6 - 2*$f4")?;
    Ok(format!("{n} identities, zero failures"))
}

fn sample_points(rng: &mut ChaCha8Rng, field: &Field, m: &GModule, count: usize) -> Vec<Vec<Scalar>> {
    let n = m.dim();
    let mut pts = Vec::new();
    let off = m.offsets();
    for s in 0..off.len() - 1 {
        let mut v = vec![field.zero(); n];
        v[off[s]..off[s + 1]].iter_mut().for_each(|x| *x = field.one());
        pts.push(v);
    }
    for i in 0..n {
        let mut v = vec![field.zero(); n];
        v[i] = field.one();
        pts.push(v);
    }
    for _ in 0..count {
        // Random points with some coordinates forced to zero reach nontrivial stabilizers.
        pts.push((0..n).map(|_| if rng.gen_bool(0.3) { field.zero() } else { field.int(rng.gen_range(-2..=2)) }).collect());
    }
    pts
}

fn criterion_8(reports: &Reports) -> Outcome {
    let r = reports.passed("lemma-M27-zero-locus")?;
    let sampled = &r.checks.iter().find(|c| c.op == "zero_locus").ok_or("no sampled zero-locus check")?.detail;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut pairs, mut points, mut forced) = (0, 0, 0);
    for id in entry_ids() {
        let e: CatalogEntry = e2s(load_entry(id))?;
        for name in e.module_names() {
            let m = e2s(e.module(&name))?;
            let bound = if m.dim() <= 6 { 4 } else { 3 };
            let pts = sample_points(&mut rng, e.field(), &m, 12);
            for chi in e.characters() {
                let rep = e2s(zero_locus_check(&m, &chi, bound, &pts))?;
                pairs += 1;
                points += rep.rows.len();
                forced += rep.rows.iter().filter(|r| r.stabilizer_outside_kernel).count();
            }
        }
    }
    Ok(format!(
        "M27: {sampled}; forward direction on {points} point checks over {pairs} module-weight pairs ({forced} with Stab ⊄ ker χ)"
    ))
}

fn criterion_9() -> Outcome {
    const CASES: u32 = 160;
    for (name, prop) in support::PROPERTIES {
        prop(CASES).map_err(|e| format!("{name}: {e}"))?;
    }
    let total = CASES as usize * support::PROPERTIES.len();
    ensure(total >= 1000, format!("only {total} cases"))?;
    for id in ["prop-H27", "thm-C3C3C2"] {
        let a = e2s(cmd_verify(Some(id), Format::Json))?.output;
        let b = e2s(cmd_verify(Some(id), Format::Json))?.output;
        ensure(a == b, format!("{id}: JSON report differs between runs"))?;
    }
    let a: Vec<String> = e2s(shipped_certificates())?.iter().map(|(_, c)| certificate_text(c)).collect();
    let b: Vec<String> = e2s(shipped_certificates())?.iter().map(|(_, c)| certificate_text(c)).collect();
    ensure(a == b, "certificate emission differs between runs")?;
    Ok(format!("{} suites, {total} randomized cases, byte-identical reruns", support::PROPERTIES.len()))
}

fn main() {
    let reports = Reports(Mutex::new(HashMap::new()));
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("witness certificates verify end to end", Box::new(|| criterion_1(&reports))),
        ("minimal generator degree profiles", Box::new(|| criterion_2(&reports))),
        ("dimension oracle matches constructed bases", Box::new(criterion_3)),
        ("finite-field separating degree and GF(25) witness", Box::new(|| criterion_4(&reports))),
        ("Davenport constants", Box::new(criterion_5)),
        ("stabilizer tables", Box::new(|| criterion_6(&reports))),
        ("polynomial identity suite", Box::new(|| criterion_7(&reports))),
        ("zero-locus checks", Box::new(|| criterion_8(&reports))),
        ("property suites and determinism", Box::new(criterion_9)),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {title} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {title} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
