//! End-to-end acceptance run over the shipped corpus. Every criterion prints
//! one `criterion N: PASS` or `criterion N: FAIL (...)` line; the process
//! exits nonzero afterwards if any line is FAIL.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use normext::freealg::{parse_poly, parse_scalar, Coeff, Context};
use normext::scalars::Scalar;
use normext_cli::corpus::{entries, Entry, Instance};
use normext_cli::load::{load, proportional};
use normext_cli::{run_with, EXIT_FAIL, EXIT_PASS};
use serde_json::Value;

struct Run {
    code: i32,
    json: Value,
    stderr: String,
}

fn cli(args: &[&str]) -> Run {
    let argv: Vec<String> = std::iter::once("normext").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(&argv, &mut out, &mut err);
    let json = serde_json::from_slice(&out).unwrap_or(Value::Null);
    Run { code, json, stderr: String::from_utf8_lossy(&err).into_owned() }
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn path_str(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

struct Verified<'a> {
    entry: &'a Entry,
    inst: &'a Instance,
    run: Run,
}

impl Verified<'_> {
    fn tag(&self) -> String {
        format!("{} k={} p=({})", self.entry.sidecar.label, self.inst.k, self.inst.p)
    }

    fn check(&self, name: &str) -> Option<&Value> {
        self.run.json["checks"].as_array()?.iter().find(|c| c["name"] == name)
    }

    fn passes(&self, name: &str) -> bool {
        self.check(name).is_some_and(|c| c["pass"] == true)
    }

    fn dims(&self, which: &str) -> Vec<usize> {
        usize_vec(&self.run.json["tables"][which]["dims"])
    }
}

fn usize_vec(v: &Value) -> Vec<usize> {
    v.as_array().map(|a| a.iter().filter_map(|x| x.as_u64().map(|x| x as usize)).collect()).unwrap_or_default()
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().map(|a| a.iter().filter_map(|x| x.as_str().map(String::from)).collect()).unwrap_or_default()
}

fn verify_args(e: &Entry, inst: &Instance, engine: &str) -> Vec<String> {
    let mut a = vec![
        "verify".to_string(),
        path_str(&e.alg),
        "--omit".into(),
        inst.k.to_string(),
        format!("--p={}", inst.p),
        "--engine".into(),
        engine.into(),
    ];
    if let Some(s) = &inst.assign {
        a.push(format!("--assign={s}"));
    }
    a
}

fn as_refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

/// Power series coefficients of 1/∏(1 − t^e) up to degree `len − 1`.
fn inverse_product(exponents: &[usize], len: usize) -> Vec<i64> {
    let mut s = vec![0i64; len];
    s[0] = 1;
    for &e in exponents {
        for d in e..len {
            s[d] += s[d - e];
        }
    }
    s
}

/// Hilbert series of A for a 3-dimensional regular algebra: 1/(1−t)^3 in
/// the quadratic case, 1/((1−t)^2(1−t^2)) in the cubic case.
fn oracle_a(n: usize, len: usize) -> Vec<i64> {
    match n {
        3 => (0..len as i64).map(|d| (d + 1) * (d + 2) / 2).collect(),
        2 => inverse_product(&[1, 1, 2], len),
        _ => panic!("unexpected generator count {n}"),
    }
}

fn generators(e: &Entry) -> usize {
    load(&e.alg, None).map(|l| l.file.ctx.n()).unwrap_or(0)
}

type Outcome = Result<(), String>;

fn report(n: usize, r: &Outcome) {
    match r {
        Ok(()) => println!("criterion {n}: PASS"),
        Err(why) => println!("criterion {n}: FAIL ({why})"),
    }
}

fn collect(fails: Vec<String>) -> Outcome {
    if fails.is_empty() {
        Ok(())
    } else {
        Err(fails.join("; "))
    }
}

fn criterion_1(all: &[Entry]) -> Outcome {
    let r = cli(&["tables", &path_str(&corpus_dir())]);
    let mut fails = Vec::new();
    if r.code != EXIT_PASS {
        fails.push(format!("tables exited {} {}", r.code, r.stderr.trim()));
    }
    let reports = r.json["entries"].as_array().cloned().unwrap_or_default();
    for want in ["A", "S2", "S1"] {
        if !all.iter().any(|e| e.sidecar.row.as_deref() == Some(want)) {
            fails.push(format!("no corpus entry for row {want}"));
        }
    }
    for e in all {
        let Some(rep) = reports.iter().find(|x| x["label"] == e.sidecar.label.as_str()) else {
            fails.push(format!("{} missing from report", e.sidecar.label));
            continue;
        };
        if e.sidecar.table.is_empty() {
            if rep["note"].as_str().is_none() {
                fails.push(format!("{}: no note for an entry without table row", e.sidecar.label));
            }
            continue;
        }
        for row in &e.sidecar.table {
            let Some(got) = rep["rows"].as_array().and_then(|rs| rs.iter().find(|x| x["k"] == row.k)) else {
                fails.push(format!("{} k={}: row missing", e.sidecar.label, row.k));
                continue;
            };
            for entry in &row.entries {
                let ok = got["entries"]
                    .as_array()
                    .is_some_and(|v| v.iter().any(|x| x["entry"] == entry.as_str() && x["contained"] == true));
                if !ok {
                    fails.push(format!("{} k={}: ({entry}) not contained", e.sidecar.label, row.k));
                }
            }
        }
    }
    collect(fails)
}

fn criterion_2(good: &[&Verified]) -> Outcome {
    let mut fails = Vec::new();
    let mut saw_w_poly = false;
    for v in good {
        let a = v.dims("a");
        let d = v.dims("d");
        let n = generators(v.entry);
        let m = if n == 3 { 2 } else { 3 };
        let bound = 2 * m + 4;
        if a.len() != bound + 1 || d.len() != bound + 1 {
            fails.push(format!("{}: tables do not reach degree {bound}", v.tag()));
            continue;
        }
        let oracle = oracle_a(n, bound + 1);
        if a.iter().zip(&oracle).any(|(x, y)| *x as i64 != *y) {
            fails.push(format!("{}: h_A = {a:?}", v.tag()));
        }
        for t in 0..=bound {
            let shifted = if t >= m { d[t - m] as i64 } else { 0 };
            if d[t] as i64 - shifted != a[t] as i64 {
                fails.push(format!("{}: h_D(1-t^{m}) differs from h_A in degree {t}", v.tag()));
                break;
            }
        }
        for (name, want, got) in [("h_A", &v.inst.hilbert_a, &a), ("h_D", &v.inst.hilbert_d, &d)] {
            if let Some(w) = want {
                if !got.starts_with(w) {
                    fails.push(format!("{}: {name} {got:?} does not start with {w:?}", v.tag()));
                }
            }
        }
        if v.entry.sidecar.row.is_none() && v.inst.k == 1 {
            saw_w_poly = true;
            if !d.starts_with(&[1, 3, 7, 13, 22, 34]) {
                fails.push(format!("{}: h_D = {d:?}", v.tag()));
            }
        }
    }
    if !saw_w_poly {
        fails.push("no k=1 instance of the polynomial-ring superpotential".into());
    }
    collect(fails)
}

fn criterion_3(all: &[Entry], verified: &[Verified]) -> Outcome {
    let mut fails = Vec::new();
    for e in all {
        let bad: Vec<&Verified> = verified.iter().filter(|v| std::ptr::eq(v.entry, e) && !v.inst.good).collect();
        if bad.is_empty() {
            fails.push(format!("{}: no bad tuple", e.sidecar.label));
        }
        for v in bad {
            if v.run.code != EXIT_FAIL {
                fails.push(format!("{}: exit {}", v.tag(), v.run.code));
            }
            for name in ["good_tuple", "hilbert", "resolution_complex"] {
                if v.passes(name) || v.check(name).is_none() {
                    fails.push(format!("{}: {name} did not fail", v.tag()));
                }
            }
            if v.check("hilbert").and_then(|c| c["witness"].as_str()).is_none() {
                fails.push(format!("{}: no Hilbert defect degree", v.tag()));
            }
        }
    }
    collect(fails)
}

fn criterion_4(all: &[Entry], verified: &[Verified]) -> Outcome {
    let mut fails = Vec::new();
    for v in verified {
        if v.run.json.is_null() {
            fails.push(format!("{}: {}", v.tag(), v.run.stderr.trim()));
        } else if !v.passes("engine_agreement") {
            fails.push(format!("{}: engines disagree", v.tag()));
        }
    }
    // Separate single-engine runs of every base algebra and of every
    // instance over ℚ (the cyclotomic ones are covered by the joint runs).
    let single = |args: Vec<String>| -> Option<(Vec<usize>, Vec<usize>)> {
        let mut dims = Vec::new();
        for engine in ["la", "gb"] {
            let mut a = args.clone();
            a.extend(["--engine".to_string(), engine.to_string()]);
            let r = cli(&as_refs(&a));
            if r.code != EXIT_PASS {
                return None;
            }
            dims.push(usize_vec(&r.json["table"]["dims"]));
        }
        Some((dims[0].clone(), dims[1].clone()))
    };
    for e in all {
        match single(vec!["hilbert".into(), path_str(&e.alg)]) {
            Some((la, gb)) if la == gb && !la.is_empty() => {}
            other => fails.push(format!("{}: A tables {other:?}", e.sidecar.label)),
        }
    }
    for v in verified.iter().filter(|v| !v.inst.p.contains("zeta")) {
        let mut a = vec!["hilbert".into(), path_str(&v.entry.alg), "--omit".into(), v.inst.k.to_string()];
        a.push(format!("--p={}", v.inst.p));
        if let Some(s) = &v.inst.assign {
            a.push(format!("--assign={s}"));
        }
        match single(a) {
            Some((la, gb)) if la == gb && la == v.dims("d") => {}
            other => fails.push(format!("{}: D tables {other:?}", v.tag())),
        }
    }
    collect(fails)
}

fn is_calabi_yau(e: &Entry, assign: Option<&str>) -> Option<bool> {
    let mut a = vec!["check-superpotential".to_string(), path_str(&e.alg)];
    if let Some(s) = assign {
        a.push(format!("--assign={s}"));
    }
    cli(&as_refs(&a)).json["calabi_yau"].as_bool()
}

fn criterion_5(good: &[&Verified]) -> Outcome {
    let mut fails = Vec::new();
    let mut central_seen = false;
    for v in good {
        for name in ["omega_normal", "omega_regular", "omega_central"] {
            if !v.passes(name) {
                fails.push(format!("{}: {name} failed", v.tag()));
            }
        }
        let Some(cy) = is_calabi_yau(v.entry, v.inst.assign.as_deref()) else {
            fails.push(format!("{}: no twist report", v.tag()));
            continue;
        };
        let all_ones = strings(&v.run.json["p"]).iter().all(|s| s == "1");
        let expected = cy && all_ones;
        central_seen |= expected;
        let want = format!("central: {expected}, expected: {expected}");
        let got = v.check("omega_central").and_then(|c| c["witness"].as_str()).unwrap_or("");
        if got != want {
            fails.push(format!("{}: `{got}`, want `{want}`", v.tag()));
        }
        let m = if generators(v.entry) == 3 { 2 } else { 3 };
        let bound = v.run.json["bound"].as_u64().unwrap_or(0) as usize;
        for side in ["z_right", "z_left"] {
            let z = usize_vec(&v.run.json["diagnostics"][side]);
            if z.len() != bound + 1 - m || z.iter().any(|&x| x != 0) {
                fails.push(format!("{}: {side} = {z:?}", v.tag()));
            }
        }
    }
    if !central_seen {
        fails.push("no central instance exercised".into());
    }
    collect(fails)
}

fn criterion_6(good: &[&Verified]) -> Outcome {
    let mut fails = Vec::new();
    for v in good {
        for name in ["resolution_complex", "euler_residuals", "resolution_exact"] {
            if !v.passes(name) {
                fails.push(format!("{}: {name} failed", v.tag()));
            }
        }
        let res = v.run.json["diagnostics"]["euler_residuals"].as_array().cloned().unwrap_or_default();
        if res.is_empty() || res.iter().any(|r| r != 0) {
            fails.push(format!("{}: residuals {res:?}", v.tag()));
        }
    }
    collect(fails)
}

fn scalar(text: &str, ctx: &Arc<Context>) -> Result<Scalar, String> {
    parse_scalar(text, ctx).map_err(|e| format!("`{text}`: {e}"))
}

fn nakayama_and_hdet(v: &Verified) -> Outcome {
    let loaded = load(&v.entry.alg, v.inst.assign.as_deref()).map_err(|e| e.to_string())?;
    let ctx = &loaded.ctx;
    let mut args = vec!["check-superpotential".to_string(), path_str(&v.entry.alg)];
    if let Some(s) = &v.inst.assign {
        args.push(format!("--assign={s}"));
    }
    let q: Vec<Scalar> =
        strings(&cli(&as_refs(&args)).json["twist"]).iter().map(|t| scalar(t, ctx)).collect::<Result<_, _>>()?;
    let p: Vec<Scalar> = strings(&v.run.json["p"]).iter().map(|t| scalar(t, ctx)).collect::<Result<_, _>>()?;
    let nu: Vec<Scalar> =
        strings(&v.run.json["diagnostics"]["nakayama"]).iter().map(|t| scalar(t, ctx)).collect::<Result<_, _>>()?;
    if q.len() != p.len() || nu.len() != p.len() {
        return Err(format!("{}: lengths q {} p {} ν {}", v.tag(), q.len(), p.len(), nu.len()));
    }
    for i in 0..p.len() {
        let want = p[i].mul(&q[i]).and_then(|x| x.inv()).map_err(|e| e.to_string())?;
        if nu[i] != want {
            return Err(format!("{}: ν_{} = {}", v.tag(), i + 1, nu[i].text(ctx)));
        }
    }
    if !v.passes("nakayama") || !v.passes("hdet") {
        return Err(format!("{}: nakayama/hdet check failed", v.tag()));
    }
    if v.run.json["diagnostics"]["omega_eigenvalue"].as_str().is_none() {
        return Err(format!("{}: no Ω eigenvalue", v.tag()));
    }
    let h = &v.run.json["diagnostics"]["hdet"];
    let qk = q[v.inst.k - 1].clone();
    let want = [
        ("product", Scalar::one()),
        ("lambda", qk.clone()),
        ("tau", qk.inv().map_err(|e| e.to_string())?),
        ("nu_a", Scalar::one()),
    ];
    for (field, w) in want {
        let got = scalar(h[field].as_str().unwrap_or(""), ctx)?;
        if got != w {
            return Err(format!("{}: hdet {field} = {}", v.tag(), got.text(ctx)));
        }
    }
    Ok(())
}

fn criterion_7(good: &[&Verified]) -> Outcome {
    collect(good.iter().filter_map(|v| nakayama_and_hdet(v).err()).collect())
}

fn criterion_8(all: &[Entry]) -> Outcome {
    let mut fails = Vec::new();
    let mut probed = 0;
    for e in all.iter().filter(|e| e.sidecar.flat.is_some()) {
        probed += 1;
        let flat = e.sidecar.flat.as_ref().unwrap();
        let r = cli(&["family-probe", &path_str(&e.alg), "--bound", "6"]);
        let tag = &e.sidecar.label;
        if r.code != EXIT_PASS {
            fails.push(format!("{tag}: exit {} {}", r.code, r.stderr.trim()));
        }
        let points = strings(&r.json["flatness"]["points"]);
        let tables: Vec<Vec<usize>> =
            r.json["flatness"]["tables"].as_array().map(|a| a.iter().map(usize_vec).collect()).unwrap_or_default();
        if points.len() < 5 || points.len() != flat.points.len() || tables.len() != points.len() {
            fails.push(format!("{tag}: {} points, {} tables", points.len(), tables.len()));
        }
        if tables.windows(2).any(|w| w[0] != w[1]) {
            fails.push(format!("{tag}: tables differ {tables:?}"));
        }
        let oracle: Vec<usize> = inverse_product(&[1, 1, 1, 2], 7).iter().map(|&x| x as usize).collect();
        if tables.first() != Some(&oracle) {
            fails.push(format!("{tag}: table {:?}, want {oracle:?}", tables.first()));
        }
        if let Some(want) = &flat.tables {
            if tables.first() != Some(want) {
                fails.push(format!("{tag}: table differs from sidecar"));
            }
        }
        let spans = r.json["coordinate_spans"].as_array().cloned().unwrap_or_default();
        if spans.len() != 3 || spans.iter().any(|s| s["equal"] != true) {
            fails.push(format!("{tag}: coordinate spans {spans:?}"));
        }
    }
    if probed < 2 {
        fails.push(format!("only {probed} algebra(s) with flat-family data"));
    }
    collect(fails)
}

fn criterion_9(all: &[Entry]) -> Outcome {
    let mut fails = Vec::new();
    for e in all {
        if e.sidecar.zhang.is_empty() {
            fails.push(format!("{}: no Zhang cases", e.sidecar.label));
        }
        for z in &e.sidecar.zhang {
            let tag = format!("{} k={} p=({})", e.sidecar.label, z.k, z.p);
            let nontrivial = z.sigma.iter().filter(|s| s.split(',').any(|c| c.trim() != "1")).count();
            if nontrivial < 2 || nontrivial == z.sigma.len() {
                fails.push(format!("{tag}: need σ = id and two nontrivial σ"));
            }
            let args = vec![
                "zhang".to_string(),
                path_str(&e.alg),
                "--omit".into(),
                z.k.to_string(),
                format!("--p={}", z.p),
                format!("--sigma={}", z.sigma.join(";")),
            ];
            let r = cli(&as_refs(&args));
            if r.code != EXIT_PASS {
                fails.push(format!("{tag}: exit {} {}", r.code, r.stderr.trim()));
            }
            let cases = r.json["cases"].as_array().cloned().unwrap_or_default();
            if cases.len() != z.sigma.len() || cases.iter().any(|c| c["spans_equal"] != true) {
                fails.push(format!("{tag}: cases {cases:?}"));
            }
            for c in &cases {
                if strings(&c["sigma"]).iter().all(|s| s == "1") && c["p_prime"] != r.json["p"] {
                    fails.push(format!("{tag}: σ = id changed p"));
                }
            }
        }
    }
    collect(fails)
}

fn criterion_10(all: &[Entry]) -> Outcome {
    let e = all.iter().find(|e| e.sidecar.row.as_deref() == Some("S2")).ok_or("no S2 entry")?;
    let r = cli(&["build-extension", &path_str(&e.alg), "--omit", "2", "--p=2,1/4", "--assign=alpha:=-4"]);
    if r.code != EXIT_PASS {
        return Err(format!("exit {} {}", r.code, r.stderr.trim()));
    }
    let loaded = load(&e.alg, Some("alpha:=-4")).map_err(|e| e.to_string())?;
    let target = parse_poly::<Scalar>("x^3*y - 2*x^2*y*x + 4*x*y*x^2 - 8*y*x^3", &loaded.ctx).map_err(|e| e.to_string())?;
    let rels = r.json["relations"].as_array().cloned().unwrap_or_default();
    let quartic: Vec<&str> = rels.iter().filter(|x| x["degree"] == 4).filter_map(|x| x["text"].as_str()).collect();
    if quartic.is_empty() {
        return Err("no degree-4 relation".into());
    }
    for t in &quartic {
        let f = parse_poly::<Scalar>(t, &loaded.ctx).map_err(|e| e.to_string())?;
        if proportional(&f, &target) {
            return Ok(());
        }
    }
    Err(format!("degree-4 relations {quartic:?}"))
}

fn main() {
    let all = entries(&corpus_dir()).expect("corpus");
    let verified: Vec<Verified> = all
        .iter()
        .flat_map(|e| e.sidecar.instance.iter().map(move |inst| (e, inst)))
        .map(|(entry, inst)| Verified { entry, inst, run: cli(&as_refs(&verify_args(entry, inst, "both"))) })
        .collect();
    let mut good: Vec<&Verified> = Vec::new();
    let mut wrong = Vec::new();
    for v in &verified {
        let want = if v.inst.good { EXIT_PASS } else { EXIT_FAIL };
        if v.run.code != want {
            wrong.push(format!("{}: exit {} {}", v.tag(), v.run.code, v.run.stderr.trim()));
        }
        if v.inst.good {
            good.push(v);
        }
    }

    let results = [
        criterion_1(&all),
        if wrong.is_empty() { criterion_2(&good) } else { Err(wrong.join("; ")) },
        criterion_3(&all, &verified),
        criterion_4(&all, &verified),
        criterion_5(&good),
        criterion_6(&good),
        criterion_7(&good),
        criterion_8(&all),
        criterion_9(&all),
        criterion_10(&all),
    ];
    for (i, r) in results.iter().enumerate() {
        report(i + 1, r);
    }
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, r)| r.is_err()).map(|(i, _)| i + 1).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
