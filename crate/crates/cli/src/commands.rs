use std::fmt::Write as _;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context as _, Result};
use normext::certify::{build_extension, certify, Certificate, Workspace};
use normext::family::{fiber, flatness_probe, zhang_certificate, FiberPoint, FlatnessReport};
use normext::freealg::{parse_tuple, Coeff, Context, FreeElement};
use normext::quotient::{first_ideal_difference, DegreeTable, Engine, Presentation, Quotient};
use normext::scalars::{Scalar, UnitScalar};
use normext::superpotential::{superpotential_from_relations, DiagonalMap, Superpotential};
use normext::tuples::{family_contains, goodness_system, matrix_goodness_system, solve_units, ConstraintSystem, SolutionFamily};
use normext::Error;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::args::Common;
use crate::corpus::{self, Entry, Source};
use crate::load::{load, proportional, tuple_or_default, Loaded};

/// A finished report; `pass` decides the exit code.
pub struct Output {
    pub pass: bool,
    pub json: Value,
    pub tsv: String,
}

fn output(pass: bool, report: &impl Serialize, tsv: String) -> Result<Output> {
    Ok(Output { pass, json: serde_json::to_value(report)?, tsv })
}

fn texts<C: Coeff>(v: &[C], ctx: &Context) -> Vec<String> {
    v.iter().map(|c| c.text(ctx)).collect()
}

fn default_bound(c: &Common, m: usize) -> usize {
    c.bound.unwrap_or(2 * m + 4)
}

fn omitted(c: &Common, ctx: &Context) -> Result<usize> {
    let k = c.omit.ok_or_else(|| anyhow!("--omit is required"))?;
    Ok(ctx.index(k)?)
}

fn lambda_names(d: usize) -> Vec<String> {
    match d {
        0 => Vec::new(),
        1 => vec!["lambda".to_string()],
        _ => (1..=d).map(|i| format!("lambda{i}")).collect(),
    }
}

#[derive(Serialize)]
struct SuperpotentialReport {
    algebra: String,
    degree: usize,
    from_relations: bool,
    twisted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    twist: Vec<String>,
    calabi_yau: bool,
    independent: bool,
    relations: Vec<String>,
}

pub fn check_superpotential(c: &Common) -> Result<Output> {
    let l = load(&c.path, c.assign.as_deref())?;
    let degree = l.w.require_homogeneous()?;
    let mut r = SuperpotentialReport {
        algebra: l.name().to_string(),
        degree,
        from_relations: l.from_relations,
        twisted: false,
        reason: None,
        twist: Vec::new(),
        calabi_yau: false,
        independent: false,
        relations: Vec::new(),
    };
    match l.superpotential() {
        Ok(sp) => {
            r.twisted = true;
            r.twist = texts(&sp.q, &l.ctx);
            r.calabi_yau = sp.is_calabi_yau();
            match sp.check_independent() {
                Ok(()) => r.independent = true,
                Err(e) => r.reason = Some(e.to_string()),
            }
            r.relations = sp.f.iter().map(FreeElement::to_text).collect();
        }
        Err(e) => match e.downcast_ref::<Error>() {
            Some(Error::NoDiagonalTwist(_)) | Some(Error::Defect(_)) => r.reason = Some(e.to_string()),
            _ => return Err(e),
        },
    }
    let mut tsv = format!("twisted\t{}\ncalabi_yau\t{}\nindependent\t{}\n", r.twisted, r.calabi_yau, r.independent);
    for (i, q) in r.twist.iter().enumerate() {
        writeln!(tsv, "q{}\t{q}", i + 1)?;
    }
    output(r.twisted && r.independent, &r, tsv)
}

#[derive(Serialize)]
struct DeriveReport {
    algebra: String,
    w: String,
    twist: Vec<String>,
    relations: Vec<String>,
    recovered_w: String,
    proportional: bool,
}

pub fn derive(c: &Common) -> Result<Output> {
    let l = load(&c.path, c.assign.as_deref())?;
    let sp = l.superpotential()?;
    let recovered = superpotential_from_relations(&sp.f)?;
    let r = DeriveReport {
        algebra: l.name().to_string(),
        w: sp.w.to_text(),
        twist: texts(&sp.q, &l.ctx),
        relations: sp.f.iter().map(FreeElement::to_text).collect(),
        recovered_w: recovered.to_text(),
        proportional: proportional(&sp.w, &recovered),
    };
    let mut tsv = format!("w\t{}\n", r.w);
    for (i, f) in r.relations.iter().enumerate() {
        writeln!(tsv, "f{}\t{f}", i + 1)?;
    }
    writeln!(tsv, "recovered\t{}", r.recovered_w)?;
    output(r.proportional, &r, tsv)
}

#[derive(Serialize)]
struct TupleSystemReport {
    k: usize,
    q_k: String,
    equations: usize,
    free_parameters: usize,
    families: Vec<String>,
    /// The coefficient-matrix route gives the same equations and solutions.
    routes_agree: bool,
}

#[derive(Serialize)]
struct TuplesReport {
    algebra: String,
    twist: Vec<String>,
    systems: Vec<TupleSystemReport>,
}

fn solutions_agree(a: &ConstraintSystem, fa: &[SolutionFamily], b: &ConstraintSystem, fb: &[SolutionFamily]) -> bool {
    let points = |f: &[SolutionFamily]| f.iter().flat_map(|f| f.points()).collect::<Vec<_>>();
    let free = |f: &[SolutionFamily]| f.iter().map(|f| f.free.len()).collect::<Vec<_>>();
    a.row_set() == b.row_set()
        && fa.len() == fb.len()
        && free(fa) == free(fb)
        && points(fa).iter().all(|p| b.satisfied_by(p))
        && points(fb).iter().all(|p| a.satisfied_by(p))
}

fn solve_system(sp: &Superpotential<UnitScalar>, k: usize) -> Result<(ConstraintSystem, Vec<SolutionFamily>, bool)> {
    let sys = goodness_system(sp, k)?;
    let fams = solve_units(&sys)?;
    let msys = matrix_goodness_system(sp, k)?;
    let mfams = solve_units(&msys)?;
    let agree = solutions_agree(&sys, &fams, &msys, &mfams);
    Ok((sys, fams, agree))
}

fn render_families(fams: &[SolutionFamily], ctx: &Context) -> Vec<String> {
    fams.iter().flat_map(|f| f.render(ctx, &lambda_names(f.free.len()))).collect()
}

pub fn solve_tuples(c: &Common) -> Result<Output> {
    let l = load(&c.path, c.assign.as_deref())?;
    let ctx = l.file.ctx.clone();
    let sp = Superpotential::new(l.unit_w(&ctx)?)?;
    let ks: Vec<usize> = match c.omit {
        Some(_) => vec![omitted(c, &ctx)?],
        None => (0..sp.n()).collect(),
    };
    let mut systems = Vec::new();
    for k in ks {
        let (sys, fams, routes_agree) = solve_system(&sp, k)?;
        systems.push(TupleSystemReport {
            k: k + 1,
            q_k: sp.q[k].text(&ctx),
            equations: sys.rows.len(),
            free_parameters: fams.iter().map(|f| f.free.len()).max().unwrap_or(0),
            families: render_families(&fams, &ctx),
            routes_agree,
        });
    }
    let pass = systems.iter().all(|s| s.routes_agree);
    let mut tsv = String::new();
    for s in &systems {
        for f in &s.families {
            writeln!(tsv, "{}\t{f}", s.k)?;
        }
    }
    let r = TuplesReport { algebra: l.name().to_string(), twist: texts(&sp.q, &ctx), systems };
    output(pass, &r, tsv)
}

#[derive(Serialize)]
struct RelationText {
    degree: usize,
    text: String,
}

#[derive(Serialize)]
struct ExtensionReport {
    algebra: String,
    k: usize,
    p: Vec<String>,
    omega: String,
    relations: Vec<RelationText>,
}

struct Prepared {
    loaded: Loaded,
    sp: Superpotential<Scalar>,
    k: usize,
    p: Vec<Scalar>,
}

fn prepare(c: &Common) -> Result<Prepared> {
    let loaded = load(&c.path, c.assign.as_deref())?;
    let k = omitted(c, &loaded.ctx)?;
    let sp = loaded.superpotential()?;
    let p = tuple_or_default(&sp, k, c.p.as_deref())?;
    Ok(Prepared { loaded, sp, k, p })
}

pub fn build(c: &Common) -> Result<Output> {
    let pr = prepare(c)?;
    let spec = build_extension(&pr.sp, &pr.p, pr.k, pr.loaded.name())?;
    let r = ExtensionReport {
        algebra: pr.loaded.name().to_string(),
        k: pr.k + 1,
        p: texts(&pr.p, &pr.loaded.ctx),
        omega: spec.omega.to_text(),
        relations: spec
            .presentation
            .relations()
            .iter()
            .map(|f| RelationText { degree: f.homogeneous_degree().unwrap_or(0), text: f.to_text() })
            .collect(),
    };
    let mut tsv = format!("omega\t{}\n", r.omega);
    for rel in &r.relations {
        writeln!(tsv, "{}\t{}", rel.degree, rel.text)?;
    }
    output(true, &r, tsv)
}

#[derive(Serialize)]
struct HilbertOut {
    algebra: String,
    presentation: String,
    table: DegreeTable,
}

pub fn hilbert(c: &Common) -> Result<Output> {
    let loaded = load(&c.path, c.assign.as_deref())?;
    let sp = loaded.superpotential()?;
    let bound = default_bound(c, sp.m);
    let engine: Engine = c.engine.into();
    let presentation = match c.omit {
        Some(_) => {
            let k = omitted(c, &loaded.ctx)?;
            let p = tuple_or_default(&sp, k, c.p.as_deref())?;
            build_extension(&sp, &p, k, "D")?.presentation
        }
        None => Presentation::new(&loaded.ctx, sp.f.clone(), "A")?,
    };
    let q = Quotient::compute(&presentation, bound, engine)?;
    let r = HilbertOut {
        algebra: loaded.name().to_string(),
        presentation: presentation.label().to_string(),
        table: q.table(),
    };
    let tsv = r.table.to_tsv();
    output(true, &r, tsv)
}

pub fn verify(c: &Common) -> Result<Output> {
    let pr = prepare(c)?;
    let bound = default_bound(c, pr.sp.m);
    let spec = build_extension(&pr.sp, &pr.p, pr.k, pr.loaded.name())?;
    let ws = Workspace::new(spec, bound, c.engine.into())?;
    let cert = certify(&ws)?;
    let tsv = certificate_tsv(&cert)?;
    output(cert.pass, &cert, tsv)
}

fn certificate_tsv(cert: &Certificate) -> Result<String> {
    let mut s = String::new();
    for ch in &cert.checks {
        writeln!(s, "{}\t{}\t{}", ch.name, if ch.pass { "pass" } else { "fail" }, ch.witness.as_deref().unwrap_or(""))?;
    }
    let join = |v: &[usize]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
    writeln!(s, "A\t{}", join(&cert.tables.a.dims))?;
    writeln!(s, "D\t{}", join(&cert.tables.d.dims))?;
    Ok(s)
}

#[derive(Serialize)]
struct CoordinateSpan {
    k: usize,
    /// The generated ideals agree in every degree up to the bound.
    equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_difference: Option<usize>,
}

#[derive(Serialize)]
struct FamilyReport {
    algebra: String,
    bound: usize,
    flatness: FlatnessReport,
    coordinate_spans: Vec<CoordinateSpan>,
}

fn default_points(n: usize) -> Vec<Vec<i64>> {
    let mut pts: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    pts.push(vec![1; n]);
    pts.push((1..=n as i64).collect());
    pts
}

pub fn family_probe(c: &Common, points: Option<&str>) -> Result<Output> {
    let loaded = load(&c.path, c.assign.as_deref())?;
    let sp = loaded.superpotential()?;
    let n = sp.n();
    let pts: Vec<FiberPoint> = match points {
        Some(text) => text
            .split(';')
            .map(|t| {
                let v: Vec<Scalar> = parse_tuple(t, &loaded.ctx)?;
                if v.len() != n {
                    bail!("point `{}` has {} coordinates for {n} generators", t.trim(), v.len());
                }
                Ok(FiberPoint::new(v)?)
            })
            .collect::<Result<_>>()?,
        None => default_points(n).iter().map(|v| FiberPoint::from_ints(v)).collect::<normext::Result<_>>()?,
    };
    let bound = default_bound(c, sp.m);
    let flatness = flatness_probe(&sp, &pts, bound, c.engine.into())?;
    let mut coordinate_spans = Vec::new();
    if sp.is_calabi_yau() {
        let ones = vec![Scalar::one(); n];
        for k in 0..n {
            let point = FiberPoint::from_ints(&default_points(n)[k])?;
            let (fib, _) = fiber(&sp, &point)?;
            let ext = build_extension(&sp, &ones, k, "D")?;
            let diff = first_ideal_difference(&fib, &ext.presentation, bound)?;
            coordinate_spans.push(CoordinateSpan { k: k + 1, equal: diff.is_none(), first_difference: diff });
        }
    }
    let pass = flatness.pass && coordinate_spans.iter().all(|s| s.equal);
    let mut tsv = flatness.to_tsv();
    for s in &coordinate_spans {
        writeln!(tsv, "span k={}\t{}", s.k, s.equal)?;
    }
    let r = FamilyReport { algebra: loaded.name().to_string(), bound, flatness, coordinate_spans };
    output(pass, &r, tsv)
}

#[derive(Serialize)]
struct ZhangCaseReport {
    sigma: Vec<String>,
    hdet: String,
    p_prime: Vec<String>,
    twisted_w: String,
    spans_equal: bool,
    span_differences: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_difference: Option<usize>,
}

#[derive(Serialize)]
struct ZhangOut {
    algebra: String,
    k: usize,
    p: Vec<String>,
    bound: usize,
    cases: Vec<ZhangCaseReport>,
}

pub fn zhang(c: &Common, sigma: &str) -> Result<Output> {
    let pr = prepare(c)?;
    let ctx = pr.loaded.ctx.clone();
    let sigmas: Vec<DiagonalMap<Scalar>> = sigma
        .split(';')
        .map(|t| {
            let s: Vec<Scalar> = parse_tuple(t, &ctx)?;
            if s.len() != pr.sp.n() {
                bail!("σ = `{}` has {} entries for {} generators", t.trim(), s.len(), pr.sp.n());
            }
            Ok(DiagonalMap::new(s))
        })
        .collect::<Result<_>>()?;
    let bound = default_bound(c, pr.sp.m);
    let mut cases = Vec::new();
    for s in &sigmas {
        let z = zhang_certificate(&pr.sp, &pr.p, pr.k, s, bound)?;
        cases.push(ZhangCaseReport {
            sigma: texts(&s.s, &ctx),
            hdet: z.data.hdet.text(&ctx),
            p_prime: texts(&z.data.p_prime, &ctx),
            twisted_w: z.twisted_w.to_text(),
            spans_equal: z.spans_equal && z.first_difference.is_none(),
            span_differences: z.span_differences,
            first_difference: z.first_difference,
        });
    }
    let pass = cases.iter().all(|z| z.spans_equal);
    let mut tsv = String::new();
    for z in &cases {
        writeln!(tsv, "({})\t({})\t{}", z.sigma.join(","), z.p_prime.join(","), z.spans_equal)?;
    }
    let r = ZhangOut { algebra: pr.loaded.name().to_string(), k: pr.k + 1, p: texts(&pr.p, &ctx), bound, cases };
    output(pass, &r, tsv)
}

#[derive(Serialize)]
struct EntryVerdict {
    entry: String,
    contained: bool,
}

#[derive(Serialize)]
struct TableRowReport {
    k: usize,
    families: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<Source>,
    entries: Vec<EntryVerdict>,
    /// Computed tuples the table does not list, or the number of free
    /// parameters when the family is not finite.
    surplus: Vec<String>,
    routes_agree: bool,
    pass: bool,
}

#[derive(Serialize)]
struct TableEntryReport {
    algebra: String,
    label: String,
    row: Option<String>,
    twist: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    rows: Vec<TableRowReport>,
    pass: bool,
}

#[derive(Serialize)]
struct TablesReport {
    entries: Vec<TableEntryReport>,
    pass: bool,
}

fn table_entry(e: &Entry) -> Result<TableEntryReport> {
    let loaded = load(&e.alg, None)?;
    let sc = &e.sidecar;
    let ctx: Arc<Context> = if sc.table.iter().any(|r| r.lambda) {
        loaded.file.ctx.with_params(&["lambda"])?
    } else {
        loaded.file.ctx.clone()
    };
    let sp = Superpotential::new(loaded.unit_w(&ctx)?)?;
    let mut rows = Vec::new();
    let note = if sc.table.is_empty() {
        for k in 0..sp.n() {
            let (_, fams, routes_agree) = solve_system(&sp, k)?;
            rows.push(TableRowReport {
                k: k + 1,
                families: render_families(&fams, &ctx),
                source: None,
                entries: Vec::new(),
                surplus: Vec::new(),
                routes_agree,
                pass: routes_agree,
            });
        }
        Some("no table row; families only".to_string())
    } else {
        for row in &sc.table {
            let k = ctx.index(row.k)?;
            let (sys, fams, routes_agree) = solve_system(&sp, k)?;
            let msys = matrix_goodness_system(&sp, k)?;
            let mfams = solve_units(&msys)?;
            let parsed: Vec<Vec<UnitScalar>> = row
                .entries
                .iter()
                .map(|t| parse_tuple(t, &ctx).with_context(|| format!("table entry `{t}`")))
                .collect::<Result<_>>()?;
            let entries: Vec<EntryVerdict> = row
                .entries
                .iter()
                .zip(&parsed)
                .map(|(t, p)| EntryVerdict {
                    entry: t.clone(),
                    contained: family_contains(&sys, &fams, p) && family_contains(&msys, &mfams, p),
                })
                .collect();
            let mut surplus = Vec::new();
            for f in &fams {
                if f.free.is_empty() {
                    let shown = f.render(&ctx, &[]);
                    for (pt, text) in f.points().iter().zip(shown) {
                        if !parsed.contains(pt) {
                            surplus.push(text);
                        }
                    }
                } else {
                    surplus.push(format!("{} free parameter(s)", f.free.len()));
                }
            }
            let pass = routes_agree && entries.iter().all(|v| v.contained);
            rows.push(TableRowReport {
                k: row.k,
                families: render_families(&fams, &ctx),
                source: Some(row.source),
                entries,
                surplus,
                routes_agree,
                pass,
            });
        }
        None
    };
    let pass = rows.iter().all(|r| r.pass);
    Ok(TableEntryReport {
        algebra: loaded.name().to_string(),
        label: sc.label.clone(),
        row: sc.row.clone(),
        twist: texts(&sp.q, &ctx),
        note,
        rows,
        pass,
    })
}

pub fn tables(dir: &std::path::Path) -> Result<Output> {
    let entries = corpus::entries(dir)?;
    let reports: Vec<TableEntryReport> =
        entries.par_iter().map(table_entry).collect::<Vec<Result<_>>>().into_iter().collect::<Result<_>>()?;
    let pass = reports.iter().all(|r| r.pass);
    let mut tsv = String::new();
    for r in &reports {
        if let Some(note) = &r.note {
            writeln!(tsv, "{}\t-\t{note}", r.algebra)?;
        }
        for row in &r.rows {
            for v in &row.entries {
                writeln!(tsv, "{}\t{}\t{}\t{}", r.algebra, row.k, v.entry, if v.contained { "contained" } else { "missing" })?;
            }
        }
    }
    output(pass, &TablesReport { entries: reports, pass }, tsv)
}
