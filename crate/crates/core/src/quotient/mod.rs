//! Truncated graded quotients TV/(R), computed by two independent engines.

mod gb;
mod la;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freealg::{Context, FreeElement, Word};
use crate::linalg::{element_to_vec, rank_of, SparseVec};
use crate::scalars::Scalar;

pub use gb::{GbState, OverlapLog};
pub use la::LaQuotient;

static RESOURCE_CAP: AtomicUsize = AtomicUsize::new(2_000_000);

/// Largest number of words, spanning products or rules any single degree may hold.
pub fn resource_cap() -> usize {
    RESOURCE_CAP.load(Ordering::Relaxed)
}

pub fn set_resource_cap(cap: usize) {
    RESOURCE_CAP.store(cap, Ordering::Relaxed);
}

/// Homogeneous relations over a context, each scaled so its largest word has
/// coefficient 1.
#[derive(Debug, Clone)]
pub struct Presentation {
    ctx: Arc<Context>,
    relations: Vec<FreeElement<Scalar>>,
    label: String,
}

impl Presentation {
    pub fn new(ctx: &Arc<Context>, relations: Vec<FreeElement<Scalar>>, label: &str) -> Result<Self> {
        let mut rels = Vec::new();
        for r in relations {
            if !r.ctx().compatible(ctx) {
                return Err(Error::ContextMismatch("relation over another context".into()));
            }
            if r.is_zero() {
                continue;
            }
            r.require_homogeneous()?;
            let (_, lead) = r.leading().expect("nonzero");
            let r = r.scale(&lead.inv()?)?.with_ctx(ctx)?;
            if !rels.contains(&r) {
                rels.push(r);
            }
        }
        Ok(Presentation { ctx: ctx.clone(), relations: rels, label: label.to_string() })
    }

    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn relations(&self) -> &[FreeElement<Scalar>] {
        &self.relations
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.relations.iter().map(|r| r.homogeneous_degree().unwrap_or(0)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    La,
    Gb,
    Both,
}

impl Engine {
    pub fn parse(s: &str) -> Option<Engine> {
        match s {
            "la" => Some(Engine::La),
            "gb" => Some(Engine::Gb),
            "both" => Some(Engine::Both),
            _ => None,
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::La => "la",
            Engine::Gb => "gb",
            Engine::Both => "both",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeTable {
    pub bound: usize,
    pub dims: Vec<usize>,
    pub engine: Engine,
}

impl DegreeTable {
    pub fn to_tsv(&self) -> String {
        self.dims.iter().enumerate().map(|(k, d)| format!("{k}\t{d}\n")).collect()
    }
}

/// A presentation computed to a bound by one or both engines.
#[derive(Debug, Clone)]
pub struct Quotient {
    presentation: Presentation,
    bound: usize,
    engine: Engine,
    la: Option<LaQuotient>,
    gb: Option<GbState>,
}

impl Quotient {
    /// Runs the requested engines; with both, any dimension mismatch is an error.
    pub fn compute(p: &Presentation, bound: usize, engine: Engine) -> Result<Self> {
        let la = match engine {
            Engine::La | Engine::Both => Some(LaQuotient::build(p, bound)?),
            Engine::Gb => None,
        };
        let gb = match engine {
            Engine::Gb | Engine::Both => Some(GbState::complete(p, bound)?),
            Engine::La => None,
        };
        if let (Some(la), Some(gb)) = (&la, &gb) {
            let (a, b) = (la.dims(), gb.normal_word_counts());
            if let Some(d) = (0..=bound).find(|&d| a[d] != b[d]) {
                return Err(Error::EngineDisagreement { degree: d, la: a[d], gb: b[d] });
            }
        }
        Ok(Quotient { presentation: p.clone(), bound, engine, la, gb })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn ctx(&self) -> &Arc<Context> {
        self.presentation.ctx()
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn la(&self) -> Option<&LaQuotient> {
        self.la.as_ref()
    }

    pub fn gb(&self) -> Option<&GbState> {
        self.gb.as_ref()
    }

    pub fn dims(&self) -> Vec<usize> {
        match (&self.la, &self.gb) {
            (Some(la), _) => la.dims(),
            (None, Some(gb)) => gb.normal_word_counts(),
            _ => unreachable!("at least one engine"),
        }
    }

    pub fn dim(&self, d: usize) -> usize {
        self.dims()[d]
    }

    pub fn table(&self) -> DegreeTable {
        DegreeTable { bound: self.bound, dims: self.dims(), engine: self.engine }
    }

    /// Basis monomials of degree d in the coordinates used by `coords`.
    pub fn basis(&self, d: usize) -> Vec<Word> {
        match (&self.la, &self.gb) {
            (Some(la), _) => la.basis(d).to_vec(),
            (None, Some(gb)) => gb.normal_words(d).to_vec(),
            _ => unreachable!("at least one engine"),
        }
    }

    /// Coordinates of the image of a homogeneous element in the quotient.
    pub fn coords(&self, f: &FreeElement<Scalar>) -> Result<SparseVec> {
        if let Some(la) = &self.la {
            return la.project(f);
        }
        let gb = self.gb.as_ref().expect("at least one engine");
        if !f.is_zero() {
            f.require_homogeneous()?;
        }
        let nf = gb.normal_form(f)?;
        let mut v: SparseVec = nf
            .terms()
            .iter()
            .map(|(w, c)| (gb.normal_word_index(w).expect("normal word"), c.clone()))
            .collect();
        v.sort_by_key(|(i, _)| *i);
        Ok(v)
    }

    /// Ideal membership; with both engines the answers must coincide.
    pub fn contains(&self, f: &FreeElement<Scalar>) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        f.require_homogeneous()?;
        let a = self.la.as_ref().map(|la| la.contains(f)).transpose()?;
        let b = self.gb.as_ref().map(|gb| gb.contains(f)).transpose()?;
        match (a, b) {
            (Some(x), Some(y)) if x != y => {
                Err(Error::Defect(format!("membership of {f} differs between engines")))
            }
            (Some(x), _) | (None, Some(x)) => Ok(x),
            (None, None) => unreachable!("at least one engine"),
        }
    }

    /// Deglex normal form: the GB normal form, or the LA lift in basis words.
    pub fn normal_form(&self, f: &FreeElement<Scalar>) -> Result<FreeElement<Scalar>> {
        if let Some(gb) = &self.gb {
            return gb.normal_form(f);
        }
        let la = self.la.as_ref().expect("at least one engine");
        if f.is_zero() {
            return Ok(f.clone());
        }
        let d = f.require_homogeneous()?;
        Ok(la.lift(d, &la.project(f)?))
    }
}

/// Degree-d part of the ideal, as a reduced echelon basis.
pub fn ideal_basis(p: &Presentation, d: usize) -> Result<Vec<FreeElement<Scalar>>> {
    LaQuotient::build(p, d)?.ideal_basis(d)
}

pub fn hilbert_table(p: &Presentation, bound: usize, engine: Engine) -> Result<DegreeTable> {
    Ok(Quotient::compute(p, bound, engine)?.table())
}

pub fn normal_form(f: &FreeElement<Scalar>, p: &Presentation, bound: usize) -> Result<FreeElement<Scalar>> {
    GbState::complete(p, bound)?.normal_form(f)
}

pub fn membership(f: &FreeElement<Scalar>, p: &Presentation) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    let d = f.require_homogeneous()?;
    Quotient::compute(p, d, Engine::Both)?.contains(f)
}

/// First degree ≤ `upto` in which the two ideals differ, if any.
///
/// The degree-e part of an ideal only depends on generators of degree ≤ e,
/// so the ideals first differ at the lowest degree of a generator of one
/// that is not in the other.
pub fn first_ideal_difference(p: &Presentation, q: &Presentation, upto: usize) -> Result<Option<usize>> {
    if !p.ctx().compatible(q.ctx()) {
        return Err(Error::ContextMismatch("presentations over different contexts".into()));
    }
    let top = p.degrees().into_iter().chain(q.degrees()).filter(|&d| d <= upto).max().unwrap_or(0);
    let (lp, lq) = (LaQuotient::build(p, top)?, LaQuotient::build(q, top)?);
    let mut first: Option<usize> = None;
    for (gens, other) in [(q, &lp), (p, &lq)] {
        for r in gens.relations() {
            let d = r.require_homogeneous()?;
            if d <= upto && first.is_none_or(|f| d < f) && !other.contains(r)? {
                first = Some(d);
            }
        }
    }
    Ok(first)
}

/// Degrees in which the spans of the defining relations differ.
pub fn relation_span_differences(p: &Presentation, q: &Presentation) -> Result<Vec<usize>> {
    if !p.ctx().compatible(q.ctx()) {
        return Err(Error::ContextMismatch("presentations over different contexts".into()));
    }
    let degrees: BTreeSet<usize> = p.degrees().into_iter().chain(q.degrees()).collect();
    let mut out = Vec::new();
    for d in degrees {
        let rows = |x: &Presentation| -> Vec<SparseVec> {
            x.relations().iter().filter(|r| r.homogeneous_degree() == Some(d)).map(element_to_vec).collect()
        };
        let (a, b) = (rows(p), rows(q));
        let joint: Vec<SparseVec> = a.iter().chain(&b).cloned().collect();
        let (ra, rb, rj) = (rank_of(&a)?, rank_of(&b)?, rank_of(&joint)?);
        if ra != rj || rb != rj {
            out.push(d);
        }
    }
    Ok(out)
}
