//! Rewriting engine: homogeneous noncommutative Buchberger completion
//! truncated at a degree bound.
//!
//! Degree by degree, the pending candidates (input relations and S-polynomials
//! of overlap ambiguities) are reduced by the basis built so far and then
//! inter-reduced among themselves; the survivors join the basis and spawn new
//! overlaps up to the bound. The result is the reduced Gröbner basis of the
//! ideal truncated at the bound, so normal words count the quotient exactly.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::freealg::{Context, FreeElement, Word};
use crate::linalg::Echelon;
use crate::scalars::Scalar;

use super::{resource_cap, Presentation};

type Poly = BTreeMap<Word, Scalar>;

#[derive(Debug, Clone)]
struct Rule {
    lead: Word,
    /// Monic: the lead has coefficient 1 and every other word is smaller.
    poly: Vec<(Word, Scalar)>,
}

/// An overlap processed during completion: rules (a, b) and the overlap length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverlapLog {
    pub left: usize,
    pub right: usize,
    pub overlap: usize,
}

#[derive(Debug, Clone)]
pub struct GbState {
    ctx: Arc<Context>,
    bound: usize,
    rules: Vec<Rule>,
    by_lead: HashMap<Vec<u8>, usize>,
    lead_lengths: BTreeSet<usize>,
    log: Vec<OverlapLog>,
    normal: Vec<Vec<Word>>,
    normal_index: HashMap<Word, usize>,
}

fn axpy(acc: &mut Poly, c: &Scalar, prefix: &[u8], rule: &Rule, suffix: &[u8]) -> Result<()> {
    for (w, x) in &rule.poly {
        let mut v = Vec::with_capacity(prefix.len() + w.len() + suffix.len());
        v.extend_from_slice(prefix);
        v.extend_from_slice(w.letters());
        v.extend_from_slice(suffix);
        let word = Word(v);
        let t = c.checked_mul(x)?;
        match acc.remove(&word) {
            None => {
                acc.insert(word, t.neg());
            }
            Some(old) => {
                let s = old.checked_sub(&t)?;
                if !s.is_zero() {
                    acc.insert(word, s);
                }
            }
        }
    }
    Ok(())
}

impl GbState {
    pub fn complete(p: &Presentation, bound: usize) -> Result<Self> {
        let ctx = p.ctx().clone();
        let n = ctx.n();
        let mut st = GbState {
            ctx,
            bound,
            rules: Vec::new(),
            by_lead: HashMap::new(),
            lead_lengths: BTreeSet::new(),
            log: Vec::new(),
            normal: Vec::new(),
            normal_index: HashMap::new(),
        };
        let mut pending: BTreeMap<usize, Vec<Poly>> = BTreeMap::new();
        for r in p.relations() {
            let d = r.require_homogeneous()?;
            if d <= bound {
                pending.entry(d).or_default().push(r.terms().clone());
            }
        }
        for d in 1..=bound {
            let cands = pending.remove(&d).unwrap_or_default();
            if cands.is_empty() {
                continue;
            }
            let total = n.checked_pow(d as u32).unwrap_or(usize::MAX);
            let mut ech = Echelon::new();
            for c in cands {
                let r = st.reduce_poly(c)?;
                if r.is_empty() {
                    continue;
                }
                let row: Vec<(usize, Scalar)> = r.into_iter().map(|(w, x)| (w.rank(n), x)).collect();
                ech.insert(&row)?;
            }
            if total == usize::MAX {
                return Err(Error::Resource(format!("word space of degree {d}")));
            }
            ech.make_reduced()?;
            let first_new = st.rules.len();
            for (piv, row) in ech.rows() {
                let mut poly: Vec<(Word, Scalar)> = row.iter().map(|(j, x)| (Word::unrank(*j, d, n), x.clone())).collect();
                poly.reverse();
                let lead = Word::unrank(*piv, d, n);
                st.by_lead.insert(lead.0.clone(), st.rules.len());
                st.lead_lengths.insert(d);
                st.rules.push(Rule { lead, poly });
            }
            if st.rules.len() > resource_cap() {
                return Err(Error::Resource(format!("{} rewriting rules", st.rules.len())));
            }
            for a in first_new..st.rules.len() {
                for b in 0..st.rules.len() {
                    st.overlaps(a, b, &mut pending)?;
                    if b != a {
                        st.overlaps(b, a, &mut pending)?;
                    }
                }
            }
        }
        st.normal = st.enumerate_normal_words()?;
        st.normal_index = st.normal.iter().flat_map(|l| l.iter().cloned().enumerate().map(|(i, w)| (w, i))).collect();
        Ok(st)
    }

    /// S-polynomials for suffixes of lead(a) that are prefixes of lead(b).
    fn overlaps(&mut self, a: usize, b: usize, pending: &mut BTreeMap<usize, Vec<Poly>>) -> Result<()> {
        let la = self.rules[a].lead.len();
        let lb = self.rules[b].lead.len();
        for o in 1..la.min(lb) {
            let total = la + lb - o;
            if total > self.bound {
                continue;
            }
            let (ra, rb) = (&self.rules[a], &self.rules[b]);
            if ra.lead.letters()[la - o..] != rb.lead.letters()[..o] {
                continue;
            }
            // lead(a)·v = u·lead(b)
            let v = rb.lead.letters()[o..].to_vec();
            let u = ra.lead.letters()[..la - o].to_vec();
            let mut s: Poly = BTreeMap::new();
            axpy(&mut s, &Scalar::from_int(-1), &[], ra, &v)?;
            axpy(&mut s, &Scalar::one(), &u, rb, &[])?;
            self.log.push(OverlapLog { left: a, right: b, overlap: o });
            if !s.is_empty() {
                pending.entry(total).or_default().push(s);
            }
        }
        Ok(())
    }

    fn find_factor(&self, w: &[u8]) -> Option<(usize, usize)> {
        for &len in &self.lead_lengths {
            if len > w.len() {
                break;
            }
            for i in 0..=w.len() - len {
                if let Some(&r) = self.by_lead.get(&w[i..i + len]) {
                    return Some((i, r));
                }
            }
        }
        None
    }

    fn reduce_poly(&self, mut f: Poly) -> Result<Poly> {
        let mut cursor: Option<Word> = None;
        loop {
            let next = match &cursor {
                None => f.keys().next_back().cloned(),
                Some(c) => f.range(..c.clone()).next_back().map(|(k, _)| k.clone()),
            };
            let Some(w) = next else { break };
            if let Some((i, r)) = self.find_factor(w.letters()) {
                let rule = &self.rules[r];
                let c = f[&w].clone();
                let prefix = w.letters()[..i].to_vec();
                let suffix = w.letters()[i + rule.lead.len()..].to_vec();
                axpy(&mut f, &c, &prefix, rule, &suffix)?;
                // the word itself cancelled; everything new is smaller
            }
            cursor = Some(w);
        }
        Ok(f)
    }

    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Unique deglex normal form modulo the truncated basis.
    pub fn normal_form(&self, f: &FreeElement<Scalar>) -> Result<FreeElement<Scalar>> {
        for w in f.terms().keys() {
            if w.len() > self.bound {
                return Err(Error::BeyondBound(w.len(), self.bound));
            }
        }
        let r = self.reduce_poly(f.terms().clone())?;
        FreeElement::from_terms(&self.ctx, r)
    }

    pub fn contains(&self, f: &FreeElement<Scalar>) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn is_normal_word(&self, w: &Word) -> bool {
        self.find_factor(w.letters()).is_none()
    }

    fn enumerate_normal_words(&self) -> Result<Vec<Vec<Word>>> {
        let n = self.ctx.n();
        let mut out = vec![vec![Word::empty()]];
        for d in 1..=self.bound {
            let mut next = Vec::new();
            for w in &out[d - 1] {
                for j in 0..n {
                    let v = w.concat(&Word::letter(j));
                    // prefixes are normal, so only suffixes can match a lead
                    let l = v.letters();
                    let bad = self.lead_lengths.iter().any(|&k| k <= l.len() && self.by_lead.contains_key(&l[l.len() - k..]));
                    if !bad {
                        next.push(v);
                    }
                }
            }
            if next.len() > resource_cap() {
                return Err(Error::Resource(format!("{} normal words in degree {d}", next.len())));
            }
            next.sort();
            out.push(next);
        }
        Ok(out)
    }

    /// Number of normal words in each degree 0..=bound.
    pub fn normal_word_counts(&self) -> Vec<usize> {
        self.normal.iter().map(Vec::len).collect()
    }

    /// Normal words of degree d, ascending.
    pub fn normal_words(&self, d: usize) -> &[Word] {
        &self.normal[d]
    }

    pub fn normal_word_index(&self, w: &Word) -> Option<usize> {
        self.normal_index.get(w).copied()
    }

    /// Rules as elements, in the order they were found.
    pub fn basis(&self) -> Vec<FreeElement<Scalar>> {
        self.rules
            .iter()
            .map(|r| FreeElement::from_terms(&self.ctx, r.poly.iter().cloned()).expect("distinct words"))
            .collect()
    }

    pub fn leading_words(&self) -> Vec<Word> {
        self.rules.iter().map(|r| r.lead.clone()).collect()
    }

    pub fn log(&self) -> &[OverlapLog] {
        &self.log
    }
}
