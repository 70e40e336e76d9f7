//! Linear-algebra engine: builds the graded pieces of TV/(R) one degree at a
//! time as explicit quotient spaces.
//!
//! Degree d is spanned by the products b·x_j with b a basis word of degree
//! d−1 (any word is congruent to such a combination). The ideal in degree d is
//! I_{d−1}·V + V^{d−e}·R_e, and modulo I_{d−1}·V the second summand is
//! spanned by u·r with u a basis word of degree d−e. Row-reducing those images
//! with the largest word as pivot leaves the surviving products as the basis.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::freealg::{Context, FreeElement, Word};
use crate::linalg::{Echelon, SparseVec};
use crate::scalars::Scalar;

use super::{resource_cap, Presentation};

#[derive(Debug, Clone)]
struct Level {
    basis: Vec<Word>,
    index: HashMap<Word, usize>,
    /// Normal form of the candidate b·x_j (index b*n + j) in this degree's basis.
    nf: Vec<SparseVec>,
}

/// The quotient TV/(R) in degrees 0..=bound.
#[derive(Debug, Clone)]
pub struct LaQuotient {
    ctx: Arc<Context>,
    bound: usize,
    levels: Vec<Level>,
}

type Terms<'a> = Vec<(&'a [u8], Scalar)>;

impl LaQuotient {
    pub fn build(p: &Presentation, bound: usize) -> Result<Self> {
        let ctx = p.ctx().clone();
        let n = ctx.n();
        let mut q = LaQuotient {
            ctx,
            bound,
            levels: vec![Level {
                basis: vec![Word::empty()],
                index: [(Word::empty(), 0)].into_iter().collect(),
                nf: Vec::new(),
            }],
        };
        let rels: Vec<(usize, Vec<FreeElement<Scalar>>)> = p
            .relations()
            .iter()
            .map(|r| {
                let e = r.require_homogeneous()?;
                Ok((e, (0..n).map(|j| r.right_derivative(j)).collect::<Result<Vec<_>>>()?))
            })
            .collect::<Result<_>>()?;
        for d in 1..=bound {
            let prev = &q.levels[d - 1];
            let ncand = prev.basis.len() * n;
            if ncand > resource_cap() {
                return Err(Error::Resource(format!("{ncand} spanning products in degree {d}")));
            }
            let mut ech = Echelon::new();
            for (e, parts) in &rels {
                if *e > d {
                    continue;
                }
                for u in q.levels[d - e].basis.clone() {
                    let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
                    for (j, rj) in parts.iter().enumerate() {
                        if rj.is_zero() {
                            continue;
                        }
                        let terms: Vec<(Vec<u8>, Scalar)> =
                            rj.terms().iter().map(|(w, c)| (u.concat(w).0, c.clone())).collect();
                        let view: Terms = terms.iter().map(|(w, c)| (w.as_slice(), c.clone())).collect();
                        for (b, c) in q.project_terms(d - 1, view)? {
                            add_into(&mut row, b * n + j, &c)?;
                        }
                    }
                    let row: SparseVec = row.into_iter().collect();
                    ech.insert(&row)?;
                }
            }
            ech.make_reduced()?;
            let prev = &q.levels[d - 1];
            let mut basis = Vec::new();
            let mut col_of = vec![usize::MAX; ncand];
            for (c, slot) in col_of.iter_mut().enumerate() {
                if !ech.is_pivot(c) {
                    *slot = basis.len();
                    basis.push(prev.basis[c / n].concat(&Word::letter(c % n)));
                }
            }
            let mut nf = Vec::with_capacity(ncand);
            for c in 0..ncand {
                if col_of[c] != usize::MAX {
                    nf.push(vec![(col_of[c], Scalar::one())]);
                } else {
                    let row = ech.row(c).expect("pivot row");
                    let v: SparseVec = row[..row.len() - 1].iter().map(|(j, x)| (col_of[*j], x.neg())).collect();
                    nf.push(v);
                }
            }
            let index = basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
            q.levels.push(Level { basis, index, nf });
        }
        Ok(q)
    }

    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn dim(&self, d: usize) -> usize {
        self.levels[d].basis.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.basis.len()).collect()
    }

    /// Basis words (standard monomials) of degree d, ascending.
    pub fn basis(&self, d: usize) -> &[Word] {
        &self.levels[d].basis
    }

    pub fn basis_index(&self, w: &Word) -> Option<usize> {
        self.levels.get(w.len()).and_then(|l| l.index.get(w).copied())
    }

    fn project_terms(&self, d: usize, terms: Terms) -> Result<SparseVec> {
        if d == 0 {
            let mut s = Scalar::zero();
            for (_, c) in terms {
                s = s.checked_add(&c)?;
            }
            return Ok(if s.is_zero() { Vec::new() } else { vec![(0, s)] });
        }
        // a basis word projects to itself
        if terms.len() == 1 {
            if let Some(&i) = self.levels[d].index.get(&Word(terms[0].0.to_vec())) {
                return Ok(vec![(i, terms[0].1.clone())]);
            }
        }
        let n = self.ctx.n();
        let mut groups: Vec<Terms> = vec![Vec::new(); n];
        for (w, c) in terms {
            let (last, prefix) = w.split_last().expect("degree >= 1");
            groups[*last as usize].push((prefix, c));
        }
        let level = &self.levels[d];
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (j, g) in groups.into_iter().enumerate() {
            if g.is_empty() {
                continue;
            }
            for (b, c) in self.project_terms(d - 1, g)? {
                for (col, x) in &level.nf[b * n + j] {
                    add_into(&mut acc, *col, &c.checked_mul(x)?)?;
                }
            }
        }
        Ok(acc.into_iter().collect())
    }

    /// Coordinates of the image of a homogeneous element in the basis of its degree.
    pub fn project(&self, f: &FreeElement<Scalar>) -> Result<SparseVec> {
        if f.is_zero() {
            return Ok(Vec::new());
        }
        let d = f.require_homogeneous()?;
        if d > self.bound {
            return Err(Error::BeyondBound(d, self.bound));
        }
        let view: Terms = f.terms().iter().map(|(w, c)| (w.letters(), c.clone())).collect();
        self.project_terms(d, view)
    }

    pub fn project_word(&self, w: &Word) -> Result<SparseVec> {
        if w.len() > self.bound {
            return Err(Error::BeyondBound(w.len(), self.bound));
        }
        self.project_terms(w.len(), vec![(w.letters(), Scalar::one())])
    }

    pub fn contains(&self, f: &FreeElement<Scalar>) -> Result<bool> {
        Ok(self.project(f)?.is_empty())
    }

    /// The element with the given coordinates, written in basis words.
    pub fn lift(&self, d: usize, v: &[(usize, Scalar)]) -> FreeElement<Scalar> {
        let terms = v.iter().map(|(i, c)| (self.levels[d].basis[*i].clone(), c.clone()));
        FreeElement::from_terms(&self.ctx, terms).expect("distinct basis words")
    }

    /// Reduced echelon basis of the ideal in degree d: w − lift(π(w)) for every
    /// word w that is not a basis word.
    pub fn ideal_basis(&self, d: usize) -> Result<Vec<FreeElement<Scalar>>> {
        if d > self.bound {
            return Err(Error::BeyondBound(d, self.bound));
        }
        let n = self.ctx.n();
        let total = n.checked_pow(d as u32).filter(|t| *t <= resource_cap()).ok_or_else(|| {
            Error::Resource(format!("{n}^{d} words in degree {d}"))
        })?;
        let mut out = Vec::new();
        for r in 0..total {
            let w = Word::unrank(r, d, n);
            if self.levels[d].index.contains_key(&w) {
                continue;
            }
            let nf = self.lift(d, &self.project_word(&w)?);
            out.push(FreeElement::monomial(&self.ctx, w, Scalar::one()).sub(&nf)?);
        }
        Ok(out)
    }
}

fn add_into(acc: &mut BTreeMap<usize, Scalar>, k: usize, c: &Scalar) -> Result<()> {
    match acc.remove(&k) {
        None => {
            if !c.is_zero() {
                acc.insert(k, c.clone());
            }
        }
        Some(old) => {
            let s = old.checked_add(c)?;
            if !s.is_zero() {
                acc.insert(k, s);
            }
        }
    }
    Ok(())
}
