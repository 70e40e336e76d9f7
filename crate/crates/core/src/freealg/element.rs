use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{Coeff, Context, Word};
use crate::error::{Error, Result};

/// Finitely supported map from words to nonzero coefficients.
#[derive(Clone)]
pub struct FreeElement<C: Coeff> {
    ctx: Arc<Context>,
    terms: BTreeMap<Word, C>,
}

impl<C: Coeff> PartialEq for FreeElement<C> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.ctx.compatible(&other.ctx)
    }
}

impl<C: Coeff> FreeElement<C> {
    pub fn zero(ctx: &Arc<Context>) -> Self {
        FreeElement { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn monomial(ctx: &Arc<Context>, w: Word, c: C) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, c);
        FreeElement { ctx: ctx.clone(), terms }
    }

    pub fn constant(ctx: &Arc<Context>, c: C) -> Self {
        Self::monomial(ctx, Word::empty(), c)
    }

    pub fn one(ctx: &Arc<Context>) -> Self {
        Self::constant(ctx, C::one())
    }

    /// The generator with 0-based index `i`.
    pub fn generator(ctx: &Arc<Context>, i: usize) -> Result<Self> {
        if i >= ctx.n() {
            return Err(Error::IndexOutOfRange { index: i + 1, n: ctx.n() });
        }
        Ok(Self::monomial(ctx, Word::letter(i), C::one()))
    }

    pub fn word(ctx: &Arc<Context>, w: &[usize]) -> Self {
        Self::monomial(ctx, Word::from_indices(w), C::one())
    }

    /// Sums repeated words.
    pub fn from_terms(ctx: &Arc<Context>, terms: impl IntoIterator<Item = (Word, C)>) -> Result<Self> {
        let mut out = Self::zero(ctx);
        for (w, c) in terms {
            out.add_term(w, c)?;
        }
        Ok(out)
    }

    pub fn add_term(&mut self, w: Word, c: C) -> Result<()> {
        if w.letters().iter().any(|&l| l as usize >= self.ctx.n()) {
            return Err(Error::IndexOutOfRange { index: self.ctx.n() + 1, n: self.ctx.n() });
        }
        match self.terms.remove(&w) {
            None => {
                if !c.is_zero() {
                    self.terms.insert(w, c);
                }
            }
            Some(old) => {
                if let Some(s) = old.add(&c)? {
                    self.terms.insert(w, s);
                }
            }
        }
        Ok(())
    }

    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<Word, C> {
        &self.terms
    }

    pub fn coeff(&self, w: &Word) -> Option<&C> {
        self.terms.get(w)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single degree of a nonzero homogeneous element.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|w| w.len());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn require_homogeneous(&self) -> Result<usize> {
        self.homogeneous_degree().ok_or(Error::Inhomogeneous)
    }

    /// Largest word in deglex order.
    pub fn leading(&self) -> Option<(&Word, &C)> {
        self.terms.iter().next_back()
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx.compatible(&other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!(
                "generators {:?} vs {:?}",
                self.ctx.gens(),
                other.ctx.gens()
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        FreeElement { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &C) -> Result<Self> {
        let mut terms = BTreeMap::new();
        if c.is_zero() {
            return Ok(Self::zero(&self.ctx));
        }
        for (w, d) in &self.terms {
            terms.insert(w.clone(), d.mul(c)?);
        }
        Ok(FreeElement { ctx: self.ctx.clone(), terms })
    }

    /// Concatenation product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut out = Self::zero(&self.ctx);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a.mul(b)?)?;
            }
        }
        Ok(out)
    }

    /// Left multiplication by the generator with 0-based index `i`.
    pub fn lmul_gen(&self, i: usize) -> Self {
        let g = Word::letter(i);
        FreeElement { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(w, c)| (g.concat(w), c.clone())).collect() }
    }

    pub fn rmul_gen(&self, i: usize) -> Self {
        let g = Word::letter(i);
        FreeElement { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(w, c)| (w.concat(&g), c.clone())).collect() }
    }

    /// ∂_i: keeps the words starting with x_i and strips that letter
    /// (0-based `i`).
    pub fn left_derivative(&self, i: usize) -> Result<Self> {
        if i >= self.ctx.n() {
            return Err(Error::IndexOutOfRange { index: i + 1, n: self.ctx.n() });
        }
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| w.first() == Some(i))
            .map(|(w, c)| (w.slice(1, w.len()), c.clone()))
            .collect();
        Ok(FreeElement { ctx: self.ctx.clone(), terms })
    }

    /// Keeps the words ending with x_j and strips that letter.
    pub fn right_derivative(&self, j: usize) -> Result<Self> {
        if j >= self.ctx.n() {
            return Err(Error::IndexOutOfRange { index: j + 1, n: self.ctx.n() });
        }
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| w.last() == Some(j))
            .map(|(w, c)| (w.slice(0, w.len() - 1), c.clone()))
            .collect();
        Ok(FreeElement { ctx: self.ctx.clone(), terms })
    }

    /// Rescales every word by a word-dependent coefficient.
    pub fn scale_words(&self, f: impl Fn(&Word) -> Result<C>) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            terms.insert(w.clone(), c.mul(&f(w)?)?);
        }
        Ok(FreeElement { ctx: self.ctx.clone(), terms })
    }

    pub fn map_coeffs<D: Coeff>(&self, ctx: &Arc<Context>, f: impl Fn(&C) -> Result<D>) -> Result<FreeElement<D>> {
        let mut out = FreeElement::zero(ctx);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?)?;
        }
        Ok(out)
    }

    pub fn with_ctx(&self, ctx: &Arc<Context>) -> Result<Self> {
        if !self.ctx.compatible(ctx) {
            return Err(Error::ContextMismatch("incompatible context".into()));
        }
        Ok(FreeElement { ctx: ctx.clone(), terms: self.terms.clone() })
    }

    /// Canonical text: terms in ascending deglex order.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (w, c) in &self.terms {
            let (neg, body) = c.render(&self.ctx);
            let word = self.ctx.word_text(w);
            let term = match (body == "1", w.is_empty()) {
                (true, true) => "1".to_string(),
                (true, false) => word,
                (false, true) => body,
                (false, false) => format!("{body}*{word}"),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }
}

impl<C: Coeff> fmt::Display for FreeElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<C: Coeff> fmt::Debug for FreeElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeElement({})", self.to_text())
    }
}
