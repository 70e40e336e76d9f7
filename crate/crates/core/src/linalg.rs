//! Sparse exact row reduction over ℚ(ζ_N).
//!
//! Rows are sorted `(column, value)` lists. The pivot of a row is its largest
//! column, so with columns numbered by deglex rank the pivot is the leading
//! word, and reduction is deterministic.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::freealg::{Context, FreeElement, Word};
use crate::scalars::Scalar;

pub type SparseVec = Vec<(usize, Scalar)>;

static MAX_COEFF_BITS: AtomicU64 = AtomicU64::new(1 << 16);

/// Bit size above which a reduced row aborts with a resource error.
pub fn set_max_coefficient_bits(bits: u64) {
    MAX_COEFF_BITS.store(bits.max(64), Ordering::Relaxed);
}

fn coeff_bits(s: &Scalar) -> u64 {
    s.coefficients().iter().map(|c| c.numer().bits() + c.denom().bits()).sum()
}

fn check_size(v: &SparseVec) -> Result<()> {
    let cap = MAX_COEFF_BITS.load(Ordering::Relaxed);
    for (_, s) in v {
        if coeff_bits(s) > cap {
            return Err(Error::Resource(format!("coefficient exceeds {cap} bits during row reduction")));
        }
    }
    Ok(())
}

fn to_map(v: &[(usize, Scalar)]) -> BTreeMap<usize, Scalar> {
    v.iter().cloned().collect()
}

/// `acc -= c * row`.
fn axpy(acc: &mut BTreeMap<usize, Scalar>, c: &Scalar, row: &[(usize, Scalar)]) -> Result<()> {
    for (j, v) in row {
        let t = c.checked_mul(v)?;
        match acc.remove(j) {
            None => {
                acc.insert(*j, t.neg());
            }
            Some(old) => {
                let s = old.checked_sub(&t)?;
                if !s.is_zero() {
                    acc.insert(*j, s);
                }
            }
        }
    }
    Ok(())
}

pub fn scale_vec(v: &[(usize, Scalar)], c: &Scalar) -> Result<SparseVec> {
    v.iter().map(|(j, x)| Ok((*j, x.checked_mul(c)?))).collect()
}

/// Row-echelon form keyed by pivot column; every stored row has pivot entry 1.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn row(&self, pivot: usize) -> Option<&SparseVec> {
        self.rows.get(&pivot)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &SparseVec)> {
        self.rows.iter()
    }

    /// Remainder of `v` after eliminating every pivot column it touches.
    pub fn reduce(&self, v: &[(usize, Scalar)]) -> Result<SparseVec> {
        let mut acc = to_map(v);
        let mut cursor: Option<usize> = None;
        loop {
            let next = match cursor {
                None => acc.keys().next_back().copied(),
                Some(c) => acc.range(..c).next_back().map(|(k, _)| *k),
            };
            let Some(col) = next else { break };
            cursor = Some(col);
            if let Some(row) = self.rows.get(&col) {
                let c = acc[&col].clone();
                axpy(&mut acc, &c, row)?;
            }
        }
        Ok(acc.into_iter().collect())
    }

    /// Adds a row; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[(usize, Scalar)]) -> Result<bool> {
        let r = self.reduce(v)?;
        let Some((piv, lead)) = r.last().cloned() else {
            return Ok(false);
        };
        let r = scale_vec(&r, &lead.inv()?)?;
        check_size(&r)?;
        self.rows.insert(piv, r);
        Ok(true)
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> Result<bool> {
        Ok(self.reduce(v)?.is_empty())
    }

    /// Back-substitutes so that no row has a nonzero entry in another row's
    /// pivot column. The result is the unique reduced echelon basis.
    pub fn make_reduced(&mut self) -> Result<()> {
        let keys: Vec<usize> = self.rows.keys().copied().collect();
        for &p in &keys {
            let row = self.rows.remove(&p).expect("pivot row");
            let (lead, tail) = row.split_last().expect("nonempty row");
            let mut reduced = self.reduce(tail)?;
            reduced.push(lead.clone());
            self.rows.insert(p, reduced);
        }
        Ok(())
    }
}

pub fn rank_of(rows: &[SparseVec]) -> Result<usize> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r)?;
    }
    Ok(e.rank())
}

/// Basis of span(a) ∩ span(b) for vectors with columns < `ncols`
/// (Zassenhaus: reduce rows (a|a) and (b|0) with the left block eliminated first).
pub fn intersect(a: &[SparseVec], b: &[SparseVec], ncols: usize) -> Result<Vec<SparseVec>> {
    let mut e = Echelon::new();
    for r in a {
        let mut v: SparseVec = r.clone();
        v.extend(r.iter().map(|(j, x)| (j + ncols, x.clone())));
        e.insert(&v)?;
    }
    for r in b {
        let v: SparseVec = r.iter().map(|(j, x)| (j + ncols, x.clone())).collect();
        e.insert(&v)?;
    }
    e.make_reduced()?;
    Ok(e.rows().filter(|(p, _)| **p < ncols).map(|(_, r)| r.clone()).collect())
}

/// Coefficients c with `target = Σ c_i basis_i`, if the target lies in the span.
pub fn express(target: &SparseVec, basis: &[SparseVec]) -> Result<Option<Vec<Scalar>>> {
    // Tracking columns sit below the data columns so data pivots come first.
    let k = basis.len();
    let mut e = Echelon::new();
    for (i, r) in basis.iter().enumerate() {
        let mut v: SparseVec = vec![(i, Scalar::one())];
        v.extend(r.iter().map(|(j, x)| (j + k, x.clone())));
        e.insert(&v)?;
    }
    let t: SparseVec = target.iter().map(|(j, x)| (j + k, x.clone())).collect();
    let rem = e.reduce(&t)?;
    if rem.iter().any(|(j, _)| *j >= k) {
        return Ok(None);
    }
    // target - Σ (rows used) = rem, where rem lives in tracking columns only:
    // the reduction subtracted combinations of (e_i | basis_i), so rem = -c.
    let mut c = vec![Scalar::zero(); k];
    for (j, x) in rem {
        c[j] = x.neg();
    }
    Ok(Some(c))
}

/// Basis of the kernel {v : M v = 0} for M given by rows over `ncols` columns.
pub fn nullspace(rows: &[SparseVec], ncols: usize) -> Result<Vec<SparseVec>> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r)?;
    }
    e.make_reduced()?;
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !e.is_pivot(*c)) {
        let mut v: SparseVec = vec![(free, Scalar::one())];
        for (p, row) in e.rows() {
            if let Some((_, x)) = row.iter().find(|(j, _)| *j == free) {
                v.push((*p, x.neg()));
            }
        }
        v.sort_by_key(|(j, _)| *j);
        out.push(v);
    }
    Ok(out)
}

/// Coordinates of a homogeneous element in the word basis (column = deglex rank).
pub fn element_to_vec(f: &FreeElement<Scalar>) -> SparseVec {
    let n = f.ctx().n();
    let mut v: SparseVec = f.terms().iter().map(|(w, c)| (w.rank(n), c.clone())).collect();
    v.sort_by_key(|(j, _)| *j);
    v
}

pub fn vec_to_element(ctx: &Arc<Context>, degree: usize, v: &[(usize, Scalar)]) -> FreeElement<Scalar> {
    let n = ctx.n();
    let terms = v.iter().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (Word::unrank(*j, degree, n), c.clone()));
    FreeElement::from_terms(ctx, terms).expect("distinct words")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    fn dense(v: &[i64]) -> SparseVec {
        v.iter().enumerate().filter(|(_, x)| **x != 0).map(|(j, x)| (j, s(*x))).collect()
    }

    #[test]
    fn rank_and_membership() {
        let rows = vec![dense(&[1, 2, 3]), dense(&[2, 4, 6]), dense(&[0, 1, 1])];
        assert_eq!(rank_of(&rows).unwrap(), 2);
        let mut e = Echelon::new();
        for r in &rows {
            e.insert(r).unwrap();
        }
        assert!(e.contains(&dense(&[1, 3, 4])).unwrap());
        assert!(!e.contains(&dense(&[0, 0, 1])).unwrap());
    }

    #[test]
    fn intersection_of_planes() {
        let a = vec![dense(&[1, 0, 0]), dense(&[0, 1, 0])];
        let b = vec![dense(&[0, 1, 0]), dense(&[0, 0, 1])];
        let i = intersect(&a, &b, 3).unwrap();
        assert_eq!(i.len(), 1);
        assert_eq!(i[0], dense(&[0, 1, 0]));
    }

    #[test]
    fn expressing_vectors() {
        let basis = vec![dense(&[1, 1, 0]), dense(&[0, 1, 1])];
        let c = express(&dense(&[2, 5, 3]), &basis).unwrap().unwrap();
        assert_eq!(c, vec![s(2), s(3)]);
        assert!(express(&dense(&[1, 0, 0]), &basis).unwrap().is_none());
    }

    #[test]
    fn kernel() {
        let rows = vec![dense(&[1, 1, 0]), dense(&[0, 1, 1])];
        let k = nullspace(&rows, 3).unwrap();
        assert_eq!(k.len(), 1);
        for r in &rows {
            let dot = k[0].iter().fold(Scalar::zero(), |acc, (j, x)| {
                let y = r.iter().find(|(i, _)| i == j).map(|(_, y)| y.clone()).unwrap_or_else(Scalar::zero);
                acc.checked_add(&x.checked_mul(&y).unwrap()).unwrap()
            });
            assert!(dot.is_zero());
        }
    }
}
