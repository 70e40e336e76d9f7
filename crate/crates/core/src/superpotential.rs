//! Twisted superpotentials: derivative bundles, the twist Q, the coefficient
//! matrix M, recovery of w from its relations, and diagonal maps.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::freealg::{Coeff, Context, FreeElement, Word};
use crate::linalg::{element_to_vec, intersect, rank_of, vec_to_element, SparseVec};
use crate::scalars::{specialize, Assignment, Scalar, UnitScalar};

/// f_i = ∂_i w, stripping the leading letter.
pub fn cyclic_derivatives<C: Coeff>(w: &FreeElement<C>) -> Result<Vec<FreeElement<C>>> {
    let d = w.require_homogeneous()?;
    if d < 2 {
        return Err(Error::Invalid(format!("superpotential of degree {d}")));
    }
    (0..w.ctx().n()).map(|i| w.left_derivative(i)).collect()
}

/// g_i, stripping the trailing letter: w = Σ g_i x_i.
pub fn trailing_bundle<C: Coeff>(w: &FreeElement<C>) -> Result<Vec<FreeElement<C>>> {
    (0..w.ctx().n()).map(|i| w.right_derivative(i)).collect()
}

/// The scalar c with g = c·f, if there is one.
fn ratio<C: Coeff>(g: &FreeElement<C>, f: &FreeElement<C>) -> Result<Option<C>> {
    let (Some((wf, cf)), Some((wg, cg))) = (f.leading(), g.leading()) else {
        return Ok(None);
    };
    if wf != wg || f.len() != g.len() {
        return Ok(None);
    }
    let c = cg.mul(&cf.inv()?)?;
    if f.scale(&c)? == *g {
        Ok(Some(c))
    } else {
        Ok(None)
    }
}

/// The diagonal Q with g_i = q_i f_i for all i.
pub fn twist_of<C: Coeff>(w: &FreeElement<C>) -> Result<Vec<C>> {
    let f = cyclic_derivatives(w)?;
    let g = trailing_bundle(w)?;
    let ctx = w.ctx();
    let mut q = Vec::with_capacity(f.len());
    for (i, (fi, gi)) in f.iter().zip(&g).enumerate() {
        let name = &ctx.gens()[i];
        q.push(match (fi.is_zero(), gi.is_zero()) {
            (true, true) => C::one(),
            (true, false) => {
                return Err(Error::NoDiagonalTwist(format!("∂_{name} w = 0 but w has words ending in {name}")))
            }
            (false, true) => {
                return Err(Error::NoDiagonalTwist(format!("w has no words ending in {name} but ∂_{name} w ≠ 0")))
            }
            (false, false) => ratio(gi, fi)?.ok_or_else(|| {
                Error::NoDiagonalTwist(format!("trailing part at {name} is not a multiple of ∂_{name} w"))
            })?,
        });
    }
    Ok(q)
}

pub fn is_superpotential<C: Coeff>(w: &FreeElement<C>) -> bool {
    twist_of(w).is_ok_and(|q| q.iter().all(|c| c.is_one()))
}

/// w together with its derivative bundles and twist.
#[derive(Debug, Clone)]
pub struct Superpotential<C: Coeff> {
    pub w: FreeElement<C>,
    /// Degree of the relations; w has degree m+1.
    pub m: usize,
    pub f: Vec<FreeElement<C>>,
    pub g: Vec<FreeElement<C>>,
    pub q: Vec<C>,
}

impl<C: Coeff> Superpotential<C> {
    /// Recognizes a twisted superpotential; fails when no diagonal twist exists.
    pub fn new(w: FreeElement<C>) -> Result<Self> {
        let f = cyclic_derivatives(&w)?;
        let g = trailing_bundle(&w)?;
        let q = twist_of(&w)?;
        let m = w.require_homogeneous()? - 1;
        let s = Superpotential { w, m, f, g, q };
        s.check_bundles()?;
        Ok(s)
    }

    pub fn ctx(&self) -> &Arc<Context> {
        self.w.ctx()
    }

    pub fn n(&self) -> usize {
        self.ctx().n()
    }

    pub fn is_calabi_yau(&self) -> bool {
        self.q.iter().all(|c| c.is_one())
    }

    /// Σ x_i f_i = w = Σ q_i f_i x_i, checked exactly.
    pub fn check_bundles(&self) -> Result<()> {
        let mut left = FreeElement::zero(self.ctx());
        let mut right = FreeElement::zero(self.ctx());
        for i in 0..self.n() {
            left = left.add(&self.f[i].lmul_gen(i))?;
            right = right.add(&self.f[i].scale(&self.q[i])?.rmul_gen(i))?;
        }
        if left != self.w || right != self.w {
            return Err(Error::Defect("derivative bundles do not reassemble w".into()));
        }
        Ok(())
    }

    pub fn coefficient_matrix(&self) -> Result<CoeffMatrix<C>> {
        coefficient_matrix(&self.w, Some(&self.q))
    }

    pub fn map_coeffs<D: Coeff>(&self, ctx: &Arc<Context>, f: impl Fn(&C) -> Result<D> + Copy) -> Result<Superpotential<D>> {
        let w = self.w.map_coeffs(ctx, f)?;
        Superpotential::new(w)
    }
}

impl Superpotential<UnitScalar> {
    /// Field-coefficient version under the context's assignment.
    pub fn specialize(&self, ctx: &Arc<Context>) -> Result<Superpotential<Scalar>> {
        let a: Assignment = ctx.assignment().clone();
        self.map_coeffs(ctx, |u| specialize(u, &a, 0))
    }
}

impl Superpotential<Scalar> {
    /// The derivatives must be linearly independent for A(w) to be the
    /// derivation-quotient algebra of an AS-regular algebra.
    pub fn check_independent(&self) -> Result<()> {
        let rows: Vec<SparseVec> = self.f.iter().map(element_to_vec).collect();
        if rank_of(&rows)? == self.n() {
            Ok(())
        } else {
            Err(Error::DependentDerivatives)
        }
    }
}

/// n×n matrix of degree m−1 elements with w = x^t M x.
#[derive(Debug, Clone)]
pub struct CoeffMatrix<C: Coeff> {
    pub entries: Vec<Vec<FreeElement<C>>>,
}

impl<C: Coeff> CoeffMatrix<C> {
    pub fn get(&self, i: usize, j: usize) -> &FreeElement<C> {
        &self.entries[i][j]
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    /// Row-major canonical text.
    pub fn to_text(&self) -> String {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|e| e.to_text()).collect::<Vec<_>>().join(", ")))
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

/// M_ij: the words of w starting with x_i and ending with x_j, with both
/// letters stripped. Verifies M x = f and, when `q` is given, x^t M = (Qf)^t.
pub fn coefficient_matrix<C: Coeff>(w: &FreeElement<C>, q: Option<&[C]>) -> Result<CoeffMatrix<C>> {
    let f = cyclic_derivatives(w)?;
    let n = w.ctx().n();
    let mut entries = Vec::with_capacity(n);
    for fi in &f {
        entries.push((0..n).map(|j| fi.right_derivative(j)).collect::<Result<Vec<_>>>()?);
    }
    let m = CoeffMatrix { entries };
    for (i, fi) in f.iter().enumerate() {
        let mut mx = FreeElement::zero(w.ctx());
        for j in 0..n {
            mx = mx.add(&m.entries[i][j].rmul_gen(j))?;
        }
        if mx != *fi {
            return Err(Error::Defect(format!("(M x)_{} differs from f_{}", i + 1, i + 1)));
        }
    }
    if let Some(q) = q {
        for j in 0..n {
            let mut xm = FreeElement::zero(w.ctx());
            for i in 0..n {
                xm = xm.add(&m.entries[i][j].lmul_gen(i))?;
            }
            if xm != f[j].scale(&q[j])? {
                return Err(Error::Defect(format!("(x^t M)_{} differs from q_{} f_{}", j + 1, j + 1, j + 1)));
            }
        }
    }
    Ok(m)
}

/// The spanning vector of (V⊗span R) ∩ (span R⊗V), normalized so its
/// largest word has coefficient 1.
pub fn superpotential_from_relations(rels: &[FreeElement<Scalar>]) -> Result<FreeElement<Scalar>> {
    let first = rels.first().ok_or_else(|| Error::Invalid("empty relation list".into()))?;
    let ctx = first.ctx().clone();
    let m = first.require_homogeneous()?;
    for r in rels {
        if r.require_homogeneous()? != m {
            return Err(Error::Invalid("relations of different degrees".into()));
        }
    }
    let n = ctx.n();
    let ncols = n.checked_pow(m as u32 + 1).ok_or_else(|| Error::Resource("word space too large".into()))?;
    let mut left: Vec<SparseVec> = Vec::new();
    let mut right: Vec<SparseVec> = Vec::new();
    for r in rels {
        for i in 0..n {
            left.push(element_to_vec(&r.lmul_gen(i)));
            right.push(element_to_vec(&r.rmul_gen(i)));
        }
    }
    let common = intersect(&left, &right, ncols)?;
    if common.len() != 1 {
        return Err(Error::IntersectionDimension(common.len()));
    }
    Ok(vec_to_element(&ctx, m + 1, &common[0]))
}

/// Diagonal linear map x_i ↦ s_i x_i.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalMap<C: Coeff> {
    pub s: Vec<C>,
}

impl<C: Coeff> DiagonalMap<C> {
    pub fn new(s: Vec<C>) -> Self {
        DiagonalMap { s }
    }

    pub fn identity(n: usize) -> Self {
        DiagonalMap { s: vec![C::one(); n] }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(DiagonalMap { s: self.s.iter().map(|c| c.inv()).collect::<Result<_>>()? })
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(DiagonalMap { s: self.s.iter().zip(&other.s).map(|(a, b)| a.mul(b)).collect::<Result<_>>()? })
    }

    /// ∏_t s_{j_t} over the letters of a word.
    pub fn word_scale(&self, w: &Word) -> Result<C> {
        let mut acc = C::one();
        for &l in w.letters() {
            acc = acc.mul(&self.s[l as usize])?;
        }
        Ok(acc)
    }

    /// σ^{⊗d} applied to an element.
    pub fn apply(&self, f: &FreeElement<C>) -> Result<FreeElement<C>> {
        f.scale_words(|w| self.word_scale(w))
    }

    /// The common eigenvalue of σ^{⊗d} on the words of `f`.
    pub fn eigen_scale(&self, f: &FreeElement<C>) -> Result<C> {
        f.require_homogeneous()?;
        let mut found: Option<(Word, C)> = None;
        for w in f.terms().keys() {
            let c = self.word_scale(w)?;
            match &found {
                None => found = Some((w.clone(), c)),
                Some((w0, c0)) => {
                    if *c0 != c {
                        return Err(Error::NotEigenvector(f.ctx().word_text(w0), f.ctx().word_text(w)));
                    }
                }
            }
        }
        Ok(found.expect("nonzero element").1)
    }

    pub fn to_text(&self, ctx: &Context) -> String {
        let parts: Vec<String> = self
            .s
            .iter()
            .map(|c| {
                let (neg, body) = c.render(ctx);
                format!("{}{}", if neg { "-" } else { "" }, body)
            })
            .collect();
        format!("({})", parts.join(", "))
    }
}

pub fn eigen_scale<C: Coeff>(sigma: &DiagonalMap<C>, f: &FreeElement<C>) -> Result<C> {
    sigma.eigen_scale(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::parse_poly;

    const W_POLY: &str = "x*y*z + y*z*x + z*x*y - x*z*y - z*y*x - y*x*z";

    fn ctx3() -> Arc<Context> {
        Context::new(&["x", "y", "z"], 1, &[]).unwrap()
    }

    #[test]
    fn polynomial_ring_derivatives() {
        let ctx = ctx3();
        let w: FreeElement<Scalar> = parse_poly(W_POLY, &ctx).unwrap();
        let f = cyclic_derivatives(&w).unwrap();
        assert_eq!(f[0], parse_poly("y*z - z*y", &ctx).unwrap());
        assert_eq!(f[1], parse_poly("z*x - x*z", &ctx).unwrap());
        assert_eq!(f[2], parse_poly("x*y - y*x", &ctx).unwrap());
        assert!(twist_of(&w).unwrap().iter().all(|c| c.is_one()));
    }

    #[test]
    fn matrix_of_polynomial_ring() {
        let ctx = ctx3();
        let w: FreeElement<Scalar> = parse_poly(W_POLY, &ctx).unwrap();
        let m = coefficient_matrix(&w, None).unwrap();
        // M x = f forces M_12 = -z (from f_1 = yz - zy)
        assert_eq!(m.to_text(), "[[0, -z, y], [z, 0, -x], [-y, x, 0]]");
    }

    #[test]
    fn no_twist_for_xy() {
        let ctx = Context::new(&["x", "y"], 1, &[]).unwrap();
        let w: FreeElement<Scalar> = parse_poly("x*y", &ctx).unwrap();
        assert!(matches!(twist_of(&w), Err(Error::NoDiagonalTwist(_))));
    }

    #[test]
    fn cube() {
        let ctx = Context::new(&["x"], 1, &[]).unwrap();
        let w: FreeElement<Scalar> = parse_poly("x*x*x", &ctx).unwrap();
        assert_eq!(cyclic_derivatives(&w).unwrap()[0], parse_poly("x*x", &ctx).unwrap());
        assert_eq!(coefficient_matrix(&w, None).unwrap().to_text(), "[[x]]");
    }

    #[test]
    fn recover_polynomial_ring() {
        let ctx = ctx3();
        let w: FreeElement<Scalar> = parse_poly(W_POLY, &ctx).unwrap();
        let rels = cyclic_derivatives(&w).unwrap();
        let r = superpotential_from_relations(&rels).unwrap();
        let ratio = ratio(&r, &w).unwrap();
        assert!(ratio.is_some());
        let single = vec![parse_poly("x*y", &Context::new(&["x", "y"], 1, &[]).unwrap()).unwrap()];
        assert_eq!(superpotential_from_relations(&single), Err(Error::IntersectionDimension(0)));
    }
}
