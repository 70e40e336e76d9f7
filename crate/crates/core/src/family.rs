//! Fibers of the projective family of central extensions, Zhang twists, and
//! adapting generators to a prescribed list of derivatives.

use serde::Serialize;

use crate::certify::{build_extension, twisted_commutator};
use crate::error::{Error, Result};
use crate::freealg::{Coeff, FreeElement, Word};
use crate::linalg::{element_to_vec, express, rank_of, SparseVec};
use crate::quotient::{first_ideal_difference, relation_span_differences, Engine, Presentation, Quotient};
use crate::scalars::Scalar;
use crate::superpotential::{DiagonalMap, Superpotential};

/// Homogeneous coordinates of a point of ℙ^{n−1}.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberPoint {
    coords: Vec<Scalar>,
}

impl FiberPoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        if coords.iter().all(Scalar::is_zero) {
            return Err(Error::Invalid("all homogeneous coordinates are zero".into()));
        }
        Ok(FiberPoint { coords })
    }

    pub fn from_ints(v: &[i64]) -> Result<Self> {
        Self::new(v.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    /// First nonzero coordinate.
    pub fn pivot(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).expect("nonzero point")
    }

    pub fn text(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        format!("({})", parts.join(":"))
    }
}

/// D_x: relations c_i f_j − c_j f_i (i < j) and [x_i, f_j] (all i, j); Ω_x = f_pivot.
pub fn fiber(sp: &Superpotential<Scalar>, c: &FiberPoint) -> Result<(Presentation, FreeElement<Scalar>)> {
    if !sp.is_calabi_yau() {
        return Err(Error::Invalid("fibers need a superpotential with trivial twist".into()));
    }
    let n = sp.n();
    if c.coords.len() != n {
        return Err(Error::Invalid(format!("point with {} coordinates for {n} generators", c.coords.len())));
    }
    let mut rels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            rels.push(sp.f[j].scale(&c.coords[i])?.sub(&sp.f[i].scale(&c.coords[j])?)?);
        }
    }
    for i in 0..n {
        for j in 0..n {
            rels.push(twisted_commutator(i, &sp.f[j], &Scalar::one())?);
        }
    }
    let p = Presentation::new(sp.ctx(), rels, &format!("fiber {}", c.text()))?;
    Ok((p, sp.f[c.pivot()].clone()))
}

#[derive(Debug, Clone, Serialize)]
pub struct FlatnessReport {
    pub points: Vec<String>,
    pub tables: Vec<Vec<usize>>,
    pub pass: bool,
}

impl FlatnessReport {
    /// One row per point, then a verdict line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (p, t) in self.points.iter().zip(&self.tables) {
            let dims: Vec<String> = t.iter().map(|d| d.to_string()).collect();
            out.push_str(&format!("{p}\t{}\n", dims.join("\t")));
        }
        out.push_str(if self.pass { "pass\n" } else { "fail\n" });
        out
    }
}

pub fn flatness_probe(sp: &Superpotential<Scalar>, points: &[FiberPoint], bound: usize, engine: Engine) -> Result<FlatnessReport> {
    if points.len() < 2 {
        return Err(Error::Invalid("a flatness probe needs at least two points".into()));
    }
    let mut tables = Vec::with_capacity(points.len());
    for c in points {
        let (p, _) = fiber(sp, c)?;
        tables.push(Quotient::compute(&p, bound, engine)?.dims());
    }
    let pass = tables.windows(2).all(|w| w[0] == w[1]);
    Ok(FlatnessReport { points: points.iter().map(FiberPoint::text).collect(), tables, pass })
}

/// Rescales each word x_{j_1}…x_{j_r} by ∏_{t≥2} s_{j_t}^{t−1}.
pub fn zhang_twist<C: Coeff>(f: &FreeElement<C>, sigma: &DiagonalMap<C>) -> Result<FreeElement<C>> {
    f.scale_words(|w: &Word| {
        let mut acc = C::one();
        for (t, &l) in w.letters().iter().enumerate() {
            for _ in 0..t {
                acc = acc.mul(&sigma.s[l as usize])?;
            }
        }
        Ok(acc)
    })
}

pub fn zhang_twist_presentation(p: &Presentation, sigma: &DiagonalMap<Scalar>) -> Result<Presentation> {
    let rels = p.relations().iter().map(|r| zhang_twist(r, sigma)).collect::<Result<Vec<_>>>()?;
    Presentation::new(p.ctx(), rels, &format!("twisted {}", p.label()))
}

/// σ, hdet_A(σ) and the tuple p′_i = p_i s_k s_i^m hdet_A(σ)^{-1}.
#[derive(Debug, Clone)]
pub struct TwistData {
    pub sigma: DiagonalMap<Scalar>,
    pub hdet: Scalar,
    pub p_prime: Vec<Scalar>,
}

pub fn twist_data(sp: &Superpotential<Scalar>, p: &[Scalar], k: usize, sigma: &DiagonalMap<Scalar>) -> Result<TwistData> {
    if sigma.s.len() != sp.n() || sigma.s.iter().any(Scalar::is_zero) {
        return Err(Error::Invalid("σ must be an invertible diagonal map on the generators".into()));
    }
    let hdet = sigma.eigen_scale(&sp.w)?;
    let h_inv = hdet.inv()?;
    let p_prime = p
        .iter()
        .zip(&sigma.s)
        .map(|(pi, si)| pi.checked_mul(&sigma.s[k])?.checked_mul(&si.pow(sp.m as i64)?)?.checked_mul(&h_inv))
        .collect::<Result<_>>()?;
    Ok(TwistData { sigma: sigma.clone(), hdet, p_prime })
}

#[derive(Debug, Clone)]
pub struct ZhangReport {
    pub data: TwistData,
    pub twisted_w: FreeElement<Scalar>,
    /// Relation spans agree in every degree.
    pub spans_equal: bool,
    pub span_differences: Vec<usize>,
    /// First degree ≤ bound where the generated ideals differ.
    pub first_difference: Option<usize>,
}

/// Compares the twisted D(w,p) with D(ᵠw, p′) degree by degree up to `bound`.
pub fn zhang_certificate(
    sp: &Superpotential<Scalar>,
    p: &[Scalar],
    k: usize,
    sigma: &DiagonalMap<Scalar>,
    bound: usize,
) -> Result<ZhangReport> {
    let data = twist_data(sp, p, k, sigma)?;
    let d = build_extension(sp, p, k, "w")?;
    let twisted = zhang_twist_presentation(&d.presentation, sigma)?;
    let twisted_w = zhang_twist(&sp.w, sigma)?;
    let sp2 = Superpotential::new(twisted_w.clone())?;
    let d2 = build_extension(&sp2, &data.p_prime, k, "twisted w")?;
    let span_differences = relation_span_differences(&twisted, &d2.presentation)?;
    let first_difference = first_ideal_difference(&twisted, &d2.presentation, bound)?;
    Ok(ZhangReport { data, twisted_w, spans_equal: span_differences.is_empty(), span_differences, first_difference })
}

/// Change of generators x = P x′ under which ∂′_j w = f_list[j].
#[derive(Debug, Clone)]
pub struct AdaptedBasis {
    /// n × n, with ∂′_j w = Σ_i P_ij ∂_i w.
    pub p: Vec<Vec<Scalar>>,
    /// x′_j written in the old generators.
    pub gens: Vec<FreeElement<Scalar>>,
}

/// Applies the linear substitution x_l ↦ Σ_j a[l][j] x_j to every letter.
fn substitute(f: &FreeElement<Scalar>, a: &[Vec<Scalar>]) -> Result<FreeElement<Scalar>> {
    let ctx = f.ctx();
    let images: Vec<FreeElement<Scalar>> = a
        .iter()
        .map(|row| {
            FreeElement::from_terms(ctx, row.iter().enumerate().map(|(j, c)| (Word::letter(j), c.clone())))
        })
        .collect::<Result<_>>()?;
    let mut out = FreeElement::zero(ctx);
    for (w, c) in f.terms() {
        let mut term = FreeElement::constant(ctx, c.clone());
        for &l in w.letters() {
            term = term.mul(&images[l as usize])?;
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

#[allow(clippy::needless_range_loop)]
fn invert(a: &[Vec<Scalar>]) -> Result<Option<Vec<Vec<Scalar>>>> {
    let n = a.len();
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else { return Ok(None) };
        m.swap(col, piv);
        let inv = m[col][col].inv()?;
        for x in m[col].iter_mut() {
            *x = x.checked_mul(&inv)?;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let c = m[r][col].clone();
                for j in 0..2 * n {
                    let t = m[col][j].checked_mul(&c)?;
                    m[r][j] = m[r][j].checked_sub(&t)?;
                }
            }
        }
    }
    Ok(Some(m.into_iter().map(|r| r[n..].to_vec()).collect()))
}

pub fn adapt_basis(w: &FreeElement<Scalar>, f_list: &[FreeElement<Scalar>]) -> Result<AdaptedBasis> {
    let sp = Superpotential::new(w.clone())?;
    if !sp.is_calabi_yau() {
        return Err(Error::Invalid("adapting generators needs a superpotential with trivial twist".into()));
    }
    let n = sp.n();
    if f_list.len() != n {
        return Err(Error::Invalid(format!("{} elements for {n} generators", f_list.len())));
    }
    let basis: Vec<SparseVec> = sp.f.iter().map(element_to_vec).collect();
    let mut p = vec![vec![Scalar::zero(); n]; n];
    for (j, h) in f_list.iter().enumerate() {
        if h.require_homogeneous()? != sp.m {
            return Err(Error::Invalid(format!("element {} has the wrong degree", j + 1)));
        }
        let c = express(&element_to_vec(h), &basis)?
            .ok_or_else(|| Error::Invalid(format!("element {} is not in the span of the derivatives", j + 1)))?;
        for (i, ci) in c.into_iter().enumerate() {
            p[i][j] = ci;
        }
    }
    let rows: Vec<SparseVec> = f_list.iter().map(element_to_vec).collect();
    if rank_of(&rows)? != n {
        return Err(Error::Invalid("the elements do not span the derivative space".into()));
    }
    let p_inv = invert(&p)?.ok_or_else(|| Error::Invalid("singular change of generators".into()))?;

    // verify: in the letters of x′, w becomes substitute(w, P) and so on
    let w_new = substitute(w, &p)?;
    for (j, h) in f_list.iter().enumerate() {
        if w_new.left_derivative(j)? != substitute(h, &p)? {
            return Err(Error::Defect(format!("derivative {} does not match after the change of generators", j + 1)));
        }
    }
    let ctx = w.ctx();
    let gens = p_inv
        .iter()
        .map(|row| FreeElement::from_terms(ctx, row.iter().enumerate().map(|(l, c)| (Word::letter(l), c.clone()))))
        .collect::<Result<_>>()?;
    Ok(AdaptedBasis { p, gens })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{parse_poly, Context};
    use std::sync::Arc;

    const W_POLY: &str = "x*y*z + y*z*x + z*x*y - x*z*y - z*y*x - y*x*z";

    fn ctx3() -> Arc<Context> {
        Context::new(&["x", "y", "z"], 1, &[]).unwrap()
    }

    fn w_poly() -> Superpotential<Scalar> {
        Superpotential::new(parse_poly(W_POLY, &ctx3()).unwrap()).unwrap()
    }

    fn ones(n: usize) -> Vec<Scalar> {
        vec![Scalar::one(); n]
    }

    #[test]
    fn coordinate_fibers_match_extensions() {
        let sp = w_poly();
        for k in 0..3 {
            let mut c = vec![0; 3];
            c[k] = 1;
            let (p, omega) = fiber(&sp, &FiberPoint::from_ints(&c).unwrap()).unwrap();
            let d = build_extension(&sp, &ones(3), k, "w").unwrap();
            assert_eq!(first_ideal_difference(&p, &d.presentation, 4).unwrap(), None, "k = {k}");
            // the fiber lists every [x_i, f_j]; they only agree modulo the ideal
            assert_eq!(relation_span_differences(&p, &d.presentation).unwrap(), vec![3], "k = {k}");
            assert_eq!(omega, sp.f[k]);
        }
    }

    #[test]
    fn scaling_a_point_keeps_the_fiber() {
        let sp = w_poly();
        let (a, _) = fiber(&sp, &FiberPoint::from_ints(&[1, 2, 3]).unwrap()).unwrap();
        let (b, _) = fiber(&sp, &FiberPoint::from_ints(&[-2, -4, -6]).unwrap()).unwrap();
        assert_eq!(first_ideal_difference(&a, &b, 4).unwrap(), None);
        assert!(FiberPoint::from_ints(&[0, 0, 0]).is_err());
    }

    #[test]
    fn probe_polynomial_ring() {
        let sp = w_poly();
        let pts: Vec<FiberPoint> =
            [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3]].iter().map(|c| FiberPoint::from_ints(c).unwrap()).collect();
        let r = flatness_probe(&sp, &pts, 6, Engine::Both).unwrap();
        assert!(r.pass);
        assert_eq!(r.tables[0], vec![1, 3, 7, 13, 22, 34, 50]);
        let same = vec![pts[3].clone(), pts[3].clone()];
        assert!(flatness_probe(&sp, &same, 3, Engine::La).unwrap().pass);
    }

    #[test]
    fn twist_examples() {
        let ctx = Context::new(&["x", "y"], 1, &[]).unwrap();
        let s = Scalar::from_int(3);
        let u = Scalar::from_int(5);
        let sigma = DiagonalMap::new(vec![s.clone(), u.clone()]);
        let xy = parse_poly::<Scalar>("x*y", &ctx).unwrap();
        assert_eq!(zhang_twist(&xy, &sigma).unwrap(), xy.scale(&u).unwrap());
        let x3 = parse_poly::<Scalar>("x^3", &ctx).unwrap();
        assert_eq!(zhang_twist(&x3, &sigma).unwrap(), x3.scale(&s.pow(3).unwrap()).unwrap());
        assert_eq!(zhang_twist(&x3, &DiagonalMap::identity(2)).unwrap(), x3);
    }

    #[test]
    fn zhang_proposition_polynomial_ring() {
        let sp = w_poly();
        for s in [vec![1, 1, 1], vec![2, 1, 1], vec![1, 3, -1]] {
            let sigma = DiagonalMap::new(s.iter().map(|&c| Scalar::from_int(c)).collect());
            let r = zhang_certificate(&sp, &ones(3), 0, &sigma, 4).unwrap();
            assert!(r.spans_equal, "{s:?}");
        }
        let id = zhang_certificate(&sp, &ones(3), 0, &DiagonalMap::identity(3), 3).unwrap();
        assert_eq!(id.data.p_prime, ones(3));
    }

    #[test]
    fn adapt_identity_and_unipotent() {
        let sp = w_poly();
        let a = adapt_basis(&sp.w, &sp.f).unwrap();
        for (i, row) in a.p.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                assert_eq!(c.is_one(), i == j);
            }
        }
        let list = vec![sp.f[0].add(&sp.f[1]).unwrap(), sp.f[1].clone(), sp.f[2].clone()];
        let a = adapt_basis(&sp.w, &list).unwrap();
        assert!(a.p[1][0].is_one() && a.p[0][0].is_one());
        let bad = vec![sp.f[0].clone(), sp.f[0].clone(), sp.f[2].clone()];
        assert!(adapt_basis(&sp.w, &bad).is_err());
    }

    #[test]
    fn adapt_reversed_cubic() {
        let ctx = Context::new(&["x", "y"], 1, &[]).unwrap();
        let w = parse_poly::<Scalar>("x*y^2*x + x*y*x*y + x^2*y^2 + y*x^2*y + y*x*y*x + y^2*x^2 + x^4 + y^4", &ctx).unwrap();
        let sp = Superpotential::new(w.clone()).unwrap();
        let a = adapt_basis(&w, &[sp.f[1].clone(), sp.f[0].clone()]).unwrap();
        assert_eq!(a.gens[0], parse_poly("y", &ctx).unwrap());
        assert_eq!(a.gens[1], parse_poly("x", &ctx).unwrap());
    }
}
