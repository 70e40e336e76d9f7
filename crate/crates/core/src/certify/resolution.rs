//! The candidate free resolution of the trivial module over D:
//!
//! D(−2m−1) →x^t D(−2m)^n →M_l D(−m)^{n−1} ⊕ D(−m−1)^{n−1} →M_r D(−1)^n →x D
//!
//! with maps acting by right multiplication on row vectors. The non-omitted
//! indices are listed in increasing order after the omitted one.

use crate::error::{Error, Result};
use crate::freealg::FreeElement;
use crate::linalg::{rank_of, SparseVec};
use crate::quotient::Quotient;
use crate::scalars::Scalar;
use crate::superpotential::CoeffMatrix;

use super::{twisted_commutator, ExtensionSpec, Workspace};

type Matrix = Vec<Vec<FreeElement<Scalar>>>;

#[derive(Debug, Clone)]
pub struct ResolutionData {
    pub m: CoeffMatrix<Scalar>,
    /// The non-omitted indices, ascending.
    pub others: Vec<usize>,
    pub g_l: Vec<FreeElement<Scalar>>,
    pub g_r: Vec<FreeElement<Scalar>>,
    /// n × 2(n−1).
    pub m_l: Matrix,
    /// 2(n−1) × n.
    pub m_r: Matrix,
    /// n × (n−1): q_k p_j^{-1} in row j of column j, zero row k.
    pub j_h: Vec<Vec<Scalar>>,
    /// (n−1) × n: p_j in column j of row j, zero column k.
    pub j_v: Vec<Vec<Scalar>>,
}

pub fn build_resolution(spec: &ExtensionSpec) -> Result<ResolutionData> {
    let sp = &spec.sp;
    let ctx = sp.ctx();
    let (n, k) = (sp.n(), spec.k);
    let mm = sp.coefficient_matrix()?;
    let others: Vec<usize> = (0..n).filter(|&i| i != k).collect();
    let qk = &sp.q[k];
    let fk = &spec.omega;
    let zero = FreeElement::zero(ctx);

    let mut j_h = vec![vec![Scalar::zero(); n - 1]; n];
    let mut j_v = vec![vec![Scalar::zero(); n]; n - 1];
    for (t, &j) in others.iter().enumerate() {
        j_h[j][t] = qk.checked_div(&spec.p[j])?;
        j_v[t][j] = spec.p[j].clone();
    }

    let mut g_l = Vec::with_capacity(2 * (n - 1));
    let mut g_r = Vec::with_capacity(2 * (n - 1));
    for (t, &j) in others.iter().enumerate() {
        g_l.push(twisted_commutator(j, fk, &spec.p[j])?.scale(&j_h[j][t])?);
        g_r.push(sp.f[j].clone());
    }
    for &j in &others {
        g_l.push(sp.f[j].scale(&sp.q[j])?);
        g_r.push(twisted_commutator(j, fk, &spec.p[j])?);
    }

    let mut m_l = vec![vec![zero.clone(); 2 * (n - 1)]; n];
    for i in 0..n {
        for (t, &j) in others.iter().enumerate() {
            m_l[i][t] = fk.scale(&j_h[i][t])?.sub(&mm.get(i, k).rmul_gen(j))?;
            m_l[i][n - 1 + t] = mm.get(i, j).clone();
        }
    }
    let mut m_r = vec![vec![zero.clone(); n]; 2 * (n - 1)];
    for (t, &j) in others.iter().enumerate() {
        for l in 0..n {
            m_r[t][l] = mm.get(j, l).clone();
            m_r[n - 1 + t][l] = mm.get(k, l).lmul_gen(j).sub(&fk.scale(&j_v[t][l])?)?;
        }
    }

    // x^t M_l = g_l^t and M_r x = g_r, exactly in the free algebra
    for c in 0..2 * (n - 1) {
        let mut acc = zero.clone();
        for (i, row) in m_l.iter().enumerate() {
            acc = acc.add(&row[c].lmul_gen(i))?;
        }
        if acc != g_l[c] {
            return Err(Error::Defect(format!("column {} of x^t M_l differs from g_l", c + 1)));
        }
    }
    for (r, row) in m_r.iter().enumerate() {
        let mut acc = zero.clone();
        for (l, e) in row.iter().enumerate() {
            acc = acc.add(&e.rmul_gen(l))?;
        }
        if acc != g_r[r] {
            return Err(Error::Defect(format!("row {} of M_r x differs from g_r", r + 1)));
        }
    }
    Ok(ResolutionData { m: mm, others, g_l, g_r, m_l, m_r, j_h, j_v })
}

impl ResolutionData {
    /// The n × n product M_l·M_r in the free algebra.
    #[allow(clippy::needless_range_loop)]
    pub fn product(&self) -> Result<Matrix> {
        let n = self.m_l.len();
        let ctx = self.m.get(0, 0).ctx().clone();
        let mut out = vec![vec![FreeElement::zero(&ctx); n]; n];
        for (i, row) in self.m_l.iter().enumerate() {
            for j in 0..n {
                let mut acc = FreeElement::zero(&ctx);
                for (t, a) in row.iter().enumerate() {
                    acc = acc.add(&a.mul(&self.m_r[t][j])?)?;
                }
                out[i][j] = acc;
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct ResolutionReport {
    pub complex: bool,
    pub complex_witness: Option<(usize, usize)>,
    /// Euler residual per degree 0..=bound.
    pub euler: Vec<i64>,
    pub euler_pass: bool,
    /// dim P_i − rank in − rank out at positions 0..=4 for each degree; this
    /// is the homology dimension when the maps compose to zero.
    pub homology: Vec<[i64; 5]>,
    pub exact: bool,
    /// (degree, position, value) of the first nonzero entry of `homology`.
    pub exact_witness: Option<(usize, usize, i64)>,
}

/// Rank in internal degree t of right multiplication by `mat`, mapping
/// ⊕_s D(−a_s) → ⊕_c D(−b_c).
fn map_rank(q: &Quotient, mat: &Matrix, src: &[usize], tgt: &[usize], t: usize) -> Result<usize> {
    let ctx = q.ctx();
    let mut offsets = Vec::with_capacity(tgt.len());
    let mut total = 0;
    for &b in tgt {
        offsets.push(total);
        if t >= b {
            total += q.dim(t - b);
        }
    }
    let mut rows: Vec<SparseVec> = Vec::new();
    for (s, &a) in src.iter().enumerate() {
        if t < a {
            continue;
        }
        for b in q.basis(t - a) {
            let b = FreeElement::monomial(ctx, b, Scalar::one());
            let mut row: SparseVec = Vec::new();
            for (c, &bc) in tgt.iter().enumerate() {
                if t < bc || mat[s][c].is_zero() {
                    continue;
                }
                for (i, x) in q.coords(&b.mul(&mat[s][c])?)? {
                    row.push((offsets[c] + i, x));
                }
            }
            rows.push(row);
        }
    }
    rank_of(&rows)
}

pub fn resolution_certificate(res: &ResolutionData, ws: &Workspace) -> Result<ResolutionReport> {
    let spec = &ws.spec;
    let (n, m, bound) = (spec.n(), spec.m(), ws.bound);
    if bound < 2 * m - 1 {
        return Err(Error::Invalid(format!("bound {bound} is below 2m−1 = {}", 2 * m - 1)));
    }
    let q = &ws.d;

    let mut complex_witness = None;
    'outer: for (i, row) in res.product()?.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if !q.contains(e)? {
                complex_witness = Some((i, j));
                break 'outer;
            }
        }
    }

    let dims = q.dims();
    let d = |t: i64| if t < 0 { 0 } else { dims[t as usize] as i64 };
    let (ni, mi) = (n as i64, m as i64);
    let euler: Vec<i64> = (0..=bound as i64)
        .map(|t| {
            -i64::from(t == 0) + d(t) - ni * d(t - 1) + (ni - 1) * (d(t - mi) + d(t - mi - 1)) - ni * d(t - 2 * mi)
                + d(t - 2 * mi - 1)
        })
        .collect();

    let ctx = spec.ctx();
    let x_row: Matrix = vec![(0..n).map(|i| FreeElement::generator(ctx, i)).collect::<Result<_>>()?];
    let x_col: Matrix = (0..n).map(|i| Ok(vec![FreeElement::generator(ctx, i)?])).collect::<Result<_>>()?;
    let p4 = vec![2 * m + 1];
    let p3 = vec![2 * m; n];
    let p2: Vec<usize> = std::iter::repeat_n(m, n - 1).chain(std::iter::repeat_n(m + 1, n - 1)).collect();
    let p1 = vec![1; n];
    let p0 = vec![0];
    let shifts = [&p0, &p1, &p2, &p3, &p4];
    let maps: [(&Matrix, usize); 4] = [(&x_col, 1), (&res.m_r, 2), (&res.m_l, 3), (&x_row, 4)];

    let mut homology = Vec::new();
    let mut exact_witness = None;
    for t in 0..=bound {
        let dim = |s: &[usize]| s.iter().filter(|&&a| t >= a).map(|&a| q.dim(t - a)).sum::<usize>();
        // ranks[i] is the rank of the map out of position i; position 0 maps onto the field
        let mut ranks = [usize::from(t == 0), 0, 0, 0, 0, 0];
        for (mat, i) in maps {
            ranks[i] = map_rank(q, mat, shifts[i], shifts[i - 1], t)?;
        }
        let mut h = [0; 5];
        for i in 0..5 {
            h[i] = dim(shifts[i]) as i64 - (ranks[i] + ranks[i + 1]) as i64;
            if h[i] != 0 && exact_witness.is_none() {
                exact_witness = Some((t, i, h[i]));
            }
        }
        homology.push(h);
    }
    Ok(ResolutionReport {
        complex: complex_witness.is_none(),
        complex_witness,
        euler_pass: euler.iter().all(|&r| r == 0),
        euler,
        homology,
        exact: exact_witness.is_none(),
        exact_witness,
    })
}
