//! Hilbert identity h_D·(1−t^m) = h_A and the normal element Ω.

use crate::error::{Error, Result};
use crate::freealg::FreeElement;
use crate::linalg::{rank_of, SparseVec};
use crate::quotient::{DegreeTable, Quotient};
use crate::scalars::Scalar;

use super::Workspace;

#[derive(Debug, Clone)]
pub struct HilbertReport {
    pub a: DegreeTable,
    pub d: DegreeTable,
    /// Coefficients of h_A/(1−t^m).
    pub predicted: Vec<usize>,
    /// e_k = predicted_k − d_k.
    pub e: Vec<i64>,
    /// z_j = e_{j+m} − e_j for j ≤ bound − m.
    pub z: Vec<i64>,
    pub pass: bool,
    pub first_defect: Option<usize>,
}

pub fn verify_hilbert(ws: &Workspace) -> Result<HilbertReport> {
    let m = ws.spec.m();
    let a = ws.a.table();
    let d = ws.d.table();
    let mut predicted = Vec::with_capacity(a.dims.len());
    for k in 0..a.dims.len() {
        let below = if k >= m { predicted[k - m] } else { 0 };
        predicted.push(a.dims[k] + below);
    }
    let e: Vec<i64> = predicted.iter().zip(&d.dims).map(|(&p, &x)| p as i64 - x as i64).collect();
    let z: Vec<i64> = (0..e.len().saturating_sub(m)).map(|j| e[j + m] - e[j]).collect();
    let first_defect = e.iter().position(|&x| x != 0);
    Ok(HilbertReport { a, d, predicted, e, z, pass: first_defect.is_none(), first_defect })
}

#[derive(Debug, Clone)]
pub struct OmegaReport {
    pub normal: bool,
    /// First generator index whose normality relation fails.
    pub normal_witness: Option<usize>,
    pub central: bool,
    /// Centrality is predicted exactly when Q = id and p = (1, …, 1).
    pub central_expected: bool,
    pub regular: bool,
    /// Kernel dimensions of a ↦ aΩ and a ↦ Ωa on D_d, d ≤ bound − m.
    pub z_right: Vec<usize>,
    pub z_left: Vec<usize>,
    pub first_irregular: Option<usize>,
    /// The right kernel matches the dimensions forced by the Hilbert defect.
    pub z_consistent: bool,
}

/// Rank of left or right multiplication by `g` from D_d.
pub(crate) fn multiplication_rank(q: &Quotient, d: usize, g: &FreeElement<Scalar>, right: bool) -> Result<usize> {
    let ctx = q.ctx();
    let rows: Vec<SparseVec> = q
        .basis(d)
        .into_iter()
        .map(|b| {
            let b = FreeElement::monomial(ctx, b, Scalar::one());
            let prod = if right { b.mul(g)? } else { g.mul(&b)? };
            q.coords(&prod)
        })
        .collect::<Result<_>>()?;
    rank_of(&rows)
}

pub fn omega_certificate(ws: &Workspace) -> Result<OmegaReport> {
    let spec = &ws.spec;
    let m = spec.m();
    if ws.bound < m + 1 {
        return Err(Error::Invalid(format!("bound {} is below m+1 = {}", ws.bound, m + 1)));
    }
    let mut normal_witness = None;
    for (i, r) in spec.normality_elements()?.iter().enumerate() {
        if !ws.d.contains(r)? {
            normal_witness = Some(i);
            break;
        }
    }
    let mut central = true;
    for i in 0..spec.n() {
        if !ws.d.contains(&super::twisted_commutator(i, &spec.omega, &Scalar::one())?)? {
            central = false;
            break;
        }
    }
    let central_expected = spec.sp.is_calabi_yau() && spec.p.iter().all(Scalar::is_one);
    let mut z_right = Vec::new();
    let mut z_left = Vec::new();
    for d in 0..=ws.bound - m {
        let dim = ws.d.dim(d);
        z_right.push(dim - multiplication_rank(&ws.d, d, &spec.omega, true)?);
        z_left.push(dim - multiplication_rank(&ws.d, d, &spec.omega, false)?);
    }
    let first_irregular = (0..z_right.len()).find(|&d| z_right[d] != 0 || z_left[d] != 0);
    let hil = verify_hilbert(ws)?;
    let z_consistent = normal_witness.is_some()
        || hil.z.iter().zip(&z_right).all(|(&derived, &direct)| derived == direct as i64);
    Ok(OmegaReport {
        normal: normal_witness.is_none(),
        normal_witness,
        central,
        central_expected,
        regular: first_irregular.is_none(),
        z_right,
        z_left,
        first_irregular,
        z_consistent,
    })
}
