//! Good tuples: p with p_k = q_k and ∏_t p_{j_t} = q_k for every word
//! x_{j_1}…x_{j_{m+1}} of w. Over the divisible unit group these equations are
//! linear, and are solved exactly through a Smith normal form.

mod snf;

use std::collections::BTreeSet;

use num_rational::BigRational;

pub use snf::{smith, Smith};

use crate::error::{Error, Result};
use crate::freealg::{Coeff, Context, Word};
use crate::scalars::UnitScalar;
use crate::superpotential::{DiagonalMap, Superpotential};

/// Multiplicative equations ∏_i p_i^{a_i} = rhs.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    pub n: usize,
    /// 0-based omitted index.
    pub k: usize,
    pub rows: Vec<(Vec<i64>, UnitScalar)>,
}

fn exponent_row(w: &Word, n: usize) -> Vec<i64> {
    let mut row = vec![0i64; n];
    for &l in w.letters() {
        row[l as usize] += 1;
    }
    row
}

fn dedup_rows(n: usize, k: usize, words: impl Iterator<Item = Vec<i64>>, qk: &UnitScalar) -> ConstraintSystem {
    let mut unit_row = vec![0i64; n];
    unit_row[k] = 1;
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    seen.insert(unit_row.clone());
    let mut rows = vec![(unit_row, qk.clone())];
    for r in words {
        if seen.insert(r.clone()) {
            rows.push((r, qk.clone()));
        }
    }
    ConstraintSystem { n, k, rows }
}

/// One equation per support word of w (deduplicated), plus p_k = q_k.
pub fn goodness_system(sp: &Superpotential<UnitScalar>, k: usize) -> Result<ConstraintSystem> {
    let n = sp.n();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k + 1, n });
    }
    let words = sp.w.terms().keys().map(|w| exponent_row(w, n));
    Ok(dedup_rows(n, k, words, &sp.q[k]))
}

/// The same system read off the coefficient matrix: q_k = p_i p_j ∏ p_l over
/// the words x_{l_1}…x_{l_{m−1}} of each entry M_ij.
pub fn matrix_goodness_system(sp: &Superpotential<UnitScalar>, k: usize) -> Result<ConstraintSystem> {
    let n = sp.n();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k + 1, n });
    }
    let m = sp.coefficient_matrix()?;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for w in m.get(i, j).terms().keys() {
                let mut r = exponent_row(w, n);
                r[i] += 1;
                r[j] += 1;
                rows.push(r);
            }
        }
    }
    Ok(dedup_rows(n, k, rows.into_iter(), &sp.q[k]))
}

impl ConstraintSystem {
    /// Equations as a set of exponent rows, for comparing two systems.
    pub fn row_set(&self) -> BTreeSet<Vec<i64>> {
        self.rows.iter().map(|(r, _)| r.clone()).collect()
    }

    pub fn satisfied_by(&self, p: &[UnitScalar]) -> bool {
        self.rows.iter().all(|(r, rhs)| {
            let mut acc = UnitScalar::one();
            for (e, pi) in r.iter().zip(p) {
                acc = acc.mul(&pi.pow(&BigRational::from_integer((*e).into())));
            }
            acc == *rhs
        })
    }
}

/// Every solution is `particular · coset · ∏_d λ_d^{free[d]}` for one of the
/// torsion cosets and arbitrary units λ_d.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionFamily {
    pub particular: Vec<UnitScalar>,
    pub free: Vec<Vec<i64>>,
    /// Root-of-unity multipliers; the first is trivial.
    pub cosets: Vec<Vec<UnitScalar>>,
}

impl SolutionFamily {
    /// The points particular · coset (λ = 1).
    pub fn points(&self) -> Vec<Vec<UnitScalar>> {
        self.cosets.iter().map(|c| self.particular.iter().zip(c).map(|(p, t)| p.mul(t)).collect()).collect()
    }

    /// The member for coset `c` and free values `lambda`.
    pub fn member(&self, c: usize, lambda: &[UnitScalar]) -> Vec<UnitScalar> {
        let mut p: Vec<UnitScalar> = self.particular.iter().zip(&self.cosets[c]).map(|(a, b)| a.mul(b)).collect();
        for (dir, l) in self.free.iter().zip(lambda) {
            for (pi, e) in p.iter_mut().zip(dir) {
                *pi = pi.mul(&l.pow(&BigRational::from_integer((*e).into())));
            }
        }
        p
    }

    /// Text of every point, with free directions written as powers of
    /// `lambda_names` (parameters appended after the context's own).
    pub fn render(&self, ctx: &Context, lambda_names: &[String]) -> Vec<String> {
        let mut names: Vec<String> = ctx.params().to_vec();
        names.extend(lambda_names.iter().cloned());
        let base = ctx.params().len();
        self.cosets
            .iter()
            .map(|c| {
                let mut p: Vec<UnitScalar> = self.particular.iter().zip(c).map(|(a, b)| a.mul(b)).collect();
                for (d, dir) in self.free.iter().enumerate() {
                    let l = UnitScalar::param(base + d, BigRational::from_integer(1.into()));
                    for (pi, e) in p.iter_mut().zip(dir) {
                        *pi = pi.mul(&l.pow(&BigRational::from_integer((*e).into())));
                    }
                }
                let parts: Vec<String> =
                    p.iter().map(|u| u.to_text(ctx.conductor(), ctx.root_name(), &names)).collect();
                format!("({})", parts.join(", "))
            })
            .collect()
    }
}

fn unit_pow_int(u: &UnitScalar, e: i128) -> UnitScalar {
    u.pow(&BigRational::from_integer(e.into()))
}

/// The complete solution set: empty when the system is inconsistent,
/// otherwise a single family.
pub fn solve_units(sys: &ConstraintSystem) -> Result<Vec<SolutionFamily>> {
    let n = sys.n;
    let a: Vec<Vec<i128>> = sys.rows.iter().map(|(r, _)| r.iter().map(|&x| x as i128).collect()).collect();
    let s = smith(&a, n);
    // c = U b, computed multiplicatively
    let c: Vec<UnitScalar> = s
        .u
        .iter()
        .map(|urow| {
            urow.iter().zip(&sys.rows).fold(UnitScalar::one(), |acc, (e, (_, rhs))| acc.mul(&unit_pow_int(rhs, *e)))
        })
        .collect();
    if c.iter().skip(s.rank).any(|ci| !ci.is_one()) {
        return Ok(Vec::new());
    }
    let mut y = vec![UnitScalar::one(); n];
    for i in 0..s.rank {
        let d = s.diag[i];
        y[i] = c[i].checked_pow(&BigRational::new(1.into(), d.into()))?;
    }
    let assemble = |y: &[UnitScalar]| -> Vec<UnitScalar> {
        (0..n)
            .map(|l| (0..n).fold(UnitScalar::one(), |acc, i| acc.mul(&unit_pow_int(&y[i], s.v[l][i]))))
            .collect()
    };
    let particular = assemble(&y);
    for u in &particular {
        u.check_denominators()?;
    }
    // torsion cosets: y_i ↦ y_i · e^{2πi j/d_i}
    let mut cosets: Vec<Vec<UnitScalar>> = vec![vec![UnitScalar::one(); n]];
    for i in 0..s.rank {
        let d = s.diag[i];
        if d == 1 {
            continue;
        }
        if d as u64 > crate::scalars::max_exponent_denominator() {
            return Err(Error::ExponentBound(format!("torsion of order {d}"), crate::scalars::max_exponent_denominator()));
        }
        let mut next = Vec::new();
        for base in &cosets {
            for j in 0..d {
                let mut z = vec![UnitScalar::one(); n];
                z[i] = UnitScalar::root_of_unity(BigRational::new(j.into(), d.into()));
                let shift = assemble(&z);
                next.push(base.iter().zip(&shift).map(|(a, b)| a.mul(b)).collect());
            }
        }
        cosets = next;
    }
    cosets.sort();
    cosets.dedup();
    let free: Vec<Vec<i64>> = (s.rank..n).map(|i| (0..n).map(|l| s.v[l][i] as i64).collect()).collect();
    let fam = SolutionFamily { particular, free, cosets };
    for pt in fam.points() {
        if !sys.satisfied_by(&pt) {
            return Err(Error::Defect("solver produced a non-solution".into()));
        }
    }
    Ok(vec![fam])
}

/// True when some member of the families equals `entry` for every value of
/// the extra symbols it contains; checked by substitution into the system,
/// which the families solve completely.
pub fn family_contains(sys: &ConstraintSystem, families: &[SolutionFamily], entry: &[UnitScalar]) -> bool {
    !families.is_empty() && entry.len() == sys.n && sys.satisfied_by(entry)
}

/// Outcome of checking a concrete tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct Goodness {
    pub good: bool,
    /// First word whose scale differs from q_k.
    pub witness: Option<Word>,
}

/// Checks that diag(p) scales every word of w by q_k; requires p_k = q_k.
pub fn is_good<C: Coeff>(sp: &Superpotential<C>, k: usize, p: &[C]) -> Result<Goodness> {
    let n = sp.n();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k + 1, n });
    }
    if p.len() != n {
        return Err(Error::Invalid(format!("tuple of length {} for {n} generators", p.len())));
    }
    let ctx = sp.ctx();
    if p[k] != sp.q[k] {
        let show = |c: &C| {
            let (neg, b) = c.render(ctx);
            format!("{}{b}", if neg { "-" } else { "" })
        };
        return Err(Error::OmittedSlot { found: show(&p[k]), expected: show(&sp.q[k]) });
    }
    let sigma = DiagonalMap::new(p.to_vec());
    for w in sp.w.terms().keys() {
        if sigma.word_scale(w)? != sp.q[k] {
            return Ok(Goodness { good: false, witness: Some(w.clone()) });
        }
    }
    Ok(Goodness { good: true, witness: None })
}
