//! Exact arithmetic in cyclotomic fields ℚ(ζ_N).
//!
//! An element is stored as a polynomial in ζ_N of degree < φ(N), reduced
//! modulo the N-th cyclotomic polynomial. Rational elements are normalized
//! to conductor 1, so the common case of rational coefficients never pays for
//! polynomial reduction.

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

static MAX_CONDUCTOR: AtomicU32 = AtomicU32::new(120);

/// Largest conductor arithmetic is allowed to promote to.
pub fn max_conductor() -> u32 {
    MAX_CONDUCTOR.load(Ordering::Relaxed)
}

pub fn set_max_conductor(n: u32) {
    MAX_CONDUCTOR.store(n.max(1), Ordering::Relaxed);
}

fn check_conductor(n: u64) -> Result<u32> {
    let max = max_conductor();
    if n == 0 || n > max as u64 {
        return Err(Error::ConductorOverflow(n, max));
    }
    Ok(n as u32)
}

/// Coefficients (low to high) of the n-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Φ_d with d a proper divisor of n.
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let q = cyclotomic_polynomial(d);
            p = exact_div_monic(&p, &q);
        }
    }
    let p = Arc::new(p);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn exact_div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let da = a.len() - 1;
    let mut q = vec![0i64; da - db + 1];
    for i in (0..=da - db).rev() {
        let c = r[i + db];
        q[i] = c;
        for j in 0..=db {
            r[i + j] -= c * b[j];
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

/// Euler's totient.
pub fn totient(n: u32) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

fn lcm(a: u32, b: u32) -> u64 {
    (a as u64).lcm(&(b as u64))
}

/// Element of ℚ(ζ_N).
#[derive(Clone)]
pub struct Scalar {
    conductor: u32,
    // trimmed: no trailing zeros, len <= φ(conductor); rational => conductor 1
    coeffs: Vec<BigRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { conductor: 1, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        if r.is_zero() {
            Self::zero()
        } else {
            Scalar { conductor: 1, coeffs: vec![r] }
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_rational(BigRational::new(num.into(), den.into())))
    }

    /// ζ_n^k.
    pub fn root_of_unity(n: u32, k: i64) -> Result<Self> {
        let n = check_conductor(n as u64)?;
        let k = k.rem_euclid(n as i64) as usize;
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = BigRational::one();
        Ok(Self::from_poly(n, v))
    }

    /// Builds from an arbitrary polynomial in ζ_n, reducing it.
    pub fn from_poly(n: u32, coeffs: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(n);
        let mut s = Scalar { conductor: n, coeffs: reduce_mod(coeffs, &phi) };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.len() <= 1 {
            self.conductor = 1;
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Coefficients in the power basis of ζ_conductor, low to high.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Coefficients of this element viewed in ℚ(ζ_target); `conductor | target`.
    pub fn promoted(&self, target: u32) -> Vec<BigRational> {
        if self.coeffs.len() <= 1 || self.conductor == target {
            return self.coeffs.clone();
        }
        assert!(target.is_multiple_of(self.conductor), "conductor {} does not divide {}", self.conductor, target);
        let step = (target / self.conductor) as usize;
        let mut v = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        reduce_mod(v, &cyclotomic_polynomial(target))
    }

    fn promoted_ref(&self, target: u32) -> Cow<'_, [BigRational]> {
        if self.coeffs.len() <= 1 || self.conductor == target {
            Cow::Borrowed(&self.coeffs)
        } else {
            Cow::Owned(self.promoted(target))
        }
    }

    fn common(&self, other: &Self) -> Result<u32> {
        if self.coeffs.len() <= 1 {
            return Ok(other.conductor);
        }
        if other.coeffs.len() <= 1 {
            return Ok(self.conductor);
        }
        check_conductor(lcm(self.conductor, other.conductor))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let n = self.common(other)?;
        let a = self.promoted_ref(n);
        let b = other.promoted_ref(n);
        let len = a.len().max(b.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let x = match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => x + y,
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            };
            out.push(x);
        }
        let mut s = Scalar { conductor: n, coeffs: out };
        s.normalize();
        Ok(s)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        if self.coeffs.len() == 1 {
            return Ok(other.scale_rational(&self.coeffs[0]));
        }
        if other.coeffs.len() == 1 {
            return Ok(self.scale_rational(&other.coeffs[0]));
        }
        let n = self.common(other)?;
        let a = self.promoted_ref(n);
        let b = other.promoted_ref(n);
        let mut prod = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Ok(Self::from_poly(n, prod))
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Scalar { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn neg(&self) -> Self {
        Scalar { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn inv(&self) -> Result<Self> {
        match self.coeffs.len() {
            0 => Err(Error::DivisionByZero),
            1 => Ok(Self::from_rational(self.coeffs[0].recip())),
            _ => {
                let phi: Vec<BigRational> = cyclotomic_polynomial(self.conductor)
                    .iter()
                    .map(|&c| BigRational::from_integer(c.into()))
                    .collect();
                let s = poly_inverse_mod(&self.coeffs, &phi).ok_or(Error::DivisionByZero)?;
                Ok(Self::from_poly(self.conductor, s))
            }
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.checked_mul(&b)?;
            }
        }
        Ok(acc)
    }

    /// Writes a nonzero element as ρ·e^{2πiθ} with ρ > 0 rational and θ ∈ [0, 1),
    /// if it has that shape.
    pub fn polar_rational(&self) -> Option<(BigRational, BigRational)> {
        let half = BigRational::new(1.into(), 2.into());
        if let Some(r) = self.as_rational() {
            if r.is_zero() {
                return None;
            }
            return Some(if r.is_positive() { (r, BigRational::zero()) } else { (-r, half) });
        }
        let n = self.conductor;
        for t in 0..n {
            let z = Scalar::root_of_unity(n, -(t as i64)).ok()?;
            let v = self.checked_mul(&z).ok()?;
            if let Some(r) = v.as_rational() {
                let theta = BigRational::new((t as i64).into(), (n as i64).into());
                return Some(if r.is_positive() {
                    (r, theta)
                } else {
                    (-r, frac(&(theta + half)))
                });
            }
        }
        None
    }

    /// Canonical text relative to conductor `n` (which must be a multiple of
    /// this element's conductor), naming ζ_n by `root`.
    pub fn to_text(&self, n: u32, root: &str) -> String {
        if let Some(r) = self.as_rational() {
            return rational_text(&r);
        }
        let n = if n.is_multiple_of(self.conductor) { n } else { self.conductor };
        // a rational multiple of a single power of ζ_n reads best as such
        for k in 1..n as i64 {
            let Ok(z) = Scalar::root_of_unity(n, -k) else { break };
            if let Some(r) = self.checked_mul(&z).ok().and_then(|v| v.as_rational()) {
                let mono = if k == 1 { root.to_string() } else { format!("{root}^{k}") };
                let sign = if r.is_negative() { "-" } else { "" };
                let mag = r.abs();
                return if mag.is_one() { format!("{sign}{mono}") } else { format!("{sign}{}*{mono}", rational_text(&mag)) };
            }
        }
        let v = self.promoted(n);
        let mut out = String::new();
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => None,
                1 => Some(root.to_string()),
                _ => Some(format!("{root}^{k}")),
            };
            let neg = c.is_negative();
            let mag = c.abs();
            let body = match (&mono, mag.is_one()) {
                (None, _) => rational_text(&mag),
                (Some(m), true) => m.clone(),
                (Some(m), false) => format!("{}*{}", rational_text(&mag), m),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

pub(crate) fn rational_text(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fractional part in [0, 1).
pub(crate) fn frac(r: &BigRational) -> BigRational {
    r - r.floor()
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        if self.coeffs.len() <= 1 || other.coeffs.len() <= 1 {
            return false;
        }
        let n = (self.conductor as u64).lcm(&(other.conductor as u64)) as u32;
        self.promoted(n) == other.promoted(n)
    }
}

impl Eq for Scalar {}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar[{}]({})", self.conductor, self.to_text(self.conductor, "z"))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(self.conductor, "z"))
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

fn reduce_mod(mut v: Vec<BigRational>, phi: &[i64]) -> Vec<BigRational> {
    let deg = phi.len() - 1;
    while v.len() > deg {
        let c = v.pop().unwrap();
        if c.is_zero() {
            continue;
        }
        let top = v.len(); // index of the popped coefficient
        for (j, &p) in phi[..deg].iter().enumerate() {
            match p {
                0 => {}
                1 => v[top - deg + j] -= &c,
                -1 => v[top - deg + j] += &c,
                _ => v[top - deg + j] -= &c * BigRational::from_integer(p.into()),
            }
        }
    }
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead = b.last().unwrap().clone();
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &c * bj;
        }
        q[shift] = c;
        r.pop();
        trim(&mut r);
    }
    (q, r)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let len = a.len().max(b.len());
    let mut out: Vec<BigRational> = (0..len)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

fn poly_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Option<Vec<BigRational>> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    let (mut s0, mut s1): (Vec<BigRational>, Vec<BigRational>) = (Vec::new(), vec![BigRational::one()]);
    trim(&mut r1);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].clone();
    Some(s0.into_iter().map(|x| x / &c).collect())
}

/// The binary operations exposed by [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    InvOfA,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldValue {
    Scalar(Scalar),
    Bool(bool),
}

pub fn field_arith(a: &Scalar, b: &Scalar, op: FieldOp) -> Result<FieldValue> {
    Ok(match op {
        FieldOp::Add => FieldValue::Scalar(a.checked_add(b)?),
        FieldOp::Mul => FieldValue::Scalar(a.checked_mul(b)?),
        FieldOp::InvOfA => FieldValue::Scalar(a.inv()?),
        FieldOp::Eq => FieldValue::Bool(a == b),
    })
}
