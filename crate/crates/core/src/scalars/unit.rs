//! The multiplicative group of "symbolic units": e^{2πi r} · ∏ p^{e_p} · ∏ t_j^{a_j}
//! with r ∈ ℚ/ℤ, p ranging over rational primes and t_j over declared formal
//! parameters. All exponents are rational, so the group is divisible and the
//! good-tuple equations become linear.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cyclotomic::{frac, rational_text};
use crate::error::{Error, Result};

static MAX_DENOMINATOR: AtomicU64 = AtomicU64::new(12);

/// Largest exponent denominator accepted by rational powers and the solver.
pub fn max_exponent_denominator() -> u64 {
    MAX_DENOMINATOR.load(Ordering::Relaxed)
}

pub fn set_max_exponent_denominator(d: u64) {
    MAX_DENOMINATOR.store(d.max(1), Ordering::Relaxed);
}

pub(crate) fn check_denominator(r: &BigRational, what: &str) -> Result<()> {
    let cap = max_exponent_denominator();
    match r.denom().to_u64() {
        Some(d) if d <= cap => Ok(()),
        _ => Err(Error::ExponentBound(format!("{what}: {}", rational_text(r)), cap)),
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitScalar {
    torsion: BigRational,
    primes: BTreeMap<u64, BigRational>,
    // trimmed of trailing zeros; index j is the j-th declared parameter
    params: Vec<BigRational>,
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Prime factorization by trial division; inputs are small literals.
pub(crate) fn factor(n: &BigInt) -> Result<BTreeMap<u64, i64>> {
    let mut n = n
        .abs()
        .to_u64()
        .ok_or_else(|| Error::NotRealizable(format!("{n} is too large to factor")))?;
    let mut out = BTreeMap::new();
    if n == 0 {
        return Err(Error::DivisionByZero);
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        while n % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
        if p > 10_000_000 {
            return Err(Error::Resource(format!("factoring {n}")));
        }
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    Ok(out)
}

impl UnitScalar {
    pub fn one() -> Self {
        UnitScalar { torsion: BigRational::zero(), primes: BTreeMap::new(), params: Vec::new() }
    }

    /// e^{2πi r}.
    pub fn root_of_unity(r: BigRational) -> Self {
        UnitScalar { torsion: frac(&r), ..Self::one() }
    }

    pub fn minus_one() -> Self {
        Self::root_of_unity(BigRational::new(1.into(), 2.into()))
    }

    pub fn from_rational(r: &BigRational) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::NotAUnit("0".into()));
        }
        let mut u = if r.is_negative() { Self::minus_one() } else { Self::one() };
        for (p, e) in factor(r.numer())? {
            u.primes.insert(p, BigRational::from_integer(e.into()));
        }
        for (p, e) in factor(r.denom())? {
            u.primes.insert(p, BigRational::from_integer((-e).into()));
        }
        Ok(u)
    }

    pub fn from_int(v: i64) -> Result<Self> {
        Self::from_rational(&BigRational::from_integer(v.into()))
    }

    /// The j-th declared parameter raised to the exponent `a`.
    pub fn param(j: usize, a: BigRational) -> Self {
        let mut params = vec![BigRational::zero(); j + 1];
        params[j] = a;
        let mut u = UnitScalar { params, ..Self::one() };
        trim(&mut u.params);
        u
    }

    pub fn torsion(&self) -> &BigRational {
        &self.torsion
    }

    pub fn primes(&self) -> &BTreeMap<u64, BigRational> {
        &self.primes
    }

    pub fn param_exponent(&self, j: usize) -> BigRational {
        self.params.get(j).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn param_exponents(&self) -> &[BigRational] {
        &self.params
    }

    pub fn is_one(&self) -> bool {
        self.torsion.is_zero() && self.primes.is_empty() && self.params.is_empty()
    }

    /// True when the unit is a root of unity times a positive rational, i.e.
    /// it involves no formal parameter.
    pub fn is_constant(&self) -> bool {
        self.params.is_empty()
    }

    /// ρ with the torsion part stripped, when there is no parameter and all
    /// prime exponents are integers.
    pub fn magnitude(&self) -> Option<BigRational> {
        let mut acc = BigRational::one();
        for (p, e) in &self.primes {
            if !e.is_integer() {
                return None;
            }
            let e = e.to_integer().to_i32()?;
            let b = BigRational::from_integer(BigInt::from(*p));
            acc *= num_traits::pow::Pow::pow(&b, e);
        }
        Some(acc)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut primes = self.primes.clone();
        for (p, e) in &other.primes {
            let v = primes.entry(*p).or_insert_with(BigRational::zero);
            *v += e;
            if v.is_zero() {
                primes.remove(p);
            }
        }
        let len = self.params.len().max(other.params.len());
        let mut params: Vec<BigRational> =
            (0..len).map(|j| self.param_exponent(j) + other.param_exponent(j)).collect();
        trim(&mut params);
        UnitScalar { torsion: frac(&(&self.torsion + &other.torsion)), primes, params }
    }

    pub fn inv(&self) -> Self {
        self.pow(&-BigRational::one())
    }

    /// Rational power. Torsion is raised along the principal branch, so
    /// `pow` is a homomorphism only for integer exponents.
    pub fn pow(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::one();
        }
        let primes = self.primes.iter().map(|(p, e)| (*p, e * r)).collect();
        let params = self.params.iter().map(|a| a * r).collect();
        UnitScalar { torsion: frac(&(&self.torsion * r)), primes, params }
    }

    /// Like [`pow`](Self::pow) but enforcing the exponent-denominator cap on the result.
    pub fn checked_pow(&self, r: &BigRational) -> Result<Self> {
        let u = self.pow(r);
        u.check_denominators()?;
        Ok(u)
    }

    pub fn check_denominators(&self) -> Result<()> {
        check_denominator(&self.torsion, "root of unity")?;
        for e in self.primes.values() {
            check_denominator(e, "rational exponent")?;
        }
        for a in &self.params {
            check_denominator(a, "parameter exponent")?;
        }
        Ok(())
    }

    /// Sum of two units, when it is again a unit: requires the ratio to be a
    /// rational number ρ ≠ −1. Returns `None` when the sum vanishes.
    pub fn checked_add(&self, other: &Self) -> Result<Option<Self>> {
        let ratio = self.mul(&other.inv());
        let rho = ratio.as_rational();
        match rho {
            Some(rho) => {
                let s = BigRational::one() + rho;
                if s.is_zero() {
                    Ok(None)
                } else {
                    Ok(Some(other.mul(&Self::from_rational(&s)?)))
                }
            }
            None => Err(Error::NotAUnit(format!("{self} + {other}"))),
        }
    }

    /// The unit as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        if !self.params.is_empty() {
            return None;
        }
        let sign = if self.torsion.is_zero() {
            BigRational::one()
        } else if self.torsion == BigRational::new(1.into(), 2.into()) {
            -BigRational::one()
        } else {
            return None;
        };
        Some(sign * self.magnitude()?)
    }

    /// Canonical text: factors joined by `*`, with `-` for torsion 1/2, the
    /// root of unity written as a power of `root` (ζ_n), a positive rational
    /// magnitude, then parameters in declaration order.
    pub fn to_text(&self, n: u32, root: &str, params: &[String]) -> String {
        let half = BigRational::new(1.into(), 2.into());
        let mut factors: Vec<String> = Vec::new();
        let mut sign = "";
        if self.torsion == half {
            sign = "-";
        } else if !self.torsion.is_zero() {
            let k = &self.torsion * BigRational::from_integer(n.into());
            factors.push(power_text(root, &k));
        }
        match self.magnitude() {
            Some(r) if r.is_one() => {}
            Some(r) => factors.insert(0, rational_text(&r)),
            None => {
                for (p, e) in &self.primes {
                    factors.push(power_text(&p.to_string(), e));
                }
            }
        }
        for (j, a) in self.params.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let name = params.get(j).cloned().unwrap_or_else(|| format!("t{}", j + 1));
            factors.push(power_text(&name, a));
        }
        if factors.is_empty() {
            factors.push("1".into());
        }
        format!("{sign}{}", factors.join("*"))
    }
}

fn power_text(base: &str, e: &BigRational) -> String {
    if e.is_one() {
        base.to_string()
    } else if e.is_integer() && e.is_positive() {
        format!("{base}^{}", e.numer())
    } else {
        format!("{base}^{{{}}}", rational_text(e))
    }
}

impl fmt::Debug for UnitScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Unit({})", self)
    }
}

impl fmt::Display for UnitScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Without a context: torsion as e(r), parameters as t1, t2, ...
        let half = BigRational::new(1.into(), 2.into());
        let n = if self.torsion.is_zero() || self.torsion == half {
            1
        } else {
            self.torsion.denom().to_u32().unwrap_or(1)
        };
        f.write_str(&self.to_text(n, &format!("zeta{n}"), &[]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitOp {
    Mul,
    PowByRational,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnitValue {
    Unit(UnitScalar),
    Bool(bool),
}

/// `PowByRational` takes its exponent from `r`; the other operations ignore it.
pub fn unit_arith(u: &UnitScalar, v: &UnitScalar, op: UnitOp, r: &BigRational) -> UnitValue {
    match op {
        UnitOp::Mul => UnitValue::Unit(u.mul(v)),
        UnitOp::PowByRational => UnitValue::Unit(u.pow(r)),
        UnitOp::Eq => UnitValue::Bool(u == v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn zeta3_times_zeta3_squared() {
        let a = UnitScalar::root_of_unity(q(1, 3));
        let b = UnitScalar::root_of_unity(q(2, 3));
        assert!(a.mul(&b).is_one());
    }

    #[test]
    fn square_root_squared() {
        let s = UnitScalar::param(0, q(1, 2));
        assert_eq!(s.pow(&q(2, 1)), UnitScalar::param(0, q(1, 1)));
    }

    #[test]
    fn sign_matters() {
        let a = UnitScalar::param(0, q(1, 1));
        assert_ne!(UnitScalar::minus_one().mul(&a), a);
        assert_eq!(unit_arith(&UnitScalar::minus_one().mul(&a), &a, UnitOp::Eq, &q(0, 1)), UnitValue::Bool(false));
    }

    #[test]
    fn rationals_factor() {
        let u = UnitScalar::from_rational(&q(-12, 5)).unwrap();
        assert_eq!(u.as_rational(), Some(q(-12, 5)));
        let v = UnitScalar::from_int(4).unwrap().pow(&q(-1, 2));
        assert_eq!(v.as_rational(), Some(q(1, 2)));
    }

    #[test]
    fn sums() {
        let a = UnitScalar::param(0, q(1, 1));
        let two_a = a.checked_add(&a).unwrap().unwrap();
        assert_eq!(two_a, a.mul(&UnitScalar::from_int(2).unwrap()));
        assert_eq!(a.checked_add(&a.mul(&UnitScalar::minus_one())).unwrap(), None);
        assert!(a.checked_add(&UnitScalar::one()).is_err());
    }

    #[test]
    fn text() {
        let names = vec!["a".to_string(), "b".to_string()];
        let u = UnitScalar::minus_one().mul(&UnitScalar::param(0, q(-1, 2)));
        assert_eq!(u.to_text(3, "z", &names), "-a^{-1/2}");
        let v = UnitScalar::root_of_unity(q(2, 3)).mul(&UnitScalar::from_int(3).unwrap());
        assert_eq!(v.to_text(3, "z", &names), "3*z^2");
        assert_eq!(UnitScalar::one().to_text(1, "z", &names), "1");
    }

    #[test]
    fn denominator_cap() {
        let u = UnitScalar::param(0, q(1, 1));
        assert!(u.checked_pow(&q(1, 13)).is_err());
        assert!(u.checked_pow(&q(1, 12)).is_ok());
    }
}
