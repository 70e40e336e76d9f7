//! Specialization of symbolic units to field elements.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::cyclotomic::{frac, Scalar};
use super::unit::{factor, UnitScalar};
use crate::error::{Error, Result};

/// Values for formal parameters, plus the conductor of the target field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    names: Vec<String>,
    values: Vec<Option<Scalar>>,
    conductor: u32,
}

impl Assignment {
    pub fn new(names: &[String], conductor: u32) -> Self {
        Assignment { names: names.to_vec(), values: vec![None; names.len()], conductor }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn set(&mut self, name: &str, value: Scalar) -> Result<()> {
        if value.is_zero() {
            return Err(Error::Invalid(format!("parameter `{name}` assigned zero")));
        }
        let j = self
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))?;
        self.values[j] = Some(value);
        Ok(())
    }

    pub fn get(&self, j: usize) -> Option<&Scalar> {
        self.values.get(j).and_then(|v| v.as_ref())
    }

    pub fn value(&self, name: &str) -> Option<&Scalar> {
        self.names.iter().position(|n| n == name).and_then(|j| self.get(j))
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(|v| v.is_some())
    }
}

/// Maps a symbolic unit into ℚ(ζ_N).
///
/// Rational powers of a parameter value v = ρ·e^{2πiθ} (θ ∈ [0,1)) are taken
/// as ρ^r · e^{2πi(θ + branch)r}; `branch = 0` is the principal root, and
/// e.g. `branch = 1` flips the sign of a square root. With a fixed branch the
/// map is a group homomorphism on the units it is defined on.
pub fn specialize(u: &UnitScalar, a: &Assignment, branch: i64) -> Result<Scalar> {
    let n = a.conductor;
    let mut angle = u.torsion().clone();
    let mut primes: BTreeMap<u64, BigRational> = u.primes().clone();
    let mut field_part = Scalar::one();
    for (j, r) in u.param_exponents().iter().enumerate() {
        if r.is_zero() {
            continue;
        }
        let name = a.names.get(j).cloned().unwrap_or_else(|| format!("t{}", j + 1));
        let v = a.get(j).ok_or_else(|| Error::Unassigned(name.clone()))?;
        match v.polar_rational() {
            Some((rho, theta)) => {
                let turn = theta + BigRational::from_integer(branch.into());
                angle += turn * r;
                for (p, e) in factor(rho.numer())? {
                    *primes.entry(p).or_insert_with(BigRational::zero) += r * BigRational::from_integer(e.into());
                }
                for (p, e) in factor(rho.denom())? {
                    *primes.entry(p).or_insert_with(BigRational::zero) -= r * BigRational::from_integer(e.into());
                }
            }
            None => {
                if !r.is_integer() {
                    return Err(Error::NotRealizable(format!(
                        "{name}^{r} with {name} := {v} is not a root of unity times a rational"
                    )));
                }
                let e = r.to_integer().to_i64().ok_or_else(|| Error::NotRealizable(format!("{name}^{r}")))?;
                field_part = field_part.checked_mul(&v.pow(e)?)?;
            }
        }
    }
    let mut magnitude = BigRational::one();
    for (p, e) in &primes {
        if e.is_zero() {
            continue;
        }
        if !e.is_integer() {
            return Err(Error::NotRealizable(format!("{p}^{e} is irrational")));
        }
        let e = e.to_integer().to_i32().ok_or_else(|| Error::NotRealizable(format!("{p}^{e}")))?;
        let b = BigRational::from_integer(BigInt::from(*p));
        magnitude *= num_traits::pow::Pow::pow(&b, e);
    }
    let angle = frac(&angle);
    let den = angle.denom().to_u32().unwrap_or(u32::MAX);
    // ℚ(ζ_N) = ℚ(ζ_2N) for odd N
    let field = if n % 2 == 1 { 2 * n as u64 } else { n as u64 };
    if field % den as u64 != 0 {
        return Err(Error::NotRealizable(format!(
            "root of unity of order {den} does not lie in the field of conductor {n}"
        )));
    }
    let k = angle.numer().to_i64().unwrap_or(0);
    let root = Scalar::root_of_unity(den, k)?;
    root.scale_rational(&magnitude).checked_mul(&field_part)
}

/// Maps a field element back to a symbolic unit, when it is a root of unity
/// times a rational.
pub fn unit_of(s: &Scalar) -> Result<UnitScalar> {
    let (rho, theta) = s
        .polar_rational()
        .ok_or_else(|| Error::NotAUnit(format!("{s} is not a root of unity times a rational")))?;
    Ok(UnitScalar::root_of_unity(theta).mul(&UnitScalar::from_rational(&rho)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn alpha(v: i64, n: u32) -> Assignment {
        let mut a = Assignment::new(&["a".to_string()], n);
        a.set("a", Scalar::from_int(v)).unwrap();
        a
    }

    #[test]
    fn torsion_embeds() {
        let u = UnitScalar::root_of_unity(q(1, 3));
        let s = specialize(&u, &alpha(1, 12), 0).unwrap();
        assert_eq!(s, Scalar::root_of_unity(12, 4).unwrap());
    }

    #[test]
    fn inverse_square_root() {
        let u = UnitScalar::param(0, q(-1, 2));
        assert_eq!(specialize(&u, &alpha(4, 1), 0).unwrap(), Scalar::from_ratio(1, 2).unwrap());
        assert_eq!(specialize(&u, &alpha(4, 1), 1).unwrap(), Scalar::from_ratio(-1, 2).unwrap());
    }

    #[test]
    fn plain_parameter() {
        let u = UnitScalar::param(0, q(1, 1));
        assert_eq!(specialize(&u, &alpha(2, 1), 0).unwrap(), Scalar::from_int(2));
    }

    #[test]
    fn negative_square_root_needs_i() {
        let u = UnitScalar::param(0, q(1, 2));
        assert!(matches!(specialize(&u, &alpha(-4, 1), 0), Err(Error::NotRealizable(_))));
        let s = specialize(&u, &alpha(-4, 4), 0).unwrap();
        assert_eq!(s, Scalar::root_of_unity(4, 1).unwrap().scale_rational(&q(2, 1)));
    }

    #[test]
    fn irrational_rejected() {
        let u = UnitScalar::param(0, q(1, 2));
        assert!(specialize(&u, &alpha(2, 8), 0).is_err());
        assert!(specialize(&u, &Assignment::new(&["a".to_string()], 1), 0).is_err());
    }

    #[test]
    fn unit_roundtrip() {
        let s = Scalar::root_of_unity(6, 1).unwrap().scale_rational(&q(-3, 4));
        let u = unit_of(&s).unwrap();
        assert_eq!(specialize(&u, &Assignment::new(&[], 6), 0).unwrap(), s);
    }
}
