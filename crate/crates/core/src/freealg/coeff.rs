use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::Context;
use crate::error::{Error, Result};
use crate::scalars::{specialize, unit_of, Scalar, UnitScalar};

/// Coefficient domains for free-algebra elements: field elements, or
/// symbolic units where addition is only partially defined.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug + Send + Sync + 'static {
    fn one() -> Self;
    fn is_one(&self) -> bool;
    /// Only field values can be zero.
    fn is_zero(&self) -> bool {
        false
    }
    /// `None` for zero.
    fn from_rational(r: &BigRational) -> Result<Option<Self>>;
    /// e^{2πi k/N} for the context conductor N.
    fn root(ctx: &Context, k: &BigRational) -> Result<Self>;
    fn param(ctx: &Context, j: usize) -> Result<Self>;
    fn mul(&self, other: &Self) -> Result<Self>;
    fn inv(&self) -> Result<Self>;
    fn neg(&self) -> Self;
    /// `None` when the sum vanishes.
    fn add(&self, other: &Self) -> Result<Option<Self>>;
    fn pow_rational(&self, ctx: &Context, r: &BigRational) -> Result<Self>;
    /// Sign flag and text of the absolute part; compound texts come parenthesized.
    fn render(&self, ctx: &Context) -> (bool, String);

    /// Standalone text, with a leading minus sign when negative.
    fn text(&self, ctx: &Context) -> String {
        let (neg, body) = self.render(ctx);
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl Coeff for Scalar {
    fn one() -> Self {
        Scalar::one()
    }

    fn is_one(&self) -> bool {
        Scalar::is_one(self)
    }

    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }

    fn from_rational(r: &BigRational) -> Result<Option<Self>> {
        let s = Scalar::from_rational(r.clone());
        Ok(if s.is_zero() { None } else { Some(s) })
    }

    fn root(ctx: &Context, k: &BigRational) -> Result<Self> {
        let n = ctx.conductor();
        if k.is_integer() {
            let k = k.to_integer().to_i64().ok_or_else(|| Error::Invalid("root exponent".into()))?;
            return Scalar::root_of_unity(n, k);
        }
        let u = UnitScalar::root_of_unity(k / BigRational::from_integer(n.into()));
        specialize(&u, ctx.assignment(), 0)
    }

    fn param(ctx: &Context, j: usize) -> Result<Self> {
        ctx.assignment().get(j).cloned().ok_or_else(|| Error::Unassigned(ctx.params()[j].clone()))
    }

    fn mul(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)
    }

    fn inv(&self) -> Result<Self> {
        Scalar::inv(self)
    }

    fn neg(&self) -> Self {
        Scalar::neg(self)
    }

    fn add(&self, other: &Self) -> Result<Option<Self>> {
        let s = self.checked_add(other)?;
        Ok(if s.is_zero() { None } else { Some(s) })
    }

    fn pow_rational(&self, ctx: &Context, r: &BigRational) -> Result<Self> {
        if r.is_integer() {
            let e = r.to_integer().to_i64().ok_or_else(|| Error::Invalid("exponent too large".into()))?;
            return self.pow(e);
        }
        let u = unit_of(self)?.checked_pow(r)?;
        specialize(&u, ctx.assignment(), 0)
    }

    fn render(&self, ctx: &Context) -> (bool, String) {
        let n = ctx.conductor();
        if let Some(r) = self.as_rational() {
            return (r.is_negative(), Scalar::from_rational(r.abs()).to_text(n, ctx.root_name()));
        }
        let text = self.to_text(n, ctx.root_name());
        if text.contains(" + ") || text.contains(" - ") {
            return (false, format!("({text})"));
        }
        match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        }
    }
}

impl Coeff for UnitScalar {
    fn one() -> Self {
        UnitScalar::one()
    }

    fn is_one(&self) -> bool {
        UnitScalar::is_one(self)
    }

    fn from_rational(r: &BigRational) -> Result<Option<Self>> {
        if num_traits::Zero::is_zero(r) {
            return Ok(None);
        }
        UnitScalar::from_rational(r).map(Some)
    }

    fn root(ctx: &Context, k: &BigRational) -> Result<Self> {
        Ok(UnitScalar::root_of_unity(k / BigRational::from_integer(ctx.conductor().into())))
    }

    fn param(_ctx: &Context, j: usize) -> Result<Self> {
        Ok(UnitScalar::param(j, BigRational::from_integer(1.into())))
    }

    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(UnitScalar::mul(self, other))
    }

    fn inv(&self) -> Result<Self> {
        Ok(UnitScalar::inv(self))
    }

    fn neg(&self) -> Self {
        self.mul(&UnitScalar::minus_one())
    }

    fn add(&self, other: &Self) -> Result<Option<Self>> {
        self.checked_add(other)
    }

    fn pow_rational(&self, _ctx: &Context, r: &BigRational) -> Result<Self> {
        self.checked_pow(r)
    }

    fn render(&self, ctx: &Context) -> (bool, String) {
        let text = self.to_text(ctx.conductor(), ctx.root_name(), ctx.params());
        match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        }
    }
}
