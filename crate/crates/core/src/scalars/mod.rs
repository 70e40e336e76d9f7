//! Exact scalars: cyclotomic field elements, symbolic units, and the
//! specialization map between them.

mod assign;
mod cyclotomic;
mod unit;

pub use assign::{specialize, unit_of, Assignment};
pub use cyclotomic::{
    cyclotomic_polynomial, field_arith, max_conductor, set_max_conductor, totient, FieldOp, FieldValue, Scalar,
};
pub use unit::{
    max_exponent_denominator, set_max_exponent_denominator, unit_arith, UnitOp, UnitScalar, UnitValue,
};
