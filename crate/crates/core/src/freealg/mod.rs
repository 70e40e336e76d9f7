//! Words, elements of the tensor algebra TV, and the input language.

mod coeff;
mod dsl;
mod element;
mod word;

use std::sync::Arc;

pub use coeff::Coeff;
pub use dsl::{parse_file, parse_poly, parse_scalar, parse_tuple, AlgebraFile};
pub use element::FreeElement;
pub use word::Word;

use crate::error::{Error, Result};
use crate::scalars::{Assignment, Scalar};

/// Generator names, the conductor of the coefficient field, and formal
/// parameters with their (optional) values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    gens: Vec<String>,
    assignment: Assignment,
    root_name: String,
}

impl Context {
    pub fn new(gens: &[&str], conductor: u32, params: &[&str]) -> Result<Arc<Self>> {
        let gens: Vec<String> = gens.iter().map(|s| s.to_string()).collect();
        let params: Vec<String> = params.iter().map(|s| s.to_string()).collect();
        Self::from_parts(gens, conductor, params)
    }

    pub fn from_parts(gens: Vec<String>, conductor: u32, params: Vec<String>) -> Result<Arc<Self>> {
        if gens.is_empty() || gens.len() > 255 {
            return Err(Error::Invalid(format!("{} generators", gens.len())));
        }
        let mut seen = std::collections::BTreeSet::new();
        for g in gens.iter().chain(params.iter()) {
            if !seen.insert(g.as_str()) {
                return Err(Error::Invalid(format!("name `{g}` declared twice")));
            }
        }
        let root_name = if seen.contains("z") { "zeta" } else { "z" }.to_string();
        if seen.contains(root_name.as_str()) {
            return Err(Error::Invalid("`z` and `zeta` cannot both be declared".into()));
        }
        let assignment = Assignment::new(&params, conductor);
        Ok(Arc::new(Context { gens, assignment, root_name }))
    }

    pub fn n(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> &[String] {
        &self.gens
    }

    pub fn conductor(&self) -> u32 {
        self.assignment.conductor()
    }

    pub fn params(&self) -> &[String] {
        self.assignment.names()
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    /// Name used for ζ_N in text: `z`, or `zeta` when `z` is a generator or parameter.
    pub fn root_name(&self) -> &str {
        &self.root_name
    }

    pub fn with_assignment(&self, assignment: Assignment) -> Result<Arc<Self>> {
        if assignment.names() != self.params() {
            return Err(Error::ContextMismatch("assignment parameters differ".into()));
        }
        let mut c = self.clone();
        c.assignment = assignment;
        Ok(Arc::new(c))
    }

    pub fn assign(&self, name: &str, value: Scalar) -> Result<Arc<Self>> {
        let mut a = self.assignment.clone();
        a.set(name, value)?;
        self.with_assignment(a)
    }

    /// The same context with further unassigned parameters appended.
    pub fn with_params(&self, extra: &[&str]) -> Result<Arc<Self>> {
        let mut params = self.params().to_vec();
        params.extend(extra.iter().map(|s| s.to_string()));
        let fresh = Self::from_parts(self.gens.clone(), self.conductor(), params)?;
        let mut a = fresh.assignment.clone();
        for (j, name) in self.params().iter().enumerate() {
            if let Some(v) = self.assignment.get(j) {
                a.set(name, v.clone())?;
            }
        }
        fresh.with_assignment(a)
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g == name)
    }

    /// Checks a 1-based generator index and returns it 0-based.
    pub fn index(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.n() {
            return Err(Error::IndexOutOfRange { index: i, n: self.n() });
        }
        Ok(i - 1)
    }

    pub fn word_text(&self, w: &Word) -> String {
        let parts: Vec<&str> = w.letters().iter().map(|&c| self.gens[c as usize].as_str()).collect();
        parts.join("*")
    }

    /// Same generators and field, ignoring parameter values.
    pub fn compatible(&self, other: &Context) -> bool {
        self.gens == other.gens && self.conductor() == other.conductor() && self.params() == other.params()
    }
}
