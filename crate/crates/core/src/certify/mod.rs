//! The extension D(w,p) and the finite checks that it is a regular normal
//! extension of A(w), up to a degree bound.

mod hilbert;
mod nakayama;
mod resolution;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freealg::{Coeff, Context, FreeElement};
use crate::quotient::{DegreeTable, Engine, Presentation, Quotient};
use crate::scalars::Scalar;
use crate::superpotential::Superpotential;
use crate::tuples::is_good;

pub use hilbert::{omega_certificate, verify_hilbert, HilbertReport, OmegaReport};
pub use nakayama::{hdet_certificate, nakayama, HdetReport, NakayamaReport};
pub use resolution::{build_resolution, resolution_certificate, ResolutionData, ResolutionReport};

/// D(w,p) for the omitted index k (0-based).
#[derive(Debug, Clone)]
pub struct ExtensionSpec {
    pub sp: Superpotential<Scalar>,
    pub k: usize,
    pub p: Vec<Scalar>,
    pub presentation: Presentation,
    /// f_k, the distinguished element.
    pub omega: FreeElement<Scalar>,
    label: String,
}

/// x_i f − c f x_i.
pub fn twisted_commutator(i: usize, f: &FreeElement<Scalar>, c: &Scalar) -> Result<FreeElement<Scalar>> {
    f.lmul_gen(i).sub(&f.rmul_gen(i).scale(c)?)
}

pub fn build_extension(sp: &Superpotential<Scalar>, p: &[Scalar], k: usize, label: &str) -> Result<ExtensionSpec> {
    let n = sp.n();
    if n < 2 {
        return Err(Error::Invalid("an extension needs at least two generators".into()));
    }
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k + 1, n });
    }
    if p.len() != n {
        return Err(Error::Invalid(format!("tuple of length {} for {n} generators", p.len())));
    }
    if p.iter().any(Scalar::is_zero) {
        return Err(Error::Invalid("tuple entries must be nonzero".into()));
    }
    let ctx = sp.ctx();
    if p[k] != sp.q[k] {
        return Err(Error::OmittedSlot { found: p[k].text(ctx), expected: sp.q[k].text(ctx) });
    }
    let omega = sp.f[k].clone();
    let mut rels = Vec::with_capacity(2 * (n - 1));
    for (i, fi) in sp.f.iter().enumerate() {
        if i != k {
            rels.push(fi.clone());
        }
    }
    for i in (0..n).filter(|&i| i != k) {
        rels.push(twisted_commutator(i, &omega, &p[i])?);
    }
    let presentation = Presentation::new(ctx, rels, &format!("D({label})"))?;
    Ok(ExtensionSpec { sp: sp.clone(), k, p: p.to_vec(), presentation, omega, label: label.to_string() })
}

impl ExtensionSpec {
    pub fn ctx(&self) -> &Arc<Context> {
        self.sp.ctx()
    }

    pub fn n(&self) -> usize {
        self.sp.n()
    }

    pub fn m(&self) -> usize {
        self.sp.m
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// A(w) = TV/(f_1, …, f_n).
    pub fn base(&self) -> Result<Presentation> {
        Presentation::new(self.ctx(), self.sp.f.clone(), &format!("A({})", self.label))
    }

    /// Relations for the image of Ω: x_i Ω − p_i Ω x_i for i ≠ k and x_k Ω − q_k Ω x_k.
    pub fn normality_elements(&self) -> Result<Vec<FreeElement<Scalar>>> {
        (0..self.n())
            .map(|i| {
                let c = if i == self.k { &self.sp.q[self.k] } else { &self.p[i] };
                twisted_commutator(i, &self.omega, c)
            })
            .collect()
    }
}

/// Both quotients computed once and shared by every check.
#[derive(Debug, Clone)]
pub struct Workspace {
    pub spec: ExtensionSpec,
    pub bound: usize,
    pub d: Quotient,
    pub a: Quotient,
}

impl Workspace {
    pub fn new(spec: ExtensionSpec, bound: usize, engine: Engine) -> Result<Self> {
        let d = Quotient::compute(&spec.presentation, bound, engine)?;
        let a = Quotient::compute(&spec.base()?, bound, engine)?;
        Ok(Workspace { spec, bound, d, a })
    }

    pub fn engine(&self) -> Engine {
        self.d.engine()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    fn new(name: &str, pass: bool, witness: Option<String>) -> Self {
        Check { name: name.to_string(), pass, witness }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Tables {
    pub a: DegreeTable,
    pub d: DegreeTable,
}

#[derive(Debug, Clone, Serialize)]
pub struct HdetFactors {
    pub lambda: String,
    pub tau: String,
    pub nu_a: String,
    pub product: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    pub predicted: Vec<usize>,
    pub e: Vec<i64>,
    pub z: Vec<i64>,
    pub z_right: Vec<usize>,
    pub z_left: Vec<usize>,
    pub euler_residuals: Vec<i64>,
    pub nakayama: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_eigenvalue: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hdet: Option<HdetFactors>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub algebra: String,
    pub k: usize,
    pub p: Vec<String>,
    pub bound: usize,
    pub verified_to: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub tables: Tables,
    pub diagnostics: Diagnostics,
}

impl Certificate {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Every check, in a fixed order. Mathematical failures are recorded in the
/// certificate; only input and resource problems are errors.
pub fn certify(ws: &Workspace) -> Result<Certificate> {
    let spec = &ws.spec;
    let ctx = spec.ctx();
    let mut checks = Vec::new();

    let good = is_good(&spec.sp, spec.k, &spec.p)?;
    checks.push(Check::new("good_tuple", good.good, good.witness.map(|w| format!("monomial {}", ctx.word_text(&w)))));

    let hil = verify_hilbert(ws)?;
    checks.push(Check::new(
        "hilbert",
        hil.pass,
        hil.first_defect.map(|k| format!("e_{k} = {}", hil.e[k])),
    ));
    if ws.engine() == Engine::Both {
        checks.push(Check::new("engine_agreement", true, None));
    }

    let om = omega_certificate(ws)?;
    checks.push(Check::new(
        "omega_normal",
        om.normal,
        om.normal_witness.map(|i| format!("x_{} Ω not proportional to Ω x_{}", i + 1, i + 1)),
    ));
    checks.push(Check::new(
        "omega_central",
        om.central == om.central_expected,
        Some(format!("central: {}, expected: {}", om.central, om.central_expected)),
    ));
    checks.push(Check::new(
        "omega_regular",
        om.regular && om.z_consistent,
        om.first_irregular
            .map(|d| format!("multiplication by Ω has a kernel on degree {d}"))
            .or_else(|| (!om.z_consistent).then(|| "kernel dimensions disagree with the Hilbert defect".to_string())),
    ));

    let res = build_resolution(spec)?;
    let rc = resolution_certificate(&res, ws)?;
    checks.push(Check::new(
        "resolution_complex",
        rc.complex,
        rc.complex_witness.map(|(i, j)| format!("(M_l M_r)_{{{},{}}} not in the ideal", i + 1, j + 1)),
    ));
    checks.push(Check::new(
        "euler_residuals",
        rc.euler_pass,
        rc.euler.iter().position(|r| *r != 0).map(|t| format!("residual {} in degree {t}", rc.euler[t])),
    ));
    checks.push(Check::new(
        "resolution_exact",
        rc.exact,
        rc.exact_witness.map(|(t, i, h)| format!("homology of dimension {h} at position {i} in degree {t}")),
    ));

    let nk = nakayama(ws)?;
    checks.push(Check::new(
        "nakayama",
        nk.preserves_relations && nk.omega_eigenvalue.is_some() && nk.tau_check,
        nk.witness.clone(),
    ));
    let hd = hdet_certificate(spec);
    let (hdet_check, hdet) = match &hd {
        Ok(h) => (
            Check::new(
                "hdet",
                h.product.is_one() && h.factors_as_expected,
                (!h.factors_as_expected).then(|| "factors differ from (q_k, q_k^-1, 1)".to_string()),
            ),
            Some(HdetFactors {
                lambda: h.lambda.text(ctx),
                tau: h.tau.text(ctx),
                nu_a: h.nu_a.text(ctx),
                product: h.product.text(ctx),
            }),
        ),
        Err(Error::NotEigenvector(a, b)) => {
            (Check::new("hdet", false, Some(format!("monomials {a} and {b} scale differently"))), None)
        }
        Err(e) => return Err(e.clone()),
    };
    checks.push(hdet_check);

    let pass = checks.iter().all(|c| c.pass);
    Ok(Certificate {
        algebra: spec.label.clone(),
        k: spec.k + 1,
        p: spec.p.iter().map(|c| c.text(ctx)).collect(),
        bound: ws.bound,
        verified_to: format!("verified to degree {}", ws.bound),
        pass,
        checks,
        tables: Tables { a: hil.a, d: hil.d },
        diagnostics: Diagnostics {
            predicted: hil.predicted,
            e: hil.e,
            z: hil.z,
            z_right: om.z_right,
            z_left: om.z_left,
            euler_residuals: rc.euler,
            nakayama: nk.nu.s.iter().map(|c| c.text(ctx)).collect(),
            omega_eigenvalue: nk.omega_eigenvalue.map(|c| c.text(ctx)),
            hdet,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::parse_poly;

    pub(crate) const W_POLY: &str = "x*y*z + y*z*x + z*x*y - x*z*y - z*y*x - y*x*z";

    pub(crate) fn w_poly() -> Superpotential<Scalar> {
        let ctx = Context::new(&["x", "y", "z"], 1, &[]).unwrap();
        Superpotential::new(parse_poly(W_POLY, &ctx).unwrap()).unwrap()
    }

    pub(crate) fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&c| Scalar::from_int(c)).collect()
    }

    #[test]
    fn polynomial_ring_extension_relations() {
        let sp = w_poly();
        let spec = build_extension(&sp, &ints(&[1, 1, 1]), 0, "w_poly").unwrap();
        let ctx = sp.ctx();
        let expected: Vec<_> = ["z*x - x*z", "x*y - y*x", "y*(y*z - z*y) - (y*z - z*y)*y", "z*(y*z - z*y) - (y*z - z*y)*z"]
            .iter()
            .map(|s| parse_poly(s, ctx).unwrap())
            .collect();
        let want = Presentation::new(ctx, expected, "").unwrap();
        assert_eq!(spec.presentation.relations(), want.relations());
    }

    #[test]
    fn omitted_slot_and_range() {
        let sp = w_poly();
        assert!(matches!(build_extension(&sp, &ints(&[2, 1, 1]), 0, "w"), Err(Error::OmittedSlot { .. })));
        assert!(matches!(build_extension(&sp, &ints(&[1, 1, 1]), 3, "w"), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn adding_omega_recovers_base() {
        let sp = w_poly();
        let spec = build_extension(&sp, &ints(&[1, 1, 1]), 1, "w").unwrap();
        let mut rels = spec.presentation.relations().to_vec();
        rels.push(spec.omega.clone());
        let with_omega = Presentation::new(sp.ctx(), rels, "").unwrap();
        let base = spec.base().unwrap();
        assert_eq!(crate::quotient::first_ideal_difference(&with_omega, &base, 4).unwrap(), None);
    }

    #[test]
    fn full_certificate_polynomial_ring() {
        let spec = build_extension(&w_poly(), &ints(&[1, 1, 1]), 0, "w_poly").unwrap();
        let ws = Workspace::new(spec, 8, Engine::Both).unwrap();
        let cert = certify(&ws).unwrap();
        for c in &cert.checks {
            assert!(c.pass, "{c:?}");
        }
        assert_eq!(&cert.tables.d.dims[..6], &[1, 3, 7, 13, 22, 34]);
        assert_eq!(cert.check("omega_central").unwrap().witness.as_deref(), Some("central: true, expected: true"));
        assert_eq!(cert.diagnostics.nakayama, vec!["1", "1", "1"]);
    }

    #[test]
    fn bad_tuple_fails_consistently() {
        let spec = build_extension(&w_poly(), &ints(&[1, 2, 1]), 0, "w_poly").unwrap();
        let ws = Workspace::new(spec, 8, Engine::Both).unwrap();
        let cert = certify(&ws).unwrap();
        assert!(!cert.pass);
        for name in ["good_tuple", "hilbert", "resolution_complex", "omega_regular"] {
            assert!(!cert.check(name).unwrap().pass, "{name}");
        }
        assert!(cert.check("omega_normal").unwrap().pass);
    }
}
