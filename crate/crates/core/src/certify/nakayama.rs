//! The Nakayama automorphism ν_D = ((p_i q_i)^{-1}) and hdet(ν_D) = 1.

use crate::error::{Error, Result};
use crate::scalars::Scalar;
use crate::superpotential::DiagonalMap;

use super::{twisted_commutator, ExtensionSpec, Workspace};

#[derive(Debug, Clone)]
pub struct NakayamaReport {
    pub nu: DiagonalMap<Scalar>,
    /// τ = (p_i^{-1}), with Ω x ≡ τ(x) Ω.
    pub tau: DiagonalMap<Scalar>,
    /// ν maps every defining relation into the ideal.
    pub preserves_relations: bool,
    pub omega_eigenvalue: Option<Scalar>,
    pub tau_check: bool,
    /// τ^{-1} ν_D agrees with ν_A = (q_i^{-1}).
    pub nu_a_matches: bool,
    pub witness: Option<String>,
}

fn invert_all(v: &[Scalar]) -> Result<Vec<Scalar>> {
    v.iter().map(Scalar::inv).collect()
}

pub fn nakayama(ws: &Workspace) -> Result<NakayamaReport> {
    let spec = &ws.spec;
    let ctx = spec.ctx();
    let pq: Vec<Scalar> = spec.p.iter().zip(&spec.sp.q).map(|(a, b)| a.checked_mul(b)).collect::<Result<_>>()?;
    let nu = DiagonalMap::new(invert_all(&pq)?);
    let tau = DiagonalMap::new(invert_all(&spec.p)?);
    let mut witness = None;

    // ν is invertible and graded, so ν(I_d) ⊆ I_d already forces equality;
    // the generators sit in degrees m and m+1.
    let mut preserves_relations = true;
    for r in spec.presentation.relations() {
        if !ws.d.contains(&nu.apply(r)?)? {
            preserves_relations = false;
            witness.get_or_insert_with(|| format!("ν({r}) is not in the ideal"));
        }
    }

    let omega_eigenvalue = match nu.eigen_scale(&spec.omega) {
        Ok(c) => Some(c),
        Err(Error::NotEigenvector(a, b)) => {
            witness.get_or_insert_with(|| format!("ν scales {a} and {b} in Ω differently"));
            None
        }
        Err(e) => return Err(e),
    };

    // Ω x_i ≡ p_i^{-1} x_i Ω, i.e. x_i Ω − p_i Ω x_i ∈ I
    let mut tau_check = true;
    for i in 0..spec.n() {
        let r = twisted_commutator(i, &spec.omega, &tau.s[i].inv()?)?;
        if !ws.d.contains(&r)? {
            tau_check = false;
            witness.get_or_insert_with(|| format!("Ω {} ≢ τ({}) Ω", ctx.gens()[i], ctx.gens()[i]));
        }
    }

    let nu_a = invert_all(&spec.sp.q)?;
    let composed = tau.inverse()?.compose(&nu)?;
    Ok(NakayamaReport {
        nu_a_matches: composed.s == nu_a,
        nu,
        tau,
        preserves_relations,
        omega_eigenvalue,
        tau_check,
        witness,
    })
}

#[derive(Debug, Clone)]
pub struct HdetReport {
    /// Eigenvalue of ν_A on Ω.
    pub lambda: Scalar,
    /// hdet(τ|_A), the eigenvalue of τ on w.
    pub tau: Scalar,
    /// hdet(ν_A), the eigenvalue of ν_A on w.
    pub nu_a: Scalar,
    pub product: Scalar,
    /// The factors are (q_k, q_k^{-1}, 1).
    pub factors_as_expected: bool,
}

/// Fails with `NotEigenvector` when a diagonal map does not scale its target.
pub fn hdet_certificate(spec: &ExtensionSpec) -> Result<HdetReport> {
    let sp = &spec.sp;
    let nu_a = DiagonalMap::new(invert_all(&sp.q)?);
    let tau = DiagonalMap::new(invert_all(&spec.p)?);
    let lambda = nu_a.eigen_scale(&spec.omega)?;
    let h_tau = tau.eigen_scale(&sp.w)?;
    let h_nu = nu_a.eigen_scale(&sp.w)?;
    let product = lambda.checked_mul(&h_tau)?.checked_mul(&h_nu)?;
    let qk = &sp.q[spec.k];
    let factors_as_expected = lambda == *qk && h_tau == qk.inv()? && h_nu.is_one();
    Ok(HdetReport { lambda, tau: h_tau, nu_a: h_nu, product, factors_as_expected })
}
