use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context as _, Result};
use normext::freealg::{parse_file, parse_scalar, parse_tuple, AlgebraFile, Coeff, Context, FreeElement};
use normext::scalars::{unit_of, Scalar, UnitScalar};
use normext::superpotential::{superpotential_from_relations, Superpotential};

/// An algebra file with `--assign` applied and its field-valued w.
pub struct Loaded {
    pub file: AlgebraFile,
    pub ctx: Arc<Context>,
    pub w: FreeElement<Scalar>,
    /// Set when w was recovered from `rels`; for files with both, the two
    /// agree up to a scalar.
    pub from_relations: bool,
}

pub fn read_file(path: &Path) -> Result<AlgebraFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_file(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Applies "a:=4,b:=-1/2"; later values may refer to earlier ones.
pub fn apply_assign(ctx: &Arc<Context>, spec: Option<&str>) -> Result<Arc<Context>> {
    let Some(spec) = spec else { return Ok(ctx.clone()) };
    let mut ctx = ctx.clone();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = item.split_once(":=").ok_or_else(|| anyhow!("`{item}` is not of the form name:=value"))?;
        let v: Scalar = parse_scalar(value, &ctx).with_context(|| format!("value of `{}`", name.trim()))?;
        ctx = ctx.assign(name.trim(), v)?;
    }
    Ok(ctx)
}

/// True when g = c·f for a nonzero scalar c.
pub fn proportional<C: Coeff>(f: &FreeElement<C>, g: &FreeElement<C>) -> bool {
    let (Some((wf, cf)), Some((wg, cg))) = (f.leading(), g.leading()) else {
        return f.is_zero() && g.is_zero();
    };
    if wf != wg || f.len() != g.len() {
        return false;
    }
    match cf.inv().and_then(|i| cg.mul(&i)) {
        Ok(c) => f.scale(&c).is_ok_and(|h| h == *g),
        Err(_) => false,
    }
}

pub fn load(path: &Path, assign: Option<&str>) -> Result<Loaded> {
    let file = read_file(path)?;
    let ctx = apply_assign(&file.ctx, assign)?;
    let declared: Option<FreeElement<Scalar>> = file.w(&ctx)?;
    let recovered = if file.has_rels() {
        let rels: Vec<FreeElement<Scalar>> = file.rels(&ctx)?;
        Some(superpotential_from_relations(&rels).context("recovering w from the relations")?)
    } else {
        None
    };
    let (w, from_relations) = match (declared, recovered) {
        (Some(w), Some(r)) => {
            if !proportional(&w, &r) {
                bail!("declared w is not proportional to the superpotential of the declared relations");
            }
            (w, false)
        }
        (Some(w), None) => (w, false),
        (None, Some(r)) => (r, true),
        (None, None) => bail!("file declares neither w nor relations"),
    };
    Ok(Loaded { file, ctx, w, from_relations })
}

impl Loaded {
    pub fn superpotential(&self) -> Result<Superpotential<Scalar>> {
        Ok(Superpotential::new(self.w.clone())?)
    }

    /// w with symbolic unit coefficients in `ctx` (the file context, possibly
    /// with extra parameters). Relations-only files fall back to the
    /// constants of the recovered field-valued w.
    pub fn unit_w(&self, ctx: &Arc<Context>) -> Result<FreeElement<UnitScalar>> {
        if self.file.has_w() {
            return self.file.w(ctx)?.ok_or_else(|| anyhow!("no w"));
        }
        Ok(self.w.map_coeffs(ctx, unit_of)?)
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }
}

/// p from `--p`, or p_k = q_k and 1 elsewhere.
pub fn tuple_or_default(sp: &Superpotential<Scalar>, k: usize, p: Option<&str>) -> Result<Vec<Scalar>> {
    match p {
        Some(text) => {
            let p: Vec<Scalar> = parse_tuple(text, sp.ctx())?;
            if p.len() != sp.n() {
                bail!("--p has {} entries for {} generators", p.len(), sp.n());
            }
            Ok(p)
        }
        None => Ok((0..sp.n()).map(|i| if i == k { sp.q[k].clone() } else { Scalar::one() }).collect()),
    }
}
