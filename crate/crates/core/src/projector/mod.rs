//! Subobject idempotents and their Möbius-inverted companions.
//!
//! Every subobject `u` of `x` gives the idempotent `p_u = [i][i]~` on `[x]`.
//! These commute (`p_u p_v = p_{u ∧ v}`, zero when the meet is missing), so
//! Möbius inversion over the subobject poset produces pairwise orthogonal
//! idempotents `p_u*` summing to the identity.  The weight `omega` of a
//! surjection is the Möbius-weighted degree sum that measures how the top
//! idempotent transforms under it; in the opset backend with the `t^`
//! degree it evaluates to the familiar falling-factorial-like polynomials.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::backend::{
    self, compose, is_surjective, sub_mono, subobject_lattice, DegreeFn, Mor, Obj, Sub,
    SubLattice,
};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rel::{Rel, TMor};

/// All `p_u` and `p_u*` of one object, indexed by its subobject poset.
pub struct ProjectorFamily {
    pub x: Obj,
    pub lattice: Arc<SubLattice>,
    p: Vec<TMor>,
    p_star: Vec<TMor>,
}

static FAMILIES: OnceLock<Mutex<HashMap<Obj, Arc<ProjectorFamily>>>> = OnceLock::new();

/// Cached projector family of an object.
pub fn projector_family(x: &Obj) -> Result<Arc<ProjectorFamily>> {
    let cache = FAMILIES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().expect("projector cache poisoned").get(x) {
        return Ok(Arc::clone(f));
    }
    let family = Arc::new(ProjectorFamily::build(x)?);
    cache
        .lock()
        .expect("projector cache poisoned")
        .insert(*x, Arc::clone(&family));
    Ok(family)
}

impl ProjectorFamily {
    fn build(x: &Obj) -> Result<ProjectorFamily> {
        let lattice = subobject_lattice(x)?;
        let mut p = Vec::with_capacity(lattice.len());
        for u in lattice.elems() {
            p.push(p_sub_raw(x, u)?);
        }
        let mut p_star = Vec::with_capacity(lattice.len());
        for (ui, _) in lattice.elems().iter().enumerate() {
            let mut acc = TMor::zero(*x, *x);
            for (vi, pv) in p.iter().enumerate() {
                if lattice.leq_idx(vi, ui) {
                    let mu = lattice.mobius_idx(vi, ui)?;
                    acc = acc.add(&pv.scale_poly(&Poly::from_bigint(mu)))?;
                }
            }
            p_star.push(acc);
        }
        let family = ProjectorFamily {
            x: *x,
            lattice,
            p,
            p_star,
        };
        family.check_resolution()?;
        Ok(family)
    }

    /// The inverted family must sum to the identity; scalar-level check run
    /// at construction time.
    fn check_resolution(&self) -> Result<()> {
        let mut total = TMor::zero(self.x, self.x);
        for q in &self.p_star {
            total = total.add(q)?;
        }
        if total != TMor::identity(self.x) {
            return Err(Error::Internal(format!(
                "projector resolution of {:?} does not sum to the identity",
                self.x
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn p_idx(&self, i: usize) -> &TMor {
        &self.p[i]
    }

    pub fn p_star_idx(&self, i: usize) -> &TMor {
        &self.p_star[i]
    }

    pub fn p(&self, u: &Sub) -> Result<&TMor> {
        Ok(&self.p[self.lattice.index_of(u)?])
    }

    pub fn p_star(&self, u: &Sub) -> Result<&TMor> {
        Ok(&self.p_star[self.lattice.index_of(u)?])
    }

    /// The idempotent cutting out the top summand of `[x]`.
    pub fn p_star_top(&self) -> &TMor {
        &self.p_star[self.lattice.top_idx()]
    }

    /// Full orthogonality audit: `p_u* p_v* = [u = v] p_u*` and
    /// `p_u* p_v = p_u*` iff `u <= v`, else zero.
    pub fn verify(&self, d: DegreeFn) -> Result<()> {
        for (ui, pu_star) in self.p_star.iter().enumerate() {
            for (vi, pv_star) in self.p_star.iter().enumerate() {
                let prod = pu_star.compose(d, pv_star)?;
                let expect = if ui == vi {
                    pu_star.clone()
                } else {
                    TMor::zero(self.x, self.x)
                };
                if prod != expect {
                    return Err(Error::Internal(format!(
                        "p*({ui}) p*({vi}) not orthogonal on {:?}",
                        self.x
                    )));
                }
                let mixed = pu_star.compose(d, &self.p[vi])?;
                let expect = if self.lattice.leq_idx(ui, vi) {
                    pu_star.clone()
                } else {
                    TMor::zero(self.x, self.x)
                };
                if mixed != expect {
                    return Err(Error::Internal(format!(
                        "p*({ui}) p({vi}) transport failed on {:?}",
                        self.x
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "object": { "backend": self.x.kind.name(), "size": self.x.size },
            "summands": self
                .lattice
                .elems()
                .iter()
                .zip(&self.p_star)
                .map(|(u, q)| serde_json::json!({
                    "sub": u.to_json(),
                    "projector": q.to_json(),
                }))
                .collect::<Vec<_>>(),
        })
    }
}

fn p_sub_raw(x: &Obj, u: &Sub) -> Result<TMor> {
    let m = sub_mono(x, u)?;
    let (rel, e) = Rel::from_span(*x, *x, &m, &m)?;
    debug_assert!(backend::is_iso(&e));
    Ok(TMor::from_rel(&rel, Poly::one()))
}

/// The idempotent `p_u` on `[x]`: the doubled inclusion of `u`.
pub fn p_sub(x: &Obj, u: &Sub) -> Result<TMor> {
    Ok(projector_family(x)?.p(u)?.clone())
}

/// The orthogonal idempotent `p_u*`, by Möbius inversion over the poset.
pub fn p_star(x: &Obj, u: &Sub) -> Result<TMor> {
    Ok(projector_family(x)?.p_star(u)?.clone())
}

/// Identity summand projector of `[x]`.
pub fn p_star_top(x: &Obj) -> Result<TMor> {
    Ok(projector_family(x)?.p_star_top().clone())
}

/// The scalar weight of a surjection `e : x ->> y`: the Möbius-weighted sum
/// of degrees over the subobjects of `x` that still cover `y`.
pub fn omega(d: DegreeFn, e: &Mor) -> Result<Poly> {
    if !is_surjective(e) {
        return Err(Error::NotSurjective("omega is defined on surjections".into()));
    }
    let lattice = subobject_lattice(&e.dom)?;
    let top = lattice.top_idx();
    let mut acc = Poly::zero();
    for (ui, u) in lattice.elems().iter().enumerate() {
        let m = sub_mono(&e.dom, u)?;
        let through = compose(e, &m)?;
        if !is_surjective(&through) {
            continue;
        }
        let mu = lattice.mobius_idx(ui, top)?;
        acc += &(&Poly::from_bigint(mu) * &backend::delta(d, &through)?);
    }
    Ok(acc)
}

/// The complete decomposition of `[x]` into the summands cut out by `p_u*`.
pub fn subobject_decomposition(x: &Obj) -> Result<Arc<ProjectorFamily>> {
    projector_family(x)
}

/// The inclusion `[u-as-object]* -> [x]` realizing the summand of `p_u*`:
/// the graph of the subobject inclusion restricted along the top projector
/// of the subobject object.  Its adjoint is the matching retraction.
pub fn summand_inclusion(d: DegreeFn, x: &Obj, u: &Sub) -> Result<TMor> {
    let m = sub_mono(x, u)?;
    let inner = p_star_top(&m.dom)?;
    crate::rel::graph(&m).compose(d, &inner)
}

#[cfg(test)]
mod tests;
