//! Co-relations for exact Mal'tsev backends.
//!
//! In an exact Mal'tsev category, relations between `x` and `y` correspond
//! to cospans `x ->> u <<- y` via pullback, with pushout as the inverse.
//! For the opset backend a cospan is a gluing: subsets of the two carriers
//! plus a bijection between them, and the bi-surjective relations are
//! exactly the partitions whose blocks meet each carrier at most once.  The
//! module is gated at runtime on the `is_exact_maltsev` capability; the
//! finset backend fails fast.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::backend::{self, image, pair, BackendKind, DegreeFn, Mor, Obj, Sub};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::poly::Poly;
use crate::projector::omega;
use crate::rel::Rel;
use crate::star::{Flavor, StarMor};

fn require_maltsev(kind: BackendKind) -> Result<()> {
    if !kind.is_exact_maltsev() {
        return Err(Error::Capability(format!(
            "backend `{}` is not exact Mal'tsev",
            kind.name()
        )));
    }
    Ok(())
}

/// A canonical cospan `x ->> u <<- y`: for opset, a gluing given by matched
/// carrier points, stored as pairs sorted by the `x` component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoRel {
    pub x: Obj,
    pub y: Obj,
    pairs: Vec<(usize, usize)>,
}

impl CoRel {
    pub fn new(x: Obj, y: Obj, mut pairs: Vec<(usize, usize)>) -> Result<CoRel> {
        require_maltsev(x.kind)?;
        if x.kind != y.kind {
            return Err(Error::EndpointMismatch("mixed backends".into()));
        }
        pairs.sort_unstable();
        let mut seen_x = std::collections::HashSet::new();
        let mut seen_y = std::collections::HashSet::new();
        for &(a, b) in &pairs {
            if a >= x.size || b >= y.size {
                return Err(Error::Invalid("gluing pair out of range".into()));
            }
            if !seen_x.insert(a) || !seen_y.insert(b) {
                return Err(Error::Invalid("gluing is not a partial bijection".into()));
            }
        }
        Ok(CoRel { x, y, pairs })
    }

    pub fn empty(x: Obj, y: Obj) -> Result<CoRel> {
        CoRel::new(x, y, Vec::new())
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// The glued object with its two surjections from `x` and `y`.
    pub fn cospan(&self) -> Result<(Obj, Mor, Mor)> {
        let apex = Obj {
            kind: self.x.kind,
            size: self.pairs.len(),
        };
        let a = Mor::new(self.x, apex, self.pairs.iter().map(|&(i, _)| i).collect())?;
        let b = Mor::new(self.y, apex, self.pairs.iter().map(|&(_, j)| j).collect())?;
        Ok((apex, a, b))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "x0": self.pairs.iter().map(|&(i, _)| i).collect::<Vec<_>>(),
            "y0": self.pairs.iter().map(|&(_, j)| j).collect::<Vec<_>>(),
            "bij": self.pairs.iter().map(|&(i, j)| serde_json::json!([i, j])).collect::<Vec<_>>(),
        })
    }

    /// Parse the text form `{x0:[..],y0:[..],bij:[[..],..]}` (bare keys
    /// allowed).
    pub fn parse(x: Obj, y: Obj, s: &str) -> Result<CoRel> {
        let v: serde_json::Value = serde_json::from_str(s).or_else(|_| {
            // quote bare keys and retry
            let mut quoted = String::with_capacity(s.len() + 8);
            let mut chars = s.chars().peekable();
            while let Some(c) = chars.next() {
                if c.is_ascii_alphabetic() {
                    let mut word = String::new();
                    word.push(c);
                    while chars.peek().is_some_and(|d| d.is_ascii_alphanumeric()) {
                        word.push(chars.next().expect("peeked"));
                    }
                    quoted.push('"');
                    quoted.push_str(&word);
                    quoted.push('"');
                } else {
                    quoted.push(c);
                }
            }
            serde_json::from_str(&quoted)
                .map_err(|e| Error::Invalid(format!("bad gluing `{s}`: {e}")))
        })?;
        let bij = v
            .get("bij")
            .and_then(|b| b.as_array())
            .ok_or_else(|| Error::Invalid("gluing needs a `bij` list".into()))?;
        let mut pairs = Vec::new();
        for entry in bij {
            let pb = entry.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                Error::Invalid("gluing pairs must be two-element lists".into())
            })?;
            let geti = |v: &serde_json::Value| {
                v.as_u64()
                    .map(|n| n as usize)
                    .ok_or_else(|| Error::Invalid("gluing pair entries must be integers".into()))
            };
            pairs.push((geti(&pb[0])?, geti(&pb[1])?));
        }
        let c = CoRel::new(x, y, pairs)?;
        // x0/y0, when present, must agree with the bijection
        for (key, side) in [("x0", 0usize), ("y0", 1usize)] {
            if let Some(arr) = v.get(key).and_then(|a| a.as_array()) {
                let mut listed: Vec<usize> = arr
                    .iter()
                    .map(|e| {
                        e.as_u64()
                            .map(|n| n as usize)
                            .ok_or_else(|| Error::Invalid("bad index list".into()))
                    })
                    .collect::<Result<_>>()?;
                listed.sort_unstable();
                let mut from_bij: Vec<usize> = c
                    .pairs
                    .iter()
                    .map(|&(i, j)| if side == 0 { i } else { j })
                    .collect();
                from_bij.sort_unstable();
                if listed != from_bij {
                    return Err(Error::Invalid(format!(
                        "gluing `{key}` does not match its bijection"
                    )));
                }
            }
        }
        Ok(c)
    }
}

/// All gluings between two objects, in canonical order.
pub fn corel_set(x: Obj, y: Obj) -> Result<Vec<CoRel>> {
    require_maltsev(x.kind)?;
    let mut out = vec![CoRel::empty(x, y)?];
    // grow partial bijections pair by pair, keeping pairs sorted by the
    // x-component so every gluing is produced exactly once
    let mut stack: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    while let Some(current) = stack.pop() {
        let next_x_min = current.last().map_or(0, |&(i, _)| i + 1);
        for i in next_x_min..x.size {
            for j in 0..y.size {
                if current.iter().any(|&(_, b)| b == j) {
                    continue;
                }
                let mut grown = current.clone();
                grown.push((i, j));
                out.push(CoRel {
                    x,
                    y,
                    pairs: grown.clone(),
                });
                stack.push(grown);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// From a cospan to the relation it pulls back to.
pub fn push_pull(u: &CoRel) -> Result<Rel> {
    require_maltsev(u.x.kind)?;
    let blocks: Vec<Vec<usize>> = {
        let mut glued: Vec<Vec<usize>> = u
            .pairs
            .iter()
            .map(|&(i, j)| vec![i, u.x.size + j])
            .collect();
        let in_pair_x: std::collections::HashSet<usize> =
            u.pairs.iter().map(|&(i, _)| i).collect();
        let in_pair_y: std::collections::HashSet<usize> =
            u.pairs.iter().map(|&(_, j)| j).collect();
        for i in 0..u.x.size {
            if !in_pair_x.contains(&i) {
                glued.push(vec![i]);
            }
        }
        for j in 0..u.y.size {
            if !in_pair_y.contains(&j) {
                glued.push(vec![u.x.size + j]);
            }
        }
        glued
    };
    Rel::new(u.x, u.y, Sub::partition(blocks)?)
}

/// From a bi-surjective relation to the cospan it pushes out to.
pub fn pull_push(r: &Rel) -> Result<CoRel> {
    require_maltsev(r.x.kind)?;
    if !r.is_biepi()? {
        return Err(Error::Invalid("relation is not surjective onto both endpoints".into()));
    }
    let Sub::Partition(blocks) = &r.sub else {
        return Err(Error::Invalid("opset relations are partitions".into()));
    };
    let mut pairs = Vec::new();
    for block in blocks {
        let xs: Vec<usize> = block.iter().copied().filter(|&e| e < r.x.size).collect();
        let ys: Vec<usize> = block
            .iter()
            .copied()
            .filter(|&e| e >= r.x.size)
            .map(|e| e - r.x.size)
            .collect();
        match (xs.len(), ys.len()) {
            (1, 1) => pairs.push((xs[0], ys[0])),
            (0, 1) | (1, 0) => {}
            _ => {
                return Err(Error::Internal(
                    "bi-surjective block meets a carrier twice".into(),
                ))
            }
        }
    }
    CoRel::new(r.x, r.y, pairs)
}

/// Cospan order: `u <= v` when the cospan `v` factors through `u`; for
/// gluings this means the pairs of `v` are among the pairs of `u`.  The
/// empty gluing is the top element.
pub fn corel_leq(u: &CoRel, v: &CoRel) -> bool {
    v.pairs.iter().all(|p| u.pairs.contains(p))
}

type QuotCache = Mutex<HashMap<(Obj, Obj), Arc<Lattice<CoRel>>>>;

static QUOT_LATTICES: OnceLock<QuotCache> = OnceLock::new();

/// The poset of cospans between two objects, with its own Möbius data.
pub fn quot_lattice(x: Obj, y: Obj) -> Result<Arc<Lattice<CoRel>>> {
    require_maltsev(x.kind)?;
    let cache = QUOT_LATTICES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(l) = cache.lock().expect("quot cache poisoned").get(&(x, y)) {
        return Ok(Arc::clone(l));
    }
    let lattice = Arc::new(Lattice::new(corel_set(x, y)?, corel_leq)?);
    cache
        .lock()
        .expect("quot cache poisoned")
        .insert((x, y), Arc::clone(&lattice));
    Ok(lattice)
}

/// The curly-basis morphism attached to a cospan: the pullback relation's
/// basis element.
pub fn curly_prime(u: &CoRel) -> Result<StarMor> {
    let rel = push_pull(u)?;
    StarMor::basis(u.x, u.y, rel.sub, Flavor::Curly)
}

/// The same morphism computed from the defining generator word, for
/// cross-checking: conjugate `[b]~ [a]` by the top projectors and project.
pub fn curly_prime_via_word(d: DegreeFn, u: &CoRel) -> Result<StarMor> {
    let (_, a, b) = u.cospan()?;
    let word = crate::rel::cograph(&b).compose(d, &crate::rel::graph(&a))?;
    crate::star::project(d, &word, u.x, u.y)
}

/// Multiplication of two cospans as a curly-basis morphism: glue along the
/// middle object, weight by the omega of the middle collapse, and sum the
/// Möbius-weighted cospans below the glued one.
pub fn malcev_compose(d: DegreeFn, v: &CoRel, u: &CoRel) -> Result<StarMor> {
    require_maltsev(u.x.kind)?;
    if u.y != v.x {
        return Err(Error::EndpointMismatch("middle object mismatch".into()));
    }
    let (x, z) = (u.x, v.y);
    let (u_obj, a_u, b_u) = u.cospan()?;
    let (v_obj, c_v, d_v) = v.cospan()?;
    // collapse of the middle object onto its image in the glued pair
    let (f, _) = image(&pair(&b_u, &c_v)?);
    let weight = omega(d, &f)?;
    // push-out of the two cospans over the middle: pairs of glued points
    // hitting the same middle element
    let mut w_pairs = Vec::new();
    for alpha in 0..u_obj.size {
        for beta in 0..v_obj.size {
            if b_u.raw_table()[alpha] == c_v.raw_table()[beta] {
                w_pairs.push((alpha, beta));
            }
        }
    }
    let w = CoRel::new(u_obj, v_obj, w_pairs)?;
    let lattice = quot_lattice(u_obj, v_obj)?;
    let wi = lattice.index_of(&w)?;
    let mut out = StarMor::zero(x, z, Flavor::Curly);
    for (ti, t) in lattice.elems().iter().enumerate() {
        if !lattice.leq_idx(ti, wi) {
            continue;
        }
        let mu = lattice.mobius_idx(ti, wi)?;
        // transport the cospan between the glued objects back to (x, z)
        let outer: Vec<(usize, usize)> = t
            .pairs
            .iter()
            .map(|&(alpha, beta)| (a_u.raw_table()[alpha], d_v.raw_table()[beta]))
            .collect();
        let t_outer = CoRel::new(x, z, outer)?;
        let term = curly_prime(&t_outer)?;
        out = out.add(&term.scale_poly(&(&Poly::from_bigint(mu) * &weight)))?;
    }
    Ok(out)
}

/// Mal'tsev witness: every relation on `x` containing the diagonal is an
/// equivalence relation (symmetric and idempotent under composition).
pub fn maltsev_witness(d: DegreeFn, x: Obj) -> Result<()> {
    require_maltsev(x.kind)?;
    let diag = Rel::diagonal(x);
    let xx = backend::product(x, x)?;
    for sub in backend::enumerate_subs(&xx, 8)? {
        let r = Rel::new(x, x, sub)?;
        if !backend::sub_leq(&diag.sub, &r.sub) {
            continue;
        }
        if r.adjoint() != r {
            return Err(Error::Internal(format!("reflexive {r:?} is not symmetric")));
        }
        let Some((rr, _)) = crate::rel::rel_compose(d, &r, &r)? else {
            return Err(Error::Internal("reflexive composite missing".into()));
        };
        if rr != r {
            return Err(Error::Internal(format!(
                "reflexive {r:?} is not transitive"
            )));
        }
    }
    Ok(())
}

/// Exactness witness: every equivalence relation on `x` is the kernel pair
/// of some surjection out of `x`.
pub fn exactness_witness(d: DegreeFn, x: Obj) -> Result<()> {
    require_maltsev(x.kind)?;
    let diag = Rel::diagonal(x);
    let xx = backend::product(x, x)?;
    'outer: for sub in backend::enumerate_subs(&xx, 8)? {
        let r = Rel::new(x, x, sub)?;
        if !backend::sub_leq(&diag.sub, &r.sub) || r.adjoint() != r {
            continue;
        }
        let Some((rr, _)) = crate::rel::rel_compose(d, &r, &r)? else {
            continue;
        };
        if rr != r {
            continue;
        }
        // search the quotients of x for a kernel pair equal to r
        for y_size in 0..=x.size {
            let y = Obj {
                kind: x.kind,
                size: y_size,
            };
            for e in backend::enumerate_mors(x, y)? {
                if !backend::is_surjective(&e) {
                    continue;
                }
                let Some(span) = backend::pullback(&e, &e)? else {
                    continue;
                };
                let (kernel, _) = Rel::from_span(x, x, &span.left, &span.right)?;
                if kernel == r {
                    continue 'outer;
                }
            }
        }
        return Err(Error::Internal(format!(
            "equivalence relation {r:?} is not a kernel pair"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests;
