//! The summand calculus: bases of the hom spaces between the top summands,
//! their two composition rules, and the block decomposition of tensor
//! products.
//!
//! `R(x, y)` is the set of relations whose two projections are both
//! surjective; it indexes two bases of the morphisms between the top
//! summands of `[x]` and `[y]`.  The round basis conjugates by the middle
//! projector, the curly basis conjugates the bare relation; the two are
//! related by Möbius inversion over the subobject poset of `x * y`.  Every
//! closed-form product implemented here has a brute-force counterpart
//! (`compose_oracle`, `tensor_oracle`) that expands through the relation
//! basis and projects back; the closed forms are required to agree with it
//! exactly.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::backend::{
    self, compose, identity, image, is_iso, is_surjective, mor_product, product, proj1,
    proj2, pullback, sub_mono, sub_object, subobject_lattice, swap_table, transport_sub,
    BackendKind, DegreeFn, Mor, Obj, Sub,
};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::projector::{omega, p_star_top, summand_inclusion};
use crate::rel::{cograph, graph, Rel, TMor};

/// Relation enumeration bounds on the product carrier, per backend.  The
/// finset bound is wider than the lattice bound because relation sets are
/// enumerated directly, without materializing a poset.
const R_ENUM_FINSET: usize = 16;
const R_ENUM_OPSET: usize = 8;

fn sub_enum_bound(kind: BackendKind) -> usize {
    match kind {
        BackendKind::FinSet => R_ENUM_FINSET,
        BackendKind::OpSet => R_ENUM_OPSET,
    }
}

type RelSetCache = Mutex<HashMap<(Obj, Obj), Arc<Vec<Rel>>>>;

static RSETS: OnceLock<RelSetCache> = OnceLock::new();

/// All relations between `x` and `y` with both projections surjective, in
/// canonical (lexicographic label) order.  Cached per endpoint pair.
pub fn r_set(x: Obj, y: Obj) -> Result<Arc<Vec<Rel>>> {
    if x.kind != y.kind {
        return Err(Error::EndpointMismatch("mixed backends".into()));
    }
    let cache = RSETS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("r_set cache poisoned").get(&(x, y)) {
        return Ok(Arc::clone(v));
    }
    let p = product(x, y)?;
    let mut out = Vec::new();
    for sub in backend::enumerate_subs(&p, sub_enum_bound(x.kind))? {
        let rel = Rel { x, y, sub };
        if rel.is_biepi()? {
            out.push(rel);
        }
    }
    let out = Arc::new(out);
    cache
        .lock()
        .expect("r_set cache poisoned")
        .insert((x, y), Arc::clone(&out));
    Ok(out)
}

/// Dimension of the hom space between the top summands.
pub fn star_hom_dim(x: Obj, y: Obj) -> Result<usize> {
    Ok(r_set(x, y)?.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Round,
    Curly,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Round => "round",
            Flavor::Curly => "curly",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "round" => Ok(Flavor::Round),
            "curly" => Ok(Flavor::Curly),
            other => Err(Error::Invalid(format!("unknown basis flavor `{other}`"))),
        }
    }
}

/// A morphism between top summands, expressed in one of the two bases over
/// the bi-surjective relation labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarMor {
    pub x: Obj,
    pub y: Obj,
    pub flavor: Flavor,
    terms: BTreeMap<Sub, Poly>,
}

impl StarMor {
    pub fn zero(x: Obj, y: Obj, flavor: Flavor) -> StarMor {
        StarMor {
            x,
            y,
            flavor,
            terms: BTreeMap::new(),
        }
    }

    /// A single basis element; the label must be bi-surjective.
    pub fn basis(x: Obj, y: Obj, sub: Sub, flavor: Flavor) -> Result<StarMor> {
        let rel = Rel::new(x, y, sub)?;
        if !rel.is_biepi()? {
            return Err(Error::Invalid(
                "label is not surjective onto both endpoints".into(),
            ));
        }
        let mut m = StarMor::zero(x, y, flavor);
        m.add_term(&rel.sub, Poly::one());
        Ok(m)
    }

    /// The diagonal is the identity in both flavors.
    pub fn identity(x: Obj, flavor: Flavor) -> StarMor {
        let mut m = StarMor::zero(x, x, flavor);
        m.add_term(&Rel::diagonal(x).sub, Poly::one());
        m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Sub, &Poly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, sub: &Sub) -> Poly {
        self.terms.get(sub).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn add_term(&mut self, sub: &Sub, coeff: Poly) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(sub.clone()).or_insert_with(Poly::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            self.terms.remove(sub);
        }
    }

    pub fn add(&self, other: &StarMor) -> Result<StarMor> {
        if (self.x, self.y, self.flavor) != (other.x, other.y, other.flavor) {
            return Err(Error::EndpointMismatch("sum of mismatched star morphisms".into()));
        }
        let mut out = self.clone();
        for (s, c) in other.terms() {
            out.add_term(s, c.clone());
        }
        Ok(out)
    }

    pub fn scale_poly(&self, c: &Poly) -> StarMor {
        let mut out = StarMor::zero(self.x, self.y, self.flavor);
        for (s, k) in self.terms() {
            out.add_term(s, k * c);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "x": { "backend": self.x.kind.name(), "size": self.x.size },
            "y": { "backend": self.y.kind.name(), "size": self.y.size },
            "flavor": self.flavor.name(),
            "terms": self
                .terms()
                .map(|(s, c)| serde_json::json!({ "rel": s.to_json(), "poly": c.to_json() }))
                .collect::<Vec<_>>(),
        })
    }
}

fn expect_flavor(m: &StarMor, f: Flavor) -> Result<()> {
    if m.flavor != f {
        return Err(Error::FlavorMismatch {
            expected: f.name().into(),
            got: m.flavor.name().into(),
        });
    }
    Ok(())
}

/// Change of basis by Möbius inversion over the subobject poset of `x * y`.
pub fn basis_convert(phi: &StarMor, target: Flavor) -> Result<StarMor> {
    if phi.flavor == target {
        return Ok(phi.clone());
    }
    let lattice = subobject_lattice_for_hom(phi.x, phi.y)?;
    let rels = r_set(phi.x, phi.y)?;
    let mut out = StarMor::zero(phi.x, phi.y, target);
    for (r_sub, c) in phi.terms() {
        let ri = lattice.index_of(r_sub)?;
        for s in rels.iter() {
            let si = lattice.index_of(&s.sub)?;
            if !lattice.leq_idx(si, ri) {
                continue;
            }
            let coeff = match target {
                // curly expressed in round: plain lower sum
                Flavor::Round => c.clone(),
                // round expressed in curly: Möbius-weighted lower sum
                Flavor::Curly => &Poly::from_bigint(lattice.mobius_idx(si, ri)?) * c,
            };
            out.add_term(&s.sub, coeff);
        }
    }
    Ok(out)
}

fn subobject_lattice_for_hom(x: Obj, y: Obj) -> Result<Arc<crate::backend::SubLattice>> {
    let p = product(x, y)?;
    backend::subobject_lattice_bounded(&p, sub_enum_bound(x.kind))
}

/// Conjugate a plain morphism by the top projectors on both sides.
pub fn conjugate(d: DegreeFn, psi: &TMor) -> Result<TMor> {
    p_star_top(&psi.cod)?
        .compose(d, psi)?
        .compose(d, &p_star_top(&psi.dom)?)
}

/// Expand a summand-basis morphism into the relation basis.  This is the
/// reference route every closed formula is checked against.
pub fn embed(d: DegreeFn, phi: &StarMor) -> Result<TMor> {
    let mut out = TMor::zero(phi.x, phi.y);
    match phi.flavor {
        Flavor::Curly => {
            for (sub, c) in phi.terms() {
                let raw = TMor::from_rel(
                    &Rel {
                        x: phi.x,
                        y: phi.y,
                        sub: sub.clone(),
                    },
                    Poly::one(),
                );
                out = out.add(&conjugate(d, &raw)?.scale_poly(c))?;
            }
        }
        Flavor::Round => {
            for (sub, c) in phi.terms() {
                let rel = Rel {
                    x: phi.x,
                    y: phi.y,
                    sub: sub.clone(),
                };
                let (apex, a, b) = rel.span()?;
                let t = graph(&b)
                    .compose(d, &p_star_top(&apex)?)?
                    .compose(d, &cograph(&a))?;
                out = out.add(&t.scale_poly(c))?;
            }
        }
    }
    Ok(out)
}

/// Read a conjugation-invariant morphism off in the curly basis: conjugate,
/// collect the coefficients at bi-surjective labels, and verify that the
/// collected expansion reproduces the conjugated morphism exactly.
pub fn project(d: DegreeFn, psi: &TMor, x: Obj, y: Obj) -> Result<StarMor> {
    if psi.dom != x || psi.cod != y {
        return Err(Error::EndpointMismatch("projection endpoints do not match".into()));
    }
    let conj = conjugate(d, psi)?;
    let rels = r_set(x, y)?;
    let labels: std::collections::BTreeSet<&Sub> = rels.iter().map(|r| &r.sub).collect();
    let mut out = StarMor::zero(x, y, Flavor::Curly);
    for (sub, c) in conj.terms() {
        if labels.contains(sub) {
            out.add_term(sub, c.clone());
        }
    }
    if embed(d, &out)? != conj {
        return Err(Error::Internal(
            "projected morphism does not reproduce its conjugation".into(),
        ));
    }
    Ok(out)
}

/// Brute-force composition: expand both factors, compose in the relation
/// basis, project back.
pub fn compose_oracle(d: DegreeFn, sigma: &StarMor, rho: &StarMor) -> Result<StarMor> {
    if rho.y != sigma.x {
        return Err(Error::EndpointMismatch("middle object mismatch".into()));
    }
    let big = embed(d, sigma)?.compose(d, &embed(d, rho)?)?;
    project(d, &big, rho.x, sigma.y)
}

/// Closed-form composition in the round basis: enumerate the bi-surjective
/// subobjects of the middle pullback and weight each image by the `omega`
/// of the collapse onto it.
pub fn compose_round(d: DegreeFn, sigma: &StarMor, rho: &StarMor) -> Result<StarMor> {
    expect_flavor(rho, Flavor::Round)?;
    expect_flavor(sigma, Flavor::Round)?;
    if rho.y != sigma.x {
        return Err(Error::EndpointMismatch("middle object mismatch".into()));
    }
    let (x, z) = (rho.x, sigma.y);
    let mut out = StarMor::zero(x, z, Flavor::Round);
    for (r_sub, c_r) in rho.terms() {
        let r = Rel {
            x: rho.x,
            y: rho.y,
            sub: r_sub.clone(),
        };
        let (_, a_r, b_r) = r.span()?;
        for (s_sub, c_s) in sigma.terms() {
            let s = Rel {
                x: sigma.x,
                y: sigma.y,
                sub: s_sub.clone(),
            };
            let (_, a_s, b_s) = s.span()?;
            let Some(t) = pullback(&b_r, &a_s)? else {
                continue;
            };
            let coeff = c_r * c_s;
            for u_sub in backend::enumerate_subs(&t.apex, sub_enum_bound(x.kind))? {
                let m_u = sub_mono(&t.apex, &u_sub)?;
                let to_r = compose(&t.left, &m_u)?;
                let to_s = compose(&t.right, &m_u)?;
                if !is_surjective(&to_r) || !is_surjective(&to_s) {
                    continue;
                }
                let to_x = compose(&a_r, &to_r)?;
                let to_z = compose(&b_s, &to_s)?;
                let (ubar, e) = Rel::from_span(x, z, &to_x, &to_z)?;
                out.add_term(&ubar.sub, &coeff * &omega(d, &e)?);
            }
        }
    }
    Ok(out)
}

/// Closed-form composition in the curly basis: sum over the subobjects of
/// the middle object whose two partial pullbacks still cover the outer
/// endpoints, weighted by their Möbius value and the collapse degree.
pub fn compose_curly(d: DegreeFn, sigma: &StarMor, rho: &StarMor) -> Result<StarMor> {
    expect_flavor(rho, Flavor::Curly)?;
    expect_flavor(sigma, Flavor::Curly)?;
    if rho.y != sigma.x {
        return Err(Error::EndpointMismatch("middle object mismatch".into()));
    }
    let (x, y, z) = (rho.x, rho.y, sigma.y);
    let lattice = subobject_lattice(&y)?;
    let top = lattice.top_idx();
    let mut out = StarMor::zero(x, z, Flavor::Curly);
    for (r_sub, c_r) in rho.terms() {
        let r = Rel {
            x,
            y,
            sub: r_sub.clone(),
        };
        let (_, a_r, b_r) = r.span()?;
        for (s_sub, c_s) in sigma.terms() {
            let s = Rel {
                x: y,
                y: z,
                sub: s_sub.clone(),
            };
            let (_, a_s, b_s) = s.span()?;
            let coeff = c_r * c_s;
            for (yi, y_sub) in lattice.elems().iter().enumerate() {
                let m_y = sub_mono(&y, y_sub)?;
                let Some(left) = pullback(&b_r, &m_y)? else {
                    continue;
                };
                if !is_surjective(&compose(&a_r, &left.left)?) {
                    continue;
                }
                let Some(right) = pullback(&m_y, &a_s)? else {
                    continue;
                };
                if !is_surjective(&compose(&b_s, &right.right)?) {
                    continue;
                }
                // iterated pullback over the chosen middle subobject
                let Some(w) = pullback(&left.right, &right.left)? else {
                    continue;
                };
                let to_x = compose(&a_r, &compose(&left.left, &w.left)?)?;
                let to_z = compose(&b_s, &compose(&right.right, &w.right)?)?;
                let (comp, e) = Rel::from_span(x, z, &to_x, &to_z)?;
                let mu = Poly::from_bigint(lattice.mobius_idx(yi, top)?);
                out.add_term(&comp.sub, &(&coeff * &mu) * &backend::delta(d, &e)?);
            }
        }
    }
    Ok(out)
}

/// The curly product expanded directly in the round basis: one sum over the
/// subobjects of the full middle pullback that cover all three endpoints.
/// Kept as a cross-check against `compose_curly` + `basis_convert`.
pub fn compose_curly_as_round(d: DegreeFn, sigma: &StarMor, rho: &StarMor) -> Result<StarMor> {
    expect_flavor(rho, Flavor::Curly)?;
    expect_flavor(sigma, Flavor::Curly)?;
    if rho.y != sigma.x {
        return Err(Error::EndpointMismatch("middle object mismatch".into()));
    }
    let (x, z) = (rho.x, sigma.y);
    let mut out = StarMor::zero(x, z, Flavor::Round);
    for (r_sub, c_r) in rho.terms() {
        let r = Rel {
            x,
            y: rho.y,
            sub: r_sub.clone(),
        };
        let (_, a_r, b_r) = r.span()?;
        for (s_sub, c_s) in sigma.terms() {
            let s = Rel {
                x: sigma.x,
                y: z,
                sub: s_sub.clone(),
            };
            let (_, a_s, b_s) = s.span()?;
            let Some(t) = pullback(&b_r, &a_s)? else {
                continue;
            };
            let coeff = c_r * c_s;
            for u_sub in backend::enumerate_subs(&t.apex, sub_enum_bound(x.kind))? {
                let m_u = sub_mono(&t.apex, &u_sub)?;
                let to_r = compose(&t.left, &m_u)?;
                let to_s = compose(&t.right, &m_u)?;
                let to_x = compose(&a_r, &to_r)?;
                let to_y = compose(&b_r, &to_r)?;
                let to_z = compose(&b_s, &to_s)?;
                if !is_surjective(&to_x) || !is_surjective(&to_y) || !is_surjective(&to_z) {
                    continue;
                }
                let (ubar, e) = Rel::from_span(x, z, &to_x, &to_z)?;
                out.add_term(&ubar.sub, &coeff * &omega(d, &e)?);
            }
        }
    }
    Ok(out)
}

/// Tensor decomposition of a pair of top summands: the product of top
/// projectors equals the sum of the summand projectors indexed by the
/// bi-surjective relations.  The equality is verified before returning.
pub fn tensor_decompose(x: Obj, y: Obj) -> Result<Vec<(Rel, TMor)>> {
    let p = product(x, y)?;
    let lhs = p_star_top(&x)?.tensor(&p_star_top(&y)?)?;
    let rels = r_set(x, y)?;
    let mut sum = TMor::zero(p, p);
    let mut out = Vec::with_capacity(rels.len());
    for rel in rels.iter() {
        let q = crate::projector::p_star(&p, &rel.sub)?;
        sum = sum.add(&q)?;
        out.push((rel.clone(), q));
    }
    if sum != lhs {
        return Err(Error::Internal(format!(
            "tensor projector sum mismatch on {x:?} * {y:?}"
        )));
    }
    Ok(out)
}

/// Projections of an iterated product onto each factor.
pub fn multi_projections(xs: &[Obj]) -> Result<(Obj, Vec<Mor>)> {
    if xs.is_empty() {
        return Err(Error::Invalid("empty factor list".into()));
    }
    let mut obj = xs[0];
    let mut projs = vec![identity(xs[0])];
    for &y in &xs[1..] {
        let p1 = proj1(obj, y)?;
        let p2 = proj2(obj, y)?;
        for q in projs.iter_mut() {
            *q = compose(q, &p1)?;
        }
        projs.push(p2);
        obj = product(obj, y)?;
    }
    Ok((obj, projs))
}

/// N-fold tensor decomposition: summands are the subobjects of the full
/// product covering every factor.
pub fn multi_tensor_decompose(xs: &[Obj]) -> Result<Vec<(Sub, TMor)>> {
    if xs.len() < 2 {
        return Err(Error::Invalid("need at least two factors".into()));
    }
    let (p, projs) = multi_projections(xs)?;
    let mut lhs = p_star_top(&xs[0])?;
    for &y in &xs[1..] {
        lhs = lhs.tensor(&p_star_top(&y)?)?;
    }
    let lattice = subobject_lattice(&p)?;
    let mut out = Vec::new();
    let mut sum = TMor::zero(p, p);
    for w in lattice.elems() {
        let m = sub_mono(&p, w)?;
        let all_cover = projs
            .iter()
            .map(|q| compose(q, &m).map(|c| is_surjective(&c)))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|b| b);
        if !all_cover {
            continue;
        }
        let q = crate::projector::p_star(&p, w)?;
        sum = sum.add(&q)?;
        out.push((w.clone(), q));
    }
    if sum != lhs {
        return Err(Error::Internal("multi tensor projector sum mismatch".into()));
    }
    Ok(out)
}

/// A fully parenthesized tensor word over base objects.
#[derive(Debug, Clone)]
pub enum TensorTree {
    Leaf(Obj),
    Node(Box<TensorTree>, Box<TensorTree>),
}

impl TensorTree {
    pub fn leaf(x: Obj) -> TensorTree {
        TensorTree::Leaf(x)
    }

    pub fn node(l: TensorTree, r: TensorTree) -> TensorTree {
        TensorTree::Node(Box::new(l), Box::new(r))
    }

    pub fn obj(&self) -> Result<Obj> {
        match self {
            TensorTree::Leaf(x) => Ok(*x),
            TensorTree::Node(l, r) => product(l.obj()?, r.obj()?),
        }
    }

    /// Flat summand labels of the iterated decomposition, as subobjects of
    /// the full product.  Since the product is strictly associative on
    /// carriers, trees over the same leaves can be compared label-for-label.
    pub fn summands(&self) -> Result<Vec<Sub>> {
        match self {
            TensorTree::Leaf(x) => Ok(vec![backend::top_sub(x)]),
            TensorTree::Node(l, r) => {
                let (lo, ro) = (l.obj()?, r.obj()?);
                let mut out = Vec::new();
                for a in l.summands()? {
                    let ma = sub_mono(&lo, &a)?;
                    for b in r.summands()? {
                        let mb = sub_mono(&ro, &b)?;
                        let prod_mono = mor_product(&ma, &mb)?;
                        for w in r_set(ma.dom, mb.dom)?.iter() {
                            out.push(backend::sub_image(&prod_mono, &w.sub)?);
                        }
                    }
                }
                let mut sorted = out.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != out.len() {
                    return Err(Error::Internal("iterated summand labels collide".into()));
                }
                out.sort();
                Ok(out)
            }
        }
    }
}

/// The two iterated decompositions of a triple tensor with their common
/// flat index set.
pub struct AssocConstraint {
    pub flat: Vec<Sub>,
    /// `((r, w), flat index)` for the left-nested tree.
    pub left: Vec<((Sub, Sub), usize)>,
    /// `((s, w), flat index)` for the right-nested tree.
    pub right: Vec<((Sub, Sub), usize)>,
}

/// The associativity constraint as an index transport: both iterated
/// decompositions of `x, y, z` are matched bijectively onto the flat
/// summand labels of the triple product.
pub fn assoc_constraint(x: Obj, y: Obj, z: Obj) -> Result<AssocConstraint> {
    let flat: Vec<Sub> = multi_tensor_decompose(&[x, y, z])?
        .into_iter()
        .map(|(s, _)| s)
        .collect();
    let find = |s: &Sub| -> Result<usize> {
        flat.binary_search(s)
            .map_err(|_| Error::Internal("iterated summand missing from flat decomposition".into()))
    };
    let (xy, yz) = (product(x, y)?, product(y, z)?);
    let mut left = Vec::new();
    for r in r_set(x, y)?.iter() {
        let m_r = sub_mono(&xy, &r.sub)?;
        let emb = mor_product(&m_r, &identity(z))?;
        for w in r_set(m_r.dom, z)?.iter() {
            let flat_sub = backend::sub_image(&emb, &w.sub)?;
            left.push(((r.sub.clone(), w.sub.clone()), find(&flat_sub)?));
        }
    }
    let mut right = Vec::new();
    for s in r_set(y, z)?.iter() {
        let m_s = sub_mono(&yz, &s.sub)?;
        let emb = mor_product(&identity(x), &m_s)?;
        for w in r_set(x, m_s.dom)?.iter() {
            let flat_sub = backend::sub_image(&emb, &w.sub)?;
            right.push(((s.sub.clone(), w.sub.clone()), find(&flat_sub)?));
        }
    }
    for side in [&left, &right] {
        let mut hit = vec![false; flat.len()];
        for (_, i) in side {
            if std::mem::replace(&mut hit[*i], true) {
                return Err(Error::Internal("iterated decomposition not injective".into()));
            }
        }
        if hit.iter().any(|h| !h) {
            return Err(Error::Internal("iterated decomposition not surjective".into()));
        }
    }
    Ok(AssocConstraint { flat, left, right })
}

/// The commutativity constraint: transport of summand labels along the
/// factor swap.  Applying it twice is the identity.
pub fn comm_constraint(x: Obj, y: Obj) -> Result<Vec<(Sub, Sub)>> {
    let table = swap_table(x, y);
    let rels = r_set(x, y)?;
    let targets = r_set(y, x)?;
    let mut out = Vec::with_capacity(rels.len());
    let mut hit = vec![false; targets.len()];
    for r in rels.iter() {
        let s = transport_sub(&r.sub, &table)?;
        let j = targets
            .iter()
            .position(|t| t.sub == s)
            .ok_or_else(|| Error::Internal("swap image is not bi-surjective".into()))?;
        if std::mem::replace(&mut hit[j], true) {
            return Err(Error::Internal("swap transport not injective".into()));
        }
        out.push((r.sub.clone(), s));
    }
    Ok(out)
}

/// A morphism between two tensor products of top summands, stored as a
/// matrix of summand-to-summand blocks.
pub struct BlockMap {
    /// Source summand labels: subobjects of the product of the two domains.
    pub src: Vec<Sub>,
    /// Target summand labels.
    pub dst: Vec<Sub>,
    pub flavor: Flavor,
    /// `blocks[i][j]` maps source summand `i` to target summand `j`.
    pub blocks: Vec<Vec<StarMor>>,
    /// Blocks whose connecting relation fails to cover its endpoints (their
    /// entry is the projector-conjugated reading, possibly zero).
    pub degenerate: Vec<(usize, usize)>,
}

impl BlockMap {
    fn zeroed(
        src_obj: Obj,
        dst_obj: Obj,
        src: Vec<Sub>,
        dst: Vec<Sub>,
        flavor: Flavor,
    ) -> Result<BlockMap> {
        let mut blocks = Vec::with_capacity(src.len());
        for u in &src {
            let uo = sub_object(&src_obj, u)?;
            let mut row = Vec::with_capacity(dst.len());
            for v in &dst {
                row.push(StarMor::zero(uo, sub_object(&dst_obj, v)?, flavor));
            }
            blocks.push(row);
        }
        Ok(BlockMap {
            src,
            dst,
            flavor,
            blocks,
            degenerate: Vec::new(),
        })
    }

    /// Blockwise equality after converting both sides to `flavor`.
    pub fn agrees_with(&self, other: &BlockMap, flavor: Flavor) -> Result<bool> {
        if self.src != other.src || self.dst != other.dst {
            return Ok(false);
        }
        for i in 0..self.src.len() {
            for j in 0..self.dst.len() {
                let a = basis_convert(&self.blocks[i][j], flavor)?;
                let b = basis_convert(&other.blocks[i][j], flavor)?;
                if a != b {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "summands_src": self.src.iter().map(Sub::to_json).collect::<Vec<_>>(),
            "summands_dst": self.dst.iter().map(Sub::to_json).collect::<Vec<_>>(),
            "flavor": self.flavor.name(),
            "blocks": self
                .blocks
                .iter()
                .map(|row| row.iter().map(StarMor::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "degenerate": self
                .degenerate
                .iter()
                .map(|(i, j)| serde_json::json!([i, j]))
                .collect::<Vec<_>>(),
        })
    }
}

/// Tensor product of two round-basis morphisms as a block matrix: each
/// bi-surjective relation between the two spans contributes one elementary
/// round block between its images.  No degree factors appear.
pub fn tensor_round(rho: &StarMor, rho2: &StarMor) -> Result<BlockMap> {
    expect_flavor(rho, Flavor::Round)?;
    expect_flavor(rho2, Flavor::Round)?;
    let (bigx, bigy) = (product(rho.x, rho2.x)?, product(rho.y, rho2.y)?);
    let src: Vec<Sub> = r_set(rho.x, rho2.x)?.iter().map(|r| r.sub.clone()).collect();
    let dst: Vec<Sub> = r_set(rho.y, rho2.y)?.iter().map(|r| r.sub.clone()).collect();
    let mut map = BlockMap::zeroed(bigx, bigy, src, dst, Flavor::Round)?;
    for (r_sub, c) in rho.terms() {
        let r = Rel {
            x: rho.x,
            y: rho.y,
            sub: r_sub.clone(),
        };
        let (r_apex, a, b) = r.span()?;
        for (r2_sub, c2) in rho2.terms() {
            let r2 = Rel {
                x: rho2.x,
                y: rho2.y,
                sub: r2_sub.clone(),
            };
            let (r2_apex, a2, b2) = r2.span()?;
            let coeff = c * c2;
            let aa = mor_product(&a, &a2)?;
            let bb = mor_product(&b, &b2)?;
            let apex_prod = product(r_apex, r2_apex)?;
            for w in r_set(r_apex, r2_apex)?.iter() {
                let m_w = sub_mono(&apex_prod, &w.sub)?;
                let (e_src, src_sub) = image(&compose(&aa, &m_w)?);
                let (e_dst, dst_sub) = image(&compose(&bb, &m_w)?);
                let (w_tilde, e_pair) = Rel::from_span(e_src.cod, e_dst.cod, &e_src, &e_dst)?;
                if !is_iso(&e_pair) {
                    return Err(Error::Internal(
                        "connecting relation is not a subobject of its image pair".into(),
                    ));
                }
                let i = map
                    .src
                    .binary_search(&src_sub)
                    .map_err(|_| Error::Internal("source image not bi-surjective".into()))?;
                let j = map
                    .dst
                    .binary_search(&dst_sub)
                    .map_err(|_| Error::Internal("target image not bi-surjective".into()))?;
                map.blocks[i][j].add_term(&w_tilde.sub, coeff.clone());
            }
        }
    }
    Ok(map)
}

/// Tensor product of two curly-basis morphisms as a block matrix: each
/// summand pair receives the projector-conjugated reading of the iterated
/// pullback relation.  Pairs whose relation fails to cover a summand are
/// reported in `degenerate`.
pub fn tensor_curly(d: DegreeFn, rho: &StarMor, rho2: &StarMor) -> Result<BlockMap> {
    expect_flavor(rho, Flavor::Curly)?;
    expect_flavor(rho2, Flavor::Curly)?;
    let (bigx, bigy) = (product(rho.x, rho2.x)?, product(rho.y, rho2.y)?);
    let src: Vec<Sub> = r_set(rho.x, rho2.x)?.iter().map(|r| r.sub.clone()).collect();
    let dst: Vec<Sub> = r_set(rho.y, rho2.y)?.iter().map(|r| r.sub.clone()).collect();
    let mut map = BlockMap::zeroed(bigx, bigy, src.clone(), dst.clone(), Flavor::Curly)?;
    let mut degenerate = std::collections::BTreeSet::new();
    for (r_sub, c) in rho.terms() {
        let r = Rel {
            x: rho.x,
            y: rho.y,
            sub: r_sub.clone(),
        };
        for (r2_sub, c2) in rho2.terms() {
            let r2 = Rel {
                x: rho2.x,
                y: rho2.y,
                sub: r2_sub.clone(),
            };
            let coeff = c * c2;
            let pairrel = crate::rel::tensor_rel(&r, &r2)?;
            let (_, to_src, to_dst) = pairrel.span()?;
            for (i, u) in src.iter().enumerate() {
                let m_u = sub_mono(&bigx, u)?;
                let Some(p1) = pullback(&m_u, &to_src)? else {
                    for j in 0..dst.len() {
                        degenerate.insert((i, j));
                    }
                    continue;
                };
                for (j, v) in dst.iter().enumerate() {
                    let m_v = sub_mono(&bigy, v)?;
                    let Some(w) = pullback(&compose(&to_dst, &p1.right)?, &m_v)? else {
                        degenerate.insert((i, j));
                        continue;
                    };
                    let to_u = compose(&p1.left, &w.left)?;
                    let to_v = w.right;
                    let (w_rel, e_pair) = Rel::from_span(m_u.dom, m_v.dom, &to_u, &to_v)?;
                    if !is_iso(&e_pair) {
                        return Err(Error::Internal(
                            "connecting relation is not a subobject of its summand pair".into(),
                        ));
                    }
                    if !w_rel.is_biepi()? {
                        degenerate.insert((i, j));
                    }
                    let block =
                        project(d, &TMor::from_rel(&w_rel, Poly::one()), m_u.dom, m_v.dom)?;
                    map.blocks[i][j] = map.blocks[i][j].add(&block.scale_poly(&coeff))?;
                }
            }
        }
    }
    map.degenerate = degenerate.into_iter().collect();
    Ok(map)
}

/// Brute-force tensor: expand both factors, tensor in the relation basis,
/// then cut every block out by the summand inclusions and project.
pub fn tensor_oracle(d: DegreeFn, rho: &StarMor, rho2: &StarMor) -> Result<BlockMap> {
    let (bigx, bigy) = (product(rho.x, rho2.x)?, product(rho.y, rho2.y)?);
    let src: Vec<Sub> = r_set(rho.x, rho2.x)?.iter().map(|r| r.sub.clone()).collect();
    let dst: Vec<Sub> = r_set(rho.y, rho2.y)?.iter().map(|r| r.sub.clone()).collect();
    let t = embed(d, rho)?.tensor(&embed(d, rho2)?)?;
    let mut map = BlockMap::zeroed(bigx, bigy, src, dst, Flavor::Curly)?;
    for (i, u) in map.src.clone().iter().enumerate() {
        let j_u = summand_inclusion(d, &bigx, u)?;
        let t_u = t.compose(d, &j_u)?;
        for (j, v) in map.dst.clone().iter().enumerate() {
            let retraction = summand_inclusion(d, &bigy, v)?.adjoint();
            let mid = retraction.compose(d, &t_u)?;
            map.blocks[i][j] = project(d, &mid, mid.dom, mid.cod)?;
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests;
