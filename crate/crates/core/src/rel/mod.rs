//! The linearized relation calculus.
//!
//! A `Rel` is a canonical subobject of a product `x * y`; a `TMor` is a
//! finitely supported Z[t]-linear combination of relations between fixed
//! endpoints.  Composition of basis relations is pullback-then-image, with
//! the degree of the collapsing surjection as a twist; a nonexistent
//! pullback contributes zero.  Morphisms of the base category embed through
//! their graphs, and every word in graph letters normalizes to a scalar
//! multiple of a single relation.

use std::collections::BTreeMap;

use crate::backend::{
    self, compose, identity, image, is_iso, mid_swap_table, pair, product, proj1, proj2,
    pullback, sub_mono, sub_object, swap_table, transport_sub, DegreeFn, Mor, Obj,
    Sub,
};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// A relation between `x` and `y`: a canonical subobject of `x * y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rel {
    pub x: Obj,
    pub y: Obj,
    pub sub: Sub,
}

impl Rel {
    pub fn new(x: Obj, y: Obj, sub: Sub) -> Result<Rel> {
        sub.validate_for(&product(x, y)?)?;
        Ok(Rel { x, y, sub })
    }

    pub fn xy(&self) -> Obj {
        product(self.x, self.y).expect("endpoints share a backend")
    }

    /// The identity relation on `x`.
    pub fn diagonal(x: Obj) -> Rel {
        Rel::graph(&identity(x))
    }

    /// The graph of a morphism `f : x -> y` as a relation.
    pub fn graph(f: &Mor) -> Rel {
        let diag = pair(&identity(f.dom), f).expect("pairing id with f");
        let (_, sub) = image(&diag);
        Rel {
            x: f.dom,
            y: f.cod,
            sub,
        }
    }

    /// Relation spanned by a jointly given pair `f : w -> x`, `g : w -> y`,
    /// together with the surjection of `w` onto it.
    pub fn from_span(x: Obj, y: Obj, f: &Mor, g: &Mor) -> Result<(Rel, Mor)> {
        if f.cod != x || g.cod != y || f.dom != g.dom {
            return Err(Error::EndpointMismatch("span does not match endpoints".into()));
        }
        let (e, sub) = image(&pair(f, g)?);
        Ok((Rel { x, y, sub }, e))
    }

    /// The subobject as an object together with its two projections.
    pub fn span(&self) -> Result<(Obj, Mor, Mor)> {
        let xy = self.xy();
        let m = sub_mono(&xy, &self.sub)?;
        let apex = sub_object(&xy, &self.sub)?;
        let a = compose(&proj1(self.x, self.y)?, &m)?;
        let b = compose(&proj2(self.x, self.y)?, &m)?;
        Ok((apex, a, b))
    }

    /// Switch the two factors.
    pub fn adjoint(&self) -> Rel {
        let table = swap_table(self.x, self.y);
        let sub = transport_sub(&self.sub, &table).expect("swap preserves canonicity");
        Rel {
            x: self.y,
            y: self.x,
            sub,
        }
    }

    /// Both projections surjective: membership in the summand basis index.
    pub fn is_biepi(&self) -> Result<bool> {
        let (_, a, b) = self.span()?;
        Ok(backend::is_surjective(&a) && backend::is_surjective(&b))
    }
}

/// Compose two relations sharing a middle object: pullback, map to the outer
/// product, take the image.  Returns the image relation and the degree of
/// the collapse, or `None` when the pullback does not exist.
pub fn rel_compose(d: DegreeFn, r: &Rel, s: &Rel) -> Result<Option<(Rel, Poly)>> {
    if r.y != s.x {
        return Err(Error::EndpointMismatch(format!(
            "middle objects differ: {:?} vs {:?}",
            r.y, s.x
        )));
    }
    let (_, a_r, b_r) = r.span()?;
    let (_, a_s, b_s) = s.span()?;
    let Some(p) = pullback(&b_r, &a_s)? else {
        return Ok(None);
    };
    let to_x = compose(&a_r, &p.left)?;
    let to_z = compose(&b_s, &p.right)?;
    let (rel, e) = Rel::from_span(r.x, s.y, &to_x, &to_z)?;
    Ok(Some((rel, backend::delta(d, &e)?)))
}

/// Product relation `r * s`, transported to the product-of-domains by
/// product-of-codomains layout.
pub fn tensor_rel(r: &Rel, s: &Rel) -> Result<Rel> {
    let sub = match (&r.sub, &s.sub) {
        (Sub::Subset(a), Sub::Subset(b)) => {
            let ncd = s.xy().size;
            Sub::subset(
                a.iter()
                    .flat_map(|&i| b.iter().map(move |&j| i * ncd + j))
                    .collect(),
            )?
        }
        (Sub::Partition(a), Sub::Partition(b)) => {
            let off = r.xy().size;
            let mut blocks = a.clone();
            blocks.extend(
                b.iter()
                    .map(|blk| blk.iter().map(|&e| e + off).collect::<Vec<_>>()),
            );
            Sub::partition(blocks)?
        }
        _ => return Err(Error::Invalid("mismatched relation shapes".into())),
    };
    let table = mid_swap_table(r.x, r.y, s.x, s.y);
    let sub = transport_sub(&sub, &table)?;
    Rel::new(product(r.x, s.x)?, product(r.y, s.y)?, sub)
}

/// A morphism of the linearized category: endpoints plus a sparse map from
/// canonical relation labels to coefficients.  Zero coefficients are pruned,
/// so structural equality is equality of morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TMor {
    pub dom: Obj,
    pub cod: Obj,
    terms: BTreeMap<Sub, Poly>,
}

impl TMor {
    pub fn zero(dom: Obj, cod: Obj) -> TMor {
        TMor {
            dom,
            cod,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_rel(rel: &Rel, coeff: Poly) -> TMor {
        let mut m = TMor::zero(rel.x, rel.y);
        m.add_term(&rel.sub, coeff);
        m
    }

    pub fn identity(x: Obj) -> TMor {
        TMor::from_rel(&Rel::diagonal(x), Poly::one())
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

    pub fn add(&self, other: &TMor) -> Result<TMor> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(Error::EndpointMismatch("sum of mismatched morphisms".into()));
        }
        let mut out = self.clone();
        for (s, c) in other.terms() {
            out.add_term(s, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TMor) -> Result<TMor> {
        self.add(&other.scale_poly(&Poly::constant(-1)))
    }

    pub fn scale_poly(&self, c: &Poly) -> TMor {
        let mut out = TMor::zero(self.dom, self.cod);
        for (s, k) in self.terms() {
            out.add_term(s, k * c);
        }
        out
    }

    /// Bilinear extension of relation composition: `self . other`.
    pub fn compose(&self, d: DegreeFn, other: &TMor) -> Result<TMor> {
        if other.cod != self.dom {
            return Err(Error::EndpointMismatch(format!(
                "cannot compose {:?} after {:?}",
                self.dom, other.cod
            )));
        }
        let mut out = TMor::zero(other.dom, self.cod);
        for (r_sub, c_r) in other.terms() {
            let r = Rel {
                x: other.dom,
                y: other.cod,
                sub: r_sub.clone(),
            };
            for (s_sub, c_s) in self.terms() {
                let s = Rel {
                    x: self.dom,
                    y: self.cod,
                    sub: s_sub.clone(),
                };
                if let Some((rel, coeff)) = rel_compose(d, &r, &s)? {
                    out.add_term(&rel.sub, &(&coeff * c_r) * c_s);
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> TMor {
        let mut out = TMor::zero(self.cod, self.dom);
        for (sub, c) in self.terms() {
            let rel = Rel {
                x: self.dom,
                y: self.cod,
                sub: sub.clone(),
            };
            out.add_term(&rel.adjoint().sub, c.clone());
        }
        out
    }

    /// Bilinear extension of the product of relations.
    pub fn tensor(&self, other: &TMor) -> Result<TMor> {
        let dom = product(self.dom, other.dom)?;
        let cod = product(self.cod, other.cod)?;
        let mut out = TMor::zero(dom, cod);
        for (r_sub, c_r) in self.terms() {
            let r = Rel {
                x: self.dom,
                y: self.cod,
                sub: r_sub.clone(),
            };
            for (s_sub, c_s) in other.terms() {
                let s = Rel {
                    x: other.dom,
                    y: other.cod,
                    sub: s_sub.clone(),
                };
                out.add_term(&tensor_rel(&r, &s)?.sub, c_r * c_s);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dom": { "backend": self.dom.kind.name(), "size": self.dom.size },
            "cod": { "backend": self.cod.kind.name(), "size": self.cod.size },
            "terms": self
                .terms()
                .map(|(s, c)| serde_json::json!({ "rel": s.to_json(), "poly": c.to_json() }))
                .collect::<Vec<_>>(),
        })
    }
}

/// `[f] : [x] -> [y]`, the graph of `f` with coefficient one.
pub fn graph(f: &Mor) -> TMor {
    TMor::from_rel(&Rel::graph(f), Poly::one())
}

/// `[f]~ : [y] -> [x]`, the adjoint of the graph.
pub fn cograph(f: &Mor) -> TMor {
    graph(f).adjoint()
}

/// Evaluation `[x * x] -> 1`, the diagonal viewed as a relation to the unit.
pub fn ev(x: Obj) -> Result<TMor> {
    let xx = product(x, x)?;
    let unit = backend::terminal(x.kind);
    let diag = pair(&identity(x), &identity(x))?;
    let (rel, e) = Rel::from_span(xx, unit, &diag, &backend::bang(x))?;
    debug_assert!(is_iso(&e));
    Ok(TMor::from_rel(&rel, Poly::one()))
}

/// Coevaluation `1 -> [x * x]`.
pub fn coev(x: Obj) -> Result<TMor> {
    Ok(ev(x)?.adjoint())
}

/// A letter of a word in the generators: `Fwd(f)` is `[f]`, `Bwd(f)` is the
/// adjoint generator `[f]~` pointing backwards.
#[derive(Debug, Clone)]
pub enum Letter {
    Fwd(Mor),
    Bwd(Mor),
}

impl Letter {
    fn dom(&self) -> Obj {
        match self {
            Letter::Fwd(f) => f.dom,
            Letter::Bwd(f) => f.cod,
        }
    }

    fn cod(&self) -> Obj {
        match self {
            Letter::Fwd(f) => f.cod,
            Letter::Bwd(f) => f.dom,
        }
    }

    fn to_tmor(&self) -> TMor {
        match self {
            Letter::Fwd(f) => graph(f),
            Letter::Bwd(f) => cograph(f),
        }
    }
}

fn check_word(word: &[Letter]) -> Result<(Obj, Obj)> {
    if word.is_empty() {
        return Err(Error::Invalid("empty word has no endpoints".into()));
    }
    for w in word.windows(2) {
        if w[1].cod() != w[0].dom() {
            return Err(Error::EndpointMismatch("word letters are not composable".into()));
        }
    }
    Ok((word[word.len() - 1].dom(), word[0].cod()))
}

/// Direct evaluation of a word by bilinear composition; the oracle the
/// normalizer is checked against.
pub fn word_eval(d: DegreeFn, word: &[Letter]) -> Result<TMor> {
    let (dom, _) = check_word(word)?;
    let mut acc = TMor::identity(dom);
    for letter in word.iter().rev() {
        acc = letter.to_tmor().compose(d, &acc)?;
    }
    Ok(acc)
}

/// Rewrite a word of generators to its normal form `kappa * <rel>`.
///
/// Adjacent letters of the same type fuse; a backwards letter followed by a
/// forwards letter is replaced through the pullback square (zero if the
/// pullback is missing); the terminal two-letter word collapses by splitting
/// off the degree of the surjection onto the joint image.  Returns `(0,
/// None)` for the zero morphism.
pub fn word_normalize(d: DegreeFn, word: &[Letter]) -> Result<(Poly, Option<Rel>)> {
    let (dom, cod) = check_word(word)?;
    let mut w: Vec<Letter> = word.to_vec();
    loop {
        // fuse adjacent same-type letters
        let mut fused = false;
        let mut i = 0;
        while i + 1 < w.len() {
            let replacement = match (&w[i], &w[i + 1]) {
                (Letter::Fwd(f), Letter::Fwd(g)) => Some(Letter::Fwd(compose(f, g)?)),
                (Letter::Bwd(f), Letter::Bwd(g)) => Some(Letter::Bwd(compose(g, f)?)),
                _ => None,
            };
            if let Some(r) = replacement {
                w.splice(i..=i + 1, [r]);
                fused = true;
            } else {
                i += 1;
            }
        }
        if fused {
            continue;
        }
        // replace the first backwards-then-forwards pattern via a pullback
        let Some(i) = (0..w.len().saturating_sub(1))
            .find(|&i| matches!((&w[i], &w[i + 1]), (Letter::Bwd(_), Letter::Fwd(_))))
        else {
            break;
        };
        let (Letter::Bwd(f), Letter::Fwd(g)) = (w[i].clone(), w[i + 1].clone()) else {
            unreachable!()
        };
        match pullback(&g, &f)? {
            None => return Ok((Poly::zero(), None)),
            Some(span) => {
                w.splice(
                    i..=i + 1,
                    [Letter::Fwd(span.right), Letter::Bwd(span.left)],
                );
            }
        }
    }
    // now w is [Fwd]? [Bwd]? — extend to the two-letter shape
    let (g, f) = match w.as_slice() {
        [Letter::Fwd(g)] => (g.clone(), identity(g.dom)),
        [Letter::Bwd(f)] => (identity(f.dom), f.clone()),
        [Letter::Fwd(g), Letter::Bwd(f)] => (g.clone(), f.clone()),
        _ => return Err(Error::Internal(format!("unnormalized word of length {}", w.len()))),
    };
    let (rel, e) = Rel::from_span(f.cod, g.cod, &f, &g)?;
    debug_assert_eq!((rel.x, rel.y), (dom, cod));
    let kappa = backend::delta(d, &e)?;
    if kappa.is_zero() {
        Ok((Poly::zero(), None))
    } else {
        Ok((kappa, Some(rel)))
    }
}
