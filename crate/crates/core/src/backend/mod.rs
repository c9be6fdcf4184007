//! The two concrete finite regular categories and their degree functions.
//!
//! `FinSet` is the category of nonempty finite sets.  `OpSet` is the opposite
//! of finite sets: a morphism `x -> y` is stored as its underlying set map
//! `carrier(y) -> carrier(x)`, injective/surjective swap roles, the terminal
//! object has empty carrier, and subobjects are partitions.  Both carriers
//! are `0..n`; products use lexicographic pairing (FinSet) or offset disjoint
//! union (OpSet), which makes reassociation and the unit isomorphisms the
//! identity on carriers.
//!
//! The interface is capability-flagged so that further backends (for
//! instance finite vector spaces over F_q) can be added behind the same
//! operations without touching the calculus built on top.

mod finset;
mod opset;

use num_bigint::BigInt;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::poly::Poly;

/// Poset of canonical subobjects of a fixed object.
pub type SubLattice = Lattice<Sub>;

pub const DEFAULT_FINSET_LATTICE_BOUND: usize = 12;
pub const DEFAULT_OPSET_LATTICE_BOUND: usize = 8;
/// Morphism sweeps refuse hom-sets with more than `4^4` tables.
pub const MOR_SWEEP_BOUND: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BackendKind {
    FinSet,
    OpSet,
}

impl BackendKind {
    pub fn has_all_pullbacks(self) -> bool {
        match self {
            BackendKind::FinSet => false,
            BackendKind::OpSet => true,
        }
    }

    pub fn is_exact_maltsev(self) -> bool {
        match self {
            BackendKind::FinSet => false,
            BackendKind::OpSet => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BackendKind::FinSet => "finset",
            BackendKind::OpSet => "opset",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "finset" => Ok(BackendKind::FinSet),
            "opset" => Ok(BackendKind::OpSet),
            other => Err(Error::Invalid(format!("unknown backend `{other}`"))),
        }
    }
}

/// An object is a backend tag plus a carrier size; elements are `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Obj {
    pub kind: BackendKind,
    pub size: usize,
}

pub fn obj(kind: BackendKind, size: usize) -> Result<Obj> {
    if kind == BackendKind::FinSet && size == 0 {
        return Err(Error::Invalid(
            "finset objects must be nonempty; empty limits are reported as nonexistent".into(),
        ));
    }
    Ok(Obj { kind, size })
}

pub fn terminal(kind: BackendKind) -> Obj {
    match kind {
        BackendKind::FinSet => Obj { kind, size: 1 },
        BackendKind::OpSet => Obj { kind, size: 0 },
    }
}

/// A morphism of the base category.  For FinSet the table maps the domain
/// carrier into the codomain carrier; for OpSet it is the underlying set map
/// and goes the other way.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mor {
    pub dom: Obj,
    pub cod: Obj,
    table: Vec<usize>,
}

impl Mor {
    pub fn new(dom: Obj, cod: Obj, table: Vec<usize>) -> Result<Mor> {
        if dom.kind != cod.kind {
            return Err(Error::EndpointMismatch("mixed backends".into()));
        }
        let (len, range) = match dom.kind {
            BackendKind::FinSet => (dom.size, cod.size),
            BackendKind::OpSet => (cod.size, dom.size),
        };
        if table.len() != len {
            return Err(Error::Invalid(format!(
                "table length {} does not match carrier {len}",
                table.len()
            )));
        }
        if table.iter().any(|&v| v >= range) {
            return Err(Error::Invalid("table entry out of range".into()));
        }
        Ok(Mor { dom, cod, table })
    }

    pub fn raw_table(&self) -> &[usize] {
        &self.table
    }

    pub fn kind(&self) -> BackendKind {
        self.dom.kind
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "backend": self.kind().name(),
            "dom": self.dom.size,
            "cod": self.cod.size,
            "table": self.table,
        })
    }
}

pub fn identity(x: Obj) -> Mor {
    Mor {
        dom: x,
        cod: x,
        table: (0..x.size).collect(),
    }
}

/// Composite `f . g` (apply `g` first).
pub fn compose(f: &Mor, g: &Mor) -> Result<Mor> {
    if f.dom != g.cod {
        return Err(Error::EndpointMismatch(format!(
            "cannot compose {:?} after {:?}",
            f.dom, g.cod
        )));
    }
    let table = match f.kind() {
        BackendKind::FinSet => g.table.iter().map(|&i| f.table[i]).collect(),
        BackendKind::OpSet => f.table.iter().map(|&c| g.table[c]).collect(),
    };
    Ok(Mor {
        dom: g.dom,
        cod: f.cod,
        table,
    })
}

pub fn is_injective(f: &Mor) -> bool {
    match f.kind() {
        BackendKind::FinSet => {
            let mut seen = vec![false; f.cod.size];
            f.table.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
        }
        // injective in the opposite category = surjective set map
        BackendKind::OpSet => {
            let mut seen = vec![false; f.dom.size];
            for &v in &f.table {
                seen[v] = true;
            }
            seen.into_iter().all(|b| b)
        }
    }
}

pub fn is_surjective(f: &Mor) -> bool {
    match f.kind() {
        BackendKind::FinSet => {
            let mut seen = vec![false; f.cod.size];
            for &v in &f.table {
                seen[v] = true;
            }
            seen.into_iter().all(|b| b)
        }
        BackendKind::OpSet => {
            let mut seen = vec![false; f.dom.size];
            f.table.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
        }
    }
}

pub fn is_iso(f: &Mor) -> bool {
    is_injective(f) && is_surjective(f)
}

/// The unique morphism to the terminal object.
pub fn bang(x: Obj) -> Mor {
    match x.kind {
        BackendKind::FinSet => Mor {
            dom: x,
            cod: terminal(x.kind),
            table: vec![0; x.size],
        },
        BackendKind::OpSet => Mor {
            dom: x,
            cod: terminal(x.kind),
            table: Vec::new(),
        },
    }
}

pub fn product(x: Obj, y: Obj) -> Result<Obj> {
    if x.kind != y.kind {
        return Err(Error::EndpointMismatch("mixed backends in product".into()));
    }
    let size = match x.kind {
        BackendKind::FinSet => x.size * y.size,
        BackendKind::OpSet => x.size + y.size,
    };
    Ok(Obj { kind: x.kind, size })
}

pub fn proj1(x: Obj, y: Obj) -> Result<Mor> {
    let p = product(x, y)?;
    let table = match x.kind {
        BackendKind::FinSet => (0..p.size).map(|i| i / y.size).collect(),
        BackendKind::OpSet => (0..x.size).collect(),
    };
    Ok(Mor {
        dom: p,
        cod: x,
        table,
    })
}

pub fn proj2(x: Obj, y: Obj) -> Result<Mor> {
    let p = product(x, y)?;
    let table = match x.kind {
        BackendKind::FinSet => (0..p.size).map(|i| i % y.size).collect(),
        BackendKind::OpSet => (0..y.size).map(|j| x.size + j).collect(),
    };
    Ok(Mor {
        dom: p,
        cod: y,
        table,
    })
}

/// The universal morphism `w -> x * y` induced by `f: w -> x`, `g: w -> y`.
pub fn pair(f: &Mor, g: &Mor) -> Result<Mor> {
    if f.dom != g.dom {
        return Err(Error::EndpointMismatch("pairing needs a shared domain".into()));
    }
    let p = product(f.cod, g.cod)?;
    let table = match f.kind() {
        BackendKind::FinSet => (0..f.dom.size)
            .map(|i| f.table[i] * g.cod.size + g.table[i])
            .collect(),
        BackendKind::OpSet => {
            let mut t = f.table.clone();
            t.extend_from_slice(&g.table);
            t
        }
    };
    Ok(Mor {
        dom: f.dom,
        cod: p,
        table,
    })
}

/// `f * g : x * x' -> y * y'` componentwise.
pub fn mor_product(f: &Mor, g: &Mor) -> Result<Mor> {
    let p1 = proj1(f.dom, g.dom)?;
    let p2 = proj2(f.dom, g.dom)?;
    pair(&compose(f, &p1)?, &compose(g, &p2)?)
}

/// A canonical subobject: a sorted index set (FinSet) or a partition with
/// blocks sorted by minimum (OpSet).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sub {
    Subset(Vec<usize>),
    Partition(Vec<Vec<usize>>),
}

impl Sub {
    /// Canonicalizes the presentation (sorting) but rejects structurally
    /// invalid data: duplicates, empty subsets, overlapping blocks.
    pub fn subset(mut indices: Vec<usize>) -> Result<Sub> {
        indices.sort_unstable();
        if indices.is_empty() {
            return Err(Error::Invalid("finset subobjects are nonempty".into()));
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("duplicate index in subset".into()));
        }
        Ok(Sub::Subset(indices))
    }

    pub fn partition(mut blocks: Vec<Vec<usize>>) -> Result<Sub> {
        let mut seen = std::collections::HashSet::new();
        for b in blocks.iter_mut() {
            b.sort_unstable();
            if b.is_empty() {
                return Err(Error::Invalid("empty block in partition".into()));
            }
            for &e in b.iter() {
                if !seen.insert(e) {
                    return Err(Error::Invalid(format!("element {e} in two blocks")));
                }
            }
        }
        blocks.sort();
        Ok(Sub::Partition(blocks))
    }

    pub fn validate_for(&self, x: &Obj) -> Result<()> {
        match (x.kind, self) {
            (BackendKind::FinSet, Sub::Subset(idx)) => {
                if idx.iter().any(|&i| i >= x.size) {
                    return Err(Error::Invalid("subset index out of range".into()));
                }
                Ok(())
            }
            (BackendKind::OpSet, Sub::Partition(blocks)) => {
                let mut seen = vec![false; x.size];
                for b in blocks {
                    for &e in b {
                        if e >= x.size {
                            return Err(Error::Invalid("block element out of range".into()));
                        }
                        seen[e] = true;
                    }
                }
                if seen.iter().any(|&s| !s) {
                    return Err(Error::Invalid("partition does not cover the carrier".into()));
                }
                Ok(())
            }
            _ => Err(Error::Invalid("subobject shape does not match backend".into())),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Sub::Subset(idx) => serde_json::json!(idx),
            Sub::Partition(blocks) => serde_json::json!(blocks),
        }
    }

    pub fn to_text(&self) -> String {
        self.to_json().to_string()
    }

    pub fn parse(kind: BackendKind, s: &str) -> Result<Sub> {
        match kind {
            BackendKind::FinSet => {
                let v: Vec<usize> = serde_json::from_str(s)
                    .map_err(|e| Error::Invalid(format!("bad subset `{s}`: {e}")))?;
                Sub::subset(v)
            }
            BackendKind::OpSet => {
                let v: Vec<Vec<usize>> = serde_json::from_str(s)
                    .map_err(|e| Error::Invalid(format!("bad partition `{s}`: {e}")))?;
                Sub::partition(v)
            }
        }
    }
}

/// The greatest subobject: the full subset, or the discrete partition.
pub fn top_sub(x: &Obj) -> Sub {
    match x.kind {
        BackendKind::FinSet => Sub::Subset((0..x.size).collect()),
        BackendKind::OpSet => Sub::Partition((0..x.size).map(|i| vec![i]).collect()),
    }
}

/// Subobject order.  FinSet: inclusion.  OpSet: `u <= v` iff `u` is coarser
/// than `v` (so the discrete partition is the top).
pub fn sub_leq(u: &Sub, v: &Sub) -> bool {
    match (u, v) {
        (Sub::Subset(a), Sub::Subset(b)) => a.iter().all(|x| b.binary_search(x).is_ok()),
        (Sub::Partition(coarse), Sub::Partition(fine)) => fine.iter().all(|fb| {
            coarse
                .iter()
                .any(|cb| fb.iter().all(|e| cb.binary_search(e).is_ok()))
        }),
        _ => false,
    }
}

/// Backend-specific greatest lower bound: intersection, or the finest common
/// coarsening.  Serves as an independent cross-check of the order-theoretic
/// meet computed by the lattice.
pub fn sub_meet_direct(x: &Obj, u: &Sub, v: &Sub) -> Result<Option<Sub>> {
    u.validate_for(x)?;
    v.validate_for(x)?;
    match (u, v) {
        (Sub::Subset(a), Sub::Subset(b)) => {
            let both: Vec<usize> = a
                .iter()
                .copied()
                .filter(|e| b.binary_search(e).is_ok())
                .collect();
            if both.is_empty() {
                Ok(None)
            } else {
                Ok(Some(Sub::Subset(both)))
            }
        }
        (Sub::Partition(a), Sub::Partition(b)) => {
            let mut uf = UnionFind::new(x.size);
            for blocks in [a, b] {
                for block in blocks {
                    for w in block.windows(2) {
                        uf.union(w[0], w[1]);
                    }
                }
            }
            Ok(Some(uf.into_partition()))
        }
        _ => Err(Error::Invalid("mismatched subobject shapes".into())),
    }
}

/// The subobject as an object in its own right.
pub fn sub_object(x: &Obj, u: &Sub) -> Result<Obj> {
    u.validate_for(x)?;
    let size = match u {
        Sub::Subset(idx) => idx.len(),
        Sub::Partition(blocks) => blocks.len(),
    };
    Ok(Obj { kind: x.kind, size })
}

/// The canonical injective morphism representing the subobject.
pub fn sub_mono(x: &Obj, u: &Sub) -> Result<Mor> {
    u.validate_for(x)?;
    let dom = sub_object(x, u)?;
    let table = match u {
        Sub::Subset(idx) => idx.clone(),
        Sub::Partition(blocks) => {
            let mut t = vec![0; x.size];
            for (k, block) in blocks.iter().enumerate() {
                for &e in block {
                    t[e] = k;
                }
            }
            t
        }
    };
    Ok(Mor {
        dom,
        cod: *x,
        table,
    })
}

/// Factor `f = m . e` with `e` surjective and `m` the canonical subobject of
/// the codomain.  Returns `(e, sub)` where `e : dom(f) ->> sub_object`.
pub fn image(f: &Mor) -> (Mor, Sub) {
    match f.kind() {
        BackendKind::FinSet => finset::image(f),
        BackendKind::OpSet => opset::image(f),
    }
}

/// Image of a subobject under a morphism.
pub fn sub_image(f: &Mor, u: &Sub) -> Result<Sub> {
    let m = sub_mono(&f.dom, u)?;
    Ok(image(&compose(f, &m)?).1)
}

/// Pullback of a subobject of the codomain; `None` when it would be empty
/// (FinSet only).
pub fn preimage(f: &Mor, z: &Sub) -> Result<Option<Sub>> {
    z.validate_for(&f.cod)?;
    match f.kind() {
        BackendKind::FinSet => Ok(finset::preimage(f, z)),
        BackendKind::OpSet => Ok(Some(opset::preimage(f, z))),
    }
}

/// A pullback presented as its two projections.
#[derive(Debug, Clone)]
pub struct Span {
    pub apex: Obj,
    pub left: Mor,
    pub right: Mor,
}

/// Pullback of `f` and `g` over their shared codomain.  `None` encodes a
/// fiber product that would be empty, which FinSet treats as nonexistent.
pub fn pullback(f: &Mor, g: &Mor) -> Result<Option<Span>> {
    if f.cod != g.cod {
        return Err(Error::EndpointMismatch("pullback needs a shared codomain".into()));
    }
    match f.kind() {
        BackendKind::FinSet => Ok(finset::pullback(f, g)),
        BackendKind::OpSet => Ok(Some(opset::pullback(f, g))),
    }
}

/// Degree selectors.  `One` is valid everywhere.  `TPower` is opset-only by
/// construction.  `ZeroNonIso` is only an actual degree function on opset:
/// on finset, being a non-isomorphism is not stable under pullback (pull a
/// two-to-one surjection back along a point missing the doubled fiber and
/// the result is an iso), so the axiom sweeps never pair it with finset;
/// pointwise evaluation still works there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DegreeFn {
    One,
    ZeroNonIso,
    TPower,
}

impl DegreeFn {
    pub fn applicable_to(self, kind: BackendKind) -> bool {
        self != DegreeFn::TPower || kind == BackendKind::OpSet
    }

    pub fn name(self) -> &'static str {
        match self {
            DegreeFn::One => "one",
            DegreeFn::ZeroNonIso => "zero-noniso",
            DegreeFn::TPower => "t-power",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "one" => Ok(DegreeFn::One),
            "zero-noniso" => Ok(DegreeFn::ZeroNonIso),
            "t-power" => Ok(DegreeFn::TPower),
            other => Err(Error::Invalid(format!("unknown degree function `{other}`"))),
        }
    }

    /// All degree functions valid on a backend (see the type-level note on
    /// `ZeroNonIso`).
    pub fn all_for(kind: BackendKind) -> Vec<DegreeFn> {
        match kind {
            BackendKind::FinSet => vec![DegreeFn::One],
            BackendKind::OpSet => vec![DegreeFn::One, DegreeFn::ZeroNonIso, DegreeFn::TPower],
        }
    }
}

/// Degree of an arbitrary morphism, via the degree of its surjective part.
pub fn delta(d: DegreeFn, f: &Mor) -> Result<Poly> {
    if !d.applicable_to(f.kind()) {
        return Err(Error::Capability(
            "t-power degree is only defined on the opset backend".into(),
        ));
    }
    let (e, _) = image(f);
    match d {
        DegreeFn::One => Ok(Poly::one()),
        DegreeFn::ZeroNonIso => Ok(if is_iso(&e) { Poly::one() } else { Poly::zero() }),
        DegreeFn::TPower => Ok(Poly::monomial(e.dom.size - e.cod.size, BigInt::from(1))),
    }
}

/// Union-find over `0..n` producing canonical partitions.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins, keeping classes ordered by minimum
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Classes as a canonical partition (blocks sorted by minimum).
    pub fn into_partition(mut self) -> Sub {
        let n = self.parent.len();
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = self.find(i);
            groups.entry(r).or_default().push(i);
        }
        Sub::Partition(groups.into_values().collect())
    }

    /// Class index of each element, classes numbered by minimum element.
    pub fn class_table(self) -> (usize, Vec<usize>) {
        let n = self.parent.len();
        let mut class_of_root = HashMap::new();
        let mut table = vec![0; n];
        let mut next = 0;
        for (i, slot) in table.iter_mut().enumerate() {
            let r = {
                let mut j = i;
                while self.parent[j] != j {
                    j = self.parent[j];
                }
                j
            };
            let c = *class_of_root.entry(r).or_insert_with(|| {
                let c = next;
                next += 1;
                c
            });
            *slot = c;
        }
        (next, table)
    }
}

/// Every subobject of `x`, canonically ordered, without building the lattice.
pub fn enumerate_subs(x: &Obj, max_carrier: usize) -> Result<Vec<Sub>> {
    if x.size > max_carrier {
        return Err(Error::SizeGuard(format!(
            "carrier {} exceeds subobject enumeration bound {max_carrier}",
            x.size
        )));
    }
    let mut subs = match x.kind {
        BackendKind::FinSet => finset::all_subsets(x.size),
        BackendKind::OpSet => opset::all_partitions(x.size),
    };
    subs.sort();
    Ok(subs)
}

fn default_bound(kind: BackendKind) -> usize {
    match kind {
        BackendKind::FinSet => DEFAULT_FINSET_LATTICE_BOUND,
        BackendKind::OpSet => DEFAULT_OPSET_LATTICE_BOUND,
    }
}

static LATTICES: OnceLock<Mutex<HashMap<Obj, Arc<SubLattice>>>> = OnceLock::new();

/// The subobject poset of `x`, built eagerly and cached per object.  Möbius
/// values inside it are memoized lazily.
pub fn subobject_lattice(x: &Obj) -> Result<Arc<SubLattice>> {
    subobject_lattice_bounded(x, default_bound(x.kind))
}

pub fn subobject_lattice_bounded(x: &Obj, max_carrier: usize) -> Result<Arc<SubLattice>> {
    if x.size > max_carrier {
        return Err(Error::SizeGuard(format!(
            "carrier {} exceeds lattice bound {max_carrier}",
            x.size
        )));
    }
    let cache = LATTICES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(l) = cache.lock().expect("lattice cache poisoned").get(x) {
        return Ok(Arc::clone(l));
    }
    let subs = enumerate_subs(x, max_carrier)?;
    let lattice = Arc::new(Lattice::new(subs, sub_leq)?);
    cache
        .lock()
        .expect("lattice cache poisoned")
        .insert(*x, Arc::clone(&lattice));
    Ok(lattice)
}

/// Carrier bijection `x * y -> y * x`.
pub fn swap_table(x: Obj, y: Obj) -> Vec<usize> {
    match x.kind {
        BackendKind::FinSet => {
            let mut t = vec![0; x.size * y.size];
            for i in 0..x.size {
                for j in 0..y.size {
                    t[i * y.size + j] = j * x.size + i;
                }
            }
            t
        }
        BackendKind::OpSet => {
            let mut t = Vec::with_capacity(x.size + y.size);
            t.extend((0..x.size).map(|i| y.size + i));
            t.extend(0..y.size);
            t
        }
    }
}

/// Carrier bijection `(a * b) * (c * d) -> (a * c) * (b * d)`.
pub fn mid_swap_table(a: Obj, b: Obj, c: Obj, d: Obj) -> Vec<usize> {
    match a.kind {
        BackendKind::FinSet => {
            let (na, nb, nc, nd) = (a.size, b.size, c.size, d.size);
            let mut t = vec![0; na * nb * nc * nd];
            for ia in 0..na {
                for ib in 0..nb {
                    for ic in 0..nc {
                        for id in 0..nd {
                            let src = (ia * nb + ib) * (nc * nd) + (ic * nd + id);
                            let dst = (ia * nc + ic) * (nb * nd) + (ib * nd + id);
                            t[src] = dst;
                        }
                    }
                }
            }
            t
        }
        BackendKind::OpSet => {
            let (na, nb, nc, nd) = (a.size, b.size, c.size, d.size);
            let mut t = Vec::with_capacity(na + nb + nc + nd);
            t.extend(0..na);
            t.extend((0..nb).map(|k| na + nc + k));
            t.extend((0..nc).map(|k| na + k));
            t.extend((0..nd).map(|k| na + nc + nb + k));
            t
        }
    }
}

/// Transport a canonical subobject along a carrier bijection.
pub fn transport_sub(u: &Sub, table: &[usize]) -> Result<Sub> {
    match u {
        Sub::Subset(idx) => Sub::subset(idx.iter().map(|&i| table[i]).collect()),
        Sub::Partition(blocks) => Sub::partition(
            blocks
                .iter()
                .map(|b| b.iter().map(|&i| table[i]).collect())
                .collect(),
        ),
    }
}

/// All morphisms `x -> y`, for exhaustive sweeps.  Refuses hom-sets larger
/// than [`MOR_SWEEP_BOUND`].
pub fn enumerate_mors(x: Obj, y: Obj) -> Result<Vec<Mor>> {
    if x.kind != y.kind {
        return Err(Error::EndpointMismatch("mixed backends".into()));
    }
    let (len, range) = match x.kind {
        BackendKind::FinSet => (x.size, y.size),
        BackendKind::OpSet => (y.size, x.size),
    };
    if range == 0 && len > 0 {
        return Ok(Vec::new());
    }
    let count = range.checked_pow(len as u32).unwrap_or(usize::MAX);
    if count > MOR_SWEEP_BOUND {
        return Err(Error::SizeGuard(format!(
            "{count} tables exceed the sweep bound {MOR_SWEEP_BOUND}"
        )));
    }
    let mut out = Vec::with_capacity(count);
    let mut table = vec![0usize; len];
    loop {
        out.push(Mor {
            dom: x,
            cod: y,
            table: table.clone(),
        });
        // increment mixed-radix counter
        let mut pos = 0;
        loop {
            if pos == len {
                return Ok(out);
            }
            table[pos] += 1;
            if table[pos] < range {
                break;
            }
            table[pos] = 0;
            pos += 1;
        }
    }
}

pub fn enumerate_surjections(x: Obj, y: Obj) -> Result<Vec<Mor>> {
    Ok(enumerate_mors(x, y)?
        .into_iter()
        .filter(is_surjective)
        .collect())
}

pub fn parse_table(x: Obj, y: Obj, s: &str) -> Result<Mor> {
    let table: Vec<usize> = serde_json::from_str(s)
        .map_err(|e| Error::Invalid(format!("bad table `{s}`: {e}")))?;
    Mor::new(x, y, table)
}
