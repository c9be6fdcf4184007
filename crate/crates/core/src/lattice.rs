//! Finite posets with a top element, intervals and a memoized Möbius function.
//!
//! The poset is generic in its label type: subobject posets use canonical
//! subobject labels, the co-relation poset uses gluings.  Möbius values are
//! defined by the recursion `sum_{u <= v <= w} mu(v, w) = [u = w]` and are
//! computed lazily per pair; full tables are too large for partition posets
//! on more than a handful of points.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Mutex;

use crate::error::{Error, Result};

pub struct Lattice<L> {
    elems: Vec<L>,
    pos: HashMap<L, usize>,
    // leq[i][j] <=> elems[i] <= elems[j]
    leq: Vec<Vec<bool>>,
    top: usize,
    mobius: Mutex<HashMap<(usize, usize), BigInt>>,
}

impl<L: Clone + Eq + Hash + std::fmt::Debug> Lattice<L> {
    /// Build from an element list and an order predicate.  The element order
    /// is preserved; callers pass canonically sorted labels so that every
    /// matrix indexed by the lattice is reproducible.  Fails if there is no
    /// unique maximum.
    pub fn new(elems: Vec<L>, leq_fn: impl Fn(&L, &L) -> bool) -> Result<Self> {
        let n = elems.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = leq_fn(&elems[i], &elems[j]);
            }
        }
        let mut tops = (0..n).filter(|&j| (0..n).all(|i| leq[i][j]));
        let top = tops
            .next()
            .ok_or_else(|| Error::NoTop(format!("poset with {n} elements")))?;
        if tops.next().is_some() {
            return Err(Error::NoTop("two maxima".into()));
        }
        let mut pos = HashMap::with_capacity(n);
        for (i, e) in elems.iter().enumerate() {
            if pos.insert(e.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate element {e:?}")));
            }
        }
        Ok(Lattice {
            elems,
            pos,
            leq,
            top,
            mobius: Mutex::new(HashMap::new()),
        })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[L] {
        &self.elems
    }

    pub fn get(&self, i: usize) -> &L {
        &self.elems[i]
    }

    pub fn top_idx(&self) -> usize {
        self.top
    }

    pub fn top(&self) -> &L {
        &self.elems[self.top]
    }

    pub fn index_of(&self, e: &L) -> Result<usize> {
        self.pos
            .get(e)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("{e:?} is not a lattice element")))
    }

    pub fn leq_idx(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn leq(&self, a: &L, b: &L) -> Result<bool> {
        Ok(self.leq_idx(self.index_of(a)?, self.index_of(b)?))
    }

    /// All `v` with `u <= v <= w`, in element order.
    pub fn interval_idx(&self, u: usize, w: usize) -> Result<Vec<usize>> {
        if !self.leq[u][w] {
            return Err(Error::Incomparable(format!(
                "{:?} !<= {:?}",
                self.elems[u], self.elems[w]
            )));
        }
        Ok((0..self.len())
            .filter(|&v| self.leq[u][v] && self.leq[v][w])
            .collect())
    }

    pub fn interval(&self, u: &L, w: &L) -> Result<Vec<L>> {
        Ok(self
            .interval_idx(self.index_of(u)?, self.index_of(w)?)?
            .into_iter()
            .map(|i| self.elems[i].clone())
            .collect())
    }

    /// Möbius value for a comparable pair, from the defining recursion.
    /// Values are cached; the cache behaves as a pure memo.
    pub fn mobius_idx(&self, u: usize, w: usize) -> Result<BigInt> {
        if !self.leq[u][w] {
            return Err(Error::Incomparable(format!(
                "{:?} !<= {:?}",
                self.elems[u], self.elems[w]
            )));
        }
        let mut memo = self.mobius.lock().expect("mobius cache poisoned");
        if let Some(v) = memo.get(&(u, w)) {
            return Ok(v.clone());
        }
        // Fill mu(v, w) for the whole interval [u, w].  Visiting v in
        // ascending size of the interval-local up-set guarantees every
        // strictly-above element is processed first; all counting stays
        // inside the interval.
        let interval = self.interval_idx(u, w)?;
        let mut above = vec![0usize; interval.len()];
        for (i, &v) in interval.iter().enumerate() {
            above[i] = interval.iter().filter(|&&z| self.leq[v][z]).count();
        }
        let mut order: Vec<usize> = (0..interval.len()).collect();
        order.sort_by_key(|&i| above[i]);
        for i in order {
            let v = interval[i];
            if memo.contains_key(&(v, w)) {
                continue;
            }
            let value = if v == w {
                BigInt::one()
            } else {
                let mut acc = BigInt::zero();
                for &z in &interval {
                    if z != v && self.leq[v][z] {
                        acc += memo
                            .get(&(z, w))
                            .expect("interval processed out of order")
                            .clone();
                    }
                }
                -acc
            };
            memo.insert((v, w), value);
        }
        Ok(memo.get(&(u, w)).expect("just inserted").clone())
    }

    pub fn mobius(&self, u: &L, w: &L) -> Result<BigInt> {
        self.mobius_idx(self.index_of(u)?, self.index_of(w)?)
    }

    /// Greatest lower bound computed from the order alone; `None` when the
    /// common lower bounds have no maximum.
    pub fn meet_idx(&self, i: usize, j: usize) -> Option<usize> {
        let lower: Vec<usize> = (0..self.len())
            .filter(|&v| self.leq[v][i] && self.leq[v][j])
            .collect();
        lower
            .iter()
            .copied()
            .find(|&m| lower.iter().all(|&v| self.leq[v][m]))
    }

    pub fn meet(&self, a: &L, b: &L) -> Result<Option<L>> {
        Ok(self
            .meet_idx(self.index_of(a)?, self.index_of(b)?)
            .map(|i| self.elems[i].clone()))
    }

    /// Covering pairs `(i, j)` with `i` covered by `j`.  Quadratic-ish; meant
    /// for dump-sized lattices only.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.leq[i][j] {
                    continue;
                }
                let strictly_between = (0..n)
                    .any(|v| v != i && v != j && self.leq[i][v] && self.leq[v][j]);
                if !strictly_between {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Exhaustive check of reflexivity, antisymmetry and transitivity.
    pub fn check_poset_axioms(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            if !self.leq[i][i] {
                return Err(Error::Internal(format!("not reflexive at {i}")));
            }
            for j in 0..n {
                if i != j && self.leq[i][j] && self.leq[j][i] {
                    return Err(Error::Internal(format!("not antisymmetric at ({i},{j})")));
                }
                for k in 0..n {
                    if self.leq[i][j] && self.leq[j][k] && !self.leq[i][k] {
                        return Err(Error::Internal(format!(
                            "not transitive at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// JSON dump: labels, cover relations, optionally the full Möbius table.
    pub fn to_json(
        &self,
        label: impl Fn(&L) -> serde_json::Value,
        with_mobius: bool,
    ) -> Result<serde_json::Value> {
        let elements: Vec<_> = self.elems.iter().map(&label).collect();
        let covers: Vec<_> = self
            .covers()
            .into_iter()
            .map(|(i, j)| serde_json::json!([i, j]))
            .collect();
        let mut doc = serde_json::json!({
            "elements": elements,
            "covers": covers,
            "top": self.top,
        });
        if with_mobius {
            let mut table = Vec::new();
            for u in 0..self.len() {
                for w in 0..self.len() {
                    if self.leq[u][w] {
                        let mu = self.mobius_idx(u, w)?;
                        table.push(serde_json::json!({
                            "u": u,
                            "w": w,
                            "mu": serde_json::Number::from_string_unchecked(mu.to_string()),
                        }));
                    }
                }
            }
            doc.as_object_mut()
                .expect("doc is an object")
                .insert("mobius".into(), serde_json::Value::Array(table));
        }
        Ok(doc)
    }
}

impl<L: std::fmt::Debug> std::fmt::Debug for Lattice<L> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Lattice({} elements, top={})", self.elems.len(), self.top)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Boolean lattice on the subsets of {0, .., n-1}, empty set included.
    fn boolean(n: usize) -> Lattice<Vec<usize>> {
        let mut elems: Vec<Vec<usize>> = (0..(1usize << n))
            .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
            .collect();
        elems.sort();
        Lattice::new(elems, |a, b| a.iter().all(|x| b.contains(x))).unwrap()
    }

    #[test]
    fn boolean_mobius() {
        let l = boolean(2);
        l.check_poset_axioms().unwrap();
        assert_eq!(l.mobius(&vec![0], &vec![0, 1]).unwrap(), BigInt::from(-1));
        assert_eq!(l.mobius(&vec![], &vec![0, 1]).unwrap(), BigInt::from(1));
        assert_eq!(l.interval(&vec![], &vec![0, 1]).unwrap().len(), 4);
        for e in l.elems() {
            assert_eq!(l.mobius(e, e).unwrap(), BigInt::from(1));
        }
        // closed form: mu(u, w) = (-1)^(|w| - |u|)
        for u in l.elems() {
            for w in l.elems() {
                if l.leq(u, w).unwrap() {
                    let expect = if (w.len() - u.len()) % 2 == 0 { 1 } else { -1 };
                    assert_eq!(l.mobius(u, w).unwrap(), BigInt::from(expect));
                }
            }
        }
    }

    #[test]
    fn interval_of_point() {
        let l = boolean(3);
        assert_eq!(l.interval(&vec![1], &vec![1]).unwrap(), vec![vec![1]]);
    }

    #[test]
    fn incomparable_rejected() {
        let l = boolean(2);
        assert!(l.mobius(&vec![0], &vec![1]).is_err());
        assert!(l.interval(&vec![0], &vec![1]).is_err());
    }

    #[test]
    fn double_inversion_identity() {
        let l = boolean(4);
        for u in 0..l.len() {
            for w in 0..l.len() {
                if !l.leq_idx(u, w) {
                    continue;
                }
                let mut left = BigInt::from(0);
                let mut right = BigInt::from(0);
                for v in l.interval_idx(u, w).unwrap() {
                    left += l.mobius_idx(v, w).unwrap();
                    right += l.mobius_idx(u, v).unwrap();
                }
                let expect = BigInt::from(if u == w { 1 } else { 0 });
                assert_eq!(left, expect);
                assert_eq!(right, expect);
            }
        }
    }

    #[test]
    fn meet_from_order() {
        let l = boolean(3);
        let m = l.meet(&vec![0, 1], &vec![1, 2]).unwrap();
        assert_eq!(m, Some(vec![1]));
        // meet is commutative, associative, idempotent
        for a in l.elems() {
            assert_eq!(l.meet(a, a).unwrap().as_ref(), Some(a));
            for b in l.elems() {
                assert_eq!(l.meet(a, b).unwrap(), l.meet(b, a).unwrap());
                for c in l.elems() {
                    let ab_c = l
                        .meet(&l.meet(a, b).unwrap().unwrap(), c)
                        .unwrap()
                        .unwrap();
                    let a_bc = l
                        .meet(a, &l.meet(b, c).unwrap().unwrap())
                        .unwrap()
                        .unwrap();
                    assert_eq!(ab_c, a_bc);
                }
            }
        }
    }

    #[test]
    fn covers_of_square() {
        let l = boolean(2);
        assert_eq!(l.covers().len(), 4);
    }

    #[test]
    fn no_top_rejected() {
        let r = Lattice::new(vec![0usize, 1], |a, b| a == b);
        assert!(r.is_err());
    }
}
