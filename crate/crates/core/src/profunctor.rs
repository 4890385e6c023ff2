//! Profunctors `P ⇸ Q` between finite posets: isotone maps `P → Q̂`.

use std::sync::Arc;

use serde::Serialize;

use crate::bits::{bit, contains, ones, Mask};
use crate::dlattice::{enumerate_downsets, same_poset, Cut};
use crate::error::{Error, Result};
use crate::poset::{Poset, MAX_ELEMENTS};

/// A profunctor given by its value table: `values[p]` is the down-set `f(p)` of `Q`.
#[derive(Clone, Debug)]
pub struct Profunctor {
    source: Arc<Poset>,
    target: Arc<Poset>,
    values: Vec<Mask>,
}

impl PartialEq for Profunctor {
    fn eq(&self, o: &Profunctor) -> bool {
        self.values == o.values && same_poset(&self.source, &o.source) && same_poset(&self.target, &o.target)
    }
}

impl Eq for Profunctor {}

fn check_size(p: &Poset, q: &Poset) -> Result<()> {
    let n = p.len() * q.len();
    if n > MAX_ELEMENTS {
        Err(Error::TooLarge(n))
    } else {
        Ok(())
    }
}

impl Profunctor {
    pub fn from_values(source: Arc<Poset>, target: Arc<Poset>, values: Vec<Mask>) -> Result<Profunctor> {
        check_size(&source, &target)?;
        if values.len() != source.len() {
            return Err(Error::Invalid(format!("{} values for {} source elements", values.len(), source.len())));
        }
        for (p, &v) in values.iter().enumerate() {
            if !target.is_downset(v) {
                return Err(Error::NotDownset(format!("value at `{}`", source.label(p))));
            }
        }
        for (a, b) in source.covers() {
            if values[a] & !values[b] != 0 {
                return Err(Error::NotIsotone(format!("{} < {} but f({}) ⊄ f({})",
                    source.label(a), source.label(b), source.label(a), source.label(b))));
            }
        }
        Ok(Profunctor { source, target, values })
    }

    /// Values on a chain target: `v` stands for the down-set `{1, ..., v-1}`, so `n+1` is all of `[n]`.
    pub fn from_chain_values(source: Arc<Poset>, target: Arc<Poset>, vals: &[usize]) -> Result<Profunctor> {
        if !target.is_chain() {
            return Err(Error::Invalid("chain values need a chain target".into()));
        }
        let n = target.len();
        let order = target.linear_extension();
        let mut values = Vec::with_capacity(vals.len());
        for &v in vals {
            if v == 0 || v > n + 1 {
                return Err(Error::Invalid(format!("chain value {v} outside 1..={}", n + 1)));
            }
            values.push(order[..v - 1].iter().fold(0, |m, &i| m | bit(i)));
        }
        Profunctor::from_values(source, target, values)
    }

    /// Inverse of [`Profunctor::from_chain_values`]; `None` unless the target is a chain.
    pub fn chain_values(&self) -> Option<Vec<usize>> {
        if !self.target.is_chain() {
            return None;
        }
        Some(self.values.iter().map(|v| v.count_ones() as usize + 1).collect())
    }

    /// The relation `{(q, p) : q ∈ f(p)}` as a mask with `(q, p)` at bit `q * |P| + p`.
    pub fn relation(&self) -> Mask {
        let np = self.source.len();
        let mut r = 0;
        for (p, &v) in self.values.iter().enumerate() {
            for q in ones(v) {
                r |= bit(q * np + p);
            }
        }
        r
    }

    pub fn from_relation(source: Arc<Poset>, target: Arc<Poset>, rel: Mask) -> Result<Profunctor> {
        check_size(&source, &target)?;
        let np = source.len();
        let mut values = vec![0; np];
        for i in ones(rel) {
            if i >= np * target.len() {
                return Err(Error::Invalid("relation bit out of range".into()));
            }
            values[i % np] |= bit(i / np);
        }
        Profunctor::from_values(source, target, values)
    }

    pub(crate) fn from_relation_unchecked(source: Arc<Poset>, target: Arc<Poset>, rel: Mask) -> Profunctor {
        let np = source.len();
        let mut values = vec![0; np];
        for i in ones(rel) {
            values[i % np] |= bit(i / np);
        }
        Profunctor { source, target, values }
    }

    pub fn zero(source: Arc<Poset>, target: Arc<Poset>) -> Profunctor {
        let values = vec![0; source.len()];
        Profunctor { source, target, values }
    }

    pub fn one(source: Arc<Poset>, target: Arc<Poset>) -> Profunctor {
        let values = vec![target.full(); source.len()];
        Profunctor { source, target, values }
    }

    pub fn source(&self) -> &Arc<Poset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Poset> {
        &self.target
    }

    pub fn values(&self) -> &[Mask] {
        &self.values
    }

    pub fn value(&self, p: usize) -> Mask {
        self.values[p]
    }

    /// Pointwise inclusion.
    pub fn leq(&self, o: &Profunctor) -> Result<bool> {
        if !same_poset(&self.source, &o.source) || !same_poset(&self.target, &o.target) {
            return Err(Error::PosetMismatch);
        }
        Ok(self.values.iter().zip(&o.values).all(|(a, b)| a & !b == 0))
    }

    /// `Df : Q ⇸ P` with `p ∈ Df(q)` iff `q ∉ f(p)`.
    pub fn dual(&self) -> Profunctor {
        let mut values = vec![0; self.target.len()];
        for (p, &v) in self.values.iter().enumerate() {
            for (q, g) in values.iter_mut().enumerate() {
                if !contains(v, q) {
                    *g |= bit(p);
                }
            }
        }
        Profunctor { source: self.target.clone(), target: self.source.clone(), values }
    }

    /// `Λf`: pairs `(q, p)` with `q ∈ f(p)` and `q ∉ f(p')` for every `p' < p`.
    pub fn ascent(&self) -> BoundarySet {
        let mut s = BoundarySet::empty(self.target.len(), self.source.len());
        for p in 0..self.source.len() {
            let below = ones(self.source.down_of(p) & !bit(p)).fold(0, |m, p2| m | self.values[p2]);
            for q in ones(self.values[p] & !below) {
                s.insert(q, p);
            }
        }
        s
    }

    /// `Γf`: pairs `(q, p)` with `q` minimal in the complement of `f(p)`.
    pub fn graph(&self) -> BoundarySet {
        let mut s = BoundarySet::empty(self.target.len(), self.source.len());
        for p in 0..self.source.len() {
            for q in ones(self.target.minimal(self.target.full() & !self.values[p])) {
                s.insert(q, p);
            }
        }
        s
    }

    /// The up-set `{p : f(p) = Q}`, as a cut of `P`.
    pub fn profile(&self) -> Cut {
        let up = (0..self.source.len())
            .filter(|&p| self.values[p] == self.target.full())
            .fold(0, |m, p| m | bit(p));
        Cut::new_unchecked(self.source.clone(), self.source.full() & !up)
    }

    /// The down-set `⋃ f(p)`, as a cut of `Q`.
    pub fn coprofile(&self) -> Cut {
        let d = self.values.iter().fold(0, |m, v| m | v);
        Cut::new_unchecked(self.target.clone(), d)
    }

    /// The relation as a down-set of `Q × P^op`.
    pub fn to_cut(&self) -> Cut {
        let space = relation_space(&self.source, &self.target).expect("size checked on construction");
        Cut::new_unchecked(Arc::new(space), self.relation())
    }

    pub fn from_cut(c: &Cut, source: Arc<Poset>, target: Arc<Poset>) -> Result<Profunctor> {
        let space = relation_space(&source, &target)?;
        if **c.poset() != space {
            return Err(Error::PosetMismatch);
        }
        Profunctor::from_relation(source, target, c.down())
    }

    /// `p` mapped to `f(p)` as element names.
    pub fn value_names(&self) -> Vec<(String, Vec<String>)> {
        (0..self.source.len())
            .map(|p| (self.source.label(p).to_string(), self.target.names_of(self.values[p])))
            .collect()
    }
}

/// `Q × P^op`, where profunctor relations live.
pub fn relation_space(source: &Poset, target: &Poset) -> Result<Poset> {
    Poset::product(target, &source.opposite())
}

/// A set of pairs `(q, p)` in `UQ × UP`, stored as a mask with `(q, p)` at bit `q * np + p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BoundarySet {
    pub nq: usize,
    pub np: usize,
    pub mask: Mask,
}

impl BoundarySet {
    pub fn empty(nq: usize, np: usize) -> BoundarySet {
        BoundarySet { nq, np, mask: 0 }
    }

    pub fn insert(&mut self, q: usize, p: usize) {
        self.mask |= bit(q * self.np + p);
    }

    pub fn contains(&self, q: usize, p: usize) -> bool {
        contains(self.mask, q * self.np + p)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        ones(self.mask).map(|i| (i / self.np, i % self.np)).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// The same pairs read as `(p, q)` in `UP × UQ`.
    pub fn swap(&self) -> BoundarySet {
        BoundarySet { nq: self.np, np: self.nq, mask: swap_mask(self.mask, self.nq, self.np) }
    }

    pub fn labelled(&self, q: &Poset, p: &Poset) -> Vec<(String, String)> {
        self.pairs().into_iter().map(|(a, b)| (q.label(a).to_string(), p.label(b).to_string())).collect()
    }
}

/// Moves bit `a * nb + b` to bit `b * na + a`.
pub fn swap_mask(m: Mask, na: usize, nb: usize) -> Mask {
    ones(m).fold(0, |acc, i| acc | bit((i % nb) * na + i / nb))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `ΛI`: elements of the down-set with no smaller `p'` in the same row.
    Left,
    /// `ΓF`: elements of the up-set with no smaller `q'` in the same column.
    Right,
}

/// Boundary of a cut of `Q × P^op`, read as a set of pairs `(q, p)`.
pub fn boundary_of_cut(c: &Cut, source: &Poset, target: &Poset, side: Side) -> Result<BoundarySet> {
    if **c.poset() != relation_space(source, target)? {
        return Err(Error::PosetMismatch);
    }
    let np = source.len();
    let mut s = BoundarySet::empty(target.len(), np);
    match side {
        Side::Left => {
            let i = c.down();
            for x in ones(i) {
                let (q, p) = (x / np, x % np);
                if ones(source.down_of(p) & !bit(p)).all(|p2| !contains(i, q * np + p2)) {
                    s.insert(q, p);
                }
            }
        }
        Side::Right => {
            let f = c.up();
            for x in ones(f) {
                let (q, p) = (x / np, x % np);
                if ones(target.down_of(q) & !bit(q)).all(|q2| !contains(f, q2 * np + p)) {
                    s.insert(q, p);
                }
            }
        }
    }
    Ok(s)
}

/// All profunctors `P ⇸ Q`, ordered by the cardinality and then the mask of their relation.
pub fn enumerate_profunctors(source: &Arc<Poset>, target: &Arc<Poset>, limit: usize) -> Result<Vec<Profunctor>> {
    let space = relation_space(source, target)?;
    Ok(enumerate_downsets(&space, limit)?
        .into_iter()
        .map(|r| Profunctor::from_relation_unchecked(source.clone(), target.clone(), r))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    /// `f(p) ≤ q̂` for every `p`, i.e. `q ∉ f(p)`.
    BoundedBy(usize),
    /// `f(p) ≠ Q`.
    FiniteAt(usize),
    /// `f(p) ≠ Q` for every `p`.
    FiniteEverywhere,
}

impl Restriction {
    pub fn admits(&self, f: &Profunctor) -> bool {
        let full = f.target.full();
        match *self {
            Restriction::BoundedBy(q) => f.values.iter().all(|&v| !contains(v, q)),
            Restriction::FiniteAt(p) => f.values[p] != full,
            Restriction::FiniteEverywhere => f.values.iter().all(|&v| v != full),
        }
    }
}

/// The down-set of `Pro(P, Q)` cut out by a restriction.
pub fn restricted(source: &Arc<Poset>, target: &Arc<Poset>, r: Restriction, limit: usize) -> Result<Vec<Profunctor>> {
    Ok(enumerate_profunctors(source, target, limit)?.into_iter().filter(|f| r.admits(f)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transport {
    /// `α^*`: preimage of the down-set.
    Pullback,
    /// `α^!`: down-closure of the image.
    LeftAdjoint,
    /// `α_*`: the cut whose up-set is the up-closure of the image of `F`.
    RightAdjoint,
}

fn check_isotone(alpha: &[usize], p: &Poset, q: &Poset) -> Result<()> {
    if alpha.len() != p.len() || alpha.iter().any(|&a| a >= q.len()) {
        return Err(Error::Invalid("map table does not fit the posets".into()));
    }
    for (a, b) in p.covers() {
        if !q.leq(alpha[a], alpha[b]) {
            return Err(Error::NotIsotone(format!("{} < {}", p.label(a), p.label(b))));
        }
    }
    Ok(())
}

/// Moves a cut along an isotone map `α : P → Q`.
///
/// `Pullback` takes a cut of `Q`; the adjoints take a cut of `P`.
pub fn adjoint_transport(alpha: &[usize], p: &Arc<Poset>, q: &Arc<Poset>, c: &Cut, mode: Transport) -> Result<Cut> {
    check_isotone(alpha, p, q)?;
    match mode {
        Transport::Pullback => {
            if !same_poset(c.poset(), q) {
                return Err(Error::PosetMismatch);
            }
            let d = (0..p.len()).filter(|&x| contains(c.down(), alpha[x])).fold(0, |m, x| m | bit(x));
            Ok(Cut::new_unchecked(p.clone(), d))
        }
        Transport::LeftAdjoint => {
            if !same_poset(c.poset(), p) {
                return Err(Error::PosetMismatch);
            }
            let img = ones(c.down()).fold(0, |m, x| m | bit(alpha[x]));
            Ok(Cut::new_unchecked(q.clone(), q.down_closure(img)))
        }
        Transport::RightAdjoint => {
            if !same_poset(c.poset(), p) {
                return Err(Error::PosetMismatch);
            }
            let img = ones(c.up()).fold(0, |m, x| m | bit(alpha[x]));
            Ok(Cut::new_unchecked(q.clone(), q.full() & !q.up_closure(img)))
        }
    }
}

/// The profunctor `p ↦ ((↑g(p))^c, ↑g(p))` of an isotone map `g : P → Q`.
pub fn alpha_embed(g: &[usize], p: &Arc<Poset>, q: &Arc<Poset>) -> Result<Profunctor> {
    check_isotone(g, p, q)?;
    let values = g.iter().map(|&x| q.full() & !q.up_of(x)).collect();
    Profunctor::from_values(p.clone(), q.clone(), values)
}
