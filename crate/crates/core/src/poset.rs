//! Finite posets stored as dense comparability masks.

use std::collections::HashMap;

use crate::bits::{bit, contains, full, ones, Mask};
use crate::error::{Error, Result};

pub const MAX_ELEMENTS: usize = 64;

/// A finite poset on at most 64 labelled elements.
///
/// `down[i]` holds every `j <= i` and `up[i]` every `j >= i`; both contain `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset {
    labels: Vec<String>,
    down: Vec<Mask>,
    up: Vec<Mask>,
}

impl Poset {
    /// Builds the transitive closure of the given covering pairs `(a, b)` meaning `a < b`.
    pub fn from_covers(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<Poset> {
        let n = labels.len();
        if n > MAX_ELEMENTS {
            return Err(Error::TooLarge(n));
        }
        let mut seen = HashMap::new();
        for l in &labels {
            if seen.insert(l.as_str(), ()).is_some() {
                return Err(Error::DuplicateElement(l.clone()));
            }
        }
        let mut up: Vec<Mask> = (0..n).map(bit).collect();
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::UnknownElement(format!("index {}", a.max(b))));
            }
            if a == b {
                return Err(Error::CycleDetected(labels[a].clone()));
            }
            up[a] |= bit(b);
        }
        for k in 0..n {
            for i in 0..n {
                if contains(up[i], k) {
                    up[i] |= up[k];
                }
            }
        }
        let mut down = vec![0; n];
        for i in 0..n {
            for j in ones(up[i]) {
                down[j] |= bit(i);
            }
        }
        for i in 0..n {
            if up[i] & down[i] != bit(i) {
                return Err(Error::CycleDetected(labels[i].clone()));
            }
        }
        Ok(Poset { labels, down, up })
    }

    /// Like [`Poset::from_covers`] with covers named by label.
    pub fn from_named(labels: &[&str], covers: &[(&str, &str)]) -> Result<Poset> {
        let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let idx = |s: &str| {
            labels
                .iter()
                .position(|l| l == s)
                .ok_or_else(|| Error::UnknownElement(s.to_string()))
        };
        let mut cs = Vec::with_capacity(covers.len());
        for (a, b) in covers {
            cs.push((idx(a)?, idx(b)?));
        }
        Poset::from_covers(labels, &cs)
    }

    /// Builds a poset from an order predicate, checking the partial-order axioms.
    pub fn from_order(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Poset> {
        let n = labels.len();
        if n > MAX_ELEMENTS {
            return Err(Error::TooLarge(n));
        }
        let mut up = vec![0; n];
        let mut down = vec![0; n];
        for i in 0..n {
            for j in 0..n {
                if leq(i, j) {
                    up[i] |= bit(j);
                    down[j] |= bit(i);
                }
            }
        }
        for i in 0..n {
            if !contains(up[i], i) {
                return Err(Error::Invalid(format!("order is not reflexive at `{}`", labels[i])));
            }
            if up[i] & down[i] != bit(i) {
                return Err(Error::CycleDetected(labels[i].clone()));
            }
            for j in ones(up[i]) {
                if up[j] & !up[i] != 0 {
                    return Err(Error::Invalid(format!("order is not transitive at `{}`", labels[i])));
                }
            }
        }
        Ok(Poset { labels, down, up })
    }

    /// The chain `1 < 2 < ... < n`.
    pub fn chain(n: usize) -> Poset {
        assert!(n <= MAX_ELEMENTS, "chain too long");
        Poset {
            labels: (1..=n).map(|i| i.to_string()).collect(),
            down: (0..n).map(|i| full(i + 1)).collect(),
            up: (0..n).map(|i| full(n) & !full(i)).collect(),
        }
    }

    /// `n` pairwise incomparable elements labelled `1..=n`.
    pub fn discrete(n: usize) -> Poset {
        assert!(n <= MAX_ELEMENTS, "too many elements");
        Poset {
            labels: (1..=n).map(|i| i.to_string()).collect(),
            down: (0..n).map(bit).collect(),
            up: (0..n).map(bit).collect(),
        }
    }

    /// `a < b`, `a < c`.
    pub fn vee() -> Poset {
        Poset::from_named(&["a", "b", "c"], &[("a", "b"), ("a", "c")]).unwrap()
    }

    /// `b < a`, `c < a`.
    pub fn wedge() -> Poset {
        Poset::from_named(&["a", "b", "c"], &[("b", "a"), ("c", "a")]).unwrap()
    }

    /// `0 < a, b < 1` with `a`, `b` incomparable.
    pub fn diamond() -> Poset {
        Poset::from_named(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    pub fn full(&self) -> Mask {
        full(self.len())
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        contains(self.up[i], j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    /// `↓i`, including `i`.
    pub fn down_of(&self, i: usize) -> Mask {
        self.down[i]
    }

    /// `↑i`, including `i`.
    pub fn up_of(&self, i: usize) -> Mask {
        self.up[i]
    }

    pub fn down_closure(&self, m: Mask) -> Mask {
        ones(m).fold(0, |acc, i| acc | self.down[i])
    }

    pub fn up_closure(&self, m: Mask) -> Mask {
        ones(m).fold(0, |acc, i| acc | self.up[i])
    }

    pub fn is_downset(&self, m: Mask) -> bool {
        m & !self.full() == 0 && self.down_closure(m) == m
    }

    pub fn is_upset(&self, m: Mask) -> bool {
        m & !self.full() == 0 && self.up_closure(m) == m
    }

    pub fn minimal(&self, m: Mask) -> Mask {
        ones(m).filter(|&i| self.down[i] & m == bit(i)).fold(0, |a, i| a | bit(i))
    }

    pub fn maximal(&self, m: Mask) -> Mask {
        ones(m).filter(|&i| self.up[i] & m == bit(i)).fold(0, |a, i| a | bit(i))
    }

    pub fn minimal_elements(&self) -> Mask {
        self.minimal(self.full())
    }

    pub fn maximal_elements(&self) -> Mask {
        self.maximal(self.full())
    }

    /// Covering pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            let above = self.up[a] & !bit(a);
            for b in ones(self.minimal(above)) {
                out.push((a, b));
            }
        }
        out
    }

    pub fn is_chain(&self) -> bool {
        (0..self.len()).all(|i| (0..self.len()).all(|j| self.leq(i, j) || self.leq(j, i)))
    }

    /// No two incomparable elements share a lower bound.
    pub fn is_forest(&self) -> bool {
        (0..self.len()).all(|i| {
            (0..i).all(|j| self.leq(i, j) || self.leq(j, i) || self.down[i] & self.down[j] == 0)
        })
    }

    pub fn opposite(&self) -> Poset {
        Poset { labels: self.labels.clone(), down: self.up.clone(), up: self.down.clone() }
    }

    /// Product order; the pair `(a, b)` sits at index `a * |B| + b` and is labelled `(a,b)`.
    pub fn product(a: &Poset, b: &Poset) -> Result<Poset> {
        let n = a.len() * b.len();
        if n > MAX_ELEMENTS {
            return Err(Error::TooLarge(n));
        }
        let nb = b.len();
        let mut labels = Vec::with_capacity(n);
        let mut up = Vec::with_capacity(n);
        let mut down = Vec::with_capacity(n);
        for x in 0..a.len() {
            for y in 0..nb {
                labels.push(format!("({},{})", a.labels[x], b.labels[y]));
                let mut u = 0;
                for x2 in ones(a.up[x]) {
                    u |= b.up[y] << (x2 * nb);
                }
                let mut d = 0;
                for x2 in ones(a.down[x]) {
                    d |= b.down[y] << (x2 * nb);
                }
                up.push(u);
                down.push(d);
            }
        }
        Ok(Poset { labels, down, up })
    }

    /// Element indices sorted so that every element precedes the elements above it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.len()).collect();
        v.sort_by_key(|&i| (self.down[i].count_ones(), i));
        v
    }

    pub fn mask_of(&self, names: &[&str]) -> Result<Mask> {
        names.iter().try_fold(0, |m, s| Ok(m | bit(self.index_of(s)?)))
    }

    pub fn names_of(&self, m: Mask) -> Vec<String> {
        ones(m).map(|i| self.labels[i].clone()).collect()
    }
}
