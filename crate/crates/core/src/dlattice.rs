//! Cuts of a finite poset and the distributive lattice they form.

use std::sync::Arc;

use serde::Serialize;

use crate::bits::{bit, ones, Mask};
use crate::error::{Error, Result};
use crate::poset::Poset;

pub const DEFAULT_ENUM_LIMIT: usize = 1 << 22;

/// A cut `(I, F)`: a down-set and its complementary up-set. Only `I` is stored.
#[derive(Clone, Debug)]
pub struct Cut {
    poset: Arc<Poset>,
    down: Mask,
}

impl PartialEq for Cut {
    fn eq(&self, other: &Cut) -> bool {
        self.down == other.down && same_poset(&self.poset, &other.poset)
    }
}

impl Eq for Cut {}

pub(crate) fn same_poset(a: &Arc<Poset>, b: &Arc<Poset>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Cut {
    pub fn from_downset(poset: Arc<Poset>, down: Mask) -> Result<Cut> {
        if !poset.is_downset(down) {
            return Err(Error::NotDownset(format!("{:?}", poset.names_of(down))));
        }
        Ok(Cut { poset, down })
    }

    pub fn from_upset(poset: Arc<Poset>, up: Mask) -> Result<Cut> {
        if !poset.is_upset(up) {
            return Err(Error::NotDownset(format!("complement of {:?}", poset.names_of(up))));
        }
        let down = poset.full() & !up;
        Ok(Cut { poset, down })
    }

    pub(crate) fn new_unchecked(poset: Arc<Poset>, down: Mask) -> Cut {
        debug_assert!(poset.is_downset(down));
        Cut { poset, down }
    }

    pub fn bottom(poset: Arc<Poset>) -> Cut {
        Cut { poset, down: 0 }
    }

    pub fn top(poset: Arc<Poset>) -> Cut {
        let down = poset.full();
        Cut { poset, down }
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn down(&self) -> Mask {
        self.down
    }

    pub fn up(&self) -> Mask {
        self.poset.full() & !self.down
    }

    fn check(&self, other: &Cut) -> Result<()> {
        if same_poset(&self.poset, &other.poset) {
            Ok(())
        } else {
            Err(Error::PosetMismatch)
        }
    }

    pub fn leq(&self, other: &Cut) -> Result<bool> {
        self.check(other)?;
        Ok(self.down & !other.down == 0)
    }

    pub fn join(&self, other: &Cut) -> Result<Cut> {
        self.check(other)?;
        Ok(Cut { poset: self.poset.clone(), down: self.down | other.down })
    }

    pub fn meet(&self, other: &Cut) -> Result<Cut> {
        self.check(other)?;
        Ok(Cut { poset: self.poset.clone(), down: self.down & other.down })
    }

    /// `(I, F)` over `P` becomes `(F, I)` over the opposite poset.
    pub fn alexander_dual(&self) -> Cut {
        let op = Arc::new(self.poset.opposite());
        Cut { down: self.up(), poset: op }
    }

    pub fn down_names(&self) -> Vec<String> {
        self.poset.names_of(self.down)
    }
}

/// All down-sets of `p`, ordered by cardinality then mask.
pub fn enumerate_downsets(p: &Poset, limit: usize) -> Result<Vec<Mask>> {
    let order = p.linear_extension();
    let strict_down: Vec<Mask> = order.iter().map(|&e| p.down_of(e) & !bit(e)).collect();
    let mut out = Vec::new();
    // depth-first; every partial choice extends to at least one down-set
    let mut stack: Vec<(usize, Mask)> = vec![(0, 0)];
    while let Some((t, cur)) = stack.pop() {
        if t == order.len() {
            if out.len() >= limit {
                return Err(Error::SizeLimit(format!("more than {limit} down-sets")));
            }
            out.push(cur);
            continue;
        }
        stack.push((t + 1, cur));
        if strict_down[t] & !cur == 0 {
            stack.push((t + 1, cur | bit(order[t])));
        }
    }
    out.sort_by_key(|&m| (m.count_ones(), m));
    Ok(out)
}

pub fn enumerate_cuts(p: &Arc<Poset>, limit: usize) -> Result<Vec<Cut>> {
    Ok(enumerate_downsets(p, limit)?
        .into_iter()
        .map(|down| Cut { poset: p.clone(), down })
        .collect())
}

/// The cut `((↑i)^c, ↑i)`.
pub fn co_yoneda(p: &Arc<Poset>, i: usize) -> Cut {
    Cut { poset: p.clone(), down: p.full() & !p.up_of(i) }
}

/// Tests `c ∈ 𝓘` for the ideal determined by a filter family: `F_c` meets every `I` in it.
pub fn in_ideal_via_filter(c: &Cut, filter: &[Cut]) -> Result<bool> {
    let mut ok = true;
    for g in filter {
        c.check(g)?;
        ok &= c.up() & g.down() != 0;
    }
    Ok(ok)
}

#[derive(Clone, Debug, Serialize)]
pub struct FiniteTypeReport {
    pub holds: bool,
    pub ideal_condition: bool,
    pub filter_condition: bool,
    pub cuts_checked: usize,
    /// Down-sets (by element names) where one of the two biconditionals fails.
    pub witnesses: Vec<Vec<String>>,
}

/// Checks both biconditionals characterising a finite type cut, over every cut of the poset.
///
/// The families are taken as given; they are not closed first.
pub fn verify_finite_type_cut(ideal: &[Cut], filter: &[Cut], limit: usize) -> Result<FiniteTypeReport> {
    let p = match ideal.first().or(filter.first()) {
        Some(c) => c.poset.clone(),
        None => return Err(Error::Invalid("both families are empty".into())),
    };
    for c in ideal.iter().chain(filter) {
        if !same_poset(&p, &c.poset) {
            return Err(Error::PosetMismatch);
        }
    }
    let in_i: std::collections::HashSet<Mask> = ideal.iter().map(|c| c.down).collect();
    let in_f: std::collections::HashSet<Mask> = filter.iter().map(|c| c.down).collect();
    let all = enumerate_downsets(&p, limit)?;
    let full = p.full();
    let (mut cond_i, mut cond_f) = (true, true);
    let mut witnesses = Vec::new();
    for &d in &all {
        let up = full & !d;
        let lhs_i = in_i.contains(&d);
        let rhs_i = filter.iter().all(|g| up & g.down != 0);
        let lhs_f = in_f.contains(&d);
        let rhs_f = ideal.iter().all(|c| (full & !c.down) & d != 0);
        if lhs_i != rhs_i {
            cond_i = false;
        }
        if lhs_f != rhs_f {
            cond_f = false;
        }
        if lhs_i != rhs_i || lhs_f != rhs_f {
            witnesses.push(p.names_of(d));
        }
    }
    Ok(FiniteTypeReport {
        holds: cond_i && cond_f,
        ideal_condition: cond_i,
        filter_condition: cond_f,
        cuts_checked: all.len(),
        witnesses,
    })
}

/// Every element index with its co-Yoneda cut, in index order.
pub fn co_yoneda_all(p: &Arc<Poset>) -> Vec<Cut> {
    (0..p.len()).map(|i| co_yoneda(p, i)).collect()
}

/// Names of the elements in a mask, for reports.
pub fn names(p: &Poset, m: Mask) -> Vec<String> {
    ones(m).map(|i| p.label(i).to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_downsets(p: &Poset) -> Vec<Mask> {
        let mut v: Vec<Mask> = (0..1u64 << p.len()).filter(|&m| {
            (0..p.len()).all(|i| m >> i & 1 == 0 || (0..p.len()).all(|j| !p.leq(j, i) || m >> j & 1 == 1))
        }).collect();
        v.sort_by_key(|&m| (m.count_ones(), m));
        v
    }

    #[test]
    fn downsets_match_brute_force() {
        for p in [Poset::chain(4), Poset::vee(), Poset::wedge(), Poset::diamond(), Poset::discrete(4)] {
            assert_eq!(enumerate_downsets(&p, 1000).unwrap(), brute_downsets(&p));
        }
        let grid = Poset::product(&Poset::chain(3), &Poset::vee()).unwrap();
        assert_eq!(enumerate_downsets(&grid, 10_000).unwrap(), brute_downsets(&grid));
    }

    #[test]
    fn chain_cuts_and_co_yoneda() {
        let c = Arc::new(Poset::chain(3));
        let cuts = enumerate_cuts(&c, 100).unwrap();
        assert_eq!(cuts.len(), 4);
        // i maps to the down-set {1..i-1}
        let y: Vec<Mask> = co_yoneda_all(&c).iter().map(|c| c.down()).collect();
        assert_eq!(y, vec![0b000, 0b001, 0b011]);
    }

    #[test]
    fn limit_is_enforced() {
        let e = enumerate_downsets(&Poset::discrete(10), 100).unwrap_err();
        assert!(matches!(e, Error::SizeLimit(_)));
    }

    #[test]
    fn alexander_dual_swaps_sides() {
        let v = Arc::new(Poset::vee());
        let c = Cut::from_downset(v.clone(), 0b011).unwrap();
        let d = c.alexander_dual();
        assert_eq!(d.down(), 0b100);
        assert_eq!(**d.poset(), v.opposite());
        assert_eq!(d.alexander_dual(), c);
    }

    #[test]
    fn mismatched_posets() {
        let a = Cut::bottom(Arc::new(Poset::chain(2)));
        let b = Cut::bottom(Arc::new(Poset::discrete(2)));
        assert_eq!(a.join(&b).unwrap_err(), Error::PosetMismatch);
        assert!(Cut::from_downset(Arc::new(Poset::chain(2)), 0b10).is_err());
    }

    #[test]
    fn finite_type_on_chain_partition() {
        // cuts of [3] form [4]; split it as {0,1} | {2,3}
        let c = Arc::new(Poset::chain(3));
        let all = enumerate_cuts(&c, 100).unwrap();
        let (i, f) = (all[..2].to_vec(), all[2..].to_vec());
        assert!(verify_finite_type_cut(&i, &f, 100).unwrap().holds);
        for x in &all {
            assert_eq!(in_ideal_via_filter(x, &f).unwrap(), i.contains(x));
        }
        let r = verify_finite_type_cut(&i[1..], &f, 100).unwrap();
        assert!(!r.holds && !r.ideal_condition);
        assert_eq!(r.witnesses, vec![Vec::<String>::new()]);
    }
}
