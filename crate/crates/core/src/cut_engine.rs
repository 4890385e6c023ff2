//! Cuts of `Pro(P, Q)`, their boundary families, and the checks that the
//! ascent/graph construction preserves the cut.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::bits::{bit, full, minimal_masks, ones, subset, Mask};
use crate::dlattice::{enumerate_downsets, same_poset, DEFAULT_ENUM_LIMIT};
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::profunctor::{enumerate_profunctors, relation_space, swap_mask, BoundarySet, Profunctor};
use crate::sweep::{sweep, Mode, Probe, SweepOptions};

pub type MembershipFn = Arc<dyn Fn(&Profunctor) -> bool + Send + Sync>;

/// How a cut of `Pro(P, Q)` is specified.
#[derive(Clone)]
pub enum CutSpec {
    /// The up-set of profunctors with `f(p) = Q` for some `p`.
    ReachesInf,
    /// The down-set of profunctors with `f(p) ≠ Q` everywhere; the same cut as `ReachesInf`.
    FiniteEverywhere,
    /// The down-set `Pro_{≤q̂}` for the named element `q` of `Q`.
    BoundedBy(String),
    /// The down-set `f(p) ≠ Q` for the named element `p` of `P`.
    FiniteAt(String),
    GeneratedDown(Vec<Profunctor>),
    GeneratedUp(Vec<Profunctor>),
    /// A named membership test for the down-set side.
    Predicate(String, MembershipFn),
}

impl fmt::Debug for CutSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl CutSpec {
    pub fn name(&self) -> String {
        match self {
            CutSpec::ReachesInf => "reaches-inf".into(),
            CutSpec::FiniteEverywhere => "finite-everywhere".into(),
            CutSpec::BoundedBy(q) => format!("bounded-by:{q}"),
            CutSpec::FiniteAt(p) => format!("finite-at:{p}"),
            CutSpec::GeneratedDown(g) => format!("generated-down({})", g.len()),
            CutSpec::GeneratedUp(g) => format!("generated-up({})", g.len()),
            CutSpec::Predicate(n, _) => n.clone(),
        }
    }

    /// Parses the built-in names `reaches-inf`, `finite-everywhere`, `bounded-by:q`, `finite-at:p`.
    pub fn parse(s: &str) -> Result<CutSpec> {
        let s = s.trim();
        match s {
            "reaches-inf" => return Ok(CutSpec::ReachesInf),
            "finite-everywhere" => return Ok(CutSpec::FiniteEverywhere),
            _ => {}
        }
        if let Some(q) = s.strip_prefix("bounded-by:") {
            return Ok(CutSpec::BoundedBy(q.to_string()));
        }
        if let Some(p) = s.strip_prefix("finite-at:") {
            return Ok(CutSpec::FiniteAt(p.to_string()));
        }
        Err(Error::Invalid(format!("unknown cut `{s}`")))
    }
}

/// A cut `(𝓘, 𝓕)` of `Pro(P, Q)` with every member materialised.
#[derive(Clone, Debug)]
pub struct ProCut {
    source: Arc<Poset>,
    target: Arc<Poset>,
    members: Vec<Profunctor>,
    rels: Vec<Mask>,
    in_ideal: Vec<bool>,
    spec: String,
}

impl ProCut {
    pub fn source(&self) -> &Arc<Poset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Poset> {
        &self.target
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    /// Every profunctor, in enumeration order.
    pub fn members(&self) -> &[Profunctor] {
        &self.members
    }

    pub fn is_ideal(&self, i: usize) -> bool {
        self.in_ideal[i]
    }

    pub fn ideal(&self) -> impl Iterator<Item = &Profunctor> {
        self.members.iter().zip(&self.in_ideal).filter(|(_, &b)| b).map(|(f, _)| f)
    }

    pub fn filter(&self) -> impl Iterator<Item = &Profunctor> {
        self.members.iter().zip(&self.in_ideal).filter(|(_, &b)| !b).map(|(f, _)| f)
    }

    pub fn contains_in_ideal(&self, f: &Profunctor) -> Option<bool> {
        self.rels.iter().position(|&r| r == f.relation()).map(|i| self.in_ideal[i])
    }

    /// The dual cut `(D𝓕, D𝓘)` of `Pro(Q, P)`.
    pub fn dual(&self) -> Result<ProCut> {
        let members = enumerate_profunctors(&self.target, &self.source, DEFAULT_ENUM_LIMIT)?;
        let index: HashMap<Mask, usize> = self.rels.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let in_ideal = members.iter().map(|h| !self.in_ideal[index[&h.dual().relation()]]).collect();
        Ok(ProCut::assemble(self.target.clone(), self.source.clone(), members, in_ideal, format!("dual of {}", self.spec)))
    }

    fn assemble(source: Arc<Poset>, target: Arc<Poset>, members: Vec<Profunctor>, in_ideal: Vec<bool>, spec: String) -> ProCut {
        let rels = members.iter().map(|f| f.relation()).collect();
        ProCut { source, target, members, rels, in_ideal, spec }
    }

    /// Builds a cut from an explicit membership vector, checking that it splits `Pro(P, Q)` into a down-set and an up-set.
    pub fn from_membership(source: Arc<Poset>, target: Arc<Poset>, in_ideal: impl Fn(&Profunctor) -> bool, spec: String) -> Result<ProCut> {
        let members = enumerate_profunctors(&source, &target, DEFAULT_ENUM_LIMIT)?;
        let flags: Vec<bool> = members.iter().map(&in_ideal).collect();
        let pc = ProCut::assemble(source, target, members, flags, spec);
        pc.check_downward_closed()?;
        Ok(pc)
    }

    fn check_downward_closed(&self) -> Result<()> {
        let space = relation_space(&self.source, &self.target)?;
        let index: HashMap<Mask, usize> = self.rels.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        for (i, &r) in self.rels.iter().enumerate() {
            if !self.in_ideal[i] {
                continue;
            }
            for m in ones(space.maximal(r)) {
                let j = index[&(r & !bit(m))];
                if !self.in_ideal[j] {
                    return Err(Error::NotAPartition(format!(
                        "{} is on the down-set side but the smaller {} is not",
                        describe(&self.members[i]),
                        describe(&self.members[j])
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Compact rendering of a profunctor for messages.
pub fn describe(f: &Profunctor) -> String {
    match f.chain_values() {
        Some(v) => {
            let n = f.target().len() + 1;
            let parts: Vec<String> = v.iter().map(|&x| if x == n { "inf".into() } else { x.to_string() }).collect();
            format!("({})", parts.join(","))
        }
        None => {
            let parts: Vec<String> = f.value_names().into_iter().map(|(p, qs)| format!("{p}:{{{}}}", qs.join(" "))).collect();
            format!("[{}]", parts.join(" "))
        }
    }
}

/// Materialises a cut specification over `Pro(P, Q)`.
pub fn materialize(source: &Arc<Poset>, target: &Arc<Poset>, spec: &CutSpec) -> Result<ProCut> {
    let name = spec.name();
    let full = target.full();
    match spec {
        CutSpec::ReachesInf | CutSpec::FiniteEverywhere => {
            ProCut::from_membership(source.clone(), target.clone(), |f| f.values().iter().all(|&v| v != full), name)
        }
        CutSpec::BoundedBy(q) => {
            let q = target.index_of(q)?;
            ProCut::from_membership(source.clone(), target.clone(), |f| f.values().iter().all(|&v| v & bit(q) == 0), name)
        }
        CutSpec::FiniteAt(p) => {
            let p = source.index_of(p)?;
            ProCut::from_membership(source.clone(), target.clone(), |f| f.value(p) != full, name)
        }
        CutSpec::GeneratedDown(gens) | CutSpec::GeneratedUp(gens) => {
            for g in gens {
                if !same_poset(g.source(), source) || !same_poset(g.target(), target) {
                    return Err(Error::PosetMismatch);
                }
            }
            let rels: Vec<Mask> = gens.iter().map(|g| g.relation()).collect();
            let down = matches!(spec, CutSpec::GeneratedDown(_));
            ProCut::from_membership(
                source.clone(),
                target.clone(),
                |f| {
                    let r = f.relation();
                    if down {
                        rels.iter().any(|&g| subset(r, g))
                    } else {
                        !rels.iter().any(|&g| subset(g, r))
                    }
                },
                name,
            )
        }
        CutSpec::Predicate(_, test) => ProCut::from_membership(source.clone(), target.clone(), |f| test(f), name),
    }
}

/// Minimal boundary sets, each with the index of the first member realising it.
#[derive(Clone, Debug)]
pub struct BoundaryFamilies {
    /// Minimal ascents `Λf`, `f ∈ 𝓕`; they generate the up-set side.
    pub lambda: Vec<(BoundarySet, usize)>,
    /// Minimal graphs `Γf`, `f ∈ 𝓘`; their complements generate the down-set side.
    pub gamma: Vec<(BoundarySet, usize)>,
}

fn minimal_with_witness(items: impl Iterator<Item = (usize, BoundarySet)>) -> Vec<(BoundarySet, usize)> {
    let mut first: HashMap<Mask, (BoundarySet, usize)> = HashMap::new();
    for (i, b) in items {
        first.entry(b.mask).or_insert((b, i));
    }
    let keep = minimal_masks(first.keys().copied().collect());
    keep.into_iter().map(|m| first[&m]).collect()
}

pub fn boundary_families(pc: &ProCut) -> BoundaryFamilies {
    let idx = || pc.members.iter().enumerate();
    BoundaryFamilies {
        lambda: minimal_with_witness(idx().filter(|(i, _)| !pc.in_ideal[*i]).map(|(i, f)| (i, f.ascent()))),
        gamma: minimal_with_witness(idx().filter(|(i, _)| pc.in_ideal[*i]).map(|(i, f)| (i, f.graph()))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// `S ⊇ Λf` for the given `f ∈ 𝓕`.
    ContainsAscent(Profunctor),
    /// `S^c ⊇ Γf` for the given `f ∈ 𝓘`.
    ComplementContainsGraph(Profunctor),
    /// Both or neither hold; only possible if the construction fails.
    Both(Profunctor, Profunctor),
    Neither,
}

/// Decides which side of the induced Boolean cut a subset `S ⊆ UQ × UP` falls on.
/// Witnesses are the first members in enumeration order.
pub fn classify_subset(pc: &ProCut, s: &BoundarySet) -> Result<Classification> {
    if s.nq != pc.target.len() || s.np != pc.source.len() {
        return Err(Error::PosetMismatch);
    }
    let comp = full(s.nq * s.np) & !s.mask;
    let a = pc.filter().find(|f| subset(f.ascent().mask, s.mask)).cloned();
    let b = pc.ideal().find(|f| subset(f.graph().mask, comp)).cloned();
    Ok(match (a, b) {
        (Some(f), None) => Classification::ContainsAscent(f),
        (None, Some(g)) => Classification::ComplementContainsGraph(g),
        (Some(f), Some(g)) => Classification::Both(f, g),
        (None, None) => Classification::Neither,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub subset: Vec<(String, String)>,
    pub kind: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct CutReport {
    pub instance: String,
    pub cut_spec: String,
    pub mode: Mode,
    pub subsets_checked: u64,
    /// Subsets containing an ascent of the up-set side.
    pub ascent_side: u64,
    /// Subsets whose complement contains a graph of the down-set side.
    pub graph_side: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    pub holds: bool,
}

pub fn instance_name(p: &Poset, q: &Poset) -> String {
    format!("Pro(P,Q) with |P|={} |Q|={}", p.len(), q.len())
}

/// Checks over every subset `S ⊆ UQ × UP` (or a seeded sample) that exactly one of
/// `S ⊇ Λf` (`f ∈ 𝓕`) and `S^c ⊇ Γf` (`f ∈ 𝓘`) holds.
pub fn verify_preserving_cut(pc: &ProCut, opts: &SweepOptions) -> Result<CutReport> {
    let (nq, np) = (pc.target.len(), pc.source.len());
    let n = nq * np;
    let fam = boundary_families(pc);
    let lam: Vec<Mask> = fam.lambda.iter().map(|x| x.0.mask).collect();
    let gam: Vec<Mask> = fam.gamma.iter().map(|x| x.0.mask).collect();
    let (mode, t) = sweep(n, opts, |s| {
        let a = lam.iter().any(|&m| m & !s == 0);
        let b = gam.iter().any(|&m| m & s == 0);
        let violation = match (a, b) {
            (true, true) => Some("both"),
            (false, false) => Some("neither"),
            _ => None,
        };
        Probe { hits: [a, b, false, false], violation }
    })?;
    let violations = t
        .violations
        .iter()
        .map(|&(m, kind)| Violation { subset: BoundarySet { nq, np, mask: m }.labelled(&pc.target, &pc.source), kind })
        .collect();
    Ok(CutReport {
        instance: instance_name(&pc.source, &pc.target),
        cut_spec: pc.spec.clone(),
        mode,
        subsets_checked: t.checked,
        ascent_side: t.hits[0],
        graph_side: t.hits[1],
        violation_count: t.violation_count,
        violations,
        holds: t.violation_count == 0,
    })
}

/// `Pro(P, Q)` ordered pointwise, as a poset whose elements are indexed like the enumeration.
pub fn pro_poset(members: &[Profunctor]) -> Result<Poset> {
    let rels: Vec<Mask> = members.iter().map(|f| f.relation()).collect();
    let labels = members.iter().map(describe).collect();
    Poset::from_order(labels, |i, j| subset(rels[i], rels[j]))
}

/// Every cut of `Pro(P, Q)`, via the down-sets of the pointwise order.
pub fn enumerate_pro_cuts(source: &Arc<Poset>, target: &Arc<Poset>, limit: usize) -> Result<Vec<ProCut>> {
    let members = enumerate_profunctors(source, target, limit)?;
    let pp = pro_poset(&members)?;
    let downs = enumerate_downsets(&pp, limit)?;
    Ok(downs
        .into_iter()
        .enumerate()
        .map(|(k, d)| {
            let flags = (0..members.len()).map(|i| d >> i & 1 == 1).collect();
            ProCut::assemble(source.clone(), target.clone(), members.clone(), flags, format!("cut #{k}"))
        })
        .collect())
}

/// `table[x]` is true iff some generator is contained in `x`, for `x` over `n` bits.
pub(crate) fn upset_table(n: usize, gens: &[Mask]) -> Vec<bool> {
    let mut t = vec![false; 1 << n];
    for &g in gens {
        t[g as usize] = true;
    }
    for b in 0..n {
        for x in 0..t.len() {
            if x >> b & 1 == 1 && t[x ^ (1 << b)] {
                t[x] = true;
            }
        }
    }
    t
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramReport {
    pub instance: String,
    pub cuts_checked: usize,
    /// `D` is an order-reversing involution between `Pro(P, Q)` and `Pro(Q, P)`.
    pub duality_bijection: bool,
    /// `Γ(Df) = swap(Λf)` and `Λ(Df) = swap(Γf)` for every `f`.
    pub boundary_swap: bool,
    /// The up-set generated by `swap(Γf)`, `f ∈ 𝓘`, is the Alexander dual of the one generated by `Λf`, `f ∈ 𝓕`.
    pub graph_route: bool,
    /// The ascent up-set of the dual cut `(D𝓕, D𝓘)` is that same Alexander dual.
    pub dual_cut_route: bool,
    pub failures: Vec<String>,
    pub holds: bool,
}

pub const DIAGRAM_MAX_CELLS: usize = 16;

/// Checks both ways around the duality square for every cut of `Pro(P, Q)`.
pub fn verify_duality_diagram(source: &Arc<Poset>, target: &Arc<Poset>, limit: usize) -> Result<DiagramReport> {
    let (np, nq) = (source.len(), target.len());
    let n = np * nq;
    if n > DIAGRAM_MAX_CELLS {
        return Err(Error::SizeLimit(format!("{n} cells; the diagram check tabulates 2^{n} subsets")));
    }
    let mut failures = Vec::new();
    let members = enumerate_profunctors(source, target, limit)?;
    let duals = enumerate_profunctors(target, source, limit)?;
    let dual_idx: HashMap<Mask, usize> = duals.iter().enumerate().map(|(i, f)| (f.relation(), i)).collect();

    let mut duality_bijection = members.len() == duals.len();
    let mut boundary_swap = true;
    let dual_of: Vec<usize> = members
        .iter()
        .map(|f| {
            let d = f.dual();
            if d.dual() != *f {
                duality_bijection = false;
            }
            if d.graph() != f.ascent().swap() || d.ascent() != f.graph().swap() {
                boundary_swap = false;
                failures.push(format!("boundary swap fails at {}", describe(f)));
            }
            dual_idx[&d.relation()]
        })
        .collect();
    for (i, f) in members.iter().enumerate() {
        for (j, g) in members.iter().enumerate() {
            if f.leq(g)? && !duals[dual_of[j]].leq(&duals[dual_of[i]])? {
                duality_bijection = false;
            }
        }
    }
    let mut seen = vec![false; duals.len()];
    for &j in &dual_of {
        seen[j] = true;
    }
    duality_bijection &= seen.iter().all(|&b| b);
    if !duality_bijection {
        failures.push("D is not an order-reversing involution".into());
    }

    let cuts = enumerate_pro_cuts(source, target, limit)?;
    let full_n = full(n);
    let (mut graph_route, mut dual_cut_route) = (true, true);
    for pc in &cuts {
        let lam: Vec<Mask> = pc.filter().map(|f| f.ascent().mask).collect();
        let gam_swapped: Vec<Mask> = pc.ideal().map(|f| f.graph().swap().mask).collect();
        let u1 = upset_table(n, &lam);
        let expected: Vec<bool> = (0..1usize << n)
            .map(|y| !u1[(full_n & !swap_mask(y as Mask, np, nq)) as usize])
            .collect();
        let g = upset_table(n, &gam_swapped);
        // second route: dualise the cut, then take ascents
        let dual_cut = pc.dual()?;
        debug_assert_eq!(dual_cut.members.len(), duals.len());
        let lam_dual: Vec<Mask> = dual_cut.filter().map(|h| h.ascent().mask).collect();
        let u2 = upset_table(n, &lam_dual);
        if g != expected {
            graph_route = false;
            failures.push(format!("{}: graph up-set is not the Alexander dual", pc.spec));
        }
        if u2 != expected {
            dual_cut_route = false;
            failures.push(format!("{}: dual cut ascents differ from the Alexander dual", pc.spec));
        }
    }
    let holds = duality_bijection && boundary_swap && graph_route && dual_cut_route;
    Ok(DiagramReport {
        instance: instance_name(source, target),
        cuts_checked: cuts.len(),
        duality_bijection,
        boundary_swap,
        graph_route,
        dual_cut_route,
        failures,
        holds,
    })
}
