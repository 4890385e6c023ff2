//! Cuts of `Pro(ℕ, ℕ)` given by finitely many generators: a down-set generated by
//! large maps and an up-set generated by small maps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::{bit, minimal_masks, Mask};
use crate::error::{Error, Result};
use crate::ideals::MonomialIdeal;
use crate::natpro::{NatClass, NatPro, NatVal, Tail};
use crate::sweep::{sweep, Mode, Probe, SweepOptions};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NatCut {
    ideal: Vec<NatPro>,
    filter: Vec<NatPro>,
}

impl NatCut {
    /// Down-set generators must be large and up-set generators small.
    pub fn new(ideal: Vec<NatPro>, filter: Vec<NatPro>) -> Result<NatCut> {
        if let Some(f) = ideal.iter().find(|f| f.class() != NatClass::Large) {
            return Err(Error::MalformedGenerators(format!("down-set generator {f} is not large")));
        }
        if let Some(g) = filter.iter().find(|g| g.class() != NatClass::Small) {
            return Err(Error::MalformedGenerators(format!("up-set generator {g} is not small")));
        }
        Ok(NatCut { ideal, filter })
    }

    pub fn ideal(&self) -> &[NatPro] {
        &self.ideal
    }

    pub fn filter(&self) -> &[NatPro] {
        &self.filter
    }

    pub fn in_down(&self, h: &NatPro) -> bool {
        self.ideal.iter().any(|f| h.leq(f))
    }

    pub fn in_up(&self, h: &NatPro) -> bool {
        self.filter.iter().any(|g| g.leq(h))
    }

    /// Generators `h^r` (`1 ≤ r ≤ rmax`) and `h_r` (`0 ≤ r ≤ rmax`) squeezing the identity:
    /// `h^r` is `i` up to `r`, then `r`, then `inf`; `h_r` is `i` up to `r`, then `r + 2`.
    pub fn identity_gap(rmax: u64) -> NatCut {
        let ideal = (1..=rmax)
            .map(|r| {
                let mut p: Vec<NatVal> = (1..=r).map(NatVal::Fin).collect();
                p.push(NatVal::Fin(r));
                NatPro::new(p, Tail::Infinity).unwrap()
            })
            .collect();
        let filter = (0..=rmax)
            .map(|r| NatPro::from_values(&(1..=r).collect::<Vec<_>>(), Tail::Const(r + 2)).unwrap())
            .collect();
        NatCut { ideal, filter }
    }

    /// Down-set generators `f_r = [r, ..., r | inf]` (`r` copies), `1 ≤ r ≤ rmax`, and no up-set generators.
    pub fn tower(rmax: u64) -> NatCut {
        let ideal = (1..=rmax).map(|r| NatPro::from_values(&vec![r; r as usize], Tail::Infinity).unwrap()).collect();
        NatCut { ideal, filter: vec![] }
    }

    /// Up-set generators `g_r`: `1` below `r`, `2` from `r` on, `1 ≤ r ≤ rmax`; no down-set generators.
    pub fn steps(rmax: u64) -> NatCut {
        let filter = (1..=rmax).map(|r| NatPro::from_values(&vec![1; r as usize - 1], Tail::Const(2)).unwrap()).collect();
        NatCut { ideal: vec![], filter }
    }

    /// A random finitely generated down-set together with the generators of its complement,
    /// so the gap is empty.
    pub fn random_clopen(seed: u64, max_gens: usize, max_len: usize, max_value: u64) -> Result<NatCut> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let count = rng.gen_range(1..=max_gens);
        let mut ideal = Vec::new();
        for _ in 0..count {
            let len = rng.gen_range(1..=max_len);
            let mut v: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=max_value)).collect();
            v.sort();
            ideal.push(NatPro::from_values(&v, Tail::Infinity)?);
        }
        let filter = complement_generators(&ideal, 1 << 20)?;
        NatCut::new(ideal, filter)
    }

    pub fn gap_search(&self, b: &SearchBounds) -> GapReport {
        let mut report = GapReport::default();
        for h in candidates(b) {
            report.candidates_checked += 1;
            let (d, u) = (self.in_down(&h), self.in_up(&h));
            if d && u {
                report.overlap += 1;
                continue;
            }
            if d || u {
                continue;
            }
            match h.class() {
                NatClass::Small => report.small += 1,
                NatClass::Large => report.large += 1,
                NatClass::Unbounded => report.unbounded += 1,
            }
            if report.witnesses.len() < GAP_WITNESS_CAP {
                report.witnesses.push(GapWitness { class: h.class(), map: h });
            }
        }
        report.verdict = if report.overlap > 0 {
            GapVerdict::NotACut
        } else if report.small == 0 && report.large == 0 {
            GapVerdict::DedekindCut
        } else {
            GapVerdict::NotRegular
        };
        report
    }

    /// Checks both finite-type conditions of the boundary cut for every subset of `[1, qmax] × [1, pmax]`.
    ///
    /// The conditions quantify over all of `𝓘` and `𝓕`. Only the trace of a boundary set on the
    /// box matters, and each trace is tested against the generators through its extremal lift.
    pub fn windowed_check(&self, qmax: u64, pmax: u64, opts: &SweepOptions) -> Result<WindowReport> {
        if qmax == 0 || pmax == 0 {
            return Err(Error::BoxTooSmall(format!("{qmax}x{pmax} has no cells")));
        }
        let cells = (qmax * pmax) as usize;
        if cells > 64 {
            return Err(Error::TooLarge(cells));
        }
        let big = 2 + qmax + pmax + self.filter.iter().filter_map(|g| g.sup()).max().unwrap_or(0);
        let horizon = pmax.max(self.ideal.iter().map(|f| f.prefix().len() as u64).max().unwrap_or(0)) + 1;
        let cell = |q: u64, p: u64| bit(((q - 1) * pmax + (p - 1)) as usize);

        let (mut lam_full, mut lam_trace, mut gam_full, mut gam_trace) = (vec![], vec![], vec![], vec![]);
        let mut traces = 0;
        for u in monotone_sequences(pmax as usize, qmax + 1) {
            traces += 1;
            let (mut asc, mut gra) = (0, 0);
            let mut prev = 1;
            for (i, &v) in u.iter().enumerate() {
                let p = i as u64 + 1;
                for q in prev..v.min(qmax + 1) {
                    asc |= cell(q, p);
                }
                if v <= qmax {
                    gra |= cell(v, p);
                }
                prev = v;
            }
            let last = *u.last().unwrap();
            let exact_small = NatPro::from_values(&u, Tail::Const(last))?;
            if self.in_up(&exact_small) {
                lam_full.push(asc);
            }
            let lifted: Vec<u64> = u.iter().map(|&v| if v <= qmax { v } else { big }).collect();
            if self.in_up(&NatPro::from_values(&lifted, Tail::Const(big))?) {
                lam_trace.push(asc);
            }
            let exact_large: Vec<NatVal> = u.iter().map(|&v| if v <= qmax { NatVal::Fin(v) } else { NatVal::Inf }).collect();
            if self.in_down(&NatPro::new(exact_large, Tail::Infinity)?) {
                gam_full.push(gra);
            }
            let mut low: Vec<u64> = u.clone();
            low.resize(horizon as usize, last);
            if self.in_down(&NatPro::from_values(&low, Tail::Infinity)?) {
                gam_trace.push(gra);
            }
        }
        let (lam_full, lam_trace) = (minimal_masks(lam_full), minimal_masks(lam_trace));
        let (gam_full, gam_trace) = (minimal_masks(gam_full), minimal_masks(gam_trace));

        let (mode, t) = sweep(cells, opts, |s| {
            // S read as the finite down-set side J: S ⊇ Λg  iff  S meets every Γf
            let a = lam_full.iter().any(|&m| m & !s == 0);
            let b = gam_trace.iter().any(|&m| m & s == 0);
            // S read as the finite up-set side F: S ⊇ Γf  iff  S meets every Λg
            let c = gam_full.iter().any(|&m| m & !s == 0);
            let d = lam_trace.iter().any(|&m| m & s == 0);
            let violation = match (a, b, c, d) {
                (true, true, _, _) => Some("ascent inside and a graph avoids it"),
                (false, false, _, _) => Some("no ascent inside and no graph avoids it"),
                (_, _, true, true) => Some("graph inside and an ascent avoids it"),
                (_, _, false, false) => Some("no graph inside and no ascent avoids it"),
                _ => None,
            };
            Probe { hits: [a, c, false, false], violation }
        })?;
        let pairs = |m: Mask| {
            crate::bits::ones(m).map(|i| (i as u64 / pmax + 1, i as u64 % pmax + 1)).collect::<Vec<_>>()
        };
        Ok(WindowReport {
            box_q: qmax,
            box_p: pmax,
            traces,
            mode,
            subsets_checked: t.checked,
            ascent_side: t.hits[0],
            graph_side: t.hits[1],
            violation_count: t.violation_count,
            violations: t.violations.iter().map(|&(m, k)| WindowViolation { subset: pairs(m), kind: k }).collect(),
            holds: t.violation_count == 0,
        })
    }

    /// The monomial ideals `I_λ` (from the up-set) and `I_γ` (from the down-set) in `x_1..x_trunc`.
    pub fn stable_pair(&self, trunc: usize) -> Result<StablePair> {
        for g in &self.filter {
            if g.lambda_exponents()?.len() > trunc {
                return Err(Error::TruncationTooSmall(format!("λ({g}) needs more than {trunc} variables")));
            }
        }
        for f in &self.ideal {
            if f.gamma_exponents()?.len() > trunc {
                return Err(Error::TruncationTooSmall(format!("γ({f}) needs more than {trunc} variables")));
            }
        }
        let pad = |mut e: Vec<u32>| {
            e.resize(trunc, 0);
            e
        };
        // every monomial of the right degree and support arises from a map within these bounds
        let degree = self.filter.iter().filter_map(|g| g.sup()).max().unwrap_or(1) - 1;
        let mut lam = Vec::new();
        if !self.filter.is_empty() {
            for u in monotone_sequences(trunc, degree + 1) {
                let last = u.last().copied().unwrap_or(1);
                let g = NatPro::from_values(&u, Tail::Const(last))?;
                if self.in_up(&g) {
                    lam.push(pad(g.lambda_exponents()?));
                }
            }
        }
        let positions = self.ideal.iter().map(|f| f.prefix().len()).max().unwrap_or(0);
        let top = self.ideal.iter().flat_map(|f| f.prefix().iter().filter_map(|v| v.fin())).max().unwrap_or(0);
        let mut gam = Vec::new();
        if !self.ideal.is_empty() {
            for u in monotone_sequences(positions, top + 1) {
                let vals = u.iter().map(|&v| if v > top { NatVal::Inf } else { NatVal::Fin(v) }).collect();
                let f = NatPro::new(vals, Tail::Infinity)?;
                if self.in_down(&f) {
                    gam.push(pad(f.gamma_exponents()?));
                }
            }
        }
        let i_lambda = MonomialIdeal::new(trunc, lam)?;
        let i_gamma = MonomialIdeal::new(trunc, gam)?;
        let lam_gens = self.filter.iter().map(|g| g.lambda_exponents().map(pad)).collect::<Result<Vec<_>>>()?;
        let gam_gens = self.ideal.iter().map(|f| f.gamma_exponents().map(pad)).collect::<Result<Vec<_>>>()?;
        Ok(StablePair {
            trunc,
            lambda_strongly_stable: i_lambda.is_strongly_stable(),
            gamma_strongly_stable: i_gamma.is_strongly_stable(),
            lambda_borel_agrees: MonomialIdeal::new(trunc, lam_gens)?.borel_closure() == i_lambda,
            gamma_borel_agrees: MonomialIdeal::new(trunc, gam_gens)?.borel_closure() == i_gamma,
            i_lambda,
            i_gamma,
        })
    }
}

/// Weakly increasing sequences of length `len` over `1..=max`, in lexicographic order.
pub fn monotone_sequences(len: usize, max: u64) -> impl Iterator<Item = Vec<u64>> {
    let mut cur: Option<Vec<u64>> = if max == 0 && len > 0 { None } else { Some(vec![1; len]) };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let next = {
            let mut v = out.clone();
            match (0..len).rev().find(|&i| v[i] < max) {
                Some(i) => {
                    let x = v[i] + 1;
                    for y in v[i..].iter_mut() {
                        *y = x;
                    }
                    Some(v)
                }
                None => None,
            }
        };
        cur = next;
        Some(out)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchBounds {
    pub max_prefix_len: usize,
    pub max_value: u64,
    pub shift_min: i64,
    pub shift_max: i64,
}

impl SearchBounds {
    pub fn new(max_prefix_len: usize, max_value: u64) -> SearchBounds {
        SearchBounds { max_prefix_len, max_value, shift_min: -2, shift_max: 2 }
    }
}

/// Canonical maps with a finite prefix of length at most `max_prefix_len`, values at most `max_value`,
/// and any tail within the bounds.
pub fn candidates(b: &SearchBounds) -> impl Iterator<Item = NatPro> + '_ {
    (0..=b.max_prefix_len).flat_map(move |k| {
        monotone_sequences(k, b.max_value).flat_map(move |u| {
            let last = u.last().copied().unwrap_or(1);
            let mut tails: Vec<Tail> = (last..=b.max_value).map(Tail::Const).collect();
            tails.push(Tail::Infinity);
            tails.extend((b.shift_min..=b.shift_max).map(Tail::Shift));
            tails.into_iter().filter_map(move |t| {
                let h = NatPro::from_values(&u, t).ok()?;
                (h.prefix().len() == k).then_some(h)
            })
        })
    })
}

const GAP_WITNESS_CAP: usize = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum GapVerdict {
    /// No small or large map lies in the gap.
    #[default]
    DedekindCut,
    /// A small or large map lies in the gap.
    NotRegular,
    /// Some candidate lies in both sides.
    NotACut,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapWitness {
    pub map: NatPro,
    pub class: NatClass,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GapReport {
    pub candidates_checked: u64,
    pub small: u64,
    pub large: u64,
    pub unbounded: u64,
    pub overlap: u64,
    pub witnesses: Vec<GapWitness>,
    pub verdict: GapVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClopenReport {
    /// The generators with the ones below another generator removed.
    pub antichain: Vec<NatPro>,
    /// Small generators of the complementary up-set.
    pub complement: Vec<NatPro>,
}

/// A finitely generated down-set of large maps is the finite union of the intervals below its
/// generators, and its complement is again finitely generated.
pub fn clopen_check(gens: &[NatPro], limit: usize) -> Result<ClopenReport> {
    if let Some(f) = gens.iter().find(|f| f.class() != NatClass::Large) {
        return Err(Error::MalformedGenerators(format!("{f} is not large")));
    }
    let mut antichain: Vec<NatPro> = Vec::new();
    for (i, f) in gens.iter().enumerate() {
        let dominated = gens.iter().enumerate().any(|(j, g)| j != i && f.leq(g) && (!g.leq(f) || j < i));
        if !dominated {
            antichain.push(f.clone());
        }
    }
    Ok(ClopenReport { complement: complement_generators(&antichain, limit)?, antichain })
}

/// Generators of the complement of the down-set generated by large maps.
///
/// `h` escapes `↓f` exactly when `h(p) > f(p)` at some finite `f(p)`, i.e. when `h` lies above the
/// map that is `1` before `p` and `f(p) + 1` from `p` on.
pub fn complement_generators(ideal: &[NatPro], limit: usize) -> Result<Vec<NatPro>> {
    let mut acc = vec![NatPro::zero()];
    for f in ideal {
        let opts: Vec<NatPro> = f
            .graph()?
            .into_iter()
            .map(|(x, p)| NatPro::from_values(&vec![1; p as usize - 1], Tail::Const(x + 1)))
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for a in &acc {
            for g in &opts {
                next.push(a.join(g));
                if next.len() > limit {
                    return Err(Error::SizeLimit(format!("more than {limit} complement generators")));
                }
            }
        }
        acc = minimal_maps(next);
    }
    Ok(acc)
}

fn minimal_maps(mut v: Vec<NatPro>) -> Vec<NatPro> {
    v.sort_by_key(|h| (h.sup(), h.prefix().len()));
    v.dedup();
    let mut out: Vec<NatPro> = Vec::new();
    for h in v {
        if !out.iter().any(|k| k.leq(&h)) {
            out.retain(|k| !h.leq(k));
            out.push(h);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowViolation {
    pub subset: Vec<(u64, u64)>,
    pub kind: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowReport {
    pub box_q: u64,
    pub box_p: u64,
    /// Number of restricted maps examined in the box.
    pub traces: u64,
    pub mode: Mode,
    pub subsets_checked: u64,
    pub ascent_side: u64,
    pub graph_side: u64,
    pub violation_count: u64,
    pub violations: Vec<WindowViolation>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StablePair {
    pub trunc: usize,
    pub i_lambda: MonomialIdeal,
    pub i_gamma: MonomialIdeal,
    pub lambda_strongly_stable: bool,
    pub gamma_strongly_stable: bool,
    /// `I_λ` equals the strongly stable closure of the generators' monomials.
    pub lambda_borel_agrees: bool,
    pub gamma_borel_agrees: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> NatPro {
        s.parse().unwrap()
    }

    #[test]
    fn families_have_expected_members() {
        let c = NatCut::identity_gap(2);
        assert_eq!(c.ideal(), &[n("[1,1|inf]"), n("[1,2,2|inf]")]);
        assert_eq!(c.filter(), &[n("[|const 2]"), n("[1|const 3]"), n("[1,2|const 4]")]);
        assert_eq!(NatCut::tower(2).ideal(), &[n("[1|inf]"), n("[2,2|inf]")]);
        assert_eq!(NatCut::steps(2).filter(), &[n("[|const 2]"), n("[1|const 2]")]);
    }

    #[test]
    fn malformed_generators() {
        let e = NatCut::new(vec![n("[|const 2]")], vec![]).unwrap_err();
        assert!(matches!(e, Error::MalformedGenerators(_)));
        let e = NatCut::new(vec![], vec![NatPro::identity()]).unwrap_err();
        assert!(matches!(e, Error::MalformedGenerators(_)));
    }

    #[test]
    fn monotone_sequence_counts() {
        assert_eq!(monotone_sequences(3, 3).count(), 10);
        assert_eq!(monotone_sequences(0, 5).count(), 1);
        assert_eq!(monotone_sequences(2, 0).count(), 0);
        let v: Vec<_> = monotone_sequences(2, 2).collect();
        assert_eq!(v, vec![vec![1, 1], vec![1, 2], vec![2, 2]]);
    }

    #[test]
    fn tower_gap_contains_top() {
        let r = NatCut::tower(4).gap_search(&SearchBounds::new(3, 5));
        assert_eq!(r.verdict, GapVerdict::NotRegular);
        assert!(r.witnesses.iter().any(|w| w.map == NatPro::one()));
        let r = NatCut::steps(4).gap_search(&SearchBounds::new(3, 5));
        assert!(r.witnesses.iter().any(|w| w.map == NatPro::zero()));
    }

    #[test]
    fn clopen_of_tower_truncation() {
        for r in 1..=5 {
            let c = clopen_check(NatCut::tower(r).ideal(), 1 << 16).unwrap();
            assert_eq!(c.antichain.len() as u64, r);
        }
        let c = clopen_check(&[n("[1,3|inf]"), n("[1,2|inf]")], 100).unwrap();
        assert_eq!(c.antichain, vec![n("[1,3|inf]")]);
        // escaping [1,3|inf] means exceeding 1 at position 1 or 3 at position 2
        assert_eq!(c.complement, vec![n("[|const 2]"), n("[1|const 4]")]);
    }

    #[test]
    fn finitely_generated_cut_has_empty_gap() {
        let cut = NatCut::new(vec![n("[1,3|inf]")], vec![n("[|const 2]"), n("[1|const 4]")]).unwrap();
        let r = cut.gap_search(&SearchBounds::new(4, 6));
        assert_eq!(r.verdict, GapVerdict::DedekindCut);
        assert_eq!(r.small + r.large + r.unbounded, 0);
    }

    #[test]
    fn stable_pair_small_case() {
        let cut = NatCut::new(vec![n("[1,3|inf]")], vec![n("[|const 2]"), n("[1|const 4]")]).unwrap();
        let sp = cut.stable_pair(4).unwrap();
        assert!(sp.lambda_strongly_stable && sp.gamma_strongly_stable);
        assert!(sp.lambda_borel_agrees && sp.gamma_borel_agrees);
        // γ([1,3|inf]) = x_1 x_3
        assert_eq!(sp.i_gamma.export_cas(), "monomialIdeal(x_1^2, x_1*x_2, x_1*x_3)");
        let e = cut.stable_pair(2).unwrap_err();
        assert!(matches!(e, Error::TruncationTooSmall(_)));
    }

    #[test]
    fn windowed_small_box() {
        let cut = NatCut::new(vec![n("[1,3|inf]")], vec![n("[|const 2]"), n("[1|const 4]")]).unwrap();
        let r = cut.windowed_check(3, 3, &SweepOptions::default()).unwrap();
        assert!(r.holds, "{:?}", r.violations);
        assert_eq!(r.subsets_checked, 512);
        assert!(matches!(cut.windowed_check(0, 3, &SweepOptions::default()), Err(Error::BoxTooSmall(_))));
    }

    #[test]
    fn windowed_catches_missing_generator() {
        // [1|const 4] is neither below [1,3|inf] nor above [|const 2]
        let cut = NatCut::new(vec![n("[1,3|inf]")], vec![n("[|const 2]")]).unwrap();
        let r = cut.windowed_check(3, 3, &SweepOptions::default()).unwrap();
        assert!(!r.holds);
        assert!(r.violations.iter().any(|v| v.kind.starts_with("no ")));
        let sampled = cut.windowed_check(5, 5, &SweepOptions { seed: Some(1), samples: 512, ..Default::default() });
        assert!(!sampled.unwrap().holds);
        assert!(matches!(cut.windowed_check(5, 5, &SweepOptions::default()), Err(Error::SeedRequired(_))));
    }
}
