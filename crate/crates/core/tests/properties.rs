mod common;

use std::sync::Arc;

use proptest::prelude::*;

use profun_core::bits::{full, Mask};
use profun_core::cut_engine::{classify_subset, materialize, verify_preserving_cut, Classification, CutSpec};
use profun_core::dlattice::{enumerate_downsets, Cut};
use profun_core::ideals::{MonomialIdeal, SfIdeal};
use profun_core::natcut::{NatCut, SearchBounds};
use profun_core::natpro::{NatClass, NatPro, NatVal};
use profun_core::poset::Poset;
use profun_core::profunctor::{enumerate_profunctors, BoundarySet, Profunctor};
use profun_core::sweep::SweepOptions;

fn poset_strategy(max: usize) -> impl Strategy<Value = Arc<Poset>> {
    (1..=max, prop::collection::vec((0..max, 0..max), 0..8))
        .prop_map(|(n, e)| common::poset_from_edges(n, &e))
}

fn natpro_strategy() -> impl Strategy<Value = NatPro> {
    (prop::collection::vec(1u64..=6, 0..=4), any::<u8>(), -2i64..=3, 0usize..=2)
        .prop_filter_map("invalid map", |(p, t, c, i)| common::natpro(p, t, c, i))
}

fn small_strategy() -> impl Strategy<Value = NatPro> {
    natpro_strategy().prop_filter("small", |f| f.class() == NatClass::Small)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn downsets_match_scan(p in poset_strategy(7)) {
        let mut got = enumerate_downsets(&p, 1 << 20).unwrap();
        got.sort();
        prop_assert_eq!(got, common::downsets(&p));
    }

    #[test]
    fn cut_dual_is_involution(p in poset_strategy(6), pick in any::<prop::sample::Index>()) {
        let ds = common::downsets(&p);
        let c = Cut::from_downset(p.clone(), ds[pick.index(ds.len())]).unwrap();
        let d = c.alexander_dual();
        prop_assert_eq!(d.down(), p.full() & !c.down());
        prop_assert_eq!(d.alexander_dual().down(), c.down());
    }

    #[test]
    fn profunctors_match_scan(p in poset_strategy(3), q in poset_strategy(3)) {
        let got: Vec<Vec<Mask>> = enumerate_profunctors(&p, &q, 1 << 16).unwrap().iter().map(|f| f.values().to_vec()).collect();
        let mut want = common::profunctors(&p, &q);
        let mut got = got;
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn boundaries_match_definitions(p in poset_strategy(4), q in poset_strategy(4), pick in any::<prop::sample::Index>()) {
        let all = common::profunctors(&p, &q);
        let vals = &all[pick.index(all.len())];
        let f = Profunctor::from_values(p.clone(), q.clone(), vals.clone()).unwrap();
        prop_assert_eq!(f.ascent().mask, common::ascent(&p, vals));
        prop_assert_eq!(f.graph().mask, common::graph(&p, &q, vals));
        // the dual's graph is the ascent read with swapped coordinates
        prop_assert_eq!(f.dual().graph(), f.ascent().swap());
        prop_assert_eq!(f.dual().dual().values().to_vec(), f.values().to_vec());
    }

    #[test]
    fn dual_reverses_order(p in poset_strategy(3), q in poset_strategy(3), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let all = enumerate_profunctors(&p, &q, 1 << 16).unwrap();
        let (f, g) = (&all[a.index(all.len())], &all[b.index(all.len())]);
        prop_assert_eq!(f.leq(g).unwrap(), g.dual().leq(&f.dual()).unwrap());
    }

    #[test]
    fn generated_cut_partitions_boolean_lattice(
        p in poset_strategy(3),
        q in poset_strategy(3),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 1..3),
        down in any::<bool>(),
    ) {
        let all = enumerate_profunctors(&p, &q, 1 << 16).unwrap();
        let gens: Vec<Profunctor> = picks.iter().map(|i| all[i.index(all.len())].clone()).collect();
        let spec = if down { CutSpec::GeneratedDown(gens) } else { CutSpec::GeneratedUp(gens) };
        let pc = materialize(&p, &q, &spec).unwrap();
        let r = verify_preserving_cut(&pc, &SweepOptions::default()).unwrap();
        prop_assert!(r.holds);
        prop_assert_eq!(r.ascent_side + r.graph_side, r.subsets_checked);
        // the oracle side: scan every member rather than the minimal boundary families
        let cells = p.len() * q.len();
        for s in 0..1u64 << cells {
            let a = pc.filter().any(|f| common::ascent(&p, f.values()) & !s == 0);
            let b = pc.ideal().any(|f| common::graph(&p, &q, f.values()) & s == 0);
            prop_assert!(a != b);
            let got = classify_subset(&pc, &BoundarySet { nq: q.len(), np: p.len(), mask: s }).unwrap();
            prop_assert_eq!(matches!(got, Classification::ContainsAscent(_)), a);
        }
    }

    #[test]
    fn classification_is_antitone(p in poset_strategy(3), q in poset_strategy(2), s in any::<u64>(), extra in any::<u64>()) {
        let pc = materialize(&p, &q, &CutSpec::ReachesInf).unwrap();
        let m = full(p.len() * q.len());
        let small = BoundarySet { nq: q.len(), np: p.len(), mask: s & m };
        let big = BoundarySet { mask: (s | extra) & m, ..small };
        let up = |c: Classification| matches!(c, Classification::ContainsAscent(_));
        prop_assert!(!up(classify_subset(&pc, &small).unwrap()) || up(classify_subset(&pc, &big).unwrap()));
    }

    #[test]
    fn alexander_dual_matches_scan(n in 1usize..=10, gens in prop::collection::vec(any::<u64>(), 0..6)) {
        let m = full(n);
        let gens: Vec<Mask> = gens.into_iter().map(|g| g & m).collect();
        let vars = (0..n).map(|i| format!("v{i}")).collect();
        let i = SfIdeal::new(vars, gens.clone()).unwrap();
        let d = i.alexander_dual();
        let mut want = common::alexander_dual(n, &gens);
        want.sort_by_key(|g| (g.count_ones(), g.reverse_bits()));
        let mut got = d.generators().to_vec();
        got.sort_by_key(|g| (g.count_ones(), g.reverse_bits()));
        prop_assert_eq!(got, want);
        if !i.is_zero() && !i.is_unit() {
            prop_assert_eq!(d.alexander_dual().generators().to_vec(), i.generators().to_vec());
        }
    }

    #[test]
    fn nat_dual_is_involution_and_pointwise(f in natpro_strategy()) {
        let d = f.dual();
        prop_assert_eq!(d.dual(), f.clone());
        for q in 1..=100 {
            prop_assert_eq!(d.eval(q), common::nat_dual_at(&f, q), "q = {}", q);
        }
        let swapped = match f.class() {
            NatClass::Large => NatClass::Small,
            NatClass::Small => NatClass::Large,
            NatClass::Unbounded => NatClass::Unbounded,
        };
        prop_assert_eq!(d.class(), swapped);
        prop_assert_ne!(d, f);
    }

    #[test]
    fn nat_order_and_lattice(f in natpro_strategy(), g in natpro_strategy()) {
        prop_assert_eq!(f.leq(&g), common::nat_leq(&f, &g));
        prop_assert_eq!(f.leq(&g), g.dual().leq(&f.dual()));
        let (j, m) = (f.join(&g), f.meet(&g));
        for n in 1..=common::HORIZON {
            prop_assert_eq!(j.eval(n), f.eval(n).max(g.eval(n)));
            prop_assert_eq!(m.eval(n), f.eval(n).min(g.eval(n)));
        }
        let s = f.to_string();
        prop_assert_eq!(s.parse::<NatPro>().unwrap(), f);
    }

    #[test]
    fn nat_window_matches_finite_profunctor(f in natpro_strategy(), qmax in 1u64..=8, pmax in 1u64..=8) {
        let (p, q) = (Arc::new(Poset::chain(pmax as usize)), Arc::new(Poset::chain(qmax as usize)));
        let vals: Vec<usize> = (1..=pmax)
            .map(|i| match f.eval(i) {
                NatVal::Fin(v) => v.min(qmax + 1) as usize,
                NatVal::Inf => qmax as usize + 1,
            })
            .collect();
        let g = Profunctor::from_chain_values(p, q, &vals).unwrap();
        let shift = |v: Vec<(usize, usize)>| -> Vec<(u64, u64)> {
            let mut v: Vec<(u64, u64)> = v.into_iter().map(|(a, b)| (a as u64 + 1, b as u64 + 1)).collect();
            v.sort();
            v
        };
        let w = f.window(qmax, pmax);
        prop_assert_eq!(w.ascent, shift(g.ascent().pairs()));
        prop_assert_eq!(w.graph, shift(g.graph().pairs()));
    }

    #[test]
    fn small_ascent_is_dual_graph(f in small_strategy()) {
        let mut a: Vec<(u64, u64)> = f.ascent().unwrap().into_iter().map(|(q, p)| (p, q)).collect();
        a.sort();
        prop_assert_eq!(a, f.dual().graph().unwrap());
        prop_assert_eq!(f.lambda_exponents().unwrap(), f.dual().gamma_exponents().unwrap());
        let t = f.tame_embed().unwrap();
        prop_assert_eq!(t.class(), NatClass::Unbounded);
    }

    #[test]
    fn borel_closure_is_least(gens in prop::collection::vec(prop::collection::vec(0u32..3, 4), 1..4)) {
        let i = MonomialIdeal::new(4, gens.clone()).unwrap();
        let b = i.borel_closure();
        prop_assert!(b.is_strongly_stable());
        prop_assert!(gens.iter().all(|g| b.contains(g)));
        prop_assert_eq!(b.borel_closure(), b.clone());
        prop_assert_eq!(i.is_strongly_stable(), i == b);
    }

    #[test]
    fn clopen_cuts_have_no_gap(seed in any::<u64>()) {
        let cut = NatCut::random_clopen(seed, 3, 3, 4).unwrap();
        let r = cut.gap_search(&SearchBounds::new(3, 6));
        prop_assert_eq!(r.overlap, 0);
        prop_assert_eq!(r.small + r.large + r.unbounded, 0);
        let w = cut.windowed_check(3, 3, &SweepOptions::default()).unwrap();
        prop_assert!(w.holds, "{:?}", w.violations);
    }
}

#[test]
fn profunctor_count_closed_form() {
    for m in 0..=4 {
        for n in 0..=4 {
            let (p, q) = (Arc::new(Poset::chain(m)), Arc::new(Poset::chain(n)));
            let got = enumerate_profunctors(&p, &q, 1 << 16).unwrap().len() as u64;
            assert_eq!(got, common::binomial((m + n) as u64, m as u64), "m={m} n={n}");
            assert_eq!(got, common::profunctors(&p, &q).len() as u64);
        }
    }
}

#[test]
fn no_self_dual_exhaustive() {
    use profun_core::natcut::{candidates, SearchBounds};
    let all: Vec<NatPro> = candidates(&SearchBounds::new(4, 5)).collect();
    let distinct: std::collections::HashSet<&NatPro> = all.iter().collect();
    assert_eq!(distinct.len(), all.len(), "candidates are canonical and distinct");
    assert!(all.len() > 500);
    for f in &all {
        assert_ne!(&f.dual(), f, "{f}");
    }
}
