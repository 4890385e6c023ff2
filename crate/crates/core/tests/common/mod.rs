//! Brute-force oracles. Each one recomputes its answer from definitions without
//! calling the routine it checks.
#![allow(dead_code)]

use std::sync::Arc;

use profun_core::bits::Mask;
use profun_core::natpro::{NatPro, NatVal, Tail};
use profun_core::poset::Poset;

pub fn leq(p: &Poset, i: usize, j: usize) -> bool {
    p.leq(i, j)
}

/// Every subset of `P` closed downwards, by scanning all `2^|P|` masks.
pub fn downsets(p: &Poset) -> Vec<Mask> {
    let n = p.len();
    (0..1u64 << n)
        .filter(|&m| {
            (0..n).all(|j| m >> j & 1 == 0 || (0..n).all(|i| !leq(p, i, j) || m >> i & 1 == 1))
        })
        .collect()
}

/// All isotone maps `P → D(Q)`, as value vectors, by taking every tuple of down-sets.
pub fn profunctors(p: &Poset, q: &Poset) -> Vec<Vec<Mask>> {
    let ds = downsets(q);
    let mut out = vec![vec![]];
    for _ in 0..p.len() {
        out = out.into_iter().flat_map(|v| ds.iter().map(move |&d| [v.clone(), vec![d]].concat())).collect();
    }
    out.retain(|v| (0..p.len()).all(|i| (0..p.len()).all(|j| !leq(p, i, j) || v[i] & !v[j] == 0)));
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `Λf`: `q ∈ f(p)` but `q ∉ f(p')` for every `p' < p`; bit `q * |P| + p`.
pub fn ascent(p: &Poset, vals: &[Mask]) -> Mask {
    let np = p.len();
    let mut m = 0;
    for (pi, &v) in vals.iter().enumerate() {
        for q in 0..64 {
            if v >> q & 1 == 1 && (0..np).all(|pj| pj == pi || !leq(p, pj, pi) || vals[pj] >> q & 1 == 0) {
                m |= 1 << (q * np + pi);
            }
        }
    }
    m
}

/// `Γf`: `q ∉ f(p)` with everything strictly below `q` inside `f(p)`.
pub fn graph(p: &Poset, q: &Poset, vals: &[Mask]) -> Mask {
    let np = p.len();
    let mut m = 0;
    for (pi, &v) in vals.iter().enumerate() {
        for qi in 0..q.len() {
            if v >> qi & 1 == 0 && (0..q.len()).all(|qj| qj == qi || !leq(q, qj, qi) || v >> qj & 1 == 1) {
                m |= 1 << (qi * np + pi);
            }
        }
    }
    m
}

fn minimalize(mut v: Vec<Mask>) -> Vec<Mask> {
    v.sort();
    v.dedup();
    let all = v.clone();
    v.retain(|&m| !all.iter().any(|&o| o != m && o & !m == 0));
    v
}

/// Minimal subsets of `n` variables meeting every generator, by scanning all `2^n` subsets.
pub fn alexander_dual(n: usize, gens: &[Mask]) -> Vec<Mask> {
    minimalize((0..1u64 << n).filter(|&s| gens.iter().all(|&g| g & s != 0)).collect())
}

pub fn minimal(v: Vec<Mask>) -> Vec<Mask> {
    minimalize(v)
}

/// A poset on `n` elements whose order is generated by the given pairs `i < j` with `i < j`.
pub fn poset_from_edges(n: usize, edges: &[(usize, usize)]) -> Arc<Poset> {
    let labels = (0..n).map(|i| format!("e{i}")).collect();
    let covers: Vec<_> = edges.iter().copied().filter(|&(a, b)| a < b && b < n).collect();
    Arc::new(Poset::from_covers(labels, &covers).unwrap())
}

pub const HORIZON: u64 = 120;

fn value(v: NatVal) -> u64 {
    match v {
        NatVal::Fin(x) => x,
        NatVal::Inf => u64::MAX,
    }
}

/// `min{p ≤ HORIZON : f(p) > q}`, `inf` when none is found.
pub fn nat_dual_at(f: &NatPro, q: u64) -> NatVal {
    (1..=HORIZON).find(|&p| value(f.eval(p)) > q).map_or(NatVal::Inf, NatVal::Fin)
}

pub fn nat_leq(f: &NatPro, g: &NatPro) -> bool {
    (1..=HORIZON).all(|n| value(f.eval(n)) <= value(g.eval(n)))
}

/// A valid map built from the proptest inputs, or `None` if they do not describe one.
pub fn natpro(mut prefix: Vec<u64>, tail: u8, c: i64, infs: usize) -> Option<NatPro> {
    prefix.sort();
    let t = match tail % 3 {
        0 => Tail::Const((prefix.last().copied().unwrap_or(1) as i64 + c.abs()) as u64),
        1 => Tail::Infinity,
        _ => Tail::Shift(c),
    };
    let mut vals: Vec<NatVal> = prefix.into_iter().map(NatVal::Fin).collect();
    if t == Tail::Infinity {
        vals.extend(std::iter::repeat(NatVal::Inf).take(infs));
    }
    NatPro::new(vals, t).ok()
}
