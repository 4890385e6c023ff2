//! Browser bindings. Every export takes plain values and returns a JSON string;
//! failures come back as `{"error": "..."}`.

use std::sync::Arc;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use profun_core::cut_engine::{classify_subset, describe, materialize, Classification, CutSpec};
use profun_core::formats::PosetEnv;
use profun_core::ideals::{isotonian_ideal, verify_letterplace_duality, ExportFormat};
use profun_core::natpro::{parse_literal, NatClass};
use profun_core::profunctor::BoundarySet;

const LIMIT: usize = 1 << 16;
const MAX_WINDOW: u64 = 24;

fn finish(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// A NatPro literal with its dual and both boundaries inside a `qmax × pmax` window.
pub fn snake(literal: &str, qmax: u64, pmax: u64) -> Result<Value, String> {
    if qmax == 0 || pmax == 0 || qmax > MAX_WINDOW || pmax > MAX_WINDOW {
        return Err(format!("window sides must lie in 1..={MAX_WINDOW}"));
    }
    let f = parse_literal(literal.trim(), 1, 1).map_err(|e| e.to_string())?;
    let d = f.dual();
    let w = f.window(qmax, pmax);
    let dw = d.window(pmax, qmax);
    let class = |c: NatClass| format!("{c:?}");
    Ok(json!({
        "map": f,
        "class": class(f.class()),
        "dual": d,
        "dual_class": class(d.class()),
        "values": (1..=pmax).map(|p| f.eval(p).to_string()).collect::<Vec<_>>(),
        "ascent": w.ascent,
        "graph": w.graph,
        "dual_ascent": dw.ascent,
        "dual_graph": dw.graph,
    }))
}

/// Which side of the cut `cut` of `Pro(P, Q)` the set of cells `(q, p)` falls on.
/// Cells are 0-based indices `q * |P| + p`.
pub fn classify(p_spec: &str, q_spec: &str, cut: &str, cells: &[u32]) -> Result<Value, String> {
    let env = PosetEnv::new();
    let p = env.resolve(p_spec).map_err(|e| e.to_string())?;
    let q = env.resolve(q_spec).map_err(|e| e.to_string())?;
    if p.len() * q.len() > 36 {
        return Err("keep |P| * |Q| at most 36".into());
    }
    let spec = CutSpec::parse(cut).map_err(|e| e.to_string())?;
    let pc = materialize(&p, &q, &spec).map_err(|e| e.to_string())?;
    let mut s = BoundarySet::empty(q.len(), p.len());
    for &c in cells {
        let c = c as usize;
        if c >= p.len() * q.len() {
            return Err(format!("cell {c} lies outside the grid"));
        }
        s.insert(c / p.len(), c % p.len());
    }
    let (verdict, witness, boundary) = match classify_subset(&pc, &s).map_err(|e| e.to_string())? {
        Classification::ContainsAscent(f) => ("contains-ascent", describe(&f), f.ascent().pairs()),
        Classification::ComplementContainsGraph(f) => ("avoids-graph", describe(&f), f.graph().pairs()),
        Classification::Both(..) => ("both", String::new(), vec![]),
        Classification::Neither => ("neither", String::new(), vec![]),
    };
    Ok(json!({
        "p": p.labels(),
        "q": q.labels(),
        "verdict": verdict,
        "witness": witness,
        "witness_cells": boundary.iter().map(|&(q, pp)| q * p.len() + pp).collect::<Vec<_>>(),
    }))
}

/// The letterplace ideal `L([n], P)`, the co-letterplace ideal `L(P, [n])`, and whether they are dual.
pub fn letterplace(n: usize, p_spec: &str) -> Result<Value, String> {
    if n == 0 || n > 4 {
        return Err("n must lie in 1..=4".into());
    }
    let p = PosetEnv::new().resolve(p_spec).map_err(|e| e.to_string())?;
    let chain = Arc::new(profun_core::poset::Poset::chain(n));
    let lp = isotonian_ideal(&chain, &p, LIMIT).map_err(|e| e.to_string())?;
    let colp = isotonian_ideal(&p, &chain, LIMIT).map_err(|e| e.to_string())?;
    let r = verify_letterplace_duality(n, &p, LIMIT).map_err(|e| e.to_string())?;
    Ok(json!({
        "letterplace": lp.export(ExportFormat::Cas),
        "co_letterplace": colp.export(ExportFormat::Cas),
        "dual": r.dual,
        "forest": p.is_forest(),
        "poset_side_route": r.poset_side_route,
    }))
}

#[wasm_bindgen]
pub fn nat_snake(literal: &str, qmax: u32, pmax: u32) -> String {
    finish(snake(literal, qmax as u64, pmax as u64))
}

#[wasm_bindgen]
pub fn classify_cells(p_spec: &str, q_spec: &str, cut: &str, cells: &[u32]) -> String {
    finish(classify(p_spec, q_spec, cut, cells))
}

#[wasm_bindgen]
pub fn letterplace_pair(n: u32, p_spec: &str) -> String {
    finish(letterplace(n as usize, p_spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snake_window() {
        let v = snake("[2,2,4,5,5|shift 1]", 6, 6).unwrap();
        assert_eq!(v["dual"], "[1,3,3,4,6|shift 0]");
        assert_eq!(v["graph"], json!([[2, 1], [2, 2], [4, 3], [5, 4], [5, 5]]));
        assert_eq!(v["values"][5], "7");
        assert!(snake("[1|inf]", 0, 3).is_err());
        assert!(snake("[3,1|inf]", 3, 3).is_err());
    }

    #[test]
    fn classify_grid() {
        // the whole grid contains every ascent
        let all: Vec<u32> = (0..15).collect();
        let v = classify("chain5", "chain3", "reaches-inf", &all).unwrap();
        assert_eq!(v["verdict"], "contains-ascent");
        let v = classify("chain5", "chain3", "reaches-inf", &[]).unwrap();
        assert_eq!(v["verdict"], "avoids-graph");
        assert!(classify("chain5", "chain3", "reaches-inf", &[99]).is_err());
        assert!(classify("chain9", "chain9", "reaches-inf", &[]).is_err());
    }

    #[test]
    fn letterplace_json() {
        let v = letterplace(2, "chain2").unwrap();
        assert_eq!(v["letterplace"], "monomialIdeal(x_(1,1)*x_(2,1), x_(1,1)*x_(2,2), x_(1,2)*x_(2,2))");
        assert_eq!(v["dual"], true);
        let e = nat_snake("[1,x|inf]", 3, 3);
        assert!(e.contains("error"));
    }
}
