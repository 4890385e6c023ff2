//! Line-oriented text formats. Blank lines and `#` comments are ignored; errors carry 1-based
//! line and column.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::bits::{bit, Mask};
use crate::cut_engine::CutSpec;
use crate::dlattice::Cut;
use crate::error::{parse_err, Error, Result};
use crate::ideals::SfIdeal;
use crate::natcut::NatCut;
use crate::natpro::parse_literal;
use crate::poset::Poset;
use crate::profunctor::Profunctor;

/// Named posets available to file headers and `product:`/`op:` specs.
#[derive(Clone, Debug, Default)]
pub struct PosetEnv {
    named: BTreeMap<String, Arc<Poset>>,
}

impl PosetEnv {
    pub fn new() -> PosetEnv {
        PosetEnv::default()
    }

    pub fn define(&mut self, name: &str, spec: &str) -> Result<Arc<Poset>> {
        let p = self.resolve(spec)?;
        self.named.insert(name.to_string(), p.clone());
        Ok(p)
    }

    pub fn insert(&mut self, name: &str, p: Arc<Poset>) {
        self.named.insert(name.to_string(), p);
    }

    pub fn get(&self, name: &str) -> Option<&Arc<Poset>> {
        self.named.get(name)
    }

    /// A defined name, or one of `chainN`, `discreteN`, `vee`, `wedge`, `diamond`,
    /// `file:PATH`, `product:A,B`, `op:A`.
    pub fn resolve(&self, spec: &str) -> Result<Arc<Poset>> {
        let spec = spec.trim();
        if let Some(p) = self.named.get(spec) {
            return Ok(p.clone());
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Invalid(format!("bad size in `{spec}`")));
        let p = if let Some(n) = spec.strip_prefix("chain") {
            Poset::chain(num(n)?)
        } else if let Some(n) = spec.strip_prefix("discrete") {
            Poset::discrete(num(n)?)
        } else if let Some(path) = spec.strip_prefix("file:") {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{path}: {e}")))?;
            parse_poset(&text)?.1
        } else if let Some(rest) = spec.strip_prefix("product:") {
            let (a, b) = rest.split_once(',').ok_or_else(|| Error::Invalid(format!("`{spec}` needs two factors")))?;
            Poset::product(&*self.resolve(a)?, &*self.resolve(b)?)?
        } else if let Some(a) = spec.strip_prefix("op:") {
            self.resolve(a)?.opposite()
        } else {
            match spec {
                "vee" => Poset::vee(),
                "wedge" => Poset::wedge(),
                "diamond" => Poset::diamond(),
                _ => return Err(Error::Invalid(format!("unknown poset `{spec}`"))),
            }
        };
        Ok(Arc::new(p))
    }
}

/// Non-blank lines with comments stripped, as (line number, text, column offset of text).
fn lines(text: &str) -> impl Iterator<Item = (usize, &str, usize)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap();
        let t = l.trim_start();
        let off = l.len() - t.len();
        let t = t.trim_end();
        (!t.is_empty()).then_some((i + 1, t, off + 1))
    })
}

/// Words of `s` with their columns, given that `s` starts at column `col`.
fn words(s: &str, col: usize) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices().chain(std::iter::once((s.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(b)) => {
                out.push((&s[b..i], col + s[..b].chars().count()));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

/// Splits `key: rest`, returning the rest and its column.
fn field<'a>(t: &'a str, col: usize, key: &str) -> Option<(&'a str, usize)> {
    let rest = t.strip_prefix(key)?.strip_prefix(':')?;
    Some((rest, col + key.chars().count() + 1))
}

fn header<'a>(text: &'a str, kind: &str) -> Result<(usize, Vec<(&'a str, usize)>)> {
    let Some((ln, t, col)) = lines(text).next() else {
        return parse_err(1, 1, format!("expected `{kind}` header"));
    };
    let w = words(t, col);
    if w[0].0 != kind {
        return parse_err(ln, col, format!("expected `{kind}` header, found `{}`", w[0].0));
    }
    Ok((ln, w[1..].to_vec()))
}

/// Kind of a file, read from its first word.
pub fn file_kind(text: &str) -> Option<&str> {
    lines(text).next().map(|(_, t, _)| t.split_whitespace().next().unwrap())
}

/// `poset NAME` / `elements: a b ...` / `covers: a<b c<d ...`.
pub fn parse_poset(text: &str) -> Result<(String, Poset)> {
    let (ln, w) = header(text, "poset")?;
    let name = match w.as_slice() {
        [(n, _)] => n.to_string(),
        _ => return parse_err(ln, 1, "expected `poset NAME`"),
    };
    let mut labels: Vec<String> = Vec::new();
    let mut covers = Vec::new();
    for (ln, t, col) in lines(text).skip(1) {
        if let Some((rest, c)) = field(t, col, "elements") {
            for (e, c) in words(rest, c) {
                if labels.iter().any(|l| l == e) {
                    return parse_err(ln, c, format!("duplicate element `{e}`"));
                }
                labels.push(e.to_string());
            }
        } else if let Some((rest, c)) = field(t, col, "covers") {
            for (pair, c) in words(rest, c) {
                let Some((a, b)) = pair.split_once('<') else {
                    return parse_err(ln, c, format!("expected `a<b`, found `{pair}`"));
                };
                let find = |x: &str, c: usize| match labels.iter().position(|l| l == x) {
                    Some(i) => Ok(i),
                    None => parse_err(ln, c, format!("unknown element `{x}`")),
                };
                covers.push((find(a, c)?, find(b, c + a.chars().count() + 1)?));
            }
        } else {
            return parse_err(ln, col, "expected `elements:` or `covers:`");
        }
    }
    let p = Poset::from_covers(labels, &covers).map_err(|e| match e {
        Error::CycleDetected(x) => Error::Parse { line: ln, col: 1, msg: format!("cycle through `{x}`") },
        e => e,
    })?;
    Ok((name, p))
}

pub fn write_poset(name: &str, p: &Poset) -> String {
    let covers: Vec<String> = p.covers().iter().map(|&(a, b)| format!("{}<{}", p.label(a), p.label(b))).collect();
    format!("poset {name}\nelements: {}\ncovers: {}\n", p.labels().join(" "), covers.join(" "))
}

/// A value of `Q`: labels of its down-set, `*` for all of `Q`, `-` or nothing for empty.
fn parse_value(q: &Poset, rest: &str, col: usize, ln: usize) -> Result<Mask> {
    let mut m = 0;
    for (w, c) in words(rest, col) {
        match w {
            "*" => m |= q.full(),
            "-" => {}
            _ => match q.index_of(w) {
                Ok(i) => m |= bit(i),
                Err(_) => return parse_err(ln, c, format!("unknown element `{w}` of the target")),
            },
        }
    }
    Ok(q.down_closure(m))
}

fn parse_chain_vals(rest: &str, col: usize, ln: usize) -> Result<Vec<Option<usize>>> {
    words(rest, col)
        .into_iter()
        .map(|(w, c)| match w {
            "inf" => Ok(None),
            _ => match w.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(Some(v)),
                _ => parse_err(ln, c, format!("expected a value >= 1 or `inf`, found `{w}`")),
            },
        })
        .collect()
}

fn chain_profunctor(p: &Arc<Poset>, q: &Arc<Poset>, vals: &[Option<usize>], ln: usize, col: usize) -> Result<Profunctor> {
    if !q.is_chain() {
        return parse_err(ln, col, "`vals:` needs a chain target");
    }
    if vals.len() != p.len() {
        return parse_err(ln, col, format!("{} values given for {} elements", vals.len(), p.len()));
    }
    let vals: Vec<usize> = vals.iter().map(|v| v.unwrap_or(q.len() + 1)).collect();
    Profunctor::from_chain_values(p.clone(), q.clone(), &vals).map_err(|e| Error::Parse { line: ln, col, msg: e.to_string() })
}

/// `pro P Q` then `p: q1 q2 ...` per element of `P`, or a single `vals: v1 v2 ...` line for a chain `Q`.
pub fn parse_pro(text: &str, env: &PosetEnv) -> Result<Profunctor> {
    let (ln, w) = header(text, "pro")?;
    let [(pn, pc), (qn, qc)] = w.as_slice() else {
        return parse_err(ln, 1, "expected `pro P Q`");
    };
    let p = env.resolve(pn).map_err(|e| Error::Parse { line: ln, col: *pc, msg: e.to_string() })?;
    let q = env.resolve(qn).map_err(|e| Error::Parse { line: ln, col: *qc, msg: e.to_string() })?;
    let mut values: Vec<Option<Mask>> = vec![None; p.len()];
    for (ln, t, col) in lines(text).skip(1) {
        if let Some((rest, c)) = field(t, col, "vals") {
            let vals = parse_chain_vals(rest, c, ln)?;
            return chain_profunctor(&p, &q, &vals, ln, c);
        }
        let Some((key, rest)) = t.split_once(':') else {
            return parse_err(ln, col, "expected `element: values`");
        };
        let key = key.trim();
        let i = match p.index_of(key) {
            Ok(i) => i,
            Err(_) => return parse_err(ln, col, format!("unknown element `{key}` of the source")),
        };
        if values[i].is_some() {
            return parse_err(ln, col, format!("`{key}` given twice"));
        }
        values[i] = Some(parse_value(&q, rest, col + key.len() + 1, ln)?);
    }
    if let Some(i) = values.iter().position(Option::is_none) {
        return parse_err(ln, 1, format!("no value for `{}`", p.label(i)));
    }
    Profunctor::from_values(p, q, values.into_iter().map(Option::unwrap).collect())
        .map_err(|e| Error::Parse { line: ln, col: 1, msg: e.to_string() })
}

pub fn write_pro(f: &Profunctor, pname: &str, qname: &str) -> String {
    let mut s = format!("pro {pname} {qname}\n");
    for (p, v) in f.value_names() {
        if v.len() == f.target().len() && !v.is_empty() {
            s.push_str(&format!("{p}: *\n"));
        } else {
            s.push_str(&format!("{p}: {}\n", v.join(" ")).trim_end().to_string());
            s.push('\n');
        }
    }
    s
}

/// `cut P` then `down: a b ...` listing elements of the down-set (closed downwards).
pub fn parse_cut(text: &str, env: &PosetEnv) -> Result<Cut> {
    let (ln, w) = header(text, "cut")?;
    let [(pn, pc)] = w.as_slice() else {
        return parse_err(ln, 1, "expected `cut P`");
    };
    let p = env.resolve(pn).map_err(|e| Error::Parse { line: ln, col: *pc, msg: e.to_string() })?;
    let mut down = 0;
    for (ln, t, col) in lines(text).skip(1) {
        let Some((rest, c)) = field(t, col, "down") else {
            return parse_err(ln, col, "expected `down:`");
        };
        down |= parse_value(&p, rest, c, ln)?;
    }
    Cut::from_downset(p, down)
}

pub fn write_cut(c: &Cut, pname: &str) -> String {
    format!("cut {pname}\ndown: {}\n", c.down_names().join(" ")).replace(": \n", ":\n")
}

/// `procut P Q` then generator lines `down: v; v; ...` or `up: ...` (one value of `Q` per element
/// of `P`, separated by `;`), or `down-vals:`/`up-vals:` with chain values.
pub fn parse_procut(text: &str, env: &PosetEnv) -> Result<(Arc<Poset>, Arc<Poset>, CutSpec)> {
    let (ln, w) = header(text, "procut")?;
    let [(pn, pc), (qn, qc)] = w.as_slice() else {
        return parse_err(ln, 1, "expected `procut P Q`");
    };
    let p = env.resolve(pn).map_err(|e| Error::Parse { line: ln, col: *pc, msg: e.to_string() })?;
    let q = env.resolve(qn).map_err(|e| Error::Parse { line: ln, col: *qc, msg: e.to_string() })?;
    let (mut down, mut up) = (Vec::new(), Vec::new());
    for (ln, t, col) in lines(text).skip(1) {
        let (side, f) = if let Some((rest, c)) = field(t, col, "down-vals") {
            (true, chain_profunctor(&p, &q, &parse_chain_vals(rest, c, ln)?, ln, c)?)
        } else if let Some((rest, c)) = field(t, col, "up-vals") {
            (false, chain_profunctor(&p, &q, &parse_chain_vals(rest, c, ln)?, ln, c)?)
        } else {
            let (side, rest, c) = match (field(t, col, "down"), field(t, col, "up")) {
                (Some((r, c)), _) => (true, r, c),
                (_, Some((r, c))) => (false, r, c),
                _ => return parse_err(ln, col, "expected `down:`, `up:`, `down-vals:` or `up-vals:`"),
            };
            let mut values = Vec::new();
            let mut c = c;
            for part in rest.split(';') {
                values.push(parse_value(&q, part, c, ln)?);
                c += part.chars().count() + 1;
            }
            if values.len() != p.len() {
                return parse_err(ln, col, format!("{} values given for {} elements", values.len(), p.len()));
            }
            let f = Profunctor::from_values(p.clone(), q.clone(), values)
                .map_err(|e| Error::Parse { line: ln, col, msg: e.to_string() })?;
            (side, f)
        };
        if side { down.push(f) } else { up.push(f) }
    }
    let spec = match (down.is_empty(), up.is_empty()) {
        (false, true) => CutSpec::GeneratedDown(down),
        (true, false) => CutSpec::GeneratedUp(up),
        _ => return parse_err(ln, 1, "give generators for exactly one side"),
    };
    Ok((p, q, spec))
}

/// `ideal` then `vars: a b ...` and `gen: a b ...` lines; `gen: 1` is the unit generator.
pub fn parse_ideal(text: &str) -> Result<SfIdeal> {
    let (ln, w) = header(text, "ideal")?;
    if let Some((x, c)) = w.first() {
        return parse_err(ln, *c, format!("unexpected `{x}`"));
    }
    let mut vars: Vec<String> = Vec::new();
    let mut gens = Vec::new();
    for (ln, t, col) in lines(text).skip(1) {
        if let Some((rest, c)) = field(t, col, "vars") {
            for (v, c) in words(rest, c) {
                if vars.iter().any(|x| x == v) {
                    return parse_err(ln, c, format!("duplicate variable `{v}`"));
                }
                vars.push(v.to_string());
            }
            if vars.len() > 64 {
                return parse_err(ln, col, "at most 64 variables");
            }
        } else if let Some((rest, c)) = field(t, col, "gen") {
            let mut m = 0;
            for (v, c) in words(rest, c) {
                if v == "1" {
                    continue;
                }
                match vars.iter().position(|x| x == v) {
                    Some(i) => m |= bit(i),
                    None => return parse_err(ln, c, format!("unknown variable `{v}`")),
                }
            }
            gens.push(m);
        } else {
            return parse_err(ln, col, "expected `vars:` or `gen:`");
        }
    }
    SfIdeal::new(vars, gens)
}

pub fn write_ideal(i: &SfIdeal) -> String {
    let mut s = format!("ideal\nvars: {}\n", i.variables().join(" "));
    for g in i.generator_names() {
        let g = if g.is_empty() { "1".to_string() } else { g.join(" ") };
        s.push_str(&format!("gen: {g}\n"));
    }
    s
}

/// `natcut` then `down: LITERAL` (large) and `up: LITERAL` (small) generator lines.
pub fn parse_natcut(text: &str) -> Result<NatCut> {
    let (ln, w) = header(text, "natcut")?;
    if let Some((x, c)) = w.first() {
        return parse_err(ln, *c, format!("unexpected `{x}`"));
    }
    let (mut down, mut up) = (Vec::new(), Vec::new());
    for (ln, t, col) in lines(text).skip(1) {
        let (target, rest, c) = match (field(t, col, "down"), field(t, col, "up")) {
            (Some((r, c)), _) => (&mut down, r, c),
            (_, Some((r, c))) => (&mut up, r, c),
            _ => return parse_err(ln, col, "expected `down:` or `up:`"),
        };
        let lit = rest.trim_start();
        target.push(parse_literal(lit.trim_end(), ln, c + rest.len() - lit.len())?);
    }
    NatCut::new(down, up)
}

pub fn write_natcut(c: &NatCut) -> String {
    let mut s = String::from("natcut\n");
    for f in c.ideal() {
        s.push_str(&format!("down: {f}\n"));
    }
    for g in c.filter() {
        s.push_str(&format!("up: {g}\n"));
    }
    s
}

/// A literal or a named family: `identity-gap:R`, `tower:R`, `steps:R`, `random:SEED`.
pub fn natcut_family(spec: &str) -> Result<NatCut> {
    let (name, arg) = spec.split_once(':').ok_or_else(|| Error::Invalid(format!("unknown family `{spec}`")))?;
    let n: u64 = arg.parse().map_err(|_| Error::Invalid(format!("bad parameter in `{spec}`")))?;
    match name {
        "identity-gap" => Ok(NatCut::identity_gap(n)),
        "tower" => Ok(NatCut::tower(n)),
        "steps" if n >= 1 => Ok(NatCut::steps(n)),
        "random" => NatCut::random_clopen(n, 3, 4, 5),
        _ => Err(Error::Invalid(format!("unknown family `{spec}`"))),
    }
}
