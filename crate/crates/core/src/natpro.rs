//! Profunctors `ℕ ⇸ ℕ` in closed form: a finite prefix and a tail rule.
//!
//! A value `v` stands for the down-set `{1, ..., v-1}` of `ℕ = {1, 2, ...}`,
//! and `inf` for all of `ℕ`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{parse_err, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NatVal {
    Fin(u64),
    Inf,
}

impl NatVal {
    pub fn fin(self) -> Option<u64> {
        match self {
            NatVal::Fin(v) => Some(v),
            NatVal::Inf => None,
        }
    }
}

impl fmt::Display for NatVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NatVal::Fin(v) => write!(f, "{v}"),
            NatVal::Inf => f.write_str("inf"),
        }
    }
}

/// Values after the prefix of length `k`: for `n > k`, `c`, `inf`, or `n + c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    Const(u64),
    Infinity,
    Shift(i64),
}

impl Tail {
    fn at(self, n: u64) -> NatVal {
        match self {
            Tail::Const(c) => NatVal::Fin(c),
            Tail::Infinity => NatVal::Inf,
            Tail::Shift(c) => NatVal::Fin((n as i64 + c) as u64),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum NatClass {
    /// Takes the value `inf`.
    Large,
    /// Eventually constant and finite.
    Small,
    /// Finite everywhere and unbounded.
    Unbounded,
}

/// An isotone map `ℕ → ℕ ∪ {inf}` in canonical form (shortest prefix).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NatPro {
    prefix: Vec<NatVal>,
    tail: Tail,
}

impl Serialize for NatPro {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl NatPro {
    /// Validates monotonicity and positivity, then shortens the prefix.
    pub fn new(mut prefix: Vec<NatVal>, tail: Tail) -> Result<NatPro> {
        let k = prefix.len() as i64;
        match tail {
            Tail::Const(0) => return Err(Error::Invalid("constant tail must be at least 1".into())),
            Tail::Shift(c) if k + 1 + c < 1 => {
                return Err(Error::Invalid(format!("shift {c} after {k} values gives a value below 1")))
            }
            _ => {}
        }
        if prefix.contains(&NatVal::Fin(0)) {
            return Err(Error::Invalid("values start at 1".into()));
        }
        if prefix.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Invalid("prefix is not weakly increasing".into()));
        }
        if let Some(&last) = prefix.last() {
            if last > tail.at(k as u64 + 1) {
                return Err(Error::Invalid("prefix exceeds the tail".into()));
            }
        }
        while let Some(&last) = prefix.last() {
            if last == tail.at(prefix.len() as u64) {
                prefix.pop();
            } else {
                break;
            }
        }
        Ok(NatPro { prefix, tail })
    }

    pub fn from_values(prefix: &[u64], tail: Tail) -> Result<NatPro> {
        NatPro::new(prefix.iter().map(|&v| NatVal::Fin(v)).collect(), tail)
    }

    /// The bottom element `𝟎`: every value is the empty down-set.
    pub fn zero() -> NatPro {
        NatPro { prefix: vec![], tail: Tail::Const(1) }
    }

    /// The top element `𝟏`.
    pub fn one() -> NatPro {
        NatPro { prefix: vec![], tail: Tail::Infinity }
    }

    pub fn identity() -> NatPro {
        NatPro { prefix: vec![], tail: Tail::Shift(0) }
    }

    pub fn prefix(&self) -> &[NatVal] {
        &self.prefix
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// `f(n)` for `n ≥ 1`.
    pub fn eval(&self, n: u64) -> NatVal {
        assert!(n >= 1, "ℕ starts at 1");
        match self.prefix.get(n as usize - 1) {
            Some(&v) => v,
            None => self.tail.at(n),
        }
    }

    pub fn class(&self) -> NatClass {
        match self.tail {
            Tail::Infinity => NatClass::Large,
            Tail::Const(_) => NatClass::Small,
            Tail::Shift(_) => NatClass::Unbounded,
        }
    }

    /// Largest finite value in the prefix, or 0.
    fn max_finite_prefix(&self) -> u64 {
        self.prefix.iter().filter_map(|v| v.fin()).max().unwrap_or(0)
    }

    /// Smallest `p` with `f(p) > q`, or `inf`.
    fn first_above(&self, q: u64) -> NatVal {
        let k = self.prefix.len() as u64;
        let bound = match self.tail {
            Tail::Const(c) if c <= q => {
                return match (1..=k).find(|&p| self.eval(p) > NatVal::Fin(q)) {
                    Some(p) => NatVal::Fin(p),
                    None => NatVal::Inf,
                }
            }
            Tail::Shift(c) => (k + 1).max((q as i64 - c + 1).max(1) as u64),
            _ => k + 1,
        };
        (1..=bound)
            .find(|&p| self.eval(p) > NatVal::Fin(q))
            .map(NatVal::Fin)
            .expect("tail exceeds q within the bound")
    }

    /// The dual `g(q) = min{p : f(p) > q}`.
    pub fn dual(&self) -> NatPro {
        let k = self.prefix.len() as i64;
        let (window, tail) = match self.tail {
            Tail::Const(c) => (c - 1, Tail::Infinity),
            Tail::Infinity => {
                let first_inf = self.prefix.iter().position(|&v| v == NatVal::Inf).map_or(k + 1, |i| i as i64 + 1);
                (self.max_finite_prefix(), Tail::Const(first_inf as u64))
            }
            Tail::Shift(c) => ((k + c) as u64, Tail::Shift(1 - c)),
        };
        let prefix = (1..=window).map(|q| self.first_above(q)).collect();
        NatPro::new(prefix, tail).expect("dual of a valid map is valid")
    }

    /// Positions up to which both maps may still differ from their tail rules.
    fn horizon(&self, o: &NatPro) -> u64 {
        self.prefix.len().max(o.prefix.len()) as u64
    }

    pub fn leq(&self, o: &NatPro) -> bool {
        let n = self.horizon(o);
        if (1..=n).any(|i| self.eval(i) > o.eval(i)) {
            return false;
        }
        match (self.tail, o.tail) {
            (Tail::Const(a), Tail::Const(b)) => a <= b,
            (_, Tail::Infinity) => true,
            (Tail::Infinity, _) => false,
            (Tail::Const(a), Tail::Shift(d)) => a as i64 <= n as i64 + 1 + d,
            (Tail::Shift(_), Tail::Const(_)) => false,
            (Tail::Shift(c), Tail::Shift(d)) => c <= d,
        }
    }

    fn combine(&self, o: &NatPro, take_max: bool) -> NatPro {
        let n = self.horizon(o) as i64;
        let pick = |a: NatVal, b: NatVal| if take_max { a.max(b) } else { a.min(b) };
        let (threshold, tail) = match (self.tail, o.tail) {
            (Tail::Const(a), Tail::Const(b)) => (n, Tail::Const(if take_max { a.max(b) } else { a.min(b) })),
            (Tail::Infinity, t) | (t, Tail::Infinity) => (n, if take_max { Tail::Infinity } else { t }),
            (Tail::Const(a), Tail::Shift(d)) | (Tail::Shift(d), Tail::Const(a)) => {
                // n + d overtakes a from n = a - d on
                (n.max(a as i64 - d), if take_max { Tail::Shift(d) } else { Tail::Const(a) })
            }
            (Tail::Shift(c), Tail::Shift(d)) => (n, Tail::Shift(if take_max { c.max(d) } else { c.min(d) })),
        };
        let prefix = (1..=threshold.max(0) as u64).map(|i| pick(self.eval(i), o.eval(i))).collect();
        NatPro::new(prefix, tail).expect("pointwise bound of valid maps is valid")
    }

    pub fn join(&self, o: &NatPro) -> NatPro {
        self.combine(o, true)
    }

    pub fn meet(&self, o: &NatPro) -> NatPro {
        self.combine(o, false)
    }

    /// `Λf = {(q, p) : f(p-1) ≤ q < f(p)}` with `f(0) = 1`; defined for small maps.
    pub fn ascent(&self) -> Result<Vec<(u64, u64)>> {
        if self.class() != NatClass::Small {
            return Err(Error::Invalid(format!("ascent is finite only for small maps, not {self}")));
        }
        Ok(self.ascent_window(u64::MAX, self.prefix.len() as u64 + 1))
    }

    /// `Γf = {(f(p), p) : f(p) finite}`; defined for large maps.
    pub fn graph(&self) -> Result<Vec<(u64, u64)>> {
        if self.class() != NatClass::Large {
            return Err(Error::Invalid(format!("graph is finite only for large maps, not {self}")));
        }
        Ok(self.graph_window(u64::MAX, self.prefix.len() as u64))
    }

    fn ascent_window(&self, qmax: u64, pmax: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut prev = 1;
        for p in 1..=pmax {
            let hi = match self.eval(p) {
                NatVal::Fin(v) => v,
                NatVal::Inf => u64::MAX,
            };
            let top = hi.saturating_sub(1).min(qmax);
            for q in prev..=top {
                out.push((q, p));
            }
            if hi == u64::MAX {
                prev = u64::MAX;
            } else {
                prev = hi;
            }
            if prev > qmax {
                break;
            }
        }
        out.sort();
        out
    }

    fn graph_window(&self, qmax: u64, pmax: u64) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = (1..=pmax)
            .filter_map(|p| self.eval(p).fin().filter(|&v| v <= qmax).map(|v| (v, p)))
            .collect();
        out.sort();
        out
    }

    /// Both boundary sets cut down to the box `[1, qmax] × [1, pmax]`.
    pub fn window(&self, qmax: u64, pmax: u64) -> WindowBoundary {
        WindowBoundary { ascent: self.ascent_window(qmax, pmax), graph: self.graph_window(qmax, pmax) }
    }

    /// `f + id - 1`, a bijection from small maps onto unbounded ones.
    pub fn tame_embed(&self) -> Result<NatPro> {
        match self.tail {
            Tail::Const(c) => {
                let prefix: Vec<u64> = self.prefix.iter().enumerate().map(|(i, v)| v.fin().unwrap() + i as u64).collect();
                NatPro::from_values(&prefix, Tail::Shift(c as i64 - 1))
            }
            _ => Err(Error::Invalid(format!("tame embedding takes small maps, not {self}"))),
        }
    }

    /// Exponents of `λ(f)`: `x_p` appears `#{q : (q, p) ∈ Λf}` times. Length is the last nonzero position.
    pub fn lambda_exponents(&self) -> Result<Vec<u32>> {
        let a = self.ascent()?;
        let len = a.iter().map(|x| x.1).max().unwrap_or(0) as usize;
        let mut e = vec![0; len];
        for (_, p) in a {
            e[p as usize - 1] += 1;
        }
        Ok(e)
    }

    /// Exponents of `γ(f)`: `x_q` appears `#{p : (q, p) ∈ Γf}` times.
    pub fn gamma_exponents(&self) -> Result<Vec<u32>> {
        let g = self.graph()?;
        let len = g.iter().map(|x| x.0).max().unwrap_or(0) as usize;
        let mut e = vec![0; len];
        for (q, _) in g {
            e[q as usize - 1] += 1;
        }
        Ok(e)
    }

    /// Largest finite value anywhere, for small maps.
    pub fn sup(&self) -> Option<u64> {
        match self.tail {
            Tail::Const(c) => Some(c.max(self.max_finite_prefix())),
            _ => None,
        }
    }
}

impl PartialOrd for NatPro {
    fn partial_cmp(&self, o: &NatPro) -> Option<Ordering> {
        match (self.leq(o), o.leq(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowBoundary {
    pub ascent: Vec<(u64, u64)>,
    pub graph: Vec<(u64, u64)>,
}

impl fmt::Display for NatPro {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.prefix.iter().map(|v| v.to_string()).collect();
        let tail = match self.tail {
            Tail::Const(c) => format!("const {c}"),
            Tail::Infinity => "inf".into(),
            Tail::Shift(c) => format!("shift {c}"),
        };
        write!(f, "[{}|{}]", vals.join(","), tail)
    }
}

impl FromStr for NatPro {
    type Err = Error;

    fn from_str(s: &str) -> Result<NatPro> {
        parse_literal(s, 1, 1)
    }
}

/// Parses `[v1,...,vk|tail]`; positions in errors are offset by `line`, `col0`.
pub fn parse_literal(s: &str, line: usize, col0: usize) -> Result<NatPro> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let col = |i: usize| col0 + i;
    let skip = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    skip(&mut i);
    if chars.get(i) != Some(&'[') {
        return parse_err(line, col(i), "expected `[`");
    }
    i += 1;
    let mut prefix = Vec::new();
    let word = |i: &mut usize| {
        let start = *i;
        while *i < chars.len() && (chars[*i].is_alphanumeric() || chars[*i] == '-') {
            *i += 1;
        }
        chars[start..*i].iter().collect::<String>()
    };
    skip(&mut i);
    if chars.get(i) != Some(&'|') {
        loop {
            skip(&mut i);
            let at = i;
            let w = word(&mut i);
            let v = match w.as_str() {
                "inf" => NatVal::Inf,
                _ => match w.parse::<u64>() {
                    Ok(v) if v >= 1 => NatVal::Fin(v),
                    _ => return parse_err(line, col(at), format!("expected a value ≥ 1 or `inf`, found `{w}`")),
                },
            };
            prefix.push((v, at));
            skip(&mut i);
            match chars.get(i) {
                Some(',') => i += 1,
                Some('|') => break,
                _ => return parse_err(line, col(i), "expected `,` or `|`"),
            }
        }
    }
    i += 1;
    skip(&mut i);
    let at = i;
    let kind = word(&mut i);
    let tail = match kind.as_str() {
        "inf" => Tail::Infinity,
        "const" | "shift" => {
            skip(&mut i);
            let at2 = i;
            let w = word(&mut i);
            let bad = || parse_err(line, col(at2), format!("expected an integer, found `{w}`"));
            if kind == "const" {
                match w.parse::<u64>() {
                    Ok(c) => Tail::Const(c),
                    Err(_) => return bad(),
                }
            } else {
                match w.parse::<i64>() {
                    Ok(c) => Tail::Shift(c),
                    Err(_) => return bad(),
                }
            }
        }
        _ => return parse_err(line, col(at), format!("expected `const`, `inf` or `shift`, found `{kind}`")),
    };
    skip(&mut i);
    if chars.get(i) != Some(&']') {
        return parse_err(line, col(i), "expected `]`");
    }
    i += 1;
    skip(&mut i);
    if i != chars.len() {
        return parse_err(line, col(i), "trailing input");
    }
    // `inf` may only run up to an `inf` tail
    if let Some(pos) = prefix.iter().position(|(v, _)| *v == NatVal::Inf) {
        if tail != Tail::Infinity {
            return parse_err(line, col(prefix[pos].1), "`inf` in the prefix needs an `inf` tail");
        }
        if let Some((_, at)) = prefix[pos..].iter().find(|(v, _)| *v != NatVal::Inf) {
            return parse_err(line, col(*at), "finite value after `inf`");
        }
    }
    let vals = prefix.into_iter().map(|(v, _)| v).collect();
    NatPro::new(vals, tail).map_err(|e| Error::Parse { line, col: col0, msg: e.to_string() })
}
