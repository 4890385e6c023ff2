//! Squarefree monomial ideals as families of variable sets, and the monomial
//! ideals attached to profunctors `ℕ ⇸ ℕ`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::bits::{bit, minimal_masks, ones, subset, Mask};
use crate::cut_engine::ProCut;
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::profunctor::{restricted, Restriction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IdealWarning {
    /// Dual of the unit ideal.
    ZeroIdeal,
    /// Dual of the zero ideal.
    UnitIdeal,
    /// There is no isotone map, so the isotonian ideal is zero.
    EmptyHom,
}

/// A squarefree monomial ideal; each generator is the set of its variables.
///
/// Generators are kept minimal and sorted by degree, then lexicographically.
/// No generators is the zero ideal; the empty generator is the unit ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SfIdeal {
    variables: Vec<String>,
    generators: Vec<Mask>,
    warning: Option<IdealWarning>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Cas,
    Csv,
}

impl SfIdeal {
    pub fn new(variables: Vec<String>, gens: Vec<Mask>) -> Result<SfIdeal> {
        if variables.len() > 64 {
            return Err(Error::TooLarge(variables.len()));
        }
        let all = crate::bits::full(variables.len());
        if gens.iter().any(|&g| g & !all != 0) {
            return Err(Error::Invalid("generator uses an unknown variable".into()));
        }
        Ok(SfIdeal { variables, generators: minimal_masks(gens), warning: None })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn generators(&self) -> &[Mask] {
        &self.generators
    }

    pub fn warning(&self) -> Option<IdealWarning> {
        self.warning
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.generators == [0]
    }

    /// Whether the squarefree monomial with support `m` lies in the ideal.
    pub fn contains(&self, m: Mask) -> bool {
        self.generators.iter().any(|&g| subset(g, m))
    }

    /// The Alexander dual: generated by the minimal sets meeting every generator.
    pub fn alexander_dual(&self) -> SfIdeal {
        let mut t: Vec<Mask> = vec![0];
        for &e in &self.generators {
            let mut next = Vec::with_capacity(t.len() * 2);
            for &x in &t {
                if x & e != 0 {
                    next.push(x);
                } else {
                    next.extend(ones(e).map(|v| x | bit(v)));
                }
            }
            t = minimal_masks(next);
        }
        let warning = if self.is_zero() {
            Some(IdealWarning::UnitIdeal)
        } else if self.is_unit() {
            Some(IdealWarning::ZeroIdeal)
        } else {
            None
        };
        SfIdeal { variables: self.variables.clone(), generators: t, warning }
    }

    /// Renames variables by a bijection `old index -> new index` onto `vars`.
    pub fn relabel(&self, vars: Vec<String>, map: impl Fn(usize) -> usize) -> Result<SfIdeal> {
        let gens = self.generators.iter().map(|&g| ones(g).fold(0, |m, i| m | bit(map(i)))).collect();
        let mut out = SfIdeal::new(vars, gens)?;
        out.warning = self.warning;
        Ok(out)
    }

    fn monomial(&self, g: Mask, sep: &str) -> String {
        if g == 0 {
            return "1".into();
        }
        ones(g).map(|i| self.variables[i].as_str()).collect::<Vec<_>>().join(sep)
    }

    pub fn export(&self, fmt: ExportFormat) -> String {
        match fmt {
            ExportFormat::Cas => {
                let gens: Vec<String> = self.generators.iter().map(|&g| self.monomial(g, "*")).collect();
                format!("monomialIdeal({})", gens.join(", "))
            }
            ExportFormat::Csv => {
                let mut s = String::from("generator\n");
                for &g in &self.generators {
                    s.push_str(&self.monomial(g, ";"));
                    s.push('\n');
                }
                s
            }
        }
    }

    pub fn generator_names(&self) -> Vec<Vec<String>> {
        self.generators.iter().map(|&g| ones(g).map(|i| self.variables[i].clone()).collect()).collect()
    }
}

/// Variable names `x_(a,b)` for the product `A × B`, indexed `a * |B| + b`.
pub fn pair_variables(a: &Poset, b: &Poset) -> Vec<String> {
    let mut v = Vec::with_capacity(a.len() * b.len());
    for x in a.labels() {
        for y in b.labels() {
            v.push(format!("x_({x},{y})"));
        }
    }
    v
}

/// The Stanley–Reisner ideal of the complex cut out by a filter family: generated by its minimal members.
pub fn sr_ideal_from_cut(variables: Vec<String>, filter_family: &[Mask]) -> Result<SfIdeal> {
    SfIdeal::new(variables, filter_family.to_vec())
}

/// `L_Λ` over `Q × P^op`, generated by `Λf` for `f ∈ 𝓕`, and `L_Γ` over `P × Q^op`, generated by `swap(Γf)` for `f ∈ 𝓘`.
pub fn lambda_gamma_ideals(pc: &ProCut) -> Result<(SfIdeal, SfIdeal)> {
    let (p, q) = (pc.source(), pc.target());
    let lam = pc.filter().map(|f| f.ascent().mask).collect();
    let gam = pc.ideal().map(|f| f.graph().swap().mask).collect();
    Ok((SfIdeal::new(pair_variables(q, p), lam)?, SfIdeal::new(pair_variables(p, q), gam)?))
}

/// Every isotone map `P → Q` as a value table, in lexicographic order.
pub fn isotone_maps(p: &Poset, q: &Poset, limit: usize) -> Result<Vec<Vec<usize>>> {
    let order = p.linear_extension();
    let mut out = Vec::new();
    let mut cur = vec![usize::MAX; p.len()];
    fn go(t: usize, order: &[usize], p: &Poset, q: &Poset, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) -> Result<()> {
        if t == order.len() {
            if out.len() >= limit {
                return Err(Error::SizeLimit(format!("more than {limit} isotone maps")));
            }
            out.push(cur.clone());
            return Ok(());
        }
        let x = order[t];
        for v in 0..q.len() {
            if ones(p.down_of(x) & !bit(x)).all(|y| q.leq(cur[y], v)) {
                cur[x] = v;
                go(t + 1, order, p, q, cur, out, limit)?;
            }
        }
        cur[x] = usize::MAX;
        Ok(())
    }
    go(0, &order, p, q, &mut cur, &mut out, limit)?;
    out.sort();
    Ok(out)
}

/// `L(P, Q)` over `P × Q^op`, generated by the graphs `{(p, g(p))}` of isotone maps `g`.
pub fn isotonian_ideal(p: &Poset, q: &Poset, limit: usize) -> Result<SfIdeal> {
    let maps = isotone_maps(p, q, limit)?;
    let nq = q.len();
    let gens = maps.iter().map(|g| g.iter().enumerate().fold(0, |m, (x, &y)| m | bit(x * nq + y))).collect();
    let mut ideal = SfIdeal::new(pair_variables(p, q), gens)?;
    if maps.is_empty() {
        ideal.warning = Some(IdealWarning::EmptyHom);
    }
    Ok(ideal)
}

#[derive(Clone, Debug, Serialize)]
pub struct LetterplaceReport {
    pub n: usize,
    pub letterplace_generators: usize,
    pub co_letterplace_generators: usize,
    /// `L([n], P)` and `L(P, [n])` are Alexander dual after swapping coordinates.
    pub dual: bool,
    /// `L([n], P)` is `L_Γ` of the finite-everywhere down-set of `Pro([n], P)`.
    pub chain_side_route: bool,
    /// Same for `L(P, [n])`; only checked when `P` is a forest.
    pub poset_side_route: Option<bool>,
    pub holds: bool,
}

fn gamma_of_finite(p: &Arc<Poset>, q: &Arc<Poset>, limit: usize) -> Result<SfIdeal> {
    let fam = restricted(p, q, Restriction::FiniteEverywhere, limit)?;
    SfIdeal::new(pair_variables(p, q), fam.iter().map(|f| f.graph().swap().mask).collect())
}

pub fn verify_letterplace_duality(n: usize, p: &Arc<Poset>, limit: usize) -> Result<LetterplaceReport> {
    let c = Arc::new(Poset::chain(n));
    let lp = isotonian_ideal(&c, p, limit)?;
    let colp = isotonian_ideal(p, &c, limit)?;
    let np = p.len();
    let swapped = colp.relabel(pair_variables(&c, p), |i| ((i % n) * np) + i / n)?;
    let dual = lp.alexander_dual().generators == swapped.generators;
    let chain_side_route = gamma_of_finite(&c, p, limit)?.generators == lp.generators;
    let poset_side_route = if p.is_forest() {
        Some(gamma_of_finite(p, &c, limit)?.generators == colp.generators)
    } else {
        None
    };
    Ok(LetterplaceReport {
        n,
        letterplace_generators: lp.generators.len(),
        co_letterplace_generators: colp.generators.len(),
        dual,
        chain_side_route,
        poset_side_route,
        holds: dual && chain_side_route && poset_side_route.unwrap_or(true),
    })
}

/// A monomial ideal in `x_1, ..., x_n`; generators are exponent vectors, kept minimal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialIdeal {
    nvars: usize,
    generators: Vec<Vec<u32>>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl MonomialIdeal {
    pub fn new(nvars: usize, gens: impl IntoIterator<Item = Vec<u32>>) -> Result<MonomialIdeal> {
        let mut gens: Vec<Vec<u32>> = gens.into_iter().collect();
        if gens.iter().any(|g| g.len() != nvars) {
            return Err(Error::Invalid("exponent vector of the wrong length".into()));
        }
        gens.sort_by(|a, b| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        gens.dedup();
        let mut keep: Vec<Vec<u32>> = Vec::new();
        for g in gens {
            if !keep.iter().any(|k| divides(k, &g)) {
                keep.push(g);
            }
        }
        Ok(MonomialIdeal { nvars, generators: keep })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    pub fn contains(&self, m: &[u32]) -> bool {
        self.generators.iter().any(|g| divides(g, m))
    }

    /// For every generator `m`, `x_j | m` and `i < j`, the monomial `x_i m / x_j` is in the ideal.
    pub fn is_strongly_stable(&self) -> bool {
        self.generators.iter().all(|m| {
            (0..self.nvars).filter(|&j| m[j] > 0).all(|j| {
                (0..j).all(|i| {
                    let mut m2 = m.clone();
                    m2[j] -= 1;
                    m2[i] += 1;
                    self.contains(&m2)
                })
            })
        })
    }

    /// The smallest strongly stable ideal containing this one.
    pub fn borel_closure(&self) -> MonomialIdeal {
        let mut seen: BTreeSet<Vec<u32>> = self.generators.iter().cloned().collect();
        let mut todo: Vec<Vec<u32>> = seen.iter().cloned().collect();
        while let Some(m) = todo.pop() {
            for j in 0..self.nvars {
                if m[j] == 0 {
                    continue;
                }
                for i in 0..j {
                    let mut m2 = m.clone();
                    m2[j] -= 1;
                    m2[i] += 1;
                    if seen.insert(m2.clone()) {
                        todo.push(m2);
                    }
                }
            }
        }
        MonomialIdeal::new(self.nvars, seen).expect("lengths preserved")
    }

    pub fn export_cas(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| monomial_string(g)).collect();
        format!("monomialIdeal({})", gens.join(", "))
    }
}

fn monomial_string(g: &[u32]) -> String {
    let parts: Vec<String> = g
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("x_{}", i + 1) } else { format!("x_{}^{e}", i + 1) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}
