//! The `profun` command line. Exit status: 0 on success, 1 when a verification
//! fails, 2 on usage or parse errors.

use std::io::Write;
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use profun_core::cut_engine::{
    describe, materialize, verify_duality_diagram, verify_preserving_cut, CutSpec, ProCut,
};
use profun_core::dlattice::{enumerate_downsets, DEFAULT_ENUM_LIMIT};
use profun_core::formats::{self, PosetEnv};
use profun_core::ideals::{isotonian_ideal, lambda_gamma_ideals, verify_letterplace_duality, ExportFormat, SfIdeal};
use profun_core::natcut::{clopen_check, NatCut, SearchBounds};
use profun_core::natpro::parse_literal;
use profun_core::poset::Poset;
use profun_core::profunctor::Profunctor;
use profun_core::sweep::SweepOptions;
use profun_core::Error;

mod verbs;
pub use verbs::{Verb, OPERATIONS, VERB_TABLE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Cas,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "profun", version, about = "Profunctors between posets, their boundaries and Alexander duals")]
pub struct Cli {
    #[arg(value_enum)]
    pub verb: Verb,
    /// Define a poset: chainN, discreteN, vee, wedge, diamond, file:PATH, product:A,B, op:A.
    #[arg(long = "poset", value_name = "NAME=SPEC")]
    pub posets: Vec<String>,
    /// reaches-inf, finite-everywhere, bounded-by:q, finite-at:p, or file:PATH of a procut file.
    #[arg(long)]
    pub cut: Option<String>,
    /// Window for nat-gap, as QxP.
    #[arg(long = "box", value_name = "QxP")]
    pub window: Option<String>,
    /// Number of variables for nat-stable.
    #[arg(long, default_value_t = 8)]
    pub trunc: usize,
    /// Seed for sampled sweeps; required once a sweep exceeds the exhaustive limit
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for sweeps; output does not depend on it
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Subsets drawn when a sweep is sampled.
    #[arg(long, default_value_t = 1 << 16)]
    pub samples: usize,
    /// Longest candidate prefix for nat-gap.
    #[arg(long, default_value_t = 6)]
    pub max_prefix: usize,
    /// Largest candidate value for nat-gap; defaults to max-prefix + 2.
    #[arg(long)]
    pub max_value: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Files, NatPro literals, family names or sizes, depending on the verb.
    pub inputs: Vec<String>,
}

struct Done {
    text: String,
    verified: bool,
}

impl Done {
    fn ok(text: String) -> Done {
        Done { text, verified: true }
    }
}

type Res<T> = std::result::Result<T, String>;

fn in_file(path: &str) -> impl Fn(Error) -> String + '_ {
    move |e| match e {
        Error::Parse { line, col, msg } => format!("{path}:{line}:{col}: {msg}"),
        e => format!("{path}: {e}"),
    }
}

fn plain(e: Error) -> String {
    e.to_string()
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("reports serialise") + "\n"
}

/// Runs one command line; `args[0]` is the program name.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(d) => {
            let _ = out.write_all(d.text.as_bytes());
            if d.verified {
                0
            } else {
                1
            }
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

struct Ctx {
    env: PosetEnv,
}

impl Ctx {
    fn new(cli: &Cli) -> Res<Ctx> {
        let mut env = PosetEnv::new();
        for def in &cli.posets {
            let (name, spec) = def.split_once('=').ok_or_else(|| format!("--poset expects NAME=SPEC, got `{def}`"))?;
            env.define(name.trim(), spec).map_err(|e| format!("--poset {name}: {e}"))?;
        }
        Ok(Ctx { env })
    }

    fn poset(&self, name: &str) -> Res<Arc<Poset>> {
        self.env.get(name).cloned().ok_or_else(|| format!("define the poset with --poset {name}=SPEC"))
    }

    fn pair(&self) -> Res<(Arc<Poset>, Arc<Poset>)> {
        Ok((self.poset("P")?, self.poset("Q")?))
    }

    /// The cut named by `--cut`, over `P` and `Q` unless a procut file names its own posets.
    fn procut(&self, cli: &Cli) -> Res<ProCut> {
        let spec = cli.cut.as_deref().ok_or("--cut is required")?;
        let (p, q, spec) = match spec.strip_prefix("file:") {
            Some(path) => {
                let text = read(path)?;
                formats::parse_procut(&text, &self.env).map_err(in_file(path))?
            }
            None => {
                let (p, q) = self.pair()?;
                (p, q, CutSpec::parse(spec).map_err(plain)?)
            }
        };
        materialize(&p, &q, &spec).map_err(plain)
    }
}

fn read(path: &str) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

fn sweep_opts(cli: &Cli) -> SweepOptions {
    SweepOptions { jobs: cli.jobs, seed: cli.seed, samples: cli.samples, ..Default::default() }
}

fn one_input(cli: &Cli) -> Res<&str> {
    match cli.inputs.as_slice() {
        [x] => Ok(x),
        _ => Err(format!("{} expects exactly one input", cli.verb.name())),
    }
}

fn dispatch(cli: &Cli) -> Res<Done> {
    let ctx = Ctx::new(cli)?;
    match cli.verb {
        Verb::Show => show(cli, &ctx),
        Verb::Dual => dual(cli, &ctx),
        Verb::Ascent | Verb::Graph => boundary(cli, &ctx),
        Verb::Enumerate => enumerate(cli, &ctx),
        Verb::VerifyCut => {
            let pc = ctx.procut(cli)?;
            let r = verify_preserving_cut(&pc, &sweep_opts(cli)).map_err(plain)?;
            Ok(Done { text: pretty(&r), verified: r.holds })
        }
        Verb::VerifyDiagram => {
            let (p, q) = ctx.pair()?;
            let r = verify_duality_diagram(&p, &q, DEFAULT_ENUM_LIMIT).map_err(plain)?;
            Ok(Done { text: pretty(&r), verified: r.holds })
        }
        Verb::Ideals => {
            let pc = ctx.procut(cli)?;
            let (lam, gam) = lambda_gamma_ideals(&pc).map_err(plain)?;
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => pretty(&json!({
                    "cut_spec": pc.spec(),
                    "lambda": ideal_json(&lam),
                    "gamma": ideal_json(&gam),
                })),
                f => format!("{}\n{}\n", export(&lam, f), export(&gam, f)),
            };
            Ok(Done::ok(text))
        }
        Verb::Isotonian => {
            let (p, q) = ctx.pair()?;
            let i = isotonian_ideal(&p, &q, DEFAULT_ENUM_LIMIT).map_err(plain)?;
            Ok(Done::ok(render_ideal(&i, cli.format.unwrap_or(Format::Json))))
        }
        Verb::LetterplaceDual => {
            let p = ctx.poset("P")?;
            let n: usize = one_input(cli)?.parse().map_err(|_| "letterplace-dual expects a chain length n".to_string())?;
            let r = verify_letterplace_duality(n, &p, DEFAULT_ENUM_LIMIT).map_err(plain)?;
            Ok(Done { text: pretty(&r), verified: r.holds })
        }
        Verb::NatDual => nat_dual(cli),
        Verb::NatGap => nat_gap(cli),
        Verb::NatStable => {
            let cut = natcut_input(one_input(cli)?)?;
            let sp = cut.stable_pair(cli.trunc).map_err(plain)?;
            let verified = sp.lambda_strongly_stable && sp.gamma_strongly_stable;
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Cas => format!("{}\n{}\n", sp.i_lambda.export_cas(), sp.i_gamma.export_cas()),
                Format::Json => pretty(&sp),
                Format::Csv => return Err("nat-stable supports --format json or cas".into()),
            };
            Ok(Done { text, verified })
        }
        Verb::Export => {
            let path = one_input(cli)?;
            let i = formats::parse_ideal(&read(path)?).map_err(in_file(path))?;
            Ok(Done::ok(render_ideal(&i, cli.format.unwrap_or(Format::Cas))))
        }
    }
}

fn ideal_json(i: &SfIdeal) -> Value {
    json!({
        "variables": i.variables(),
        "generators": i.generator_names(),
        "warning": i.warning(),
    })
}

fn export(i: &SfIdeal, f: Format) -> String {
    match f {
        Format::Cas => i.export(ExportFormat::Cas),
        Format::Csv => i.export(ExportFormat::Csv),
        Format::Json => pretty(&ideal_json(i)),
    }
}

fn render_ideal(i: &SfIdeal, f: Format) -> String {
    let s = export(i, f);
    if s.ends_with('\n') {
        s
    } else {
        s + "\n"
    }
}

fn poset_json(name: &str, p: &Poset) -> Res<Value> {
    let covers: Vec<[&str; 2]> = p.covers().into_iter().map(|(a, b)| [p.label(a), p.label(b)]).collect();
    Ok(json!({
        "name": name,
        "elements": p.labels(),
        "covers": covers,
        "minimal": p.names_of(p.minimal_elements()),
        "maximal": p.names_of(p.maximal_elements()),
        "chain": p.is_chain(),
        "forest": p.is_forest(),
        "downsets": enumerate_downsets(p, DEFAULT_ENUM_LIMIT).map_err(plain)?.len(),
    }))
}

fn pro_json(f: &Profunctor) -> Value {
    let values: serde_json::Map<String, Value> = f.value_names().into_iter().map(|(p, v)| (p, json!(v))).collect();
    json!({
        "values": values,
        "compact": describe(f),
        "finite_at": f.profile().down_names(),
        "infinite_at": f.source().names_of(f.profile().up()),
        "coprofile": f.coprofile().down_names(),
    })
}

/// The two names in a `pro P Q` header.
fn pro_names(text: &str) -> (String, String) {
    let line = text.lines().map(|l| l.split('#').next().unwrap().trim()).find(|l| !l.is_empty()).unwrap_or("");
    let w: Vec<&str> = line.split_whitespace().collect();
    (w.get(1).unwrap_or(&"P").to_string(), w.get(2).unwrap_or(&"Q").to_string())
}

fn show(cli: &Cli, ctx: &Ctx) -> Res<Done> {
    let mut items = Vec::new();
    if cli.inputs.is_empty() {
        for def in &cli.posets {
            let name = def.split_once('=').map_or(def.as_str(), |x| x.0).trim();
            items.push(poset_json(name, &*ctx.poset(name)?)?);
        }
    }
    for path in &cli.inputs {
        let text = read(path)?;
        let v = match formats::file_kind(&text) {
            Some("poset") => {
                let (name, p) = formats::parse_poset(&text).map_err(in_file(path))?;
                poset_json(&name, &p)?
            }
            Some("pro") => pro_json(&formats::parse_pro(&text, &ctx.env).map_err(in_file(path))?),
            Some("cut") => {
                let c = formats::parse_cut(&text, &ctx.env).map_err(in_file(path))?;
                json!({"down": c.down_names(), "up": c.poset().names_of(c.up())})
            }
            Some("ideal") => ideal_json(&formats::parse_ideal(&text).map_err(in_file(path))?),
            Some("natcut") => natcut_json(&formats::parse_natcut(&text).map_err(in_file(path))?),
            Some("procut") => {
                let (p, q, spec) = formats::parse_procut(&text, &ctx.env).map_err(in_file(path))?;
                let pc = materialize(&p, &q, &spec).map_err(in_file(path))?;
                procut_json(&pc)
            }
            k => return Err(format!("{path}:1:1: unknown file kind `{}`", k.unwrap_or(""))),
        };
        items.push(v);
    }
    if items.is_empty() {
        return Err("show expects files or --poset definitions".into());
    }
    Ok(Done::ok(pretty(&if items.len() == 1 { items.remove(0) } else { Value::Array(items) })))
}

fn procut_json(pc: &ProCut) -> Value {
    json!({
        "cut_spec": pc.spec(),
        "ideal": pc.ideal().map(describe).collect::<Vec<_>>(),
        "filter": pc.filter().map(describe).collect::<Vec<_>>(),
    })
}

fn natcut_json(c: &NatCut) -> Value {
    json!({"down": c.ideal(), "up": c.filter()})
}

fn dual(cli: &Cli, ctx: &Ctx) -> Res<Done> {
    let path = one_input(cli)?;
    let text = read(path)?;
    let fmt = cli.format;
    let out = match formats::file_kind(&text) {
        Some("pro") => {
            let f = formats::parse_pro(&text, &ctx.env).map_err(in_file(path))?;
            let (pn, qn) = pro_names(&text);
            let d = f.dual();
            match fmt {
                None => formats::write_pro(&d, &qn, &pn),
                Some(Format::Json) => pretty(&pro_json(&d)),
                Some(_) => return Err("the dual of a profunctor prints as text or json".into()),
            }
        }
        Some("ideal") => {
            let d = formats::parse_ideal(&text).map_err(in_file(path))?.alexander_dual();
            match fmt {
                None => formats::write_ideal(&d),
                Some(f) => render_ideal(&d, f),
            }
        }
        Some("cut") => {
            let c = formats::parse_cut(&text, &ctx.env).map_err(in_file(path))?;
            let d = c.alexander_dual();
            match fmt {
                None => {
                    let name = text.split_whitespace().nth(1).unwrap_or("P");
                    formats::write_cut(&d, &format!("op:{name}"))
                }
                Some(Format::Json) => pretty(&json!({"down": d.down_names(), "up": d.poset().names_of(d.up())})),
                Some(_) => return Err("the dual of a cut prints as text or json".into()),
            }
        }
        Some(k) => return Err(format!("{path}:1:1: dual takes pro, ideal or cut files, not `{k}`")),
        None => return Err(format!("{path}:1:1: empty file")),
    };
    Ok(Done::ok(out))
}

fn boundary(cli: &Cli, ctx: &Ctx) -> Res<Done> {
    let input = one_input(cli)?;
    let ascent = cli.verb == Verb::Ascent;
    let v = if input.trim_start().starts_with('[') {
        let f = parse_literal(input.trim(), 1, 1 + input.len() - input.trim_start().len()).map_err(in_file("<literal>"))?;
        let pairs = if ascent { f.ascent() } else { f.graph() }.map_err(plain)?;
        json!({"map": f, "pairs": pairs})
    } else {
        let f = formats::parse_pro(&read(input)?, &ctx.env).map_err(in_file(input))?;
        let b = if ascent { f.ascent() } else { f.graph() };
        json!({"map": describe(&f), "pairs": b.labelled(f.target(), f.source())})
    };
    Ok(Done::ok(pretty(&v)))
}

fn enumerate(cli: &Cli, ctx: &Ctx) -> Res<Done> {
    let v = match &cli.cut {
        Some(_) => procut_json(&ctx.procut(cli)?),
        None => {
            let (p, q) = ctx.pair()?;
            let all = profun_core::profunctor::enumerate_profunctors(&p, &q, DEFAULT_ENUM_LIMIT).map_err(plain)?;
            json!({"count": all.len(), "members": all.iter().map(describe).collect::<Vec<_>>()})
        }
    };
    Ok(Done::ok(pretty(&v)))
}

fn nat_dual(cli: &Cli) -> Res<Done> {
    if cli.inputs.is_empty() {
        return Err("nat-dual expects NatPro literals".into());
    }
    let mut rows = Vec::new();
    for (i, s) in cli.inputs.iter().enumerate() {
        let f = parse_literal(s.trim(), i + 1, 1 + s.len() - s.trim_start().len()).map_err(in_file("<literal>"))?;
        rows.push((f.clone(), f.dual()));
    }
    let text = match cli.format {
        Some(Format::Json) => pretty(
            &rows.iter().map(|(f, d)| json!({"map": f, "dual": d, "class": f.class(), "dual_class": d.class()})).collect::<Vec<_>>(),
        ),
        None => rows.iter().map(|(_, d)| format!("{d}\n")).collect(),
        Some(_) => return Err("nat-dual prints literals or json".into()),
    };
    Ok(Done::ok(text))
}

/// A natcut file, or a family `identity-gap:R`, `tower:R`, `steps:R`, `random:SEED`.
fn natcut_input(s: &str) -> Res<NatCut> {
    if std::path::Path::new(s).exists() {
        formats::parse_natcut(&read(s)?).map_err(in_file(s))
    } else {
        formats::natcut_family(s).map_err(|e| format!("{e}; expected a natcut file or a family"))
    }
}

fn parse_box(s: &str) -> Res<(u64, u64)> {
    let (q, p) = s.split_once('x').ok_or_else(|| format!("--box expects QxP, got `{s}`"))?;
    let n = |x: &str| x.trim().parse::<u64>().map_err(|_| format!("--box expects QxP, got `{s}`"));
    Ok((n(q)?, n(p)?))
}

fn nat_gap(cli: &Cli) -> Res<Done> {
    let cut = natcut_input(one_input(cli)?)?;
    let bounds = SearchBounds::new(cli.max_prefix, cli.max_value.unwrap_or(cli.max_prefix as u64 + 2));
    let gap = cut.gap_search(&bounds);
    let mut verified = gap.verdict == profun_core::natcut::GapVerdict::DedekindCut;
    let mut report = json!({"cut": natcut_json(&cut), "bounds": bounds, "gap": gap});
    if let Some(b) = &cli.window {
        let (q, p) = parse_box(b)?;
        let w = cut.windowed_check(q, p, &sweep_opts(cli)).map_err(plain)?;
        verified &= w.holds;
        report["window"] = json!(w);
    }
    if cut.filter().is_empty() && !cut.ideal().is_empty() {
        report["clopen"] = json!(clopen_check(cut.ideal(), 1 << 20).map_err(plain)?);
    }
    Ok(Done { text: pretty(&report), verified })
}
