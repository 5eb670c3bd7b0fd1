//! Argument handling and dispatch for the `k3lat` binary. `run` never
//! prints; the binary decides what goes to stdout and stderr.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use k3lat::correspondence::{
    admits_shioda_inose, correspondence_chain, grid, jacobian_baseline, kummer_halving, Outcome,
};
use k3lat::discriminant::{discriminant_group, genus_certificate};
use k3lat::embeddings::{
    embed_t_in_lambda, embed_tn_in_u3, saturate_phi, LatticeMap,
};
use k3lat::fibration::{
    fiber_class_check, fiber_report, pencil_degree, section_check, configuration_report,
    CurveGraph, DivisorClass,
};
use k3lat::normal_form::smith_normal_form;
use k3lat::rational_forms::q_equivalent;
use k3lat::reproduction::{self, SweepConfig};
use k3lat::{names, Lattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Verified,
    Refuted,
    Unknown,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified => 0,
            Verdict::Refuted | Verdict::Unknown => 1,
            Verdict::Error => 2,
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Verified
        } else {
            Verdict::Refuted
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    pub verdict: Verdict,
    pub certificate: Value,
    /// Human-readable lines; not part of the certificate.
    pub summary: Vec<String>,
    pub elapsed_ms: u128,
    /// Set when `--json` was given.
    pub json: bool,
    pub out: Option<PathBuf>,
    /// Text clap wants shown (help, version) instead of a result.
    pub display: Option<String>,
}

impl CommandResult {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    /// `{"verdict", "certificate"}`, the machine-readable stdout payload.
    pub fn payload(&self) -> Value {
        json!({"verdict": self.verdict, "certificate": self.certificate})
    }
}

#[derive(Parser, Debug)]
#[command(name = "k3lat", version, about = "Exact lattice certificates for K3 transcendental lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print `{"verdict", "certificate"}` as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the certificate (or report) to this file.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a lattice and report its invariants.
    Lattice(LatticeArgs),
    /// Embeddings into the K3 lattice and into U³.
    Embed(EmbedArgs),
    /// Decide rational equivalence of two lattices.
    Qequiv(PairArgs),
    /// Compare genera through discriminant forms.
    Genus(PairArgs),
    /// Correspondence certificates between X(k,m,n) surfaces.
    Correspond(CorrespondArgs),
    /// Divisor arithmetic on a curve configuration.
    Fibration(FibrationArgs),
    /// Run the full reproduction suite and write a report.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct LatticeArgs {
    #[command(subcommand)]
    action: LatticeAction,
}

#[derive(Subcommand, Debug)]
enum LatticeAction {
    /// `make T 2 2 2`, `make U^2+<-4>`, `make Lambda`, or a JSON file.
    Make {
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
        /// Include determinant, signature, parity and discriminant group.
        #[arg(long)]
        invariants: bool,
    },
}

#[derive(Args, Debug)]
struct EmbedArgs {
    #[command(subcommand)]
    action: EmbedAction,
}

#[derive(Subcommand, Debug)]
enum EmbedAction {
    /// T(k,m,n) ↪ Lambda.
    Lambda { k: i64, m: i64, n: i64 },
    /// Saturation of the rational embedding of T(k,m,n) in U³.
    Phi { k: i64, m: i64, n: i64 },
    /// U² ⊕ ⟨−2n⟩ ↪ U³.
    U3 { n: i64 },
    /// Search for a primitive embedding of a lattice into U³.
    ShiodaInose {
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
    },
    /// Re-check a map file `{"src","dst","matrix"}`.
    Check { file: PathBuf },
}

#[derive(Args, Debug)]
struct PairArgs {
    /// Two lattices: JSON files or inline names (`T 1 1 1`, `U(2)^2+<-4>`).
    #[arg(required = true, num_args = 2..)]
    lattices: Vec<String>,
}

#[derive(Args, Debug)]
struct CorrespondArgs {
    /// `k,m,n` of the left surface.
    #[arg(long, requires = "right")]
    left: Option<String>,
    #[arg(long, requires = "left")]
    right: Option<String>,
    /// All chains over `a..b` in each coordinate, e.g. `1..4`.
    #[arg(long, conflicts_with_all = ["left", "jacobian", "halve"])]
    sweep: Option<String>,
    /// The X(1,1,1), X(2,2,2), JC baseline.
    #[arg(long)]
    jacobian: bool,
    /// Decide whether a lattice is U(2)² ⊕ T′(2).
    #[arg(long, num_args = 1..)]
    halve: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FiberCheck {
    All,
    Fiber,
    Type,
    Section,
    Pencil,
}

#[derive(Args, Debug)]
struct FibrationArgs {
    /// Graph JSON; the shipped configuration when omitted.
    graph: Option<PathBuf>,
    /// Divisor JSON file or a shipped fiber name (F1, F2, F1', F2').
    #[arg(long = "fiber")]
    fibers: Vec<String>,
    #[arg(long, value_enum, default_value = "all")]
    check: FiberCheck,
    /// Curve tested as a section of each fiber.
    #[arg(long)]
    section: Option<String>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Grid bounds for k, m and n in the grid-based checks.
    #[arg(long, num_args = 3, value_names = ["K", "M", "N"])]
    sweep_range: Option<Vec<i64>>,
    /// Run one check only (1 to 9).
    #[arg(long)]
    only: Option<u8>,
}

/// Where `sweep` writes its report when `--out` is not given.
pub const DEFAULT_REPORT: &str = "k3lat_report.json";

struct Output {
    verdict: Verdict,
    certificate: Value,
    summary: Vec<String>,
}

fn output(verdict: Verdict, certificate: Value, summary: Vec<String>) -> anyhow::Result<Output> {
    Ok(Output {
        verdict,
        certificate,
        summary,
    })
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let start = Instant::now();
    let finish = |verdict, certificate, summary, json, out, display| CommandResult {
        verdict,
        certificate,
        summary,
        elapsed_ms: start.elapsed().as_millis(),
        json,
        out,
        display,
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    finish(Verdict::Verified, Value::Null, vec![], false, None, Some(text))
                }
                _ => {
                    let text = text.trim().trim_start_matches("error: ").to_string();
                    finish(Verdict::Error, json!({"error": text}), vec![text], false, None, None)
                }
            };
        }
    };
    let mut out = cli.out.clone();
    if out.is_none() && matches!(cli.command, Command::Sweep(_)) {
        out = Some(PathBuf::from(DEFAULT_REPORT));
    }
    let json_flag = cli.json;
    match dispatch(cli.command, out.as_deref()) {
        Ok(o) => finish(o.verdict, o.certificate, o.summary, json_flag, out, None),
        Err(e) => {
            let msg = format!("{e:#}");
            finish(Verdict::Error, json!({"error": msg}), vec![msg], json_flag, None, None)
        }
    }
}

fn dispatch(cmd: Command, out: Option<&Path>) -> anyhow::Result<Output> {
    match cmd {
        Command::Lattice(a) => lattice_cmd(a),
        Command::Embed(a) => embed_cmd(a),
        Command::Qequiv(a) => qequiv_cmd(a),
        Command::Genus(a) => genus_cmd(a),
        Command::Correspond(a) => correspond_cmd(a, out),
        Command::Fibration(a) => fibration_cmd(a),
        Command::Sweep(a) => sweep_cmd(a),
    }
}

/// Splits arguments into lattices. Each is a JSON file, an inline name, or
/// `T k m n` spread over four arguments.
pub fn parse_lattices(tokens: &[String]) -> anyhow::Result<Vec<Lattice>> {
    // "T 1 1 1" may arrive quoted as one argument.
    let tokens: Vec<String> = tokens
        .iter()
        .flat_map(|t| {
            if t.trim_start().starts_with("T ") {
                t.split_whitespace().map(str::to_owned).collect()
            } else {
                vec![t.clone()]
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let t = tokens[i].trim();
        if t == "T" && tokens.len() >= i + 4 {
            let args: Vec<i64> = tokens[i + 1..i + 4]
                .iter()
                .map(|s| s.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .with_context(|| format!("`T` needs three integers, got {:?}", &tokens[i + 1..i + 4]))?;
            out.push(names::parse(&format!("T({},{},{})", args[0], args[1], args[2]))?);
            i += 4;
            continue;
        }
        out.push(load_lattice(t)?);
        i += 1;
    }
    Ok(out)
}

fn load_lattice(arg: &str) -> anyhow::Result<Lattice> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {arg}"))?;
        return Lattice::from_json(&v).with_context(|| format!("loading lattice from {arg}"));
    }
    names::parse(arg).map_err(|e| anyhow!("{arg:?} is neither a file nor a lattice name ({e})"))
}

fn one_lattice(tokens: &[String]) -> anyhow::Result<Lattice> {
    let mut ls = parse_lattices(tokens)?;
    if ls.len() != 1 {
        bail!("expected one lattice, got {}", ls.len());
    }
    Ok(ls.remove(0))
}

fn two_lattices(tokens: &[String]) -> anyhow::Result<(Lattice, Lattice)> {
    let ls = parse_lattices(tokens)?;
    match <[Lattice; 2]>::try_from(ls) {
        Ok([a, b]) => Ok((a, b)),
        Err(v) => bail!("expected two lattices, got {}", v.len()),
    }
}

fn invariants(l: &Lattice) -> Value {
    let mut v = json!({
        "name": l.name(),
        "rank": l.rank(),
        "determinant": k3lat::json::int_to_value(&l.determinant()),
        "signature": [l.signature().s_plus, l.signature().s_minus, l.signature().s_zero],
        "even": l.is_even(),
        "unimodular": l.is_unimodular(),
    });
    if let Ok(g) = discriminant_group(l) {
        v["discriminant_group"] = serde_json::to_value(&g).unwrap();
    }
    v
}

fn lattice_cmd(a: LatticeArgs) -> anyhow::Result<Output> {
    let LatticeAction::Make { spec, invariants: with_inv } = a.action;
    let l = one_lattice(&spec)?;
    let mut cert = json!({"lattice": l.to_json()});
    let mut summary = vec![format!("{} (rank {})", l.name(), l.rank())];
    if with_inv {
        cert["invariants"] = invariants(&l);
        summary.push(format!("det {}", l.determinant()));
        summary.push(format!("signature {}", l.signature()));
        summary.push(if l.is_even() { "even" } else { "odd" }.to_string());
    }
    output(Verdict::Verified, cert, summary)
}

fn map_certificate(map: &LatticeMap) -> anyhow::Result<Value> {
    let snf = smith_normal_form(&map.matrix);
    Ok(json!({
        "map": map.to_json(),
        "isometric": map.is_isometric_embedding(),
        "primitive": map.is_isometric_embedding() && map.is_primitive()?,
        "elementary_divisors": snf.divisors.iter().map(k3lat::json::int_to_value).collect::<Vec<_>>(),
    }))
}

fn embed_cmd(a: EmbedArgs) -> anyhow::Result<Output> {
    match a.action {
        EmbedAction::Lambda { k, m, n } => {
            let map = embed_t_in_lambda(k, m, n)?;
            let cert = map_certificate(&map)?;
            let ok = cert["primitive"] == json!(true);
            output(
                Verdict::from_bool(ok),
                cert,
                vec![format!("{} ↪ Lambda: primitive isometric embedding = {ok}", map.src.name())],
            )
        }
        EmbedAction::U3 { n } => {
            let map = embed_tn_in_u3(n)?;
            let cert = map_certificate(&map)?;
            let ok = cert["primitive"] == json!(true);
            output(
                Verdict::from_bool(ok),
                cert,
                vec![format!("{} ↪ U3: primitive isometric embedding = {ok}", map.src.name())],
            )
        }
        EmbedAction::Phi { k, m, n } => {
            let sat = saturate_phi(k, m, n)?;
            let l = &sat.saturation.lattice;
            let cert = json!({
                "saturation": l.to_json(),
                "basis": k3lat::json::int_matrix::to_value(&sat.saturation.inclusion.matrix),
                "invariants": invariants(l),
                "isometry_from": sat.isometry.src.name(),
                "isometry": k3lat::json::int_matrix::to_value(&sat.isometry.matrix),
            });
            output(
                Verdict::Verified,
                cert,
                vec![format!(
                    "saturation of T({k},{m},{n}) in U3: det {}, signature {}, ≅ {}",
                    l.determinant(),
                    l.signature(),
                    sat.isometry.src.name()
                )],
            )
        }
        EmbedAction::ShiodaInose { spec } => {
            let l = one_lattice(&spec)?;
            let (verdict, cert, line) = outcome_parts(admits_shioda_inose(&l)?, |m| map_certificate(&m))?;
            output(verdict, cert, vec![format!("{} ↪ U3: {line}", l.name())])
        }
        EmbedAction::Check { file } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let map = LatticeMap::from_json(&serde_json::from_str(&text)?)?;
            let cert = map_certificate(&map)?;
            let ok = cert["primitive"] == json!(true);
            output(Verdict::from_bool(ok), cert, vec![format!("primitive isometric embedding = {ok}")])
        }
    }
}

fn outcome_parts<T>(
    o: Outcome<T>,
    render: impl FnOnce(T) -> anyhow::Result<Value>,
) -> anyhow::Result<(Verdict, Value, String)> {
    Ok(match o {
        Outcome::Found(x) => (Verdict::Verified, json!({"outcome": "FOUND", "witness": render(x)?}), "found".into()),
        Outcome::Refuted(why) => (Verdict::Refuted, json!({"outcome": "REFUTED", "reason": why}), format!("refuted: {why}")),
        Outcome::Unknown(why) => (Verdict::Unknown, json!({"outcome": "UNKNOWN", "reason": why}), format!("unknown: {why}")),
    })
}

fn qequiv_cmd(a: PairArgs) -> anyhow::Result<Output> {
    let (l, r) = two_lattices(&a.lattices)?;
    let c = q_equivalent(&l, &r)?;
    let mut summary = vec![format!(
        "{} vs {}: square classes {} / {}",
        l.name(),
        r.name(),
        c.square_class.0,
        c.square_class.1
    )];
    let bad = c.hasse_mismatches();
    if !bad.is_empty() {
        summary.push(format!(
            "Hasse invariants differ at {}",
            bad.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
        ));
    }
    output(Verdict::from_bool(c.verdict), serde_json::to_value(&c)?, summary)
}

fn genus_cmd(a: PairArgs) -> anyhow::Result<Output> {
    let (l, r) = two_lattices(&a.lattices)?;
    let c = genus_certificate(&l, &r)?;
    let summary = vec![format!(
        "{} vs {}: signatures match = {}, discriminant forms isomorphic = {}",
        l.name(),
        r.name(),
        c.signature_match,
        c.isomorphism.is_some()
    )];
    output(Verdict::from_bool(c.verdict), serde_json::to_value(&c)?, summary)
}

fn parse_triple(s: &str) -> anyhow::Result<(i64, i64, i64)> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("expected k,m,n, got {s:?}"))?;
    match v[..] {
        [k, m, n] => Ok((k, m, n)),
        _ => bail!("expected k,m,n, got {s:?}"),
    }
}

fn parse_range(s: &str) -> anyhow::Result<i64> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| anyhow!("expected a..b, got {s:?}"))?;
    let lo: i64 = lo.trim().parse().context("range start")?;
    let hi: i64 = hi.trim().trim_start_matches('=').parse().context("range end")?;
    if lo != 1 || hi < 1 {
        bail!("sweep ranges start at 1, got {s:?}");
    }
    Ok(hi)
}

fn correspond_cmd(a: CorrespondArgs, out: Option<&Path>) -> anyhow::Result<Output> {
    if let (Some(l), Some(r)) = (&a.left, &a.right) {
        let (k, m, n) = parse_triple(l)?;
        let (k2, m2, n2) = parse_triple(r)?;
        let c = correspondence_chain(k, m, n, k2, m2, n2)?;
        let summary = c
            .chain
            .iter()
            .map(|l| format!("{:?}{}: {}", l.kind, if l.asserted { " (asserted)" } else { "" }, l.note))
            .collect();
        return output(Verdict::Verified, serde_json::to_value(&c)?, summary);
    }
    if a.jacobian {
        let c = jacobian_baseline()?;
        let summary = vec![format!("{} ~ {} with {} links", c.left.label, c.right.label, c.chain.len())];
        return output(Verdict::Verified, serde_json::to_value(&c)?, summary);
    }
    if let Some(spec) = &a.halve {
        let l = one_lattice(spec)?;
        let (verdict, cert, line) = outcome_parts(kummer_halving(&l)?, |d| Ok(serde_json::to_value(&d)?))?;
        return output(verdict, cert, vec![format!("{} as U(2)^2+T'(2): {line}", l.name())]);
    }
    if let Some(r) = &a.sweep {
        return correspond_sweep(parse_range(r)?, out);
    }
    bail!("give --left/--right, --jacobian, --halve or --sweep")
}

/// Writes one certificate per chain next to the graph file and lists them
/// as edges.
fn correspond_sweep(bound: i64, out: Option<&Path>) -> anyhow::Result<Output> {
    use rayon::prelude::*;
    let nodes = grid([bound; 3]);
    let cert_dir = out.map(|p| {
        let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        p.with_file_name(format!("{stem}_certificates"))
    });
    if let Some(d) = &cert_dir {
        std::fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
    }
    let pairs: Vec<_> = nodes.iter().flat_map(|&a| nodes.iter().map(move |&b| (a, b))).collect();
    let edges: Vec<anyhow::Result<Value>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let c = correspondence_chain(a.0, a.1, a.2, b.0, b.1, b.2)?;
            let text = c.to_json_string();
            k3lat::correspondence::CorrespondenceCertificate::from_json_verified(&text)?;
            let path = match &cert_dir {
                Some(d) => {
                    let p = d.join(format!("{}_{}_{}__{}_{}_{}.json", a.0, a.1, a.2, b.0, b.1, b.2));
                    std::fs::write(&p, &text).with_context(|| format!("writing {}", p.display()))?;
                    Value::String(p.to_string_lossy().into_owned())
                }
                None => Value::Null,
            };
            Ok(json!({"left": [a.0, a.1, a.2], "right": [b.0, b.1, b.2], "verified": true, "certificate": path}))
        })
        .collect();
    let edges = edges.into_iter().collect::<anyhow::Result<Vec<_>>>()?;
    let graph = json!({
        "nodes": nodes.iter().map(|t| json!([t.0, t.1, t.2])).collect::<Vec<_>>(),
        "edges": edges,
    });
    let summary = vec![format!("{} chains verified over 1..{bound}", pairs.len())];
    output(Verdict::Verified, graph, summary)
}

fn load_graph(p: &Option<PathBuf>) -> anyhow::Result<CurveGraph> {
    match p {
        None => Ok(CurveGraph::shipped()),
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(CurveGraph::from_json(&serde_json::from_str(&text)?)?)
        }
    }
}

fn load_divisor(arg: &str) -> anyhow::Result<DivisorClass> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        let mut d = DivisorClass::from_json(&serde_json::from_str(&text)?)?;
        if d.name.is_empty() {
            d.name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        }
        return Ok(d);
    }
    Ok(DivisorClass::shipped_fiber(arg)?)
}

fn fibration_cmd(a: FibrationArgs) -> anyhow::Result<Output> {
    let g = load_graph(&a.graph)?;
    if a.fibers.is_empty() && matches!(a.check, FiberCheck::All) && a.section.is_none() {
        let r = configuration_report(&g)?;
        let mut summary: Vec<String> = r
            .fibers
            .iter()
            .map(|f| {
                format!(
                    "{}: fiber = {}, type {}{}",
                    f.fiber,
                    f.is_fiber,
                    f.dynkin.type_name,
                    if f.discrepancy {
                        format!(" (stated {})", f.stated_type.clone().unwrap_or_default())
                    } else {
                        String::new()
                    }
                )
            })
            .collect();
        summary.push(format!("(F1+F1')^2 = {}", r.pencil_degree));
        return output(Verdict::from_bool(r.arithmetic_holds()), serde_json::to_value(&r)?, summary);
    }
    let fibers = if a.fibers.is_empty() {
        DivisorClass::shipped_fibers()
    } else {
        a.fibers.iter().map(|f| load_divisor(f)).collect::<anyhow::Result<Vec<_>>>()?
    };
    let mut ok = true;
    let mut summary = Vec::new();
    let mut cert = json!({});
    let want = |c: FiberCheck| matches!(a.check, FiberCheck::All) || std::mem::discriminant(&a.check) == std::mem::discriminant(&c);
    if want(FiberCheck::Fiber) {
        let mut rows = Vec::new();
        for f in &fibers {
            let r = fiber_class_check(&g, f)?;
            ok &= r;
            summary.push(format!("{}: fiber class = {r}", f.name));
            rows.push(json!({"fiber": f.name, "is_fiber": r}));
        }
        cert["fiber"] = json!(rows);
    }
    if want(FiberCheck::Type) {
        let mut rows = Vec::new();
        for f in &fibers {
            let r = fiber_report(&g, f)?;
            ok &= !r.dynkin.is_none();
            summary.push(format!("{}: type {}", f.name, r.dynkin.type_name));
            rows.push(serde_json::to_value(&r)?);
        }
        cert["type"] = json!(rows);
    }
    if want(FiberCheck::Section) {
        if let Some(s) = &a.section {
            let mut rows = Vec::new();
            for f in &fibers {
                let r = section_check(&g, s, f)?;
                ok &= r;
                summary.push(format!("{s} is a section of {} = {r}", f.name));
                rows.push(json!({"curve": s, "fiber": f.name, "section": r}));
            }
            cert["section"] = json!(rows);
        } else if matches!(a.check, FiberCheck::Section) {
            bail!("--check section needs --section CURVE");
        }
    }
    if want(FiberCheck::Pencil) {
        if fibers.len() >= 2 {
            let d = pencil_degree(&g, &fibers[0], &fibers[1])?;
            summary.push(format!("({}+{})^2 = {d}", fibers[0].name, fibers[1].name));
            cert["pencil_degree"] = json!({"fibers": [fibers[0].name, fibers[1].name], "value": d});
        } else if matches!(a.check, FiberCheck::Pencil) {
            bail!("--check pencil needs two --fiber arguments");
        }
    }
    output(Verdict::from_bool(ok), cert, summary)
}

fn sweep_cmd(a: SweepArgs) -> anyhow::Result<Output> {
    let mut cfg = SweepConfig::default();
    if let Some(r) = &a.sweep_range {
        let bounds = [r[0], r[1], r[2]];
        if bounds.iter().any(|&b| b < 1) {
            bail!("--sweep-range bounds must be ≥ 1");
        }
        cfg = cfg.with_grid(bounds);
    }
    let mut summary = Vec::new();
    let criteria = match a.only {
        Some(id) => vec![reproduction::run_criterion(id, &cfg)?],
        None => reproduction::run_all(&cfg, |_, _| {})?.criteria,
    };
    for c in &criteria {
        summary.push(format!(
            "[{}] {} {} ({} checks)",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            c.checks
        ));
    }
    let report = reproduction::Report { criteria };
    output(Verdict::from_bool(report.passed()), serde_json::to_value(&report)?, summary)
}
