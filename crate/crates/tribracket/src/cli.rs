//! Command-line front end. Exit codes: 0 success, 1 semantic failure
//! (invalid structure, changed invariant, table mismatch), 2 input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::ops::ControlFlow;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tribracket_core::enumerate::for_each_tribracket;
use tribracket_core::tribracket::validate_tribracket;
use tribracket_core::{
    alexander_counting, constant_module, counting_invariant, module_enhancement, parse_pd, search_modules, Diagram,
    Tribracket, XModule,
};

use crate::atlas::{Atlas, Components};
use crate::chains::random_chain;
use crate::format::{
    load_module, load_module_file, load_tribracket, load_tribracket_table, multiset_entries, one_based, read_text,
    tensor_text, InvariantRecord, LoadError, ModuleJson, TribracketJson,
};
use crate::tables::{reproduce, table_spec, TABLES};

#[derive(Debug, Parser)]
#[command(name = "tribracket", version, about = "Tribracket colorings and module enhancements of knot diagrams")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,
    /// Worker threads; defaults to the number of cores. Output order does not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Alternate atlas file with `NAME: PD` lines.
    #[arg(long, global = true, value_name = "FILE")]
    pub atlas: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the tribracket axioms, and the module identities if a module is given.
    Validate {
        #[command(flatten)]
        structure: StructureArgs,
    },
    /// Counting invariant, or the enhancement polynomial when a module is given.
    Invariant {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[command(flatten)]
        structure: StructureArgs,
    },
    /// Enumerate tribrackets of a given size, or modules over a tribracket.
    Search {
        /// Enumerate all tribrackets with this many elements.
        #[arg(long, conflicts_with_all = ["tribracket", "modulus"], required_unless_present = "tribracket")]
        size: Option<usize>,
        /// Base tribracket for a module search (builtin name or file).
        #[arg(long, requires = "modulus")]
        tribracket: Option<String>,
        /// Coefficient ring Z_N for a module search.
        #[arg(long)]
        modulus: Option<u64>,
        /// Stop after this many results.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Recompute the published enhancement tables.
    Tables {
        /// V1, V2, V3, four-element or all.
        #[arg(long, default_value = "all")]
        set: String,
    },
    /// Regions, signs and crossing roles of a diagram.
    Diagram {
        #[command(flatten)]
        diagram: DiagramArgs,
    },
    /// Apply random Reidemeister I/II moves and check the invariants do not change.
    CheckMoves {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[command(flatten)]
        structure: StructureArgs,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Names in the atlas.
    List {
        #[arg(long)]
        max_crossings: Option<usize>,
        /// Exact number of components.
        #[arg(long, conflicts_with_all = ["knots", "links"])]
        components: Option<usize>,
        #[arg(long, conflicts_with = "links")]
        knots: bool,
        #[arg(long)]
        links: bool,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct DiagramArgs {
    /// Atlas name, or U(k) for the k-component unlink.
    #[arg(long)]
    pub link: Option<String>,
    /// File holding a PD code; `-` reads standard input.
    #[arg(long, value_name = "FILE")]
    pub pd: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StructureArgs {
    /// Builtin name (x2, x3, x4) or tensor file.
    #[arg(long, conflicts_with = "alexander")]
    pub tribracket: Option<String>,
    /// Alexander tribracket over Z_N with units x and y.
    #[arg(long, value_name = "N,x,y", value_parser = parse_triple)]
    pub alexander: Option<(u64, u64, u64)>,
    /// Builtin name (v, v1, v2, v3, x4), module file, or `constant:x,y`.
    #[arg(long)]
    pub module: Option<String>,
    /// Coefficient ring for `constant:x,y` modules.
    #[arg(long)]
    pub modulus: Option<u64>,
}

fn parse_triple(s: &str) -> Result<(u64, u64, u64), String> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| format!("{p:?} is not a number")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [n, x, y] => Ok((n, x, y)),
        _ => Err("expected N,x,y".into()),
    }
}

/// How a command failed.
#[derive(Debug)]
pub enum Failure {
    /// Exit code 1.
    Semantic(String),
    /// Exit code 2.
    Input(String),
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Input(e) => Failure::Input(e.to_string()),
            LoadError::Invalid(m) => Failure::Semantic(m),
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

/// Command output and outcome. `out` goes to stdout whatever the outcome.
pub struct Outcome {
    pub out: String,
    pub result: Result<(), Failure>,
}

pub fn run() -> ExitCode {
    run_with(std::env::args_os())
}

pub fn run_with<I: IntoIterator<Item = T>, T: Into<OsString> + Clone>(args: I) -> ExitCode {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = execute(&cli);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(outcome.out.as_bytes());
    let _ = stdout.flush();
    match outcome.result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Semantic(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    let mut out = String::new();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => return Outcome { out, result: Err(input(e)) },
    };
    let result = pool.install(|| dispatch(cli, &mut out));
    Outcome { out, result }
}

struct Ctx<'a> {
    cli: &'a Cli,
    atlas: Atlas,
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<(), Failure> {
    let atlas = match &cli.atlas {
        Some(p) => Atlas::load(p).map_err(input)?,
        None => Atlas::builtin().clone(),
    };
    let ctx = Ctx { cli, atlas };
    match &cli.command {
        Command::Validate { structure } => cmd_validate(&ctx, structure, out),
        Command::Invariant { diagram, structure } => cmd_invariant(&ctx, diagram, structure, out),
        Command::Search { size, tribracket, modulus, limit } => {
            cmd_search(&ctx, *size, tribracket.as_deref(), *modulus, *limit, out)
        }
        Command::Tables { set } => cmd_tables(&ctx, set, out),
        Command::Diagram { diagram } => cmd_diagram(&ctx, diagram, out),
        Command::CheckMoves { diagram, structure, steps, seed } => {
            cmd_check_moves(&ctx, diagram, structure, *steps, *seed, out)
        }
        Command::List { max_crossings, components, knots, links } => {
            let filter = match (components, knots, links) {
                (Some(k), _, _) => Components::Exactly(*k),
                (None, true, _) => Components::Exactly(1),
                (None, _, true) => Components::AtLeast(2),
                _ => Components::Any,
            };
            let names = ctx.atlas.list_entries(*max_crossings, filter);
            emit(ctx.cli.format, out, &names, || names.iter().map(|n| format!("{n}\n")).collect());
            Ok(())
        }
    }
}

fn emit<T: Serialize>(format: OutputFormat, out: &mut String, value: &T, text: impl FnOnce() -> String) {
    match format {
        OutputFormat::Text => out.push_str(&text()),
        OutputFormat::Json => {
            out.push_str(&serde_json::to_string(value).expect("serializable"));
            out.push('\n');
        }
    }
}

fn resolve_diagram(ctx: &Ctx, args: &DiagramArgs) -> Result<(String, Diagram), Failure> {
    if let Some(name) = &args.link {
        return Ok((name.clone(), ctx.atlas.resolve(name).map_err(input)?));
    }
    let path = args.pd.as_ref().expect("clap group");
    let text = read_text(path).map_err(input)?;
    let pd = parse_pd(&text).map_err(input)?;
    let d = Diagram::new(pd).map_err(input)?;
    Ok((path.display().to_string(), d))
}

fn resolve_tribracket(s: &StructureArgs) -> Result<Option<Tribracket>, Failure> {
    if let Some((n, x, y)) = s.alexander {
        return Tribracket::alexander(n, x, y).map(Some).map_err(input);
    }
    s.tribracket.as_deref().map(load_tribracket).transpose().map_err(Failure::from)
}

fn resolve_module(s: &StructureArgs, base: Option<&Tribracket>) -> Result<Option<XModule>, Failure> {
    let Some(src) = &s.module else {
        return Ok(None);
    };
    if let Some(c) = src.strip_prefix("constant:") {
        let (x, y) = c
            .split_once(',')
            .and_then(|(x, y)| Some((x.trim().parse().ok()?, y.trim().parse().ok()?)))
            .ok_or_else(|| Failure::Input(format!("expected constant:x,y, found {src:?}")))?;
        let base = base.ok_or_else(|| Failure::Input("a constant module needs --tribracket or --alexander".into()))?;
        let n = s.modulus.ok_or_else(|| Failure::Input("a constant module needs --modulus".into()))?;
        return constant_module(base, x, y, n).map(Some).map_err(input);
    }
    let m = load_module(src, base)?;
    if let Some(n) = s.modulus {
        if n != m.modulus() {
            return Err(Failure::Input(format!("--modulus {n} disagrees with the module's Z_{}", m.modulus())));
        }
    }
    Ok(Some(m))
}

/// Tribracket and optional module. Without a tribracket the module's own base is used.
fn resolve_structure(s: &StructureArgs) -> Result<(Tribracket, Option<XModule>), Failure> {
    let t = resolve_tribracket(s)?;
    let m = resolve_module(s, t.as_ref())?;
    match (t, m) {
        (Some(t), m) => Ok((t, m)),
        (None, Some(m)) => Ok((m.base().clone(), Some(m))),
        (None, None) => Err(Failure::Input("give --tribracket, --alexander or --module".into())),
    }
}

#[derive(Serialize)]
struct ValidationReport {
    tribracket: String,
    tribracket_valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    module_valid: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
}

fn cmd_validate(ctx: &Ctx, s: &StructureArgs, out: &mut String) -> Result<(), Failure> {
    let table = match (&s.alexander, &s.tribracket) {
        (Some(_), _) => Some(resolve_tribracket(s)?.expect("alexander").table().clone()),
        (None, Some(src)) => Some(load_tribracket_table(src).map_err(input)?),
        (None, None) => None,
    };
    let mut report =
        ValidationReport { tribracket: String::new(), tribracket_valid: true, module_valid: None, witness: None };
    let mut base = None;
    if let Some(table) = &table {
        report.tribracket = tensor_text(&table.map(|&v| v + 1));
        match validate_tribracket(table) {
            Ok(()) => base = Some(Tribracket::new(table.clone()).expect("validated")),
            Err(e) => {
                report.tribracket_valid = false;
                report.witness = Some(e.to_string());
            }
        }
    }
    if report.tribracket_valid {
        if let Some(src) = &s.module {
            let result = if src.starts_with("constant:") {
                resolve_module(s, base.as_ref()).map(|_| ())
            } else {
                let file = load_module_file(src).map_err(input)?;
                if report.tribracket.is_empty() {
                    if let Some(b) = &file.base {
                        report.tribracket = tensor_text(&b.map(|&v| v + 1));
                    }
                }
                file.into_module(base.as_ref()).map(|_| ()).map_err(Failure::from)
            };
            match result {
                Ok(()) => report.module_valid = Some(true),
                Err(Failure::Semantic(m)) => {
                    report.module_valid = Some(false);
                    report.witness = Some(m);
                }
                Err(e) => return Err(e),
            }
        }
    }
    if table.is_none() && s.module.is_none() {
        return Err(Failure::Input("give --tribracket, --alexander or --module".into()));
    }
    let valid = report.tribracket_valid && report.module_valid != Some(false);
    emit(ctx.cli.format, out, &report, || {
        let mut t = String::new();
        if table.is_some() {
            let verdict = if report.tribracket_valid { "valid" } else { "invalid" };
            writeln!(t, "tribracket: {verdict}").unwrap();
        }
        if let Some(v) = report.module_valid {
            writeln!(t, "module: {}", if v { "valid" } else { "invalid" }).unwrap();
        }
        if let Some(w) = &report.witness {
            writeln!(t, "witness: {w}").unwrap();
        }
        t
    });
    if valid {
        Ok(())
    } else {
        let what = if report.tribracket_valid { "module" } else { "tribracket" };
        Err(Failure::Semantic(format!("{what} is invalid")))
    }
}

fn cmd_invariant(ctx: &Ctx, da: &DiagramArgs, s: &StructureArgs, out: &mut String) -> Result<(), Failure> {
    let (name, d) = resolve_diagram(ctx, da)?;
    let (t, m) = resolve_structure(s)?;
    let mut record = InvariantRecord {
        diagram: name,
        pd: d.pd().to_string(),
        tribracket: one_based(&t),
        module: None,
        count: 0,
        polynomial: None,
        multiset: None,
    };
    if let Some(m) = &m {
        let e = module_enhancement(m, &d);
        record.count = e.total();
        record.polynomial = Some(e.polynomial().to_string());
        record.multiset = Some(multiset_entries(&e));
        record.module = Some(ModuleJson::of(m));
    } else {
        record.count = counting_invariant(&t, &d);
        if let Some((n, x, y)) = s.alexander {
            let linear = alexander_counting(n, x, y, &d).map_err(input)?;
            if linear != u128::from(record.count) {
                return Err(Failure::Semantic(format!(
                    "enumeration gives {} colorings but the kernel has {linear} elements",
                    record.count
                )));
            }
        }
    }
    emit(ctx.cli.format, out, &record, || match &record.polynomial {
        Some(p) => format!("{p}\n"),
        None => format!("{}\n", record.count),
    });
    Ok(())
}

fn cmd_search(
    ctx: &Ctx,
    size: Option<usize>,
    tribracket: Option<&str>,
    modulus: Option<u64>,
    limit: Option<usize>,
    out: &mut String,
) -> Result<(), Failure> {
    let json = ctx.cli.format == OutputFormat::Json;
    let limit = limit.unwrap_or(usize::MAX);
    if let Some(n) = size {
        if n == 0 {
            return Err(Failure::Input("--size must be positive".into()));
        }
        let mut seen = 0;
        let _ = for_each_tribracket(n, |t| {
            if seen == limit {
                return ControlFlow::Break(());
            }
            seen += 1;
            if json {
                let j = TribracketJson { tribracket: one_based(t) };
                writeln!(out, "{}", serde_json::to_string(&j).unwrap()).unwrap();
            } else {
                writeln!(out, "{t}").unwrap();
            }
            ControlFlow::Continue(())
        });
        return Ok(());
    }
    let t = load_tribracket(tribracket.expect("clap"))?;
    let n = modulus.expect("clap");
    for m in search_modules(&t, n, Some(limit)).map_err(input)? {
        if json {
            writeln!(out, "{}", serde_json::to_string(&ModuleJson::of(&m)).unwrap()).unwrap();
        } else {
            writeln!(out, "{m}").unwrap();
        }
    }
    Ok(())
}

fn cmd_tables(ctx: &Ctx, set: &str, out: &mut String) -> Result<(), Failure> {
    let specs: Vec<_> = if set.eq_ignore_ascii_case("all") {
        TABLES.iter().collect()
    } else {
        vec![table_spec(set).ok_or_else(|| {
            Failure::Input(format!("unknown table {set:?}; expected V1, V2, V3, four-element or all"))
        })?]
    };
    let reports = specs.iter().map(|s| reproduce(s, &ctx.atlas)).collect::<Result<Vec<_>, _>>().map_err(input)?;
    emit(ctx.cli.format, out, &reports, || reports.iter().map(|r| r.render()).collect());
    let bad: Vec<String> = reports
        .iter()
        .flat_map(|r| {
            r.mismatches()
                .map(move |c| format!("{} {}: expected {}, computed {}", r.table, c.printed, c.expected, c.computed))
        })
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Semantic(format!("{} cells differ:\n  {}", bad.len(), bad.join("\n  "))))
    }
}

#[derive(Serialize)]
struct CrossingJson {
    labels: [u32; 4],
    sign: i8,
    /// Region indices in role order a, b, c, d.
    roles: [usize; 4],
}

#[derive(Serialize)]
struct DiagramJson {
    name: String,
    pd: String,
    components: usize,
    writhe: i64,
    crossings: Vec<CrossingJson>,
    /// Each region as its (crossing, quadrant) corners.
    regions: Vec<Vec<(usize, u8)>>,
}

fn cmd_diagram(ctx: &Ctx, da: &DiagramArgs, out: &mut String) -> Result<(), Failure> {
    let (name, d) = resolve_diagram(ctx, da)?;
    let info = DiagramJson {
        name,
        pd: d.pd().to_string(),
        components: d.num_components(),
        writhe: d.writhe(),
        crossings: (0..d.num_crossings())
            .map(|x| CrossingJson {
                labels: d.pd().crossings()[x],
                sign: d.sign(x).value(),
                roles: d.roles()[x].as_array(),
            })
            .collect(),
        regions: d.regions().to_vec(),
    };
    emit(ctx.cli.format, out, &info, || {
        let mut t = String::new();
        writeln!(t, "{}: {}", info.name, info.pd).unwrap();
        writeln!(
            t,
            "components {}, crossings {}, regions {}, writhe {}",
            info.components,
            info.crossings.len(),
            info.regions.len(),
            info.writhe
        )
        .unwrap();
        for (i, c) in info.crossings.iter().enumerate() {
            let [a, b, cc, dd] = c.roles;
            let sign = if c.sign > 0 { '+' } else { '-' };
            writeln!(t, "  crossing {} {sign}  a=R{a} b=R{b} c=R{cc} d=R{dd}", i + 1).unwrap();
        }
        for (i, r) in info.regions.iter().enumerate() {
            let corners: Vec<String> = r.iter().map(|(x, q)| format!("{}.{}", x + 1, q)).collect();
            writeln!(t, "  R{i}: {}", corners.join(" ")).unwrap();
        }
        t
    });
    Ok(())
}

#[derive(Serialize)]
struct Step {
    step: usize,
    description: String,
    crossings: usize,
    count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    polynomial: Option<String>,
    unchanged: bool,
}

fn cmd_check_moves(
    ctx: &Ctx,
    da: &DiagramArgs,
    s: &StructureArgs,
    steps: usize,
    seed: u64,
    out: &mut String,
) -> Result<(), Failure> {
    let (_, d) = resolve_diagram(ctx, da)?;
    let (t, m) = if s.tribracket.is_none() && s.alexander.is_none() && s.module.is_none() {
        let m = crate::format::builtin_module("v").expect("builtin");
        (m.base().clone(), Some(m))
    } else {
        resolve_structure(s)?
    };
    let measure = |d: &Diagram| {
        (counting_invariant(&t, d), m.as_ref().map(|m| module_enhancement(m, d).polynomial().to_string()))
    };
    let start = measure(&d);
    let chain = random_chain(&d, steps, seed).map_err(Failure::Semantic)?;
    let mut log = vec![Step {
        step: 0,
        description: "start".into(),
        crossings: d.num_crossings(),
        count: start.0,
        polynomial: start.1.clone(),
        unchanged: true,
    }];
    for (i, (mv, nd)) in chain.iter().enumerate() {
        let now = measure(nd);
        log.push(Step {
            step: i + 1,
            description: mv.to_string(),
            crossings: nd.num_crossings(),
            unchanged: now == start,
            count: now.0,
            polynomial: now.1,
        });
    }
    emit(ctx.cli.format, out, &log, || {
        log.iter()
            .map(|s| {
                let p = s.polynomial.as_deref().map(|p| format!(" {p}")).unwrap_or_default();
                let flag = if s.unchanged { "" } else { "  CHANGED" };
                format!("{:>3} {:<40} crossings {:>3} count {}{p}{flag}\n", s.step, s.description, s.crossings, s.count)
            })
            .collect()
    });
    match log.iter().find(|s| !s.unchanged) {
        None => Ok(()),
        Some(s) => Err(Failure::Semantic(format!("invariant changed at step {} ({})", s.step, s.description))),
    }
}
