//! Subcommand implementations. Each returns the text for stdout, optional
//! text for stderr, and the process exit code.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use fibre_core::config::{
    genus_thirteen_configuration, multiple_fibre_constraints, two_component_configuration, CurveConfiguration,
};
use fibre_core::orbifold::OrbifoldBase;
use fibre_core::pipeline::{run_pipeline, PipelineOptions, PipelineReport};
use fibre_core::poly::{parse_bihomogeneous, parse_poly, AffinePoint, ProjCoord};
use fibre_core::resolution::{canonical_resolve, resolve_template, CenterMode, LocalTemplate};
use fibre_core::search::{enumerate_configurations, two_component_search, SearchSpace};

use crate::dot::{configuration_dot, tree_dot};
use crate::parse;
use crate::report::{
    fibre_json, multiple_options, notes, ClassifyJson, ConfigJson, Document, GenusJson, InvariantsJson, PipelineJson,
    PredicatesJson, TreeJson, WintersJson,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_DISCREPANCY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fibre",
    version,
    about = "Exact computations on fibred surfaces and double covers of P1 x P1"
)]
pub struct Cli {
    /// Print only the machine-readable document.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Orbifold degree and classification of a base curve with multiple points.
    Classify {
        #[arg(long, default_value_t = 0)]
        base_genus: u32,
        /// Comma-separated multiplicities, each at least 2.
        #[arg(long, default_value = "")]
        mults: String,
    },
    /// Divisibility test for a configuration to be a fibre.
    Winters(ConfigSource),
    /// Derived self-intersections, genus and fibre predicates of a configuration.
    Genus {
        #[command(flatten)]
        source: ConfigSource,
        #[arg(long)]
        emit_dot: bool,
    },
    /// Canonical resolution of a branch curve.
    Resolve {
        /// Bihomogeneous form in x, z, t, s.
        #[arg(long, required_unless_present = "template")]
        branch: Option<String>,
        /// Chart of --point, one of xt, zt, xs, zs.
        #[arg(long, default_value = "xt")]
        chart: String,
        /// Affine center `a,b` in --chart; repeatable.
        #[arg(long)]
        point: Vec<String>,
        /// Local equation at the origin in x (fibre) and t (base); the fibre line is t = 0.
        #[arg(long, conflicts_with_all = ["branch", "point"])]
        template: Option<String>,
        #[arg(long, default_value_t = 1, requires = "template")]
        copies: u32,
        #[arg(long)]
        emit_dot: bool,
    },
    /// Follow one fibre of a preset through resolution, double cover and contraction.
    Track {
        #[command(flatten)]
        preset: PresetArgs,
        /// Base point `a:b`.
        #[arg(long, default_value = "0:1")]
        point: String,
        #[arg(long)]
        emit_dot: bool,
        #[arg(long)]
        emit_json: bool,
    },
    /// Chern invariants after resolution and base change.
    Invariants {
        #[command(flatten)]
        preset: PresetArgs,
    },
    /// Enumerate fibre configurations.
    Search {
        #[arg(long, default_value_t = 2)]
        components: usize,
        #[arg(long, default_value_t = 3)]
        max_mult: u64,
        #[arg(long, default_value_t = 1)]
        max_int: u64,
        #[arg(long)]
        max_genus: Option<i64>,
        /// Largest arithmetic genus of a single component.
        #[arg(long, default_value_t = 0)]
        max_pa: u32,
        /// Keep configurations that are not C-fibres.
        #[arg(long)]
        all: bool,
        /// Drop configurations with a rational (-1)-curve.
        #[arg(long)]
        no_minus_one: bool,
        /// Use the closed-form two-component table (coprime m1 < m2, rational components).
        #[arg(long)]
        two_component: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Every stage for a preset in one document.
    Pipeline {
        #[command(flatten)]
        preset: PresetArgs,
    },
}

#[derive(Debug, Args)]
pub struct ConfigSource {
    /// JSON configuration file, `-` for stdin.
    #[arg(long, conflicts_with = "builtin")]
    pub config: Option<PathBuf>,
    /// `genus13` or `two:m1,m2,k`.
    #[arg(long)]
    pub builtin: Option<String>,
}

#[derive(Debug, Args)]
pub struct PresetArgs {
    /// type1, type2, type3, type4 or even:n.
    #[arg(long)]
    pub preset: String,
    /// Coefficient of the middle term of type1.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Exponent parameter of type4.
    #[arg(long, default_value_t = 0)]
    pub h: u32,
    /// Add the extra linear factor to type3.
    #[arg(long)]
    pub corrected: bool,
    #[arg(long, default_value_t = 1)]
    pub base_change: u32,
    /// Resolve the fibre over [0:1] of even:n from one replicated cusp.
    #[arg(long)]
    pub template_mode: bool,
}

impl PresetArgs {
    fn options(&self) -> Result<PipelineOptions> {
        let preset = parse::preset(&self.preset, self.alpha.as_deref(), self.h, self.corrected)?;
        Ok(PipelineOptions::new(preset)
            .with_base_change(self.base_change)
            .with_template_mode(self.template_mode))
    }
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }

    pub fn precondition(err: &anyhow::Error) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {err:#}\n"),
            code: EXIT_PRECONDITION,
        }
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(o) => o,
        Err(e) => Outcome::precondition(&e),
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Classify { base_genus, mults } => classify(*base_genus, mults),
        Command::Winters(src) => {
            let cfg = load_config(src)?;
            let doc = Document::new("winters", WintersJson::from(&cfg.winters_check()), Vec::new());
            Ok(Outcome::ok(to_json(&doc)))
        }
        Command::Genus { source, emit_dot } => genus(source, *emit_dot),
        Command::Resolve {
            branch,
            chart,
            point,
            template,
            copies,
            emit_dot,
        } => resolve(branch.as_deref(), chart, point, template.as_deref(), *copies, *emit_dot),
        Command::Track {
            preset,
            point,
            emit_dot,
            emit_json,
        } => track(cli.quiet, preset, point, *emit_dot, *emit_json),
        Command::Invariants { preset } => invariants(cli.quiet, preset),
        Command::Search {
            components,
            max_mult,
            max_int,
            max_genus,
            max_pa,
            all,
            no_minus_one,
            two_component,
            csv,
        } => {
            let space = SearchSpace {
                max_components: *components,
                max_mult: *max_mult,
                max_intersection: *max_int,
                max_component_genus: *max_pa,
                max_genus: *max_genus,
                require_c_fibre: !all,
                require_connected: true,
                require_winters: true,
                forbid_minus_one: *no_minus_one,
            };
            if *two_component {
                search_two(*max_mult, *max_int, *max_genus, *csv)
            } else {
                search(&space, *csv)
            }
        }
        Command::Pipeline { preset } => pipeline(cli.quiet, preset),
    }
}

fn classify(base_genus: u32, mults: &str) -> Result<Outcome> {
    let base = OrbifoldBase::new(base_genus, parse::mults(mults)?)?;
    let doc = Document::new("classify", ClassifyJson::from(&base), Vec::new());
    Ok(Outcome::ok(to_json(&doc)))
}

pub fn builtin_config(name: &str) -> Result<CurveConfiguration> {
    if name == "genus13" {
        return Ok(genus_thirteen_configuration());
    }
    if let Some(rest) = name.strip_prefix("two:") {
        let v: Vec<u64> = parse::mults(rest)?;
        let [m1, m2, k] = v[..] else {
            bail!("two:m1,m2,k needs three numbers");
        };
        if m1 == 0 || m2 == 0 {
            bail!("multiplicities must be positive");
        }
        return Ok(two_component_configuration(m1, m2, k));
    }
    bail!("unknown builtin configuration {name:?}; expected genus13 or two:m1,m2,k")
}

fn load_config(src: &ConfigSource) -> Result<CurveConfiguration> {
    match (&src.config, &src.builtin) {
        (_, Some(b)) => builtin_config(b),
        (Some(path), None) => {
            let text = if path.as_os_str() == "-" {
                std::io::read_to_string(std::io::stdin())?
            } else {
                std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
            };
            let json: ConfigJson = serde_json::from_str(&text).context("parsing configuration JSON")?;
            Ok(json.to_configuration()?)
        }
        (None, None) => bail!("give --config <file> or --builtin <name>"),
    }
}

fn genus(src: &ConfigSource, emit_dot: bool) -> Result<Outcome> {
    let cfg = load_config(src)?;
    let winters = cfg.winters_check();
    let complete = cfg.components().iter().all(|c| c.self_int.is_some());
    let derived = if complete {
        cfg.with_self_intersections()?
    } else {
        cfg.derive_self_intersections()?
    };
    if emit_dot {
        return Ok(Outcome::ok(configuration_dot("fibre", &derived)));
    }
    let g = derived.fibre_genus()?;
    let options = if g >= 0 {
        multiple_options(&multiple_fibre_constraints(g as u64))
    } else {
        Some(Vec::new())
    };
    let doc = Document::new(
        "genus",
        GenusJson {
            configuration: (&derived).into(),
            genus: g,
            winters: (&winters).into(),
            predicates: PredicatesJson::from(&derived.fibre_predicates()),
            multiple_fibre_options: options,
        },
        Vec::new(),
    );
    Ok(Outcome::ok(to_json(&doc)))
}

fn resolve(
    branch: Option<&str>,
    chart: &str,
    points: &[String],
    template: Option<&str>,
    copies: u32,
    emit_dot: bool,
) -> Result<Outcome> {
    let tree = if let Some(t) = template {
        let local = parse_poly(t, fibre_core::poly::Chart::XT)?.poly;
        resolve_template(&LocalTemplate {
            local,
            copies,
            base: ProjCoord::Finite(parse::rational("0")?),
            line_contacts: 0,
        })?
    } else {
        let text = branch.ok_or_else(|| anyhow!("--branch is required"))?;
        let f = parse_bihomogeneous(text, fibre_core::poly::Chart::XT)?;
        let mode = if points.is_empty() {
            CenterMode::Auto
        } else {
            let c = parse::chart(chart)?;
            let pts = points
                .iter()
                .map(|p| parse::point(p).map(|(a, b)| AffinePoint::new(c, a, b)))
                .collect::<Result<Vec<_>>>()?;
            CenterMode::Explicit(pts)
        };
        canonical_resolve(&f, mode)?
    };
    if emit_dot {
        return Ok(Outcome::ok(tree_dot("resolution", &tree)));
    }
    let doc = Document::new("resolve", TreeJson::from(&tree), Vec::new());
    Ok(Outcome::ok(to_json(&doc)))
}

fn summary(r: &PipelineReport) -> String {
    let mut s = format!(
        "preset {} bidegree {:?} even={} mode={}\n",
        r.options.preset.name(),
        r.bidegree,
        r.even,
        r.mode.as_str()
    );
    for f in r.fibres.iter().filter(|f| f.tracked) {
        s += &format!(
            "fibre {}: genus {} c-fibre={} gcd={} contractions={}\n",
            f.base, f.report.genus, f.report.predicates.is_c_fibre, f.report.predicates.gcd, f.report.contractions
        );
    }
    if let Some(g) = &r.global {
        let v = &g.invariants.resolved;
        s += &format!(
            "chi={} K2={} c2={} base {}\n",
            v.chi, v.k2, v.c2, g.base_change.orbifold
        );
    }
    for n in &r.notes {
        s += &format!(
            "note [{}]{}: {}\n",
            n.code,
            if n.discrepancy { " DISCREPANCY" } else { "" },
            n.message
        );
    }
    s
}

fn finish(quiet: bool, r: &PipelineReport, stdout: String) -> Outcome {
    Outcome {
        stdout,
        stderr: if quiet { String::new() } else { summary(r) },
        code: if r.has_discrepancy() { EXIT_DISCREPANCY } else { EXIT_OK },
    }
}

fn pipeline_report(args: &PresetArgs) -> Result<PipelineReport> {
    Ok(run_pipeline(&args.options()?)?)
}

fn pipeline(quiet: bool, args: &PresetArgs) -> Result<Outcome> {
    let r = pipeline_report(args)?;
    let doc = Document::new("pipeline", PipelineJson::from(&r), notes(&r));
    Ok(finish(quiet, &r, to_json(&doc)))
}

#[derive(Serialize)]
struct TrackWithDot<'a> {
    #[serde(flatten)]
    fibre: &'a crate::report::FibreJson,
    dot: String,
}

fn track(quiet: bool, args: &PresetArgs, point: &str, emit_dot: bool, emit_json: bool) -> Result<Outcome> {
    let base = parse::proj_coord(point)?;
    let r = pipeline_report(args)?;
    let f = r
        .fibre(&base)
        .ok_or_else(|| anyhow!("no singular fibre of {} over {base}", r.options.preset.name()))?;
    let fj = fibre_json(f, &r.tree);
    let dot = configuration_dot(&format!("fibre {base}"), &f.report.contracted);
    let stdout = match (emit_dot, emit_json) {
        (true, false) => dot,
        (true, true) => to_json(&Document::new("track", TrackWithDot { fibre: &fj, dot }, notes(&r))),
        _ => to_json(&Document::new("track", fj, notes(&r))),
    };
    Ok(finish(quiet, &r, stdout))
}

fn invariants(quiet: bool, args: &PresetArgs) -> Result<Outcome> {
    let r = pipeline_report(args)?;
    let Some(g) = &r.global else {
        if r.has_discrepancy() {
            let doc = Document::new("invariants", Option::<InvariantsJson>::None, notes(&r));
            return Ok(finish(quiet, &r, to_json(&doc)));
        }
        bail!(
            "invariants of {} are unavailable: {}",
            r.options.preset.name(),
            r.notes
                .iter()
                .map(|n| n.message.as_str())
                .collect::<Vec<_>>()
                .join("; ")
        );
    };
    let doc = Document::new("invariants", Some(InvariantsJson::from(g)), notes(&r));
    Ok(finish(quiet, &r, to_json(&doc)))
}

#[derive(Serialize)]
struct SearchRow {
    mults: String,
    matrix: String,
    genus: i64,
    flags: String,
}

fn csv_text(rows: &[SearchRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    if rows.is_empty() {
        w.write_record(["mults", "matrix", "genus", "flags"])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn row(cfg: &CurveConfiguration, genus: i64) -> SearchRow {
    let comps = cfg.components();
    let mults = comps.iter().map(|c| c.mult.to_string()).collect::<Vec<_>>().join(";");
    let mut matrix = Vec::new();
    for a in comps {
        for b in comps {
            matrix.push(if a.id == b.id {
                a.self_int.unwrap_or(0).to_string()
            } else {
                cfg.intersection(a.id, b.id).to_string()
            });
        }
    }
    let p = cfg.fibre_predicates();
    let mut flags = Vec::new();
    if cfg.winters_check().pass {
        flags.push("winters");
    }
    if p.connected {
        flags.push("connected");
    }
    if p.is_c_fibre {
        flags.push("c-fibre");
    }
    if p.is_multiple {
        flags.push("multiple");
    }
    if comps.iter().any(|c| c.pa > 0) {
        flags.push("irrational-component");
    }
    SearchRow {
        mults,
        matrix: matrix.join(";"),
        genus,
        flags: flags.join("|"),
    }
}

#[derive(Serialize)]
struct HitJson {
    genus: i64,
    configuration: ConfigJson,
    predicates: PredicatesJson,
}

fn search(space: &SearchSpace, csv: bool) -> Result<Outcome> {
    let hits = enumerate_configurations(space);
    if csv {
        let rows: Vec<SearchRow> = hits.iter().map(|h| row(&h.config, h.genus)).collect();
        return Ok(Outcome::ok(csv_text(&rows)?));
    }
    let out: Vec<HitJson> = hits
        .iter()
        .map(|h| HitJson {
            genus: h.genus,
            configuration: (&h.config).into(),
            predicates: (&h.predicates).into(),
        })
        .collect();
    Ok(Outcome::ok(to_json(&Document::new("search", out, Vec::new()))))
}

#[derive(Serialize)]
struct TwoJson {
    genus: i64,
    m1: u64,
    m2: u64,
    k: u64,
}

fn search_two(max_m: u64, max_k: u64, max_genus: Option<i64>, csv: bool) -> Result<Outcome> {
    let entries: Vec<_> = two_component_search(max_m, max_k)
        .into_iter()
        .filter(|e| max_genus.is_none_or(|g| e.genus <= g))
        .collect();
    if csv {
        let rows: Vec<SearchRow> = entries
            .iter()
            .map(|e| {
                let cfg = two_component_configuration(e.m1, e.m2, e.k)
                    .derive_self_intersections()
                    .expect("tabulated entries are numerical fibres");
                row(&cfg, e.genus)
            })
            .collect();
        return Ok(Outcome::ok(csv_text(&rows)?));
    }
    let out: Vec<TwoJson> = entries
        .iter()
        .map(|e| TwoJson {
            genus: e.genus,
            m1: e.m1,
            m2: e.m2,
            k: e.k,
        })
        .collect();
    Ok(Outcome::ok(to_json(&Document::new("search", out, Vec::new()))))
}
