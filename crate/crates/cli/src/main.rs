//! `bredon`: command-line front end.
//!
//! Every subcommand builds a JSON value; `--format ascii` prints a text form
//! derived from that value (charts print the motivic grid). Exit codes: 0 on
//! success, 1 when the library reports an error, 2 on usage errors.

use bredon::config_ring::{self, basis_enumerate, confluence_audit, diagonal_arrangement_check, Parity, RingParams, Strategy};
use bredon::group_rep::{GroupSpec, Representation};
use bredon::mackey_homology::{comparison_check, lambda_sphere_complex, sphere_h0_complex};
use bredon::oc_assembly::{
    additive_free_chart_with, additive_sphere_chart_with, c2_sigma_ring, motivic_window, render_chart, window_box, ChartRendering,
};
use bredon::point_cohomology::{normalize_degree, ChartSet, Degree, GradedGroup, PointCohomology};
use bredon::spheres::unit_sphere_groups_with;
use bredon::stirling::{a_multiplicity, stirling_c};
use bredon::vanishing::{sphere_crosscheck_with, vanishing_sweep_with, DEFAULT_L_RANGE};
use bredon::varchenko_gelfand::{delta_basis_determinant, filtration_ranks, p_sigma, permutations, rees_relations_check, SigmaFunction};
use bredon::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bredon", version, about = "Exact RO(G)-graded cohomology computations")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, env = "BREDON_FORMAT", default_value = "json")]
    format: Format,
    /// Replacement point-cohomology chart tables (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    chart_data: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Ascii,
}

#[derive(Subcommand)]
enum Cmd {
    /// Subgroups, irreducibles and the invariants of a representation.
    Group {
        #[arg(long)]
        group: String,
        #[arg(long)]
        rep: Option<String>,
    },
    /// Stirling numbers c(k, k-j) and splitting multiplicities a(k, j).
    Stirling {
        #[arg(long)]
        k: usize,
    },
    /// Cohomology of a point.
    Point {
        #[arg(long)]
        group: String,
        #[command(flatten)]
        at: DegreeOrWindow,
    },
    /// Cohomology of the unit sphere S(V).
    Sphere {
        #[arg(long)]
        group: String,
        #[arg(long)]
        rep: String,
        #[command(flatten)]
        at: DegreeOrWindow,
    },
    /// Sweep the vanishing requirement over a range of ℓ.
    Vanishing {
        #[arg(long)]
        group: String,
        #[arg(long)]
        rep: String,
        #[arg(long, default_value_t = DEFAULT_L_RANGE.0, allow_hyphen_values = true)]
        lmin: i64,
        #[arg(long, default_value_t = DEFAULT_L_RANGE.1, allow_hyphen_values = true)]
        lmax: i64,
        /// Also report the unit-sphere criterion at every ℓ.
        #[arg(long)]
        crosscheck: bool,
    },
    /// The presentation ring of a configuration space.
    ConfigRing {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "even")]
        parity: String,
        #[arg(long, default_value_t = 2)]
        d: u64,
        #[command(subcommand)]
        action: RingAction,
    },
    /// Additive chart of a configuration space.
    OcChart {
        #[arg(long)]
        group: String,
        #[arg(long)]
        rep: String,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        at: Window,
        /// Report the ring description instead (C2, rep n*sigma).
        #[arg(long)]
        ring: bool,
    },
    /// Functions on the symmetric group.
    Vg {
        #[arg(long)]
        k: usize,
        #[command(subcommand)]
        action: VgAction,
    },
    /// Permutation-module chain complexes.
    Mackey {
        #[command(subcommand)]
        action: MackeyAction,
    },
}

#[derive(Args)]
struct Window {
    /// Box of basis coordinates, e.g. "-3:3,-4:4" (trivial first).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "grid")]
    window: Option<String>,
    /// C2 only: motivic box "x0:x1,y0:y1", where p+qσ sits at (p+q, q).
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
}

#[derive(Args)]
struct DegreeOrWindow {
    /// A single degree such as "2-3*sigma".
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["window", "grid"])]
    degree: Option<String>,
    #[command(flatten)]
    window: Window,
}

#[derive(Subcommand)]
enum RingAction {
    /// Normal form of an expression such as "w(1,2)*w(2,1) + a*w(1,3)".
    Reduce {
        expr: String,
        #[arg(long, value_enum, default_value = "leftmost")]
        strategy: StrategyArg,
    },
    /// Admissible monomials of degree j.
    Basis {
        #[arg(long)]
        j: usize,
    },
    /// Reduce every word up to the given length under both strategies.
    Audit {
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
    /// Check the diagonal arrangement block counts.
    Arrangement {
        #[arg(long, default_value_t = 3)]
        r_max: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Leftmost,
    Rightmost,
}

#[derive(Subcommand)]
enum VgAction {
    Ranks,
    CheckRelations,
    DeltaBasis,
    PSigma,
}

#[derive(Subcommand)]
enum MackeyAction {
    /// The cellular complex of S^{λ(k)} over C_{p^e}.
    LambdaSphere {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        k: u64,
        /// Subgroup label for the reduced H_0; defaults to the whole group.
        #[arg(long)]
        level: Option<String>,
    },
    /// Compare S^{λ(kr)} with S^{λ(k)}.
    Compare {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        r: u64,
    },
    /// Reduced H_0 of S^W at the top level.
    H0 {
        #[arg(long)]
        group: String,
        #[arg(long)]
        rep: String,
    },
}

/// A result value plus its text form, when it is not the generic one.
struct Output {
    json: Value,
    text: Option<String>,
}

impl Output {
    fn plain<T: Serialize>(v: &T) -> Result<Output> {
        Ok(Output { json: to_value(v)?, text: None })
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Other(e.to_string()))
}

fn to_u64(n: num_bigint::BigUint) -> Result<u64> {
    u64::try_from(&n).map_err(|_| Error::Cap(format!("{n} does not fit in 64 bits")))
}

struct Ctx {
    charts: Option<ChartSet>,
}

impl Ctx {
    fn point(&self, g: &GroupSpec) -> Result<PointCohomology> {
        match &self.charts {
            Some(set) => PointCohomology::with_charts(g, set),
            None => PointCohomology::new(g),
        }
    }
}

fn parse_ranges(s: &str) -> Result<Vec<(i64, i64)>> {
    s.split(',')
        .map(|part| {
            let (lo, hi) = part.trim().split_once(':').ok_or_else(|| Error::Parse(format!("range {part:?} is not lo:hi")))?;
            let lo: i64 = lo.trim().parse().map_err(|_| Error::Parse(format!("bad bound in {part:?}")))?;
            let hi: i64 = hi.trim().parse().map_err(|_| Error::Parse(format!("bad bound in {part:?}")))?;
            if lo > hi {
                return Err(Error::Range(format!("empty range {part:?}")));
            }
            Ok((lo, hi))
        })
        .collect()
}

fn window_degrees(g: &GroupSpec, w: &Window) -> Result<Vec<Degree>> {
    if let Some(b) = &w.window {
        return window_box(g, &parse_ranges(b)?);
    }
    let grid = match &w.grid {
        Some(s) => parse_ranges(s)?,
        None if g.name() == "C2" => vec![(-3, 3), (-3, 3)],
        None => vec![(-3, 3); g.rank()],
    };
    if w.grid.is_none() && g.name() != "C2" {
        return window_box(g, &grid);
    }
    if grid.len() != 2 {
        return Err(Error::Parse("a grid needs two ranges".into()));
    }
    motivic_window(g, grid[0], grid[1])
}

#[derive(Serialize)]
struct GridEntry {
    degree: String,
    rank: i64,
    weight: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    group: Option<GradedGroup>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unresolved: Option<(GradedGroup, GradedGroup)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn grid_entry(g: &GroupSpec, d: &Degree) -> GridEntry {
    GridEntry {
        degree: d.format(g),
        rank: d.rank(g),
        weight: d.coeffs.iter().skip(1).sum(),
        group: None,
        unresolved: None,
        error: None,
    }
}

fn grid_output(group: &str, entries: Vec<GridEntry>) -> Result<Output> {
    let r = ChartRendering::from_entries(entries.iter().map(|e| (e.rank, e.weight, e.group.as_ref(), e.unresolved.is_some())));
    Ok(Output { json: json!({ "group": group, "entries": to_value(&entries)? }), text: Some(r.to_ascii()) })
}

fn parse_group(s: &str) -> Result<GroupSpec> {
    GroupSpec::parse(s)
}

fn cmd_group(group: &str, rep: Option<&str>) -> Result<Output> {
    let g = parse_group(group)?;
    let mut out = json!({
        "group": g.name(),
        "order": g.order(),
        "subgroups": to_value(&g.subgroups)?,
        "irreducibles": g.irreducibles.iter().map(|i| json!({ "label": i.label, "dim": i.dim, "fixed": i.fixed })).collect::<Vec<_>>(),
    });
    if let Some(r) = rep {
        let v = g.parse_rep(r)?;
        let (big_d, d) = g.d_invariant(&v)?;
        out["rep"] = json!({
            "rep": g.format_rep(&v),
            "dim": g.dim(&v),
            "fixed": (0..g.subgroups.len()).map(|h| g.fixed_dim_at(&v, h)).collect::<Vec<_>>(),
            "D": big_d,
            "d": d,
            "e": g.e_invariant(&v),
            "orientable": g.is_orientable(&v),
        });
    }
    Ok(Output { json: out, text: None })
}

fn cmd_stirling(k: usize) -> Result<Output> {
    if k == 0 {
        return Err(Error::Range("k must be positive".into()));
    }
    let c: Vec<u64> = (0..k).map(|j| to_u64(stirling_c(k, k - j))).collect::<Result<_>>()?;
    let a: Vec<u64> = (0..k).map(|j| a_multiplicity(k, j).and_then(to_u64)).collect::<Result<_>>()?;
    let sum: u64 = c.iter().sum();
    Ok(Output { json: json!({ "k": k, "c": c, "sum": sum, "a": a }), text: None })
}

fn cmd_point(ctx: &Ctx, group: &str, at: &DegreeOrWindow) -> Result<Output> {
    let g = parse_group(group)?;
    let pc = ctx.point(&g)?;
    if let Some(s) = &at.degree {
        let d = Degree::parse(&g, s)?;
        let n = normalize_degree(&g, &d);
        let classes = pc.classes_at(&d)?;
        return Ok(Output {
            json: json!({
                "group": g.name(),
                "degree": d.format(&g),
                "normalized": (n != d).then(|| n.format(&g)),
                "classes": to_value(&classes)?,
                "iso": pc.group_at(&d)?.to_string(),
            }),
            text: None,
        });
    }
    let entries = window_degrees(&g, &at.window)?
        .iter()
        .map(|d| {
            let mut e = grid_entry(&g, d);
            match pc.group_at(d) {
                Ok(grp) => e.group = Some(grp),
                Err(err) => e.error = Some(err.to_string()),
            }
            e
        })
        .collect();
    grid_output(&g.name(), entries)
}

fn cmd_sphere(ctx: &Ctx, group: &str, rep: &str, at: &DegreeOrWindow) -> Result<Output> {
    let g = parse_group(group)?;
    let v = g.parse_rep(rep)?;
    let pc = ctx.point(&g)?;
    if let Some(s) = &at.degree {
        let d = Degree::parse(&g, s)?;
        let u = unit_sphere_groups_with(&pc, &v, &d)?;
        let mut out = json!({ "group": g.name(), "rep": g.format_rep(&v), "degree": d.format(&g) });
        out["result"] = to_value(&u)?;
        return Ok(Output { json: out, text: None });
    }
    let entries = window_degrees(&g, &at.window)?
        .iter()
        .map(|d| {
            let mut e = grid_entry(&g, d);
            match unit_sphere_groups_with(&pc, &v, d) {
                Ok(u) => match u.total {
                    Some(t) => e.group = Some(t),
                    None => e.unresolved = Some((u.sub, u.quot)),
                },
                Err(err) => e.error = Some(err.to_string()),
            }
            e
        })
        .collect();
    grid_output(&g.name(), entries)
}

fn cmd_vanishing(ctx: &Ctx, group: &str, rep: &str, lmin: i64, lmax: i64, crosscheck: bool) -> Result<Output> {
    let g = parse_group(group)?;
    let v = g.parse_rep(rep)?;
    let pc = ctx.point(&g)?;
    let report = vanishing_sweep_with(&pc, &v, lmin, lmax)?;
    let mut out = to_value(&report)?;
    if crosscheck {
        let cc: Vec<Value> = (lmin..=lmax)
            .map(|l| sphere_crosscheck_with(&pc, &v, l).map(|b| json!({ "l": l, "sphere_group_vanishes": b })))
            .collect::<Result<_>>()?;
        out["crosscheck"] = Value::Array(cc);
    }
    Ok(Output { json: out, text: None })
}

fn all_words(k: usize, max_len: usize) -> Vec<Vec<(usize, usize)>> {
    let gens: Vec<(usize, usize)> = (1..=k).flat_map(|i| (1..=k).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut layer: Vec<Vec<(usize, usize)>> = vec![vec![]];
    let mut out = Vec::new();
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                gens.iter().map(move |&g| {
                    let mut w = w.clone();
                    w.push(g);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn cmd_ring(k: usize, parity: &str, d: u64, action: &RingAction) -> Result<Output> {
    let p = RingParams::new(k, Parity::parse(parity)?, d)?;
    let params = to_value(&p)?;
    Ok(Output {
        json: match action {
            RingAction::Reduce { expr, strategy } => {
                let e = bredon::expr::parse(expr)?;
                let st = match strategy {
                    StrategyArg::Leftmost => Strategy::Leftmost,
                    StrategyArg::Rightmost => Strategy::Rightmost,
                };
                let nf = config_ring::reduce_expr_with(p, &e, st)?;
                json!({ "params": params, "input": expr, "normal_form": nf.to_string(), "is_zero": nf.is_zero() })
            }
            RingAction::Basis { j } => {
                let b = basis_enumerate(k, *j)?;
                json!({ "k": k, "j": j, "count": b.len(), "basis": b.iter().map(|m| m.to_string()).collect::<Vec<_>>() })
            }
            RingAction::Audit { max_len } => {
                if *max_len > 4 {
                    return Err(Error::Cap(format!("max-len {max_len} exceeds 4")));
                }
                let words = all_words(k, *max_len);
                json!({ "params": params, "words": words.len(), "confluent": confluence_audit(p, &words)? })
            }
            RingAction::Arrangement { r_max } => {
                json!({ "k": k, "r_max": r_max, "holds": diagonal_arrangement_check(k, *r_max)? })
            }
        },
        text: None,
    })
}

fn cmd_oc_chart(ctx: &Ctx, group: &str, rep: &str, k: usize, at: &Window, ring: bool) -> Result<Output> {
    let g = parse_group(group)?;
    let v = g.parse_rep(rep)?;
    if ring {
        let sigma = g.irreducible_index(bredon::group_rep::IrrKind::Sigma);
        let n = match sigma {
            Some(i) if g.name() == "C2" && v.mult.iter().enumerate().all(|(j, &m)| j == i || m == 0) => v.mult[i],
            _ => return Err(Error::Hypothesis("the ring description needs G = C2 and V = n*sigma".into())),
        };
        return Output::plain(&c2_sigma_ring(k, n)?);
    }
    let pc = ctx.point(&g)?;
    let w = window_degrees(&g, at)?;
    let chart = if v.contains_trivial() { additive_free_chart_with(&pc, &v, k, &w)? } else { additive_sphere_chart_with(&pc, &v, k, &w)? };
    Ok(Output { json: to_value(&chart)?, text: Some(render_chart(&chart)) })
}

fn cmd_vg(k: usize, action: &VgAction) -> Result<Output> {
    match action {
        VgAction::Ranks => Output::plain(&filtration_ranks(k)?),
        VgAction::CheckRelations => Ok(Output { json: json!({ "k": k, "rees_relations_hold": rees_relations_check(k)? }), text: None }),
        VgAction::DeltaBasis => Ok(Output { json: json!({ "k": k, "determinant": delta_basis_determinant(k)?.to_string() }), text: None }),
        VgAction::PSigma => {
            if k > 5 {
                return Err(Error::Cap(format!("k = {k} exceeds 5")));
            }
            let rows: Vec<Value> = permutations(k)
                .iter()
                .map(|s| {
                    let (expr, f) = p_sigma(s)?;
                    Ok(json!({ "sigma": s, "p_sigma": expr, "equals_delta": f == SigmaFunction::delta(s)? }))
                })
                .collect::<Result<_>>()?;
            Ok(Output { json: json!({ "k": k, "rows": rows }), text: None })
        }
    }
}

fn cmd_mackey(action: &MackeyAction) -> Result<Output> {
    match action {
        MackeyAction::LambdaSphere { p, e, k, level } => {
            let ls = lambda_sphere_complex(*p, *e, *k)?;
            let level = level.clone().unwrap_or_else(|| ls.top_label());
            let h = ls.underlying_homology()?;
            Ok(Output {
                json: json!({
                    "p": p, "e": e, "k": k, "j": ls.j, "m": ls.m,
                    "underlying_homology": h.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "level": level,
                    "reduced_h0": ls.reduced_h0(&level)?.to_string(),
                }),
                text: None,
            })
        }
        MackeyAction::Compare { p, e, k, r } => Output::plain(&comparison_check(*p, *e, *k, *r)?),
        MackeyAction::H0 { group, rep } => {
            let g = parse_group(group)?;
            let v: Representation = g.parse_rep(rep)?;
            let h = sphere_h0_complex(&g, &v)?;
            Ok(Output {
                json: json!({ "group": g.name(), "rep": g.format_rep(&v), "reduced_h0": h.h0.to_string(), "d": g.d(&v)? }),
                text: None,
            })
        }
    }
}

/// Indented `key: value` text for any JSON value. Objects holding only
/// `summands` print as groups.
fn text_of(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if let Some(s) = inline(x) {
                    out.push_str(&format!("{pad}{k}: {s}\n"));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    text_of(x, indent + 1, out);
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                match inline(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        text_of(x, indent + 1, out);
                    }
                }
            }
        }
        x => out.push_str(&format!("{pad}{}\n", inline(x).unwrap_or_default())),
    }
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::String(s) => Some(s.clone()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", xs.iter().filter_map(inline).collect::<Vec<_>>().join(", ")))
        }
        Value::Object(m) if m.len() == 1 && m.contains_key("summands") => {
            serde_json::from_value::<GradedGroup>(v.clone()).ok().map(|g| g.to_string())
        }
        _ => None,
    }
}

fn run(cli: &Cli) -> Result<Output> {
    let charts = cli.chart_data.as_deref().map(ChartSet::with_overrides).transpose()?;
    let ctx = Ctx { charts };
    match &cli.cmd {
        Cmd::Group { group, rep } => cmd_group(group, rep.as_deref()),
        Cmd::Stirling { k } => cmd_stirling(*k),
        Cmd::Point { group, at } => cmd_point(&ctx, group, at),
        Cmd::Sphere { group, rep, at } => cmd_sphere(&ctx, group, rep, at),
        Cmd::Vanishing { group, rep, lmin, lmax, crosscheck } => cmd_vanishing(&ctx, group, rep, *lmin, *lmax, *crosscheck),
        Cmd::ConfigRing { k, parity, d, action } => cmd_ring(*k, parity, *d, action),
        Cmd::OcChart { group, rep, k, at, ring } => cmd_oc_chart(&ctx, group, rep, *k, at, *ring),
        Cmd::Vg { k, action } => cmd_vg(*k, action),
        Cmd::Mackey { action } => cmd_mackey(action),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("values serialize")),
                Format::Ascii => match out.text {
                    Some(t) => print!("{t}"),
                    None => {
                        let mut s = String::new();
                        text_of(&out.json, 0, &mut s);
                        print!("{s}");
                    }
                },
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
