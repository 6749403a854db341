//! Command-line surface for the exact-arithmetic star-group laboratory.
//!
//! Every command builds a group from the catalog (`--group name:params`) or
//! from a JSON specification file (`--spec file.json`), runs one experiment,
//! and emits a deterministic report. CSV and JSON outputs are byte-identical
//! across runs; SVG output carries a timestamp comment unless
//! `--no-timestamp` is passed.
//!
//! Exit codes: 0 success, 2 when a verdict command finds a witness or
//! violation (for scripting), 1 on errors.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lcl_cli::catalog::{self, BuiltGroup, CatalogError, GroupSpec};
use lcl_core::arithtest::{maclachlan_reid_report, takeuchi_report, ArithError, TraceReport};
use lcl_core::exactnum::{ExactError, PlaceKind, Scalar};
use lcl_core::limitset::{
    convexity_probe, dalbo_deviation, export_cloud, furstenberg_samples, moebius_fit,
    one_point_test, sample_directions, DirectionCloud, ExportFormat, LimitSetError,
    OnePointVerdict,
};
use lcl_core::moebius::{
    schottky_certificate, zariski_span_dim, IsometryType, Mat2, MoebiusError,
};
use lcl_core::numeric::fmt_float;
use lcl_core::stargroup::{embed_enumeration, gamma_ne, ProductType, StarContext, StarError};
use rug::Rational;

#[derive(Parser)]
#[command(
    name = "lcl",
    version,
    about = "Exact-arithmetic experiments on subgroups of PSL(2,C)^q x PSL(2,R)^r",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct GroupArgs {
    /// Catalog group, e.g. hecke:5, psl2z-diag:2, hilbert-sample:5, quat-remark
    #[arg(long, conflicts_with = "spec")]
    group: Option<String>,
    /// JSON group specification file
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Maximum word length for enumeration
    #[arg(long, default_value_t = 8)]
    max_len: usize,
    /// Cap on the number of enumerated elements
    #[arg(long, default_value_t = 20_000)]
    cap: usize,
    /// Decimal digits of working precision (default 60; env LCL_PRECISION
    /// overrides the default, the flag overrides both)
    #[arg(long)]
    precision: Option<u32>,
    /// Drop factors with no loxodromic evidence before sampling
    /// (cloud and fit commands)
    #[arg(long)]
    reduce: bool,
}

#[derive(Args)]
struct OutArgs {
    /// Write the report body to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report body format
    #[arg(long, value_enum, default_value_t = Fmt::Csv)]
    format: Fmt,
    /// Omit the timestamp comment in SVG output
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Fmt {
    Csv,
    Json,
    Svg,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify every enumerated word at every factor
    Classify {
        #[command(flatten)]
        group: GroupArgs,
        /// Write the table to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample translation directions and report the cloud
    Directions {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Report the sampled limit-cone hull
    Cone {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Decide whether the sampled direction cloud is a single point
    OnePoint {
        #[command(flatten)]
        group: GroupArgs,
        /// Sup-norm tolerance for the one-point verdict
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Trace-field arithmeticity report on the squared-word sample
    Takeuchi {
        #[command(flatten)]
        group: GroupArgs,
        /// Write the JSON report to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search ping-pong certificates for the first two generators
    Schottky {
        #[command(flatten)]
        group: GroupArgs,
        /// Largest power n tried for the pair (g^n, h^n)
        #[arg(long, default_value_t = 8)]
        power_budget: u32,
    },
    /// Bracket-span dimensions for the first two generators
    Zariski {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Fit the Furstenberg samples against a round circle per factor
    FitCircle {
        #[command(flatten)]
        group: GroupArgs,
        /// Residual threshold separating pass from violation
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Deviation grid plus convexity probe for the first two generators
    Dalbo {
        #[command(flatten)]
        group: GroupArgs,
        /// Grid size for the power-pair deviation table
        #[arg(long, default_value_t = 10)]
        grid: usize,
        /// Target distance for the convexity probe
        #[arg(long, default_value_t = 1e-2)]
        tol: f64,
    },
    /// Write the direction cloud as an SVG scatter plot
    ExportSvg {
        #[command(flatten)]
        group: GroupArgs,
        /// Write the SVG to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Omit the timestamp comment
        #[arg(long)]
        no_timestamp: bool,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("catalog: {0}")]
    Catalog(#[from] CatalogError),
    #[error("exactnum: {0}")]
    Exact(#[from] ExactError),
    #[error("stargroup: {0}")]
    Star(#[from] StarError),
    #[error("limitset: {0}")]
    LimitSet(#[from] LimitSetError),
    #[error("arithtest: {0}")]
    Arith(#[from] ArithError),
    #[error("moebius: {0}")]
    Moebius(#[from] MoebiusError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

fn main() {
    // Exit code 2 is reserved for "witness found"; route clap usage errors
    // to 1 (help/version still exit 0).
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(&cli.command) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e);
            std::process::exit(1);
        }
    }
}

fn resolve_precision(flag: Option<u32>) -> u32 {
    if let Some(p) = flag {
        return p;
    }
    if let Ok(v) = std::env::var("LCL_PRECISION") {
        if let Ok(p) = v.trim().parse::<u32>() {
            return p;
        }
    }
    60
}

fn load_group(args: &GroupArgs) -> Result<(GroupSpec, BuiltGroup), CliError> {
    let digits = resolve_precision(args.precision);
    let spec = if let Some(g) = &args.group {
        let (name, params) = catalog::parse_group_arg(g);
        catalog::catalog(&name, &params)?
    } else if let Some(path) = &args.spec {
        GroupSpec::from_json(&std::fs::read_to_string(path)?)?
    } else {
        return Err(CliError::Usage(
            "provide --group NAME:PARAMS or --spec FILE".into(),
        ));
    };
    let built = catalog::build(&spec, digits)?;
    Ok((spec, built))
}

/// Writes the body to --out when given, otherwise prints it to stdout.
fn emit(body: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{}", body),
    }
    Ok(())
}

fn run(cmd: &Cmd) -> Result<i32, CliError> {
    match cmd {
        Cmd::Classify { group, out } => {
            let (spec, built) = load_group(group)?;
            match built {
                BuiltGroup::Field { gens, ctx, .. } => {
                    cmd_classify(&spec, &gens, &ctx, group, out)
                }
                BuiltGroup::Tower { gens, ctx, .. } => {
                    cmd_classify(&spec, &gens, &ctx, group, out)
                }
            }
        }
        Cmd::Directions { group, out } => {
            let (spec, built) = load_group(group)?;
            match built {
                BuiltGroup::Field { gens, ctx, .. } => {
                    cmd_directions(&spec, &gens, &ctx, group, out)
                }
                BuiltGroup::Tower { gens, ctx, .. } => {
                    cmd_directions(&spec, &gens, &ctx, group, out)
                }
            }
        }
        Cmd::Cone { group, out } => {
            let (spec, built) = load_group(group)?;
            match built {
                BuiltGroup::Field { gens, ctx, .. } => cmd_cone(&spec, &gens, &ctx, group, out),
                BuiltGroup::Tower { gens, ctx, .. } => cmd_cone(&spec, &gens, &ctx, group, out),
            }
        }
        Cmd::OnePoint { group, tol } => {
            let (spec, built) = load_group(group)?;
            match built {
                BuiltGroup::Field { gens, ctx, .. } => {
                    cmd_one_point(&spec, &gens, &ctx, group, *tol)
                }
                BuiltGroup::Tower { gens, ctx, .. } => {
                    cmd_one_point(&spec, &gens, &ctx, group, *tol)
                }
            }
        }
        Cmd::Takeuchi { group, out } => {
            let (_, built) = load_group(group)?;
            match built {
                BuiltGroup::Field { gens, ctx, names, .. } => {
                    cmd_takeuchi(&gens, &ctx, &names, group, out)
                }
                BuiltGroup::Tower { gens, ctx, names, .. } => {
                    cmd_takeuchi(&gens, &ctx, &names, group, out)
                }
            }
        }
        Cmd::Schottky { group, power_budget } => {
            let (_, built) = load_group(group)?;
            match built {
                BuiltGroup::Field { gens, ctx, names, .. } => {
                    cmd_schottky(&gens, &ctx, &names, *power_budget)
                }
                BuiltGroup::Tower { gens, ctx, names, .. } => {
                    cmd_schottky(&gens, &ctx, &names, *power_budget)
                }
            }
        }
        Cmd::Zariski { group } => {
            let (_, built) = load_group(group)?;
            match built {
                BuiltGroup::Field { gens, ctx, names, .. } => cmd_zariski(&gens, &ctx, &names),
                BuiltGroup::Tower { gens, ctx, names, .. } => cmd_zariski(&gens, &ctx, &names),
            }
        }
        Cmd::FitCircle { group, tol } => {
            let (_, built) = load_group(group)?;
            match built {
                BuiltGroup::Field { gens, ctx, .. } => cmd_fit_circle(&gens, &ctx, group, *tol),
                BuiltGroup::Tower { gens, ctx, .. } => cmd_fit_circle(&gens, &ctx, group, *tol),
            }
        }
        Cmd::Dalbo { group, grid, tol } => {
            let (_, built) = load_group(group)?;
            match built {
                BuiltGroup::Field { gens, ctx, names, .. } => {
                    cmd_dalbo(&gens, &ctx, &names, *grid, *tol)
                }
                BuiltGroup::Tower { gens, ctx, names, .. } => {
                    cmd_dalbo(&gens, &ctx, &names, *grid, *tol)
                }
            }
        }
        Cmd::ExportSvg { group, out, no_timestamp } => {
            let (spec, built) = load_group(group)?;
            let svg_out = OutArgs {
                out: out.clone(),
                format: Fmt::Svg,
                no_timestamp: *no_timestamp,
            };
            match built {
                BuiltGroup::Field { gens, ctx, .. } => {
                    cmd_export_cloud_body(&spec, &gens, &ctx, group, &svg_out)?;
                    Ok(0)
                }
                BuiltGroup::Tower { gens, ctx, .. } => {
                    cmd_export_cloud_body(&spec, &gens, &ctx, group, &svg_out)?;
                    Ok(0)
                }
            }
        }
    }
}

fn type_name(t: &IsometryType) -> String {
    match t {
        IsometryType::Identity => "identity".into(),
        IsometryType::EllipticFiniteOrder(n) => format!("elliptic(order {})", n),
        IsometryType::EllipticInfinite { order_bound_limited } => {
            if *order_bound_limited {
                "elliptic(order unresolved)".into()
            } else {
                "elliptic(infinite order)".into()
            }
        }
        IsometryType::Parabolic => "parabolic".into(),
        IsometryType::Hyperbolic => "hyperbolic".into(),
        IsometryType::LoxodromicNonHyperbolic => "loxodromic".into(),
    }
}

fn product_name(t: &ProductType) -> &'static str {
    match t {
        ProductType::Identity => "identity",
        ProductType::TotallyLoxodromic => "totally-loxodromic",
        ProductType::TotallyElliptic => "totally-elliptic",
        ProductType::TotallyParabolic => "totally-parabolic",
        ProductType::Mixed => "mixed",
    }
}

fn name_refs(names: &[String]) -> Vec<&str> {
    names.iter().map(|s| s.as_str()).collect()
}

fn cmd_classify<S: Scalar>(
    spec: &GroupSpec,
    gens: &[Mat2<S>],
    ctx: &StarContext<S>,
    args: &GroupArgs,
    out: &Option<PathBuf>,
) -> Result<i32, CliError> {
    let names = name_refs(&spec.names);
    let (embedded, truncated) = embed_enumeration(gens, ctx, args.max_len, args.cap)?;
    let mut body = String::new();
    let mut header = "word,product".to_string();
    for i in 0..ctx.len() {
        header.push_str(&format!(",type_{},length_{}", i, i));
    }
    body.push_str(&header);
    body.push('\n');
    for pi in &embedded {
        let mut line = format!(
            "\"{}\",{}",
            pi.word.format_with_names(&names),
            product_name(&pi.product_type())
        );
        for i in 0..ctx.len() {
            line.push_str(&format!(
                ",{},{}",
                type_name(&pi.types[i]),
                fmt_float(&pi.lengths[i], 17)
            ));
        }
        body.push_str(&line);
        body.push('\n');
    }
    emit(&body, out)?;
    if out.is_some() {
        println!("classified elements: {}", embedded.len());
    }
    if truncated {
        eprintln!("note: enumeration truncated at cap {}", args.cap);
    }
    Ok(0)
}

/// Applies the optional factor reduction, reporting dropped factors on
/// stderr so machine-readable stdout stays clean.
fn maybe_reduce<S: Scalar>(
    gens: &[Mat2<S>],
    ctx: &StarContext<S>,
    args: &GroupArgs,
) -> Result<(Vec<Mat2<S>>, StarContext<S>), CliError> {
    if !args.reduce {
        return Ok((gens.to_vec(), ctx.clone()));
    }
    let red = gamma_ne(gens, ctx, args.max_len, args.cap)?;
    if !red.dropped.is_empty() {
        eprintln!(
            "note: dropped factors {:?} (no loxodromic evidence), retained {:?}",
            red.dropped, red.retained
        );
    }
    Ok((red.generators, red.context))
}

fn build_cloud<S: Scalar>(
    gens: &[Mat2<S>],
    ctx: &StarContext<S>,
    args: &GroupArgs,
) -> Result<DirectionCloud, CliError> {
    let (gens, ctx) = maybe_reduce(gens, ctx, args)?;
    Ok(sample_directions(&gens, &ctx, args.max_len, args.cap)?)
}

fn distinct_interior(cloud: &DirectionCloud) -> usize {
    let mut dirs: Vec<Vec<f64>> = cloud
        .interior_points()
        .map(|p| p.direction.to_f64())
        .collect();
    dirs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    dirs.dedup_by(|a, b| {
        a.iter()
            .zip(b.iter())
            .all(|(x, y)| (x - y).abs() < 1e-12)
    });
    dirs.len()
}

fn cmd_export_cloud_body<S: Scalar>(
    spec: &GroupSpec,
    gens: &[Mat2<S>],
    ctx: &StarContext<S>,
    args: &GroupArgs,
    out: &OutArgs,
) -> Result<DirectionCloud, CliError> {
    let cloud = build_cloud(gens, ctx, args)?;
    let names = name_refs(&spec.names);
    let format = match out.format {
        Fmt::Csv => ExportFormat::Csv,
        Fmt::Json => ExportFormat::Json,
        Fmt::Svg => ExportFormat::Svg,
    };
    let stamp = if out.format == Fmt::Svg && !out.no_timestamp {
        Some(chrono::Utc::now().to_rfc3339())
    } else {
        None
    };
    let body = export_cloud(&cloud, &names, format, &spec.label, stamp.as_deref())?;
    emit(&body, &out.out)?;
    Ok(cloud)
}

fn cmd_directions<S: Scalar>(
    spec: &GroupSpec,
    gens: &[Mat2<S>],
    ctx: &StarContext<S>,
    args: &GroupArgs,
    out: &OutArgs,
) -> Result<i32, CliError> {
    let cloud = cmd_export_cloud_body(spec, gens, ctx, args, out)?;
    println!(
        "sampled directions: {} ({} interior, {} boundary){}",
        cloud.points.len(),
        cloud.interior_count,
        cloud.boundary_count,
        if cloud.truncated { ", truncated" } else { "" }
    );
    println!("distinct interior directions: {}", distinct_interior(&cloud));
    Ok(0)
}

/// Monotone-chain hull of a planar projection, used for rank > 3 reports.
fn hull_pairs(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(f64, f64)> = vec![];
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = vec![];
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn cmd_cone<S: Scalar>(
    spec: &GroupSpec,
    gens: &[Mat2<S>],
    ctx: &StarContext<S>,
    args: &GroupArgs,
    out: &OutArgs,
) -> Result<i32, CliError> {
    let cloud = build_cloud(gens, ctx, args)?;
    if cloud.points.is_empty() {
        return Err(CliError::LimitSet(LimitSetError::EmptyCloud));
    }
    let k = cloud.factor_count;
    let body = match out.format {
        Fmt::Svg => {
            return Err(CliError::Usage(
                "cone: svg output is not supported (use export-svg for the cloud)".into(),
            ))
        }
        Fmt::Json => {
            let v = match k {
                1 => serde_json::json!({
                    "label": spec.label,
                    "factors": 1,
                    "hull": "point",
                }),
                2 => {
                    let iv = cloud.hull_intervals();
                    serde_json::json!({
                        "label": spec.label,
                        "factors": 2,
                        "interval": [iv[0].0, iv[0].1],
                    })
                }
                3 => {
                    let hull: Vec<[f64; 2]> =
                        cloud.hull_2d().iter().map(|&(a, b)| [a, b]).collect();
                    serde_json::json!({
                        "label": spec.label,
                        "factors": 3,
                        "hull_vertices": hull,
                    })
                }
                _ => {
                    let mut pairs = vec![];
                    for i in 0..k {
                        for j in (i + 1)..k {
                            let pts: Vec<(f64, f64)> = cloud
                                .points
                                .iter()
                                .map(|p| {
                                    (p.direction.vec[i].to_f64(), p.direction.vec[j].to_f64())
                                })
                                .collect();
                            let hull: Vec<[f64; 2]> =
                                hull_pairs(pts).iter().map(|&(a, b)| [a, b]).collect();
                            pairs.push(serde_json::json!({
                                "pair": [i, j],
                                "hull_vertices": hull,
                            }));
                        }
                    }
                    serde_json::json!({
                        "label": spec.label,
                        "factors": k,
                        "pairwise_hulls": pairs,
                    })
                }
            };
            let mut s = serde_json::to_string_pretty(&v).expect("serializable");
            s.push('\n');
            s
        }
        Fmt::Csv => {
            let mut s = String::new();
            match k {
                1 => s.push_str("factors,hull\n1,point\n"),
                2 => {
                    let iv = cloud.hull_intervals();
                    s.push_str("coordinate,min,max\n");
                    s.push_str(&format!("0,{:.17},{:.17}\n", iv[0].0, iv[0].1));
                }
                3 => {
                    s.push_str("hull_x,hull_y\n");
                    for (a, b) in cloud.hull_2d() {
                        s.push_str(&format!("{:.17},{:.17}\n", a, b));
                    }
                }
                _ => {
                    s.push_str("pair_i,pair_j,hull_x,hull_y\n");
                    for i in 0..k {
                        for j in (i + 1)..k {
                            let pts: Vec<(f64, f64)> = cloud
                                .points
                                .iter()
                                .map(|p| {
                                    (p.direction.vec[i].to_f64(), p.direction.vec[j].to_f64())
                                })
                                .collect();
                            for (a, b) in hull_pairs(pts) {
                                s.push_str(&format!("{},{},{:.17},{:.17}\n", i, j, a, b));
                            }
                        }
                    }
                }
            }
            s
        }
    };
    emit(&body, &out.out)?;
    if out.out.is_some() {
        println!(
            "cone sampled from {} directions over {} factors",
            cloud.points.len(),
            k
        );
    }
    Ok(0)
}

fn cmd_one_point<S: Scalar>(
    spec: &GroupSpec,
    gens: &[Mat2<S>],
    ctx: &StarContext<S>,
    args: &GroupArgs,
    tol: f64,
) -> Result<i32, CliError> {
    let names = name_refs(&spec.names);
    let cloud = build_cloud(gens, ctx, args)?;
    match one_point_test(&cloud, tol)? {
        OnePointVerdict::OnePoint { point, exact } => {
            let coords: Vec<String> = point.iter().map(|x| format!("{:.6}", x)).collect();
            println!(
                "verdict: one point at ({}){}",
                coords.join(", "),
                if exact {
                    " [exact componentwise-equal translation lengths]"
                } else {
                    ""
                }
            );
            Ok(0)
        }
        OnePointVerdict::MultiPoint { witness, distance } => {
            println!(
                "verdict: multiple points; witness pair {} vs {} at sup-distance {:.6}",
                witness.0.format_with_names(&names),
                witness.1.format_with_names(&names),
                distance
            );
            Ok(2)
        }
    }
}

fn cmd_takeuchi<S: Scalar>(
    gens: &[Mat2<S>],
    ctx: &StarContext<S>,
    names: &[String],
    args: &GroupArgs,
    out: &Option<PathBuf>,
) -> Result<i32, CliError> {
    let kleinian = ctx
        .places
        .iter()
        .any(|p| S::kind_of(p) == PlaceKind::Complex);
    let report: TraceReport<S> = if kleinian {
        maclachlan_reid_report(gens, &ctx.places, args.max_len)?
    } else {
        takeuchi_report(gens, &ctx.places, args.max_len)?
    };
    let names = name_refs(names);
    println!("verdict: {}", report.verdict);
    println!(
        "squared-word sample: {} distinct traces at budget {}",
        report.sample_size, report.budget
    );
    println!(
        "trace field degree: {} (totally real: {})",
        report.trace_field_degree, report.trace_field_totally_real
    );
    if let Some(w) = &report.nonintegral_witness {
        println!(
            "non-integral trace witness: {}",
            w.format_with_names(&names)
        );
    }
    for w in &report.witnesses {
        println!(
            "unbounded-embedding witness: {} with |trace| = {:.6} > 2 at embedding {}",
            w.word.format_with_names(&names),
            w.abs_value,
            w.place_index
        );
    }
    if let Some(path) = out {
        std::fs::write(path, report.to_json(&names))?;
    }
    let violation = !report.witnesses.is_empty() || report.nonintegral_witness.is_some();
    Ok(if violation { 2 } else { 0 })
}

fn first_pair<'m, S: Scalar>(gens: &'m [Mat2<S>]) -> Result<(&'m Mat2<S>, &'m Mat2<S>), CliError> {
    if gens.len() < 2 {
        return Err(CliError::Usage(
            "this command needs at least two generators".into(),
        ));
    }
    Ok((&gens[0], &gens[1]))
}

fn place_kind_name(kind: PlaceKind) -> &'static str {
    match kind {
        PlaceKind::Real => "real",
        PlaceKind::Complex => "complex",
    }
}

fn cmd_schottky<S: Scalar>(
    gens: &[Mat2<S>],
    ctx: &StarContext<S>,
    names: &[String],
    power_budget: u32,
) -> Result<i32, CliError> {
    let (g, h) = first_pair(gens)?;
    let names = name_refs(names);
    println!(
        "pair: {} and {}",
        if names.is_empty() { "g" } else { names[0] },
        if names.len() < 2 { "h" } else { names[1] }
    );
    let mut all_certified = true;
    for (i, pl) in ctx.places.iter().enumerate() {
        let kind = place_kind_name(S::kind_of(pl));
        match schottky_certificate(g, h, pl, power_budget) {
            Ok(Some(cert)) => {
                println!(
                    "factor {} ({}): ping-pong certificate at power n = {}",
                    i, kind, cert.n
                );
            }
            Ok(None) => {
                println!(
                    "factor {} ({}): no certificate within power budget {}",
                    i, kind, power_budget
                );
                all_certified = false;
            }
            Err(MoebiusError::NotLoxodromic) => {
                println!("factor {} ({}): a generator is not loxodromic here", i, kind);
                all_certified = false;
            }
            Err(MoebiusError::SharedFixedPoint) => {
                println!("factor {} ({}): the generators share a fixed point", i, kind);
                all_certified = false;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(if all_certified { 0 } else { 2 })
}

fn cmd_zariski<S: Scalar>(
    gens: &[Mat2<S>],
    ctx: &StarContext<S>,
    names: &[String],
) -> Result<i32, CliError> {
    let (g, h) = first_pair(gens)?;
    let _ = names;
    let mut all_full = true;
    for (i, pl) in ctx.places.iter().enumerate() {
        let kind = S::kind_of(pl);
        let full = match kind {
            PlaceKind::Real => 3,
            PlaceKind::Complex => 6,
        };
        match zariski_span_dim(g, h, pl) {
            Ok(dim) => {
                println!(
                    "factor {} ({}): bracket span dimension {} of {}",
                    i,
                    place_kind_name(kind),
                    dim,
                    full
                );
                if dim < full {
                    all_full = false;
                }
            }
            Err(MoebiusError::NotCertified) | Err(MoebiusError::NotLoxodromic) => {
                println!(
                    "factor {} ({}): pair not Schottky-certified; span undetermined",
                    i,
                    place_kind_name(kind)
                );
                all_full = false;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(if all_full { 0 } else { 2 })
}

fn cmd_fit_circle<S: Scalar>(
    gens: &[Mat2<S>],
    ctx: &StarContext<S>,
    args: &GroupArgs,
    tol: f64,
) -> Result<i32, CliError> {
    let (gens, ctx) = maybe_reduce(gens, ctx, args)?;
    let samples = furstenberg_samples(&gens, &ctx, args.max_len, args.cap)?;
    println!("totally loxodromic samples: {}", samples.len());
    let fit = moebius_fit(&samples)?;
    println!("reference chart: factor 0");
    for f in &fit.factors {
        println!(
            "factor {}: max residual {:.3e}{}",
            f.factor,
            f.max_residual,
            if f.conjugated {
                " (orientation-reversed chart)"
            } else {
                ""
            }
        );
    }
    let max = fit.max_residual();
    if max <= tol {
        println!("circle-fit: consistent (max residual {:.3e} <= tol {:.1e})", max, tol);
        Ok(0)
    } else {
        println!("circle-fit: violation (max residual {:.3e} > tol {:.1e})", max, tol);
        Ok(2)
    }
}

fn cmd_dalbo<S: Scalar>(
    gens: &[Mat2<S>],
    ctx: &StarContext<S>,
    names: &[String],
    grid: usize,
    tol: f64,
) -> Result<i32, CliError> {
    let (g, h) = first_pair(gens)?;
    let _ = names;
    let report = dalbo_deviation(g, h, ctx, grid)?;
    println!(
        "deviation over {}x{} power grid (pair powered to n = {}):",
        report.grid, report.grid, report.power
    );
    for (i, m) in report.per_factor_max.iter().enumerate() {
        println!("factor {}: max deviation {:.6}", i, m);
    }
    println!("overall max deviation: {:.6}", report.max);
    let lambda = Rational::from(1);
    let conv = convexity_probe(g, h, ctx, &lambda, 8, tol)?;
    let pred: Vec<String> = conv.predicted.iter().map(|x| format!("{:.6}", x)).collect();
    println!(
        "convexity probe at lambda = 1 toward ({}):",
        pred.join(", ")
    );
    for (k, d) in &conv.distances {
        println!("k = {}: sup-distance {:.6}", k, d);
    }
    println!(
        "target distance {} reached: {}",
        tol,
        if conv.reached { "yes" } else { "no" }
    );
    Ok(0)
}
