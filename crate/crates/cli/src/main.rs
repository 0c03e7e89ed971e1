//! Batch command-line front end: geometry validation, fixed-point
//! listings, Chern numbers, partition functions with fits and checks,
//! cobordism classes, and descendent expansions. Output is JSON (or a
//! CSV projection); reruns with identical inputs and seed produce
//! byte-identical output.

mod cache;

use cache::{content_hash, Cache, ENGINE_VERSION};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ptcob_core::cobordism::{cobordism_class_point, smooth_chern_numbers, ChernVector};
use ptcob_core::descent::{grr_expansion, reduce_generalized, ProjProduct};
use ptcob_core::exact::rat_to_string;
use ptcob_core::localize::{
    chern_indices, chern_number, collect_characters, ChernIndex, EngineOpts, LocalizeError,
};
use ptcob_core::qseries::{
    assemble_all, check_common_poles, check_functional_equation, fit_rational, FitMode, FitRecord,
    RationalFn,
};
use ptcob_core::toric::{CurveClass, ToricThreefold};
use ptcob_core::vertex::VertexError;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ptcob", version, about = "Exact localization engine for stable-pair invariants of toric 3-folds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalOpts,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Seed for the specialization generator.
    #[arg(long, global = true, default_value_t = 0x5eed_cafe)]
    seed: u64,
    /// Number of independent specializations to cross-check (>= 2).
    #[arg(long, global = true, default_value_t = 2)]
    specializations: usize,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Result cache directory (default: $PTCOB_CACHE when set).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Enable the general-support engine for classes that are not a
    /// single edge of multiplicity one.
    #[arg(long, global = true)]
    enable_ptvertex: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a geometry (catalog id or JSON file).
    Geometry {
        #[command(subcommand)]
        action: GeometryAction,
    },
    /// List the torus-fixed pairs for a class and Euler characteristic.
    FixedPoints {
        geom: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        n: i64,
    },
    /// One exact Chern number c_n^I.
    ChernNumber {
        geom: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        index: String,
    },
    /// Assemble the series c_n^I, optionally fit and check it.
    PartitionFunction {
        geom: String,
        #[arg(long)]
        beta: String,
        /// Chern index, or `all` for the full index set of the class.
        #[arg(long)]
        index: String,
        #[arg(long)]
        nmax: i64,
        #[arg(long)]
        fit: bool,
        #[arg(long)]
        check_symmetry: bool,
        #[arg(long)]
        check_poles: bool,
        /// Holdout coefficients verified after the fit.
        #[arg(long, default_value_t = 2)]
        holdout: usize,
    },
    /// The class of the moduli space over a point in the t-basis.
    CobordismClass {
        geom: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        n: i64,
    },
    /// The class of the smooth 3-fold itself over a point.
    SmoothClass { geom: String },
    /// Expansion of ch_k of the negative virtual tangent bundle in
    /// descendents.
    Descendents {
        geom: String,
        #[arg(long)]
        chk: u32,
    },
}

#[derive(Subcommand)]
enum GeometryAction {
    Validate { src: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            use std::io::Write;
            match writeln!(std::io::stdout(), "{output}") {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("ptcob: cannot write output: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Err(err) => {
            let payload = json!({
                "error": err.kind(),
                "message": err.message,
            });
            eprintln!("{}", serde_json::to_string_pretty(&payload).unwrap());
            ExitCode::from(err.exit_code)
        }
    }
}

struct CliError {
    kind: &'static str,
    message: String,
    exit_code: u8,
}

impl CliError {
    fn kind(&self) -> &'static str {
        self.kind
    }

    fn usage(message: impl Into<String>) -> CliError {
        CliError {
            kind: "usage",
            message: message.into(),
            exit_code: 2,
        }
    }
}

impl From<ptcob_core::toric::ToricError> for CliError {
    fn from(e: ptcob_core::toric::ToricError) -> Self {
        let kind = match &e {
            ptcob_core::toric::ToricError::Parse(_) => "parse",
            ptcob_core::toric::ToricError::Validation { .. } => "validation",
            _ => "geometry",
        };
        CliError {
            kind,
            message: e.to_string(),
            exit_code: 2,
        }
    }
}

impl From<LocalizeError> for CliError {
    fn from(e: LocalizeError) -> Self {
        let (kind, code) = match &e {
            LocalizeError::Vertex(VertexError::NonIsolatedFixedLocus(_)) => {
                ("non-isolated-fixed-locus", 3)
            }
            LocalizeError::EngineUnavailable(_) => ("engine-unavailable", 2),
            _ => ("localize", 1),
        };
        CliError {
            kind,
            message: e.to_string(),
            exit_code: code,
        }
    }
}

impl From<VertexError> for CliError {
    fn from(e: VertexError) -> Self {
        let (kind, code) = match &e {
            VertexError::NonIsolatedFixedLocus(_) => ("non-isolated-fixed-locus", 3),
            _ => ("vertex", 1),
        };
        CliError {
            kind,
            message: e.to_string(),
            exit_code: code,
        }
    }
}

impl From<ptcob_core::deg1::Deg1Error> for CliError {
    fn from(e: ptcob_core::deg1::Deg1Error) -> Self {
        CliError {
            kind: "engine",
            message: e.to_string(),
            exit_code: 1,
        }
    }
}

impl From<ptcob_core::cobordism::CobordismError> for CliError {
    fn from(e: ptcob_core::cobordism::CobordismError) -> Self {
        CliError {
            kind: "cobordism",
            message: e.to_string(),
            exit_code: 1,
        }
    }
}

impl From<ptcob_core::qseries::FitError> for CliError {
    fn from(e: ptcob_core::qseries::FitError) -> Self {
        CliError {
            kind: "fit",
            message: e.to_string(),
            exit_code: 1,
        }
    }
}

impl From<ptcob_core::descent::DescentError> for CliError {
    fn from(e: ptcob_core::descent::DescentError) -> Self {
        CliError {
            kind: "descent",
            message: e.to_string(),
            exit_code: 2,
        }
    }
}

fn load_geometry(src: &str) -> Result<ToricThreefold, CliError> {
    if std::path::Path::new(src).exists() {
        let text = std::fs::read_to_string(src).map_err(|e| CliError {
            kind: "io",
            message: format!("cannot read {src}: {e}"),
            exit_code: 2,
        })?;
        Ok(ToricThreefold::load_and_validate(&text)?)
    } else {
        Ok(ToricThreefold::load_and_validate(src)?)
    }
}

fn parse_beta(x: &ToricThreefold, text: &str) -> Result<CurveClass, CliError> {
    let aliases = x.class_aliases();
    // either a '+'-joined sum of alias names, or a comma vector
    if text.chars().any(|c| c.is_ascii_alphabetic()) {
        let mut total = vec![0i64; x.h2_rank];
        for part in text.split('+') {
            let name = part.trim();
            let found = aliases
                .iter()
                .find(|(alias, _)| *alias == name)
                .ok_or_else(|| {
                    CliError::usage(format!(
                        "unknown class alias {name:?} for geometry {}",
                        x.id
                    ))
                })?;
            for (t, c) in total.iter_mut().zip(&found.1 .0) {
                *t += c;
            }
        }
        return Ok(CurveClass(total));
    }
    let parts: Result<Vec<i64>, _> = text.split(',').map(|s| s.trim().parse()).collect();
    let v = parts.map_err(|_| CliError::usage(format!("cannot parse class vector {text:?}")))?;
    if v.len() != x.h2_rank {
        return Err(CliError::usage(format!(
            "class vector length {} does not match H_2 rank {}",
            v.len(),
            x.h2_rank
        )));
    }
    Ok(CurveClass(v))
}

fn engine_opts(global: &GlobalOpts) -> Result<EngineOpts, CliError> {
    if global.specializations < 2 {
        return Err(CliError::usage("--specializations must be at least 2"));
    }
    Ok(EngineOpts {
        seed: global.seed,
        specializations: global.specializations,
        enable_ptvertex: global.enable_ptvertex,
    })
}

fn cache_for(global: &GlobalOpts) -> Option<Cache> {
    let dir = global
        .cache
        .clone()
        .or_else(|| std::env::var_os("PTCOB_CACHE").map(PathBuf::from))?;
    Cache::new(&dir).ok()
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Geometry { action } => match action {
            GeometryAction::Validate { src } => {
                let x = load_geometry(src)?;
                Ok(serde_json::to_string_pretty(&json!({
                    "geometry": x.id,
                    "valid": true,
                    "fixed_points": x.points.len(),
                    "edges": x.edges.len(),
                    "h2_rank": x.h2_rank,
                    "c1_degrees": x.c1_degrees,
                }))
                .unwrap())
            }
        },
        Command::FixedPoints { geom, beta, n } => {
            let x = load_geometry(geom)?;
            let beta = parse_beta(&x, beta)?;
            let opts = engine_opts(&cli.global)?;
            let listing = fixed_point_listing(&x, &beta, *n, &opts)?;
            Ok(serde_json::to_string_pretty(&listing).unwrap())
        }
        Command::ChernNumber {
            geom,
            beta,
            n,
            index,
        } => {
            let x = load_geometry(geom)?;
            let beta_v = parse_beta(&x, beta)?;
            let idx = ChernIndex::parse(index)
                .ok_or_else(|| CliError::usage(format!("cannot parse index {index:?}")))?;
            let d = x.virtual_dimension(&beta_v)?;
            if idx.weighted_degree() != d {
                return Err(CliError::usage(format!(
                    "index {idx} has weighted degree {} but the class has d = {d}",
                    idx.weighted_degree()
                )));
            }
            let opts = engine_opts(&cli.global)?;
            let request = format!(
                "chern-number/{}/{:?}/{}/{}/{}/{}/{}",
                geometry_fingerprint(&x),
                beta_v.0,
                n,
                idx,
                opts.seed,
                opts.specializations,
                ENGINE_VERSION
            );
            with_cache(&cli.global, &request, || {
                let value = chern_number(&x, &beta_v, *n, &idx, &opts)?;
                Ok(serde_json::to_string_pretty(&json!({
                    "geometry": x.id,
                    "beta": beta_v.0,
                    "n": n,
                    "I": idx.0,
                    "d": d,
                    "value": rat_to_string(&value),
                }))
                .unwrap())
            })
        }
        Command::PartitionFunction {
            geom,
            beta,
            index,
            nmax,
            fit,
            check_symmetry,
            check_poles,
            holdout,
        } => {
            let x = load_geometry(geom)?;
            let beta_v = parse_beta(&x, beta)?;
            let d = x.virtual_dimension(&beta_v)?;
            let indices = if index == "all" {
                chern_indices(d)
            } else {
                let idx = ChernIndex::parse(index)
                    .ok_or_else(|| CliError::usage(format!("cannot parse index {index:?}")))?;
                if idx.weighted_degree() != d {
                    return Err(CliError::usage(format!(
                        "index {idx} has weighted degree {} but the class has d = {d}",
                        idx.weighted_degree()
                    )));
                }
                vec![idx]
            };
            let opts = engine_opts(&cli.global)?;
            let request = format!(
                "partition-function/{}/{:?}/{:?}/{}/{}/{}/{}/{}/{}/{}/{}/{}",
                geometry_fingerprint(&x),
                beta_v.0,
                indices,
                nmax,
                fit,
                check_symmetry,
                check_poles,
                holdout,
                opts.seed,
                opts.specializations,
                matches!(cli.global.format, Format::Csv),
                ENGINE_VERSION
            );
            with_cache(&cli.global, &request, || {
                let series = assemble_all(&x, &beta_v, &indices, *nmax, &opts)?;
                let mut records = Vec::new();
                let mut fits: Vec<RationalFn> = Vec::new();
                // denominator bound: generous enough for poles of high
                // multiplicity while still constrained by the train window
                let train_top = (*nmax as usize).saturating_sub(*holdout);
                let max_den = (train_top / 2).max((d + 4) as usize);
                for s in &series {
                    let fitted = if *fit || *check_symmetry || *check_poles {
                        Some(fit_rational(
                            s,
                            &FitMode::Pade {
                                max_den,
                                max_num: train_top.saturating_sub(1),
                            },
                            *holdout,
                        )?)
                    } else {
                        None
                    };
                    let mut record = FitRecord::new(s, fitted.as_ref(), *holdout);
                    if *check_symmetry {
                        if let Some(r) = &fitted {
                            record.functional_equation = Some(check_functional_equation(r, d).0);
                        }
                    }
                    if let Some(r) = fitted {
                        fits.push(r);
                    }
                    records.push(record);
                }
                if matches!(cli.global.format, Format::Csv) {
                    let mut lines = vec!["geometry,beta,I,n,coefficient".to_string()];
                    for s in &series {
                        for (k, c) in s.coeffs.iter().enumerate() {
                            lines.push(format!(
                                "{},{:?},{},{},{}",
                                s.geometry,
                                s.beta,
                                s.index,
                                s.n_min + k as i64,
                                rat_to_string(c)
                            ));
                        }
                    }
                    return Ok(lines.join("\n"));
                }
                let mut doc = json!({ "records": records });
                if *check_poles && !fits.is_empty() {
                    doc["poles"] = serde_json::to_value(check_common_poles(&fits)).unwrap();
                }
                Ok(serde_json::to_string_pretty(&doc).unwrap())
            })
        }
        Command::CobordismClass { geom, beta, n } => {
            let x = load_geometry(geom)?;
            let beta_v = parse_beta(&x, beta)?;
            let d = x.virtual_dimension(&beta_v)?;
            let opts = engine_opts(&cli.global)?;
            let indices = chern_indices(d);
            let request = format!(
                "cobordism-class/{}/{:?}/{}/{}/{}/{}",
                geometry_fingerprint(&x),
                beta_v.0,
                n,
                opts.seed,
                opts.specializations,
                ENGINE_VERSION
            );
            with_cache(&cli.global, &request, || {
                let mut vector = ChernVector::new(d);
                let chars = collect_characters(&x, &beta_v, *n, &opts)?;
                let context = format!("{} beta={:?} n={}", x.id, beta_v.0, n);
                let values = ptcob_core::localize::chern_numbers_for_index_set(
                    &chars, d, &indices, &opts, &context,
                )?;
                let mut numbers = serde_json::Map::new();
                for (i, v) in indices.iter().zip(values) {
                    numbers.insert(i.to_string(), json!(rat_to_string(&v)));
                    vector.values.insert(i.clone(), v);
                }
                let class = cobordism_class_point(&vector)?;
                Ok(serde_json::to_string_pretty(&json!({
                    "geometry": x.id,
                    "beta": beta_v.0,
                    "n": n,
                    "d": d,
                    "basis": "dual-to-monomial-chern-numbers",
                    "chern_numbers": numbers,
                    "class": class.to_display(),
                }))
                .unwrap())
            })
        }
        Command::SmoothClass { geom } => {
            let x = load_geometry(geom)?;
            let opts = engine_opts(&cli.global)?;
            let numbers = smooth_chern_numbers(&x, &opts)?;
            let class = cobordism_class_point(&numbers)?;
            let mut map = serde_json::Map::new();
            for (i, v) in &numbers.values {
                map.insert(i.to_string(), json!(rat_to_string(v)));
            }
            Ok(serde_json::to_string_pretty(&json!({
                "geometry": x.id,
                "basis": "dual-to-monomial-chern-numbers",
                "chern_numbers": map,
                "class": class.to_display(),
            }))
            .unwrap())
        }
        Command::Descendents { geom, chk } => {
            let x = load_geometry(geom)?;
            if *chk < 1 {
                return Err(CliError::usage("--chk must be at least 1"));
            }
            let space = ProjProduct::from_geometry_id(&x.id)?;
            let expansion = grr_expansion(&space, *chk);
            let reduced = reduce_generalized(&expansion);
            Ok(serde_json::to_string_pretty(&json!({
                "geometry": x.id,
                "chk": chk,
                "expansion": expansion.to_text(),
                "reduced": reduced.to_text(),
            }))
            .unwrap())
        }
    }
}

fn geometry_fingerprint(x: &ToricThreefold) -> String {
    content_hash(&x.to_json())
}

fn with_cache(
    global: &GlobalOpts,
    request: &str,
    compute: impl FnOnce() -> Result<String, CliError>,
) -> Result<String, CliError> {
    let key = content_hash(request);
    if let Some(cache) = cache_for(global) {
        if let Some(hit) = cache.lookup(&key) {
            return Ok(hit);
        }
        let out = compute()?;
        let _ = cache.store(&key, &out);
        Ok(out)
    } else {
        compute()
    }
}

fn fixed_point_listing(
    x: &ToricThreefold,
    beta: &CurveClass,
    n: i64,
    opts: &EngineOpts,
) -> Result<serde_json::Value, CliError> {
    let decs = x.decompose_class(beta)?;
    let degree_one = decs.iter().all(|d| d.len() == 1 && d[0].1 == 1);
    if degree_one {
        let pairs = ptcob_core::deg1::enumerate_deg1(x, beta, n)?;
        let listing: Vec<serde_json::Value> = pairs
            .iter()
            .map(|p| {
                json!({
                    "edge": x.edge_name(p.edge),
                    "a": p.a,
                    "b": p.b,
                })
            })
            .collect();
        return Ok(json!({
            "geometry": x.id,
            "beta": beta.0,
            "n": n,
            "engine": "deg1",
            "count": pairs.len(),
            "pairs": listing,
        }));
    }
    if !opts.enable_ptvertex {
        return Err(LocalizeError::EngineUnavailable(
            "class is not degree one; pass --enable-ptvertex to use the general engine".into(),
        )
        .into());
    }
    let engine = ptcob_core::vertex::VertexEngine::new(x);
    let pairs = engine.enumerate(beta, n)?;
    let listing: Vec<serde_json::Value> = pairs
        .iter()
        .map(|p| {
            let comps: Vec<serde_json::Value> = p
                .components
                .iter()
                .map(|c| component_json(x, c))
                .collect();
            let assignment: Vec<serde_json::Value> = p
                .edge_assignment()
                .iter()
                .map(|(e, m)| json!({"edge": x.edge_name(*e), "multiplicity": m}))
                .collect();
            json!({"components": comps, "edge_assignment": assignment})
        })
        .collect();
    Ok(json!({
        "geometry": x.id,
        "beta": beta.0,
        "n": n,
        "engine": "ptvertex",
        "count": pairs.len(),
        "pairs": listing,
    }))
}

fn component_json(x: &ToricThreefold, c: &ptcob_core::vertex::ComponentConfig) -> serde_json::Value {
    use ptcob_core::vertex::ComponentConfig::*;
    match c {
        Deg1 { edge, a, b } => json!({
            "type": "edge",
            "edge": x.edge_name(*edge),
            "a": a,
            "b": b,
        }),
        Fat {
            edge,
            dir,
            inner_p,
            outer_p,
            inner_pp,
            outer_pp,
        } => json!({
            "type": "thick-edge",
            "edge": x.edge_name(*edge),
            "normal_direction": dir,
            "inner": [inner_p, inner_pp],
            "outer": [outer_p, outer_pp],
        }),
        Node {
            e1,
            e2,
            node,
            full,
            d1,
            d2,
            b1,
            b2,
        } => json!({
            "type": "node-pair",
            "edges": [x.edge_name(*e1), x.edge_name(*e2)],
            "node": x.points[*node].id,
            "node_fiber": if *full { "full" } else { "thin" },
            "node_lengths": [d1, d2],
            "far_lengths": [b1, b2],
        }),
    }
}
