//! Batch front end for `starpf-core`.
//!
//! Every run is a pure function of its [`RunConfig`]: outputs go to
//! `--output` (or standard output), the exit code is 0 when all checks pass,
//! 2 when a verification fails and 1 on input errors.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use starpf_core::approximation::{build_smooth_approximation, convexity_check};
use starpf_core::geometry::{ScalarField, StarDomain};
use starpf_core::mesh::mesh_quality;
use starpf_core::spectra::{
    convergence_study, domain_mesh, explicit_bounds_check, guerini_upper_bound, spectrum_report,
};
use starpf_core::transforms::{
    chord_angle_bounds_check, empirical_lipschitz, empirical_lipschitz_with_bound, scalar_lipschitz, LipschitzReport,
    RadialMap,
};

/// Rays used to extract the boundary of a smooth approximation.
pub const APPROXIMATION_RAYS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Domain metrics.
    Analyze,
    /// Sampled Lipschitz constants against their bounds.
    Lipschitz,
    /// Smooth strictly convex interior approximation.
    Approximate,
    /// Ring mesh of the domain.
    Mesh,
    /// Poincaré–Friedrichs constants and Hodge spectra.
    Spectrum,
    /// Constants of the approximations as ε decreases.
    Converge,
    /// Explicit bounds on the constants.
    Bounds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "starpf", version, about = "Poincaré–Friedrichs constants of planar star-shaped domains")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Domain file: {"kind":"polygon"|"radial"|"ball", ...}.
    #[arg(long = "domain")]
    pub domain_path: PathBuf,
    /// Mollification radius for `approximate`.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Decreasing radii for `converge`, comma separated.
    #[arg(long = "eps", value_delimiter = ',')]
    pub eps_list: Vec<f64>,
    #[arg(long, default_value_t = 16)]
    pub rings: usize,
    #[arg(long, default_value_t = 10_000)]
    pub pairs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long = "output")]
    pub output_path: Option<PathBuf>,
    /// Defaults to csv for `converge` and json otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] starpf_core::Error),
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Usage(_) => "usage",
            Self::Core(_) => "input",
            Self::Read { .. } | Self::Io(_) => "io",
            Self::Csv(_) | Self::Json(_) => "format",
        }
    }
}

/// Writes `{"error": kind, "message": text}` as one line on standard error.
pub fn report_error(e: &CliError) {
    let message = e.to_string().lines().map(str::trim).filter(|l| !l.is_empty()).collect::<Vec<_>>().join(" ");
    eprintln!("{}", json!({ "error": e.kind(), "message": message }));
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Self::Pass => 0,
            Self::Fail => 2,
        }
    }
}

enum Artifact {
    Json(Value),
    Csv(Vec<String>, Vec<Vec<String>>),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn load_domain(config: &RunConfig) -> Result<Arc<StarDomain>, CliError> {
    let text = fs::read_to_string(&config.domain_path)
        .map_err(|source| CliError::Read { path: config.domain_path.clone(), source })?;
    Ok(Arc::new(StarDomain::from_json(&text)?))
}

fn num(v: f64) -> String {
    format!("{v:.17e}")
}

pub fn run(config: &RunConfig) -> Result<Verdict, CliError> {
    let format = config.format.unwrap_or(if config.command == Command::Converge { Format::Csv } else { Format::Json });
    if config.rings == 0 {
        return Err(usage("--rings must be at least 1"));
    }
    let domain = load_domain(config)?;
    let (artifact, verdict) = match config.command {
        Command::Analyze => analyze(&domain, format)?,
        Command::Lipschitz => lipschitz(&domain, config, format)?,
        Command::Approximate => approximate(&domain, config, format)?,
        Command::Mesh => mesh(&domain, config, format)?,
        Command::Spectrum => spectrum(&domain, config, format)?,
        Command::Converge => converge(&domain, config, format)?,
        Command::Bounds => bounds(&domain, config, format)?,
    };
    let mut bytes = Vec::new();
    match artifact {
        Artifact::Json(v) => {
            serde_json::to_writer_pretty(&mut bytes, &v)?;
            bytes.push(b'\n');
        }
        Artifact::Csv(header, rows) => {
            let mut w = csv::Writer::from_writer(&mut bytes);
            w.write_record(&header)?;
            for row in rows {
                w.write_record(&row)?;
            }
            w.flush()?;
        }
    }
    match &config.output_path {
        Some(path) => fs::write(path, bytes)?,
        None => io::stdout().lock().write_all(&bytes)?,
    }
    Ok(verdict)
}

fn to_value(v: &impl Serialize) -> Result<Value, CliError> {
    Ok(serde_json::to_value(v)?)
}

fn analyze(domain: &StarDomain, format: Format) -> Result<(Artifact, Verdict), CliError> {
    let m = domain.metrics();
    let kind = to_value(&domain.to_spec())?["kind"].clone();
    let artifact = match format {
        Format::Json => Artifact::Json(json!({ "kind": kind, "convex": domain.is_convex(), "metrics": m })),
        Format::Csv => Artifact::Csv(
            ["rho", "r_in", "r_out", "diameter", "area"].map(String::from).to_vec(),
            vec![[m.rho, m.r_in, m.r_out, m.diameter, m.area].map(num).to_vec()],
        ),
    };
    Ok((artifact, Verdict::Pass))
}

fn lipschitz(domain: &Arc<StarDomain>, config: &RunConfig, format: Format) -> Result<(Artifact, Verdict), CliError> {
    let (pairs, seed) = (config.pairs, config.seed);
    let unit_ball = StarDomain::ball(1.0)?;
    let expansion = RadialMap::Expansion(domain.clone());
    let gauge = RadialMap::Gauge(domain.clone());
    let reports: Vec<(&str, LipschitzReport)> = vec![
        ("gauge", scalar_lipschitz(ScalarField::Gauge, domain, pairs, seed)?),
        ("expansion", scalar_lipschitz(ScalarField::Expansion, domain, pairs, seed)?),
        ("oriented_distance", scalar_lipschitz(ScalarField::OrientedDistance, domain, pairs, seed)?),
        ("expansion_map", empirical_lipschitz(&expansion, &unit_ball, pairs, seed)?),
        ("gauge_map", empirical_lipschitz(&gauge, domain, pairs, seed)?),
        (
            "expansion_map_jacobian",
            empirical_lipschitz_with_bound(&expansion, &unit_ball, expansion.jacobian_lipschitz_bound(), pairs, seed)?,
        ),
        (
            "gauge_map_jacobian",
            empirical_lipschitz_with_bound(&gauge, domain, gauge.jacobian_lipschitz_bound(), pairs, seed)?,
        ),
    ];
    let chord = chord_angle_bounds_check(domain, pairs, seed)?;
    let pass = chord.pass && reports.iter().all(|(_, r)| r.pass);
    let artifact = match format {
        Format::Json => {
            let mut checks = serde_json::Map::new();
            for (name, r) in &reports {
                checks.insert(name.to_string(), to_value(r)?);
            }
            Artifact::Json(json!({ "checks": checks, "chord_angle": chord, "pass": pass }))
        }
        Format::Csv => Artifact::Csv(
            ["check", "empirical", "bound", "pairs", "pass"].map(String::from).to_vec(),
            reports
                .iter()
                .map(|(name, r)| {
                    vec![
                        name.to_string(),
                        num(r.empirical),
                        num(r.theoretical_bound),
                        r.sample_pairs.to_string(),
                        r.pass.to_string(),
                    ]
                })
                .collect(),
        ),
    };
    Ok((artifact, Verdict::from_pass(pass)))
}

fn approximate(domain: &Arc<StarDomain>, config: &RunConfig, format: Format) -> Result<(Artifact, Verdict), CliError> {
    let epsilon = config.epsilon.ok_or_else(|| usage("approximate needs --epsilon"))?;
    let approx = build_smooth_approximation(domain.clone(), epsilon, APPROXIMATION_RAYS)?;
    let convexity = convexity_check(&approx, config.pairs, config.seed);
    let pass = approx.sup_error() <= 2.0 * epsilon && convexity.pass();
    let artifact = match format {
        Format::Json => Artifact::Json(to_value(&approx.boundary().to_spec())?),
        Format::Csv => Artifact::Csv(
            ["angle", "s_base", "s_eps", "diff"].map(String::from).to_vec(),
            approx.direction_table().iter().map(|r| r.map(num).to_vec()).collect(),
        ),
    };
    Ok((artifact, Verdict::from_pass(pass)))
}

fn mesh(domain: &Arc<StarDomain>, config: &RunConfig, format: Format) -> Result<(Artifact, Verdict), CliError> {
    let mesh = domain_mesh(domain.clone(), config.rings)?;
    let artifact = match format {
        Format::Json => Artifact::Json(to_value(&mesh.to_file())?),
        Format::Csv => {
            let q = mesh_quality(&mesh);
            Artifact::Csv(
                ["vertices", "edges", "triangles", "min_angle", "max_aspect", "h_max", "h_min"]
                    .map(String::from)
                    .to_vec(),
                vec![vec![
                    mesh.num_vertices().to_string(),
                    mesh.num_edges().to_string(),
                    mesh.num_triangles().to_string(),
                    num(q.min_angle),
                    num(q.max_aspect),
                    num(q.h_max),
                    num(q.h_min),
                ]],
            )
        }
    };
    Ok((artifact, Verdict::Pass))
}

fn spectrum(domain: &Arc<StarDomain>, config: &RunConfig, format: Format) -> Result<(Artifact, Verdict), CliError> {
    let report = spectrum_report(domain.clone(), config.rings)?;
    let artifact = match format {
        Format::Json => Artifact::Json(to_value(&report)?),
        Format::Csv => {
            let mut rows = Vec::new();
            for k in 0..3 {
                for (j, v) in report.hodge(k).iter().enumerate() {
                    rows.push(vec![k.to_string(), (j + 1).to_string(), num(*v)]);
                }
            }
            Artifact::Csv(["degree", "index", "eigenvalue"].map(String::from).to_vec(), rows)
        }
    };
    Ok((artifact, Verdict::from_pass(report.pass())))
}

fn converge(domain: &Arc<StarDomain>, config: &RunConfig, format: Format) -> Result<(Artifact, Verdict), CliError> {
    if config.eps_list.is_empty() {
        return Err(usage("converge needs --eps"));
    }
    let study = convergence_study(domain.clone(), &config.eps_list, config.rings)?;
    let artifact = match format {
        Format::Json => Artifact::Json(to_value(&study)?),
        Format::Csv => {
            let (header, rows) = study.table();
            Artifact::Csv(header, rows.iter().map(|r| r.iter().map(|v| num(*v)).collect()).collect())
        }
    };
    Ok((artifact, Verdict::from_pass(study.monotone)))
}

fn bounds(domain: &Arc<StarDomain>, config: &RunConfig, format: Format) -> Result<(Artifact, Verdict), CliError> {
    let metrics = domain.metrics();
    let report = spectrum_report(domain.clone(), config.rings)?;
    let verdicts = explicit_bounds_check(&metrics, &report);
    let guerini = guerini_upper_bound(2, 1, metrics.diameter)?;
    let pass = verdicts.iter().all(|b| b.pass) && report.pf(1) <= guerini;
    let artifact = match format {
        Format::Json => Artifact::Json(json!({
            "pf": report.pf,
            "bounds": verdicts,
            "guerini": { "1": guerini },
            "pass": pass,
        })),
        Format::Csv => Artifact::Csv(
            ["name", "lower", "value", "upper", "pass"].map(String::from).to_vec(),
            verdicts
                .iter()
                .map(|b| vec![b.name.clone(), num(b.lower), num(b.value), num(b.upper), b.pass.to_string()])
                .collect(),
        ),
    };
    Ok((artifact, Verdict::from_pass(pass)))
}
