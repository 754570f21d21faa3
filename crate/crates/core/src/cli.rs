//! Command-line front end: distance queries, geodesic exports, scaling
//! probes, isometry audits and the example reproductions.
//!
//! Exit statuses: 0 success, 1 failed verdict or assertion, 2 invalid
//! arguments or configuration, 3 non-interior points.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::checker::{self, AuditOptions, ExampleName, ExampleOptions, Verdict};
use crate::coverings::HolomorphicMap;
use crate::domains::ModelDomain;
use crate::error::Error;
use crate::geodesics::{FamilySpec, GeodesicFamily};
use crate::metric::{distance_with, DistanceValue, MetricOptions};
use crate::point::ComplexPoint;
use crate::scaling;

#[derive(Debug, Parser)]
#[command(name = "kobalab", version, about = "Numerical Kobayashi geometry on model domains")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kobayashi distance between two points, or a batch from --config.
    Dist(DistArgs),
    /// Sample members of a geodesic family.
    Geodesic(GeodesicArgs),
    /// Scaling probes of the ellipsoid family.
    Probe(ProbeArgs),
    /// Isometry audit of a map along a family.
    Audit(AuditArgs),
    /// Reproduce the power-disc, exp-annulus and monomial-tube examples.
    PaperExamples(ExamplesArgs),
}

#[derive(Debug, Args)]
pub struct DomainArgs {
    /// Domain name (unit-disc, annulus, ...) or a JSON descriptor.
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long = "R")]
    pub r: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    /// JSON list of `{"domain", "z", "w"}` rows.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GeodesicArgs {
    /// Family name (disc-radial-rays, strip-horizontal, ...) or JSON.
    #[arg(long)]
    pub family: String,
    #[arg(long = "R")]
    pub r: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub count: usize,
    #[arg(long, default_value_t = 65)]
    pub samples: usize,
    #[arg(long, default_value_t = checker::DEFAULT_WINDOW)]
    pub window: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbeKind {
    Metric,
    Persistence,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long, value_enum, default_value = "metric")]
    pub kind: ProbeKind,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = scaling::DEFAULT_EPS)]
    pub eps: f64,
    /// Comma separated increasing scaling parameters.
    #[arg(long, default_value = "0.5,0.9,0.99", value_delimiter = ',')]
    pub ts: Vec<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub radius: f64,
    #[arg(long, default_value_t = 8)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// JSON file with `map`, `family`, optional `expect` and `options`.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// JSON map descriptor (overrides the config).
    #[arg(long)]
    pub map: Option<String>,
    /// JSON family descriptor (overrides the config).
    #[arg(long)]
    pub family: Option<String>,
}

#[derive(Debug, Args)]
pub struct ExamplesArgs {
    #[arg(long, value_parser = parse_example)]
    pub only: Option<ExampleName>,
    #[arg(long)]
    pub n: Option<u32>,
}

fn parse_example(s: &str) -> Result<ExampleName, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Batch row of `dist --config`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistQuery {
    pub domain: ModelDomain,
    pub z: PointSpec,
    pub w: PointSpec,
}

/// A point given as text (`"0.1+0.2i, 0.3"`) or as `[[re, im], ...]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Text(String),
    Coords(ComplexPoint),
}

impl PointSpec {
    fn resolve(&self) -> Result<ComplexPoint, CliError> {
        match self {
            Self::Text(s) => parse_point(s),
            Self::Coords(p) => Ok(p.clone()),
        }
    }
}

fn expect_verdict() -> Verdict {
    Verdict::IsometricAlongFamily
}

/// Contents of `audit --config`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditConfig {
    pub map: HolomorphicMap,
    pub family: FamilySpec,
    #[serde(default = "expect_verdict")]
    pub expect: Verdict,
    #[serde(default)]
    pub options: Option<AuditOptions>,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn failed(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotInterior { .. } | Error::ZeroCoordinate { .. } => 3,
            Error::InvalidDomain(_)
            | Error::DimensionMismatch { .. }
            | Error::InvalidAntipodal(_)
            | Error::SingularMatrix
            | Error::Unsupported(_) => 2,
            _ => 1,
        };
        Self { code, message: e.to_string() }
    }
}

fn parse_point(s: &str) -> Result<ComplexPoint, CliError> {
    s.parse::<ComplexPoint>().map_err(CliError::usage)
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> Result<T, CliError> {
    serde_json::from_str(s).map_err(|e| CliError::usage(format!("invalid {what}: {e}")))
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

/// Resolves `--domain` (name or JSON) together with its parameter flags.
pub fn resolve_domain(args: &DomainArgs) -> Result<ModelDomain, CliError> {
    let name = args.domain.as_deref().ok_or_else(|| CliError::usage("--domain is required"))?;
    if name.trim_start().starts_with('{') {
        return parse_json("domain", name);
    }
    let need_r = || args.r.ok_or_else(|| CliError::usage(format!("{name} needs --R")));
    let need_n = || args.n.ok_or_else(|| CliError::usage(format!("{name} needs --n")));
    let d = match name {
        "unit-disc" => ModelDomain::UnitDisc,
        "punctured-disc" => ModelDomain::PuncturedDisc,
        "left-half-plane" => ModelDomain::LeftHalfPlane,
        "annulus" => ModelDomain::annulus(need_r()?)?,
        "strip" => ModelDomain::strip(need_r()?)?,
        "unit-ball" => ModelDomain::UnitBall { n: need_n()? },
        "polydisc" => ModelDomain::Polydisc { n: need_n()? },
        "scaled-ellipsoid" => ModelDomain::scaled_ellipsoid(
            need_n()?,
            args.eps.unwrap_or(scaling::DEFAULT_EPS),
            args.t.ok_or_else(|| CliError::usage("scaled-ellipsoid needs --t"))?,
        )?,
        "tube" | "reinhardt-log" => return Err(CliError::usage(format!("{name} needs a JSON descriptor with a base"))),
        other => return Err(CliError::usage(format!("unknown domain {other}"))),
    };
    d.validate()?;
    Ok(d)
}

fn resolve_family(args: &GeodesicArgs) -> Result<FamilySpec, CliError> {
    let name = args.family.as_str();
    if name.trim_start().starts_with('{') {
        return parse_json("family", name);
    }
    let need_r = || args.r.ok_or_else(|| CliError::usage(format!("{name} needs --R")));
    Ok(match name {
        "disc-radial-rays" => FamilySpec::DiscRadialRays,
        "punctured-disc-radial" => FamilySpec::PuncturedDiscRadial,
        "circle-arcs" => FamilySpec::CircleArcs,
        "strip-vertical" => FamilySpec::StripVertical { r: need_r()? },
        "strip-horizontal" => FamilySpec::StripHorizontal { r: need_r()? },
        "ball-landing" => {
            let n = args.n.unwrap_or(2);
            FamilySpec::BallLanding {
                n,
                landing: ComplexPoint::e1(n),
            }
        }
        other => return Err(CliError::usage(format!("unknown family {other}; pass a JSON descriptor"))),
    })
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_point(p: &ComplexPoint) -> String {
    p.coords()
        .iter()
        .map(|c| format!("{:.16e}{:+.16e}i", c.re, c.im))
        .collect::<Vec<_>>()
        .join(";")
}

const DIST_HEADER: &str = "domain,z,w,value,method,gap,deck_index";

fn dist_row(domain: &ModelDomain, z: &ComplexPoint, w: &ComplexPoint, d: &DistanceValue) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        domain.name(),
        fmt_point(z),
        fmt_point(w),
        fmt_f64(d.value),
        d.method.as_str(),
        fmt_f64(d.gap),
        d.deck_index.as_ref().map(|k| k.to_string()).unwrap_or_default()
    )
}

/// Brackets of any width are reported with their gap unless `--tol` caps it.
fn metric_options(global: &GlobalArgs) -> MetricOptions {
    let mut o = MetricOptions::permissive();
    if let Some(t) = global.tol {
        o.max_gap = t;
    }
    o
}

#[derive(Serialize)]
struct DistRecord<'a> {
    domain: &'a ModelDomain,
    z: &'a ComplexPoint,
    w: &'a ComplexPoint,
    #[serde(flatten)]
    value: &'a DistanceValue,
}

fn cmd_dist(global: &GlobalArgs, args: &DistArgs) -> Result<String, CliError> {
    let opts = metric_options(global);
    let queries: Vec<(ModelDomain, ComplexPoint, ComplexPoint)> = if let Some(path) = &args.config {
        let rows: Vec<DistQuery> = parse_json("batch config", &read_file(path)?)?;
        rows.into_iter()
            .map(|q| Ok((q.domain, q.z.resolve()?, q.w.resolve()?)))
            .collect::<Result<_, CliError>>()?
    } else {
        let domain = resolve_domain(&args.domain)?;
        let z = parse_point(args.z.as_deref().ok_or_else(|| CliError::usage("--z is required"))?)?;
        let w = parse_point(args.w.as_deref().ok_or_else(|| CliError::usage("--w is required"))?)?;
        vec![(domain, z, w)]
    };
    let mut values = Vec::with_capacity(queries.len());
    for (d, z, w) in &queries {
        values.push(distance_with(d, z, w, &opts)?);
    }
    let batch = args.config.is_some();
    let format = global.format.unwrap_or(if batch { Format::Csv } else { Format::Text });
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str(DIST_HEADER);
            out.push('\n');
            for ((d, z, w), v) in queries.iter().zip(&values) {
                out.push_str(&dist_row(d, z, w, v));
                out.push('\n');
            }
        }
        Format::Json => {
            let recs: Vec<DistRecord> = queries
                .iter()
                .zip(&values)
                .map(|((domain, z, w), value)| DistRecord { domain, z, w, value })
                .collect();
            out = serde_json::to_string_pretty(&recs).expect("records serialise");
            out.push('\n');
        }
        Format::Text => {
            for v in &values {
                let _ = write!(out, "value {}  method {}  gap {:.3e}", fmt_f64(v.value), v.method.as_str(), v.gap);
                if let Some(k) = &v.deck_index {
                    let _ = write!(out, "  deck {k}");
                }
                out.push('\n');
            }
        }
    }
    Ok(out)
}

fn cmd_geodesic(global: &GlobalArgs, args: &GeodesicArgs) -> Result<String, CliError> {
    let family = GeodesicFamily::new(resolve_family(args)?)?;
    let members = family.members(args.count)?;
    let n = family.domain().dim();
    let samples = args.samples.max(2);
    match global.format.unwrap_or(Format::Csv) {
        Format::Csv | Format::Text => {
            let mut s = String::from("member,t");
            for j in 1..=n {
                let _ = write!(s, ",re_z{j},im_z{j}");
            }
            s.push('\n');
            for (m, g) in members.iter().enumerate() {
                let (lo, hi) = g.interval.window(args.window);
                for k in 0..samples {
                    let t = lo + (hi - lo) * k as f64 / (samples - 1) as f64;
                    let _ = write!(s, "{m},{}", fmt_f64(t));
                    for c in g.sample(t).coords() {
                        let _ = write!(s, ",{},{}", fmt_f64(c.re), fmt_f64(c.im));
                    }
                    s.push('\n');
                }
            }
            Ok(s)
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Member {
                label: String,
                t: Vec<f64>,
                points: Vec<ComplexPoint>,
            }
            let out: Vec<Member> = members
                .iter()
                .map(|g| {
                    let (lo, hi) = g.interval.window(args.window);
                    let t: Vec<f64> = (0..samples)
                        .map(|k| lo + (hi - lo) * k as f64 / (samples - 1) as f64)
                        .collect();
                    let points = t.iter().map(|&t| g.sample(t)).collect();
                    Member { label: g.label.clone(), t, points }
                })
                .collect();
            Ok(serde_json::to_string_pretty(&out).expect("members serialise") + "\n")
        }
    }
}

fn cmd_probe(global: &GlobalArgs, args: &ProbeArgs) -> Result<String, CliError> {
    let table = match args.kind {
        ProbeKind::Metric => {
            let grid = scaling::default_grid(args.n, args.radius, args.points);
            scaling::metric_convergence_probe(args.n, args.eps, &args.ts, &grid)?
        }
        ProbeKind::Persistence => {
            let w0 = ComplexPoint::zeros(args.n);
            scaling::geodesic_persistence_probe(args.eps, &args.ts, &w0, (0.0, 5.0))?
        }
    };
    Ok(match global.format.unwrap_or(Format::Csv) {
        Format::Csv => table.to_csv(),
        Format::Json => serde_json::to_string_pretty(&table).expect("table serialises") + "\n",
        Format::Text => {
            let mut s = format!("{:>8}  {:>12}  {:>12}\n", "t", "deviation", "gap");
            for (t, dev) in table.per_t() {
                let gap = table.rows.iter().filter(|r| r.t == t).map(|r| r.gap).fold(0.0, f64::max);
                let _ = writeln!(s, "{t:>8.4}  {dev:>12.4e}  {gap:>12.4e}");
            }
            let sum = table.summary();
            let _ = writeln!(s, "max deviation {:.4e}  monotone {}", sum.max_deviation, sum.monotone);
            s
        }
    })
}

fn cmd_audit(global: &GlobalArgs, args: &AuditArgs) -> Result<(String, bool), CliError> {
    let mut config: Option<AuditConfig> = match &args.config {
        Some(path) => Some(parse_json("audit config", &read_file(path)?)?),
        None => None,
    };
    if let (Some(m), Some(f)) = (&args.map, &args.family) {
        config = Some(AuditConfig {
            map: parse_json("map", m)?,
            family: parse_json("family", f)?,
            expect: config.as_ref().map_or(Verdict::IsometricAlongFamily, |c| c.expect),
            options: config.and_then(|c| c.options),
        });
    } else if args.map.is_some() || args.family.is_some() {
        let c = config.as_mut().ok_or_else(|| CliError::usage("--map and --family go together without --config"))?;
        if let Some(m) = &args.map {
            c.map = parse_json("map", m)?;
        }
        if let Some(f) = &args.family {
            c.family = parse_json("family", f)?;
        }
    }
    let config = config.ok_or_else(|| CliError::usage("audit needs --config or --map and --family"))?;
    let mut opts = config.options.clone().unwrap_or_default();
    if let Some(t) = global.tol {
        opts.tol = t;
    }
    let family = GeodesicFamily::new(config.family.clone()).map_err(|e| CliError::usage(e.to_string()))?;
    if family.domain() != config.map.source().map_err(|e| CliError::usage(e.to_string()))? {
        return Err(CliError::usage("family and map live on different domains"));
    }
    let report = checker::audit_isometry(&config.map, &family, &opts)?;
    let text = match global.format.unwrap_or(Format::Text) {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
        Format::Csv => {
            let mut s = String::from("id,label,max_deviation,max_gap,pairs,within_tolerance\n");
            for g in &report.per_geodesic {
                let _ = writeln!(
                    s,
                    "{},\"{}\",{},{},{},{}",
                    g.id,
                    g.label.replace('"', "'"),
                    fmt_f64(g.max_deviation),
                    fmt_f64(g.max_gap),
                    g.pairs,
                    g.within_tolerance
                );
            }
            s
        }
    };
    Ok((text, report.verdict == config.expect))
}

fn cmd_paper_examples(global: &GlobalArgs, args: &ExamplesArgs) -> Result<(String, Option<String>), CliError> {
    let names: Vec<ExampleName> = match args.only {
        Some(n) => vec![n],
        None => ExampleName::ALL.to_vec(),
    };
    let mut bundles = Vec::new();
    for name in names {
        let mut opts = ExampleOptions {
            seed: global.seed,
            ..ExampleOptions::default()
        };
        if let Some(n) = args.n {
            opts.n = n;
        }
        if let Some(t) = global.tol {
            opts.audit.tol = t;
        }
        bundles.push(checker::reproduce_example(name, &opts)?);
    }
    let failure = bundles
        .iter()
        .find_map(|b| b.first_failure().map(|a| format!("{}: assertion {} failed ({})", b.name.as_str(), a.name, a.detail)));
    let text = match global.format.unwrap_or(Format::Text) {
        Format::Json => serde_json::to_string_pretty(&bundles).expect("bundles serialise") + "\n",
        Format::Text | Format::Csv => checker::summary_table(&bundles),
    };
    Ok((text, failure))
}

fn emit(global: &GlobalArgs, text: &str) -> Result<(), CliError> {
    match &global.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::failed(e.to_string()))
        }
    }
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    let g = &cli.global;
    let result = match &cli.command {
        Command::Dist(a) => cmd_dist(g, a).and_then(|t| emit(g, &t)),
        Command::Geodesic(a) => cmd_geodesic(g, a).and_then(|t| emit(g, &t)),
        Command::Probe(a) => cmd_probe(g, a).and_then(|t| emit(g, &t)),
        Command::Audit(a) => cmd_audit(g, a).and_then(|(t, ok)| {
            emit(g, &t)?;
            if ok {
                Ok(())
            } else {
                Err(CliError::failed("verdict differs from the expected one"))
            }
        }),
        Command::PaperExamples(a) => cmd_paper_examples(g, a).and_then(|(t, failure)| {
            emit(g, &t)?;
            failure.map_or(Ok(()), |f| Err(CliError::failed(f)))
        }),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn domain_args(name: &str) -> DomainArgs {
        DomainArgs {
            domain: Some(name.into()),
            r: None,
            n: None,
            eps: None,
            t: None,
        }
    }

    #[test]
    fn resolves_named_and_json_domains() {
        assert_eq!(resolve_domain(&domain_args("unit-disc")).unwrap(), ModelDomain::UnitDisc);
        let mut a = domain_args("annulus");
        assert_eq!(resolve_domain(&a).unwrap_err().code, 2);
        a.r = Some(4.0);
        assert_eq!(resolve_domain(&a).unwrap(), ModelDomain::annulus(4.0).unwrap());
        let j = domain_args(r#"{"kind":"strip","R":3.0}"#);
        assert_eq!(resolve_domain(&j).unwrap(), ModelDomain::strip(3.0).unwrap());
        assert_eq!(resolve_domain(&domain_args(r#"{"kind":"annulus","R":0.5}"#)).unwrap_err().code, 2);
    }

    #[test]
    fn csv_rows_round_trip() {
        let z = ComplexPoint::from_real(&[0.1]);
        let w = ComplexPoint::from_real(&[0.7]);
        let d = crate::metric::distance(&ModelDomain::UnitDisc, &z, &w).unwrap();
        let row = dist_row(&ModelDomain::UnitDisc, &z, &w, &d);
        let value: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
        assert_eq!(value, d.value);
    }

    #[test]
    fn error_codes() {
        let e: CliError = Error::NotInterior {
            domain: "d".into(),
            point: "p".into(),
        }
        .into();
        assert_eq!(e.code, 3);
        let e: CliError = Error::InvalidDomain("x".into()).into();
        assert_eq!(e.code, 2);
    }
}
