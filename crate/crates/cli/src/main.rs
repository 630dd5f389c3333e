//! Command-line front end: parse symbol configs, dispatch subcommands,
//! emit machine-readable reports.
//!
//! Every report is a single JSON document with a versioned `schema`
//! field, the full effective config (defaults materialized), the
//! numeric results with witnesses, and wall-clock timings. Identical
//! configs (including seeds) produce byte-identical output except for
//! the `timings` object; worker count never changes a digit.
//!
//! Exit codes: 0 success (a "fails" verdict is a result, not an error),
//! 2 invalid config (the message names the offending flag or JSON node
//! path), 3 numerical failure (non-finite values, cell cap exceeded).

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use disklab::criteria::{
    cross_validate, density_search, exceptional_mass_ratio, luecking_lemma_check,
    CrossValidateParams, DiskKind, ExceptionalKind, LemmaSample, NetParams, Verdict,
};
use disklab::error::Error;
use disklab::geometry::{pseudo_net, BoundaryPoint, UnitDiskPoint};
use disklab::norms::{space_norm, NormContext, SpaceSpec};
use disklab::operator::{lower_bound_estimate, random_polynomial, Lcg, TestFamily};
use disklab::quadrature::{make_grid_with_cap, PolarGrid, SubdiskResolution, DEFAULT_R_MAX};
use disklab::symbols::json::{parse_symbol, symbol_to_json};
use disklab::symbols::{sup_norm_estimate, SymbolExpr};

#[derive(Parser)]
#[command(
    name = "disklab",
    version,
    about = "Level sets, disk-space norms and closed-range diagnostics for the integral operator S_g"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a function-space norm of a symbol.
    Norm(NormCmd),
    /// Search the (c, η) lattice for the level-set area-density condition.
    CheckDensity(CheckDensityCmd),
    /// Estimate inf ‖S_g f‖/‖f‖ over a test family.
    LowerBound(LowerBoundCmd),
    /// Randomized sub-mean-value lemma suite plus exceptional-mass probes.
    LemmaCheck(LemmaCheckCmd),
    /// Compare the density verdict against bounded-below verdicts per space.
    CrossValidate(CrossValidateCmd),
    /// Bundle of all diagnostics for one symbol.
    Report(ReportCmd),
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Dyadic refinement depth of the global grid.
    #[arg(long, default_value_t = 9)]
    levels: u32,
    /// Angular cells in the innermost band (doubles per band).
    #[arg(long = "angular-base", default_value_t = 24)]
    angular_base: u32,
    /// Truncation radius of the global grid.
    #[arg(long, default_value_t = DEFAULT_R_MAX)]
    rmax: f64,
    /// Cap on total grid cells.
    #[arg(long = "cell-cap", default_value_t = 10_000_000)]
    cell_cap: u64,
}

impl GridArgs {
    fn build(&self) -> Result<PolarGrid, Error> {
        make_grid_with_cap(self.levels, self.angular_base, self.rmax, self.cell_cap)
    }

    fn echo(&self) -> Value {
        json!({
            "levels": self.levels,
            "angular_base": self.angular_base,
            "r_max": self.rmax,
            "cell_cap": self.cell_cap,
        })
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SpaceName {
    HardyClassical,
    Hardy,
    Bmoa,
    Qp,
    Besov,
    Bergman,
}

#[derive(Args)]
struct SpaceArgs {
    #[arg(long, value_enum)]
    space: SpaceName,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Bergman weight exponent.
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Stolz aperture for the square-function Hardy norm.
    #[arg(long, default_value_t = 0.5)]
    aperture: f64,
}

impl SpaceArgs {
    fn spec(&self) -> SpaceSpec {
        let mut spec = match self.space {
            SpaceName::HardyClassical => SpaceSpec::hardy_classical(self.p),
            SpaceName::Hardy => SpaceSpec::hardy(self.p),
            SpaceName::Bmoa => SpaceSpec::bmoa(),
            SpaceName::Qp => SpaceSpec::qp(self.p),
            SpaceName::Besov => SpaceSpec::besov(self.p),
            SpaceName::Bergman => SpaceSpec::bergman(self.p, self.gamma),
        };
        spec.aperture = self.aperture;
        spec
    }
}

#[derive(Args, Clone)]
struct BetaNetArgs {
    /// Pseudo-hyperbolic separation of the Möbius-parameter net.
    #[arg(long = "beta-sep", default_value_t = 0.2)]
    beta_sep: f64,
    /// Radial reach of the Möbius-parameter net.
    #[arg(long = "beta-rlimit", default_value_t = 1.0 - 1.0 / 128.0)]
    beta_r_limit: f64,
    /// Boundary vertices for the square-function outer integral.
    #[arg(long = "n-boundary", default_value_t = 8192)]
    n_boundary: usize,
    /// Circle samples for the classical Hardy norm.
    #[arg(long = "n-circle", default_value_t = 65536)]
    n_circle: usize,
}

#[derive(Args)]
struct NormCmd {
    /// Symbol JSON file.
    #[arg(long)]
    f: PathBuf,
    #[command(flatten)]
    space: SpaceArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    beta: BetaNetArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct DensityArgs {
    /// Level-set thresholds (comma separated); default {2⁻¹..2⁻⁶}·sup|g|.
    #[arg(long = "c-grid", value_delimiter = ',')]
    c_grid: Option<Vec<f64>>,
    #[arg(long = "eta-grid", value_delimiter = ',', default_values_t = [0.5, 0.7, 0.9])]
    eta_grid: Vec<f64>,
    #[arg(long = "delta-min", default_value_t = 0.01)]
    delta_min: f64,
    /// Pseudo-hyperbolic separation of the center net.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    separation: f64,
    /// Radial reach of the center net.
    #[arg(long = "r-limit", default_value_t = 1.0 - 1.0 / 1024.0)]
    r_limit: f64,
    /// Use the Euclidean subdisks Δ_η(a) instead of pseudo-hyperbolic disks.
    #[arg(long)]
    euclidean: bool,
    /// Radial rings of the local subdisk grids.
    #[arg(long, default_value_t = 24)]
    rings: usize,
    /// Outer-ring angular cells of the local subdisk grids.
    #[arg(long = "res-angular", default_value_t = 151)]
    res_angular: usize,
}

impl DensityArgs {
    fn resolution(&self) -> SubdiskResolution {
        SubdiskResolution {
            rings: self.rings,
            angular: self.res_angular,
        }
    }

    fn echo(&self, c_grid: &[f64]) -> Value {
        json!({
            "c_grid": c_grid,
            "eta_grid": self.eta_grid,
            "delta_min": self.delta_min,
            "net": {"separation": self.separation, "r_limit": self.r_limit},
            "disk_kind": if self.euclidean { "euclidean" } else { "pseudo" },
            "resolution": {"rings": self.rings, "angular": self.res_angular},
        })
    }
}

#[derive(Args)]
struct CheckDensityCmd {
    /// Symbol JSON file for g.
    #[arg(long)]
    g: PathBuf,
    #[command(flatten)]
    density: DensityArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    Moebius,
    Besov,
    Monomials,
    Random,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum, default_value_t = FamilyName::Moebius)]
    family: FamilyName,
    /// Radii of the α-net for the Möbius/Besov families.
    #[arg(long, value_delimiter = ',', default_values_t = [0.3, 0.6, 0.9, 0.99])]
    alphas: Vec<f64>,
    /// Angles of the α-net.
    #[arg(long = "alpha-angles", value_delimiter = ',', default_values_t = [0.0, std::f64::consts::PI])]
    alpha_angles: Vec<f64>,
    /// Degree bound for the monomial/random families.
    #[arg(long, default_value_t = 4)]
    maxdeg: usize,
    /// Member count for the random family.
    #[arg(long, default_value_t = 5)]
    count: usize,
    /// Seed for the random family (required when randomness is requested).
    #[arg(long)]
    seed: Option<u64>,
}

impl FamilyArgs {
    fn alpha_net(&self, p: f64) -> Result<Vec<UnitDiskPoint>, Error> {
        let mut net = Vec::new();
        for &r in &self.alphas {
            for &th in &self.alpha_angles {
                let point = UnitDiskPoint::new(r * th.cos(), r * th.sin())?;
                if matches!(self.family, FamilyName::Besov) && point.abs() == 0.0 {
                    return Err(Error::config("alphas", "Besov family needs α ≠ 0"));
                }
                let _ = p;
                net.push(point);
            }
        }
        Ok(net)
    }

    fn build(&self, p: f64) -> Result<TestFamily, Error> {
        Ok(match self.family {
            FamilyName::Moebius => TestFamily::MoebiusHardy {
                alpha_net: self.alpha_net(p)?,
            },
            FamilyName::Besov => TestFamily::BesovTest {
                p,
                alpha_net: self.alpha_net(p)?,
            },
            FamilyName::Monomials => TestFamily::Monomials {
                maxdeg: self.maxdeg,
            },
            FamilyName::Random => TestFamily::RandomPolynomials {
                count: self.count,
                maxdeg: self.maxdeg,
                seed: self.seed.ok_or_else(|| {
                    Error::config("seed", "--seed is required for the random family")
                })?,
            },
        })
    }

    fn echo(&self) -> Value {
        json!({
            "family": match self.family {
                FamilyName::Moebius => "moebius",
                FamilyName::Besov => "besov",
                FamilyName::Monomials => "monomials",
                FamilyName::Random => "random",
            },
            "alphas": self.alphas,
            "alpha_angles": self.alpha_angles,
            "maxdeg": self.maxdeg,
            "count": self.count,
            "seed": self.seed,
        })
    }
}

#[derive(Args)]
struct LowerBoundCmd {
    /// Symbol JSON file for g.
    #[arg(long)]
    g: PathBuf,
    #[command(flatten)]
    space: SpaceArgs,
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    beta: BetaNetArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct LemmaCheckCmd {
    /// Random samples for the lemma suite.
    #[arg(long, default_value_t = 200)]
    count: usize,
    /// Seed driving the sample stream (required: the suite is randomized).
    #[arg(long)]
    seed: Option<u64>,
    /// Degree bound of the sampled polynomials.
    #[arg(long, default_value_t = 6)]
    maxdeg: usize,
    /// Radial rings of the local subdisk grids.
    #[arg(long, default_value_t = 32)]
    rings: usize,
    #[arg(long = "res-angular", default_value_t = 201)]
    res_angular: usize,
    /// Exceptional-mass probes per kind (over ε ∈ {1/2, 1/4, 1/8}).
    #[arg(long = "mass-count", default_value_t = 2)]
    mass_count: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CrossValidateCmd {
    /// Symbol JSON file for g.
    #[arg(long)]
    g: PathBuf,
    /// Spaces to test, e.g. "hardy:2,hardy:3,bmoa,besov:2".
    #[arg(long, default_value = "hardy:2,hardy:3,bmoa,besov:2")]
    spaces: String,
    #[command(flatten)]
    density: DensityArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ReportCmd {
    /// Symbol JSON file for g.
    #[arg(long)]
    g: PathBuf,
    /// Spaces for the cross-validation section.
    #[arg(long, default_value = "hardy:2,besov:2")]
    spaces: String,
    /// Seed for the randomized lemma section.
    #[arg(long)]
    seed: Option<u64>,
    /// Lemma suite size.
    #[arg(long = "lemma-count", default_value_t = 50)]
    lemma_count: usize,
    #[command(flatten)]
    density: DensityArgs,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Norm(cmd) => run_norm(cmd),
        Cmd::CheckDensity(cmd) => run_check_density(cmd),
        Cmd::LowerBound(cmd) => run_lower_bound(cmd),
        Cmd::LemmaCheck(cmd) => run_lemma_check(cmd),
        Cmd::CrossValidate(cmd) => run_cross_validate(cmd),
        Cmd::Report(cmd) => run_report(cmd),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidConfig { .. } | Error::Degenerate { .. } => ExitCode::from(2),
                Error::Numerical { .. } | Error::ResourceLimit { .. } => ExitCode::from(3),
            }
        }
    }
}

fn load_symbol(path: &PathBuf) -> Result<SymbolExpr, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::config(path.display().to_string(), format!("cannot read file: {e}"))
    })?;
    parse_symbol(&text)
}

fn write_output(text: &str, out: &Option<PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            Error::numerical(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn emit_json(doc: Value, output: &OutputArgs) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::numerical(format!("serialization failed: {e}")))?;
    write_output(&text, &output.out)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn run_norm(cmd: NormCmd) -> Result<(), Error> {
    if cmd.output.format == OutputFormat::Csv {
        return Err(Error::config("format", "norm reports are JSON only"));
    }
    let started = Instant::now();
    let f = load_symbol(&cmd.f)?;
    let spec = cmd.space.spec();
    spec.validate()?;
    let grid = cmd.grid.build()?;
    let beta_net = pseudo_net(cmd.beta.beta_sep, cmd.beta.beta_r_limit)?;
    let ctx = NormContext {
        grid: &grid,
        beta_net: &beta_net,
        n_boundary: cmd.beta.n_boundary,
        n_circle: cmd.beta.n_circle,
    };
    let result = space_norm(&f, &spec, &ctx)?;
    let doc = json!({
        "schema": 1,
        "subcommand": "norm",
        "config": {
            "symbol": symbol_to_json(&f),
            "space": to_value(&spec),
            "grid": cmd.grid.echo(),
            "beta_net": {
                "separation": cmd.beta.beta_sep,
                "r_limit": cmd.beta.beta_r_limit,
                "size": beta_net.len(),
            },
            "n_boundary": cmd.beta.n_boundary,
            "n_circle": cmd.beta.n_circle,
        },
        "results": to_value(&result),
        "timings": {"total_seconds": started.elapsed().as_secs_f64()},
    });
    emit_json(doc, &cmd.output)
}

fn run_check_density(cmd: CheckDensityCmd) -> Result<(), Error> {
    let started = Instant::now();
    let g = load_symbol(&cmd.g)?;
    let c_grid = cmd
        .density
        .c_grid
        .clone()
        .unwrap_or_else(|| disklab::criteria::default_c_grid_for(&g));
    let kind = if cmd.density.euclidean {
        DiskKind::Euclidean
    } else {
        DiskKind::Pseudo
    };
    let verdict = density_search(
        &g,
        &c_grid,
        &cmd.density.eta_grid,
        NetParams {
            separation: cmd.density.separation,
            r_limit: cmd.density.r_limit,
        },
        cmd.density.delta_min,
        cmd.density.resolution(),
        kind,
    )?;

    if cmd.output.format == OutputFormat::Csv {
        let mut csv = String::from("a_re,a_im,ratio\n");
        for (a, ratio) in &verdict.profile {
            csv.push_str(&format!("{},{},{}\n", a.re, a.im, ratio));
        }
        return write_output(&csv, &cmd.output.out);
    }

    let doc = json!({
        "schema": 1,
        "subcommand": "check-density",
        "config": {
            "symbol": symbol_to_json(&g),
            "density": cmd.density.echo(&c_grid),
        },
        "results": to_value(&verdict),
        "timings": {"total_seconds": started.elapsed().as_secs_f64()},
    });
    emit_json(doc, &cmd.output)
}

fn run_lower_bound(cmd: LowerBoundCmd) -> Result<(), Error> {
    if cmd.output.format == OutputFormat::Csv {
        return Err(Error::config("format", "lower-bound reports are JSON only"));
    }
    let started = Instant::now();
    let g = load_symbol(&cmd.g)?;
    let spec = cmd.space.spec();
    spec.validate()?;
    let family = cmd.family.build(spec.p)?;
    let grid = cmd.grid.build()?;
    let beta_net = pseudo_net(cmd.beta.beta_sep, cmd.beta.beta_r_limit)?;
    let ctx = NormContext {
        grid: &grid,
        beta_net: &beta_net,
        n_boundary: cmd.beta.n_boundary,
        n_circle: cmd.beta.n_circle,
    };
    let report = lower_bound_estimate(&g, &spec, &family, &ctx)?;
    let doc = json!({
        "schema": 1,
        "subcommand": "lower-bound",
        "config": {
            "symbol": symbol_to_json(&g),
            "space": to_value(&spec),
            "family": cmd.family.echo(),
            "grid": cmd.grid.echo(),
            "beta_net": {
                "separation": cmd.beta.beta_sep,
                "r_limit": cmd.beta.beta_r_limit,
                "size": beta_net.len(),
            },
            "n_boundary": cmd.beta.n_boundary,
            "n_circle": cmd.beta.n_circle,
        },
        "results": to_value(&report),
        "timings": {"total_seconds": started.elapsed().as_secs_f64()},
    });
    emit_json(doc, &cmd.output)
}

/// Deterministic lemma-suite sample stream: polynomial coefficients,
/// center, subdisk factor and level all from one generator.
fn lemma_suite(
    count: usize,
    maxdeg: usize,
    seed: u64,
    res: SubdiskResolution,
) -> Result<Value, Error> {
    let mut rng = Lcg::new(seed);
    let mut violations = 0usize;
    let mut degenerate = 0usize;
    let mut min_margin = f64::INFINITY;
    for _ in 0..count {
        let f = random_polynomial(&mut rng, maxdeg);
        let r = 0.9 * rng.next_f64().sqrt();
        let th = std::f64::consts::TAU * rng.next_f64();
        let alpha = UnitDiskPoint::new(r * th.cos(), r * th.sin())?;
        let eta = 0.1 + 0.4 * rng.next_f64();
        let lambda = 0.05 + 0.4 * rng.next_f64();
        let sample = LemmaSample::new(f, alpha, eta, lambda, 0.5)?;
        let check = luecking_lemma_check(&sample, res)?;
        if check.degenerate {
            degenerate += 1;
            continue;
        }
        let margin = check.lhs - check.rhs;
        min_margin = min_margin.min(margin);
        if !check.holds {
            violations += 1;
        }
    }
    Ok(json!({
        "count": count,
        "violations": violations,
        "degenerate": degenerate,
        "min_margin": if min_margin.is_finite() { Value::from(min_margin) } else { Value::Null },
    }))
}

fn exceptional_mass_suite(
    mass_count: usize,
    maxdeg: usize,
    seed: u64,
    res: SubdiskResolution,
) -> Result<Value, Error> {
    let outer = make_grid_with_cap(5, 8, DEFAULT_R_MAX, 10_000_000)?;
    let mut rng = Lcg::new(seed ^ 0x9e3779b97f4a7c15);
    let mut rows = Vec::new();
    for i in 0..mass_count {
        let f = random_polynomial(&mut rng, maxdeg);
        for kind in [ExceptionalKind::A, ExceptionalKind::B] {
            for eps in [0.5, 0.25, 0.125] {
                let ratio = exceptional_mass_ratio(
                    kind,
                    &f,
                    BoundaryPoint::new(0.0)?,
                    0.5,
                    None,
                    eps,
                    0.3,
                    0.25,
                    &outer,
                    res,
                )?;
                rows.push(json!({
                    "sample": i,
                    "kind": format!("{kind:?}"),
                    "eps": eps,
                    "implied_constant": ratio,
                }));
            }
        }
    }
    Ok(Value::Array(rows))
}

fn run_lemma_check(cmd: LemmaCheckCmd) -> Result<(), Error> {
    if cmd.output.format == OutputFormat::Csv {
        return Err(Error::config("format", "lemma reports are JSON only"));
    }
    let started = Instant::now();
    let seed = cmd
        .seed
        .ok_or_else(|| Error::config("seed", "--seed is required (randomized suite)"))?;
    let res = SubdiskResolution {
        rings: cmd.rings,
        angular: cmd.res_angular,
    };
    let lemma = lemma_suite(cmd.count, cmd.maxdeg, seed, res)?;
    let mass = exceptional_mass_suite(
        cmd.mass_count,
        cmd.maxdeg,
        seed,
        SubdiskResolution {
            rings: 12,
            angular: 76,
        },
    )?;
    let doc = json!({
        "schema": 1,
        "subcommand": "lemma-check",
        "config": {
            "count": cmd.count,
            "seed": seed,
            "maxdeg": cmd.maxdeg,
            "resolution": {"rings": cmd.rings, "angular": cmd.res_angular},
            "mass_count": cmd.mass_count,
        },
        "results": {
            "lemma_suite": lemma,
            "exceptional_mass": mass,
        },
        "timings": {"total_seconds": started.elapsed().as_secs_f64()},
    });
    emit_json(doc, &cmd.output)
}

fn parse_spaces(text: &str) -> Result<Vec<SpaceSpec>, Error> {
    let mut specs = Vec::new();
    for token in text.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        let mut parts = token.split(':');
        let name = parts.next().unwrap_or_default();
        let p: Option<f64> = parts
            .next()
            .map(|s| {
                s.parse().map_err(|_| {
                    Error::config("spaces", format!("bad exponent in \"{token}\""))
                })
            })
            .transpose()?;
        let gamma: Option<f64> = parts
            .next()
            .map(|s| {
                s.parse()
                    .map_err(|_| Error::config("spaces", format!("bad weight in \"{token}\"")))
            })
            .transpose()?;
        let spec = match name {
            "hardy" => SpaceSpec::hardy(p.unwrap_or(2.0)),
            "hardy-classical" => SpaceSpec::hardy_classical(p.unwrap_or(2.0)),
            "bmoa" => SpaceSpec::bmoa(),
            "qp" => SpaceSpec::qp(p.unwrap_or(1.0)),
            "besov" => SpaceSpec::besov(p.unwrap_or(2.0)),
            "bergman" => SpaceSpec::bergman(p.unwrap_or(2.0), gamma.unwrap_or(0.0)),
            other => {
                return Err(Error::config(
                    "spaces",
                    format!("unknown space \"{other}\" in \"{token}\""),
                ))
            }
        };
        spec.validate()?;
        specs.push(spec);
    }
    if specs.is_empty() {
        return Err(Error::config("spaces", "no spaces given"));
    }
    Ok(specs)
}

fn xval_params(density: &DensityArgs, c_grid: Option<Vec<f64>>) -> CrossValidateParams {
    CrossValidateParams {
        c_grid,
        eta_grid: density.eta_grid.clone(),
        delta_min: density.delta_min,
        net: NetParams {
            separation: density.separation,
            r_limit: density.r_limit,
        },
        resolution: density.resolution(),
        ..CrossValidateParams::default()
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
        Verdict::Inconclusive => "inconclusive",
    }
}

/// Cross-validation section shared by `cross-validate` and `report`;
/// drops the bulky per-center profile, keeping verdicts and witnesses.
fn xval_section(
    g: &SymbolExpr,
    specs: &[SpaceSpec],
    params: &CrossValidateParams,
) -> Result<Value, Error> {
    let report = cross_validate(g, specs, params)?;
    let spaces: Vec<Value> = report
        .spaces
        .iter()
        .map(|s| {
            json!({
                "space": s.space.label(),
                "inf_ratio": s.inf_ratio,
                "refined_inf": s.refined_inf,
                "bounded_below": s.bounded_below,
                "agrees": s.agrees,
                "witness": s.witness,
            })
        })
        .collect();
    Ok(json!({
        "density": {
            "verdict": verdict_str(report.density.verdict),
            "best_c": report.density.best_c,
            "best_eta": report.density.best_eta,
            "achieved_delta": report.density.achieved_delta,
            "worst_center": to_value(&report.density.worst_center),
            "profile_size": report.density.profile.len(),
        },
        "spaces": spaces,
        "all_agree": report.all_agree,
    }))
}

fn run_cross_validate(cmd: CrossValidateCmd) -> Result<(), Error> {
    if cmd.output.format == OutputFormat::Csv {
        return Err(Error::config(
            "format",
            "cross-validate reports are JSON only",
        ));
    }
    let started = Instant::now();
    let g = load_symbol(&cmd.g)?;
    let specs = parse_spaces(&cmd.spaces)?;
    let params = xval_params(&cmd.density, cmd.density.c_grid.clone());
    let c_echo = cmd
        .density
        .c_grid
        .clone()
        .unwrap_or_else(|| disklab::criteria::default_c_grid_for(&g));
    let section = xval_section(&g, &specs, &params)?;
    let doc = json!({
        "schema": 1,
        "subcommand": "cross-validate",
        "config": {
            "symbol": symbol_to_json(&g),
            "spaces": cmd.spaces,
            "density": cmd.density.echo(&c_echo),
            "params": to_value(&params),
        },
        "results": section,
        "timings": {"total_seconds": started.elapsed().as_secs_f64()},
    });
    emit_json(doc, &cmd.output)
}

fn run_report(cmd: ReportCmd) -> Result<(), Error> {
    if cmd.output.format == OutputFormat::Csv {
        return Err(Error::config("format", "bundled reports are JSON only"));
    }
    let started = Instant::now();
    let g = load_symbol(&cmd.g)?;
    let seed = cmd
        .seed
        .ok_or_else(|| Error::config("seed", "--seed is required (randomized sections)"))?;
    let specs = parse_spaces(&cmd.spaces)?;

    let sup = sup_norm_estimate(&g, 4096);
    let params = xval_params(&cmd.density, cmd.density.c_grid.clone());
    let c_echo = cmd
        .density
        .c_grid
        .clone()
        .unwrap_or_else(|| disklab::criteria::default_c_grid_for(&g));
    let xval = xval_section(&g, &specs, &params)?;
    let lemma = lemma_suite(
        cmd.lemma_count,
        6,
        seed,
        SubdiskResolution {
            rings: 24,
            angular: 151,
        },
    )?;

    let doc = json!({
        "schema": 1,
        "subcommand": "report",
        "config": {
            "symbol": symbol_to_json(&g),
            "spaces": cmd.spaces,
            "seed": seed,
            "lemma_count": cmd.lemma_count,
            "density": cmd.density.echo(&c_echo),
            "params": to_value(&params),
        },
        "results": {
            "sup_norm": to_value(&sup),
            "cross_validation": xval,
            "lemma_suite": lemma,
        },
        "timings": {"total_seconds": started.elapsed().as_secs_f64()},
    });
    emit_json(doc, &cmd.output)
}
