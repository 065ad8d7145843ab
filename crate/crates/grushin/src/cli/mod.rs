//! Command-line front end: suite configuration, report emission, and the
//! constant and spectrum tables.
//!
//! Every command returns an exit code: 0 when everything checked out, 1 when
//! some relation failed, 2 for configuration, argument, I/O or convergence
//! errors.

use crate::error::{Error, Result};
use crate::fields::ops::lap_g;
use crate::geometry::{gauge_jet, sample_points};
use crate::harmonics::{self, eigenvalue};
use crate::jet::Order;
use crate::quadrature::{GridSpec, QuadratureGrid, RadialRange, SphereMode};
use crate::verifier::{
    self, usp, PairSpec, Registry, SuitePlan, SymmetrizationPlan, Tolerances, UspPlan, Verdict, VerificationReport,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// The shipped configuration.
pub const DEFAULT_CONFIG: &str = include_str!("../../configs/default.toml");

/// Relative deviation allowed between a measured and a sharp constant.
pub const CONSTANT_TOL: f64 = 1e-6;
/// Annihilation residual allowed for 𝓛(ρ^k g).
pub const ANNIHILATION_TOL: f64 = 1e-8;
/// Largest entry of G - I allowed for the harmonic Gram matrix.
pub const GRAM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::InvalidArgument(format!("unknown format {s}; known: json, csv, text"))),
        }
    }
}

/// Partial tolerances for one check, applied over the global ones.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverride {
    pub identity: Option<f64>,
    pub inequality: Option<f64>,
    pub pointwise: Option<f64>,
    pub by_parts: Option<f64>,
    pub tail: Option<f64>,
    pub pair_residual: Option<f64>,
    pub refinement_floor: Option<f64>,
}

impl ToleranceOverride {
    pub fn apply(&self, base: Tolerances) -> Tolerances {
        Tolerances {
            identity: self.identity.unwrap_or(base.identity),
            inequality: self.inequality.unwrap_or(base.inequality),
            pointwise: self.pointwise.unwrap_or(base.pointwise),
            by_parts: self.by_parts.unwrap_or(base.by_parts),
            tail: self.tail.unwrap_or(base.tail),
            pair_residual: self.pair_residual.unwrap_or(base.pair_residual),
            refinement_floor: self.refinement_floor.unwrap_or(base.refinement_floor),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WeightedConfig {
    pub alphas: Vec<f64>,
    /// Add α = Q - 2 for each dimension.
    pub critical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundedConfig {
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectralConfig {
    pub max_k: usize,
    pub subspace_j: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Format,
    /// Stamped on every record; fixed so reports are reproducible.
    pub timestamp: String,
}

/// The suite configuration file. Every key is optional; unknown keys are errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteConfig {
    pub seed: u64,
    pub jobs: usize,
    pub dims: Vec<usize>,
    /// Check names, or "all".
    pub checks: Vec<String>,
    /// Field specs (`name` or `name@λ`), or "all".
    pub fields: Vec<String>,
    pub pairs: Vec<PairSpec>,
    pub shift_pairs: Vec<PairSpec>,
    pub grid: GridSpec,
    /// Also report each identity's residual on the half-resolution grid.
    pub refine: bool,
    pub spectral: SpectralConfig,
    pub weighted: WeightedConfig,
    pub bounded: BoundedConfig,
    pub tolerances: Tolerances,
    pub check_tolerances: BTreeMap<String, ToleranceOverride>,
    pub symmetrization: SymmetrizationPlan,
    pub uncertainty: UspPlan,
    pub output: OutputConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let p = SuitePlan::default();
        SuiteConfig {
            seed: p.ctx.seed,
            jobs: p.jobs,
            dims: p.dims,
            checks: vec!["all".into()],
            fields: vec!["all".into()],
            pairs: p.pairs,
            shift_pairs: p.shift_pairs,
            grid: p.grid,
            refine: p.ctx.refine,
            spectral: SpectralConfig { max_k: p.ctx.max_k, subspace_j: p.subspace_j },
            weighted: WeightedConfig { alphas: p.alphas, critical: p.alpha_critical },
            bounded: BoundedConfig { radii: p.radii },
            tolerances: p.ctx.tol,
            check_tolerances: BTreeMap::new(),
            symmetrization: p.symmetrization,
            uncertainty: p.usp,
            output: OutputConfig { path: None, format: Format::Json, timestamp: p.ctx.timestamp },
        }
    }
}

impl Default for WeightedConfig {
    fn default() -> Self {
        let p = SuitePlan::default();
        WeightedConfig { alphas: p.alphas, critical: p.alpha_critical }
    }
}

impl Default for BoundedConfig {
    fn default() -> Self {
        BoundedConfig { radii: SuitePlan::default().radii }
    }
}

impl Default for SpectralConfig {
    fn default() -> Self {
        let p = SuitePlan::default();
        SpectralConfig { max_k: p.ctx.max_k, subspace_j: p.subspace_j }
    }
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { path: None, format: Format::Json, timestamp: SuitePlan::default().ctx.timestamp }
    }
}

impl SuiteConfig {
    pub fn parse(text: &str) -> Result<SuiteConfig> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<SuiteConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        SuiteConfig::parse(&text)
    }

    /// Resolve names and build a validated plan.
    pub fn plan(&self, registry: &Registry) -> Result<SuitePlan> {
        let all = |v: &[String]| v.iter().any(|s| s == "all");
        let checks = if all(&self.checks) { registry.names().iter().map(|s| s.to_string()).collect() } else { self.checks.clone() };
        let fields =
            if all(&self.fields) { crate::fields::catalog::NAMES.iter().map(|s| s.to_string()).collect() } else { self.fields.clone() };
        let mut plan = SuitePlan {
            dims: self.dims.clone(),
            checks,
            fields,
            pairs: self.pairs.clone(),
            shift_pairs: self.shift_pairs.clone(),
            alphas: self.weighted.alphas.clone(),
            alpha_critical: self.weighted.critical,
            radii: self.bounded.radii.clone(),
            subspace_j: self.spectral.subspace_j.clone(),
            grid: self.grid,
            symmetrization: self.symmetrization.clone(),
            usp: self.uncertainty.clone(),
            ctx: Default::default(),
            check_tol: self.check_tolerances.iter().map(|(k, o)| (k.clone(), o.apply(self.tolerances))).collect(),
            jobs: self.jobs.max(1),
        };
        plan.ctx.tol = self.tolerances;
        plan.ctx.max_k = self.spectral.max_k;
        plan.ctx.seed = self.seed;
        plan.ctx.timestamp = self.output.timestamp.clone();
        plan.ctx.refine = self.refine;
        plan.validate(registry)?;
        Ok(plan)
    }
}

/// 0 with no failures, 1 with any failed case, 2 when a case could not converge.
pub fn exit_code(reports: &[VerificationReport]) -> i32 {
    if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        EXIT_FAIL
    } else if reports.iter().any(|r| r.verdict == Verdict::Inconclusive) {
        EXIT_ERROR
    } else {
        EXIT_OK
    }
}

pub fn render_jsonl(reports: &[VerificationReport]) -> Result<String> {
    let mut s = String::new();
    for r in reports {
        s.push_str(&serde_json::to_string(r).map_err(|e| Error::Io(e.to_string()))?);
        s.push('\n');
    }
    Ok(s)
}

/// One CSV row per relation; cases without relations get one row with the relation columns empty.
pub fn render_csv(reports: &[VerificationReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["check", "case", "verdict", "relation", "kind", "lhs", "rhs", "residual", "slack", "scale", "tolerance", "passed"])
        .map_err(io)?;
    for r in reports {
        let verdict = verdict_name(r.verdict);
        if r.relations.is_empty() {
            w.write_record([r.check.as_str(), &r.case, verdict, "", "", "", "", "", "", "", "", ""]).map_err(io)?;
        }
        for x in &r.relations {
            let kind = serde_json::to_value(x.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            w.write_record([
                r.check.clone(),
                r.case.clone(),
                verdict.into(),
                x.label.clone(),
                kind,
                x.lhs.to_string(),
                x.rhs.to_string(),
                x.residual.to_string(),
                x.slack.to_string(),
                x.scale.to_string(),
                x.tolerance.to_string(),
                x.passed.to_string(),
            ])
            .map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inapplicable => "inapplicable",
        Verdict::Inconclusive => "inconclusive",
    }
}

/// Per-check verdict counts and worst residual, then every failing relation.
pub fn render_summary(reports: &[VerificationReport]) -> String {
    let mut by_check: BTreeMap<&str, Vec<&VerificationReport>> = BTreeMap::new();
    for r in reports {
        by_check.entry(r.check.as_str()).or_default().push(r);
    }
    let mut s = String::new();
    let _ = writeln!(s, "{:<24} {:>5} {:>5} {:>7} {:>7} {:>12}", "check", "pass", "fail", "n/a", "inconc", "worst");
    for (check, rs) in &by_check {
        let t = verifier::tally(&rs.iter().map(|r| (*r).clone()).collect::<Vec<_>>());
        let worst = rs.iter().filter_map(|r| r.worst()).fold(None, |a: Option<f64>, v| Some(a.map_or(v, |a| a.max(v))));
        let worst = worst.map_or("-".to_string(), |w| format!("{w:.3e}"));
        let _ = writeln!(s, "{:<24} {:>5} {:>5} {:>7} {:>7} {:>12}", check, t.pass, t.fail, t.inapplicable, t.inconclusive, worst);
    }
    let t = verifier::tally(reports);
    let _ = writeln!(s, "{:<24} {:>5} {:>5} {:>7} {:>7}", "total", t.pass, t.fail, t.inapplicable, t.inconclusive);
    for r in reports.iter().filter(|r| matches!(r.verdict, Verdict::Fail | Verdict::Inconclusive)) {
        let _ = writeln!(s, "\n{} [{}] {}", r.check, verdict_name(r.verdict), r.case);
        for x in r.relations.iter().filter(|x| x.counts() && !x.passed) {
            let _ = writeln!(s, "  {}: residual {:.3e}, tolerance {:.1e}", x.label, x.residual, x.tolerance);
        }
        for d in &r.diagnostics {
            let _ = writeln!(s, "  {d}");
        }
    }
    s
}

fn render(reports: &[VerificationReport], format: Format) -> Result<String> {
    match format {
        Format::Json => render_jsonl(reports),
        Format::Csv => render_csv(reports),
        Format::Text => Ok(render_summary(reports)),
    }
}

fn write_out(path: Option<&Path>, body: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => stdout.write_all(body.as_bytes()).map_err(|e| Error::Io(e.to_string())),
    }
}

fn fail(stderr: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(stderr, "error: {e}");
    EXIT_ERROR
}

#[derive(Debug, Clone, Default)]
pub struct VerifyArgs {
    /// Config file; the shipped default when absent.
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
}

/// Load the config a command should use, with command-line overrides applied.
pub fn load_config(path: Option<&Path>, seed: Option<u64>, jobs: Option<usize>) -> Result<SuiteConfig> {
    let mut cfg = match path {
        Some(p) => SuiteConfig::load(p)?,
        None => SuiteConfig::parse(DEFAULT_CONFIG)?,
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(j) = jobs {
        cfg.jobs = j;
    }
    Ok(cfg)
}

/// Run the suite. Records go to `--out` (or the config's output path) in the
/// chosen format, and the summary table to stdout; without an output file the
/// records themselves go to stdout.
pub fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let registry = Registry::default();
    let run = || -> Result<(Vec<VerificationReport>, SuiteConfig)> {
        let cfg = load_config(args.config.as_deref(), args.seed, args.jobs)?;
        let plan = cfg.plan(&registry)?;
        Ok((verifier::run_suite(&plan, &registry)?, cfg))
    };
    let (reports, cfg) = match run() {
        Ok(x) => x,
        Err(e) => return fail(stderr, &e),
    };
    let format = args.format.unwrap_or(cfg.output.format);
    let out = args.out.clone().or(cfg.output.path.clone());
    let body = match render(&reports, format) {
        Ok(b) => b,
        Err(e) => return fail(stderr, &e),
    };
    if let Err(e) = write_out(out.as_deref(), &body, stdout) {
        return fail(stderr, &e);
    }
    if out.is_some() && format != Format::Text {
        let _ = stdout.write_all(render_summary(&reports).as_bytes());
    }
    exit_code(&reports)
}

#[derive(Debug, Clone, Default)]
pub struct ReportArgs {
    /// A JSON-lines report written by `verify`.
    pub input: PathBuf,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Re-render a saved report; the exit code follows its verdicts.
pub fn cmd_report(args: &ReportArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let mut run = || -> Result<(Vec<VerificationReport>, String)> {
        let text = std::fs::read_to_string(&args.input).map_err(|e| Error::Io(format!("{}: {e}", args.input.display())))?;
        let reports = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::Config(format!("{} line {}: {e}", args.input.display(), i + 1))))
            .collect::<Result<Vec<VerificationReport>>>()?;
        let body = render(&reports, args.format.unwrap_or(Format::Text))?;
        write_out(args.out.as_deref(), &body, stdout)?;
        Ok((reports, body))
    };
    match run() {
        Ok((reports, _)) => exit_code(&reports),
        Err(e) => fail(stderr, &e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantRow {
    pub family: String,
    pub b: f64,
    pub beta: f64,
    pub quotient: f64,
    pub sharp: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, Default)]
pub struct ConstantsArgs {
    pub n: usize,
    pub family: String,
    /// Exponents for the `ckn` family; ignored by the others.
    pub b: Vec<f64>,
    pub beta: Vec<f64>,
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Measured quotient √(AB)/C of each extremizer against its sharp constant.
pub fn constant_rows(args: &ConstantsArgs, grid: GridSpec) -> Result<Vec<ConstantRow>> {
    if args.n < 3 {
        return Err(Error::InvalidArgument(format!("uncertainty constants need Q >= 5, got n = {}", args.n)));
    }
    if args.beta.is_empty() || args.beta.iter().any(|b| !(*b > 0.0)) {
        return Err(Error::InvalidArgument("beta values must be positive".into()));
    }
    let bs: Vec<Option<f64>> = if args.family == "ckn" {
        if args.b.is_empty() {
            return Err(Error::InvalidArgument("family ckn needs at least one b".into()));
        }
        args.b.iter().map(|b| Some(*b)).collect()
    } else {
        vec![None]
    };
    let q = args.n + 2;
    let mut rows = Vec::new();
    for b in bs {
        let fam = usp::usp_family(&args.family, b)?;
        let sharp = usp::sharp_constant(q, fam.b())?;
        for &beta in &args.beta {
            let quotient = usp::quotient(usp::measure(args.n, fam.as_ref(), beta, grid, None)?);
            rows.push(ConstantRow { family: fam.name().into(), b: fam.b(), beta, quotient, sharp, deviation: (quotient - sharp).abs() / sharp });
        }
    }
    Ok(rows)
}

fn render_rows<T: Serialize>(rows: &[T], format: Format, text: impl Fn(&T) -> String, header: &str) -> Result<String> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).map_err(|e| Error::Io(e.to_string()))
        }
        Format::Json => {
            let mut s = String::new();
            for r in rows {
                s.push_str(&serde_json::to_string(r).map_err(|e| Error::Io(e.to_string()))?);
                s.push('\n');
            }
            Ok(s)
        }
        Format::Text => {
            let mut s = format!("{header}\n");
            for r in rows {
                s.push_str(&text(r));
                s.push('\n');
            }
            Ok(s)
        }
    }
}

/// Constant table, CSV by default. Exit 1 if any deviation exceeds [`CONSTANT_TOL`].
pub fn cmd_constants(args: &ConstantsArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let mut run = || -> Result<Vec<ConstantRow>> {
        let cfg = load_config(args.config.as_deref(), None, None)?;
        let rows = constant_rows(args, cfg.grid)?;
        let body = render_rows(
            &rows,
            args.format.unwrap_or(Format::Csv),
            |r| format!("{:<11} {:>6} {:>6} {:>18.12} {:>8} {:>10.3e}", r.family, r.b, r.beta, r.quotient, r.sharp, r.deviation),
            &format!("{:<11} {:>6} {:>6} {:>18} {:>8} {:>10}", "family", "b", "beta", "quotient", "sharp", "deviation"),
        )?;
        write_out(args.out.as_deref(), &body, stdout)?;
        Ok(rows)
    };
    match run() {
        Ok(rows) if rows.iter().all(|r| r.deviation < CONSTANT_TOL) => EXIT_OK,
        Ok(_) => EXIT_FAIL,
        Err(e) => fail(stderr, &e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub k: usize,
    pub l: usize,
    pub j: usize,
    pub lambda: f64,
    /// max |𝓛(ρ^k g)| ρ^{2-k} over the sample points; 𝓛(ρ^k g) is homogeneous of degree k - 2.
    pub residual: f64,
    /// max_b |G_ab - δ_ab| for this harmonic's row of the Gram matrix.
    pub gram_deviation: f64,
}

#[derive(Debug, Clone, Default)]
pub struct SpectrumArgs {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Eigenvalue, annihilation residual and Gram deviation of every harmonic up to order `k`.
pub fn spectrum_rows(n: usize, max_k: usize, seed: u64) -> Result<Vec<SpectrumRow>> {
    if !(2..=3).contains(&n) {
        return Err(Error::InvalidArgument(format!("spectrum tables need n in {{2, 3}}, got {n}")));
    }
    let hs = harmonics::catalog(n, max_k)?;
    let spec = GridSpec { order: 4, panels: 1, phi_nodes: 128, theta_nodes: 4 * max_k + 8, polar_nodes: 2 * max_k + 4 };
    let grid = QuadratureGrid::new(n, spec, RadialRange::new(0.5, 1.0)?, SphereMode::Full)?;
    let gram = harmonics::gram_matrix(&hs, &grid);
    let points = sample_points(n, 100, 0.3, 2.0, seed);
    let mut rows = Vec::new();
    for (a, h) in hs.iter().enumerate() {
        let mut residual: f64 = 0.0;
        for p in &points {
            let rho = gauge_jet(p)?;
            let u = h.jet(p, Order::Hessian)? * rho.powi(h.k as i32);
            residual = residual.max(lap_g(&u, p)?.abs() * rho.v.powi(2 - h.k as i32));
        }
        let gram_deviation = gram[a].iter().enumerate().map(|(b, g)| (g - if a == b { 1.0 } else { 0.0 }).abs()).fold(0.0, f64::max);
        rows.push(SpectrumRow { k: h.k, l: h.l, j: h.j, lambda: eigenvalue(h.k, n), residual, gram_deviation });
    }
    Ok(rows)
}

/// Spectrum table, text by default. Exit 1 if any residual is out of tolerance.
pub fn cmd_spectrum(args: &SpectrumArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let mut run = || -> Result<Vec<SpectrumRow>> {
        let rows = spectrum_rows(args.n, args.k, args.seed)?;
        let body = render_rows(
            &rows,
            args.format.unwrap_or(Format::Text),
            |r| format!("{:>3} {:>3} {:>3} {:>10} {:>12.3e} {:>12.3e}", r.k, r.l, r.j, r.lambda, r.residual, r.gram_deviation),
            &format!("{:>3} {:>3} {:>3} {:>10} {:>12} {:>12}", "k", "l", "j", "lambda", "residual", "gram_dev"),
        )?;
        write_out(args.out.as_deref(), &body, stdout)?;
        Ok(rows)
    };
    match run() {
        Ok(rows) if rows.iter().all(|r| r.residual < ANNIHILATION_TOL && r.gram_deviation < GRAM_TOL) => EXIT_OK,
        Ok(_) => EXIT_FAIL,
        Err(e) => fail(stderr, &e),
    }
}

/// Check names with their descriptions.
pub fn list_checks() -> String {
    Registry::default().describe().iter().map(|(n, d)| format!("{n:<24} {d}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_config_parses_and_validates() {
        let cfg = SuiteConfig::parse(DEFAULT_CONFIG).unwrap();
        let plan = cfg.plan(&Registry::default()).unwrap();
        assert_eq!(plan.checks.len(), Registry::default().names().len());
        assert_eq!(plan.ctx.seed, 0);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(SuiteConfig::parse("dims = [2]\ncolour = 1\n"), Err(Error::Config(_))));
        assert!(matches!(SuiteConfig::parse("[grid]\npanel = 3\n"), Err(Error::Config(_))));
        assert!(matches!(SuiteConfig::parse("[check_tolerances.hardy_identity]\nidentiti = 1e-3\n"), Err(Error::Config(_))));
    }

    #[test]
    fn unknown_names_fail_validation() {
        let r = Registry::default();
        let bad_check = SuiteConfig::parse("checks = [\"hardy\"]").unwrap();
        assert!(matches!(bad_check.plan(&r), Err(Error::Config(_))));
        let bad_field = SuiteConfig::parse("fields = [\"bump-k9\"]").unwrap();
        assert!(bad_field.plan(&r).is_err());
        let bad_tol = SuiteConfig::parse("[tolerances]\nidentity = 0.0").unwrap();
        assert!(bad_tol.plan(&r).is_err());
        let bad_override = SuiteConfig::parse("[check_tolerances.nope]\nidentity = 1e-3").unwrap();
        assert!(bad_override.plan(&r).is_err());
    }

    #[test]
    fn overrides_replace_only_named_tolerances() {
        let cfg = SuiteConfig::parse("[tolerances]\ninequality = 1e-9\n[check_tolerances.uncertainty]\nidentity = 1e-4\n").unwrap();
        let plan = cfg.plan(&Registry::default()).unwrap();
        let t = plan.check_tol["uncertainty"];
        assert_eq!(t.identity, 1e-4);
        assert_eq!(t.inequality, 1e-9);
        assert_eq!(plan.ctx.tol.identity, 1e-6);
    }

    #[test]
    fn formats_parse() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert!("xml".parse::<Format>().is_err());
    }

    #[test]
    fn spectrum_rejects_large_n() {
        assert!(spectrum_rows(4, 2, 0).is_err());
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(cmd_spectrum(&SpectrumArgs { n: 5, k: 2, ..Default::default() }, &mut out, &mut err), EXIT_ERROR);
    }

    #[test]
    fn missing_config_exits_2() {
        let args = VerifyArgs { config: Some("/nonexistent/suite.toml".into()), ..Default::default() };
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(cmd_verify(&args, &mut out, &mut err), EXIT_ERROR);
        assert!(String::from_utf8(err).unwrap().contains("config error"));
    }

    #[test]
    fn constants_reject_unknown_family() {
        let args = ConstantsArgs { n: 3, family: "gauss".into(), beta: vec![1.0], ..Default::default() };
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(cmd_constants(&args, &mut out, &mut err), EXIT_ERROR);
    }
}
