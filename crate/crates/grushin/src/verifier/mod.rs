//! Numerical verification of the Hardy, Rellich and uncertainty identities.
//!
//! Every check assembles both sides of its identities from quadrature over
//! Cartesian jets of a test field, and reports a residual (identities) or a
//! signed slack (inequalities). Checks are registered by name in a
//! [`Registry`] and expand a [`SuitePlan`] into concrete [`Case`]s.

mod hardy;
mod rellich;
pub mod spectral;
mod spherical;
mod symmetrization;
pub mod terms;
pub mod usp;

use crate::bessel::{self, BesselPair, PairParams};
use crate::error::{Error, Result};
use crate::fields::{catalog, DilatedField, Field};
use crate::quadrature::GridSpec;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

pub use rellich::rellich_constant;
pub use usp::{closed_forms, sharp_constant, usp_family, UspFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inapplicable,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    /// lhs = rhs up to a relative tolerance.
    Identity,
    /// lhs ≥ rhs up to a relative slack floor.
    Inequality,
    /// Residual after one grid refinement: lhs is the coarse residual, rhs the fine one.
    Convergence,
    /// Informational comparison; never affects the verdict.
    Flag,
}

/// One integral with the difference from the half-resolution grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Relation {
    pub label: String,
    pub kind: RelationKind,
    pub lhs: f64,
    pub rhs: f64,
    /// |lhs - rhs| / scale for identities, (lhs - rhs) / scale for inequalities.
    pub residual: f64,
    /// lhs - rhs.
    pub slack: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn rel(a: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        a / scale
    } else {
        a
    }
}

impl Relation {
    pub fn identity(label: impl Into<String>, lhs: f64, rhs: f64, scale: f64, tol: f64) -> Relation {
        let residual = rel((lhs - rhs).abs(), scale);
        Relation {
            label: label.into(),
            kind: RelationKind::Identity,
            lhs,
            rhs,
            residual,
            slack: lhs - rhs,
            scale,
            tolerance: tol,
            passed: residual <= tol,
        }
    }

    pub fn inequality(label: impl Into<String>, lhs: f64, rhs: f64, scale: f64, tol: f64) -> Relation {
        let residual = rel(lhs - rhs, scale);
        Relation {
            label: label.into(),
            kind: RelationKind::Inequality,
            lhs,
            rhs,
            residual,
            slack: lhs - rhs,
            scale,
            tolerance: tol,
            passed: residual >= -tol,
        }
    }

    /// Passes when one refinement shrinks the residual tenfold or it is already below `floor`.
    pub fn convergence(label: impl Into<String>, coarse: f64, fine: f64, floor: f64) -> Relation {
        let ratio = if fine > 0.0 { coarse / fine } else { f64::INFINITY };
        Relation {
            label: label.into(),
            kind: RelationKind::Convergence,
            lhs: coarse,
            rhs: fine,
            residual: ratio,
            slack: coarse - fine,
            scale: 1.0,
            tolerance: floor,
            passed: fine < floor || ratio >= 10.0,
        }
    }

    pub fn flag(label: impl Into<String>, lhs: f64, rhs: f64) -> Relation {
        Relation {
            label: label.into(),
            kind: RelationKind::Flag,
            lhs,
            rhs,
            residual: lhs - rhs,
            slack: lhs - rhs,
            scale: 1.0,
            tolerance: 0.0,
            passed: lhs >= rhs,
        }
    }

    pub fn counts(&self) -> bool {
        self.kind != RelationKind::Flag
    }
}

/// A Bessel pair selection as written in a config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

impl PairSpec {
    pub fn named(family: &str) -> PairSpec {
        PairSpec { family: family.into(), alpha: None, b: None, radius: None }
    }

    pub fn build(&self, q: usize) -> Result<BesselPair> {
        let mut p = PairParams::new(q);
        p.alpha = self.alpha;
        p.b = self.b;
        p.radius = self.radius;
        bessel::catalog(&self.family, &p)
    }

    pub fn label(&self) -> String {
        let mut s = self.family.clone();
        for (k, v) in [("alpha", self.alpha), ("b", self.b), ("R", self.radius)] {
            if let Some(v) = v {
                s.push_str(&format!(",{k}={v}"));
            }
        }
        s
    }
}

/// One concrete parameter combination for a check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub n: usize,
    pub q: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairSpec>,
    /// Extremizer family for the uncertainty checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub extra: BTreeMap<String, f64>,
    pub grid: GridSpec,
}

impl Case {
    pub fn new(n: usize, grid: GridSpec) -> Case {
        Case { n, q: n + 2, field: None, pair: None, family: None, extra: BTreeMap::new(), grid }
    }

    pub fn field(mut self, f: &str) -> Case {
        self.field = Some(f.into());
        self
    }

    pub fn pair(mut self, p: PairSpec) -> Case {
        self.pair = Some(p);
        self
    }

    pub fn family(mut self, f: &str) -> Case {
        self.family = Some(f.into());
        self
    }

    pub fn with(mut self, key: &str, v: f64) -> Case {
        self.extra.insert(key.into(), v);
        self
    }

    pub fn id(&self) -> String {
        let mut s = format!("n={}", self.n);
        if let Some(f) = &self.field {
            s.push_str(&format!(" field={f}"));
        }
        if let Some(p) = &self.pair {
            s.push_str(&format!(" pair={}", p.label()));
        }
        if let Some(f) = &self.family {
            s.push_str(&format!(" family={f}"));
        }
        for (k, v) in &self.extra {
            s.push_str(&format!(" {k}={v}"));
        }
        s
    }

    pub fn get(&self, key: &str) -> Result<f64> {
        self.extra.get(key).copied().ok_or_else(|| Error::InvalidArgument(format!("case is missing parameter {key}")))
    }

    pub fn build_field(&self) -> Result<Field> {
        let f = self.field.as_deref().ok_or_else(|| Error::InvalidArgument("case has no field".into()))?;
        build_field(f, self.n)
    }

    pub fn build_pair(&self) -> Result<BesselPair> {
        self.pair.as_ref().ok_or_else(|| Error::InvalidArgument("case has no pair".into()))?.build(self.q)
    }
}

/// Split `name` or `name@lambda` into the catalog name and the dilation factor.
pub fn parse_field_spec(spec: &str) -> Result<(&str, Option<f64>)> {
    let (name, lambda) = match spec.split_once('@') {
        None => (spec, None),
        Some((name, l)) => {
            let lambda: f64 = l.parse().map_err(|_| Error::InvalidArgument(format!("bad dilation in field {spec}")))?;
            if !(lambda > 0.0 && lambda.is_finite()) {
                return Err(Error::InvalidArgument(format!("dilation must be positive in field {spec}")));
            }
            (name, Some(lambda))
        }
    };
    if !catalog::NAMES.contains(&name) {
        return Err(Error::InvalidArgument(format!("unknown field {name}; known: {}", catalog::NAMES.join(", "))));
    }
    Ok((name, lambda))
}

/// A catalog field, optionally dilated: `name@lambda` is λ^{(Q-2)/2} u∘δ_λ.
pub fn build_field(spec: &str, n: usize) -> Result<Field> {
    let (name, lambda) = parse_field_spec(spec)?;
    let u = catalog::build(name, n)?;
    Ok(match lambda {
        None => u,
        Some(lambda) => Arc::new(DilatedField { inner: u, lambda }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Relative residual for identities.
    pub identity: f64,
    /// Relative slack floor for inequalities.
    pub inequality: f64,
    /// Pointwise relative residual for vector-field identities.
    pub pointwise: f64,
    /// Integral by-parts residual.
    pub by_parts: f64,
    /// Relative L² mass allowed outside the harmonic truncation.
    pub tail: f64,
    /// ODE residual a pair must meet on the field support.
    pub pair_residual: f64,
    /// Residual below which refinement is not required to help.
    pub refinement_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: 1e-6,
            inequality: 1e-8,
            pointwise: 1e-6,
            by_parts: 1e-7,
            tail: 1e-10,
            pair_residual: 1e-9,
            refinement_floor: 1e-10,
        }
    }
}

/// Settings shared by every case of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Context {
    pub tol: Tolerances,
    /// Highest harmonic order in spectral sums.
    pub max_k: usize,
    pub seed: u64,
    pub timestamp: String,
    /// Compare identity residuals with the half-resolution grid.
    pub refine: bool,
}

impl Default for Context {
    fn default() -> Self {
        Context { tol: Tolerances::default(), max_k: 6, seed: 0, timestamp: "1970-01-01T00:00:00Z".into(), refine: true }
    }
}

impl Context {
    /// Refinement floor when refinement relations are enabled.
    pub fn refine_floor(&self) -> Option<f64> {
        self.refine.then_some(self.tol.refinement_floor)
    }
}

/// Symmetrization settings: Q values, number of seeded profiles, outer radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SymmetrizationPlan {
    pub q: Vec<usize>,
    pub profiles: usize,
    pub radius: f64,
    pub max_k: usize,
}

impl Default for SymmetrizationPlan {
    fn default() -> Self {
        SymmetrizationPlan { q: vec![4, 5, 6], profiles: 5, radius: 3.0, max_k: 6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct UspPlan {
    pub n: Vec<usize>,
    pub families: Vec<String>,
    /// CKN exponents used with the `ckn` family.
    pub b: Vec<f64>,
    pub beta: Vec<f64>,
    pub dilations: Vec<f64>,
}

impl Default for UspPlan {
    fn default() -> Self {
        UspPlan {
            n: vec![3],
            families: vec!["heisenberg".into(), "hydrogen".into(), "ckn".into()],
            b: vec![-1.0, 0.0, 0.5, 2.0],
            beta: vec![0.5, 1.0, 2.0],
            dilations: vec![0.5, 2.0],
        }
    }
}

/// Everything a suite run needs, already validated.
#[derive(Debug, Clone, PartialEq)]
pub struct SuitePlan {
    pub dims: Vec<usize>,
    pub checks: Vec<String>,
    pub fields: Vec<String>,
    /// Q-dimensional pairs for the Hardy and Rellich checks.
    pub pairs: Vec<PairSpec>,
    /// (Q+2)-dimensional pairs for the shifted-dimension Rellich check.
    pub shift_pairs: Vec<PairSpec>,
    pub alphas: Vec<f64>,
    /// Also run the weighted Hardy check at α = Q - 2.
    pub alpha_critical: bool,
    pub radii: Vec<f64>,
    pub subspace_j: Vec<i64>,
    pub grid: GridSpec,
    pub symmetrization: SymmetrizationPlan,
    pub usp: UspPlan,
    pub ctx: Context,
    /// Tolerances replacing `ctx.tol` for individual checks.
    pub check_tol: BTreeMap<String, Tolerances>,
    pub jobs: usize,
}

impl Default for SuitePlan {
    fn default() -> Self {
        SuitePlan {
            dims: vec![2, 3],
            checks: Registry::default().names().iter().map(|s| s.to_string()).collect(),
            fields: catalog::NAMES.iter().map(|s| s.to_string()).collect(),
            pairs: vec![PairSpec::named("power-hardy"), PairSpec::named("constant")],
            shift_pairs: vec![PairSpec::named("heisenberg"), PairSpec::named("hydrogen")],
            alphas: vec![0.0, 1.0, 2.0],
            alpha_critical: true,
            radii: vec![2.5],
            subspace_j: vec![-1, 0, 1],
            grid: GridSpec { order: 16, panels: 16, phi_nodes: 32, theta_nodes: 12, polar_nodes: 6 },
            symmetrization: SymmetrizationPlan::default(),
            usp: UspPlan::default(),
            ctx: Context::default(),
            check_tol: BTreeMap::new(),
            jobs: 1,
        }
    }
}

impl SuitePlan {
    /// Field specs that can be built for n.
    pub fn fields_for(&self, n: usize) -> Vec<String> {
        let ok = catalog::names_for(n);
        self.fields
            .iter()
            .filter(|f| parse_field_spec(f).map_or(false, |(name, _)| ok.contains(&name)))
            .cloned()
            .collect()
    }

    pub fn validate(&self, registry: &Registry) -> Result<()> {
        for c in &self.checks {
            registry.get(c)?;
        }
        for &n in self.dims.iter().chain(&self.usp.n) {
            if n < 2 || n > crate::geometry::MAX_N {
                return Err(Error::Config(format!("dimension n = {n} outside 2..={}", crate::geometry::MAX_N)));
            }
        }
        for f in &self.fields {
            parse_field_spec(f).map_err(|e| Error::Config(e.to_string()))?;
        }
        for p in self.pairs.iter().chain(&self.shift_pairs) {
            p.build(5).map_err(|e| Error::Config(format!("pair {}: {e}", p.label())))?;
        }
        for f in &self.usp.families {
            if !usp::FAMILIES.contains(&f.as_str()) {
                return Err(Error::Config(format!("unknown uncertainty family {f}; known: {}", usp::FAMILIES.join(", "))));
            }
        }
        for &q in &self.symmetrization.q {
            if q < 4 {
                return Err(Error::Config(format!("symmetrization needs Q >= 4, got {q}")));
            }
        }
        if !(self.symmetrization.radius > 0.0) {
            return Err(Error::Config("symmetrization radius must be positive".into()));
        }
        if self.usp.beta.iter().chain(&self.usp.dilations).chain(&self.radii).any(|v| !(*v > 0.0)) {
            return Err(Error::Config("beta, dilation and radius values must be positive".into()));
        }
        if self.usp.b.iter().any(|b| *b == 1.0) {
            return Err(Error::Config("b = 1 has no sharp constant".into()));
        }
        for name in self.check_tol.keys() {
            registry.get(name)?;
        }
        for t in std::iter::once(&self.ctx.tol).chain(self.check_tol.values()) {
            for v in [t.identity, t.inequality, t.pointwise, t.by_parts, t.tail, t.pair_residual, t.refinement_floor] {
                if !(v > 0.0) {
                    return Err(Error::Config("tolerances must be positive".into()));
                }
            }
        }
        self.grid.validate().map_err(|e| Error::Config(e.to_string()))
    }
}

/// The measured content of a case before a verdict is assigned.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub terms: Vec<Term>,
    pub relations: Vec<Relation>,
    pub diagnostics: Vec<String>,
    /// Set when the measurement cannot decide, such as a spectral tail over budget.
    pub inconclusive: bool,
}

impl Outcome {
    pub fn push(&mut self, r: Relation) {
        self.relations.push(r);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.diagnostics.push(s.into());
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub case: String,
    pub params: Case,
    pub terms: Vec<Term>,
    pub relations: Vec<Relation>,
    pub verdict: Verdict,
    pub diagnostics: Vec<String>,
    pub timestamp: String,
}

impl VerificationReport {
    /// Largest identity residual, or the most negative relative slack, whichever is worse.
    pub fn worst(&self) -> Option<f64> {
        self.relations
            .iter()
            .filter(|r| matches!(r.kind, RelationKind::Identity | RelationKind::Inequality))
            .map(|r| if r.kind == RelationKind::Identity { r.residual } else { (-r.residual).max(0.0) })
            .fold(None, |a: Option<f64>, v| Some(a.map_or(v, |a| a.max(v))))
    }
}

/// A named verification strategy.
pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn cases(&self, plan: &SuitePlan) -> Result<Vec<Case>>;
    fn run(&self, case: &Case, ctx: &Context) -> Result<Outcome>;
}

pub struct Registry {
    checks: BTreeMap<&'static str, Box<dyn Check>>,
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Registry { checks: BTreeMap::new() };
        r.register(Box::new(hardy::HardyIdentity));
        r.register(Box::new(hardy::SubspaceHardy));
        r.register(Box::new(hardy::WeightedHardy));
        r.register(Box::new(hardy::BvHardy));
        r.register(Box::new(rellich::RadialRellich));
        r.register(Box::new(rellich::NonradialRellich));
        r.register(Box::new(rellich::HardyRellichCor));
        r.register(Box::new(rellich::DimShiftRellich));
        r.register(Box::new(spherical::SphericalRellich));
        r.register(Box::new(spherical::ProjectionDeficit));
        r.register(Box::new(spherical::VectorFieldIdentities));
        r.register(Box::new(symmetrization::SymmetrizationTerms));
        r.register(Box::new(usp::UncertaintyCheck));
        r
    }
}

impl Registry {
    pub fn register(&mut self, check: Box<dyn Check>) {
        self.checks.insert(check.name(), check);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.checks.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn Check> {
        self.checks
            .get(name)
            .map(|c| c.as_ref())
            .ok_or_else(|| Error::Config(format!("unknown check {name}; known: {}", self.names().join(", "))))
    }

    pub fn describe(&self) -> Vec<(&'static str, &'static str)> {
        self.checks.values().map(|c| (c.name(), c.description())).collect()
    }
}

/// Run one case and assign its verdict.
pub fn evaluate(check: &dyn Check, case: &Case, ctx: &Context) -> VerificationReport {
    let mut report = VerificationReport {
        check: check.name().into(),
        case: case.id(),
        params: case.clone(),
        terms: Vec::new(),
        relations: Vec::new(),
        verdict: Verdict::Pass,
        diagnostics: Vec::new(),
        timestamp: ctx.timestamp.clone(),
    };
    match check.run(case, ctx) {
        Ok(out) => {
            report.verdict = if out.relations.iter().any(|r| r.counts() && !r.passed) {
                Verdict::Fail
            } else if out.inconclusive {
                Verdict::Inconclusive
            } else {
                Verdict::Pass
            };
            report.terms = out.terms;
            report.relations = out.relations;
            report.diagnostics = out.diagnostics;
        }
        Err(e) => {
            report.verdict = if e.is_inapplicable() {
                Verdict::Inapplicable
            } else if matches!(e, Error::Convergence(_)) {
                Verdict::Inconclusive
            } else {
                Verdict::Fail
            };
            report.diagnostics.push(e.to_string());
        }
    }
    report
}

/// Expand every enabled check into cases, run them, and return reports
/// ordered by check name then case order.
pub fn run_suite(plan: &SuitePlan, registry: &Registry) -> Result<Vec<VerificationReport>> {
    plan.validate(registry)?;
    let mut names: Vec<&str> = plan.checks.iter().map(|s| s.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    let mut contexts = BTreeMap::new();
    for name in &names {
        let mut ctx = plan.ctx.clone();
        if let Some(t) = plan.check_tol.get(*name) {
            ctx.tol = *t;
        }
        contexts.insert(*name, ctx);
    }
    let mut jobs = Vec::new();
    for name in names {
        let check = registry.get(name)?;
        for case in check.cases(plan)? {
            jobs.push((check, case, &contexts[name]));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(|| jobs.par_iter().map(|(c, case, ctx)| evaluate(*c, case, ctx)).collect()))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub inapplicable: usize,
    pub inconclusive: usize,
}

pub fn tally(reports: &[VerificationReport]) -> Tally {
    let mut t = Tally::default();
    for r in reports {
        match r.verdict {
            Verdict::Pass => t.pass += 1,
            Verdict::Fail => t.fail += 1,
            Verdict::Inapplicable => t.inapplicable += 1,
            Verdict::Inconclusive => t.inconclusive += 1,
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_verdicts() {
        assert!(Relation::identity("a", 1.0, 1.0 + 1e-8, 1.0, 1e-6).passed);
        assert!(!Relation::identity("a", 1.0, 1.1, 1.0, 1e-6).passed);
        assert!(Relation::inequality("b", 1.0, 1.0 + 1e-10, 1.0, 1e-8).passed);
        assert!(!Relation::inequality("b", 1.0, 1.1, 1.0, 1e-8).passed);
        assert!(Relation::convergence("c", 1e-5, 1e-7, 1e-10).passed);
        assert!(Relation::convergence("c", 1e-12, 1e-12, 1e-10).passed);
        assert!(!Relation::convergence("c", 1e-6, 5e-7, 1e-10).passed);
        assert!(!Relation::flag("d", 1.0, 2.0).counts());
    }

    #[test]
    fn case_ids_are_stable() {
        let c = Case::new(2, GridSpec::default()).field("bump-k1").pair(PairSpec::named("power-hardy")).with("j", 1.0);
        assert_eq!(c.id(), "n=2 field=bump-k1 pair=power-hardy j=1");
        assert_eq!(c.q, 4);
    }

    #[test]
    fn dilated_field_specs() {
        assert!(build_field("bump-radial@2", 2).is_ok());
        assert!(build_field("bump-radial@-1", 2).is_err());
        assert!(build_field("bump-radial@x", 2).is_err());
    }

    #[test]
    fn registry_lists_all_checks() {
        let r = Registry::default();
        assert_eq!(r.names().len(), 13);
        assert!(r.get("nope").is_err());
    }

    #[test]
    fn flagged_relations_do_not_fail_reports() {
        struct Flagging;
        impl Check for Flagging {
            fn name(&self) -> &'static str {
                "flagging"
            }
            fn description(&self) -> &'static str {
                "test"
            }
            fn cases(&self, _: &SuitePlan) -> Result<Vec<Case>> {
                Ok(vec![])
            }
            fn run(&self, _: &Case, _: &Context) -> Result<Outcome> {
                let mut o = Outcome::default();
                o.push(Relation::flag("claim", 1.0, 2.0));
                o.push(Relation::identity("x", 1.0, 1.0, 1.0, 1e-6));
                Ok(o)
            }
        }
        let r = evaluate(&Flagging, &Case::new(2, GridSpec::default()), &Context::default());
        assert_eq!(r.verdict, Verdict::Pass);
    }
}
