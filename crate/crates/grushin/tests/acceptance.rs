//! One line per acceptance criterion. Runs without the test harness so the
//! lines appear in order; exits non-zero if any criterion fails.

use grushin::bessel::{self, j0_first_zero, log_nodes, PairCatalog, PairParams};
use grushin::cli::{self, SuiteConfig, VerifyArgs};
use grushin::geometry::{dilate, from_polar, gauge, psi, sample_points, to_polar, Point};
use grushin::harmonics;
use grushin::verifier::{self, rellich_constant, usp, Registry, RelationKind, Verdict, VerificationReport};
use std::time::{Duration, Instant};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn suite(toml: &str) -> (Vec<VerificationReport>, Duration) {
    let start = Instant::now();
    let registry = Registry::default();
    let plan = SuiteConfig::parse(toml).unwrap().plan(&registry).unwrap();
    (verifier::run_suite(&plan, &registry).unwrap(), start.elapsed())
}

fn relations(reports: &[VerificationReport], kind: RelationKind) -> impl Iterator<Item = &verifier::Relation> {
    reports.iter().flat_map(|r| &r.relations).filter(move |x| x.kind == kind)
}

fn max_identity_residual(reports: &[VerificationReport]) -> f64 {
    relations(reports, RelationKind::Identity).map(|x| x.residual).fold(0.0, f64::max)
}

fn failures(reports: &[VerificationReport]) -> Vec<String> {
    reports
        .iter()
        .filter(|r| matches!(r.verdict, Verdict::Fail | Verdict::Inconclusive))
        .map(|r| format!("{} {} {:?}", r.check, r.case, r.diagnostics))
        .collect()
}

fn count(reports: &[VerificationReport], check: &str, v: Verdict) -> usize {
    reports.iter().filter(|r| r.check == check && r.verdict == v).count()
}

fn geometry() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut psi_range = true;
    for n in [2, 3] {
        for p in sample_points(n, 1000, 0.05, 20.0, 11) {
            let direct = (p.x_norm2().powi(2) + 4.0 * p.t * p.t).powf(0.25);
            let rho = gauge(&p).unwrap();
            worst = worst.max((rho - direct).abs() / direct);
            for lambda in [0.5, 3.0] {
                let q = dilate(&p, lambda).unwrap();
                worst = worst.max((gauge(&q).unwrap() - lambda * rho).abs() / (lambda * rho));
                worst = worst.max((psi(&q).unwrap() - psi(&p).unwrap()).abs());
            }
            let s = psi(&p).unwrap();
            psi_range &= (0.0..=1.0).contains(&s);
            let back: Point = from_polar(&to_polar(&p).unwrap()).unwrap();
            let scale = rho.max(rho * rho);
            for i in 0..n {
                worst = worst.max((back.x()[i] - p.x()[i]).abs() / scale);
            }
            worst = worst.max((back.t - p.t).abs() / scale);
        }
    }
    let t = start.elapsed();
    outcome(worst < 1e-12 && psi_range && t < Duration::from_secs(1), format!("2000 points, worst relative error {worst:.2e}, {t:.2?}"))
}

/// Central-difference estimate D(h) with its O(h²) error removed.
fn richardson(d: impl Fn(f64) -> f64, h: f64) -> f64 {
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

/// 𝓛 = Δ_x + |x|²∂²_t by central differences of point values of ρ^k g.
fn fd_grushin_laplacian(h: &harmonics::GrushinHarmonic, p: &Point) -> (f64, f64) {
    let u = |q: &Point| {
        let pol = to_polar(q).unwrap();
        pol.rho.powi(h.k as i32) * h.value_polar(&pol)
    };
    let n = p.n();
    let c = u(p);
    let mut lap = 0.0;
    let mut scale: f64 = 0.0;
    for i in 0..=n {
        let shift = |s: f64| {
            let mut x = p.x().to_vec();
            let mut t = p.t;
            if i < n {
                x[i] += s;
            } else {
                t += s;
            }
            Point::new(&x, t).unwrap()
        };
        let d2 = richardson(|h| (u(&shift(h)) - 2.0 * c + u(&shift(-h))) / (h * h), 1e-2);
        let w = if i < n { 1.0 } else { p.x_norm2() };
        lap += w * d2;
        scale = scale.max((w * d2).abs());
    }
    (lap, scale)
}

fn spectrum() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let (mut res, mut gram, mut fd): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (n, k) in [(2, 6), (3, 4)] {
        let rows = cli::spectrum_rows(n, k, 0).unwrap();
        for r in &rows {
            res = res.max(r.residual);
            gram = gram.max(r.gram_deviation);
            ok &= r.lambda == (r.k * (r.k + n)) as f64 / 4.0;
        }
        ok &= rows.len() == harmonics::catalog(n, k).unwrap().len();
        for h in harmonics::catalog(n, k).unwrap() {
            for p in sample_points(n, 5, 0.8, 1.5, 3) {
                let (lap, scale) = fd_grushin_laplacian(&h, &p);
                fd = fd.max(lap.abs() / scale.max(1.0));
            }
        }
    }
    let t = start.elapsed();
    ok &= res < 1e-8 && gram < 1e-10 && fd < 1e-6 && t < Duration::from_secs(30);
    outcome(ok, format!("annihilation {res:.2e}, Gram {gram:.2e}, finite-difference oracle {fd:.2e}, λ table exact, {t:.2?}"))
}

fn bessel_catalog() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut fd_worst: f64 = 0.0;
    let mut built = 0;
    let mut ok = true;
    for q in [4, 5, 6] {
        for name in PairCatalog::default().names() {
            let params = PairParams::new(q).alpha(1.5).b(if name == "ckn-super" { 2.0 } else { 0.5 }).radius(2.5);
            let pair = bessel::catalog(name, &params).unwrap();
            let nodes = if pair.radius.is_finite() { log_nodes(1e-2 * pair.radius, 0.99 * pair.radius, 50) } else { log_nodes(1e-2, 10.0, 50) };
            match bessel::ode_residual(&pair, &nodes) {
                Ok(r) => worst = worst.max(r),
                Err(_) => ok = false,
            }
            // Independent oracle: the same ODE with derivatives by central differences.
            for &r in &nodes {
                let f = |x: f64| pair.f.value(x);
                // Step shrinks where f varies on a scale shorter than r.
                let slope = ((f(r * 1.001) / f(r * 0.999)).ln() / 0.002).abs();
                let h = 1e-2 * r.min(pair.radius - r).min(r / slope);
                let v = |x: f64| pair.v.value(x);
                let f1 = richardson(|h| (f(r + h) - f(r - h)) / (2.0 * h), h);
                let f2 = richardson(|h| (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h), h);
                let v1 = richardson(|h| (v(r + h) - v(r - h)) / (2.0 * h), h);
                let terms = [v(r) * f2, (v1 + (pair.dim as f64 - 1.0) * v(r) / r) * f1, pair.w.value(r) * f(r)];
                let scale: f64 = terms.iter().map(|x| x.abs()).sum();
                fd_worst = fd_worst.max(terms.iter().sum::<f64>().abs() / scale);
            }
            built += 1;
        }
    }
    let z0 = format!("{:.4}", j0_first_zero());
    let t = start.elapsed();
    ok &= worst < 1e-9 && fd_worst < 1e-6 && z0 == "2.4048" && t < Duration::from_secs(5);
    outcome(ok, format!("{built} pairs, ODE residual {worst:.2e}, finite-difference oracle {fd_worst:.2e}, z0 = {z0}, {t:.2?}"))
}

const HARDY: &str = r#"
dims = [2, 3]
checks = ["hardy_identity", "weighted_hardy", "bv_hardy"]
fields = ["bump-radial", "gauss-radial", "bump-k1", "bump-k3", "bump-k3-l3", "bump-two-mode"]
[weighted]
alphas = [0.0, 1.0, 2.0]
critical = true
"#;

fn hardy() -> Outcome {
    let (reports, t) = suite(HARDY);
    let passed = reports.iter().filter(|r| r.verdict == Verdict::Pass).count();
    let res = max_identity_residual(&reports);
    let conv = relations(&reports, RelationKind::Convergence).all(|x| x.passed);
    let conv_count = relations(&reports, RelationKind::Convergence).count();
    let critical = reports.iter().any(|r| r.params.extra.get("alpha") == Some(&((r.params.q - 2) as f64)));
    let order3 = reports.iter().any(|r| r.verdict == Verdict::Pass && r.params.field.as_deref() == Some("bump-k3-l3"));
    let fails = failures(&reports);
    let ok = fails.is_empty() && passed >= 12 && res < 1e-6 && conv && critical && order3 && t < Duration::from_secs(300);
    outcome(ok, format!("{passed} cases pass, worst residual {res:.2e}, {conv_count} refinement checks ok={conv}, α=Q-2 covered={critical}, {t:.1?} {fails:?}"))
}

const RELLICH: &str = r#"
dims = [2, 3, 4]
checks = ["radial_rellich", "nonradial_rellich", "hardy_rellich_cor"]
fields = ["bump-radial", "gauss-radial", "bump-k1", "bump-k2-zonal", "bump-two-mode"]
"#;

fn rellich() -> Outcome {
    let (reports, t) = suite(RELLICH);
    let res = max_identity_residual(&reports);
    let slack = relations(&reports, RelationKind::Inequality).map(|x| x.residual).fold(f64::INFINITY, f64::min);
    let radial_q: Vec<usize> = {
        let mut q: Vec<usize> = reports.iter().filter(|r| r.check == "radial_rellich" && r.verdict == Verdict::Pass).map(|r| r.params.q).collect();
        q.sort_unstable();
        q.dedup();
        q
    };
    let constant_ok = rellich_constant(5) == 25.0 / 16.0 && rellich_constant(4) == 0.0 && rellich_constant(6) == 36.0 * 4.0 / 16.0;
    let fails = failures(&reports);
    let counts = ["radial_rellich", "nonradial_rellich", "hardy_rellich_cor"].map(|c| count(&reports, c, Verdict::Pass));
    let ok = fails.is_empty() && res < 1e-6 && slack >= -1e-8 && radial_q == [4, 5, 6] && constant_ok && counts.iter().all(|c| *c > 0);
    outcome(
        ok,
        format!("passes (radial, non-radial, corollary) {counts:?}, radial Q {radial_q:?}, worst residual {res:.2e}, least relative slack {slack:.2e}, Q²(Q-4)²/16 at Q=5 = {}, {t:.1?} {fails:?}", rellich_constant(5)),
    )
}

const SPHERICAL: &str = r#"
dims = [2, 3]
checks = ["spherical_rellich", "vector_field_identities"]
fields = ["bump-k1", "bump-k2", "bump-k3", "bump-two-mode"]
"#;

fn spherical() -> Outcome {
    let (reports, t) = suite(SPHERICAL);
    let five = reports.iter().filter(|r| r.check == "spherical_rellich");
    let five_res = five.flat_map(|r| &r.relations).filter(|x| x.kind == RelationKind::Identity).map(|x| x.residual).fold(0.0, f64::max);
    let vf: Vec<&verifier::Relation> = reports.iter().filter(|r| r.check == "vector_field_identities").flat_map(|r| &r.relations).collect();
    let pointwise = vf.iter().filter(|x| x.label.starts_with("max over 100 points")).map(|x| x.residual).fold(0.0, f64::max);
    let by_parts = vf.iter().filter(|x| x.label.starts_with("∫gL_jf")).map(|x| x.residual).fold(0.0, f64::max);
    let fails = failures(&reports);
    let n_five = count(&reports, "spherical_rellich", Verdict::Pass);
    let ok = fails.is_empty() && n_five > 0 && five_res < 1e-6 && pointwise < 1e-6 && by_parts < 1e-7 && !vf.is_empty();
    outcome(ok, format!("{n_five} five-term cases, residual {five_res:.2e}; pointwise {pointwise:.2e}; by parts {by_parts:.2e}, {t:.1?} {fails:?}"))
}

const PROJECTION: &str = r#"
dims = [2, 3]
checks = ["projection_deficit"]
fields = ["bump-radial", "bump-k1", "bump-k2", "bump-k3-l3", "bump-two-mode"]
"#;

fn projection() -> Outcome {
    let (reports, t) = suite(PROJECTION);
    let res = max_identity_residual(&reports);
    let passed = count(&reports, "projection_deficit", Verdict::Pass);
    let two_mode = reports.iter().any(|r| r.verdict == Verdict::Pass && r.params.field.as_deref() == Some("bump-two-mode"));
    let fails = failures(&reports);
    let ok = fails.is_empty() && passed == reports.len() && two_mode && res < 1e-6;
    outcome(ok, format!("{passed}/{} cases, worst residual {res:.2e}, {t:.1?} {fails:?}", reports.len()))
}

const SYMMETRIZATION: &str = r#"
checks = ["symmetrization_terms"]
[symmetrization]
q = [4, 5, 6]
profiles = 5
radius = 3.0
max_k = 6
"#;

fn symmetrization() -> Outcome {
    let (reports, t) = suite(SYMMETRIZATION);
    let ineq = relations(&reports, RelationKind::Inequality).count();
    let least = relations(&reports, RelationKind::Inequality).map(|x| x.lhs / x.scale).fold(f64::INFINITY, f64::min);
    let gaps: Vec<String> = reports
        .iter()
        .flat_map(|r| r.relations.iter().map(move |x| (r.params.q, x)))
        .filter(|(_, x)| x.kind == RelationKind::Flag && x.label.starts_with("k=2: 4(λ_k - λ_1)"))
        .map(|(q, x)| format!("Q={q}: gap {} vs claimed {} ({})", x.lhs, x.rhs, if x.passed { "holds" } else { "flagged" }))
        .collect();
    let fails = failures(&reports);
    let ok = fails.is_empty() && reports.len() == 3 && ineq == 3 * 5 * 6 * 2 && least >= -1e-10 && gaps.len() == 3;
    outcome(ok, format!("{ineq} inequalities, least relative value {least:.2e}; {}; {t:.2?}", gaps.join("; ")))
}

const UNCERTAINTY: &str = r#"
checks = ["uncertainty"]
[uncertainty]
n = [3]
families = ["heisenberg", "hydrogen", "ckn"]
b = [-1.0, 0.0, 0.5, 2.0]
beta = [0.5, 1.0, 2.0]
dilations = [0.5, 2.0]
"#;

fn uncertainty() -> Outcome {
    let (reports, t) = suite(UNCERTAINTY);
    let res = max_identity_residual(&reports);
    let mut consts = Vec::new();
    let mut ok = true;
    for (fam, b, want) in [("heisenberg", None, 3.5), ("hydrogen", None, 3.0), ("ckn", Some(-1.0), 3.5), ("ckn", Some(0.0), 3.0), ("ckn", Some(0.5), 2.75), ("ckn", Some(2.0), 3.0)] {
        let f = usp::usp_family(fam, b).unwrap();
        let grid = verifier::SuitePlan::default().grid;
        let qs: Vec<f64> = [0.5, 1.0, 2.0].iter().map(|beta| usp::quotient(usp::measure(3, f.as_ref(), *beta, grid, None).unwrap())).collect();
        let dev = qs.iter().map(|q| (q - want).abs() / want).fold(0.0, f64::max);
        ok &= dev < 1e-6 && usp::sharp_constant(5, f.b()).unwrap() == want;
        consts.push(format!("{fam}{}={:.9}", b.map_or(String::new(), |b| format!("(b={b})")), qs[1]));
    }
    let fails = failures(&reports);
    ok &= fails.is_empty() && reports.len() == 18 && res < 1e-6 && t < Duration::from_secs(120);
    outcome(ok, format!("{} cases, worst residual {res:.2e}; {}; {t:.1?} {fails:?}", reports.len(), consts.join(", ")))
}

const SMALL: &str = r#"
dims = [2, 3]
checks = ["hardy_identity", "vector_field_identities", "symmetrization_terms"]
fields = ["bump-radial", "bump-k1"]
[symmetrization]
q = [5]
profiles = 2
"#;

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("suite.toml");
    std::fs::write(&cfg, SMALL).unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let args = VerifyArgs { config: Some(cfg.clone()), out: Some(out.clone()), ..Default::default() };
        let code = cli::cmd_verify(&args, &mut Vec::new(), &mut Vec::new());
        (code, std::fs::read(out).unwrap())
    };
    let (c1, a) = run("a.jsonl");
    let (c2, b) = run("b.jsonl");
    let lines = a.iter().filter(|&&c| c == b'\n').count();
    outcome(c1 == 0 && c2 == 0 && a == b && lines > 0, format!("{lines} records, {} bytes, identical = {}", a.len(), a == b))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("geometry axioms", geometry),
        ("harmonic spectrum", spectrum),
        ("Bessel catalog", bessel_catalog),
        ("Hardy identities", hardy),
        ("Rellich suite", rellich),
        ("spherical decomposition", spherical),
        ("projection deficit", projection),
        ("symmetrization", symmetrization),
        ("uncertainty principles", uncertainty),
        ("determinism", determinism),
    ];
    // Optional criterion numbers select a subset; other arguments are ignored.
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let o = f();
        if !o.ok {
            failed += 1;
        }
        println!("criterion {:>2} {:<24} {}  {}", i + 1, name, if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
