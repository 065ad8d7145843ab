use grushin::bessel::{self, log_nodes, PairParams};
use grushin::cli::SuiteConfig;
use grushin::geometry::{dilate, from_polar, gauge, psi, to_polar, Point};
use grushin::harmonics::{eigenvalue, GrushinHarmonic};
use grushin::jet::Order;
use grushin::verifier::{self, closed_forms, sharp_constant, usp, Registry, Relation, Verdict};
use proptest::prelude::*;

fn point(n: usize) -> impl Strategy<Value = Point> {
    (prop::collection::vec(-3.0..3.0f64, n), -3.0..3.0f64)
        .prop_filter("away from the origin", |(x, t)| x.iter().map(|v| v * v).sum::<f64>() + t.abs() > 1e-3)
        .prop_map(|(x, t)| Point::new(&x, t).unwrap())
}

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![-2.0..0.9f64, 1.1..3.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauge_is_homogeneous_and_psi_invariant(n in 2usize..=4, seed in any::<u64>(), lambda in 0.1..10.0f64) {
        let p = grushin::geometry::sample_points(n, 1, 0.01, 50.0, seed)[0];
        let q = dilate(&p, lambda).unwrap();
        let (rp, rq) = (gauge(&p).unwrap(), gauge(&q).unwrap());
        prop_assert!((rq - lambda * rp).abs() <= 1e-13 * lambda * rp);
        prop_assert!((psi(&q).unwrap() - psi(&p).unwrap()).abs() <= 1e-13);
        prop_assert!((0.0..=1.0).contains(&psi(&p).unwrap()));
    }

    #[test]
    fn polar_round_trip(p in point(3)) {
        let back = from_polar(&to_polar(&p).unwrap()).unwrap();
        let scale = 1.0 + gauge(&p).unwrap().powi(2);
        for i in 0..3 {
            prop_assert!((back.x()[i] - p.x()[i]).abs() <= 1e-13 * scale);
        }
        prop_assert!((back.t - p.t).abs() <= 1e-13 * scale);
    }

    #[test]
    fn eigenvalue_gaps(n in 2usize..8, k in 0usize..20) {
        prop_assert_eq!(eigenvalue(k, n), (k * (k + n)) as f64 / 4.0);
        prop_assert_eq!(eigenvalue(k + 1, n) - eigenvalue(k, n), (2 * k + 1 + n) as f64 / 4.0);
    }

    #[test]
    fn harmonic_jets_match_values(p in point(2), k in 0usize..=5, pick in 0usize..8) {
        let ls: Vec<usize> = (k % 2..=k).step_by(2).collect();
        let l = ls[pick % ls.len()];
        let h = GrushinHarmonic::new(2, k, l, pick % if l == 0 { 1 } else { 2 }).unwrap();
        let jet = h.jet(&p, Order::Value).unwrap();
        prop_assert!((jet.v - h.value_polar(&to_polar(&p).unwrap())).abs() <= 1e-12);
    }

    #[test]
    fn closed_form_quotient_is_the_sharp_constant(q in 5usize..9, b in exponent(), alpha in 0.2..5.0f64, beta in 0.2..5.0f64) {
        let v = closed_forms(q, b, alpha, beta).unwrap();
        let s = sharp_constant(q, b).unwrap();
        prop_assert!((usp::quotient(v) - s).abs() <= 1e-10 * s);
    }

    #[test]
    fn closed_forms_scale_with_amplitude(q in 5usize..9, b in exponent(), alpha in 0.2..5.0f64, beta in 0.2..5.0f64) {
        let one = closed_forms(q, b, 1.0, beta).unwrap();
        let v = closed_forms(q, b, alpha, beta).unwrap();
        for i in 0..3 {
            prop_assert!((v[i] - alpha * alpha * one[i]).abs() <= 1e-12 * v[i].abs());
        }
    }

    #[test]
    fn sharp_constant_is_continuous_at_b_one(q in 4usize..10, e in 1e-9..1e-3f64) {
        let (lo, hi) = (sharp_constant(q, 1.0 - e).unwrap(), sharp_constant(q, 1.0 + e).unwrap());
        prop_assert!((lo - hi).abs() <= 2.0 * e);
        prop_assert!(sharp_constant(q, 1.0).is_err());
    }

    #[test]
    fn parametrized_pairs_solve_their_ode(q in 4usize..8, alpha in -1.0..3.0f64, radius in 0.5..5.0f64, b in exponent()) {
        let params = PairParams::new(q).alpha(alpha).radius(radius).b(b);
        let fam = if b < 1.0 { "ckn-sub" } else { "ckn-super" };
        for name in ["weighted-power", "brezis-vazquez", "double-weighted", fam] {
            let pair = bessel::catalog(name, &params).unwrap();
            let nodes = if pair.radius.is_finite() { log_nodes(0.01 * radius, 0.99 * radius, 20) } else { log_nodes(0.05, 5.0, 20) };
            prop_assert!(bessel::ode_residual(&pair, &nodes).unwrap() < 1e-9, "{}", pair.label());
        }
    }

    #[test]
    fn identity_relations_are_symmetric(a in -1e3..1e3f64, b in -1e3..1e3f64, tol in 1e-12..1e-2f64) {
        let scale = a.abs().max(b.abs()).max(1.0);
        let x = Relation::identity("x", a, b, scale, tol);
        let y = Relation::identity("y", b, a, scale, tol);
        prop_assert_eq!(x.passed, y.passed);
        prop_assert_eq!(x.residual, y.residual);
        let ineq = Relation::inequality("z", a, b, scale, tol);
        prop_assert_eq!(ineq.passed, (a - b) / scale >= -tol);
    }

    #[test]
    fn config_round_trips_through_toml(seed in 0..=i64::MAX as u64, jobs in 1usize..8, panels in 1usize..40) {
        let mut cfg = SuiteConfig::default();
        cfg.seed = seed;
        cfg.jobs = jobs;
        cfg.grid.panels = panels;
        let text = toml::to_string(&cfg).unwrap();
        prop_assert_eq!(SuiteConfig::parse(&text).unwrap(), cfg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn symmetrization_terms_are_nonnegative_for_any_seed(seed in 0..=i64::MAX as u64, q in 4usize..=7) {
        let toml = format!("seed = {seed}\nchecks = [\"symmetrization_terms\"]\n[symmetrization]\nq = [{q}]\nprofiles = 3\nmax_k = 6\n");
        let registry = Registry::default();
        let plan = SuiteConfig::parse(&toml).unwrap().plan(&registry).unwrap();
        let reports = verifier::run_suite(&plan, &registry).unwrap();
        prop_assert_eq!(reports.len(), 1);
        prop_assert_eq!(reports[0].verdict, Verdict::Pass, "{:?}", reports[0].relations.iter().filter(|r| !r.passed).collect::<Vec<_>>());
    }

    #[test]
    fn extremizer_quotient_is_dilation_invariant(lambda in 0.3..3.0f64, beta in 0.5..2.0f64) {
        let grid = verifier::SuitePlan::default().grid;
        let fam = usp::usp_family("hydrogen", None).unwrap();
        let base = usp::quotient(usp::measure(3, fam.as_ref(), beta, grid, None).unwrap());
        let dilated = usp::quotient(usp::measure(3, fam.as_ref(), beta, grid, Some(lambda)).unwrap());
        prop_assert!((base - 3.0).abs() < 1e-6);
        prop_assert!((dilated - base).abs() < 1e-6 * base);
    }
}
