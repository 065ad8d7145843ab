//! One-dimensional k-term quantities behind the symmetrization estimates,
//! evaluated on seeded radial profiles.

use super::terms::require_q;
use super::{Case, Check, Context, Outcome, Relation, SuitePlan};
use crate::error::{Error, Result};
use crate::fields::profile::{modulated_bump, Profile};
use crate::harmonics::eigenvalue;
use crate::quadrature::Rule1d;
use rand::{Rng, SeedableRng};

/// Seeded bumps on (a, b) ⊂ (0, R) modulated by a random quadratic.
pub fn seeded_profiles(count: usize, radius: f64, seed: u64) -> Vec<(f64, f64, Profile)> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a = rng.gen_range(0.1..0.4) * radius;
            let b = rng.gen_range(0.6..0.95) * radius;
            let c: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            (a, b, modulated_bump(a, b, c))
        })
        .collect()
}

/// W that turns the weight condition into an equality: ((Q-4)²/2 + 3Q - 9)/ρ².
pub fn saturating_w(q: usize) -> impl Fn(f64) -> f64 {
    let q = q as f64;
    move |r| ((q - 4.0).powi(2) / 2.0 + 3.0 * q - 9.0) / (r * r)
}

pub struct SymmetrizationTerms;

impl Check for SymmetrizationTerms {
    fn name(&self) -> &'static str {
        "symmetrization_terms"
    }

    fn description(&self) -> &'static str {
        "Nonnegativity of the k-term quantities M_k and B_k - B_1k on seeded radial profiles"
    }

    fn cases(&self, plan: &SuitePlan) -> Result<Vec<Case>> {
        let s = &plan.symmetrization;
        s.q.iter()
            .map(|&q| {
                let n = q.checked_sub(2).filter(|n| *n >= 2).ok_or(Error::DimensionTooSmall { q, min: 4 })?;
                Ok(Case::new(n, plan.grid)
                    .with("profiles", s.profiles as f64)
                    .with("radius", s.radius)
                    .with("max_k", s.max_k as f64))
            })
            .collect()
    }

    fn run(&self, case: &Case, ctx: &Context) -> Result<Outcome> {
        require_q(case.q, 4)?;
        let (n, q) = (case.n, case.q as f64);
        let radius = case.get("radius")?;
        let count = case.get("profiles")? as usize;
        let max_k = case.get("max_k")? as usize;
        let w = saturating_w(case.q);
        let l1 = (q - 1.0) / 4.0;
        let ni = n as i32;
        let mut out = Outcome::default();
        for (i, (a, b, d)) in seeded_profiles(count, radius, ctx.seed).into_iter().enumerate() {
            let edges: Vec<f64> = (0..=case.grid.panels * 2).map(|k| a + (b - a) * k as f64 / (case.grid.panels * 2) as f64).collect();
            let rule = Rule1d::composite(&edges, case.grid.order);
            let tab: Vec<(f64, [f64; 3])> = rule.nodes.iter().map(|&r| (r, d.eval(r))).collect();
            let int = |g: &dyn Fn(f64, [f64; 3]) -> f64| -> f64 { tab.iter().zip(&rule.weights).map(|((r, e), w)| w * g(*r, *e)).sum() };
            let d2 = int(&|r, e| e[0] * e[0] * r.powi(ni - 3));
            let dd2 = int(&|r, e| e[2] * e[0] * r.powi(ni - 1));
            let dd1 = int(&|r, e| e[1] * e[0] * r.powi(ni - 2));
            let d1sq = int(&|r, e| e[1] * e[1] * r.powi(ni - 1));
            let wd2 = int(&|r, e| w(r) * e[0] * e[0] * r.powi(ni - 1));
            out.note(format!("profile {i}: bump on ({a:.4}, {b:.4})"));
            for k in 1..=max_k {
                let l = eigenvalue(k, n);
                let tag = format!("profile {i} k={k}");
                let m_def = 16.0 * l * l * d2 - 8.0 * l * dd2 - 8.0 * l * (q - 1.0) * dd1;
                let m_simple = 8.0 * l * d1sq + 8.0 * l * (2.0 * l + q - 4.0) * d2;
                let m_scale = (16.0 * l * l * d2).abs().max((8.0 * l * dd2).abs()).max((8.0 * l * (q - 1.0) * dd1).abs());
                out.push(Relation::identity(format!("{tag}: M by parts"), m_def, m_simple, m_scale, ctx.tol.identity));
                out.push(Relation::inequality(format!("{tag}: M >= 0"), m_def, 0.0, m_scale, 1e-10));

                let b_k = 4.0 * l * d2 - 2.0 * dd2 - 2.0 * (q - 1.0) * dd1 - wd2;
                let b_1k = 2.0 * d1sq + 2.0 * (2.0 * l1 + q - 4.0) * d2 - wd2;
                let gap = 4.0 * (l - l1) * d2;
                let b_scale = [4.0 * l * d2, 2.0 * dd2, 2.0 * (q - 1.0) * dd1, wd2].iter().map(|x| x.abs()).fold(0.0, f64::max);
                out.push(Relation::identity(format!("{tag}: B_k - B_1k = 4(λ_k - λ_1)∫d²ρ^(n-3)"), b_k - b_1k, gap, b_scale, ctx.tol.identity));
                out.push(Relation::inequality(format!("{tag}: B_k - B_1k >= 0"), b_k - b_1k, 0.0, b_scale, 1e-10));
                out.push(Relation::flag(format!("{tag}: B_1k >= 0 at the saturating W"), b_1k, 0.0));
                if i == 0 {
                    out.push(Relation::flag(format!("k={k}: 2λ_k + Q - 4 >= 3(Q-3)/2"), 2.0 * l + q - 4.0, 1.5 * (q - 3.0)));
                    if k >= 2 {
                        out.push(Relation::flag(format!("k={k}: 4(λ_k - λ_1) >= Q² - 3Q + 1"), 4.0 * (l - l1), q * q - 3.0 * q + 1.0));
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::{evaluate, RelationKind, Verdict};

    fn grid() -> crate::quadrature::GridSpec {
        crate::verifier::SuitePlan::default().grid
    }

    fn case(q: usize) -> Case {
        Case::new(q - 2, grid()).with("profiles", 5.0).with("radius", 3.0).with("max_k", 6.0)
    }

    #[test]
    fn passes_and_flags_the_gap_bound() {
        for q in [4, 5, 6] {
            let r = evaluate(&SymmetrizationTerms, &case(q), &Context::default());
            assert_eq!(r.verdict, Verdict::Pass, "{r:#?}");
            let bound = r.relations.iter().find(|x| x.label == "k=2: 4(λ_k - λ_1) >= Q² - 3Q + 1").unwrap();
            assert_eq!(bound.kind, RelationKind::Flag);
            // 4(λ_2 - λ_1) = Q + 1.
            assert!((bound.lhs - (q as f64 + 1.0)).abs() < 1e-12);
            assert_eq!(bound.passed, q == 4);
        }
    }

    #[test]
    fn first_gap_vanishes() {
        let r = evaluate(&SymmetrizationTerms, &case(5), &Context::default());
        let g = r.relations.iter().find(|x| x.label.starts_with("profile 0 k=1: B_k - B_1k =")).unwrap();
        assert_eq!(g.rhs, 0.0);
        assert!(g.lhs.abs() < 1e-10 * g.scale);
    }

    #[test]
    fn profiles_are_seeded() {
        let a = seeded_profiles(3, 3.0, 7);
        let b = seeded_profiles(3, 3.0, 7);
        for ((a0, b0, p), (a1, b1, q)) in a.iter().zip(&b) {
            assert_eq!((a0, b0), (a1, b1));
            assert_eq!(p.value(1.5), q.value(1.5));
            assert!(0.3 <= *a0 && *a0 <= 1.2 && 1.8 <= *b0 && *b0 <= 2.85);
        }
    }
}
