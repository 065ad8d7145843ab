//! Rellich identities and inequalities driven by Bessel pairs, the
//! Hardy-Rellich corollaries and the dimension-shifted pairs.

use super::hardy::{pair_grid, plan_fields};
use super::spectral::Spectrum;
use super::terms::{audit, origin_power, require_q, Integrals};
use super::usp::extremal_range;
use super::{Case, Check, Context, Outcome, PairSpec, Relation, SuitePlan};
use crate::bessel::{cond_check, log_nodes, shift_dimension, BesselPair};
use crate::error::{Error, Result};
use crate::fields::ops::{grad_g_norm2, lap_g, radial_derivative_value};
use crate::fields::profile::{ckn_extremizer, power, Profile};
use crate::fields::{compose_with_radial_profile, radial_derivative_field, Field, RadialField, ScalarField, Support, Symmetry};
use crate::geometry::gauge_jet;
use crate::jet::Order;
use crate::quadrature::{QuadratureGrid, RadialRange};
use std::sync::Arc;

/// Classical Rellich constant Q²(Q-4)²/16.
pub fn rellich_constant(q: usize) -> f64 {
    let q = q as f64;
    q * q * (q - 4.0) * (q - 4.0) / 16.0
}

/// ∫(𝓛u)²/ψ diverges for n = 2 unless 𝓛u vanishes on {x = 0}, which the
/// finite harmonic sums guarantee and generic fields do not.
pub(super) fn lhs_guard(u: &dyn ScalarField, n: usize) -> Result<()> {
    if n == 2 && u.symmetry() == Symmetry::General && u.modes().is_none() {
        return Err(Error::Hypothesis(format!("∫(𝓛u)²/ψ diverges on {{x = 0}} for {} with n = 2", u.label())));
    }
    Ok(())
}

fn radial_guard(u: &dyn ScalarField) -> Result<()> {
    if u.symmetry() != Symmetry::Radial {
        return Err(Error::Hypothesis(format!("{} is not radial", u.label())));
    }
    Ok(())
}

/// Integrals [∫V(𝓛u)²/ψ, ∫W_eff|∇u|², ∫M|∇u|², ∫V|∇(u_ρ/g)|²g²] where
/// M is the middle-term coefficient and g divides the radial derivative.
fn rellich_integrals(
    u: &Field,
    v: &Profile,
    w_eff: impl Fn(f64) -> f64 + Sync,
    mid: impl Fn(f64) -> f64 + Sync,
    g: &Profile,
    grid: &QuadratureGrid,
) -> Result<Integrals> {
    let ur = radial_derivative_field(u.clone());
    Integrals::compute(grid, &["lhs", "W grad", "middle", "remainder"], |p, rho, psi, o| {
        let j = u.jet(p, Order::Hessian)?;
        let lu = lap_g(&j, p)?;
        let g2 = grad_g_norm2(&j, p);
        let vr = v.value(rho);
        // g∇(a/g) = ∇a - a(ln g)'∇ρ, finite even where g underflows.
        let mut a = ur.jet(p, Order::Gradient)?;
        let (drho, ld) = (gauge_jet(p)?, g.log_derivative(rho));
        for i in 0..=p.n() {
            a.g[i] -= a.v * ld * drho.g[i];
        }
        o[0] = vr * lu * lu / psi;
        o[1] = w_eff(rho) * g2;
        o[2] = mid(rho) * g2;
        o[3] = vr * grad_g_norm2(&a, p);
        Ok(())
    })
}

fn rellich_audit(u: &dyn ScalarField, q: usize, v: &Profile, w: &Profile) -> Result<()> {
    let s = u.support();
    audit(s, q, origin_power(v) - 4.0, true, "∫V(𝓛u)²/ψ")?;
    audit(s, q, origin_power(w) - 2.0, true, "∫W|∇u|²")?;
    audit(s, q, origin_power(v) - 4.0, true, "∫V|∇u|²/ρ²")
}

fn pair_cases(plan: &SuitePlan, pairs: &[PairSpec], shift: usize) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for (n, spec, u) in plan_fields(plan)? {
        for p in pairs {
            let pair = p.build(n + 2)?;
            if pair.dim != n + 2 + shift || u.support().hi >= pair.radius {
                continue;
            }
            cases.push(Case::new(n, plan.grid).field(&spec).pair(p.clone()));
        }
    }
    Ok(cases)
}

fn checked_pair(case: &Case, dim: usize) -> Result<BesselPair> {
    let pair = case.build_pair()?;
    if pair.dim != dim {
        return Err(Error::InvalidArgument(format!("{} is {}-dimensional, need {dim}", pair.label(), pair.dim)));
    }
    Ok(pair)
}

/// (cond) and V ≥ 0 on the radial range of the grid.
fn require_cond(pair: &BesselPair, range: &RadialRange, out: &mut Outcome) -> Result<()> {
    let lo = if range.lo > 0.0 { range.lo } else { range.hi * 1e-3 };
    let nodes = log_nodes(lo, range.hi.min(pair.radius * (1.0 - 1e-9)), 200);
    let c = cond_check(pair, &nodes);
    out.note(format!("condition minimum {:e}", c.min));
    if !c.satisfied {
        return Err(Error::Hypothesis(format!("{} violates (Q-5)V/ρ² + 3V'/ρ - V'' >= 0 (min {:e})", pair.label(), c.min)));
    }
    if nodes.iter().any(|&r| pair.v.value(r) < 0.0) {
        return Err(Error::Hypothesis(format!("{} has negative V", pair.label())));
    }
    Ok(())
}

fn middle(q: usize, v: &Profile) -> impl Fn(f64) -> f64 + Sync + '_ {
    move |r| {
        let [v0, v1, _] = v.eval(r);
        (q as f64 - 1.0) * (v0 / (r * r) - v1 / r)
    }
}

const RELLICH_LABEL: &str = "∫V(𝓛u)²/ψ = ∫W|∇u|² + (Q-1)∫(V/ρ² - V'/ρ)|∇u|² + ∫V|∇(u_ρ/f)|²f²";

pub struct RadialRellich;

impl Check for RadialRellich {
    fn name(&self) -> &'static str {
        "radial_rellich"
    }

    fn description(&self) -> &'static str {
        "Rellich identity with Bessel-pair remainder for radial fields"
    }

    fn cases(&self, plan: &SuitePlan) -> Result<Vec<Case>> {
        Ok(pair_cases(plan, &plan.pairs, 0)?
            .into_iter()
            .filter(|c| c.build_field().map_or(false, |u| u.symmetry() == Symmetry::Radial))
            .collect())
    }

    fn run(&self, case: &Case, ctx: &Context) -> Result<Outcome> {
        require_q(case.q, 4)?;
        let u = case.build_field()?;
        radial_guard(u.as_ref())?;
        let pair = checked_pair(case, case.q)?;
        rellich_audit(u.as_ref(), case.q, &pair.v, &pair.w)?;
        let grid = pair_grid(u.as_ref(), &pair, case, ctx)?;
        let w = &pair.w;
        let ints = rellich_integrals(&u, &pair.v, |r| w.value(r), middle(case.q, &pair.v), &pair.f, &grid)?;
        let mut out = Outcome::default();
        ints.identity(&mut out, RELLICH_LABEL, &[0, 1, 2, 3], |v| v[0], |v| v[1] + v[2] + v[3], ctx.tol.identity, ctx.refine_floor());
        out.terms.extend(ints.terms());
        Ok(out)
    }
}

pub struct NonradialRellich;

impl Check for NonradialRellich {
    fn name(&self) -> &'static str {
        "nonradial_rellich"
    }

    fn description(&self) -> &'static str {
        "Rellich inequality for general fields under the weight condition, with its spectral remainder"
    }

    fn cases(&self, plan: &SuitePlan) -> Result<Vec<Case>> {
        pair_cases(plan, &plan.pairs, 0)
    }

    fn run(&self, case: &Case, ctx: &Context) -> Result<Outcome> {
        require_q(case.q, 4)?;
        let u = case.build_field()?;
        let pair = checked_pair(case, case.q)?;
        let mut out = Outcome::default();
        let s = u.support();
        require_cond(&pair, &RadialRange::new(s.lo, s.hi.min(1e3))?, &mut out)?;
        lhs_guard(u.as_ref(), case.n)?;
        rellich_audit(u.as_ref(), case.q, &pair.v, &pair.w)?;
        let grid = pair_grid(u.as_ref(), &pair, case, ctx)?;
        let w = &pair.w;
        let ints = rellich_integrals(&u, &pair.v, |r| w.value(r), middle(case.q, &pair.v), &pair.f, &grid)?;
        let rhs = |v: &[f64]| v[1] + v[2] + v[3];
        ints.inequality(&mut out, RELLICH_LABEL.replace(" = ", " >= ").as_str(), &[0, 1, 2, 3], |v| v[0], rhs, ctx.tol.inequality);
        if u.symmetry() == Symmetry::Radial {
            ints.identity(&mut out, RELLICH_LABEL, &[0, 1, 2, 3], |v| v[0], rhs, ctx.tol.identity, None);
        }

        let spectrum = Spectrum::compute(u.as_ref(), &grid, ctx.max_k)?;
        if spectrum.tail() <= ctx.tol.tail {
            let n = case.n as i32;
            let (v, f) = (&pair.v, &pair.f);
            let remainder = spectrum.sum(|h, r, d, dp| {
                let l = h.eigenvalue();
                let [v0, v1, v2] = v.eval(r);
                let [f0, f1, _] = f.eval(r);
                let e = dp / (r * f0) - d / (r * r * f0) - d * f1 / (r * f0 * f0);
                16.0 * l * (l - 1.0) * v0 * d * d * r.powi(n - 3) - 4.0 * l * v2 * d * d * r.powi(n - 1)
                    + 12.0 * l * v1 * d * d * r.powi(n - 2)
                    + 4.0 * l * v0 * f0 * f0 * e * e * r.powi(n + 1)
            });
            let bound = spectrum.sum(|h, r, d, _| {
                let l = h.eigenvalue();
                let [v0, v1, v2] = v.eval(r);
                4.0 * l * (4.0 * (l - 1.0) * v0 / (r * r) - v2 + 3.0 * v1 / r) * d * d * r.powi(n - 1)
            });
            let x = &ints.fine;
            let slack = x[0] - rhs(x);
            let scale = x[..4].iter().map(|t| t.abs()).fold(0.0, f64::max);
            out.push(Relation::identity("slack = ½Σ_k (spectral remainder)_k", slack, remainder, scale, ctx.tol.identity));
            out.push(Relation::inequality(
                "slack >= ½Σ4λ_k∫[4(λ_k-1)V/ρ² - V'' + 3V'/ρ]d_k²ρ^{n-1}",
                slack,
                bound,
                scale,
                ctx.tol.inequality,
            ));
        } else {
            out.note(format!("spectral remainder skipped: tail {:e} beyond the truncation budget", spectrum.tail()));
        }
        out.terms.extend(ints.terms());
        Ok(out)
    }
}

pub struct HardyRellichCor;

impl Check for HardyRellichCor {
    fn name(&self) -> &'static str {
        "hardy_rellich_cor"
    }

    fn description(&self) -> &'static str {
        "Hardy-Rellich and Rellich corollaries with the constants Q²/4 and Q²(Q-4)²/16"
    }

    fn cases(&self, plan: &SuitePlan) -> Result<Vec<Case>> {
        Ok(plan_fields(plan)?.into_iter().map(|(n, spec, _)| Case::new(n, plan.grid).field(&spec)).collect())
    }

    fn run(&self, case: &Case, ctx: &Context) -> Result<Outcome> {
        let u = case.build_field()?;
        let radial = u.symmetry() == Symmetry::Radial;
        require_q(case.q, if radial { 4 } else { 5 })?;
        lhs_guard(u.as_ref(), case.n)?;
        let q = case.q as f64;
        let s = u.support();
        audit(s, case.q, -4.0, true, "∫(𝓛u)²/ψ")?;
        audit(s, case.q, -4.0, false, "∫u²ψ/ρ⁴")?;
        let grid = super::terms::grid_for(case.n, case.grid, s, u.symmetry(), f64::INFINITY)?;

        let c_r = q * q / 4.0 * ((q - 4.0) * (q - 4.0) / 4.0);
        let r1 = compose_with_radial_profile(radial_derivative_field(u.clone()), power(1.0, (q - 2.0) / 2.0), false);
        let r2 = compose_with_radial_profile(u.clone(), power(1.0, (q - 4.0) / 2.0), false);
        let labels = ["L", "G", "R1", "U", "R2", "S1", "S2"];
        let ints = Integrals::compute(&grid, &labels, |p, rho, psi, o| {
            let j = u.jet(p, Order::Hessian)?;
            let lu = lap_g(&j, p)?;
            let ur = radial_derivative_value(&j, p, rho);
            let w = rho.powf(2.0 - q);
            o[0] = lu * lu / psi;
            o[1] = grad_g_norm2(&j, p) / (rho * rho);
            o[2] = w * grad_g_norm2(&r1.jet(p, Order::Gradient)?, p);
            o[3] = j.v * j.v * psi / rho.powi(4);
            o[4] = w * grad_g_norm2(&r2.jet(p, Order::Gradient)?, p);
            let a = lu / psi.sqrt() + q * (q - 4.0) / 4.0 * j.v * psi.sqrt() / (rho * rho);
            let b = ur / rho + (q - 4.0) / 2.0 * j.v / (rho * rho);
            o[5] = a * a;
            o[6] = b * b * psi;
            Ok(())
        })?;
        let mut out = Outcome::default();
        out.push(Relation::identity("Q²/4 · (Q-4)²/4 = Q²(Q-4)²/16", c_r, rellich_constant(case.q), rellich_constant(case.q).max(1.0), 1e-15));
        let h = q * q / 4.0;
        let (tol, ineq, refine) = (ctx.tol.identity, ctx.tol.inequality, ctx.refine_floor());
        ints.identity(&mut out, "∫|∇u|²/ρ² = (Q-4)²/4∫u²ψ/ρ⁴ + ∫ρ^(2-Q)|∇(uρ^((Q-4)/2))|²", &[1, 3, 4], |v| v[1], |v| (q - 4.0).powi(2) / 4.0 * v[3] + v[4], tol, refine);
        let a_lbl = "∫(𝓛u)²/ψ = Q²/4∫|∇u|²/ρ² + ∫ρ^(2-Q)|∇(u_ρρ^((Q-2)/2))|²";
        let b_lbl = "∫(𝓛u)²/ψ = c_R∫u²ψ/ρ⁴ + Q²/4∫ρ^(2-Q)|∇(uρ^((Q-4)/2))|² + ∫ρ^(2-Q)|∇(u_ρρ^((Q-2)/2))|²";
        let a_rhs = |v: &[f64]| h * v[1] + v[2];
        let b_rhs = |v: &[f64]| c_r * v[3] + h * v[4] + v[2];
        if radial {
            ints.identity(&mut out, a_lbl, &[0, 1, 2], |v| v[0], a_rhs, tol, refine);
            ints.identity(&mut out, b_lbl, &[0, 2, 3, 4], |v| v[0], b_rhs, tol, refine);
            ints.identity(
                &mut out,
                "Q²/4·R2 + R1 = ∫(𝓛u/ψ^½ + Q(Q-4)/4·uψ^½/ρ²)² + Q(Q-4)/2∫(u_ρ/ρ + (Q-4)/2·u/ρ²)²ψ",
                &[2, 4, 5, 6],
                |v| h * v[4] + v[2],
                |v| v[5] + q * (q - 4.0) / 2.0 * v[6],
                tol,
                refine,
            );
        } else {
            ints.inequality(&mut out, &a_lbl.replace(" = ", " >= "), &[0, 1, 2], |v| v[0], a_rhs, ineq);
            ints.inequality(&mut out, &b_lbl.replace(" = ", " >= "), &[0, 2, 3, 4], |v| v[0], b_rhs, ineq);
        }
        ints.inequality(&mut out, "∫(𝓛u)²/ψ >= Q²(Q-4)²/16 ∫u²ψ/ρ⁴", &[0, 3], |v| v[0], |v| rellich_constant(case.q) * v[3], ineq);
        out.terms.extend(ints.terms());
        Ok(out)
    }
}

pub struct DimShiftRellich;

/// CKN exponent whose extremizer solves the remainder equation of a shifted family.
fn extremal_b(spec: &PairSpec) -> Option<f64> {
    match spec.family.as_str() {
        "heisenberg" => Some(-1.0),
        "hydrogen" => Some(0.0),
        "ckn-sub" | "ckn-super" => spec.b,
        _ => None,
    }
}

impl Check for DimShiftRellich {
    fn name(&self) -> &'static str {
        "dim_shift_rellich"
    }

    fn description(&self) -> &'static str {
        "Rellich identity and inequality from (Q+2)-dimensional Bessel pairs, with the extremal radial field"
    }

    fn cases(&self, plan: &SuitePlan) -> Result<Vec<Case>> {
        let mut cases = pair_cases(plan, &plan.shift_pairs, 2)?;
        for &n in &plan.dims {
            for p in &plan.shift_pairs {
                if extremal_b(p).is_some() {
                    cases.push(Case::new(n, plan.grid).pair(p.clone()).with("extremal", 1.0));
                }
            }
        }
        Ok(cases)
    }

    fn run(&self, case: &Case, ctx: &Context) -> Result<Outcome> {
        require_q(case.q, 4)?;
        let pair = checked_pair(case, case.q + 2)?;
        let extremal = case.extra.contains_key("extremal");
        let mut out = Outcome::default();
        let (u, grid): (Field, QuadratureGrid) = if extremal {
            let spec = case.pair.as_ref().expect("checked_pair built it");
            let b = extremal_b(spec).ok_or_else(|| Error::InvalidArgument(format!("{} has no extremal field", spec.family)))?;
            let (lo, hi) = extremal_range(case.q, b, 1.0);
            let u: Field = Arc::new(RadialField::new(case.n, ckn_extremizer(case.q, b, 1.0, 1.0), Support::annular(lo, hi)));
            let mut spec = case.grid;
            spec.panels *= 3;
            let grid = QuadratureGrid::new(case.n, spec, RadialRange::new(lo, hi)?, crate::quadrature::SphereMode::Zonal)?;
            out.note(format!("extremal field ckn(b={b}) on [{lo:e}, {hi:e}]"));
            (u, grid)
        } else {
            let u = case.build_field()?;
            let grid = pair_grid(u.as_ref(), &pair, case, ctx)?;
            (u, grid)
        };
        let radial = u.symmetry() == Symmetry::Radial;
        if !radial {
            let shifted = shift_dimension(&pair)?;
            let s = u.support();
            require_cond(&shifted, &RadialRange::new(s.lo, s.hi)?, &mut out)?;
            lhs_guard(u.as_ref(), case.n)?;
        }
        rellich_audit(u.as_ref(), case.q, &pair.v, &pair.w)?;
        let q = case.q as f64;
        let (v, w) = (&pair.v, &pair.w);
        let w_eff = |r: f64| w.value(r) - q * v.eval(r)[1] / r;
        let rf = pair.f.mul(&power(1.0, 1.0));
        let ints = rellich_integrals(&u, v, w_eff, |_| 0.0, &rf, &grid)?;
        let label = "∫V(𝓛u)²/ψ = ∫(W - QV'/ρ)|∇u|² + ∫V|∇(u_ρ/(ρf))|²ρ²f²";
        let rhs = |x: &[f64]| x[1] + x[3];
        if radial {
            ints.identity(&mut out, label, &[0, 1, 3], |x| x[0], rhs, ctx.tol.identity, ctx.refine_floor());
        } else {
            ints.inequality(&mut out, &label.replace(" = ", " >= "), &[0, 1, 3], |x| x[0], rhs, ctx.tol.inequality);
        }
        ints.inequality(&mut out, "∫V(𝓛u)²/ψ >= ∫(W - QV'/ρ)|∇u|²", &[0, 1], |x| x[0], |x| x[1], ctx.tol.inequality);
        if extremal {
            let x = &ints.fine;
            out.push(Relation::identity("extremal remainder vanishes", x[3], 0.0, x[0].abs(), ctx.tol.identity));
        }
        out.terms.extend(ints.terms());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::{evaluate, Verdict};

    fn grid() -> crate::quadrature::GridSpec {
        crate::verifier::SuitePlan::default().grid
    }

    fn run(check: &dyn Check, case: Case) -> crate::verifier::VerificationReport {
        evaluate(check, &case, &Context::default())
    }

    #[test]
    fn rellich_constant_values() {
        assert_eq!(rellich_constant(4), 0.0);
        assert_eq!(rellich_constant(5), 25.0 / 16.0);
        assert_eq!(rellich_constant(6), 9.0);
    }

    #[test]
    fn radial_rellich_power_pair() {
        let c = Case::new(3, grid()).field("gauss-radial").pair(PairSpec::named("power-hardy"));
        let r = run(&RadialRellich, c);
        assert_eq!(r.verdict, Verdict::Pass, "{r:#?}");
    }

    #[test]
    fn nonradial_needs_the_condition() {
        let c = Case::new(2, grid()).field("bump-k1").pair(PairSpec::named("power-hardy"));
        assert_eq!(run(&NonradialRellich, c).verdict, Verdict::Inapplicable);
        let c = Case::new(3, grid()).field("bump-k1").pair(PairSpec::named("power-hardy"));
        let r = run(&NonradialRellich, c);
        assert_eq!(r.verdict, Verdict::Pass, "{r:#?}");
        assert!(r.relations.iter().any(|x| x.label.starts_with("slack = ")));
    }

    #[test]
    fn corollary_guards_and_identities() {
        let r = run(&HardyRellichCor, Case::new(2, grid()).field("bump-k1"));
        assert_eq!(r.verdict, Verdict::Inapplicable);
        let r = run(&HardyRellichCor, Case::new(2, grid()).field("bump-radial"));
        assert_eq!(r.verdict, Verdict::Pass, "{r:#?}");
        let r = run(&HardyRellichCor, Case::new(3, grid()).field("bump-two-mode"));
        assert_eq!(r.verdict, Verdict::Pass, "{r:#?}");
    }

    #[test]
    fn shifted_extremal_has_no_remainder() {
        let c = Case::new(3, grid()).pair(PairSpec::named("hydrogen")).with("extremal", 1.0);
        let r = run(&DimShiftRellich, c);
        assert_eq!(r.verdict, Verdict::Pass, "{r:#?}");
    }
}
