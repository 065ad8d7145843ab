//! Hardy identities with Bessel-pair remainders, the enhanced subspace
//! constant, weighted power weights and the bounded-domain J₀ pair.

use super::spectral::Spectrum;
use super::terms::{audit, grid_for, origin_power, require_q, validate_pair, Integrals};
use super::{build_field, Case, Check, Context, Outcome, PairSpec, Relation, SuitePlan};
use crate::bessel::BesselPair;
use crate::error::{Error, Result};
use crate::fields::ops::{grad_g_norm2, radial_derivative_value};
use crate::fields::profile::power;
use crate::fields::{compose_with_radial_profile, Field, ScalarField};
use crate::jet::Order;
use crate::quadrature::{QuadratureGrid, RadialRange};

/// Every (n, field spec, field) the plan selects.
pub(super) fn plan_fields(plan: &SuitePlan) -> Result<Vec<(usize, String, Field)>> {
    let mut out = Vec::new();
    for &n in &plan.dims {
        for spec in plan.fields_for(n) {
            let u = build_field(&spec, n)?;
            out.push((n, spec, u));
        }
    }
    Ok(out)
}

/// Grid for u inside the pair's domain, after the pair is checked on it.
pub(super) fn pair_grid(u: &dyn ScalarField, pair: &BesselPair, case: &Case, ctx: &Context) -> Result<QuadratureGrid> {
    let s = u.support();
    let grid = grid_for(case.n, case.grid, s, u.symmetry(), pair.radius)?;
    validate_pair(pair, &RadialRange::new(s.lo, s.hi)?, ctx)?;
    Ok(grid)
}

/// Both Hardy identities for one pair:
/// ∫V|∇u|² - ∫Wu²ψ = ∫V|∇(u/f)|²f² and ∫Vψu_ρ² - ∫Wu²ψ = ∫Vψ((u/f)_ρ)²f².
fn hardy_pair(u: &Field, pair: &BesselPair, case: &Case, ctx: &Context, out: &mut Outcome) -> Result<Integrals> {
    require_q(case.q, 4)?;
    if pair.dim != case.q {
        return Err(Error::InvalidArgument(format!("{} is {}-dimensional, need Q = {}", pair.label(), pair.dim, case.q)));
    }
    let s = u.support();
    audit(s, case.q, origin_power(&pair.v) - 2.0, true, "∫V|∇u|²")?;
    audit(s, case.q, origin_power(&pair.w), false, "∫Wu²ψ")?;
    let grid = pair_grid(u.as_ref(), pair, case, ctx)?;
    let uf = compose_with_radial_profile(u.clone(), pair.f.clone(), true);
    let ints = Integrals::compute(&grid, &["grad", "radial", "potential", "remainder", "radial remainder"], |p, rho, psi, o| {
        let j = u.jet(p, Order::Gradient)?;
        let q = uf.jet(p, Order::Gradient)?;
        let v = pair.v.value(rho);
        let w = pair.w.value(rho);
        let f = pair.f.value(rho);
        let ur = radial_derivative_value(&j, p, rho);
        let qr = radial_derivative_value(&q, p, rho);
        o[0] = v * grad_g_norm2(&j, p);
        o[1] = v * psi * ur * ur;
        o[2] = w * j.v * j.v * psi;
        o[3] = v * grad_g_norm2(&q, p) * f * f;
        o[4] = v * psi * qr * qr * f * f;
        Ok(())
    })?;
    let tol = ctx.tol.identity;
    let refine = ctx.refine_floor();
    ints.identity(out, "∫V|∇u|² - ∫Wu²ψ = ∫V|∇(u/f)|²f²", &[0, 2, 3], |v| v[0] - v[2], |v| v[3], tol, refine);
    ints.identity(out, "∫Vψu_ρ² - ∫Wu²ψ = ∫Vψ((u/f)_ρ)²f²", &[1, 2, 4], |v| v[1] - v[2], |v| v[4], tol, refine);
    out.terms.extend(ints.terms());
    Ok(ints)
}

pub struct HardyIdentity;

impl Check for HardyIdentity {
    fn name(&self) -> &'static str {
        "hardy_identity"
    }

    fn description(&self) -> &'static str {
        "Hardy identities with Bessel-pair remainder, full and radial gradient"
    }

    fn cases(&self, plan: &SuitePlan) -> Result<Vec<Case>> {
        let mut cases = Vec::new();
        for (n, spec, u) in plan_fields(plan)? {
            for p in &plan.pairs {
                let pair = p.build(n + 2)?;
                if pair.dim != n + 2 || u.support().hi >= pair.radius {
                    continue;
                }
                cases.push(Case::new(n, plan.grid).field(&spec).pair(p.clone()));
            }
        }
        Ok(cases)
    }

    fn run(&self, case: &Case, ctx: &Context) -> Result<Outcome> {
        let u = case.build_field()?;
        let pair = case.build_pair()?;
        let mut out = Outcome::default();
        hardy_pair(&u, &pair, case, ctx, &mut out)?;
        Ok(out)
    }
}

pub struct SubspaceHardy;

/// (j+1)(Q+j-1), which equals 4λ_{j+1}.
pub fn subspace_constant(q: usize, j: i64) -> f64 {
    (j + 1) as f64 * (q as f64 + j as f64 - 1.0)
}

impl Check for SubspaceHardy {
    fn name(&self) -> &'static str {
        "subspace_hardy"
    }

    fn description(&self) -> &'static str {
        "Hardy inequality with the enhanced constant (j+1)(Q+j-1) on fields orthogonal to harmonics of order <= j"
    }

    fn cases(&self, plan: &SuitePlan) -> Result<Vec<Case>> {
        let mut cases = Vec::new();
        for (n, spec, u) in plan_fields(plan)? {
            for p in &plan.pairs {
                let pair = p.build(n + 2)?;
                if pair.dim != n + 2 || u.support().hi >= pair.radius {
                    continue;
                }
                for &j in &plan.subspace_j {
                    cases.push(Case::new(n, plan.grid).field(&spec).pair(p.clone()).with("j", j as f64));
                }
            }
        }
        Ok(cases)
    }

    fn run(&self, case: &Case, ctx: &Context) -> Result<Outcome> {
        require_q(case.q, 4)?;
        let u = case.build_field()?;
        let pair = case.build_pair()?;
        let j = case.get("j")? as i64;
        if j < -1 {
            return Err(Error::InvalidArgument(format!("subspace index j = {j} below -1")));
        }
        if pair.dim != case.q {
            return Err(Error::InvalidArgument(format!("{} is not {}-dimensional", pair.label(), case.q)));
        }
        let s = u.support();
        audit(s, case.q, origin_power(&pair.v) - 2.0, true, "∫V|∇u|²")?;
        audit(s, case.q, origin_power(&pair.w), false, "∫Wu²ψ")?;
        audit(s, case.q, origin_power(&pair.v) - 2.0, false, "∫Vu²ψ/ρ²")?;
        let grid = pair_grid(u.as_ref(), &pair, case, ctx)?;
        let mut out = Outcome::default();

        let spectrum = Spectrum::compute(u.as_ref(), &grid, ctx.max_k)?;
        let low = spectrum.low_order_fraction(j);
        out.note(format!("relative L2 mass in orders <= {j}: {low:e}; spectral tail {:e}", spectrum.tail()));
        if low > 1e-10 {
            return Err(Error::Hypothesis(format!("field has harmonic content of order <= {j} ({low:e})")));
        }

        let c = subspace_constant(case.q, j);
        let hardy = (case.q as f64 - 2.0).powi(2) / 4.0;
        let uf = compose_with_radial_profile(u.clone(), pair.f.clone(), true);
        let ints = Integrals::compute(
            &grid,
            &["grad", "potential", "hardy weight", "radial remainder", "plain grad", "plain hardy weight"],
            |p, rho, psi, o| {
                let jet = u.jet(p, Order::Gradient)?;
                let qj = uf.jet(p, Order::Gradient)?;
                let v = pair.v.value(rho);
                let f = pair.f.value(rho);
                let qr = radial_derivative_value(&qj, p, rho);
                let g2 = grad_g_norm2(&jet, p);
                let u2 = jet.v * jet.v * psi / (rho * rho);
                o[0] = v * g2;
                o[1] = pair.w.value(rho) * jet.v * jet.v * psi;
                o[2] = v * u2;
                o[3] = v * psi * qr * qr * f * f;
                o[4] = g2;
                o[5] = u2;
                Ok(())
            },
        )?;
        let tol = ctx.tol.inequality;
        ints.inequality(&mut out, "∫V|∇u|² >= ∫Wu²ψ + c_j∫Vu²ψ/ρ² + ∫Vψ((u/f)_ρ)²f²", &[0, 1, 2, 3], |v| v[0], |v| v[1] + c * v[2] + v[3], tol);
        ints.inequality(&mut out, "∫|∇u|² >= ((Q-2)²/4 + c_j)∫u²ψ/ρ²", &[4, 5], |v| v[4], |v| (hardy + c) * v[5], tol);

        // Slack mode by mode: ½Σ(4λ_k - c_j)∫V d_k² ρ^{n-1}.
        if spectrum.tail() <= ctx.tol.tail {
            let n = case.n as i32;
            let spectral = spectrum.sum(|h, r, d, _| (4.0 * h.eigenvalue() - c) * pair.v.value(r) * d * d * r.powi(n - 1));
            let v = &ints.fine;
            let slack = v[0] - v[1] - c * v[2] - v[3];
            let scale = [v[0], v[1], c * v[2], v[3]].iter().map(|x| x.abs()).fold(0.0, f64::max);
            out.push(Relation::identity("slack = ½Σ(4λ_k - c_j)∫Vd_k²ρ^{n-1}", slack, spectral, scale, ctx.tol.identity));
        } else {
            out.note("spectral slack comparison skipped: field is not a finite harmonic sum within the truncation");
        }
        out.terms.extend(ints.terms());
        Ok(out)
    }
}

pub struct WeightedHardy;

impl Check for WeightedHardy {
    fn name(&self) -> &'static str {
        "weighted_hardy"
    }

    fn description(&self) -> &'static str {
        "Weighted Hardy identities for the pair (ρ^-α, (Q-2-α)²/4 ρ^(-α-2))"
    }

    fn cases(&self, plan: &SuitePlan) -> Result<Vec<Case>> {
        let mut cases = Vec::new();
        for (n, spec, _) in plan_fields(plan)? {
            let mut alphas = plan.alphas.clone();
            if plan.alpha_critical && !alphas.contains(&(n as f64)) {
                alphas.push(n as f64);
            }
            for a in alphas {
                let p = PairSpec { alpha: Some(a), ..PairSpec::named("weighted-power") };
                cases.push(Case::new(n, plan.grid).field(&spec).pair(p).with("alpha", a));
            }
        }
        Ok(cases)
    }

    fn run(&self, case: &Case, ctx: &Context) -> Result<Outcome> {
        let u = case.build_field()?;
        let alpha = case.get("alpha")?;
        let pair = case.build_pair()?;
        let mut out = Outcome::default();
        let ints = hardy_pair(&u, &pair, case, ctx, &mut out)?;

        // The remainder as displayed: ∫ρ^{2-Q}|∇(u ρ^{(Q-2-α)/2})|².
        let q = case.q as f64;
        let grid = pair_grid(u.as_ref(), &pair, case, ctx)?;
        let g = compose_with_radial_profile(u.clone(), power(1.0, (q - 2.0 - alpha) / 2.0), false);
        let disp = Integrals::compute(&grid, &["displayed remainder"], |p, rho, _, o| {
            o[0] = rho.powf(2.0 - q) * grad_g_norm2(&g.jet(p, Order::Gradient)?, p);
            Ok(())
        })?;
        let (lhs, scale) = (ints.fine[0] - ints.fine[2], ints.fine[0].abs().max(ints.fine[2].abs()));
        out.push(Relation::identity("∫ρ^-α|∇u|² - c_α∫ρ^(-α-2)u²ψ = ∫ρ^(2-Q)|∇(uρ^((Q-2-α)/2))|²", lhs, disp.fine[0], scale.max(disp.fine[0].abs()), ctx.tol.identity));
        if alpha == q - 2.0 {
            out.note("critical exponent: the potential term vanishes");
        }
        out.terms.extend(disp.terms());
        Ok(out)
    }
}

pub struct BvHardy;

impl Check for BvHardy {
    fn name(&self) -> &'static str {
        "bv_hardy"
    }

    fn description(&self) -> &'static str {
        "Hardy identity on a gauge ball with the J0 remainder z0²/R²"
    }

    fn cases(&self, plan: &SuitePlan) -> Result<Vec<Case>> {
        let mut cases = Vec::new();
        for (n, spec, u) in plan_fields(plan)? {
            for &r in &plan.radii {
                if u.support().hi < r {
                    let p = PairSpec { radius: Some(r), ..PairSpec::named("brezis-vazquez") };
                    cases.push(Case::new(n, plan.grid).field(&spec).pair(p));
                }
            }
        }
        Ok(cases)
    }

    fn run(&self, case: &Case, ctx: &Context) -> Result<Outcome> {
        let u = case.build_field()?;
        let pair = case.build_pair()?;
        if u.support().hi >= pair.radius {
            return Err(Error::InvalidArgument(format!("field support {} leaves the ball of radius {}", u.support().hi, pair.radius)));
        }
        let mut out = Outcome::default();
        let ints = hardy_pair(&u, &pair, case, ctx, &mut out)?;
        ints.inequality(&mut out, "∫|∇u|² >= ∫((Q-2)²/(4ρ²) + z0²/R²)u²ψ", &[0, 2], |v| v[0], |v| v[2], ctx.tol.inequality);
        Ok(out)
    }
}
