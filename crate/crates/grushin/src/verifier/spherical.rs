//! Splitting of 𝓛_G into its radial part and the spherical fields L_j:
//! the five-term Rellich identity, its spectral form, and the pointwise
//! and by-parts identities for L_j.

use super::hardy::plan_fields;
use super::rellich::lhs_guard;
use super::spectral::Spectrum;
use super::terms::{audit, grid_for, require_q, Integrals};
use super::{Case, Check, Context, Outcome, Relation, SuitePlan};
use crate::error::Result;
use crate::fields::ops::{lap_g, lap_rho_g, radial_derivative_jet, radial_derivative_value, spherical_field_jet};
use crate::fields::{catalog, Field, Polynomial, ScalarField, Support, Symmetry};
use crate::geometry::{gauge, gauge_jet, sample_points, Point};
use crate::jet::{Jet, Order};

/// Σ_j L_j(L_j u), composing the first-order fields.
fn sum_lj_lj(u: &Jet, p: &Point) -> Result<f64> {
    let mut s = 0.0;
    for j in 0..=p.n() {
        s += spherical_field_jet(&spherical_field_jet(u, p, j)?, p, j)?.v;
    }
    Ok(s)
}

fn spherical_grid(case: &Case, u: &dyn ScalarField) -> Result<crate::quadrature::QuadratureGrid> {
    require_q(case.q, 4)?;
    lhs_guard(u, case.n)?;
    audit(u.support(), case.q, -4.0, true, "∫(𝓛u)²/ψ")?;
    grid_for(case.n, case.grid, u.support(), u.symmetry(), f64::INFINITY)
}

/// [∫(𝓛u)²/ψ, ∫(𝓛_ρu)²/ψ, ∫(ΣL_j²u)²/ψ, Σ∫|L_ju|²/ρ², Σ∫(∂_ρL_ju + (Q-2)L_ju/(2ρ))²].
fn five_terms(u: &Field, case: &Case) -> Result<Integrals> {
    let grid = spherical_grid(case, u.as_ref())?;
    let q = case.q as f64;
    Integrals::compute(&grid, &["L", "A", "B", "C", "E"], |p, rho, psi, o| {
        let j = u.jet(p, Order::Hessian)?;
        let lu = lap_g(&j, p)?;
        let lr = lap_rho_g(&j, p)?;
        let ls = sum_lj_lj(&j, p)?;
        let (mut c, mut e) = (0.0, 0.0);
        for k in 0..=case.n {
            let lk = spherical_field_jet(&j, p, k)?;
            c += lk.v * lk.v / (rho * rho);
            let t = radial_derivative_value(&lk, p, rho) + (q - 2.0) * lk.v / (2.0 * rho);
            e += t * t;
        }
        o[0] = lu * lu / psi;
        o[1] = lr * lr / psi;
        o[2] = ls * ls / psi;
        o[3] = c;
        o[4] = e;
        Ok(())
    })
}

pub struct SphericalRellich;

impl Check for SphericalRellich {
    fn name(&self) -> &'static str {
        "spherical_rellich"
    }

    fn description(&self) -> &'static str {
        "Rellich identity splitting 𝓛_G into the radial part and the spherical fields L_j"
    }

    fn cases(&self, plan: &SuitePlan) -> Result<Vec<Case>> {
        Ok(plan_fields(plan)?.into_iter().map(|(n, spec, _)| Case::new(n, plan.grid).field(&spec)).collect())
    }

    fn run(&self, case: &Case, ctx: &Context) -> Result<Outcome> {
        let u = case.build_field()?;
        let ints = five_terms(&u, case)?;
        let q = case.q as f64;
        let mut out = Outcome::default();
        ints.identity(
            &mut out,
            "∫(𝓛u)²/ψ = ∫(𝓛_ρu)²/ψ + ∫(ΣL_j²u)²/ψ + Q(Q-4)/2Σ∫|L_ju|²/ρ² + 2Σ∫(∂_ρL_ju + (Q-2)L_ju/(2ρ))²",
            &[0, 1, 2, 3, 4],
            |v| v[0],
            |v| v[1] + v[2] + q * (q - 4.0) / 2.0 * v[3] + 2.0 * v[4],
            ctx.tol.identity,
            ctx.refine_floor(),
        );
        out.terms.extend(ints.terms());
        Ok(out)
    }
}

pub struct ProjectionDeficit;

impl Check for ProjectionDeficit {
    fn name(&self) -> &'static str {
        "projection_deficit"
    }

    fn description(&self) -> &'static str {
        "Deficit of the radial Rellich term as spectral sums over harmonic projections"
    }

    fn cases(&self, plan: &SuitePlan) -> Result<Vec<Case>> {
        // Only fields with an exact finite harmonic expansion.
        Ok(plan_fields(plan)?
            .into_iter()
            .filter(|(_, _, u)| u.modes().is_some() || u.symmetry() == Symmetry::Radial)
            .map(|(n, spec, _)| Case::new(n, plan.grid).field(&spec))
            .collect())
    }

    fn run(&self, case: &Case, ctx: &Context) -> Result<Outcome> {
        let u = case.build_field()?;
        let ints = five_terms(&u, case)?;
        let grid = grid_for(case.n, case.grid, u.support(), u.symmetry(), f64::INFINITY)?;
        let spectrum = Spectrum::compute(u.as_ref(), &grid, ctx.max_k)?;
        let mut out = Outcome::default();
        let tail = spectrum.tail();
        out.note(format!("spectral tail {tail:e} at K = {}", ctx.max_k));
        out.terms.extend(ints.terms());
        if tail > ctx.tol.tail {
            out.inconclusive = true;
            out.note(format!("tail exceeds budget {:e}; spectral sums not compared", ctx.tol.tail));
            return Ok(out);
        }
        let n = case.n as i32;
        let q = case.q as f64;
        // Σλ²a, Σλa, Σλb with a = ½∫d²ρ^{n-3}, b = ½∫d'²ρ^{n-1}.
        let l2a = spectrum.sum(|h, r, d, _| h.eigenvalue().powi(2) * d * d * r.powi(n - 3));
        let la = spectrum.sum(|h, r, d, _| h.eigenvalue() * d * d * r.powi(n - 3));
        let lb = spectrum.sum(|h, r, _, dp| h.eigenvalue() * dp * dp * r.powi(n - 1));
        let v = &ints.fine;
        let tol = ctx.tol.identity;
        // Every term scales like ∫(𝓛u)²/ψ; for radial u the spherical terms are rounding noise.
        let energy = v[0].abs();
        let deficit = 16.0 * l2a + 8.0 * lb + 8.0 * (q - 4.0) * la;
        out.push(Relation::identity(
            "∫(𝓛u)²/ψ - ∫(𝓛_ρu)²/ψ = 16Σλ²a + 8Σλb + 8(Q-4)Σλa",
            v[0] - v[1],
            deficit,
            energy.max(v[1].abs()).max(deficit.abs()),
            tol,
        ));
        out.push(Relation::identity("∫(ΣL_j²u)²/ψ = 16Σλ²a", v[2], 16.0 * l2a, energy.max(v[2].abs()).max(16.0 * l2a), tol));
        out.push(Relation::identity("Σ∫|L_ju|²/ρ² = 4Σλa", v[3], 4.0 * la, energy.max(v[3].abs()).max(4.0 * la), tol));
        let d = 4.0 * lb - (q - 4.0).powi(2) * la;
        let scale = energy.max(v[4].abs()).max(4.0 * lb).max((q - 4.0).powi(2) * la);
        out.push(Relation::identity("Σ∫(∂_ρL_ju + (Q-2)L_ju/(2ρ))² = 4Σλb - (Q-4)²Σλa", v[4], d, scale, tol));
        Ok(out)
    }
}

pub struct VectorFieldIdentities;

fn max_rel(worst: &mut f64, a: f64, b: f64, scale: f64) {
    let s = scale.max(a.abs()).max(b.abs());
    if s > 0.0 {
        *worst = worst.max((a - b).abs() / s);
    }
}

impl Check for VectorFieldIdentities {
    fn name(&self) -> &'static str {
        "vector_field_identities"
    }

    fn description(&self) -> &'static str {
        "Pointwise identities for L_j at seeded points and the by-parts formula with its correction term"
    }

    fn cases(&self, plan: &SuitePlan) -> Result<Vec<Case>> {
        Ok(plan.dims.iter().map(|&n| Case::new(n, plan.grid)).collect())
    }

    fn run(&self, case: &Case, ctx: &Context) -> Result<Outcome> {
        let n = case.n;
        let poly = Polynomial::random(n, 3, ctx.seed);
        let points = sample_points(n, 100, 0.3, 2.0, ctx.seed);
        let mut worst = [0.0f64; 4];
        for p in &points {
            let rho = gauge(p)?;
            let u = poly.jet(p, Order::Hessian)?;
            let ls: Vec<Jet> = (0..=n).map(|j| spherical_field_jet(&u, p, j)).collect::<Result<_>>()?;
            let r2 = p.x_norm2();
            let r = r2.sqrt();

            // Σ_{j<n} x_j|x|²L_ju + 2t|x|L_nu = 0
            let parts: Vec<f64> = (0..n).map(|j| p.x()[j] * r2 * ls[j].v).chain([2.0 * p.t * r * ls[n].v]).collect();
            let s: f64 = parts.iter().sum();
            let scale: f64 = parts.iter().map(|x| x.abs()).sum::<f64>() + r2 * r * u.g.iter().map(|x| x.abs()).sum::<f64>();
            if scale > 0.0 {
                worst[0] = worst[0].max(s.abs() / scale);
            }

            // L_j u_ρ = ∂_ρ L_j u + L_j u/ρ
            let ur = radial_derivative_jet(&u, p)?;
            for j in 0..=n {
                let a = spherical_field_jet(&ur, p, j)?.v;
                let b = radial_derivative_value(&ls[j], p, rho) + ls[j].v / rho;
                max_rel(&mut worst[1], a, b, 0.0);
            }

            // 𝓛_G u = 𝓛_{ρ,G} u + Σ L_j(L_j u)
            let a = lap_g(&u, p)?;
            let (lr, sl) = (lap_rho_g(&u, p)?, sum_lj_lj(&u, p)?);
            max_rel(&mut worst[2], a, lr + sl, lr.abs() + sl.abs());

            // L_j(ρ³u) = ρ³ L_j u
            let r3u = gauge_jet(p)?.powi(3) * u;
            for j in 0..=n {
                let a = spherical_field_jet(&r3u, p, j)?.v;
                max_rel(&mut worst[3], a, rho.powi(3) * ls[j].v, 0.0);
            }
        }
        let mut out = Outcome::default();
        let labels = [
            "Σx_j|x|²L_ju + 2t|x|L_nu = 0",
            "L_j u_ρ = ∂_ρL_ju + L_ju/ρ",
            "𝓛_G u = 𝓛_{ρ,G}u + ΣL_j(L_ju)",
            "L_j(ρ³u) = ρ³L_ju",
        ];
        for (l, w) in labels.iter().zip(worst) {
            out.push(Relation::identity(format!("max over 100 points: {l}"), w, 0.0, 1.0, ctx.tol.pointwise));
        }

        // ∫g L_j f = -∫(L_j g) f + (Q-1)∫g c_j f with c_j = X_j(ρ)/ρ.
        let (g, f, js): (Field, Field, Vec<usize>) = if n <= 3 {
            (catalog::build("bump-poly", n)?, catalog::build("bump-two-mode", n)?, (0..=n).collect())
        } else {
            // The zonal rule only resolves the t-direction field; g even and f odd in t.
            (catalog::build("bump-radial", n)?, catalog::build("bump-k2-zonal", n)?, vec![n])
        };
        let symmetry = g.symmetry().max(f.symmetry());
        let support = Support::annular(catalog::BUMP.0, catalog::BUMP.1);
        let grid = grid_for(n, case.grid, support, symmetry, f64::INFINITY)?;
        let q = case.q as f64;
        let labels: Vec<String> = js.iter().flat_map(|j| ["gLf", "Lg f", "g c f"].map(|s| format!("{s} j={j}"))).collect();
        let label_refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        let ints = Integrals::compute(&grid, &label_refs, |p, rho, _, o| {
            let gj = g.jet(p, Order::Gradient)?;
            let fj = f.jet(p, Order::Gradient)?;
            let r2 = p.x_norm2();
            for (i, &j) in js.iter().enumerate() {
                let c = if j < n { p.x()[j] * r2 } else { 2.0 * p.t * r2.sqrt() } / rho.powi(4);
                o[3 * i] = gj.v * spherical_field_jet(&fj, p, j)?.v;
                o[3 * i + 1] = spherical_field_jet(&gj, p, j)?.v * fj.v;
                o[3 * i + 2] = gj.v * c * fj.v;
            }
            Ok(())
        })?;
        for (i, &j) in js.iter().enumerate() {
            let k = 3 * i;
            ints.identity(
                &mut out,
                &format!("∫gL_jf = -∫(L_jg)f + (Q-1)∫g c_j f, j={j}"),
                &[k, k + 1, k + 2],
                |v| v[k],
                |v| -v[k + 1] + (q - 1.0) * v[k + 2],
                ctx.tol.by_parts,
                None,
            );
        }
        out.terms.extend(ints.terms());
        Ok(out)
    }
}
