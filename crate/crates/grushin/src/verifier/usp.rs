//! Second-order uncertainty principles: extremizer families, Gamma closed
//! forms and sharp constants of the product quotient
//! (∫(𝓛u)²/ψ)(∫ρ^{-2b}|∇u|²) / (∫ρ^{-b-1}|∇u|²)².

use super::terms::require_q;
use super::{Case, Check, Context, Outcome, Relation, SuitePlan};
use crate::bessel::gamma;
use crate::error::{Error, Result};
use crate::fields::ops::{grad_g_norm2, lap_g};
use crate::fields::profile::{ckn_extremizer, gaussian, hydrogen, Profile};
use crate::fields::{catalog, DilatedField, Field, RadialField, ScalarField, Support};
use crate::geometry::{gauge, omega_measure};
use crate::jet::Order;
use crate::quadrature::{GridSpec, QuadratureGrid, RadialRange, SphereMode};
use std::sync::Arc;

pub const FAMILIES: &[&str] = &["heisenberg", "hydrogen", "ckn"];

/// A family of radial extremizers, each a reparametrized CKN extremizer.
pub trait UspFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn b(&self) -> f64;
    fn profile(&self, q: usize, alpha: f64, beta: f64) -> Profile;
    /// (α, β) of the CKN extremizer equal to `profile(q, alpha, beta)`.
    fn ckn_params(&self, alpha: f64, beta: f64) -> (f64, f64);
}

struct Heisenberg;
impl UspFamily for Heisenberg {
    fn name(&self) -> &'static str {
        "heisenberg"
    }
    fn b(&self) -> f64 {
        -1.0
    }
    fn profile(&self, _q: usize, alpha: f64, beta: f64) -> Profile {
        gaussian(beta).scale(alpha)
    }
    fn ckn_params(&self, alpha: f64, beta: f64) -> (f64, f64) {
        (2.0 * alpha * beta, 2.0 * beta)
    }
}

struct Hydrogen;
impl UspFamily for Hydrogen {
    fn name(&self) -> &'static str {
        "hydrogen"
    }
    fn b(&self) -> f64 {
        0.0
    }
    fn profile(&self, _q: usize, alpha: f64, beta: f64) -> Profile {
        hydrogen(beta).scale(alpha)
    }
    fn ckn_params(&self, alpha: f64, beta: f64) -> (f64, f64) {
        (alpha * beta * beta, beta)
    }
}

struct Ckn {
    b: f64,
}
impl UspFamily for Ckn {
    fn name(&self) -> &'static str {
        "ckn"
    }
    fn b(&self) -> f64 {
        self.b
    }
    fn profile(&self, q: usize, alpha: f64, beta: f64) -> Profile {
        ckn_extremizer(q, self.b, alpha, beta)
    }
    fn ckn_params(&self, alpha: f64, beta: f64) -> (f64, f64) {
        (alpha, beta)
    }
}

/// Look up a family; `b` is required for `ckn` and ignored otherwise.
pub fn usp_family(name: &str, b: Option<f64>) -> Result<Box<dyn UspFamily>> {
    match name {
        "heisenberg" => Ok(Box::new(Heisenberg)),
        "hydrogen" => Ok(Box::new(Hydrogen)),
        "ckn" => {
            let b = b.ok_or_else(|| Error::InvalidArgument("family ckn needs b".into()))?;
            sharp_constant(5, b)?;
            Ok(Box::new(Ckn { b }))
        }
        _ => Err(Error::InvalidArgument(format!("unknown uncertainty family {name}; known: {}", FAMILIES.join(", ")))),
    }
}

/// (Q+1-b)/2 for b < 1 and (Q+b-1)/2 for b > 1.
pub fn sharp_constant(q: usize, b: f64) -> Result<f64> {
    let q = q as f64;
    if !b.is_finite() || b == 1.0 {
        return Err(Error::InvalidArgument(format!("no sharp constant for b = {b}")));
    }
    Ok(if b < 1.0 { (q + 1.0 - b) / 2.0 } else { (q + b - 1.0) / 2.0 })
}

/// [A, B, C] for the CKN extremizer with parameters (α, β).
pub fn closed_forms(q: usize, b: f64, alpha: f64, beta: f64) -> Result<[f64; 3]> {
    sharp_constant(q, b)?;
    let qf = q as f64;
    let k = 0.5 * omega_measure(q - 2) * alpha * alpha;
    if b < 1.0 {
        let d = 1.0 - b;
        let m = qf / d;
        let s = d / (2.0 * beta);
        let c = k / d * s.powf(m + 1.0) * gamma(m + 1.0);
        let bb = k / d * s.powf(m + 2.0) * gamma(m + 2.0);
        let a = k / d * s.powf(m) * gamma(m) * (qf / 4.0) * (qf + d);
        Ok([a, bb, c])
    } else {
        let d = b - 1.0;
        let q2 = (qf + b - 1.0) / d;
        let q1 = q2 + 1.0;
        let s = 2.0 * beta / d;
        let c = k / d * s.powf(-q2) * gamma(q2);
        let bb = k / d * s.powf(-q1) * gamma(q1);
        Ok([beta * beta * bb, bb, c])
    }
}

/// Radial range carrying all but a negligible part of the extremizer integrals.
pub fn extremal_range(_q: usize, b: f64, beta: f64) -> (f64, f64) {
    if b < 1.0 {
        let d = 1.0 - b;
        let hi = (80.0 * d / beta).powf(1.0 / d);
        (hi * 1e-7, hi)
    } else {
        let d = b - 1.0;
        ((beta / (80.0 * d)).powf(1.0 / d), 1e4 * (beta / d).powf(1.0 / d))
    }
}

/// [A, B, C] of a field by volume quadrature on `range`.
pub fn usp_integrals(u: &dyn ScalarField, b: f64, spec: GridSpec, range: RadialRange) -> Result<[f64; 3]> {
    let grid = QuadratureGrid::new(u.n(), spec, range, SphereMode::Zonal)?;
    let v = grid.integrate_volume(3, |p, o| {
        let rho = gauge(p)?;
        let psi = p.x_norm2() / (rho * rho);
        let j = u.jet(p, Order::Hessian)?;
        let l = lap_g(&j, p)?;
        let g2 = grad_g_norm2(&j, p);
        o[0] = l * l / psi;
        o[1] = rho.powf(-2.0 * b) * g2;
        o[2] = rho.powf(-b - 1.0) * g2;
        Ok(())
    })?;
    Ok([v[0], v[1], v[2]])
}

/// √(AB)/C, to be compared with the sharp constant.
pub fn quotient(v: [f64; 3]) -> f64 {
    (v[0] * v[1]).sqrt() / v[2]
}

/// Measured [A, B, C] for the family extremizer with α = 1 at β.
pub fn measure(n: usize, family: &dyn UspFamily, beta: f64, spec: GridSpec, dilation: Option<f64>) -> Result<[f64; 3]> {
    let q = n + 2;
    let (_, beta_c) = family.ckn_params(1.0, beta);
    let (lo, hi) = extremal_range(q, family.b(), beta_c);
    let mut u: Field = Arc::new(RadialField::new(n, family.profile(q, 1.0, beta), Support::annular(lo, hi)));
    let mut range = RadialRange::new(lo, hi)?;
    if let Some(lambda) = dilation {
        u = Arc::new(DilatedField { inner: u, lambda });
        range = RadialRange::new(lo / lambda, hi / lambda)?;
    }
    let spec = GridSpec { panels: spec.panels * 3, ..spec };
    usp_integrals(u.as_ref(), family.b(), spec, range)
}

pub struct UncertaintyCheck;

impl Check for UncertaintyCheck {
    fn name(&self) -> &'static str {
        "uncertainty"
    }

    fn description(&self) -> &'static str {
        "Second-order Heisenberg, Hydrogen and CKN uncertainty principles with their extremizers"
    }

    fn cases(&self, plan: &SuitePlan) -> Result<Vec<Case>> {
        let u = &plan.usp;
        let mut cases = Vec::new();
        for &n in &u.n {
            for fam in &u.families {
                let bs: Vec<Option<f64>> = if fam == "ckn" { u.b.iter().map(|b| Some(*b)).collect() } else { vec![None] };
                for b in bs {
                    let b = usp_family(fam, b)?.b();
                    for &beta in &u.beta {
                        let mut c = Case::new(n, plan.grid).family(fam).with("b", b).with("beta", beta);
                        for (i, l) in u.dilations.iter().enumerate() {
                            c = c.with(&format!("lambda{}", i + 1), *l);
                        }
                        cases.push(c);
                    }
                }
            }
        }
        Ok(cases)
    }

    fn run(&self, case: &Case, ctx: &Context) -> Result<Outcome> {
        require_q(case.q, 5)?;
        let name = case.family.as_deref().ok_or_else(|| Error::InvalidArgument("case has no family".into()))?;
        let b = case.get("b")?;
        let beta = case.get("beta")?;
        let fam = usp_family(name, Some(b))?;
        let (q, n) = (case.q, case.n);
        let s = sharp_constant(q, b)?;
        let tol = ctx.tol.identity;
        let mut out = Outcome::default();

        let measured = measure(n, fam.as_ref(), beta, case.grid, None)?;
        let (alpha_c, beta_c) = fam.ckn_params(1.0, beta);
        let exact = closed_forms(q, b, alpha_c, beta_c)?;
        for (i, l) in ["∫(𝓛u)²/ψ", "∫ρ^(-2b)|∇u|²", "∫ρ^(-b-1)|∇u|²"].iter().enumerate() {
            out.push(Relation::identity(format!("{l} = Gamma closed form"), measured[i], exact[i], exact[i].abs(), tol));
        }
        let qm = quotient(measured);
        out.push(Relation::identity("√(AB)/C = sharp constant", qm, s, s, tol));

        // Pointwise agreement with the CKN extremizer it specializes.
        let p = fam.profile(q, 1.0, beta);
        let c = ckn_extremizer(q, b, alpha_c, beta_c);
        let (lo, hi) = extremal_range(q, b, beta_c);
        let mut worst: f64 = 0.0;
        for r in crate::bessel::log_nodes(lo.max(hi * 1e-3), hi, 40) {
            let (x, y) = (p.eval(r), c.eval(r));
            for i in 0..3 {
                let scale = x[i].abs().max(y[i].abs());
                if scale > 1e-300 {
                    worst = worst.max((x[i] - y[i]).abs() / scale);
                }
            }
        }
        out.push(Relation::identity(format!("{name} extremizer = ckn(b={b}) extremizer"), worst, 0.0, 1.0, tol));

        if beta != 1.0 {
            let reference = quotient(measure(n, fam.as_ref(), 1.0, case.grid, None)?);
            out.push(Relation::identity(format!("quotient at β={beta} = quotient at β=1"), qm, reference, reference, tol));
        }
        for (k, lambda) in case.extra.iter().filter(|(k, _)| k.starts_with("lambda")) {
            let d = quotient(measure(n, fam.as_ref(), beta, case.grid, Some(*lambda))?);
            out.push(Relation::identity(format!("quotient invariant under dilation {k}={lambda}"), d, qm, qm, tol));
        }

        // A non-extremal field sits strictly above the constant.
        let bump = catalog::build("bump-radial", n)?;
        let v = usp_integrals(bump.as_ref(), b, case.grid, RadialRange::new(catalog::BUMP.0, catalog::BUMP.1)?)?;
        out.push(Relation::inequality("bump-radial: AB >= s²C²", v[0] * v[1], s * s * v[2] * v[2], v[0] * v[1], ctx.tol.inequality));
        out.terms.extend(
            ["A", "B", "C"]
                .iter()
                .zip(measured.iter().zip(exact))
                .map(|(l, (m, e))| super::Term { label: l.to_string(), value: *m, error: (m - e).abs() }),
        );
        out.note(format!("sharp constant {s}, measured {qm}"));
        Ok(out)
    }
}
