//! Grids, integrability audits and term integration shared by the checks.

use super::{Context, Outcome, Relation, Term};
use crate::bessel::{log_nodes, ode_residual, BesselPair};
use crate::error::{Error, Result};
use crate::fields::profile::Profile;
use crate::fields::{Support, Symmetry};
use crate::geometry::{gauge, Point};
use crate::quadrature::{GridSpec, QuadratureGrid, RadialRange, SphereMode};

pub fn require_q(q: usize, min: usize) -> Result<()> {
    if q < min {
        return Err(Error::DimensionTooSmall { q, min });
    }
    Ok(())
}

pub fn sphere_mode(n: usize, symmetry: Symmetry) -> Result<SphereMode> {
    match symmetry {
        Symmetry::Radial | Symmetry::Zonal => Ok(SphereMode::Zonal),
        Symmetry::General if n <= 3 => Ok(SphereMode::Full),
        Symmetry::General => Err(Error::Capability(format!("no angular rule for non-zonal fields with n = {n}"))),
    }
}

/// Grid covering the radial support of a field, which must lie inside (0, outer).
pub fn grid_for(n: usize, spec: GridSpec, support: Support, symmetry: Symmetry, outer: f64) -> Result<QuadratureGrid> {
    if !support.hi.is_finite() {
        return Err(Error::Support("field support is unbounded".into()));
    }
    if support.hi > outer {
        return Err(Error::InvalidArgument(format!("field support reaches {} beyond radius {outer}", support.hi)));
    }
    QuadratureGrid::new(n, spec, RadialRange::new(support.lo, support.hi)?, sphere_mode(n, symmetry)?)
}

/// Power s with p(r) ~ r^s as r → 0, read off two small radii.
pub fn origin_power(p: &Profile) -> f64 {
    let (a, b) = (p.value(1e-6).abs(), p.value(1e-5).abs());
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    (a.ln() - b.ln()) / (1e-6f64.ln() - 1e-5f64.ln())
}

/// Integrability at the origin of a term whose weight behaves like ρ^singular:
/// requires Q + singular + 2·order > 0, with order ≥ 1 for derivative terms.
pub fn audit(support: Support, q: usize, singular: f64, derivative: bool, what: &str) -> Result<()> {
    if support.lo > 0.0 {
        return Ok(());
    }
    let order = if derivative { support.origin_order.max(1.0) } else { support.origin_order };
    if q as f64 + singular + 2.0 * order <= 0.0 {
        return Err(Error::Hypothesis(format!(
            "{what} diverges at the origin: Q + {singular} + 2*{order} <= 0"
        )));
    }
    Ok(())
}

/// The pair must solve its ODE on the radial range of the grid.
pub fn validate_pair(pair: &BesselPair, range: &RadialRange, ctx: &Context) -> Result<()> {
    let lo = if range.lo > 0.0 { range.lo } else { range.hi * 1e-3 };
    let hi = range.hi.min(pair.radius * (1.0 - 1e-9));
    let r = ode_residual(pair, &log_nodes(lo, hi, 50))?;
    if r > ctx.tol.pair_residual {
        return Err(Error::NotBesselPair(format!("{}: ODE residual {r:e}", pair.label())));
    }
    Ok(())
}

/// Fine and half-resolution values of a set of volume integrals.
#[derive(Debug, Clone)]
pub struct Integrals {
    pub labels: Vec<String>,
    pub fine: Vec<f64>,
    pub coarse: Vec<f64>,
}

impl Integrals {
    /// `f(p, ρ, ψ, out)` fills one integrand value per label.
    pub fn compute<F>(grid: &QuadratureGrid, labels: &[&str], f: F) -> Result<Integrals>
    where
        F: Fn(&Point, f64, f64, &mut [f64]) -> Result<()> + Sync,
    {
        let g = |p: &Point, out: &mut [f64]| -> Result<()> {
            let rho = gauge(p)?;
            let psi = p.x_norm2() / (rho * rho);
            f(p, rho, psi, out)
        };
        let fine = grid.integrate_volume(labels.len(), g)?;
        let coarse = grid.with_spec(grid.spec.coarsen())?.integrate_volume(labels.len(), g)?;
        if let Some(i) = fine.iter().chain(&coarse).position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("integral {} is not finite", labels[i % labels.len()])));
        }
        Ok(Integrals { labels: labels.iter().map(|s| s.to_string()).collect(), fine, coarse })
    }

    pub fn terms(&self) -> Vec<Term> {
        self.labels
            .iter()
            .zip(self.fine.iter().zip(&self.coarse))
            .map(|(l, (f, c))| Term { label: l.clone(), value: *f, error: (f - c).abs() })
            .collect()
    }

    /// Identity lhs(values) = rhs(values) at the fine grid, plus a refinement
    /// relation comparing with the half-resolution residual when `refine` is set.
    #[allow(clippy::too_many_arguments)]
    pub fn identity(
        &self,
        out: &mut Outcome,
        label: &str,
        involved: &[usize],
        lhs: impl Fn(&[f64]) -> f64,
        rhs: impl Fn(&[f64]) -> f64,
        tol: f64,
        refine: Option<f64>,
    ) {
        let scale = |v: &[f64]| involved.iter().map(|&i| v[i].abs()).fold(0.0, f64::max);
        let fine = Relation::identity(label, lhs(&self.fine), rhs(&self.fine), scale(&self.fine), tol);
        if let Some(floor) = refine {
            let coarse = Relation::identity(label, lhs(&self.coarse), rhs(&self.coarse), scale(&self.coarse), tol);
            out.push(Relation::convergence(format!("refinement: {label}"), coarse.residual, fine.residual, floor));
        }
        out.push(fine);
    }

    pub fn inequality(
        &self,
        out: &mut Outcome,
        label: &str,
        involved: &[usize],
        lhs: impl Fn(&[f64]) -> f64,
        rhs: impl Fn(&[f64]) -> f64,
        tol: f64,
    ) {
        let scale = involved.iter().map(|&i| self.fine[i].abs()).fold(0.0, f64::max);
        out.push(Relation::inequality(label, lhs(&self.fine), rhs(&self.fine), scale, tol));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::profile;

    #[test]
    fn origin_powers_of_simple_profiles() {
        assert!((origin_power(&profile::power(3.0, -2.0)) + 2.0).abs() < 1e-9);
        assert!(origin_power(&profile::constant(1.0)).abs() < 1e-12);
        assert_eq!(origin_power(&profile::constant(0.0)), 0.0);
    }

    #[test]
    fn audit_rejects_divergent_weights() {
        let s = Support::decaying(5.0, 0.0);
        assert!(audit(s, 4, -2.0, false, "x").is_ok());
        assert!(matches!(audit(s, 4, -4.0, false, "x"), Err(Error::Hypothesis(_))));
        assert!(audit(s, 4, -4.0, true, "x").is_ok());
        assert!(audit(Support::annular(0.5, 2.0), 4, -40.0, false, "x").is_ok());
    }

    #[test]
    fn coarse_values_recover_the_half_grid() {
        let grid = QuadratureGrid::new(2, GridSpec::default(), RadialRange::new(0.5, 2.0).unwrap(), SphereMode::Zonal).unwrap();
        let ints = Integrals::compute(&grid, &["one"], |_, _, _, out| {
            out[0] = 1.0;
            Ok(())
        })
        .unwrap();
        let half = grid.with_spec(grid.spec.coarsen()).unwrap().integrate_volume(1, |_, o| {
            o[0] = 1.0;
            Ok(())
        });
        assert!((ints.coarse[0] - half.unwrap()[0]).abs() < 1e-12 * ints.fine[0]);
    }
}
