//! Tensor-product quadrature on (ρ, φ, w) for volume and sphere integrals.
//!
//! Volume integrals use dx dt = ρ^{n+1}/(2ψ) dρ dΩ with dΩ = sin^{n/2}φ dφ dw.
//! The φ rule is Gauss-Legendre in s with φ = π(1 - cos πs)/2, which makes
//! half-integer powers of sin φ analytic in s. Sums are reduced in a fixed
//! order so results do not depend on the thread count.

use crate::error::{Error, Result};
use crate::geometry::{from_polar, sphere_measure, Direction, Point, Polar};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..(m + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if m == 1 {
                p0 = 1.0;
            }
            dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    (x, w)
}

/// Sum in a fixed binary-tree order.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        2 => v[0] + v[1],
        len => {
            let mid = len / 2;
            pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1d {
    /// Composite Gauss-Legendre with `order` nodes on each panel.
    pub fn composite(edges: &[f64], order: usize) -> Rule1d {
        let (x, w) = gauss_legendre(order);
        let mut nodes = Vec::with_capacity(order * edges.len());
        let mut weights = Vec::with_capacity(order * edges.len());
        for e in edges.windows(2) {
            let (mid, half) = ((e[0] + e[1]) / 2.0, (e[1] - e[0]) / 2.0);
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(mid + half * xi);
                weights.push(half * wi);
            }
        }
        Rule1d { nodes, weights }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).collect();
        pairwise_sum(&terms)
    }
}

/// Radial integration range: annular [lo, hi] with log-spaced panels, or
/// [0, hi] graded geometrically toward the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialRange {
    pub lo: f64,
    pub hi: f64,
}

impl RadialRange {
    pub fn new(lo: f64, hi: f64) -> Result<RadialRange> {
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::InvalidArgument(format!("bad radial range [{lo}, {hi}]")));
        }
        Ok(RadialRange { lo, hi })
    }

    pub fn edges(&self, panels: usize) -> Vec<f64> {
        let panels = panels.max(1);
        if self.lo > 0.0 {
            let (a, b) = (self.lo.ln(), self.hi.ln());
            (0..=panels).map(|i| (a + (b - a) * i as f64 / panels as f64).exp()).collect()
        } else {
            // [0, 10^-4 hi], log-spaced panels up to hi/4, uniform panels on [hi/4, hi].
            let floor = self.hi * 1e-4;
            let knee = self.hi / 4.0;
            let uniform = (panels / 2).max(1);
            let logs = panels.saturating_sub(1 + uniform).max(1);
            let (a, b) = (floor.ln(), knee.ln());
            let mut e = vec![0.0];
            e.extend((0..=logs).map(|i| (a + (b - a) * i as f64 / logs as f64).exp()));
            e.extend((1..=uniform).map(|i| knee + (self.hi - knee) * i as f64 / uniform as f64));
            e
        }
    }

    pub fn rule(&self, panels: usize, order: usize) -> Rule1d {
        Rule1d::composite(&self.edges(panels), order)
    }
}

/// Rule in φ on (0, π) via φ = π(1 - cos πs)/2, Gauss-Legendre in s ∈ (0, 1).
pub fn phi_rule(m: usize) -> Rule1d {
    let (x, w) = gauss_legendre(m);
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for (xi, wi) in x.iter().zip(&w) {
        let s = 0.5 * (xi + 1.0);
        nodes.push(PI * (1.0 - (PI * s).cos()) / 2.0);
        weights.push(0.5 * wi * PI * PI / 2.0 * (PI * s).sin());
    }
    Rule1d { nodes, weights }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SphereMode {
    Full,
    Zonal,
}

/// Directions on S^{n-1} with weights.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub dirs: Vec<Direction>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    /// Uniform rule on the circle.
    pub fn circle(t: usize) -> SphereRule {
        let dirs = (0..t).map(|i| Direction::circle(2.0 * PI * i as f64 / t as f64)).collect();
        SphereRule { dirs, weights: vec![2.0 * PI / t as f64; t] }
    }

    /// Gauss-Legendre in cos θ₁ times uniform θ₂ on S².
    pub fn product(polar: usize, azimuth: usize) -> SphereRule {
        let (x, w) = gauss_legendre(polar);
        let mut dirs = Vec::new();
        let mut weights = Vec::new();
        for (c, wc) in x.iter().zip(&w) {
            for k in 0..azimuth {
                dirs.push(Direction::sphere2(c.acos(), 2.0 * PI * k as f64 / azimuth as f64));
                weights.push(wc * 2.0 * PI / azimuth as f64);
            }
        }
        SphereRule { dirs, weights }
    }

    /// One direction carrying the whole sphere: exact for integrands that
    /// depend on x only through |x|.
    pub fn zonal(n: usize) -> Result<SphereRule> {
        Ok(SphereRule { dirs: vec![Direction::axis(n)?], weights: vec![sphere_measure(n)] })
    }
}

/// Resolution parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    /// Gauss-Legendre nodes per radial panel.
    pub order: usize,
    pub panels: usize,
    pub phi_nodes: usize,
    /// Uniform angle nodes (θ for n = 2, θ₂ for n = 3).
    pub theta_nodes: usize,
    /// Gauss-Legendre nodes in cos θ₁ for n = 3.
    pub polar_nodes: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { order: 16, panels: 8, phi_nodes: 32, theta_nodes: 32, polar_nodes: 16 }
    }
}

impl GridSpec {
    pub fn refine(&self) -> GridSpec {
        GridSpec {
            order: self.order,
            panels: self.panels * 2,
            phi_nodes: self.phi_nodes * 2,
            theta_nodes: self.theta_nodes * 2,
            polar_nodes: self.polar_nodes * 2,
        }
    }

    pub fn coarsen(&self) -> GridSpec {
        GridSpec {
            order: self.order,
            panels: (self.panels / 2).max(1),
            phi_nodes: (self.phi_nodes / 2).max(2),
            theta_nodes: (self.theta_nodes / 2).max(2),
            polar_nodes: (self.polar_nodes / 2).max(2),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == 0 || self.panels == 0 || self.phi_nodes == 0 || self.theta_nodes == 0 || self.polar_nodes == 0 {
            return Err(Error::Config("grid node counts must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub n: usize,
    pub spec: GridSpec,
    pub range: RadialRange,
    pub mode: SphereMode,
    pub radial: Rule1d,
    pub phi: Rule1d,
    pub sphere: SphereRule,
}

impl QuadratureGrid {
    pub fn new(n: usize, spec: GridSpec, range: RadialRange, mode: SphereMode) -> Result<QuadratureGrid> {
        spec.validate()?;
        let sphere = match (mode, n) {
            (SphereMode::Zonal, _) => SphereRule::zonal(n)?,
            (SphereMode::Full, 2) => SphereRule::circle(spec.theta_nodes),
            (SphereMode::Full, 3) => SphereRule::product(spec.polar_nodes, spec.theta_nodes),
            (SphereMode::Full, _) => {
                return Err(Error::InvalidArgument(format!("full sphere rule not available for n = {n}")))
            }
        };
        Ok(QuadratureGrid {
            n,
            spec,
            range,
            mode,
            radial: range.rule(spec.panels, spec.order),
            phi: phi_rule(spec.phi_nodes),
            sphere,
        })
    }

    pub fn with_spec(&self, spec: GridSpec) -> Result<QuadratureGrid> {
        QuadratureGrid::new(self.n, spec, self.range, self.mode)
    }

    pub fn node_count(&self) -> usize {
        self.radial.nodes.len() * self.phi.nodes.len() * self.sphere.dirs.len()
    }

    /// Σ over nodes of w · ρ^{n+1}/(2ψ) · sin^{n/2}φ · f(p) for each of `nterms` outputs.
    pub fn integrate_volume<F>(&self, nterms: usize, f: F) -> Result<Vec<f64>>
    where
        F: Fn(&Point, &mut [f64]) -> Result<()> + Sync,
    {
        let n = self.n;
        let shells: Vec<Result<Vec<f64>>> = (0..self.radial.nodes.len())
            .into_par_iter()
            .map(|i| {
                let rho = self.radial.nodes[i];
                let wr = self.radial.weights[i];
                let mut acc = vec![0.0; nterms];
                let mut buf = vec![0.0; nterms];
                for (phi, wphi) in self.phi.nodes.iter().zip(&self.phi.weights) {
                    let psi = phi.sin();
                    let dens = rho.powi(n as i32 + 1) / (2.0 * psi) * psi.powf(n as f64 / 2.0);
                    for (dir, wd) in self.sphere.dirs.iter().zip(&self.sphere.weights) {
                        let p = from_polar(&Polar { rho, phi: *phi, dir: *dir })?;
                        buf.iter_mut().for_each(|b| *b = 0.0);
                        f(&p, &mut buf)?;
                        let w = wr * wphi * wd * dens;
                        for (a, b) in acc.iter_mut().zip(&buf) {
                            *a += w * b;
                        }
                    }
                }
                Ok(acc)
            })
            .collect();
        let mut per_term = vec![Vec::with_capacity(shells.len()); nterms];
        for s in shells {
            for (t, v) in per_term.iter_mut().zip(s?) {
                t.push(v);
            }
        }
        Ok(per_term.iter().map(|v| pairwise_sum(v)).collect())
    }

    /// Σ over (φ, w) nodes of f(σ) sin^{n/2}φ.
    pub fn integrate_sphere(&self, f: impl Fn(f64, &Direction) -> f64) -> f64 {
        let n = self.n as f64;
        let mut terms = Vec::with_capacity(self.phi.nodes.len());
        for (phi, wphi) in self.phi.nodes.iter().zip(&self.phi.weights) {
            let s = phi.sin().powf(n / 2.0);
            let mut acc = 0.0;
            for (dir, wd) in self.sphere.dirs.iter().zip(&self.sphere.weights) {
                acc += wd * f(*phi, dir);
            }
            terms.push(wphi * s * acc);
        }
        pairwise_sum(&terms)
    }
}

/// An integral value with the difference from the half-resolution grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Integrate at `grid` and at its half-resolution grid; the error is their difference.
pub fn integrate_volume<F>(grid: &QuadratureGrid, nterms: usize, f: F) -> Result<Vec<Estimate>>
where
    F: Fn(&Point, &mut [f64]) -> Result<()> + Sync,
{
    let fine = grid.integrate_volume(nterms, &f)?;
    let coarse = grid.with_spec(grid.spec.coarsen())?.integrate_volume(nterms, &f)?;
    Ok(fine
        .iter()
        .zip(&coarse)
        .map(|(a, b)| Estimate { value: *a, error: (a - b).abs() })
        .collect())
}

/// Refine until successive values agree to `tol` relative, up to `max_levels` refinements.
pub fn refine_until<F>(grid: &QuadratureGrid, f: F, tol: f64, max_levels: usize) -> Result<(Estimate, QuadratureGrid)>
where
    F: Fn(&Point) -> Result<f64> + Sync,
{
    let g = |p: &Point, out: &mut [f64]| -> Result<()> {
        out[0] = f(p)?;
        Ok(())
    };
    let mut current = grid.clone();
    let mut prev = current.integrate_volume(1, g)?[0];
    let mut history = vec![prev];
    for _ in 0..max_levels {
        let next_grid = current.with_spec(current.spec.refine())?;
        let next = next_grid.integrate_volume(1, g)?[0];
        history.push(next);
        let err = (next - prev).abs();
        if err <= tol * next.abs().max(1e-300) {
            return Ok((Estimate { value: next, error: err }, next_grid));
        }
        prev = next;
        current = next_grid;
    }
    Err(Error::Convergence(format!("no agreement to {tol:e} after {max_levels} refinements: {history:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{gauge, omega_measure};

    #[test]
    fn gauss_legendre_is_exact_to_degree_2m_minus_1() {
        let (x, w) = gauss_legendre(16);
        for d in 0..32 {
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(d)).sum();
            let exact = if d % 2 == 0 { 2.0 / (d as f64 + 1.0) } else { 0.0 };
            assert!((s - exact).abs() < 1e-14, "degree {d}");
        }
    }

    #[test]
    fn composite_rule_integrates_polynomials_exactly() {
        let r = RadialRange::new(1.0, 3.0).unwrap().rule(8, 16);
        let v = r.integrate(|x| x.powi(31));
        let exact = (3f64.powi(32) - 1.0) / 32.0;
        assert!((v - exact).abs() < 1e-13 * exact);
    }

    #[test]
    fn phi_rule_handles_half_integer_powers() {
        // ∫_0^π sin^{1/2}φ dφ = √π Γ(3/4)/Γ(5/4).
        let exact = PI.sqrt() * crate::bessel::gamma(0.75) / crate::bessel::gamma(1.25);
        let v = phi_rule(32).integrate(|p| p.sin().sqrt());
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn annulus_volume() {
        let g = QuadratureGrid::new(2, GridSpec::default(), RadialRange::new(1.0, 2.0).unwrap(), SphereMode::Full).unwrap();
        let v = g.integrate_volume(1, |_, o| {
            o[0] = 1.0;
            Ok(())
        })
        .unwrap()[0];
        let exact = PI * PI * 15.0 / 4.0;
        assert!((v - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn sphere_integral_of_one_is_omega_measure() {
        for n in [2, 3] {
            let g = QuadratureGrid::new(n, GridSpec::default(), RadialRange::new(1.0, 2.0).unwrap(), SphereMode::Full).unwrap();
            let v = g.integrate_sphere(|_, _| 1.0);
            assert!((v - omega_measure(n)).abs() < 1e-11);
        }
    }

    #[test]
    fn zonal_rule_agrees_with_product_rule() {
        let range = RadialRange::new(0.5, 2.0).unwrap();
        let f = |p: &Point, o: &mut [f64]| {
            let rho = gauge(p)?;
            o[0] = (-rho * rho).exp() * (1.0 + p.x_norm2() * p.t);
            Ok(())
        };
        let full = QuadratureGrid::new(3, GridSpec::default(), range, SphereMode::Full).unwrap().integrate_volume(1, f).unwrap()[0];
        let zonal = QuadratureGrid::new(3, GridSpec::default(), range, SphereMode::Zonal).unwrap().integrate_volume(1, f).unwrap()[0];
        assert!((full - zonal).abs() < 1e-12 * full.abs());
    }

    #[test]
    fn graded_range_integrates_gaussian_moments() {
        // ∫ e^{-ρ²} dx dt over Grushin space with n = 2: ½|Ω|∫ ρ^{3} e^{-ρ²}/ψ ... use ψ·e^{-ρ²}.
        let g = QuadratureGrid::new(2, GridSpec::default(), RadialRange::new(0.0, 10.0).unwrap(), SphereMode::Zonal).unwrap();
        let v = g.integrate_volume(1, |p, o| {
            let rho = gauge(p)?;
            o[0] = crate::geometry::psi(p)? * (-rho * rho).exp();
            Ok(())
        })
        .unwrap()[0];
        // ½|Ω| ∫ ρ^3 e^{-ρ²} dρ = ½ · 4π · ½.
        assert!((v - PI).abs() < 1e-11, "{v}");
    }

    #[test]
    fn singular_integrand_fails_to_converge() {
        let g = QuadratureGrid::new(2, GridSpec { panels: 2, ..GridSpec::default() }, RadialRange::new(1.0, 2.0).unwrap(), SphereMode::Zonal).unwrap();
        let r = refine_until(&g, |p| Ok(1.0 / (gauge(p)? - 1.37).abs()), 1e-10, 3);
        assert!(matches!(r, Err(Error::Convergence(_))));
    }

    #[test]
    fn reduction_is_order_fixed() {
        let g = QuadratureGrid::new(2, GridSpec::default(), RadialRange::new(1.0, 2.0).unwrap(), SphereMode::Full).unwrap();
        let f = |p: &Point, o: &mut [f64]| {
            o[0] = (p.x()[0] * 3.0).sin() + p.t;
            Ok(())
        };
        let a = g.integrate_volume(1, f).unwrap()[0];
        let b = g.integrate_volume(1, f).unwrap()[0];
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
