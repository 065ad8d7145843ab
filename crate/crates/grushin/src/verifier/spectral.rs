//! Harmonic coefficients d_h(ρ), d_h'(ρ) of a field on the radial nodes of a grid,
//! and the one-dimensional sums built from them.

use crate::error::Result;
use crate::fields::ScalarField;
use crate::geometry::{from_polar, Polar};
use crate::harmonics::{catalog, project, GrushinHarmonic};
use crate::jet::Order;
use crate::quadrature::{QuadratureGrid, SphereMode};

#[derive(Debug, Clone)]
pub struct Spectrum {
    pub n: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub harmonics: Vec<GrushinHarmonic>,
    /// `[harmonic][node] -> (d, d')`.
    pub coeffs: Vec<Vec<(f64, f64)>>,
    /// ∫_Ω u² dΩ at each node.
    pub mass: Vec<f64>,
}

impl Spectrum {
    /// Project onto every harmonic of order ≤ `max_k` the grid's angular rule can resolve.
    pub fn compute(u: &dyn ScalarField, grid: &QuadratureGrid, max_k: usize) -> Result<Spectrum> {
        let n = grid.n;
        let mut hs = catalog(n, max_k)?;
        if grid.mode == SphereMode::Zonal {
            hs.retain(|h| h.is_zonal());
        }
        let coeffs = project(u, &hs, grid)?;
        let mut mass = Vec::with_capacity(grid.radial.nodes.len());
        for &rho in &grid.radial.nodes {
            let mut acc = 0.0;
            for (phi, wphi) in grid.phi.nodes.iter().zip(&grid.phi.weights) {
                let s = phi.sin().powf(n as f64 / 2.0);
                for (dir, wd) in grid.sphere.dirs.iter().zip(&grid.sphere.weights) {
                    let v = u.jet(&from_polar(&Polar { rho, phi: *phi, dir: *dir })?, Order::Value)?.v;
                    acc += wphi * wd * s * v * v;
                }
            }
            mass.push(acc);
        }
        Ok(Spectrum {
            n,
            nodes: grid.radial.nodes.clone(),
            weights: grid.radial.weights.clone(),
            harmonics: hs,
            coeffs,
            mass,
        })
    }

    /// Σ_h ½∫ g(h, ρ, d_h, d_h') dρ.
    pub fn sum(&self, g: impl Fn(&GrushinHarmonic, f64, f64, f64) -> f64) -> f64 {
        let mut total = 0.0;
        for (h, c) in self.harmonics.iter().zip(&self.coeffs) {
            for ((rho, w), (d, dp)) in self.nodes.iter().zip(&self.weights).zip(c) {
                total += 0.5 * w * g(h, *rho, *d, *dp);
            }
        }
        total
    }

    fn weighted_mass(&self) -> (f64, Vec<f64>) {
        let p = self.n as i32 + 1;
        let total: f64 = self.nodes.iter().zip(&self.weights).zip(&self.mass).map(|((r, w), m)| w * m * r.powi(p)).sum();
        let per: Vec<f64> = self
            .coeffs
            .iter()
            .map(|c| self.nodes.iter().zip(&self.weights).zip(c).map(|((r, w), (d, _))| w * d * d * r.powi(p)).sum())
            .collect();
        (total, per)
    }

    /// Relative L² mass outside the span of the harmonics.
    pub fn tail(&self) -> f64 {
        let (total, per) = self.weighted_mass();
        if total == 0.0 {
            return 0.0;
        }
        ((total - per.iter().sum::<f64>()) / total).max(0.0)
    }

    /// √(relative L² mass in harmonics of order ≤ j); zero for j < 0.
    pub fn low_order_fraction(&self, j: i64) -> f64 {
        let (total, per) = self.weighted_mass();
        if total == 0.0 || j < 0 {
            return 0.0;
        }
        let low: f64 = self.harmonics.iter().zip(&per).filter(|(h, _)| (h.k as i64) <= j).map(|(_, m)| m).sum();
        (low / total).max(0.0).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::catalog as fields;
    use crate::quadrature::{GridSpec, RadialRange};

    #[test]
    fn single_mode_has_one_coefficient() {
        let u = fields::build("bump-k2", 2).unwrap();
        let grid = QuadratureGrid::new(2, GridSpec::default(), RadialRange::new(0.5, 2.0).unwrap(), SphereMode::Full).unwrap();
        let s = Spectrum::compute(u.as_ref(), &grid, 4).unwrap();
        assert!(s.tail() < 1e-12, "{}", s.tail());
        assert!(s.low_order_fraction(1) < 1e-10);
        assert!((s.low_order_fraction(2) - 1.0).abs() < 1e-10);
        // The single coefficient is the bump profile itself.
        let bump = crate::fields::profile::annular_bump(0.5, 2.0);
        let direct = grid.radial.integrate(|r| 0.5 * bump.value(r).powi(2) * r.powi(3));
        let spectral = s.sum(|_, r, d, _| d * d * r.powi(3));
        assert!((direct - spectral).abs() < 1e-12 * direct);
    }

    #[test]
    fn polynomial_field_has_a_tail() {
        let u = fields::build("bump-poly", 2).unwrap();
        let grid = QuadratureGrid::new(2, GridSpec::default(), RadialRange::new(0.5, 2.0).unwrap(), SphereMode::Full).unwrap();
        let s = Spectrum::compute(u.as_ref(), &grid, 2).unwrap();
        assert!(s.tail() > 1e-6);
    }
}
