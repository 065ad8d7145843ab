//! Grushin operators evaluated from exact jets.
//!
//! ∇_G = (∇_x, |x|∂_t), 𝓛_G = Δ_x + |x|²∂_t², ∂_ρ = (x·∇_x + 2t∂_t)/ρ,
//! 𝓛_{ρ,G} = ψ(∂_ρ² + (Q-1)/ρ ∂_ρ), and the spherical fields
//! L_j = X_j - X_j(ρ) ∂_ρ with X_j = ∂_{x_j} (j < n), X_n = |x|∂_t.

use super::{Field, ProfileComposite, RadialDerivativeField, ScalarField};
use crate::error::{Error, Result};
use crate::fields::profile::Profile;
use crate::geometry::{gauge, gauge_jet, Point};
use crate::jet::{Jet, Order};
use std::sync::Arc;

fn need_hessian(u: &Jet) -> Result<()> {
    if !u.has_hessian() {
        return Err(Error::Capability("operation needs second derivatives".into()));
    }
    Ok(())
}

/// ∇_G u from a jet.
pub fn grad_g(u: &Jet, p: &Point) -> Vec<f64> {
    let n = p.n();
    let mut g = u.g[..=n].to_vec();
    g[n] *= p.x_norm2().sqrt();
    g
}

/// |∇_G u|².
pub fn grad_g_norm2(u: &Jet, p: &Point) -> f64 {
    let n = p.n();
    u.g[..n].iter().map(|v| v * v).sum::<f64>() + p.x_norm2() * u.g[n] * u.g[n]
}

/// 𝓛_G u.
pub fn lap_g(u: &Jet, p: &Point) -> Result<f64> {
    need_hessian(u)?;
    let n = p.n();
    Ok((0..n).map(|i| u.h[i][i]).sum::<f64>() + p.x_norm2() * u.h[n][n])
}

/// ∂_ρ of any jet with a gradient, at gauge `rho`.
pub fn radial_derivative_value(u: &Jet, p: &Point, rho: f64) -> f64 {
    let n = p.n();
    let e: f64 = p.x().iter().enumerate().map(|(i, x)| x * u.g[i]).sum::<f64>() + 2.0 * p.t * u.g[n];
    e / rho
}

/// u_ρ as a jet one order lower than u.
pub fn radial_derivative_jet(u: &Jet, p: &Point) -> Result<Jet> {
    if u.order == Order::Value {
        return Err(Error::Capability("radial derivative needs a gradient".into()));
    }
    let n = p.n();
    let (xs, t) = p.coordinate_jets();
    let mut e = u.partial(n) * t * 2.0;
    for i in 0..n {
        e = e + u.partial(i) * xs[i];
    }
    Ok(e / gauge_jet(p)?)
}

/// u_ρρ = (vᵀ H v + 2t u_t)/ρ² with v = (x, 2t).
pub fn radial_second_derivative(u: &Jet, p: &Point, rho: f64) -> Result<f64> {
    need_hessian(u)?;
    let n = p.n();
    let mut v = p.x().to_vec();
    v.push(2.0 * p.t);
    let mut q = 0.0;
    for i in 0..=n {
        for k in 0..=n {
            q += v[i] * u.h[i][k] * v[k];
        }
    }
    Ok((q + 2.0 * p.t * u.g[n]) / (rho * rho))
}

/// 𝓛_{ρ,G} u = ψ(u_ρρ + (Q-1)u_ρ/ρ).
pub fn lap_rho_g(u: &Jet, p: &Point) -> Result<f64> {
    let rho = gauge(p)?;
    let psi = p.x_norm2() / (rho * rho);
    let q = p.q() as f64;
    Ok(psi * (radial_second_derivative(u, p, rho)? + (q - 1.0) * radial_derivative_value(u, p, rho) / rho))
}

/// Σ_j L_j² u = 𝓛_G u - 𝓛_{ρ,G} u.
pub fn sum_lj2(u: &Jet, p: &Point) -> Result<f64> {
    Ok(lap_g(u, p)? - lap_rho_g(u, p)?)
}

/// Coefficient X_j(ρ): x_j|x|²/ρ³ for j < n, and |x|·2t/ρ³ for j = n, as a jet.
pub fn x_rho_jet(p: &Point, j: usize) -> Result<Jet> {
    let n = p.n();
    let (xs, t) = p.coordinate_jets();
    let mut r2 = Jet::constant(n + 1, 0.0);
    for x in &xs[..n] {
        r2 = r2 + *x * *x;
    }
    let rho3 = gauge_jet(p)?.powi(3);
    Ok(if j < n { xs[j] * r2 / rho3 } else { r2.sqrt() * t * 2.0 / rho3 })
}

/// L_j u as a jet one order lower than u (j = 0..=n; j = n is the t-direction field).
pub fn spherical_field_jet(u: &Jet, p: &Point, j: usize) -> Result<Jet> {
    let n = p.n();
    if j > n {
        return Err(Error::InvalidArgument(format!("vector field index {j} exceeds n = {n}")));
    }
    let ur = radial_derivative_jet(u, p)?;
    let a = x_rho_jet(p, j)?;
    let xj = if j < n {
        u.partial(j)
    } else {
        let (xs, _) = p.coordinate_jets();
        let mut r2 = Jet::constant(n + 1, 0.0);
        for x in &xs[..n] {
            r2 = r2 + *x * *x;
        }
        u.partial(n) * r2.sqrt()
    };
    Ok(xj - a * ur)
}

/// X_j(ρ) as a plain number.
pub fn x_rho(p: &Point, j: usize, rho: f64) -> f64 {
    let n = p.n();
    let r2 = p.x_norm2();
    if j < n {
        p.x()[j] * r2 / rho.powi(3)
    } else {
        r2.sqrt() * 2.0 * p.t / rho.powi(3)
    }
}

pub fn grushin_gradient(u: &dyn ScalarField, p: &Point) -> Result<Vec<f64>> {
    Ok(grad_g(&u.jet(p, Order::Gradient)?, p))
}

pub fn grushin_laplacian(u: &dyn ScalarField, p: &Point) -> Result<f64> {
    lap_g(&u.jet(p, Order::Hessian)?, p)
}

pub fn radial_derivative(u: &dyn ScalarField, p: &Point) -> Result<f64> {
    Ok(radial_derivative_value(&u.jet(p, Order::Gradient)?, p, gauge(p)?))
}

pub fn radial_grushin_laplacian(u: &dyn ScalarField, p: &Point) -> Result<f64> {
    lap_rho_g(&u.jet(p, Order::Hessian)?, p)
}

/// L_j u at p, for j = 0..=n.
pub fn spherical_vector_field(u: &dyn ScalarField, p: &Point, j: usize) -> Result<f64> {
    Ok(spherical_field_jet(&u.jet(p, Order::Gradient)?, p, j)?.v)
}

pub fn spherical_laplacian_sum(u: &dyn ScalarField, p: &Point) -> Result<f64> {
    sum_lj2(&u.jet(p, Order::Hessian)?, p)
}

pub fn compose_with_radial_profile(u: Field, g: Profile, divide: bool) -> Field {
    Arc::new(ProfileComposite { inner: u, profile: g, divide })
}

pub fn radial_derivative_field(u: Field) -> Field {
    Arc::new(RadialDerivativeField { inner: u })
}

/// Largest relative discrepancy between the exact gradient/Hessian and central differences with step h.
pub fn fd_crosscheck(u: &dyn ScalarField, p: &Point, h: f64) -> Result<f64> {
    let n = p.n();
    let shift = |i: usize, s: f64| -> Result<Point> {
        let mut x = p.x().to_vec();
        let mut t = p.t;
        if i < n {
            x[i] += s;
        } else {
            t += s;
        }
        Point::new(&x, t)
    };
    let order = u.max_order();
    let j = u.jet(p, order)?;
    let mut worst: f64 = 0.0;
    let rel = |a: f64, b: f64| (a - b).abs() / (1.0 + a.abs().max(b.abs()));
    for i in 0..=n {
        let (fp, fm) = (u.jet(&shift(i, h)?, order)?, u.jet(&shift(i, -h)?, order)?);
        worst = worst.max(rel((fp.v - fm.v) / (2.0 * h), j.g[i]));
        if order == Order::Hessian {
            for k in 0..=n {
                worst = worst.max(rel((fp.g[k] - fm.g[k]) / (2.0 * h), j.h[i][k]));
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{profile, Polynomial, RadialField, Support};
    use crate::geometry::{psi, sample_points};

    fn gaussian(n: usize) -> Field {
        Arc::new(RadialField::new(n, profile::gaussian(1.0), Support::decaying(8.0, 0.0)))
    }

    #[test]
    fn laplacian_of_gauge() {
        // 𝓛_G ρ = (Q-1)ψ/ρ.
        for n in [2, 3] {
            let u: Field = Arc::new(RadialField::new(n, profile::power(1.0, 1.0), Support::unbounded()));
            for p in sample_points(n, 20, 0.3, 3.0, 1) {
                let rho = gauge(&p).unwrap();
                let expect = (n as f64 + 1.0) * psi(&p).unwrap() / rho;
                assert!((grushin_laplacian(u.as_ref(), &p).unwrap() - expect).abs() < 1e-12 * (1.0 + expect.abs()));
            }
        }
    }

    #[test]
    fn polynomial_derivatives_by_hand() {
        // u = x1² t: ∇_G u = (2x1 t, 0, |x| x1²), 𝓛_G u = 2t.
        let u = Polynomial { n: 2, terms: vec![(1.0, vec![2, 0, 1])] };
        let p = Point::new(&[0.3, 0.4], 0.7).unwrap();
        let g = grushin_gradient(&u, &p).unwrap();
        assert!((g[0] - 2.0 * 0.3 * 0.7).abs() < 1e-15);
        assert!((g[2] - 0.5 * 0.09).abs() < 1e-15);
        assert!((grushin_laplacian(&u, &p).unwrap() - 1.4).abs() < 1e-14);
    }

    #[test]
    fn radial_operators_on_radial_fields() {
        // For radial u: 𝓛_G u = 𝓛_{ρ,G} u, |∇_G u|² = ψ u_ρ², and Σ L_j² u = 0.
        for n in [2, 3] {
            let u = gaussian(n);
            for p in sample_points(n, 20, 0.3, 2.0, 2) {
                let j = u.jet(&p, Order::Hessian).unwrap();
                let rho = gauge(&p).unwrap();
                let ur = radial_derivative_value(&j, &p, rho);
                assert!((grad_g_norm2(&j, &p) - psi(&p).unwrap() * ur * ur).abs() < 1e-13);
                assert!(sum_lj2(&j, &p).unwrap().abs() < 1e-12);
                for k in 0..=n {
                    assert!(spherical_field_jet(&j, &p, k).unwrap().v.abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn exact_derivatives_match_finite_differences() {
        let u = Polynomial::random(3, 3, 5);
        for p in sample_points(3, 10, 0.3, 1.5, 4) {
            assert!(fd_crosscheck(&u, &p, 1e-5).unwrap() < 1e-7);
        }
        let ur = radial_derivative_field(gaussian(2));
        for p in sample_points(2, 10, 0.3, 1.5, 4) {
            assert!(fd_crosscheck(ur.as_ref(), &p, 1e-5).unwrap() < 1e-7);
        }
    }

    #[test]
    fn composing_with_profile_divides_values() {
        let u = gaussian(2);
        let q = compose_with_radial_profile(u.clone(), profile::power(1.0, 2.0), true);
        let p = Point::new(&[0.5, 0.1], 0.2).unwrap();
        let rho = gauge(&p).unwrap();
        assert!((q.value(&p).unwrap() - u.value(&p).unwrap() / (rho * rho)).abs() < 1e-15);
        let z = compose_with_radial_profile(u, profile::constant(0.0), true);
        assert!(matches!(z.value(&p), Err(Error::Domain(_))));
    }
}
