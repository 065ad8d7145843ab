//! Grushin-space geometry: gauge ρ, weight ψ, polar coordinates and dilations.
//!
//! Points are (x, t) with x in R^n. The gauge is ρ = (|x|^4 + 4t^2)^{1/4},
//! ψ = |x|^2/ρ^2 = sin φ, and polar coordinates are
//! x = ρ sin^{1/2}φ · w, t = (ρ^2/2) cos φ with w on the unit sphere.

use crate::error::{Error, Result};
use crate::jet::{Jet, MAX_VARS};
use std::f64::consts::PI;

/// Largest supported spatial dimension n.
pub const MAX_N: usize = MAX_VARS - 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    n: usize,
    x: [f64; MAX_N],
    pub t: f64,
}

impl Point {
    pub fn new(x: &[f64], t: f64) -> Result<Point> {
        let n = x.len();
        if !(2..=MAX_N).contains(&n) {
            return Err(Error::InvalidArgument(format!("spatial dimension {n} outside 2..={MAX_N}")));
        }
        let mut arr = [0.0; MAX_N];
        arr[..n].copy_from_slice(x);
        Ok(Point { n, x: arr, t })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &[f64] {
        &self.x[..self.n]
    }

    /// Homogeneous dimension Q = n + 2.
    pub fn q(&self) -> usize {
        self.n + 2
    }

    pub fn x_norm2(&self) -> f64 {
        self.x().iter().map(|v| v * v).sum()
    }

    /// Coordinate jets (x_1..x_n, t) for exact differentiation at this point.
    pub fn coordinate_jets(&self) -> ([Jet; MAX_N], Jet) {
        let d = self.n + 1;
        let mut xs = [Jet::constant(d, 0.0); MAX_N];
        for i in 0..self.n {
            xs[i] = Jet::variable(d, i, self.x[i]);
        }
        (xs, Jet::variable(d, self.n, self.t))
    }
}

/// A direction w on S^{n-1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    n: usize,
    w: [f64; MAX_N],
}

impl Direction {
    pub fn new(w: &[f64]) -> Result<Direction> {
        let n = w.len();
        if !(2..=MAX_N).contains(&n) {
            return Err(Error::InvalidArgument(format!("direction dimension {n} unsupported")));
        }
        let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Domain("zero direction".into()));
        }
        let mut arr = [0.0; MAX_N];
        for (a, v) in arr.iter_mut().zip(w) {
            *a = v / norm;
        }
        Ok(Direction { n, w: arr })
    }

    /// First coordinate axis e_1 in R^n.
    pub fn axis(n: usize) -> Result<Direction> {
        let mut w = vec![0.0; n];
        w[0] = 1.0;
        Direction::new(&w)
    }

    /// w = (cos θ, sin θ).
    pub fn circle(theta: f64) -> Direction {
        Direction { n: 2, w: [theta.cos(), theta.sin(), 0.0, 0.0, 0.0] }
    }

    /// w = (sin θ₁ cos θ₂, sin θ₁ sin θ₂, cos θ₁).
    pub fn sphere2(theta1: f64, theta2: f64) -> Direction {
        let (s1, c1) = theta1.sin_cos();
        let (s2, c2) = theta2.sin_cos();
        Direction { n: 3, w: [s1 * c2, s1 * s2, c1, 0.0, 0.0] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn w(&self) -> &[f64] {
        &self.w[..self.n]
    }

    /// Angle θ in [0, 2π) for n = 2.
    pub fn theta(&self) -> Option<f64> {
        (self.n == 2).then(|| self.w[1].atan2(self.w[0]).rem_euclid(2.0 * PI))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polar {
    pub rho: f64,
    pub phi: f64,
    pub dir: Direction,
}

/// ρ(x, t) = (|x|^4 + 4t^2)^{1/4}.
pub fn gauge(p: &Point) -> Result<f64> {
    let r2 = p.x_norm2();
    let rho4 = r2 * r2 + 4.0 * p.t * p.t;
    if rho4 == 0.0 {
        return Err(Error::Domain("gauge undefined at the origin".into()));
    }
    Ok(rho4.sqrt().sqrt())
}

/// ψ = |∇_G ρ|^2 = |x|^2 / ρ^2.
pub fn psi(p: &Point) -> Result<f64> {
    let rho = gauge(p)?;
    Ok(p.x_norm2() / (rho * rho))
}

/// Gauge as a jet in the coordinates of `p`.
pub fn gauge_jet(p: &Point) -> Result<Jet> {
    let (xs, t) = p.coordinate_jets();
    let mut r2 = Jet::constant(p.n + 1, 0.0);
    for x in &xs[..p.n] {
        r2 = r2 + *x * *x;
    }
    let rho4 = r2 * r2 + t * t * 4.0;
    if rho4.v == 0.0 {
        return Err(Error::Domain("gauge undefined at the origin".into()));
    }
    Ok(rho4.powf(0.25))
}

pub fn to_polar(p: &Point) -> Result<Polar> {
    let rho = gauge(p)?;
    let r2 = p.x_norm2();
    let phi = r2.atan2(2.0 * p.t);
    let dir = if r2 > 0.0 { Direction::new(p.x())? } else { Direction::axis(p.n)? };
    Ok(Polar { rho, phi, dir })
}

pub fn from_polar(pol: &Polar) -> Result<Point> {
    if !(pol.rho > 0.0) || !(0.0..=PI).contains(&pol.phi) {
        return Err(Error::Domain(format!("polar coordinates (ρ={}, φ={}) out of range", pol.rho, pol.phi)));
    }
    let n = pol.dir.n();
    let s = pol.rho * pol.phi.sin().max(0.0).sqrt();
    let mut x = [0.0; MAX_N];
    for i in 0..n {
        x[i] = s * pol.dir.w[i];
    }
    Ok(Point { n, x, t: 0.5 * pol.rho * pol.rho * pol.phi.cos() })
}

/// δ_λ(x, t) = (λx, λ²t).
pub fn dilate(p: &Point, lambda: f64) -> Result<Point> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("dilation factor {lambda} must be positive")));
    }
    let mut q = *p;
    for v in q.x.iter_mut() {
        *v *= lambda;
    }
    q.t *= lambda * lambda;
    Ok(q)
}

/// Density of dx dt with respect to dρ dφ dw: ½ ρ^{n+1} sin^{(n-2)/2} φ.
pub fn volume_density(n: usize, rho: f64, phi: f64) -> f64 {
    0.5 * rho.powi(n as i32 + 1) * phi.sin().powf((n as f64 - 2.0) / 2.0)
}

/// Surface measure |S^{n-1}| = 2π^{n/2} / Γ(n/2).
pub fn sphere_measure(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / crate::bessel::gamma(n as f64 / 2.0)
}

/// |Ω| = |S^{n-1}| ∫_0^π sin^{n/2}φ dφ for dΩ = sin^{n/2}φ dφ dw.
pub fn omega_measure(n: usize) -> f64 {
    let a = n as f64 / 2.0;
    let phi_int = PI.sqrt() * crate::bessel::gamma((a + 1.0) / 2.0) / crate::bessel::gamma(a / 2.0 + 1.0);
    sphere_measure(n) * phi_int
}

/// Uniformly spread seeded sample points with ρ in [r_lo, r_hi].
pub fn sample_points(n: usize, count: usize, r_lo: f64, r_hi: f64, seed: u64) -> Vec<Point> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(count);
    while pts.len() < count {
        let rho = rng.gen_range(r_lo..r_hi);
        let phi = rng.gen_range(0.02..PI - 0.02);
        let w: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(0.1..=1.0).contains(&norm) {
            continue;
        }
        let dir = Direction::new(&w).expect("nonzero direction");
        pts.push(from_polar(&Polar { rho, phi, dir }).expect("valid polar"));
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauge_of_unit_points() {
        assert_eq!(gauge(&Point::new(&[1.0, 0.0], 0.0).unwrap()).unwrap(), 1.0);
        let p = Point::new(&[0.0, 0.0], 0.5).unwrap();
        assert!((gauge(&p).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(psi(&p).unwrap(), 0.0);
        assert!(matches!(gauge(&Point::new(&[0.0, 0.0], 0.0).unwrap()), Err(Error::Domain(_))));
    }

    #[test]
    fn polar_of_axis_points() {
        let pol = to_polar(&Point::new(&[1.0, 0.0], 0.0).unwrap()).unwrap();
        assert!((pol.rho - 1.0).abs() < 1e-15);
        assert!((pol.phi - PI / 2.0).abs() < 1e-15);
        assert_eq!(pol.dir.theta(), Some(0.0));
        let pol = to_polar(&Point::new(&[0.0, 0.0, 0.0], 0.5).unwrap()).unwrap();
        assert_eq!(pol.phi, 0.0);
    }

    #[test]
    fn dilation_scales_gauge() {
        let p = Point::new(&[0.3, -0.4], 0.2).unwrap();
        let q = dilate(&p, 2.0).unwrap();
        assert!((gauge(&q).unwrap() - 2.0 * gauge(&p).unwrap()).abs() < 1e-14);
        assert!((psi(&q).unwrap() - psi(&p).unwrap()).abs() < 1e-14);
        assert!(dilate(&p, 0.0).is_err());
    }

    #[test]
    fn omega_measure_in_plane_is_four_pi() {
        assert!((omega_measure(2) - 4.0 * PI).abs() < 1e-12);
        assert!((sphere_measure(3) - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn gauge_jet_matches_gauge() {
        let p = Point::new(&[0.3, -0.4, 0.7], 0.2).unwrap();
        let j = gauge_jet(&p).unwrap();
        assert!((j.v - gauge(&p).unwrap()).abs() < 1e-15);
        // Euler identity for a 1-homogeneous function: Σ x_j ∂_j ρ + 2t ∂_t ρ = ρ.
        let e: f64 = p.x().iter().enumerate().map(|(i, x)| x * j.g[i]).sum::<f64>() + 2.0 * p.t * j.g[3];
        assert!((e - j.v).abs() < 1e-14);
    }
}
