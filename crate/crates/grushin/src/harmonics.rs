//! Grushin spherical harmonics
//! g_{l,k} = sin^{l/2}φ · C^{l/2+n/4}_{(k-l)/2}(cos φ) · Y_l(w), with eigenvalue λ_k = k(k+n)/4.
//!
//! In Cartesian form g = H_l(x) ρ^{-l} C(2t/ρ²) with H_l the solid harmonic,
//! so ρ^k g is a polynomial in (x, t).

use crate::error::{Error, Result};
use crate::fields::ScalarField;
use crate::geometry::{gauge_jet, sphere_measure, Direction, Point, Polar};
use crate::jet::{Jet, Order, Ring};
use crate::quadrature::{phi_rule, QuadratureGrid, SphereMode};
use std::f64::consts::PI;

/// Gegenbauer C^λ_m(s) by the three-term recurrence.
pub fn gegenbauer_value(lambda: f64, m: usize, s: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let (mut c0, mut c1) = (1.0, 2.0 * lambda * s);
    for k in 2..=m {
        let kf = k as f64;
        let c2 = (2.0 * s * (kf + lambda - 1.0) * c1 - (kf + 2.0 * lambda - 2.0) * c0) / kf;
        c0 = c1;
        c1 = c2;
    }
    c1
}

/// (C, C', C'') using d/ds C^λ_m = 2λ C^{λ+1}_{m-1}.
pub fn gegenbauer(lambda: f64, m: usize, s: f64) -> [f64; 3] {
    let d1 = if m >= 1 { 2.0 * lambda * gegenbauer_value(lambda + 1.0, m - 1, s) } else { 0.0 };
    let d2 = if m >= 2 { 4.0 * lambda * (lambda + 1.0) * gegenbauer_value(lambda + 2.0, m - 2, s) } else { 0.0 };
    [gegenbauer_value(lambda, m, s), d1, d2]
}

/// λ_k = k(k+n)/4.
pub fn eigenvalue(k: usize, n: usize) -> f64 {
    (k * (k + n)) as f64 / 4.0
}

fn binomial(a: i64, b: i64) -> f64 {
    if b < 0 || a < b || a < 0 {
        return 0.0;
    }
    (0..b).fold(1.0, |acc, i| acc * (a - i) as f64 / (i + 1) as f64)
}

/// Dimension of degree-l spherical harmonics on S^{n-1}.
pub fn multiplicity(n: usize, l: usize) -> usize {
    let (n, l) = (n as i64, l as i64);
    (binomial(n + l - 1, l) - binomial(n + l - 3, l - 2)).round() as usize
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// L²-normalized real spherical harmonic of degree l on S^{n-1}.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereHarmonic {
    pub n: usize,
    pub l: usize,
    pub j: usize,
    m: usize,
    sine: bool,
    norm: f64,
    /// Coefficients of the m-th derivative of the Legendre polynomial P_l (n = 3).
    legendre: Vec<f64>,
}

impl SphereHarmonic {
    pub fn new(n: usize, l: usize, j: usize) -> Result<SphereHarmonic> {
        let bad = || Error::InvalidIndex(format!("no spherical harmonic (n={n}, l={l}, j={j})"));
        if n < 2 {
            return Err(bad());
        }
        if j >= multiplicity(n, l) {
            return Err(bad());
        }
        let mut h = SphereHarmonic { n, l, j, m: 0, sine: false, norm: 0.0, legendre: vec![] };
        match n {
            2 => {
                h.m = l;
                h.sine = j == 1;
                h.norm = if l == 0 { 1.0 / (2.0 * PI).sqrt() } else { 1.0 / PI.sqrt() };
            }
            3 => {
                h.m = (j + 1) / 2;
                h.sine = j > 0 && j % 2 == 0;
                let m = h.m;
                let mut c = (2 * l + 1) as f64 / (4.0 * PI) * factorial(l - m) / factorial(l + m);
                if m > 0 {
                    c *= 2.0;
                }
                h.norm = c.sqrt();
                let mut p = vec![0.0; l + 1];
                for k in 0..=l / 2 {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    p[l - 2 * k] = sign * binomial(l as i64, k as i64) * binomial((2 * l - 2 * k) as i64, l as i64) / 2f64.powi(l as i32);
                }
                h.legendre = (0..=(l - m)).map(|i| p[i + m] * factorial(i + m) / factorial(i)).collect();
            }
            _ => {
                if l != 0 {
                    return Err(Error::InvalidIndex(format!("only l = 0 harmonics are available for n = {n}")));
                }
                h.norm = 1.0 / sphere_measure(n).sqrt();
            }
        }
        Ok(h)
    }

    /// The solid harmonic H_l(x) = |x|^l Y_l(x/|x|), a homogeneous polynomial.
    pub fn solid<T: Ring>(&self, x: &[T], one: T) -> T {
        if self.l == 0 {
            return one * self.norm;
        }
        let (mut re, mut im) = (one, one * 0.0);
        for _ in 0..self.m {
            let nr = re * x[0] - im * x[1];
            im = re * x[1] + im * x[0];
            re = nr;
        }
        let ang = if self.sine { im } else { re };
        if self.n == 2 {
            return ang * self.norm;
        }
        let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        let deg = self.l - self.m;
        let mut poly = one * 0.0;
        for (i, c) in self.legendre.iter().enumerate() {
            if *c == 0.0 || (deg - i) % 2 == 1 {
                continue;
            }
            let mut term = one * *c;
            for _ in 0..i {
                term = term * x[2];
            }
            for _ in 0..(deg - i) / 2 {
                term = term * r2;
            }
            poly = poly + term;
        }
        ang * poly * self.norm
    }

    pub fn value(&self, w: &Direction) -> f64 {
        self.solid(w.w(), 1.0)
    }
}

/// A Grushin spherical harmonic, normalized to unit L²(Ω, dΩ).
#[derive(Debug, Clone, PartialEq)]
pub struct GrushinHarmonic {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub j: usize,
    y: SphereHarmonic,
    lambda: f64,
    m: usize,
    norm: f64,
}

impl GrushinHarmonic {
    pub fn new(n: usize, k: usize, l: usize, j: usize) -> Result<GrushinHarmonic> {
        if l > k || (k - l) % 2 != 0 {
            return Err(Error::InvalidIndex(format!("need l <= k and l ≡ k mod 2, got k={k}, l={l}")));
        }
        let y = SphereHarmonic::new(n, l, j)?;
        let lambda = l as f64 / 2.0 + n as f64 / 4.0;
        let m = (k - l) / 2;
        let rule = phi_rule(128);
        let a = l as f64 + n as f64 / 2.0;
        let int = rule.integrate(|phi| phi.sin().powf(a) * gegenbauer_value(lambda, m, phi.cos()).powi(2));
        Ok(GrushinHarmonic { n, k, l, j, y, lambda, m, norm: 1.0 / int.sqrt() })
    }

    pub fn eigenvalue(&self) -> f64 {
        eigenvalue(self.k, self.n)
    }

    pub fn is_zonal(&self) -> bool {
        self.l == 0
    }

    pub fn label(&self) -> String {
        format!("g(k={},l={},j={})", self.k, self.l, self.j)
    }

    /// g(φ, w).
    pub fn value(&self, phi: f64, w: &Direction) -> f64 {
        self.norm * phi.sin().powf(self.l as f64 / 2.0) * gegenbauer_value(self.lambda, self.m, phi.cos()) * self.y.value(w)
    }

    pub fn value_polar(&self, p: &Polar) -> f64 {
        self.value(p.phi, &p.dir)
    }

    /// g as a jet in Cartesian coordinates at p.
    pub fn jet(&self, p: &Point, order: Order) -> Result<Jet> {
        let (xs, t) = p.coordinate_jets();
        let rho = gauge_jet(p)?;
        let one = Jet::constant(p.n() + 1, 1.0);
        let h = self.y.solid(&xs[..p.n()], one);
        let s = t * 2.0 * rho.powi(-2);
        let [c0, c1, c2] = gegenbauer(self.lambda, self.m, s.v);
        Ok((h * rho.powi(-(self.l as i32)) * s.lift(c0, c1, c2) * self.norm).with_order(order))
    }
}

/// All harmonics with order k ≤ `max_k`; only zonal ones when n ≥ 4.
pub fn catalog(n: usize, max_k: usize) -> Result<Vec<GrushinHarmonic>> {
    let mut out = Vec::new();
    for k in 0..=max_k {
        for l in (k % 2..=k).step_by(2) {
            if n >= 4 && l > 0 {
                continue;
            }
            for j in 0..multiplicity(n, l) {
                out.push(GrushinHarmonic::new(n, k, l, j)?);
            }
        }
    }
    Ok(out)
}

/// Gram matrix ∫_Ω g_a g_b dΩ on the sphere part of `grid`.
pub fn gram_matrix(hs: &[GrushinHarmonic], grid: &QuadratureGrid) -> Vec<Vec<f64>> {
    let m = hs.len();
    let mut g = vec![vec![0.0; m]; m];
    let n = grid.n as f64;
    for (phi, wphi) in grid.phi.nodes.iter().zip(&grid.phi.weights) {
        let s = phi.sin().powf(n / 2.0);
        for (dir, wd) in grid.sphere.dirs.iter().zip(&grid.sphere.weights) {
            let vals: Vec<f64> = hs.iter().map(|h| h.value(*phi, dir)).collect();
            let w = wphi * wd * s;
            for a in 0..m {
                for b in a..m {
                    g[a][b] += w * vals[a] * vals[b];
                }
            }
        }
    }
    for a in 0..m {
        for b in 0..a {
            g[a][b] = g[b][a];
        }
    }
    g
}

/// Projections d(ρ) = ∫_Ω u Φ dΩ and d'(ρ) = ∫_Ω u_ρ Φ dΩ at each radial node
/// of `grid`, for every harmonic in `hs`. Returns `[harmonic][node] -> (d, d')`.
pub fn project(u: &dyn ScalarField, hs: &[GrushinHarmonic], grid: &QuadratureGrid) -> Result<Vec<Vec<(f64, f64)>>> {
    if grid.mode == SphereMode::Zonal && hs.iter().any(|h| !h.is_zonal()) {
        return Err(Error::InvalidArgument("zonal sphere rule cannot project onto non-zonal harmonics".into()));
    }
    let n = grid.n as f64;
    let mut out = vec![vec![(0.0, 0.0); grid.radial.nodes.len()]; hs.len()];
    // Harmonic values depend only on σ; tabulate once.
    let mut table = Vec::new();
    for (phi, wphi) in grid.phi.nodes.iter().zip(&grid.phi.weights) {
        let s = phi.sin().powf(n / 2.0);
        for (dir, wd) in grid.sphere.dirs.iter().zip(&grid.sphere.weights) {
            let vals: Vec<f64> = hs.iter().map(|h| h.value(*phi, dir)).collect();
            table.push((*phi, *dir, wphi * wd * s, vals));
        }
    }
    for (i, rho) in grid.radial.nodes.iter().enumerate() {
        for (phi, dir, w, vals) in &table {
            let p = crate::geometry::from_polar(&Polar { rho: *rho, phi: *phi, dir: *dir })?;
            let jet = u.jet(&p, Order::Gradient)?;
            let ur = crate::fields::ops::radial_derivative_value(&jet, &p, *rho);
            for (a, v) in vals.iter().enumerate() {
                out[a][i].0 += w * jet.v * v;
                out[a][i].1 += w * ur * v;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::to_polar;

    #[test]
    fn gegenbauer_small_cases() {
        // C^λ_2(s) = 2λ(λ+1)s² - λ.
        let (l, s) = (0.75, 0.3);
        assert!((gegenbauer_value(l, 2, s) - (2.0 * l * (l + 1.0) * s * s - l)).abs() < 1e-15);
        let [_, d1, d2] = gegenbauer(l, 2, s);
        assert!((d1 - 4.0 * l * (l + 1.0) * s).abs() < 1e-15);
        assert!((d2 - 4.0 * l * (l + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn multiplicities() {
        assert_eq!(multiplicity(2, 0), 1);
        assert_eq!(multiplicity(2, 3), 2);
        assert_eq!(multiplicity(3, 2), 5);
        assert_eq!(multiplicity(4, 2), 9);
    }

    #[test]
    fn eigenvalue_table() {
        assert_eq!(eigenvalue(2, 2), 2.0);
        assert_eq!(eigenvalue(1, 3), 1.0);
        assert_eq!(eigenvalue(0, 3), 0.0);
    }

    #[test]
    fn invalid_indices_rejected() {
        assert!(GrushinHarmonic::new(2, 2, 1, 0).is_err());
        assert!(GrushinHarmonic::new(2, 1, 3, 0).is_err());
        assert!(GrushinHarmonic::new(2, 1, 1, 2).is_err());
        assert!(GrushinHarmonic::new(4, 2, 2, 0).is_err());
    }

    #[test]
    fn cartesian_and_polar_forms_agree() {
        for n in [2, 3] {
            for h in catalog(n, 4).unwrap() {
                for p in crate::geometry::sample_points(n, 5, 0.5, 2.0, 3) {
                    let pol = to_polar(&p).unwrap();
                    let a = h.jet(&p, Order::Value).unwrap().v;
                    let b = h.value_polar(&pol);
                    assert!((a - b).abs() < 1e-12, "{} n={n}: {a} vs {b}", h.label());
                }
            }
        }
    }

    #[test]
    fn sphere_harmonics_are_orthonormal_on_s2() {
        let rule = crate::quadrature::SphereRule::product(12, 24);
        let ys: Vec<SphereHarmonic> = (0..=3).flat_map(|l| (0..2 * l + 1).map(move |j| SphereHarmonic::new(3, l, j).unwrap())).collect();
        for a in &ys {
            for b in &ys {
                let s: f64 = rule.dirs.iter().zip(&rule.weights).map(|(d, w)| w * a.value(d) * b.value(d)).sum();
                let e = if a == b { 1.0 } else { 0.0 };
                assert!((s - e).abs() < 1e-13, "l={} j={} vs l={} j={}", a.l, a.j, b.l, b.j);
            }
        }
    }
}
