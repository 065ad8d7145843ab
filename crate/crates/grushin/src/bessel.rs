//! Special functions and Bessel pairs.
//!
//! A pair (V, W) is a Bessel pair in dimension Q on (0, R) when the ODE
//! (r^{Q-1} V y')' + r^{Q-1} W y = 0 has a positive solution f there.

use crate::error::{Error, Result};
use crate::fields::profile::{self, Profile};
use crate::jet::Jet;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Γ(x).
pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// Regularized lower incomplete gamma P(a, x).
pub fn gamma_p(a: f64, x: f64) -> f64 {
    statrs::function::gamma::gamma_lr(a, x)
}

/// Regularized upper incomplete gamma Q(a, x).
pub fn gamma_q(a: f64, x: f64) -> f64 {
    statrs::function::gamma::gamma_ur(a, x)
}

fn bessel_series(nu: u32, s: f64) -> f64 {
    let q = -s * s / 4.0;
    let mut term = (s / 2.0).powi(nu as i32) / (1..=nu).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (k + nu) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn bessel_asymptotic(nu: u32, s: f64) -> f64 {
    let mu = 4.0 * (nu * nu) as f64;
    let (mut p, mut q) = (0.0, 0.0);
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..60 {
        let term = a / s.powi(k);
        if term.abs() > prev || term.abs() < 1e-18 {
            break;
        }
        prev = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        let odd = (2 * k + 1) as f64;
        a *= (mu - odd * odd) / ((k + 1) as f64 * 8.0);
    }
    let chi = s - (2.0 * nu as f64 + 1.0) * PI / 4.0;
    (2.0 / (PI * s)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// J₀ by power series for |s| < 8 and the Hankel asymptotic form otherwise.
pub fn bessel_j0(s: f64) -> f64 {
    let a = s.abs();
    if a < 8.0 {
        bessel_series(0, a)
    } else {
        bessel_asymptotic(0, a)
    }
}

/// J₁, odd in s.
pub fn bessel_j1(s: f64) -> f64 {
    let a = s.abs();
    let v = if a < 8.0 { bessel_series(1, a) } else { bessel_asymptotic(1, a) };
    if s < 0.0 {
        -v
    } else {
        v
    }
}

/// First positive zero of J₀: bisection to bracket, Newton to polish.
pub fn j0_first_zero() -> f64 {
    let (mut lo, mut hi) = (2.0, 3.0);
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if bessel_j0(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut z = 0.5 * (lo + hi);
    for _ in 0..8 {
        let step = bessel_j0(z) / -bessel_j1(z);
        z -= step;
        if step.abs() < 1e-16 {
            break;
        }
    }
    z
}

#[derive(Debug, Clone)]
pub struct BesselPair {
    pub name: String,
    /// Dimension of the ODE (Q, or Q + 2 for the shifted families).
    pub dim: usize,
    pub v: Profile,
    pub w: Profile,
    pub f: Profile,
    /// Outer end R of (0, R); infinite when unbounded.
    pub radius: f64,
    pub params: BTreeMap<String, f64>,
}

impl BesselPair {
    /// Relative ODE residual V f'' + (V' + (Q-1)V/r) f' + W f at r.
    pub fn residual_at(&self, r: f64) -> f64 {
        let [v, v1, _] = self.v.eval(r);
        let w = self.w.value(r);
        let [f, f1, f2] = self.f.eval(r);
        let a = v * f2;
        let b = (v1 + (self.dim as f64 - 1.0) * v / r) * f1;
        let c = w * f;
        let scale = a.abs() + b.abs() + c.abs();
        if scale == 0.0 {
            0.0
        } else {
            (a + b + c).abs() / scale
        }
    }

    pub fn label(&self) -> String {
        let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}({})", self.name, ps.join(","))
    }
}

/// Largest relative ODE residual at the nodes; fails if f is not positive there.
pub fn ode_residual(pair: &BesselPair, nodes: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &r in nodes {
        if !(r > 0.0 && r < pair.radius) {
            return Err(Error::Domain(format!("node {r} outside (0, {})", pair.radius)));
        }
        if !(pair.f.value(r) > 0.0) {
            return Err(Error::NotBesselPair(format!("{}: f({r}) is not positive", pair.label())));
        }
        worst = worst.max(pair.residual_at(r));
    }
    Ok(worst)
}

/// Log-spaced nodes in [a, b].
pub fn log_nodes(a: f64, b: f64, count: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..count).map(|i| (la + (lb - la) * i as f64 / (count as f64 - 1.0)).exp()).collect()
}

/// Parameters understood by pair families.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PairParams {
    pub q: usize,
    pub alpha: Option<f64>,
    pub b: Option<f64>,
    pub radius: Option<f64>,
}

impl PairParams {
    pub fn new(q: usize) -> PairParams {
        PairParams { q, ..Default::default() }
    }
    pub fn alpha(mut self, a: f64) -> Self {
        self.alpha = Some(a);
        self
    }
    pub fn b(mut self, b: f64) -> Self {
        self.b = Some(b);
        self
    }
    pub fn radius(mut self, r: f64) -> Self {
        self.radius = Some(r);
        self
    }
}

fn need(v: Option<f64>, what: &str, family: &str) -> Result<f64> {
    v.ok_or_else(|| Error::InvalidArgument(format!("pair family {family} needs parameter {what}")))
}

/// A named family of Bessel pairs.
pub trait PairFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn build(&self, p: &PairParams) -> Result<BesselPair>;
}

fn pair(name: &str, dim: usize, v: Profile, w: Profile, f: Profile, radius: f64, params: &[(&str, f64)]) -> BesselPair {
    BesselPair {
        name: name.into(),
        dim,
        v,
        w,
        f,
        radius,
        params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
    }
}

struct ConstantPair;
impl PairFamily for ConstantPair {
    fn name(&self) -> &'static str {
        "constant"
    }
    fn build(&self, p: &PairParams) -> Result<BesselPair> {
        Ok(pair(self.name(), p.q, profile::constant(1.0), profile::constant(0.0), profile::constant(1.0), f64::INFINITY, &[("Q", p.q as f64)]))
    }
}

struct PowerHardy;
impl PairFamily for PowerHardy {
    fn name(&self) -> &'static str {
        "power-hardy"
    }
    fn build(&self, p: &PairParams) -> Result<BesselPair> {
        let q = p.q as f64;
        let c = (q - 2.0).powi(2) / 4.0;
        Ok(pair(
            self.name(),
            p.q,
            profile::constant(1.0),
            profile::power(c, -2.0),
            profile::power(1.0, -(q - 2.0) / 2.0),
            f64::INFINITY,
            &[("Q", q)],
        ))
    }
}

struct WeightedPower;
impl PairFamily for WeightedPower {
    fn name(&self) -> &'static str {
        "weighted-power"
    }
    fn build(&self, p: &PairParams) -> Result<BesselPair> {
        let q = p.q as f64;
        let a = need(p.alpha, "alpha", self.name())?;
        let c = (q - 2.0 - a).powi(2) / 4.0;
        Ok(pair(
            self.name(),
            p.q,
            profile::power(1.0, -a),
            profile::power(c, -a - 2.0),
            profile::power(1.0, (2.0 - q + a) / 2.0),
            f64::INFINITY,
            &[("Q", q), ("alpha", a)],
        ))
    }
}

struct BrezisVazquez;
impl PairFamily for BrezisVazquez {
    fn name(&self) -> &'static str {
        "brezis-vazquez"
    }
    fn build(&self, p: &PairParams) -> Result<BesselPair> {
        let q = p.q as f64;
        let radius = need(p.radius, "radius", self.name())?;
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument("radius must be positive".into()));
        }
        let z0 = j0_first_zero();
        let c = (q - 2.0).powi(2) / 4.0;
        let k = z0 * z0 / (radius * radius);
        let w = Profile::new(format!("{c}/r^2+{k}"), move |r| r.powi(-2) * c + k);
        let f = profile::power(1.0, -(q - 2.0) / 2.0).mul(&profile::bessel_j0_scaled(z0 / radius));
        Ok(pair(self.name(), p.q, profile::constant(1.0), w, f, radius, &[("Q", q), ("R", radius)]))
    }
}

struct Heisenberg;
impl PairFamily for Heisenberg {
    fn name(&self) -> &'static str {
        "heisenberg"
    }
    fn build(&self, p: &PairParams) -> Result<BesselPair> {
        let q = p.q as f64;
        let w = Profile::new(format!("{}-r^2", q + 2.0), move |r| r * r * -1.0 + (q + 2.0));
        Ok(pair(self.name(), p.q + 2, profile::constant(1.0), w, profile::gaussian(0.5), f64::INFINITY, &[("Q", q)]))
    }
}

struct Hydrogen;
impl PairFamily for Hydrogen {
    fn name(&self) -> &'static str {
        "hydrogen"
    }
    fn build(&self, p: &PairParams) -> Result<BesselPair> {
        let q = p.q as f64;
        let w = Profile::new(format!("{}/r-1", q + 1.0), move |r| r.recip() * (q + 1.0) - 1.0);
        let f = Profile::exp_of("exp(-r)", |r| r * -1.0);
        Ok(pair(self.name(), p.q + 2, profile::constant(1.0), w, f, f64::INFINITY, &[("Q", q)]))
    }
}

struct CknSub;
impl PairFamily for CknSub {
    fn name(&self) -> &'static str {
        "ckn-sub"
    }
    fn build(&self, p: &PairParams) -> Result<BesselPair> {
        let q = p.q as f64;
        let b = need(p.b, "b", self.name())?;
        if b >= 1.0 {
            return Err(Error::InvalidArgument(format!("ckn-sub needs b < 1, got {b}")));
        }
        let w = Profile::new(format!("{}/r^{}-r^{}", q + 1.0 - b, b + 1.0, -2.0 * b), move |r| {
            r.powf(-b - 1.0) * (q + 1.0 - b) - r.powf(-2.0 * b)
        });
        let d = 1.0 - b;
        let f = Profile::exp_of(format!("exp(-r^{d}/{d})"), move |r| r.powf(d) * (-1.0 / d));
        Ok(pair(self.name(), p.q + 2, profile::constant(1.0), w, f, f64::INFINITY, &[("Q", q), ("b", b)]))
    }
}

struct CknSuper;
impl PairFamily for CknSuper {
    fn name(&self) -> &'static str {
        "ckn-super"
    }
    fn build(&self, p: &PairParams) -> Result<BesselPair> {
        let q = p.q as f64;
        let b = need(p.b, "b", self.name())?;
        if b <= 1.0 {
            return Err(Error::InvalidArgument(format!("ckn-super needs b > 1, got {b}")));
        }
        let w = Profile::new(format!("{}/r^{}-r^{}", q + b - 1.0, b + 1.0, -2.0 * b), move |r| {
            r.powf(-b - 1.0) * (q + b - 1.0) - r.powf(-2.0 * b)
        });
        let d = b - 1.0;
        let f = Profile::exp_of(format!("r^-{q}exp(-r^-{d}/{d})"), move |r| r.ln() * -q + r.powf(-d) * (-1.0 / d));
        Ok(pair(self.name(), p.q + 2, profile::constant(1.0), w, f, f64::INFINITY, &[("Q", q), ("b", b)]))
    }
}

struct DoubleWeighted;
impl PairFamily for DoubleWeighted {
    fn name(&self) -> &'static str {
        "double-weighted"
    }
    fn build(&self, p: &PairParams) -> Result<BesselPair> {
        let q = p.q as f64;
        let radius = need(p.radius, "radius", self.name())?;
        let c = q * q / 4.0;
        let w = Profile::new(format!("{c}/(r^2(1-(r/R)^Q)^2)"), move |r| {
            let s = (r * (1.0 / radius)).powf(q) * -1.0 + 1.0;
            (r * r * s * s).recip() * c
        });
        let f = Profile::new(format!("r^-{}(1-(r/R)^Q)^1/2", q / 2.0), move |r| {
            let s = (r * (1.0 / radius)).powf(q) * -1.0 + 1.0;
            r.powf(-q / 2.0) * s.sqrt()
        });
        Ok(pair(self.name(), p.q + 2, profile::constant(1.0), w, f, radius, &[("Q", q), ("R", radius)]))
    }
}

/// Registry of named pair families.
pub struct PairCatalog {
    families: BTreeMap<&'static str, Box<dyn PairFamily>>,
}

impl Default for PairCatalog {
    fn default() -> Self {
        let mut c = PairCatalog { families: BTreeMap::new() };
        c.register(Box::new(ConstantPair));
        c.register(Box::new(PowerHardy));
        c.register(Box::new(WeightedPower));
        c.register(Box::new(BrezisVazquez));
        c.register(Box::new(Heisenberg));
        c.register(Box::new(Hydrogen));
        c.register(Box::new(CknSub));
        c.register(Box::new(CknSuper));
        c.register(Box::new(DoubleWeighted));
        c
    }
}

impl PairCatalog {
    pub fn register(&mut self, family: Box<dyn PairFamily>) {
        self.families.insert(family.name(), family);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.keys().copied().collect()
    }

    pub fn build(&self, name: &str, params: &PairParams) -> Result<BesselPair> {
        let fam = self
            .families
            .get(name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown pair family {name}")))?;
        if params.q < 3 {
            return Err(Error::InvalidArgument(format!("pair dimension Q = {} too small", params.q)));
        }
        fam.build(params)
    }
}

/// Build a pair from the default catalog.
pub fn catalog(name: &str, params: &PairParams) -> Result<BesselPair> {
    PairCatalog::default().build(name, params)
}

/// From a (Q+2)-dimensional pair (V, W + Q V'/r) with solution f, the
/// Q-dimensional pair (V, W - (Q-1)(V/r² - V'/r)) with solution r f.
pub fn shift_dimension(p: &BesselPair) -> Result<BesselPair> {
    if p.dim < 6 {
        return Err(Error::DimensionTooSmall { q: p.dim.saturating_sub(2), min: 4 });
    }
    let q = (p.dim - 2) as f64;
    let (v, w) = (p.v.clone(), p.w.clone());
    // The shifted W is only ever evaluated pointwise, so it carries values only.
    let w_new = Profile::new(format!("shift[{}]", p.w.label()), move |r| {
        let x = r.v;
        let [v0, v1, _] = v.eval(x);
        let val = w.value(x) - (q - 1.0) * v0 / (x * x) - v1 / x;
        Jet::constant(r.dim, val).with_order(crate::jet::Order::Value)
    });
    let f = p.f.clone();
    let f_new = Profile::new(format!("r*{}", p.f.label()), move |r| r * f.apply(r));
    let mut params = p.params.clone();
    params.insert("shifted".into(), 1.0);
    Ok(BesselPair {
        name: format!("{}-shifted", p.name),
        dim: p.dim - 2,
        v: p.v.clone(),
        w: w_new,
        f: f_new,
        radius: p.radius,
        params,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondResult {
    pub min: f64,
    pub satisfied: bool,
}

/// Condition (Q-5)V/r² + 3V'/r - V'' ≥ 0 on the nodes, with Q = pair dimension.
pub fn cond_check(pair: &BesselPair, nodes: &[f64]) -> CondResult {
    let q = pair.dim as f64;
    let min = nodes
        .iter()
        .map(|&r| {
            let [v, v1, v2] = pair.v.eval(r);
            (q - 5.0) * v / (r * r) + 3.0 * v1 / r - v2
        })
        .fold(f64::INFINITY, f64::min);
    CondResult { min, satisfied: min >= -1e-12 }
}

/// Solve (r^{Q-1}V y')' + r^{Q-1}W y = 0 from r0 with y(r0) = 1, y'(r0) = slope
/// by adaptive RK4 (step doubling) and return a pair whose f is the quintic
/// Hermite interpolant of the solution on [r_lo, r_hi].
pub fn integrate_pair(
    name: &str,
    dim: usize,
    v: Profile,
    w: Profile,
    r0: f64,
    slope: f64,
    r_lo: f64,
    r_hi: f64,
) -> Result<BesselPair> {
    if !(r_lo > 0.0 && r_lo <= r0 && r0 <= r_hi) {
        return Err(Error::InvalidArgument("need 0 < r_lo <= r0 <= r_hi".into()));
    }
    let qm1 = dim as f64 - 1.0;
    let rhs = |r: f64, y: [f64; 2]| -> [f64; 2] {
        let [vv, v1, _] = v.eval(r);
        let ww = w.value(r);
        let ypp = -((v1 + qm1 * vv / r) * y[1] + ww * y[0]) / vv;
        [y[1], ypp]
    };
    let rk4 = |r: f64, y: [f64; 2], h: f64| -> [f64; 2] {
        let k1 = rhs(r, y);
        let k2 = rhs(r + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
        let k3 = rhs(r + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
        let k4 = rhs(r + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ]
    };
    let sweep = |target: f64| -> Result<Vec<(f64, [f64; 2])>> {
        let mut out = vec![(r0, [1.0, slope])];
        let (mut r, mut y) = (r0, [1.0, slope]);
        let dir = if target >= r0 { 1.0 } else { -1.0 };
        let mut h = dir * (target - r0).abs().max(1e-12) / 64.0;
        let mut steps = 0;
        while (target - r) * dir > 1e-14 * target.abs() {
            if (r + h - target) * dir > 0.0 {
                h = target - r;
            }
            let full = rk4(r, y, h);
            let half = rk4(r + h / 2.0, rk4(r, y, h / 2.0), h / 2.0);
            let err = ((full[0] - half[0]).abs() / (half[0].abs() + 1e-300))
                .max((full[1] - half[1]).abs() / (half[1].abs() + half[0].abs() / r.abs().max(1e-12)));
            if err < 1e-13 || h.abs() < 1e-14 {
                r += h;
                y = half;
                out.push((r, y));
                if err < 1e-15 {
                    h *= 2.0;
                }
            } else {
                h /= 2.0;
            }
            steps += 1;
            if steps > 2_000_000 {
                return Err(Error::Convergence(format!("ODE integration for {name} did not finish")));
            }
        }
        Ok(out)
    };
    let mut lower = sweep(r_lo)?;
    lower.reverse();
    lower.pop();
    let mut table = lower;
    table.extend(sweep(r_hi)?);
    let table: Vec<(f64, [f64; 3])> = table
        .into_iter()
        .map(|(r, y)| (r, [y[0], y[1], rhs(r, y)[1]]))
        .collect();
    if table.iter().any(|(_, y)| !(y[0] > 0.0)) {
        return Err(Error::NotBesselPair(format!("{name}: integrated solution changes sign")));
    }
    let f = Profile::new(format!("ode[{name}]"), move |r| {
        let [a, b, c] = hermite5(&table, r.v);
        r.lift(a, b, c)
    });
    Ok(BesselPair {
        name: name.into(),
        dim,
        v,
        w,
        f,
        radius: r_hi,
        params: BTreeMap::new(),
    })
}

fn hermite5(table: &[(f64, [f64; 3])], r: f64) -> [f64; 3] {
    let i = match table.binary_search_by(|(x, _)| x.partial_cmp(&r).unwrap()) {
        Ok(i) => return table[i].1,
        Err(0) => 0,
        Err(i) if i >= table.len() => table.len() - 2,
        Err(i) => i - 1,
    };
    let (x0, y0) = table[i];
    let (x1, y1) = table[i + 1];
    let h = x1 - x0;
    let s = (r - x0) / h;
    // Quintic Hermite basis and its first two derivatives in s.
    let (s2, s3, s4, s5) = (s * s, s * s * s, s.powi(4), s.powi(5));
    let b = [
        1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5,
        s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5,
        0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5,
        10.0 * s3 - 15.0 * s4 + 6.0 * s5,
        -4.0 * s3 + 7.0 * s4 - 3.0 * s5,
        0.5 * s3 - s4 + 0.5 * s5,
    ];
    let db = [
        -30.0 * s2 + 60.0 * s3 - 30.0 * s4,
        1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4,
        s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4,
        30.0 * s2 - 60.0 * s3 + 30.0 * s4,
        -12.0 * s2 + 28.0 * s3 - 15.0 * s4,
        1.5 * s2 - 4.0 * s3 + 2.5 * s4,
    ];
    let ddb = [
        -60.0 * s + 180.0 * s2 - 120.0 * s3,
        -36.0 * s + 96.0 * s2 - 60.0 * s3,
        1.0 - 9.0 * s + 18.0 * s2 - 10.0 * s3,
        60.0 * s - 180.0 * s2 + 120.0 * s3,
        -24.0 * s + 84.0 * s2 - 60.0 * s3,
        3.0 * s - 12.0 * s2 + 10.0 * s3,
    ];
    let c = [y0[0], h * y0[1], h * h * y0[2], y1[0], h * y1[1], h * h * y1[2]];
    let dot = |w: &[f64; 6]| w.iter().zip(&c).map(|(a, b)| a * b).sum::<f64>();
    [dot(&b), dot(&db) / h, dot(&ddb) / (h * h)]
}
