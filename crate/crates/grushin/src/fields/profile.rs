//! Radial profiles F(r) with exact first and second derivatives.

use crate::bessel::{bessel_j0, bessel_j1, gamma, gamma_p, gamma_q};
use crate::jet::Jet;
use std::fmt;
use std::sync::Arc;

type ProfileFn = dyn Fn(Jet) -> Jet + Send + Sync;

/// A scalar function of one variable, written once over jets so its
/// derivatives come out exactly.
#[derive(Clone)]
pub struct Profile {
    label: String,
    f: Arc<ProfileFn>,
    /// ln F, when F is known to be positive; keeps F'/F exact where F underflows.
    log: Option<Arc<ProfileFn>>,
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile({})", self.label)
    }
}

impl Profile {
    pub fn new(label: impl Into<String>, f: impl Fn(Jet) -> Jet + Send + Sync + 'static) -> Profile {
        Profile { label: label.into(), f: Arc::new(f), log: None }
    }

    /// e^{h(r)}, remembering h.
    pub fn exp_of(label: impl Into<String>, h: impl Fn(Jet) -> Jet + Send + Sync + 'static) -> Profile {
        let h: Arc<ProfileFn> = Arc::new(h);
        let e = h.clone();
        Profile { label: label.into(), f: Arc::new(move |r| e(r).exp()), log: Some(h) }
    }

    /// F'/F at r.
    pub fn log_derivative(&self, r: f64) -> f64 {
        match &self.log {
            Some(h) => h(Jet::variable(1, 0, r)).g[0],
            None => {
                let [v, d, _] = self.eval(r);
                d / v
            }
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// (F, F', F'') at r.
    pub fn eval(&self, r: f64) -> [f64; 3] {
        let j = (self.f)(Jet::variable(1, 0, r));
        [j.v, j.g[0], j.h[0][0]]
    }

    pub fn value(&self, r: f64) -> f64 {
        self.eval(r)[0]
    }

    /// F ∘ ρ as a jet in the variables of `rho`.
    pub fn compose(&self, rho: &Jet) -> Jet {
        let [a, b, c] = self.eval(rho.v);
        rho.lift(a, b, c)
    }

    pub fn apply(&self, r: Jet) -> Jet {
        (self.f)(r)
    }

    pub fn mul(&self, other: &Profile) -> Profile {
        let (a, b) = (self.f.clone(), other.f.clone());
        let mut p = Profile::new(format!("{}*{}", self.label, other.label), move |r| a(r) * b(r));
        if let (Some(la), Some(lb)) = (self.log.clone(), other.log.clone()) {
            p.log = Some(Arc::new(move |r| la(r) + lb(r)));
        }
        p
    }

    pub fn scale(&self, c: f64) -> Profile {
        let a = self.f.clone();
        let mut p = Profile::new(format!("{c}*{}", self.label), move |r| a(r) * c);
        if let (Some(la), true) = (self.log.clone(), c > 0.0) {
            p.log = Some(Arc::new(move |r| la(r) + c.ln()));
        }
        p
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Profile {
        self.label = label.into();
        self
    }
}

pub fn constant(c: f64) -> Profile {
    let mut p = Profile::new(format!("{c}"), move |r| Jet::constant(r.dim, c));
    if c > 0.0 {
        p.log = Some(Arc::new(move |r| Jet::constant(r.dim, c.ln())));
    }
    p
}

/// c · r^k.
pub fn power(c: f64, k: f64) -> Profile {
    let mut p = Profile::new(format!("{c}*r^{k}"), move |r| r.powf(k) * c);
    if c > 0.0 {
        p.log = Some(Arc::new(move |r| r.ln() * k + c.ln()));
    }
    p
}

/// e^{-β r²}.
pub fn gaussian(beta: f64) -> Profile {
    Profile::exp_of(format!("exp(-{beta}r^2)"), move |r| r * r * (-beta))
}

/// (1 + β r) e^{-β r}.
pub fn hydrogen(beta: f64) -> Profile {
    Profile::new(format!("(1+{beta}r)exp(-{beta}r)"), move |r| (r * beta + 1.0) * (r * (-beta)).exp())
}

/// Smooth bump on (a, b): exp(1 - 1/q) with q = (r-a)(b-r)/((b-a)/2)², zero outside.
pub fn annular_bump(a: f64, b: f64) -> Profile {
    let half2 = ((b - a) / 2.0).powi(2);
    Profile::new(format!("bump[{a},{b}]"), move |r| {
        if r.v <= a || r.v >= b {
            return Jet::constant(r.dim, 0.0).with_order(r.order);
        }
        let q = (r - a) * (r * -1.0 + b) * (1.0 / half2);
        (q.recip() * -1.0 + 1.0).exp()
    })
}

/// Bump on (a, b) times the polynomial Σ c_i r^i.
pub fn modulated_bump(a: f64, b: f64, coeffs: Vec<f64>) -> Profile {
    let bump = annular_bump(a, b);
    let label = format!("bump[{a},{b}]*poly{coeffs:?}");
    Profile::new(label, move |r| {
        let mut poly = Jet::constant(r.dim, 0.0);
        for c in coeffs.iter().rev() {
            poly = poly * r + *c;
        }
        bump.apply(r) * poly
    })
}

/// J₀(s r) with exact derivatives.
pub fn bessel_j0_scaled(s: f64) -> Profile {
    Profile::new(format!("J0({s}r)"), move |r| {
        let x = r.v * s;
        let j0 = bessel_j0(x);
        let j1 = bessel_j1(x);
        let d2 = if x.abs() < 1e-8 { -0.5 } else { -j0 + j1 / x };
        r.lift(j0, -s * j1, s * s * d2)
    })
}

/// Radial CKN extremizer with u' = -α r e^{-β r^{1-b}/(1-b)} for b < 1 and
/// u' = -α r^{1-Q} e^{-β r^{1-b}/(b-1)} for b > 1, decaying at infinity.
pub fn ckn_extremizer(q: usize, b: f64, alpha: f64, beta: f64) -> Profile {
    let qf = q as f64;
    Profile::new(format!("ckn(b={b},alpha={alpha},beta={beta})"), move |r| {
        let x = r.v;
        if b < 1.0 {
            let d = 1.0 - b;
            let y = beta * x.powf(d) / d;
            let e = (-y).exp();
            let a = 2.0 / d;
            let value = alpha * (d / beta).powf(a) / d * gamma(a) * gamma_q(a, y);
            let d1 = -alpha * x * e;
            let d2 = -alpha * e * (1.0 - beta * x.powf(d));
            r.lift(value, d1, d2)
        } else {
            let d = b - 1.0;
            let y = beta * x.powf(-d) / d;
            let e = (-y).exp();
            let a = (qf - 2.0) / d;
            let value = alpha * (beta / d).powf(-a) / d * gamma(a) * gamma_p(a, y);
            let d1 = -alpha * x.powf(1.0 - qf) * e;
            let d2 = -alpha * x.powf(-qf) * e * ((1.0 - qf) + beta * x.powf(-d));
            r.lift(value, d1, d2)
        }
    })
}
