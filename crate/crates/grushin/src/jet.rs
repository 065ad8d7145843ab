//! Second-order forward jets: value, gradient and Hessian carried together
//! through arithmetic so every test field has exact derivatives.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// Largest number of variables a jet can carry (x in R^5 plus t).
pub const MAX_VARS: usize = 6;

/// How many derivative orders a jet carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Order {
    Value = 0,
    Gradient = 1,
    Hessian = 2,
}

impl Order {
    pub fn lower(self) -> Order {
        match self {
            Order::Hessian => Order::Gradient,
            _ => Order::Value,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Jet {
    pub dim: usize,
    pub order: Order,
    pub v: f64,
    pub g: [f64; MAX_VARS],
    pub h: [[f64; MAX_VARS]; MAX_VARS],
}

impl Jet {
    pub fn constant(dim: usize, c: f64) -> Jet {
        Jet {
            dim,
            order: Order::Hessian,
            v: c,
            g: [0.0; MAX_VARS],
            h: [[0.0; MAX_VARS]; MAX_VARS],
        }
    }

    /// The i-th coordinate function evaluated at `value`.
    pub fn variable(dim: usize, i: usize, value: f64) -> Jet {
        let mut j = Jet::constant(dim, value);
        j.g[i] = 1.0;
        j
    }

    pub fn with_order(mut self, order: Order) -> Jet {
        if order < self.order {
            self.order = order;
        }
        self
    }

    pub fn gradient(&self) -> &[f64] {
        &self.g[..self.dim]
    }

    pub fn has_hessian(&self) -> bool {
        self.order == Order::Hessian
    }

    /// Chain rule for a scalar function with value `f0`, derivative `f1`, second derivative `f2` at `self.v`.
    pub fn lift(&self, f0: f64, f1: f64, f2: f64) -> Jet {
        let d = self.dim;
        let mut out = Jet::constant(d, f0);
        out.order = self.order;
        if self.order >= Order::Gradient {
            for i in 0..d {
                out.g[i] = f1 * self.g[i];
            }
        }
        if self.order == Order::Hessian {
            for i in 0..d {
                for k in i..d {
                    let val = f2 * self.g[i] * self.g[k] + f1 * self.h[i][k];
                    out.h[i][k] = val;
                    out.h[k][i] = val;
                }
            }
        }
        out
    }

    pub fn exp(&self) -> Jet {
        let e = self.v.exp();
        self.lift(e, e, e)
    }

    pub fn ln(&self) -> Jet {
        self.lift(self.v.ln(), 1.0 / self.v, -1.0 / (self.v * self.v))
    }

    pub fn sqrt(&self) -> Jet {
        let s = self.v.sqrt();
        self.lift(s, 0.5 / s, -0.25 / (s * self.v))
    }

    pub fn powf(&self, a: f64) -> Jet {
        let x = self.v;
        let p = x.powf(a);
        self.lift(p, a * p / x, a * (a - 1.0) * p / (x * x))
    }

    pub fn powi(&self, k: i32) -> Jet {
        let x = self.v;
        match k {
            0 => Jet::constant(self.dim, 1.0).with_order(self.order),
            1 => *self,
            _ => {
                let p2 = if k >= 2 { x.powi(k - 2) } else { 1.0 / x.powi(2 - k) };
                let p1 = p2 * x;
                let p0 = p1 * x;
                let kf = k as f64;
                self.lift(p0, kf * p1, kf * (kf - 1.0) * p2)
            }
        }
    }

    pub fn recip(&self) -> Jet {
        let x = self.v;
        self.lift(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.v.sin_cos();
        self.lift(s, c, -s)
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.v.sin_cos();
        self.lift(c, -s, -c)
    }

    /// Partial derivative along variable `i`, one order lower.
    pub fn partial(&self, i: usize) -> Jet {
        let d = self.dim;
        let mut out = Jet::constant(d, self.g[i]);
        out.order = self.order.lower();
        if self.order == Order::Hessian {
            out.g[..d].copy_from_slice(&self.h[i][..d]);
        }
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, o: Jet) -> Jet {
        let d = self.dim;
        self.v += o.v;
        self.order = self.order.min(o.order);
        for i in 0..d {
            self.g[i] += o.g[i];
        }
        if self.order == Order::Hessian {
            for i in 0..d {
                for k in 0..d {
                    self.h[i][k] += o.h[i][k];
                }
            }
        }
        self
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, o: Jet) {
        *self = *self + o;
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self * -1.0
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let d = self.dim;
        let mut out = Jet::constant(d, self.v * o.v);
        out.order = self.order.min(o.order);
        if out.order >= Order::Gradient {
            for i in 0..d {
                out.g[i] = self.g[i] * o.v + self.v * o.g[i];
            }
        }
        if out.order == Order::Hessian {
            for i in 0..d {
                for k in i..d {
                    let val = self.h[i][k] * o.v
                        + self.v * o.h[i][k]
                        + self.g[i] * o.g[k]
                        + self.g[k] * o.g[i];
                    out.h[i][k] = val;
                    out.h[k][i] = val;
                }
            }
        }
        out
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, c: f64) -> Jet {
        let d = self.dim;
        self.v *= c;
        for i in 0..d {
            self.g[i] *= c;
            for k in 0..d {
                self.h[i][k] *= c;
            }
        }
        self
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, c: f64) -> Jet {
        self.v += c;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, c: f64) -> Jet {
        self.v -= c;
        self
    }
}

/// Minimal ring interface so polynomial code runs on both `f64` and `Jet`.
pub trait Ring: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Mul<f64, Output = Self> {}

impl Ring for f64 {}
impl Ring for Jet {}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(f: impl Fn(&[Jet]) -> Jet, x: &[f64]) {
        let d = x.len();
        let vars: Vec<Jet> = (0..d).map(|i| Jet::variable(d, i, x[i])).collect();
        let j = f(&vars);
        let eval = |y: &[f64]| {
            let vs: Vec<Jet> = (0..d).map(|i| Jet::constant(d, y[i])).collect();
            f(&vs).v
        };
        let h = 1e-4;
        for i in 0..d {
            let mut p = x.to_vec();
            let mut m = x.to_vec();
            p[i] += h;
            m[i] -= h;
            let fd = (eval(&p) - eval(&m)) / (2.0 * h);
            assert!((fd - j.g[i]).abs() < 1e-7 * (1.0 + fd.abs()), "grad {i}: {fd} vs {}", j.g[i]);
            for k in 0..d {
                let gi = |y: &[f64]| {
                    let vs: Vec<Jet> = (0..d).map(|q| Jet::variable(d, q, y[q])).collect();
                    f(&vs).g[i]
                };
                let mut p = x.to_vec();
                let mut m = x.to_vec();
                p[k] += h;
                m[k] -= h;
                let fd2 = (gi(&p) - gi(&m)) / (2.0 * h);
                assert!((fd2 - j.h[i][k]).abs() < 1e-6 * (1.0 + fd2.abs()));
            }
        }
    }

    #[test]
    fn chain_rule_matches_finite_differences() {
        fd_check(|v| (v[0] * v[1]).exp() + v[2].powf(0.25) * v[0].sin(), &[0.3, -0.7, 1.4]);
        fd_check(|v| (v[0] * v[0] + v[1] * v[1]).sqrt() / (v[1].cos() + 2.0), &[0.5, 1.1]);
        fd_check(|v| v[0].powi(-3) * v[1].powi(4) - v[0].ln(), &[1.3, 0.9]);
    }

    #[test]
    fn partial_lowers_order() {
        let x = Jet::variable(2, 0, 2.0);
        let y = Jet::variable(2, 1, 3.0);
        let f = x * x * y;
        let fx = f.partial(0);
        assert_eq!(fx.order, Order::Gradient);
        assert_eq!(fx.v, 12.0);
        assert_eq!(fx.g[0], 6.0);
        assert_eq!(fx.g[1], 4.0);
        assert_eq!(fx.partial(1).order, Order::Value);
    }
}
