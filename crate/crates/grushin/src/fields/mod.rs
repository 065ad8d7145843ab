//! Test fields with exact derivatives and the Grushin operators acting on them.

pub mod catalog;
pub mod ops;
pub mod profile;

use crate::error::{Error, Result};
use crate::geometry::{dilate, gauge_jet, Point};
use crate::harmonics::GrushinHarmonic;
use crate::jet::{Jet, Order};
use profile::Profile;
use std::sync::Arc;

pub use ops::{
    compose_with_radial_profile, fd_crosscheck, grushin_gradient, grushin_laplacian, radial_derivative,
    radial_derivative_field, radial_grushin_laplacian, spherical_laplacian_sum, spherical_vector_field,
};

/// Where a field lives radially.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    /// Inner radius; 0 for fields reaching the origin.
    pub lo: f64,
    /// Outer radius, or truncation radius for decaying fields; infinite when unbounded.
    pub hi: f64,
    /// Vanishing order of u at the origin (infinite for annular support).
    pub origin_order: f64,
}

impl Support {
    pub fn annular(lo: f64, hi: f64) -> Support {
        Support { lo, hi, origin_order: f64::INFINITY }
    }
    pub fn decaying(hi: f64, origin_order: f64) -> Support {
        Support { lo: 0.0, hi, origin_order }
    }
    pub fn unbounded() -> Support {
        Support { lo: 0.0, hi: f64::INFINITY, origin_order: 0.0 }
    }
    pub fn is_annular(&self) -> bool {
        self.lo > 0.0 && self.hi.is_finite()
    }
    fn union(&self, o: &Support) -> Support {
        Support { lo: self.lo.min(o.lo), hi: self.hi.max(o.hi), origin_order: self.origin_order.min(o.origin_order) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Symmetry {
    /// Function of ρ only.
    Radial,
    /// Function of |x| and t only.
    Zonal,
    General,
}

/// One term d(ρ) Φ(σ) of a finite harmonic expansion.
#[derive(Debug, Clone)]
pub struct Mode {
    pub harmonic: GrushinHarmonic,
    pub profile: Profile,
}

/// A scalar field on Grushin space carrying exact value, gradient and Hessian.
pub trait ScalarField: Send + Sync {
    fn n(&self) -> usize;
    fn jet(&self, p: &Point, order: Order) -> Result<Jet>;
    fn support(&self) -> Support;
    fn symmetry(&self) -> Symmetry;
    fn label(&self) -> String;

    /// Finite harmonic expansion, when known exactly.
    fn modes(&self) -> Option<Vec<Mode>> {
        None
    }

    fn max_order(&self) -> Order {
        Order::Hessian
    }

    fn value(&self, p: &Point) -> Result<f64> {
        Ok(self.jet(p, Order::Value)?.v)
    }

    fn gradient(&self, p: &Point) -> Result<Vec<f64>> {
        Ok(self.jet(p, Order::Gradient)?.gradient().to_vec())
    }

    fn hessian(&self, p: &Point) -> Result<Vec<Vec<f64>>> {
        let j = self.jet(p, Order::Hessian)?;
        Ok((0..j.dim).map(|i| j.h[i][..j.dim].to_vec()).collect())
    }
}

pub type Field = Arc<dyn ScalarField>;

fn check_order(max: Order, want: Order, label: &str) -> Result<()> {
    if want > max {
        return Err(Error::Capability(format!("{label} does not provide {want:?} derivatives")));
    }
    Ok(())
}

fn check_dim(p: &Point, n: usize) -> Result<()> {
    if p.n() != n {
        return Err(Error::InvalidArgument(format!("point has n = {}, field has n = {n}", p.n())));
    }
    Ok(())
}

/// Polynomial Σ c · x^a t^b.
#[derive(Debug, Clone)]
pub struct Polynomial {
    pub n: usize,
    /// (coefficient, exponents of x_1..x_n then t).
    pub terms: Vec<(f64, Vec<u32>)>,
}

impl Polynomial {
    /// Seeded random polynomial of total degree ≤ `degree`.
    pub fn random(n: usize, degree: u32, seed: u64) -> Polynomial {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut terms = Vec::new();
        let mut exps = vec![0u32; n + 1];
        loop {
            let total: u32 = exps.iter().sum();
            if total <= degree {
                terms.push((rng.gen_range(-1.0..1.0), exps.clone()));
            }
            let mut i = 0;
            loop {
                if i > n {
                    return Polynomial { n, terms };
                }
                exps[i] += 1;
                if exps[i] <= degree {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }
}

impl ScalarField for Polynomial {
    fn n(&self) -> usize {
        self.n
    }
    fn jet(&self, p: &Point, order: Order) -> Result<Jet> {
        check_dim(p, self.n)?;
        let (xs, t) = p.coordinate_jets();
        let mut acc = Jet::constant(self.n + 1, 0.0);
        for (c, e) in &self.terms {
            let mut term = Jet::constant(self.n + 1, *c);
            for (i, k) in e.iter().enumerate() {
                if *k > 0 {
                    let v = if i < self.n { xs[i] } else { t };
                    term = term * v.powi(*k as i32);
                }
            }
            acc = acc + term;
        }
        Ok(acc.with_order(order))
    }
    fn support(&self) -> Support {
        Support::unbounded()
    }
    fn symmetry(&self) -> Symmetry {
        Symmetry::General
    }
    fn label(&self) -> String {
        format!("polynomial({} terms)", self.terms.len())
    }
}

/// u = F(ρ).
#[derive(Debug, Clone)]
pub struct RadialField {
    pub n: usize,
    pub profile: Profile,
    pub support: Support,
}

impl RadialField {
    pub fn new(n: usize, profile: Profile, support: Support) -> RadialField {
        RadialField { n, profile, support }
    }
}

impl ScalarField for RadialField {
    fn n(&self) -> usize {
        self.n
    }
    fn jet(&self, p: &Point, order: Order) -> Result<Jet> {
        check_dim(p, self.n)?;
        Ok(self.profile.compose(&gauge_jet(p)?).with_order(order))
    }
    fn support(&self) -> Support {
        self.support
    }
    fn symmetry(&self) -> Symmetry {
        Symmetry::Radial
    }
    fn label(&self) -> String {
        self.profile.label().to_string()
    }
}

/// u = d(ρ) g(σ) for a Grushin harmonic g.
#[derive(Debug, Clone)]
pub struct ModeField {
    pub harmonic: GrushinHarmonic,
    pub profile: Profile,
    pub support: Support,
}

impl ModeField {
    pub fn new(harmonic: GrushinHarmonic, profile: Profile, support: Support) -> ModeField {
        ModeField { harmonic, profile, support }
    }
}

impl ScalarField for ModeField {
    fn n(&self) -> usize {
        self.harmonic.n
    }
    fn jet(&self, p: &Point, order: Order) -> Result<Jet> {
        check_dim(p, self.harmonic.n)?;
        let rho = gauge_jet(p)?;
        Ok((self.profile.compose(&rho) * self.harmonic.jet(p, order)?).with_order(order))
    }
    fn support(&self) -> Support {
        self.support
    }
    fn symmetry(&self) -> Symmetry {
        if self.harmonic.k == 0 {
            Symmetry::Radial
        } else if self.harmonic.is_zonal() {
            Symmetry::Zonal
        } else {
            Symmetry::General
        }
    }
    fn label(&self) -> String {
        format!("{}*{}", self.profile.label(), self.harmonic.label())
    }
    fn modes(&self) -> Option<Vec<Mode>> {
        Some(vec![Mode { harmonic: self.harmonic.clone(), profile: self.profile.clone() }])
    }
}

/// Σ of fields.
#[derive(Clone)]
pub struct SumField {
    pub parts: Vec<Field>,
}

impl ScalarField for SumField {
    fn n(&self) -> usize {
        self.parts[0].n()
    }
    fn jet(&self, p: &Point, order: Order) -> Result<Jet> {
        let mut acc = Jet::constant(p.n() + 1, 0.0).with_order(order);
        for f in &self.parts {
            acc = acc + f.jet(p, order)?;
        }
        Ok(acc)
    }
    fn support(&self) -> Support {
        self.parts.iter().skip(1).fold(self.parts[0].support(), |s, f| s.union(&f.support()))
    }
    fn symmetry(&self) -> Symmetry {
        self.parts.iter().map(|f| f.symmetry()).max().unwrap_or(Symmetry::Radial)
    }
    fn label(&self) -> String {
        self.parts.iter().map(|f| f.label()).collect::<Vec<_>>().join(" + ")
    }
    fn modes(&self) -> Option<Vec<Mode>> {
        let mut all = Vec::new();
        for f in &self.parts {
            all.extend(f.modes()?);
        }
        Some(all)
    }
    fn max_order(&self) -> Order {
        self.parts.iter().map(|f| f.max_order()).min().unwrap_or(Order::Hessian)
    }
}

/// a · b.
#[derive(Clone)]
pub struct ProductField {
    pub a: Field,
    pub b: Field,
}

impl ScalarField for ProductField {
    fn n(&self) -> usize {
        self.a.n()
    }
    fn jet(&self, p: &Point, order: Order) -> Result<Jet> {
        Ok(self.a.jet(p, order)? * self.b.jet(p, order)?)
    }
    fn support(&self) -> Support {
        let (sa, sb) = (self.a.support(), self.b.support());
        Support { lo: sa.lo.max(sb.lo), hi: sa.hi.min(sb.hi), origin_order: sa.origin_order + sb.origin_order }
    }
    fn symmetry(&self) -> Symmetry {
        self.a.symmetry().max(self.b.symmetry())
    }
    fn label(&self) -> String {
        format!("({})*({})", self.a.label(), self.b.label())
    }
    fn max_order(&self) -> Order {
        self.a.max_order().min(self.b.max_order())
    }
}

/// u · F(ρ) or u / F(ρ).
#[derive(Clone)]
pub struct ProfileComposite {
    pub inner: Field,
    pub profile: Profile,
    pub divide: bool,
}

impl ScalarField for ProfileComposite {
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn jet(&self, p: &Point, order: Order) -> Result<Jet> {
        let f = self.profile.compose(&gauge_jet(p)?);
        if self.divide && f.v == 0.0 {
            return Err(Error::Domain(format!("division by {} = 0", self.profile.label())));
        }
        let u = self.inner.jet(p, order)?;
        Ok(if self.divide { u / f } else { u * f })
    }
    fn support(&self) -> Support {
        self.inner.support()
    }
    fn symmetry(&self) -> Symmetry {
        self.inner.symmetry()
    }
    fn label(&self) -> String {
        format!("({}){}{}", self.inner.label(), if self.divide { "/" } else { "*" }, self.profile.label())
    }
    fn max_order(&self) -> Order {
        self.inner.max_order()
    }
    fn modes(&self) -> Option<Vec<Mode>> {
        let modes = self.inner.modes()?;
        Some(
            modes
                .into_iter()
                .map(|m| {
                    let (a, b, divide) = (m.profile.clone(), self.profile.clone(), self.divide);
                    let label = format!("{}{}{}", a.label(), if divide { "/" } else { "*" }, b.label());
                    Mode {
                        harmonic: m.harmonic,
                        profile: Profile::new(label, move |r| if divide { a.apply(r) / b.apply(r) } else { a.apply(r) * b.apply(r) }),
                    }
                })
                .collect(),
        )
    }
}

/// u_ρ as a field: value and gradient only.
#[derive(Clone)]
pub struct RadialDerivativeField {
    pub inner: Field,
}

impl ScalarField for RadialDerivativeField {
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn jet(&self, p: &Point, order: Order) -> Result<Jet> {
        check_order(Order::Gradient, order, &self.label())?;
        let need = if order == Order::Value { Order::Gradient } else { Order::Hessian };
        let u = self.inner.jet(p, need)?;
        Ok(ops::radial_derivative_jet(&u, p)?.with_order(order))
    }
    fn support(&self) -> Support {
        self.inner.support()
    }
    fn symmetry(&self) -> Symmetry {
        self.inner.symmetry()
    }
    fn label(&self) -> String {
        format!("d_rho({})", self.inner.label())
    }
    fn max_order(&self) -> Order {
        self.inner.max_order().lower()
    }
}

/// u_λ = λ^{(Q-2)/2} u ∘ δ_λ.
#[derive(Clone)]
pub struct DilatedField {
    pub inner: Field,
    pub lambda: f64,
}

impl ScalarField for DilatedField {
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn jet(&self, p: &Point, order: Order) -> Result<Jet> {
        let n = p.n();
        let q = dilate(p, self.lambda)?;
        let mut j = self.inner.jet(&q, order)?;
        let scale: Vec<f64> = (0..=n).map(|i| if i < n { self.lambda } else { self.lambda * self.lambda }).collect();
        for i in 0..=n {
            j.g[i] *= scale[i];
            for k in 0..=n {
                j.h[i][k] *= scale[i] * scale[k];
            }
        }
        Ok(j * self.lambda.powf(n as f64 / 2.0))
    }
    fn support(&self) -> Support {
        let s = self.inner.support();
        Support { lo: s.lo / self.lambda, hi: s.hi / self.lambda, origin_order: s.origin_order }
    }
    fn symmetry(&self) -> Symmetry {
        self.inner.symmetry()
    }
    fn label(&self) -> String {
        format!("dilate({}, {})", self.inner.label(), self.lambda)
    }
    fn modes(&self) -> Option<Vec<Mode>> {
        let (lambda, n) = (self.lambda, self.inner.n());
        let c = lambda.powf(n as f64 / 2.0);
        Some(
            self.inner
                .modes()?
                .into_iter()
                .map(|m| {
                    let p = m.profile.clone();
                    let label = format!("dilate({}, {lambda})", p.label());
                    Mode { harmonic: m.harmonic, profile: Profile::new(label, move |r| p.apply(r * lambda) * c) }
                })
                .collect(),
        )
    }
    fn max_order(&self) -> Order {
        self.inner.max_order()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample_points;

    #[test]
    fn random_polynomial_has_all_low_degree_terms() {
        let p = Polynomial::random(2, 2, 1);
        assert_eq!(p.terms.len(), 10);
    }

    #[test]
    fn radial_derivative_field_refuses_hessian() {
        let u: Field = Arc::new(RadialField::new(2, profile::gaussian(1.0), Support::decaying(8.0, 0.0)));
        let ur = RadialDerivativeField { inner: u };
        let p = Point::new(&[0.4, 0.2], 0.3).unwrap();
        assert!(matches!(ur.hessian(&p), Err(Error::Capability(_))));
        assert!(ur.gradient(&p).is_ok());
    }

    #[test]
    fn dilation_scales_values() {
        let u: Field = Arc::new(RadialField::new(3, profile::gaussian(1.0), Support::decaying(8.0, 0.0)));
        let d = DilatedField { inner: u.clone(), lambda: 2.0 };
        for p in sample_points(3, 5, 0.3, 1.5, 9) {
            let q = dilate(&p, 2.0).unwrap();
            assert!((d.value(&p).unwrap() - 2f64.powf(1.5) * u.value(&q).unwrap()).abs() < 1e-14);
            let e = fd_crosscheck(&d, &p, 1e-5).unwrap();
            assert!(e < 1e-5, "{e}");
        }
    }
}
