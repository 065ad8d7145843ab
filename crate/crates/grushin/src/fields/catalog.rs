//! Named test fields used by the verifier and the CLI.

use super::{profile, Field, ModeField, Polynomial, ProductField, RadialField, SumField, Support};
use crate::error::{Error, Result};
use crate::harmonics::GrushinHarmonic;
use std::sync::Arc;

/// Annulus used by the compactly supported fields.
pub const BUMP: (f64, f64) = (0.5, 2.0);
/// Truncation radius for Gaussian-decay fields.
pub const GAUSS_CUTOFF: f64 = 7.0;

pub const NAMES: &[&str] = &[
    "bump-radial",
    "gauss-radial",
    "bump-k1",
    "bump-k2-zonal",
    "bump-k2",
    "bump-k3",
    "bump-k3-l3",
    "bump-two-mode",
    "gauss-k2",
    "bump-poly",
];

fn bump() -> profile::Profile {
    profile::annular_bump(BUMP.0, BUMP.1)
}

fn annulus() -> Support {
    Support::annular(BUMP.0, BUMP.1)
}

fn mode(n: usize, k: usize, l: usize, j: usize, p: profile::Profile, s: Support) -> Result<Field> {
    Ok(Arc::new(ModeField::new(GrushinHarmonic::new(n, k, l, j)?, p, s)))
}

/// True when the field needs non-zonal harmonics or a general angular rule.
pub fn needs_full_sphere(name: &str) -> bool {
    matches!(name, "bump-k1" | "bump-k2" | "bump-k3" | "bump-k3-l3" | "bump-two-mode" | "bump-poly")
}

/// Names that can be built for spatial dimension n.
pub fn names_for(n: usize) -> Vec<&'static str> {
    NAMES.iter().copied().filter(|name| n <= 3 || !needs_full_sphere(name)).collect()
}

pub fn build(name: &str, n: usize) -> Result<Field> {
    if n < 2 || n > crate::geometry::MAX_N {
        return Err(Error::InvalidArgument(format!("n = {n} out of range")));
    }
    if n > 3 && needs_full_sphere(name) {
        return Err(Error::Capability(format!("field {name} needs non-zonal harmonics, unavailable for n = {n}")));
    }
    match name {
        "bump-radial" => Ok(Arc::new(RadialField::new(n, bump(), annulus()))),
        "gauss-radial" => Ok(Arc::new(RadialField::new(n, profile::gaussian(1.0), Support::decaying(GAUSS_CUTOFF, 0.0)))),
        "bump-k1" => mode(n, 1, 1, 0, bump(), annulus()),
        "bump-k2-zonal" => mode(n, 2, 0, 0, bump(), annulus()),
        "bump-k2" => mode(n, 2, 2, 1, bump(), annulus()),
        "bump-k3" => mode(n, 3, 1, 0, profile::modulated_bump(BUMP.0, BUMP.1, vec![1.0, -0.4]), annulus()),
        "bump-k3-l3" => mode(n, 3, 3, 0, bump(), annulus()),
        "bump-two-mode" => {
            let a = mode(n, 1, 1, 0, profile::modulated_bump(BUMP.0, BUMP.1, vec![0.5, 0.3]), annulus())?;
            let b = mode(n, 2, 0, 0, bump(), annulus())?;
            Ok(Arc::new(SumField { parts: vec![a, b] }))
        }
        "gauss-k2" => {
            let p = profile::power(1.0, 2.0).mul(&profile::gaussian(1.0));
            mode(n, 2, 0, 0, p, Support::decaying(GAUSS_CUTOFF, 2.0))
        }
        "bump-poly" => {
            let poly: Field = Arc::new(Polynomial::random(n, 3, 11));
            let r: Field = Arc::new(RadialField::new(n, bump(), annulus()));
            Ok(Arc::new(ProductField { a: poly, b: r }))
        }
        _ => Err(Error::InvalidArgument(format!("unknown field {name}; known: {}", NAMES.join(", ")))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{fd_crosscheck, Symmetry};
    use crate::geometry::sample_points;

    #[test]
    fn all_fields_build_and_differentiate() {
        for n in [2, 3, 4] {
            for name in names_for(n) {
                let u = build(name, n).unwrap();
                for p in sample_points(n, 6, 0.7, 1.8, 21) {
                    let e = fd_crosscheck(u.as_ref(), &p, 1e-5).unwrap();
                    assert!(e < 1e-5, "{name} n={n}: {e}");
                }
            }
        }
    }

    #[test]
    fn symmetry_tags() {
        assert_eq!(build("bump-radial", 2).unwrap().symmetry(), Symmetry::Radial);
        assert_eq!(build("bump-k2-zonal", 4).unwrap().symmetry(), Symmetry::Zonal);
        assert_eq!(build("bump-k1", 3).unwrap().symmetry(), Symmetry::General);
        assert!(build("bump-poly", 2).unwrap().modes().is_none());
        assert_eq!(build("bump-two-mode", 2).unwrap().modes().unwrap().len(), 2);
    }

    #[test]
    fn unknown_or_unsupported() {
        assert!(matches!(build("nope", 2), Err(Error::InvalidArgument(_))));
        assert!(matches!(build("bump-k1", 4), Err(Error::Capability(_))));
    }
}
