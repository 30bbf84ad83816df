//! Ideal-mirror closed forms for a plate embedded in a medium-filled cavity.
//!
//! Both prescriptions share the structure
//! F = (ħcπ²/240)·factor(ε, μ)·(1/d₃⁴ − 1/d₁⁴), with
//! factor = √(μ/ε)·(2/3 + 1/(3εμ)) for the Lorentz-force stress and
//! factor = √(μ/ε) for the Minkowski prediction. At ε = μ = 1 both reduce
//! to Casimir's ideal-mirror pressure.

use crate::error::{CasimirError, Result};
use crate::geometry::Distance;
use crate::materials::MaterialModel;
use crate::{Engine, C_LIGHT, HBAR};

/// ħcπ²/240 in N·m² (pressure times d⁴).
pub fn casimir_coefficient() -> f64 {
    HBAR * C_LIGHT * std::f64::consts::PI.powi(2) / 240.0
}

/// Casimir's ideal-mirror vacuum pressure ħcπ²/(240 d⁴).
pub fn casimir_ideal(d: f64) -> f64 {
    casimir_coefficient() / d.powi(4)
}

/// Static (ξ → 0) permittivity and permeability of a gap medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticMedium {
    eps: f64,
    mu: f64,
}

impl StaticMedium {
    pub const VACUUM: StaticMedium = StaticMedium { eps: 1.0, mu: 1.0 };

    pub fn new(eps: f64, mu: f64) -> Result<Self> {
        if !(eps.is_finite() && eps >= 1.0) {
            return Err(CasimirError::Invalid(format!(
                "static permittivity must be finite and >= 1, got {eps}"
            )));
        }
        if !(mu.is_finite() && mu > 0.0) {
            return Err(CasimirError::Invalid(format!(
                "static permeability must be finite and > 0, got {mu}"
            )));
        }
        Ok(Self { eps, mu })
    }

    /// Static values of a material model, evaluated at ξ = 0.
    pub fn of(model: &MaterialModel) -> Result<Self> {
        let eps = model.eps_at(0.0)?;
        let mu = model.mu_at(0.0)?;
        Self::new(eps, mu).map_err(|_| {
            CasimirError::UnsupportedModel(format!(
                "no finite static response (eps = {eps}, mu = {mu})"
            ))
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

/// √(μ/ε)·(2/3 + 1/(3εμ)).
pub fn lorentz_factor(m: StaticMedium) -> f64 {
    (m.mu / m.eps).sqrt() * (2.0 / 3.0 + 1.0 / (3.0 * m.eps * m.mu))
}

/// √(μ/ε).
pub fn minkowski_factor(m: StaticMedium) -> f64 {
    (m.mu / m.eps).sqrt()
}

pub fn factor(m: StaticMedium, which: Engine) -> f64 {
    match which {
        Engine::Lorentz => lorentz_factor(m),
        Engine::Minkowski => minkowski_factor(m),
    }
}

/// Force per unit area on the plate (Pa), positive towards wall3.
pub fn plate_force_closed(m: StaticMedium, d1: Distance, d3: Distance, which: Engine) -> Result<f64> {
    if d1.is_infinite() && d3.is_infinite() {
        return Err(CasimirError::Domain(
            "at least one of d1, d3 must be finite".into(),
        ));
    }
    Ok(casimir_coefficient() * factor(m, which) * (d3.inverse_fourth() - d1.inverse_fourth()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn medium(eps: f64, mu: f64) -> StaticMedium {
        StaticMedium::new(eps, mu).unwrap()
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn factors() {
        assert_eq!(lorentz_factor(StaticMedium::VACUUM), 1.0);
        assert!((lorentz_factor(medium(2.0, 1.0)) - 0.58926).abs() < 5e-6);
        assert!((lorentz_factor(medium(1.0, 2.0)) - 1.17851).abs() < 5e-6);
        assert_eq!(minkowski_factor(StaticMedium::VACUUM), 1.0);
        assert!((minkowski_factor(medium(2.0, 1.0)) - 0.70711).abs() < 5e-6);
        assert_eq!(minkowski_factor(medium(4.0, 1.0)), 0.5);
    }

    #[test]
    fn vacuum_anchor() {
        for e in [Engine::Lorentz, Engine::Minkowski] {
            let f = plate_force_closed(StaticMedium::VACUUM, Distance::Infinite, Distance::Finite(1e-6), e).unwrap();
            assert!(((f - 1.300_126e-3) / 1.300_126e-3).abs() < 1e-6, "{f}");
        }
        let f = plate_force_closed(medium(2.0, 1.0), Distance::Infinite, Distance::Finite(1e-6), Engine::Lorentz).unwrap();
        assert!(((f - 7.6611e-4) / 7.6611e-4).abs() < 1e-4, "{f}");
    }

    #[test]
    fn equal_gaps_and_antisymmetry() {
        let m = medium(3.0, 1.5);
        let d = Distance::Finite(0.7e-6);
        assert_eq!(plate_force_closed(m, d, d, Engine::Lorentz).unwrap(), 0.0);
        let (a, b) = (Distance::Finite(0.5e-6), Distance::Finite(2e-6));
        for e in [Engine::Lorentz, Engine::Minkowski] {
            let f = plate_force_closed(m, a, b, e).unwrap();
            let g = plate_force_closed(m, b, a, e).unwrap();
            assert_eq!(f, -g);
        }
        assert!(plate_force_closed(m, Distance::Infinite, Distance::Infinite, Engine::Lorentz).is_err());
    }

    #[test]
    fn ratio_of_factors() {
        for (eps, mu) in [(1.0, 1.0), (2.0, 1.0), (4.0, 1.0), (1.0, 2.0), (3.0, 5.0)] {
            let m = medium(eps, mu);
            let ratio = lorentz_factor(m) / minkowski_factor(m);
            let expected = 2.0 / 3.0 + 1.0 / (3.0 * eps * mu);
            assert!((ratio - expected).abs() < 1e-15);
            assert!(ratio <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn static_values_of_models() {
        let m = StaticMedium::of(&MaterialModel::constant(2.5, 1.5).unwrap()).unwrap();
        assert_eq!((m.eps(), m.mu()), (2.5, 1.5));
        assert!(StaticMedium::of(&MaterialModel::drude(1e16, 1e13).unwrap()).is_err());
        assert!(StaticMedium::of(&MaterialModel::PerfectMirror).is_err());
    }
}
