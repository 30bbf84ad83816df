//! Zero-point mode summation for an ideal-mirror cavity filled with a
//! constant (ε, μ) medium.
//!
//! This is an independent cross-check of the closed forms that uses no
//! scattering or Green-function machinery. For each standing-wave mode
//! (k_z = nπ/d, transverse k, TE/TM) with zero-point energy ħω/2,
//! ω = cK/n_r, K² = k_z² + k², the time-averaged zz stress at a mirror is
//!
//! * TE: −w_B·U·k_z²/K²
//! * TM: w_E·U·k²/K² − w_B·U
//!
//! where U is the mode's mean energy density and (w_E, w_B) weight the
//! electric and magnetic stress against the medium-weighted energy density:
//! (1, 1) for the Minkowski stress, (1/ε, μ) for the vacuum-form Lorentz
//! stress. The mode sum (TM n = 0 at half weight) is damped by e^{−λK},
//! the same integrand with continuous k_z is subtracted, and λ → 0 is
//! reached by Richardson extrapolation in λ².

use crate::closed_forms::{casimir_ideal, lorentz_factor, minkowski_factor, StaticMedium};
use crate::error::{CasimirError, Result};
use crate::summation::CompensatedSum;
use crate::{Engine, C_LIGHT, HBAR};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpec {
    pub medium: StaticMedium,
    /// Mirror separation (m).
    pub d: f64,
    /// Dimensionless cutoffs Λ; the regulator is e^{−K d/Λ}.
    pub cutoff_scales: Vec<f64>,
    /// Number of discrete k_z modes summed.
    pub n_max: usize,
    /// Gauss–Laguerre nodes for the transverse integral.
    pub k_grid: usize,
}

impl OracleSpec {
    pub fn new(medium: StaticMedium, d: f64) -> Self {
        Self {
            medium,
            d,
            cutoff_scales: vec![6.0, 8.0, 12.0, 16.0, 24.0],
            n_max: 2000,
            k_grid: 8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d.is_finite() && self.d > 0.0) {
            return Err(CasimirError::Invalid(format!(
                "oracle separation must be finite and > 0, got {}",
                self.d
            )));
        }
        if self.cutoff_scales.len() < 3 {
            return Err(CasimirError::Invalid(
                "at least 3 cutoff scales are needed for extrapolation".into(),
            ));
        }
        if self.cutoff_scales.iter().any(|&c| !(c.is_finite() && c > 0.5)) {
            return Err(CasimirError::Invalid(
                "cutoff scales must be finite and > 0.5".into(),
            ));
        }
        if !(2..=64).contains(&self.k_grid) {
            return Err(CasimirError::Invalid(format!(
                "k_grid must lie in 2..=64, got {}",
                self.k_grid
            )));
        }
        // Largest cutoff decays slowest; the neglected tail must be < 1e-9 of
        // the leading term.
        let lambda_max = self.cutoff_scales.iter().cloned().fold(0.0, f64::max);
        let n = self.n_max as f64;
        let tail = (-PI * n / lambda_max).exp() * (n + 1.0).powi(3);
        if tail > 1e-9 {
            return Err(CasimirError::Invalid(format!(
                "n_max = {} leaves a regulated tail of {tail:e}",
                self.n_max
            )));
        }
        Ok(())
    }
}

/// Electric and magnetic stress weights of a prescription.
fn weights(medium: StaticMedium, which: Engine) -> (f64, f64) {
    match which {
        Engine::Minkowski => (1.0, 1.0),
        Engine::Lorentz => (1.0 / medium.eps(), medium.mu()),
    }
}

/// Gauss–Laguerre nodes and weights for ∫₀^∞ f(s) e^{−s} ds.
fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
            }
        };
        let mut dp = 0.0;
        for _ in 0..100 {
            // Recurrence for L_n(z) and L_{n-1}(z).
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0 - z) * p2 - jf * p3) / (jf + 1.0);
            }
            dp = nf * (p1 - p2) / z;
            let step = p1 / dp;
            z -= step;
            if step.abs() <= 1e-15 * z.abs() {
                break;
            }
        }
        let (mut p1, mut p2) = (1.0, 0.0);
        for j in 0..n {
            let p3 = p2;
            p2 = p1;
            let jf = j as f64;
            p1 = ((2.0 * jf + 1.0 - z) * p2 - jf * p3) / (jf + 1.0);
        }
        let _ = p1;
        nodes[i] = z;
        weights[i] = -1.0 / (dp * nf * p2);
    }
    (nodes, weights)
}

/// Mode-summed stress density at one k_z with regulator e^{−λK}, integrated
/// over transverse k: (ħc/4πn_r)∫_{k_z}^∞ K²·w(k_z, K)·e^{−λK} dK.
struct Transverse {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    w_e: f64,
    w_b: f64,
    prefactor: f64,
}

impl Transverse {
    fn new(spec: &OracleSpec, which: Engine) -> Self {
        let (nodes, weights) = gauss_laguerre(spec.k_grid);
        let (w_e, w_b) = weights_of(spec.medium, which);
        let n_r = (spec.medium.eps() * spec.medium.mu()).sqrt();
        Self {
            nodes,
            weights,
            w_e,
            w_b,
            prefactor: HBAR * C_LIGHT / (4.0 * PI * n_r),
        }
    }

    fn at(&self, kz: f64, lambda: f64) -> f64 {
        let kz2 = kz * kz;
        let mut acc = CompensatedSum::new();
        for (s, w) in self.nodes.iter().zip(&self.weights) {
            let big_k = kz + s / lambda;
            let k2 = big_k * big_k;
            // K²·[w_E k²/K² − w_B (1 + k_z²/K²)]
            let integrand = self.w_e * (k2 - kz2) - self.w_b * (k2 + kz2);
            acc.add(w * integrand);
        }
        self.prefactor * (-lambda * kz).exp() / lambda * acc.value()
    }
}

fn weights_of(medium: StaticMedium, which: Engine) -> (f64, f64) {
    weights(medium, which)
}

/// Regularized wall stress at one cutoff: discrete sum minus continuum.
fn regulated_difference(spec: &OracleSpec, tr: &Transverse, cutoff: f64) -> f64 {
    let lambda = spec.d / cutoff;
    let step = PI / spec.d;
    let mut discrete = CompensatedSum::new();
    discrete.add(0.5 * tr.at(0.0, lambda));
    for n in 1..=spec.n_max {
        discrete.add(tr.at(n as f64 * step, lambda));
    }
    // The continuum integrand is e^{−λk_z} times a quadratic in k_z, so
    // Gauss–Laguerre in λk_z is exact.
    let mut continuum = CompensatedSum::new();
    for (s, w) in tr.nodes.iter().zip(&tr.weights) {
        let kz = s / lambda;
        continuum.add(w * tr.at(kz, lambda) * (lambda * kz).exp());
    }
    discrete.value() / spec.d - continuum.value() / (PI * lambda)
}

/// Neville extrapolation to λ² = 0 using the first `m` samples.
fn extrapolate(samples: &[(f64, f64)], m: usize) -> f64 {
    let mut p: Vec<f64> = samples[..m].iter().map(|s| s.1).collect();
    let x: Vec<f64> = samples[..m].iter().map(|s| s.0).collect();
    for level in 1..m {
        for i in 0..m - level {
            p[i] = (x[i + level] * p[i] - x[i] * p[i + 1]) / (x[i + level] - x[i]);
        }
    }
    p[0]
}

/// Regularized attraction per unit area (Pa) of the ideal-mirror cavity.
pub fn oracle_force(spec: &OracleSpec, which: Engine) -> Result<f64> {
    spec.validate()?;
    let tr = Transverse::new(spec, which);
    // Finest cutoff (smallest λ²) last.
    let mut cutoffs = spec.cutoff_scales.clone();
    cutoffs.sort_by(|a, b| a.total_cmp(b));
    let samples: Vec<(f64, f64)> = cutoffs
        .iter()
        .map(|&c| {
            let lambda = spec.d / c;
            (lambda * lambda, regulated_difference(spec, &tr, c))
        })
        .collect();
    let m = samples.len();
    let previous = extrapolate(&samples[1..], m - 1);
    let latest = extrapolate(&samples, m);
    if ((latest - previous) / latest).abs() > 0.01 {
        return Err(CasimirError::ExtrapolationUnstable { previous, latest });
    }
    Ok(latest)
}

/// One row of a medium-factor scan: measured factors are oracle forces
/// divided by ħcπ²/240d⁴.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorRow {
    pub eps: f64,
    pub mu: f64,
    pub lorentz_measured: f64,
    pub lorentz_display: f64,
    pub minkowski_measured: f64,
    pub minkowski_display: f64,
}

pub fn factor_scan(media: &[StaticMedium], template: &OracleSpec) -> Result<Vec<FactorRow>> {
    let ideal = casimir_ideal(template.d);
    media
        .iter()
        .map(|&m| {
            let spec = OracleSpec {
                medium: m,
                ..template.clone()
            };
            Ok(FactorRow {
                eps: m.eps(),
                mu: m.mu(),
                lorentz_measured: oracle_force(&spec, Engine::Lorentz)? / ideal,
                lorentz_display: lorentz_factor(m),
                minkowski_measured: oracle_force(&spec, Engine::Minkowski)? / ideal,
                minkowski_display: minkowski_factor(m),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_rule_integrates_polynomials() {
        let (x, w) = gauss_laguerre(6);
        // ∫ s^m e^{-s} = m!
        let mut fact = 1.0;
        for m in 0..12 {
            if m > 0 {
                fact *= m as f64;
            }
            let q: f64 = x.iter().zip(&w).map(|(s, w)| w * s.powi(m)).sum();
            assert!(((q - fact) / fact).abs() < 1e-11, "m = {m}: {q} vs {fact}");
        }
    }

    #[test]
    fn vacuum_reproduces_casimir() {
        let spec = OracleSpec::new(StaticMedium::VACUUM, 1e-6);
        let exact = casimir_ideal(1e-6);
        for e in [Engine::Lorentz, Engine::Minkowski] {
            let f = oracle_force(&spec, e).unwrap();
            assert!(((f - exact) / exact).abs() < 1e-6, "{e}: {f} vs {exact}");
        }
    }

    #[test]
    fn lorentz_factor_in_dielectric() {
        let m = StaticMedium::new(2.0, 1.0).unwrap();
        let spec = OracleSpec::new(m, 1e-6);
        let ideal = casimir_ideal(1e-6);
        let l = oracle_force(&spec, Engine::Lorentz).unwrap() / ideal;
        let mk = oracle_force(&spec, Engine::Minkowski).unwrap() / ideal;
        assert!((l / 0.589_255_650_988_789_6 - 1.0).abs() < 1e-6, "{l}");
        assert!((mk / std::f64::consts::FRAC_1_SQRT_2 - 1.0).abs() < 1e-6, "{mk}");
        assert!((l / mk - 5.0 / 6.0).abs() < 1e-6);
    }

    #[test]
    fn spec_validation() {
        let mut s = OracleSpec::new(StaticMedium::VACUUM, 1e-6);
        s.cutoff_scales = vec![4.0, 8.0];
        assert!(s.validate().is_err());
        let mut s = OracleSpec::new(StaticMedium::VACUUM, 1e-6);
        s.n_max = 10;
        assert!(s.validate().is_err());
    }
}
