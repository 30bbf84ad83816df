//! Minkowski-stress Lifshitz force across medium-filled gaps.
//!
//! Per gap the attraction is
//! S(d) = (ħ/2π²) ∫dξ ∫dk k κ Σ_p r_p^L r_p^R e^{−2κd} / (1 − r_p^L r_p^R e^{−2κd}),
//! with κ the decay constant of the gap medium. This is the textbook
//! extension of the Lifshitz formula to a filled interspace; it serves as
//! the baseline the Lorentz-force stress is compared against.

use crate::error::Result;
use crate::geometry::{CavitySetup, Distance, GapConfig, GapSide};
use crate::quadrature::{integrate2d, QuadratureSpec};
use crate::scattering::{stack_reflection_pair_from, Medium, TransverseChannel};
use crate::Engine;
use crate::HBAR;

/// ħ/2π², the common prefactor of all stress integrals.
pub(crate) const STRESS_PREFACTOR: f64 = HBAR / (2.0 * std::f64::consts::PI * std::f64::consts::PI);

/// Force per unit area or stress (Pa) with its quadrature error.
///
/// For gap quantities a positive value means the two reflectors attract;
/// for plate forces a positive value points towards wall3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StressResult {
    pub value: f64,
    pub err_estimate: f64,
    pub engine: Engine,
    /// Offset within a gap, present only for Lorentz stress profiles.
    pub position: Option<f64>,
}

impl StressResult {
    pub(crate) fn zero(engine: Engine) -> Self {
        Self {
            value: 0.0,
            err_estimate: 0.0,
            engine,
            position: None,
        }
    }

    /// `self − other`, errors added.
    pub(crate) fn minus(self, other: StressResult) -> Self {
        Self {
            value: self.value - other.value,
            err_estimate: self.err_estimate + other.err_estimate,
            engine: self.engine,
            position: None,
        }
    }
}

/// Round-trip quantities of one polarization across a gap.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RoundTrip {
    /// e^{−2κd}
    pub decay: f64,
    /// 1 − r^L r^R e^{−2κd}, evaluated without cancellation near 1.
    pub denominator: f64,
    /// r^L r^R e^{−2κd} / denominator
    pub g: f64,
}

impl RoundTrip {
    pub(crate) fn new(r_left: f64, r_right: f64, kappa: f64, width: Distance) -> Self {
        match width {
            Distance::Infinite => Self {
                decay: 0.0,
                denominator: 1.0,
                g: 0.0,
            },
            Distance::Finite(d) => {
                let rr = r_left * r_right;
                let em1 = (-2.0 * kappa * d).exp_m1();
                let decay = em1 + 1.0;
                let denominator = (1.0 - rr) - rr * em1;
                let g = if rr == 0.0 || decay == 0.0 {
                    0.0
                } else {
                    rr * decay / denominator
                };
                Self {
                    decay,
                    denominator,
                    g,
                }
            }
        }
    }
}

/// Reflection coefficients `[TE, TM]` of both sides of a gap plus the gap
/// medium response in one channel.
pub(crate) struct GapChannel {
    pub medium: Medium,
    pub left: [f64; 2],
    pub right: [f64; 2],
}

impl GapChannel {
    pub(crate) fn new(gap: &GapConfig, ch: TransverseChannel) -> Result<Self> {
        let medium = Medium::of(gap.medium(), ch)?;
        let left = stack_reflection_pair_from(&medium, gap.medium(), gap.left(), ch)?;
        let right = stack_reflection_pair_from(&medium, gap.medium(), gap.right(), ch)?;
        Ok(Self {
            medium,
            left,
            right,
        })
    }
}

/// Minkowski integrand (before the ħ/2π² prefactor is applied by the caller).
fn attraction_integrand(gap: &GapConfig, xi: f64, k: f64) -> Result<f64> {
    let ch = TransverseChannel::new(xi, k)?;
    let gc = GapChannel::new(gap, ch)?;
    let kappa = gc.medium.kappa;
    let sum_g: f64 = (0..2)
        .map(|p| RoundTrip::new(gc.left[p], gc.right[p], kappa, gap.width()).g)
        .sum();
    Ok(k * kappa * sum_g)
}

/// Attraction per unit area between the two reflectors of `gap`.
pub fn gap_attraction(gap: &GapConfig, spec: &QuadratureSpec) -> Result<StressResult> {
    let d = match gap.width() {
        Distance::Infinite => return Ok(StressResult::zero(Engine::Minkowski)),
        Distance::Finite(d) => d,
    };
    let r = integrate2d(
        |xi, k| Ok(STRESS_PREFACTOR * attraction_integrand(gap, xi, k)?),
        d,
        gap.medium(),
        spec,
    )?;
    Ok(StressResult {
        value: r.value,
        err_estimate: r.err_estimate,
        engine: Engine::Minkowski,
        position: None,
    })
}

/// Net Minkowski force on the plate, positive towards wall3.
pub fn plate_force(cavity: &CavitySetup, spec: &QuadratureSpec) -> Result<StressResult> {
    let s3 = gap_attraction(&cavity.gap_of(GapSide::Gap3), spec)?;
    let s1 = gap_attraction(&cavity.gap_of(GapSide::Gap1), spec)?;
    Ok(s3.minus(s1))
}
