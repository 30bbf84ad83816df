//! Lorentz-force Casimir stress in medium-filled gaps.
//!
//! The stress is the vacuum-form Maxwell stress of the macroscopic fields,
//! ε₀E⊗E + μ₀⁻¹B⊗B, i.e. the momentum flux that acts on the internal charges
//! and currents of matter. Relative to the Minkowski stress the electric
//! part is reweighted by 1/ε(iξ) and the magnetic part by μ(iξ) of the gap
//! medium. Only the scattering part of the field correlators enters.
//!
//! Per channel (ξ, k) and polarization p, with κ the gap-medium decay
//! constant, q² = εμξ²/c², N_p = 1 − r_p^L r_p^R e^{−2κd},
//!
//! * g_p = r_p^L r_p^R e^{−2κd} / N_p (two-wall factor, z-independent),
//! * h_p(z) = [r_p^L e^{−2κz} + r_p^R e^{−2κ(d−z)}] / N_p (one-wall factor),
//!
//! the zz-stress integrand splits into the part carried by the field that
//! obeys the scalar wave equation of the polarization (E_y for TE, B_y for
//! TM) and the part carried by the derived field:
//!
//! * direct:  (q²/4κ)·h_p + (q²/2κ)·g_p
//! * derived: −(q²/4κ)·h_p + ((k² + κ²)/2κ)·g_p
//!
//! TE assigns direct → electric, derived → magnetic; TM the reverse. With
//! unit weights the one-wall terms cancel and Σ_p κ g_p, the Lifshitz
//! integrand, remains. With the Lorentz weights they survive with
//! coefficient ±(1 − εμ)μq²/4κ, which makes the stress position dependent
//! whenever εμ ≠ 1.

use crate::error::{CasimirError, Result};
use crate::geometry::{CavitySetup, Distance, GapConfig, GapSide, Layer, LayerStack};
use crate::materials::MaterialModel;
use crate::minkowski::{GapChannel, RoundTrip, StressResult, STRESS_PREFACTOR};
use crate::quadrature::{integrate2d, QuadratureSpec};
use crate::scattering::{plate_reflection_with_self_difference, Medium, TransverseChannel};
use crate::{Engine, C_LIGHT};

/// Electric and magnetic parts of the scattering zz-stress integrand at one
/// offset in a gap, summed over polarizations. Units: Pa per unit ξ and k
/// once multiplied by ħ/2π²; `k` of the polar measure is included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorSplit {
    pub t_electric: f64,
    pub t_magnetic: f64,
}

/// Lorentz stress sampled across one gap of a cavity.
#[derive(Debug, Clone, PartialEq)]
pub struct StressProfile {
    pub gap: GapSide,
    pub positions: Vec<f64>,
    pub values: Vec<f64>,
    pub err_estimates: Vec<f64>,
}

/// Electric/magnetic weights of the stress assembly at one frequency.
#[derive(Debug, Clone, Copy)]
struct Weights {
    electric: f64,
    magnetic: f64,
}

impl Weights {
    fn of(engine: Engine, medium: &Medium) -> Self {
        match engine {
            Engine::Minkowski => Self {
                electric: 1.0,
                magnetic: 1.0,
            },
            Engine::Lorentz => Self {
                electric: 1.0 / medium.eps,
                magnetic: medium.mu,
            },
        }
    }
}

/// One-wall and two-wall factors of one polarization.
#[derive(Debug, Clone, Copy)]
struct WallFactors {
    h: f64,
    g: f64,
}

/// Weighted integrand Σ_p k·[w_E·t_E,p + w_B·t_B,p] from the per-polarization
/// factors (index 0 = TE, 1 = TM). The one-wall coefficient is formed from
/// the weight difference first so it vanishes exactly for equal weights.
fn weighted_integrand(
    weights: Weights,
    q2: f64,
    k: f64,
    kappa: f64,
    factors: [WallFactors; 2],
) -> f64 {
    let h_coef = q2 / (4.0 * kappa);
    let direct_g = q2 / (2.0 * kappa);
    let derived_g = (k * k + kappa * kappa) / (2.0 * kappa);
    let (we, wb) = (weights.electric, weights.magnetic);
    let [te, tm] = factors;
    let te_val = (we - wb) * h_coef * te.h + (we * direct_g + wb * derived_g) * te.g;
    let tm_val = (wb - we) * h_coef * tm.h + (we * derived_g + wb * direct_g) * tm.g;
    k * (te_val + tm_val)
}

fn split(q2: f64, k: f64, kappa: f64, factors: [WallFactors; 2]) -> CorrelatorSplit {
    let h_coef = q2 / (4.0 * kappa);
    let direct_g = q2 / (2.0 * kappa);
    let derived_g = (k * k + kappa * kappa) / (2.0 * kappa);
    let [te, tm] = factors;
    let direct = |f: WallFactors| h_coef * f.h + direct_g * f.g;
    let derived = |f: WallFactors| -h_coef * f.h + derived_g * f.g;
    CorrelatorSplit {
        t_electric: k * (direct(te) + derived(tm)),
        t_magnetic: k * (derived(te) + direct(tm)),
    }
}

fn gap_medium_q2(medium: &MaterialModel, xi: f64) -> Result<f64> {
    Ok(medium.eps_mu_xi2(xi)? / (C_LIGHT * C_LIGHT))
}

fn check_offset(gap: &GapConfig, z: f64) -> Result<()> {
    let inside = match gap.width() {
        Distance::Finite(d) => z > 0.0 && z < d,
        Distance::Infinite => z > 0.0 && z.is_finite(),
    };
    if inside {
        Ok(())
    } else {
        Err(CasimirError::Domain(format!(
            "offset {z} m lies outside the open gap"
        )))
    }
}

fn in_gap_factors(gc: &GapChannel, width: Distance, z: f64) -> [WallFactors; 2] {
    let kappa = gc.medium.kappa;
    let left_decay = (-2.0 * kappa * z).exp();
    let right_decay = match width {
        Distance::Finite(d) => (-2.0 * kappa * (d - z)).exp(),
        Distance::Infinite => 0.0,
    };
    let mut out = [WallFactors { h: 0.0, g: 0.0 }; 2];
    for (p, f) in out.iter_mut().enumerate() {
        let rt = RoundTrip::new(gc.left[p], gc.right[p], kappa, width);
        let num = gc.left[p] * left_decay + gc.right[p] * right_decay;
        *f = WallFactors {
            h: if num == 0.0 { 0.0 } else { num / rt.denominator },
            g: rt.g,
        };
    }
    out
}

/// Electric and magnetic parts of the zz-stress integrand at offset `z`.
pub fn correlator_split(gap: &GapConfig, ch: TransverseChannel, z: f64) -> Result<CorrelatorSplit> {
    check_offset(gap, z)?;
    let gc = GapChannel::new(gap, ch)?;
    let q2 = gap_medium_q2(gap.medium(), ch.xi())?;
    let factors = in_gap_factors(&gc, gap.width(), z);
    Ok(split(q2, ch.k(), gc.medium.kappa, factors))
}

/// Stress at offset `z` with the given prescription. `Engine::Minkowski`
/// integrates t_E + t_B and reproduces the Lifshitz attraction at every z.
pub fn stress_at_with(
    gap: &GapConfig,
    z: f64,
    engine: Engine,
    spec: &QuadratureSpec,
) -> Result<StressResult> {
    check_offset(gap, z)?;
    let d = gap.width().meters().unwrap_or(2.0 * z);
    let kernel = |xi: f64, k: f64| -> Result<f64> {
        let ch = TransverseChannel::new(xi, k)?;
        let gc = GapChannel::new(gap, ch)?;
        let q2 = gap_medium_q2(gap.medium(), xi)?;
        let factors = in_gap_factors(&gc, gap.width(), z);
        let w = Weights::of(engine, &gc.medium);
        Ok(STRESS_PREFACTOR * weighted_integrand(w, q2, k, gc.medium.kappa, factors))
    };
    // The one-wall terms decay on the scale of the nearer wall.
    let scale = match gap.width() {
        Distance::Finite(_) => d.min(4.0 * z.min(d - z)).max(1e-3 * d),
        Distance::Infinite => 2.0 * z,
    };
    let r = integrate2d(kernel, scale, gap.medium(), spec)?;
    Ok(StressResult {
        value: r.value,
        err_estimate: r.err_estimate,
        engine,
        position: Some(z),
    })
}

/// Lorentz-force stress at offset `z` inside `gap`; positive values pull the
/// two reflectors together.
pub fn stress_at(gap: &GapConfig, z: f64, spec: &QuadratureSpec) -> Result<StressResult> {
    stress_at_with(gap, z, Engine::Lorentz, spec)
}

/// Lorentz stress on the uniform open grid z_i = i·d/(n+1), i = 1..n.
pub fn stress_profile(
    cavity: &CavitySetup,
    which: GapSide,
    n_points: usize,
    spec: &QuadratureSpec,
) -> Result<StressProfile> {
    gap_profile(&cavity.gap_of(which), which, n_points, spec)
}

/// As [`stress_profile`] for a standalone gap, labelled `which`.
pub fn gap_profile(
    gap: &GapConfig,
    which: GapSide,
    n_points: usize,
    spec: &QuadratureSpec,
) -> Result<StressProfile> {
    if n_points < 2 {
        return Err(CasimirError::Domain(format!(
            "a profile needs at least 2 points, got {n_points}"
        )));
    }
    let Distance::Finite(d) = gap.width() else {
        return Err(CasimirError::Domain(
            "cannot profile a gap of infinite width".into(),
        ));
    };
    let positions: Vec<f64> = (1..=n_points)
        .map(|i| d * i as f64 / (n_points + 1) as f64)
        .collect();
    let mut values = Vec::with_capacity(n_points);
    let mut errs = Vec::with_capacity(n_points);
    for &z in &positions {
        let s = stress_at(gap, z, spec)?;
        values.push(s.value);
        errs.push(s.err_estimate);
    }
    Ok(StressProfile {
        gap: which,
        positions,
        values,
        err_estimates: errs,
    })
}

/// Stress on one face of the plate, evaluated in the limit z → face from
/// inside the adjacent gap. The plate's own single-reflection term, which is
/// identical for the plate in the cavity and for the same plate isolated in
/// the medium, is removed; the isolated plate feels no net force.
fn plate_face(
    cavity: &CavitySetup,
    which: GapSide,
    engine: Engine,
    spec: &QuadratureSpec,
) -> Result<StressResult> {
    let medium = cavity.medium();
    // Plate layers nearest-to-gap first, the far gap, the far wall, and the
    // wall bounding this gap.
    let (plate, far_gap, far_wall, near_wall, width): (Vec<Layer>, _, &LayerStack, &LayerStack, _) =
        match which {
            GapSide::Gap1 => (
                cavity.plate().to_vec(),
                cavity.d3(),
                cavity.wall3(),
                cavity.wall1(),
                cavity.d1(),
            ),
            GapSide::Gap3 => (
                cavity.plate().iter().rev().cloned().collect(),
                cavity.d1(),
                cavity.wall1(),
                cavity.wall3(),
                cavity.d3(),
            ),
        };
    let scale = match (width, far_gap) {
        (Distance::Finite(d), _) => d,
        (Distance::Infinite, Distance::Finite(d)) => d,
        (Distance::Infinite, Distance::Infinite) => return Ok(StressResult::zero(engine)),
    };
    let kernel = |xi: f64, k: f64| -> Result<f64> {
        let ch = TransverseChannel::new(xi, k)?;
        let gm = Medium::of(medium, ch)?;
        let (r_plate, self_diff) =
            plate_reflection_with_self_difference(&gm, medium, &plate, far_gap, far_wall, ch)?;
        let r_wall = match width {
            Distance::Finite(_) => {
                crate::scattering::stack_reflection_pair_from(&gm, medium, near_wall, ch)?
            }
            Distance::Infinite => [0.0, 0.0],
        };
        let mut factors = [WallFactors { h: 0.0, g: 0.0 }; 2];
        for (p, f) in factors.iter_mut().enumerate() {
            let rt = RoundTrip::new(r_plate[p], r_wall[p], gm.kappa, width);
            let far = r_wall[p] * rt.decay;
            let h = if far == 0.0 {
                self_diff[p]
            } else {
                self_diff[p] + far * (1.0 + r_plate[p] * r_plate[p]) / rt.denominator
            };
            *f = WallFactors { h, g: rt.g };
        }
        let q2 = gap_medium_q2(medium, xi)?;
        let w = Weights::of(engine, &gm);
        Ok(STRESS_PREFACTOR * weighted_integrand(w, q2, k, gm.kappa, factors))
    };
    let r = integrate2d(kernel, scale, medium, spec)?;
    Ok(StressResult {
        value: r.value,
        err_estimate: r.err_estimate,
        engine,
        position: None,
    })
}

/// Net force per unit area on the plate from stresses at its two faces with
/// the given prescription, positive towards wall3.
pub fn plate_force_with(cavity: &CavitySetup, engine: Engine, spec: &QuadratureSpec) -> Result<StressResult> {
    let f3 = plate_face(cavity, GapSide::Gap3, engine, spec)?;
    let f1 = plate_face(cavity, GapSide::Gap1, engine, spec)?;
    Ok(f3.minus(f1))
}

/// Net Lorentz-force Casimir force per unit area on the plate, positive
/// towards wall3.
pub fn plate_force(cavity: &CavitySetup, spec: &QuadratureSpec) -> Result<StressResult> {
    plate_force_with(cavity, Engine::Lorentz, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::casimir_ideal;
    use crate::minkowski;

    fn mirror_gap(d: f64, medium: MaterialModel) -> GapConfig {
        GapConfig::new(
            Distance::Finite(d),
            medium,
            LayerStack::perfect_mirror(),
            LayerStack::perfect_mirror(),
        )
        .unwrap()
    }

    fn ch(xi: f64, k: f64) -> TransverseChannel {
        TransverseChannel::new(xi, k).unwrap()
    }

    #[test]
    fn split_reassembles_lifshitz_integrand() {
        let medium = MaterialModel::constant(2.5, 1.3).unwrap();
        let left = LayerStack::new(
            vec![Layer::new(20e-9, MaterialModel::constant(7.0, 1.0).unwrap()).unwrap()],
            MaterialModel::drude(1.4e16, 5e13).unwrap(),
        )
        .unwrap();
        let right = LayerStack::half_space(MaterialModel::constant(11.0, 2.0).unwrap()).unwrap();
        let d = 300e-9;
        let gap = GapConfig::new(Distance::Finite(d), medium, left, right).unwrap();
        for (xi, k) in [(1e13, 1e5), (4e14, 3e6), (1e15, 1e7)] {
            let c = ch(xi, k);
            let gc = GapChannel::new(&gap, c).unwrap();
            let kappa = gc.medium.kappa;
            let lifshitz: f64 = (0..2)
                .map(|p| k * kappa * RoundTrip::new(gc.left[p], gc.right[p], kappa, gap.width()).g)
                .sum();
            for z in [0.1 * d, 0.37 * d, 0.5 * d, 0.93 * d] {
                let s = correlator_split(&gap, c, z).unwrap();
                let total = s.t_electric + s.t_magnetic;
                assert!(((total - lifshitz) / lifshitz).abs() < 1e-12, "{total} vs {lifshitz}");
            }
        }
    }

    #[test]
    fn zero_contrast_split_vanishes() {
        let m = MaterialModel::constant(2.0, 1.0).unwrap();
        let side = LayerStack::half_space(m.clone()).unwrap();
        let gap = GapConfig::new(Distance::Finite(1e-6), m, side.clone(), side).unwrap();
        let s = correlator_split(&gap, ch(1e14, 1e6), 0.3e-6).unwrap();
        assert_eq!((s.t_electric, s.t_magnetic), (0.0, 0.0));
    }

    #[test]
    fn mirror_boundary_conditions() {
        // Single perfect mirror on the left, medium to the right. Total
        // (bulk + scattering) coincident correlators near the mirror:
        // E_parallel vanishes for both polarizations and B_z for TE.
        let medium = MaterialModel::constant(2.0, 1.5).unwrap();
        let gap = GapConfig::new(
            Distance::Infinite,
            medium.clone(),
            LayerStack::perfect_mirror(),
            LayerStack::half_space(medium.clone()).unwrap(),
        )
        .unwrap();
        let c = ch(3e14, 2e6);
        let gc = GapChannel::new(&gap, c).unwrap();
        let z = 1e-15;
        let f = in_gap_factors(&gc, gap.width(), z);
        // TE: E_y ∝ 1 + (h + 2g), B_z ∝ k²(1 + h + 2g).
        assert!((1.0 + f[0].h + 2.0 * f[0].g).abs() < 1e-6);
        // TM: E_x ∝ ∂z∂z' of the B_y Green function: −1 + (h − 2g).
        assert!((-1.0 + f[1].h - 2.0 * f[1].g).abs() < 1e-6);
    }

    #[test]
    fn vacuum_profile_is_flat_and_equals_lifshitz() {
        let gap = mirror_gap(1e-6, MaterialModel::Vacuum);
        let spec = QuadratureSpec::default();
        let exact = casimir_ideal(1e-6);
        let a = stress_at(&gap, 0.25e-6, &spec).unwrap();
        let b = stress_at(&gap, 0.5e-6, &spec).unwrap();
        assert!(((a.value - exact) / exact).abs() < 1e-7);
        assert!((a.value - b.value).abs() <= 2.0 * (a.err_estimate + b.err_estimate));
    }

    #[test]
    fn medium_profile_depends_on_position() {
        let gap = mirror_gap(1e-6, MaterialModel::constant(2.0, 1.0).unwrap());
        let spec = QuadratureSpec::default();
        let a = stress_at(&gap, 0.25e-6, &spec).unwrap();
        let b = stress_at(&gap, 0.5e-6, &spec).unwrap();
        assert!((a.value - b.value).abs() > 100.0 * (a.err_estimate + b.err_estimate));
        let c = stress_at(&gap, 0.75e-6, &spec).unwrap();
        assert!((a.value - c.value).abs() <= 2.0 * (a.err_estimate + c.err_estimate));
    }

    #[test]
    fn minkowski_weights_reproduce_gap_attraction() {
        let gap = mirror_gap(1e-6, MaterialModel::constant(2.0, 1.0).unwrap());
        let spec = QuadratureSpec::default();
        let m = minkowski::gap_attraction(&gap, &spec).unwrap();
        for z in [0.2e-6, 0.5e-6] {
            let s = stress_at_with(&gap, z, Engine::Minkowski, &spec).unwrap();
            assert!((s.value - m.value).abs() <= 2.0 * (s.err_estimate + m.err_estimate) + 1e-9 * m.value);
        }
    }

    #[test]
    fn offset_outside_gap_is_rejected() {
        let gap = mirror_gap(1e-6, MaterialModel::Vacuum);
        assert!(correlator_split(&gap, ch(1e14, 1e6), 0.0).is_err());
        assert!(correlator_split(&gap, ch(1e14, 1e6), 1e-6).is_err());
        assert!(stress_at(&gap, 2e-6, &QuadratureSpec::default()).is_err());
    }
}
