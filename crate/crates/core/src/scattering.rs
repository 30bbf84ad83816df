//! TE/TM reflection coefficients of planar layer stacks at imaginary
//! frequency.
//!
//! Conventions: TM coefficients refer to the magnetic field amplitude, so a
//! perfect mirror reflects with r_TM = +1 and r_TE = −1. All exponentials
//! are decaying (`e^{−2κt}`), which keeps the recursion stable.

use crate::error::{CasimirError, Result};
use crate::geometry::{Distance, Layer, LayerStack};
use crate::materials::MaterialModel;
use crate::C_LIGHT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    TE,
    TM,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::TE, Polarization::TM];

    fn index(self) -> usize {
        match self {
            Polarization::TE => 0,
            Polarization::TM => 1,
        }
    }
}

/// A plane-wave channel: imaginary angular frequency ξ (rad/s) and transverse
/// wavenumber k (1/m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseChannel {
    xi: f64,
    k: f64,
}

impl TransverseChannel {
    pub fn new(xi: f64, k: f64) -> Result<Self> {
        if !(xi.is_finite() && xi >= 0.0 && k.is_finite() && k >= 0.0) {
            return Err(CasimirError::Domain(format!(
                "channel needs finite xi >= 0 and k >= 0, got xi = {xi}, k = {k}"
            )));
        }
        if xi == 0.0 && k == 0.0 {
            return Err(CasimirError::Domain(
                "the channel xi = 0, k = 0 is excluded".into(),
            ));
        }
        Ok(Self { xi, k })
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn k(&self) -> f64 {
        self.k
    }
}

/// Imaginary-axis decay constant κ = √(εμξ²/c² + k²) (1/m).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Kappa(f64);

impl Kappa {
    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn kappa(material: &MaterialModel, ch: TransverseChannel) -> Result<Kappa> {
    let q2 = material.eps_mu_xi2(ch.xi)? / (C_LIGHT * C_LIGHT);
    Ok(Kappa((q2 + ch.k * ch.k).sqrt()))
}

/// Bulk response of a non-mirror medium in one channel.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Medium {
    pub eps: f64,
    pub mu: f64,
    pub kappa: f64,
    /// εμξ²/c²
    q2: f64,
    k2: f64,
}

impl Medium {
    pub(crate) fn of(material: &MaterialModel, ch: TransverseChannel) -> Result<Self> {
        let q2 = material.eps_mu_xi2(ch.xi)? / (C_LIGHT * C_LIGHT);
        let k2 = ch.k * ch.k;
        Ok(Self {
            eps: material.eps_at(ch.xi)?,
            mu: material.mu_at(ch.xi)?,
            kappa: (q2 + k2).sqrt(),
            q2,
            k2,
        })
    }

    /// Terms of the interface coefficient from `self` into `to`:
    /// `(a + b, a − b, b)` with a = w_to·κ_self, b = w_self·κ_to and w the
    /// permittivity (TM) or permeability (TE). The difference is formed from
    /// a² − b² so it keeps full relative accuracy when k² dominates both κ².
    fn interface_terms(&self, to: &Medium, pol: Polarization) -> (f64, f64, f64) {
        let (ws, wt) = match pol {
            Polarization::TM => (self.eps, to.eps),
            Polarization::TE => (self.mu, to.mu),
        };
        let (a, b) = (wt * self.kappa, ws * to.kappa);
        let sum = a + b;
        let diff = if ws.is_finite() && wt.is_finite() && sum.is_finite() && sum > 0.0 {
            let squares = wt * wt * self.q2 - ws * ws * to.q2 + (wt - ws) * (wt + ws) * self.k2;
            squares / sum
        } else {
            a - b
        };
        (sum, diff, b)
    }

    /// Interface coefficient from `self` into `to`.
    fn fresnel(&self, to: &Medium, pol: Polarization) -> f64 {
        let (sum, diff, b) = self.interface_terms(to, pol);
        if sum.is_finite() && sum > 0.0 {
            diff / sum
        } else {
            contrast(sum - b, b)
        }
    }
}

/// (a − b)/(a + b), with the limits ±1 when one side diverges.
fn contrast(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else if a >= b {
        let t = b / a;
        (1.0 - t) / (1.0 + t)
    } else {
        let t = a / b;
        (t - 1.0) / (t + 1.0)
    }
}

fn mirror_coefficient(pol: Polarization) -> f64 {
    match pol {
        Polarization::TM => 1.0,
        Polarization::TE => -1.0,
    }
}

/// Single-interface coefficient from `from` into `to`. A perfect-mirror
/// target gives exactly +1 (TM) or −1 (TE).
pub fn fresnel(
    from: &MaterialModel,
    to: &MaterialModel,
    ch: TransverseChannel,
    pol: Polarization,
) -> Result<f64> {
    let f = Medium::of(from, ch)?;
    if to.is_perfect_mirror() {
        return Ok(mirror_coefficient(pol));
    }
    let t = Medium::of(to, ch)?;
    checked(f.fresnel(&t, pol))
}

fn checked(r: f64) -> Result<f64> {
    if r.is_nan() {
        Err(CasimirError::Domain(
            "reflection coefficient is undefined for this channel".into(),
        ))
    } else {
        Ok(r)
    }
}

/// Reflection coefficient of `stack` seen from `gap_medium`.
pub fn stack_reflection(
    gap_medium: &MaterialModel,
    stack: &LayerStack,
    ch: TransverseChannel,
    pol: Polarization,
) -> Result<f64> {
    Ok(stack_reflection_pair(gap_medium, stack, ch)?[pol.index()])
}

/// `[r_TE, r_TM]` of `stack` seen from `gap_medium`, composed from the far
/// side inwards.
pub(crate) fn stack_reflection_pair(
    gap_medium: &MaterialModel,
    stack: &LayerStack,
    ch: TransverseChannel,
) -> Result<[f64; 2]> {
    let gap = Medium::of(gap_medium, ch)?;
    stack_reflection_pair_from(&gap, gap_medium, stack, ch)
}

pub(crate) fn stack_reflection_pair_from(
    gap: &Medium,
    gap_medium: &MaterialModel,
    stack: &LayerStack,
    ch: TransverseChannel,
) -> Result<[f64; 2]> {
    let layers = stack.layers();

    // Medium immediately in front of the termination.
    let last = match layers.last() {
        Some(l) => Medium::of(l.material(), ch)?,
        None => *gap,
    };
    let mut r = if stack.termination().is_perfect_mirror() {
        [mirror_coefficient(Polarization::TE), mirror_coefficient(Polarization::TM)]
    } else if layers.is_empty() && stack.termination() == gap_medium {
        [0.0, 0.0]
    } else {
        let term = Medium::of(stack.termination(), ch)?;
        [
            last.fresnel(&term, Polarization::TE),
            last.fresnel(&term, Polarization::TM),
        ]
    };

    let mut behind = last;
    for (i, layer) in layers.iter().enumerate().rev() {
        let front = if i == 0 {
            *gap
        } else {
            Medium::of(layers[i - 1].material(), ch)?
        };
        let decay = (-2.0 * behind.kappa * layer.thickness()).exp();
        for pol in Polarization::BOTH {
            let rho = front.fresnel(&behind, pol);
            let rb = r[pol.index()] * decay;
            r[pol.index()] = (rho + rb) / (1.0 + rho * rb);
        }
        behind = front;
    }
    for v in r {
        checked(v)?;
    }
    Ok(r)
}

/// Coefficients `[TE, TM]` of a finite plate seen from the gap medium, both
/// for the plate as it sits in the cavity (backed by the far gap and the far
/// wall) and for the same plate backed by the medium alone. Returns
/// `(full, full − isolated)`; the difference is propagated through the
/// layers directly so it stays accurate when it is exponentially small.
pub(crate) fn plate_reflection_with_self_difference(
    gap: &Medium,
    gap_medium: &MaterialModel,
    plate: &[Layer],
    far_gap: Distance,
    far_wall: &LayerStack,
    ch: TransverseChannel,
) -> Result<([f64; 2], [f64; 2])> {
    let Some(last_layer) = plate.last() else {
        return Err(CasimirError::Invalid("the plate needs at least one layer".into()));
    };
    let last = Medium::of(last_layer.material(), ch)?;
    let mut full = [0.0; 2];
    let mut delta = [0.0; 2];
    let far = match far_gap {
        Distance::Finite(d) => {
            let x = stack_reflection_pair_from(gap, gap_medium, far_wall, ch)?;
            Some((x, (-2.0 * gap.kappa * d).exp()))
        }
        Distance::Infinite => None,
    };
    for pol in Polarization::BOTH {
        let i = pol.index();
        let rho = last.fresnel(gap, pol);
        match far {
            Some((x, e)) if x[i] * e != 0.0 => {
                let xe = x[i] * e;
                let den = 1.0 + rho * xe;
                full[i] = (rho + xe) / den;
                delta[i] = xe * (1.0 - rho * rho) / den;
            }
            _ => full[i] = rho,
        }
    }

    let mut behind = last;
    for (j, layer) in plate.iter().enumerate().rev() {
        let front = if j == 0 {
            *gap
        } else {
            Medium::of(plate[j - 1].material(), ch)?
        };
        let e = (-2.0 * behind.kappa * layer.thickness()).exp();
        for pol in Polarization::BOTH {
            let i = pol.index();
            let rho = front.fresnel(&behind, pol);
            let (r, dr) = (full[i], delta[i]);
            let d_full = 1.0 + rho * r * e;
            full[i] = (rho + r * e) / d_full;
            delta[i] = if dr == 0.0 {
                0.0
            } else {
                e * dr * (1.0 - rho * rho) / (d_full * (1.0 + rho * (r - dr) * e))
            };
        }
        behind = front;
    }
    for v in full.iter().chain(delta.iter()) {
        checked(*v)?;
    }
    Ok((full, delta))
}

/// Independent cross-check: reflection of a stack by 2×2 transfer matrices
/// in the basis of growing/decaying waves. Numerically fragile for thick
/// layers; intended for stacks with at most a few interfaces.
pub mod transfer_matrix {
    use super::*;

    type Mat = [[f64; 2]; 2];

    fn mul(a: &Mat, b: &Mat) -> Mat {
        [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ]
    }

    /// Matches the field amplitude and the (1/ε or 1/μ)-weighted normal
    /// derivative across an interface. Amplitudes are (A, B) of
    /// `A e^{−κz} + B e^{+κz}`, i.e. incident (decaying towards +z) and reflected.
    fn interface(from: &Medium, to: &Medium, pol: Polarization) -> Mat {
        // from side: value A+B, weighted derivative w_f(−A+B) with
        // w = κ/ε (TM) or κ/μ (TE); solve for the to-side amplitudes (A', B')
        // given continuity. With s = w_f/w_t, 1 ± s = (b ± a)/b in the
        // notation of `interface_terms`.
        let (sum, diff, b) = from.interface_terms(to, pol);
        let (p, m) = (0.5 * sum / b, -0.5 * diff / b);
        [[p, m], [m, p]]
    }

    fn propagate(m: &Medium, t: f64) -> Mat {
        // Re-reference amplitudes to the next interface at depth t.
        let e = (-m.kappa * t).exp();
        [[e, 0.0], [0.0, 1.0 / e]]
    }

    pub fn reflection(
        gap_medium: &MaterialModel,
        stack: &LayerStack,
        ch: TransverseChannel,
        pol: Polarization,
    ) -> Result<f64> {
        let gap = Medium::of(gap_medium, ch)?;
        let mut media = vec![gap];
        for l in stack.layers() {
            media.push(Medium::of(l.material(), ch)?);
        }
        // Total matrix maps gap-side amplitudes to amplitudes just inside the
        // termination.
        let mut total: Mat = [[1.0, 0.0], [0.0, 1.0]];
        for (i, l) in stack.layers().iter().enumerate() {
            total = mul(&interface(&media[i], &media[i + 1], pol), &total);
            total = mul(&propagate(&media[i + 1], l.thickness()), &total);
        }
        let last = media[media.len() - 1];
        if stack.termination().is_perfect_mirror() {
            // Field (TE) or weighted derivative (TM) vanishes at the mirror:
            // A' + B' = 0 (TE), −A' + B' = 0 (TM).
            let sign = match pol {
                Polarization::TE => 1.0,
                Polarization::TM => -1.0,
            };
            let a = total[1][0] + sign * total[0][0];
            let b = total[1][1] + sign * total[0][1];
            return Ok(-a / b);
        }
        let term = Medium::of(stack.termination(), ch)?;
        total = mul(&interface(&last, &term, pol), &total);
        // No growing wave in the termination: B' = 0.
        Ok(-total[1][0] / total[1][1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(xi: f64, k: f64) -> TransverseChannel {
        TransverseChannel::new(xi, k).unwrap()
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(&MaterialModel::Vacuum, ch(0.0, 5e6)).unwrap().value(), 5e6);
        let k = kappa(&MaterialModel::constant(4.0, 1.0).unwrap(), ch(C_LIGHT, 0.0)).unwrap();
        assert!((k.value() - 2.0).abs() < 1e-15);
        let k = kappa(&MaterialModel::constant(2.0, 2.0).unwrap(), ch(3.0 * C_LIGHT, 4.0)).unwrap();
        assert!((k.value() - 52f64.sqrt()).abs() < 1e-14);
        assert!((k.value() - 7.2111).abs() < 1e-4);
        assert!(kappa(&MaterialModel::PerfectMirror, ch(1.0, 1.0)).is_err());
    }

    #[test]
    fn channel_invariants() {
        assert!(TransverseChannel::new(0.0, 0.0).is_err());
        assert!(TransverseChannel::new(-1.0, 1.0).is_err());
        assert!(TransverseChannel::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn fresnel_zero_contrast_and_mirror() {
        let m = MaterialModel::constant(3.0, 2.0).unwrap();
        for pol in Polarization::BOTH {
            assert_eq!(fresnel(&m, &m, ch(1e14, 1e6), pol).unwrap(), 0.0);
        }
        assert_eq!(
            fresnel(&m, &MaterialModel::PerfectMirror, ch(1e14, 1e6), Polarization::TM).unwrap(),
            1.0
        );
        assert_eq!(
            fresnel(&m, &MaterialModel::PerfectMirror, ch(1e14, 1e6), Polarization::TE).unwrap(),
            -1.0
        );
        assert!(fresnel(&MaterialModel::PerfectMirror, &m, ch(1.0, 1.0), Polarization::TE).is_err());
    }

    #[test]
    fn fresnel_approaches_mirror_for_large_permittivity() {
        let metal = MaterialModel::constant(1e8, 1.0).unwrap();
        let c = ch(C_LIGHT, 1.0);
        let tm = fresnel(&MaterialModel::Vacuum, &metal, c, Polarization::TM).unwrap();
        let te = fresnel(&MaterialModel::Vacuum, &metal, c, Polarization::TE).unwrap();
        assert!((tm - 1.0).abs() < 1e-3);
        assert!((te + 1.0).abs() < 1e-3);
    }

    #[test]
    fn fresnel_keeps_accuracy_at_grazing_channels() {
        // k ≫ √(εμ)ξ/c: κ₁ and κ₂ agree to 12 digits, r = −(q₂² − q₁²)/(κ₁ + κ₂)².
        let c = ch(C_LIGHT, 1e6);
        let glass = MaterialModel::constant(2.0, 1.0).unwrap();
        let r = fresnel(&MaterialModel::Vacuum, &glass, c, Polarization::TE).unwrap();
        let (k1, k2) = ((1.0f64 + 1e12).sqrt(), (2.0f64 + 1e12).sqrt());
        let exact = -1.0 / ((k1 + k2) * (k1 + k2));
        assert!(((r - exact) / exact).abs() < 1e-14, "{r:e} vs {exact:e}");
        let stack = LayerStack::half_space(glass).unwrap();
        let t = transfer_matrix::reflection(&MaterialModel::Vacuum, &stack, c, Polarization::TE).unwrap();
        assert!(((t - exact) / exact).abs() < 1e-14);
    }

    #[test]
    fn empty_stack() {
        let m = MaterialModel::constant(2.0, 1.0).unwrap();
        let same = LayerStack::half_space(m.clone()).unwrap();
        let mirror = LayerStack::perfect_mirror();
        for pol in Polarization::BOTH {
            assert_eq!(stack_reflection(&m, &same, ch(1e14, 1e6), pol).unwrap(), 0.0);
        }
        assert_eq!(stack_reflection(&m, &mirror, ch(1e14, 1e6), Polarization::TM).unwrap(), 1.0);
        assert_eq!(stack_reflection(&m, &mirror, ch(1e14, 1e6), Polarization::TE).unwrap(), -1.0);
    }

    #[test]
    fn gap_medium_layer_before_mirror() {
        let m = MaterialModel::constant(2.0, 1.0).unwrap();
        let t = 300e-9;
        let stack = LayerStack::new(vec![Layer::new(t, m.clone()).unwrap()], MaterialModel::PerfectMirror).unwrap();
        let c = ch(2e14, 3e6);
        let decay = (-2.0 * kappa(&m, c).unwrap().value() * t).exp();
        let te = stack_reflection(&m, &stack, c, Polarization::TE).unwrap();
        let tm = stack_reflection(&m, &stack, c, Polarization::TM).unwrap();
        assert!((te + decay).abs() < 1e-15);
        assert!((tm - decay).abs() < 1e-15);
        for pol in Polarization::BOTH {
            let tmx = transfer_matrix::reflection(&m, &stack, c, pol).unwrap();
            let rec = stack_reflection(&m, &stack, c, pol).unwrap();
            assert!((tmx - rec).abs() < 1e-14);
        }
    }

    #[test]
    fn plate_self_difference_matches_direct_stacks() {
        let medium = MaterialModel::constant(2.0, 1.0).unwrap();
        let plate = vec![
            Layer::new(40e-9, MaterialModel::constant(6.0, 1.0).unwrap()).unwrap(),
            Layer::new(25e-9, MaterialModel::constant(3.0, 2.0).unwrap()).unwrap(),
        ];
        let wall = LayerStack::new(
            vec![Layer::new(30e-9, MaterialModel::constant(9.0, 1.0).unwrap()).unwrap()],
            MaterialModel::PerfectMirror,
        )
        .unwrap();
        let d_far = 400e-9;
        let mut ext = plate.clone();
        ext.push(Layer::new(d_far, medium.clone()).unwrap());
        ext.extend(wall.layers().iter().cloned());
        let extended = LayerStack::new(ext, MaterialModel::PerfectMirror).unwrap();
        let isolated = LayerStack::new(plate.clone(), medium.clone()).unwrap();
        for (xi, k) in [(1e13, 1e5), (3e14, 2e6), (2e15, 4e7)] {
            let c = ch(xi, k);
            let gap = Medium::of(&medium, c).unwrap();
            let (full, delta) = plate_reflection_with_self_difference(
                &gap, &medium, &plate, Distance::Finite(d_far), &wall, c,
            )
            .unwrap();
            let full_direct = stack_reflection_pair(&medium, &extended, c).unwrap();
            let iso_direct = stack_reflection_pair(&medium, &isolated, c).unwrap();
            for i in 0..2 {
                assert!((full[i] - full_direct[i]).abs() < 1e-14);
                assert!((full[i] - delta[i] - iso_direct[i]).abs() < 1e-14);
            }
            let (full_inf, delta_inf) = plate_reflection_with_self_difference(
                &gap, &medium, &plate, Distance::Infinite, &wall, c,
            )
            .unwrap();
            assert_eq!(delta_inf, [0.0, 0.0]);
            for i in 0..2 {
                assert!((full_inf[i] - iso_direct[i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn thick_layers_underflow_gracefully() {
        let stack = LayerStack::new(
            vec![Layer::new(1.0, MaterialModel::constant(5.0, 1.0).unwrap()).unwrap()],
            MaterialModel::PerfectMirror,
        )
        .unwrap();
        let r = stack_reflection(&MaterialModel::Vacuum, &stack, ch(1e15, 1e7), Polarization::TE).unwrap();
        let front = fresnel(
            &MaterialModel::Vacuum,
            &MaterialModel::constant(5.0, 1.0).unwrap(),
            ch(1e15, 1e7),
            Polarization::TE,
        )
        .unwrap();
        assert_eq!(r, front);
    }
}
