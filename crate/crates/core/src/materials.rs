//! Linear, causal, isotropic magnetodielectric response on the imaginary
//! frequency axis, where ε(iξ) and μ(iξ) are real.

use crate::error::{CasimirError, Result};

/// One Lorentz (resonance > 0) or Drude (resonance = 0) oscillator term,
/// contributing `plasma_strength / (resonance² + ξ² + damping·ξ)` to the
/// response at imaginary frequency ξ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorTerm {
    plasma_strength: f64,
    resonance: f64,
    damping: f64,
}

impl OscillatorTerm {
    /// `plasma_strength` is ω_p² in rad²/s²; `resonance` and `damping` in rad/s.
    pub fn new(plasma_strength: f64, resonance: f64, damping: f64) -> Result<Self> {
        for (name, v) in [
            ("plasma_strength", plasma_strength),
            ("resonance", resonance),
            ("damping", damping),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(CasimirError::Invalid(format!(
                    "oscillator {name} must be finite and non-negative, got {v}"
                )));
            }
        }
        if resonance == 0.0 && damping <= 0.0 && plasma_strength > 0.0 {
            return Err(CasimirError::Invalid(
                "a Drude term (resonance = 0) requires damping > 0".into(),
            ));
        }
        Ok(Self {
            plasma_strength,
            resonance,
            damping,
        })
    }

    /// Drude term with plasma frequency `omega_p` (rad/s) and damping `gamma`.
    pub fn drude(omega_p: f64, gamma: f64) -> Result<Self> {
        Self::new(omega_p * omega_p, 0.0, gamma)
    }

    pub fn plasma_strength(&self) -> f64 {
        self.plasma_strength
    }

    pub fn resonance(&self) -> f64 {
        self.resonance
    }

    pub fn damping(&self) -> f64 {
        self.damping
    }

    fn response(&self, xi: f64) -> f64 {
        if self.plasma_strength == 0.0 {
            return 0.0;
        }
        let denom = self.resonance * self.resonance + xi * xi + self.damping * xi;
        if denom == 0.0 {
            f64::INFINITY
        } else {
            self.plasma_strength / denom
        }
    }

    /// ξ² times the response; finite at ξ = 0 even for a Drude term.
    fn response_times_xi2(&self, xi: f64) -> f64 {
        if self.plasma_strength == 0.0 || xi == 0.0 {
            return 0.0;
        }
        let denom = self.resonance * self.resonance / xi + xi + self.damping;
        self.plasma_strength * xi / denom
    }
}

/// Material response model.
///
/// `PerfectMirror` is a reflector-only marker: it may terminate a layer
/// stack but never fill a gap or a finite layer.
#[derive(Debug, Clone, PartialEq)]
pub enum MaterialModel {
    Vacuum,
    /// Frequency-independent response.
    Constant { eps: f64, mu: f64 },
    DrudeLorentz {
        electric: Vec<OscillatorTerm>,
        magnetic: Vec<OscillatorTerm>,
    },
    PerfectMirror,
}

impl MaterialModel {
    pub fn constant(eps: f64, mu: f64) -> Result<Self> {
        let m = MaterialModel::Constant { eps, mu };
        m.validate()?;
        Ok(m)
    }

    pub fn drude_lorentz(electric: Vec<OscillatorTerm>, magnetic: Vec<OscillatorTerm>) -> Self {
        MaterialModel::DrudeLorentz { electric, magnetic }
    }

    /// Single-term Drude metal with plasma frequency `omega_p` and damping `gamma` (rad/s).
    pub fn drude(omega_p: f64, gamma: f64) -> Result<Self> {
        Ok(MaterialModel::DrudeLorentz {
            electric: vec![OscillatorTerm::drude(omega_p, gamma)?],
            magnetic: Vec::new(),
        })
    }

    /// Checks the construction invariants. `Constant` needs ε ≥ 1 and μ ≥ 1
    /// (passive static response).
    pub fn validate(&self) -> Result<()> {
        if let MaterialModel::Constant { eps, mu } = *self {
            if !eps.is_finite() || eps < 1.0 {
                return Err(CasimirError::Invalid(format!(
                    "constant permittivity must be finite and >= 1, got {eps}"
                )));
            }
            if !mu.is_finite() || mu < 1.0 {
                return Err(CasimirError::Invalid(format!(
                    "constant permeability must be finite and >= 1, got {mu}"
                )));
            }
        }
        Ok(())
    }

    pub fn is_perfect_mirror(&self) -> bool {
        matches!(self, MaterialModel::PerfectMirror)
    }

    /// ε(iξ). Returns `+∞` for a Drude term at exactly ξ = 0.
    pub fn eps_at(&self, xi: f64) -> Result<f64> {
        check_xi(xi)?;
        match self {
            MaterialModel::Vacuum => Ok(1.0),
            MaterialModel::Constant { eps, .. } => Ok(*eps),
            MaterialModel::DrudeLorentz { electric, .. } => Ok(oscillator_sum(electric, xi)),
            MaterialModel::PerfectMirror => Err(mirror_error()),
        }
    }

    /// μ(iξ). Returns `+∞` for a Drude term at exactly ξ = 0.
    pub fn mu_at(&self, xi: f64) -> Result<f64> {
        check_xi(xi)?;
        match self {
            MaterialModel::Vacuum => Ok(1.0),
            MaterialModel::Constant { mu, .. } => Ok(*mu),
            MaterialModel::DrudeLorentz { magnetic, .. } => Ok(oscillator_sum(magnetic, xi)),
            MaterialModel::PerfectMirror => Err(mirror_error()),
        }
    }

    /// ε(iξ)μ(iξ)ξ², finite at ξ = 0 for every supported model.
    pub(crate) fn eps_mu_xi2(&self, xi: f64) -> Result<f64> {
        check_xi(xi)?;
        match self {
            MaterialModel::Vacuum => Ok(xi * xi),
            MaterialModel::Constant { eps, mu } => Ok(eps * mu * xi * xi),
            MaterialModel::DrudeLorentz { electric, magnetic } => {
                if xi == 0.0 {
                    return Ok(0.0);
                }
                let mu = oscillator_sum(magnetic, xi);
                let eps_xi2 = xi * xi
                    + electric
                        .iter()
                        .map(|t| t.response_times_xi2(xi))
                        .sum::<f64>();
                Ok(eps_xi2 * mu)
            }
            MaterialModel::PerfectMirror => Err(mirror_error()),
        }
    }

    /// Static refractive index √(ε(0)μ(0)); `None` when the static response
    /// diverges (conductors) or the model is a mirror.
    pub fn static_index(&self) -> Option<f64> {
        let eps = self.eps_at(0.0).ok()?;
        let mu = self.mu_at(0.0).ok()?;
        let n = (eps * mu).sqrt();
        n.is_finite().then_some(n)
    }
}

fn oscillator_sum(terms: &[OscillatorTerm], xi: f64) -> f64 {
    1.0 + terms.iter().map(|t| t.response(xi)).sum::<f64>()
}

fn check_xi(xi: f64) -> Result<()> {
    if xi.is_nan() || xi < 0.0 {
        Err(CasimirError::Domain(format!(
            "imaginary frequency must be >= 0, got {xi}"
        )))
    } else {
        Ok(())
    }
}

fn mirror_error() -> CasimirError {
    CasimirError::UnsupportedModel(
        "a perfect mirror has no bulk response; it enters only through reflection coefficients"
            .into(),
    )
}
