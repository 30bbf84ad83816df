//! Casimir forces and position-resolved Casimir stresses for planar
//! magnetodielectric bodies embedded in linear media.
//!
//! Two stress prescriptions are provided side by side:
//!
//! * [`lorentz`]: the stress built from the Lorentz force on the internal
//!   charges and currents of the medium (vacuum-form Maxwell stress of the
//!   macroscopic fields). It depends on position inside a medium-filled gap.
//! * [`minkowski`]: the medium-weighted Minkowski stress, which yields the
//!   textbook Lifshitz formula with the gap medium inserted.
//!
//! Both engines work on the imaginary frequency axis with TE/TM reflection
//! coefficients of arbitrary planar multilayers ([`scattering`]) and a
//! mapped adaptive double quadrature ([`quadrature`]). The ideal-mirror
//! closed forms live in [`closed_forms`] and are cross-checked by an
//! independent zero-point mode sum in [`oracle`].

pub mod closed_forms;
pub mod error;
pub mod geometry;
pub mod lorentz;
pub mod materials;
pub mod minkowski;
pub mod oracle;
pub mod quadrature;
pub mod scattering;
mod summation;

pub use error::{CasimirError, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const C_LIGHT: f64 = 2.997_924_58e8;

/// Which stress prescription an engine or closed form refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Minkowski,
    Lorentz,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Minkowski => "minkowski",
            Engine::Lorentz => "lorentz",
        }
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
