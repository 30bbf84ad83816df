//! Planar multilayer reflectors and the embedded-plate cavity
//! (wall1 | gap d1 | plate | gap d3 | wall3), all gaps filled with one medium.
//!
//! Axis convention: z increases from wall1 towards wall3. Within a gap,
//! offsets are measured from its `left` reflector.

use crate::error::{CasimirError, Result};
use crate::materials::MaterialModel;

/// Separation between two reflectors. `Infinite` removes the far reflector
/// exactly instead of approximating it with a large number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distance {
    Finite(f64),
    Infinite,
}

impl Distance {
    pub fn finite(meters: f64) -> Result<Self> {
        if meters.is_finite() && meters > 0.0 {
            Ok(Distance::Finite(meters))
        } else {
            Err(CasimirError::Invalid(format!(
                "distance must be finite and > 0, got {meters}"
            )))
        }
    }

    pub fn meters(self) -> Option<f64> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Distance::Infinite)
    }

    /// 1/d⁴, zero for an infinite distance.
    pub fn inverse_fourth(self) -> f64 {
        match self {
            Distance::Finite(d) => d.powi(-4),
            Distance::Infinite => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    thickness: f64,
    material: MaterialModel,
}

impl Layer {
    pub fn new(thickness: f64, material: MaterialModel) -> Result<Self> {
        if !(thickness.is_finite() && thickness > 0.0) {
            return Err(CasimirError::Invalid(format!(
                "layer thickness must be finite and > 0, got {thickness}"
            )));
        }
        if material.is_perfect_mirror() {
            return Err(CasimirError::Invalid(
                "a finite layer cannot be a perfect mirror".into(),
            ));
        }
        material.validate()?;
        Ok(Self {
            thickness,
            material,
        })
    }

    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    pub fn material(&self) -> &MaterialModel {
        &self.material
    }
}

/// Layers ordered nearest-to-gap first, ending in a semi-infinite
/// termination (possibly a perfect mirror).
#[derive(Debug, Clone, PartialEq)]
pub struct LayerStack {
    layers: Vec<Layer>,
    termination: MaterialModel,
}

impl LayerStack {
    pub fn new(layers: Vec<Layer>, termination: MaterialModel) -> Result<Self> {
        termination.validate()?;
        Ok(Self {
            layers,
            termination,
        })
    }

    /// Bare half-space.
    pub fn half_space(termination: MaterialModel) -> Result<Self> {
        Self::new(Vec::new(), termination)
    }

    pub fn perfect_mirror() -> Self {
        Self {
            layers: Vec::new(),
            termination: MaterialModel::PerfectMirror,
        }
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn termination(&self) -> &MaterialModel {
        &self.termination
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GapSide {
    Gap1,
    Gap3,
}

/// A medium-filled gap between two reflectors. `left` sits at offset 0 and
/// `right` at offset `width`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapConfig {
    width: Distance,
    medium: MaterialModel,
    left: LayerStack,
    right: LayerStack,
}

impl GapConfig {
    pub fn new(
        width: Distance,
        medium: MaterialModel,
        left: LayerStack,
        right: LayerStack,
    ) -> Result<Self> {
        if let Distance::Finite(d) = width {
            Distance::finite(d)?;
        }
        check_medium(&medium)?;
        Ok(Self {
            width,
            medium,
            left,
            right,
        })
    }

    pub fn width(&self) -> Distance {
        self.width
    }

    pub fn medium(&self) -> &MaterialModel {
        &self.medium
    }

    pub fn left(&self) -> &LayerStack {
        &self.left
    }

    pub fn right(&self) -> &LayerStack {
        &self.right
    }

    /// The same gap seen from the other side.
    pub fn mirrored(&self) -> Self {
        Self {
            width: self.width,
            medium: self.medium.clone(),
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }
}

/// wall1 | d1 | plate | d3 | wall3. Plate layers are listed from the wall1
/// side to the wall3 side.
#[derive(Debug, Clone, PartialEq)]
pub struct CavitySetup {
    wall1: LayerStack,
    d1: Distance,
    plate: Vec<Layer>,
    d3: Distance,
    wall3: LayerStack,
    medium: MaterialModel,
}

impl CavitySetup {
    pub fn new(
        wall1: LayerStack,
        d1: Distance,
        plate: Vec<Layer>,
        d3: Distance,
        wall3: LayerStack,
        medium: MaterialModel,
    ) -> Result<Self> {
        for d in [d1, d3] {
            if let Distance::Finite(v) = d {
                Distance::finite(v)?;
            }
        }
        if plate.is_empty() {
            return Err(CasimirError::Invalid(
                "the plate needs at least one layer".into(),
            ));
        }
        check_medium(&medium)?;
        Ok(Self {
            wall1,
            d1,
            plate,
            d3,
            wall3,
            medium,
        })
    }

    pub fn wall1(&self) -> &LayerStack {
        &self.wall1
    }

    pub fn wall3(&self) -> &LayerStack {
        &self.wall3
    }

    pub fn d1(&self) -> Distance {
        self.d1
    }

    pub fn d3(&self) -> Distance {
        self.d3
    }

    pub fn plate(&self) -> &[Layer] {
        &self.plate
    }

    pub fn medium(&self) -> &MaterialModel {
        &self.medium
    }

    pub fn with_d1(&self, d1: Distance) -> Result<Self> {
        Self::new(
            self.wall1.clone(),
            d1,
            self.plate.clone(),
            self.d3,
            self.wall3.clone(),
            self.medium.clone(),
        )
    }

    pub fn with_d3(&self, d3: Distance) -> Result<Self> {
        Self::new(
            self.wall1.clone(),
            self.d1,
            self.plate.clone(),
            d3,
            self.wall3.clone(),
            self.medium.clone(),
        )
    }

    /// Reflection through a plane parallel to the plate: walls and gaps swap
    /// and the plate layer order reverses.
    pub fn mirrored(&self) -> Self {
        Self {
            wall1: self.wall3.clone(),
            d1: self.d3,
            plate: self.plate.iter().rev().cloned().collect(),
            d3: self.d1,
            wall3: self.wall1.clone(),
            medium: self.medium.clone(),
        }
    }

    /// Gap `which` with its two reflectors. The reflector on the plate side
    /// carries the plate, the far gap (as a layer of the medium) and the far
    /// wall; with an infinite far gap it is the plate backed by the medium.
    /// Gap1 has wall1 on the left; Gap3 has the plate on the left, so offsets
    /// increase along +z in both.
    pub fn gap_of(&self, which: GapSide) -> GapConfig {
        match which {
            GapSide::Gap1 => GapConfig {
                width: self.d1,
                medium: self.medium.clone(),
                left: self.wall1.clone(),
                right: self.extended_plate(self.plate.iter(), self.d3, &self.wall3),
            },
            GapSide::Gap3 => GapConfig {
                width: self.d3,
                medium: self.medium.clone(),
                left: self.extended_plate(self.plate.iter().rev(), self.d1, &self.wall1),
                right: self.wall3.clone(),
            },
        }
    }

    /// The plate seen from gap `which` with nothing behind it but the medium.
    pub fn isolated_plate(&self, which: GapSide) -> LayerStack {
        let layers: Vec<Layer> = match which {
            GapSide::Gap1 => self.plate.clone(),
            GapSide::Gap3 => self.plate.iter().rev().cloned().collect(),
        };
        LayerStack {
            layers,
            termination: self.medium.clone(),
        }
    }

    fn extended_plate<'a>(
        &self,
        plate: impl Iterator<Item = &'a Layer>,
        far_gap: Distance,
        far_wall: &LayerStack,
    ) -> LayerStack {
        let mut layers: Vec<Layer> = plate.cloned().collect();
        match far_gap {
            Distance::Finite(d) => {
                layers.push(Layer {
                    thickness: d,
                    material: self.medium.clone(),
                });
                layers.extend(far_wall.layers.iter().cloned());
                LayerStack {
                    layers,
                    termination: far_wall.termination.clone(),
                }
            }
            Distance::Infinite => LayerStack {
                layers,
                termination: self.medium.clone(),
            },
        }
    }
}

fn check_medium(medium: &MaterialModel) -> Result<()> {
    if medium.is_perfect_mirror() {
        return Err(CasimirError::Invalid(
            "a perfect mirror cannot fill a gap".into(),
        ));
    }
    medium.validate()
}
