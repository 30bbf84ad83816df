//! JSON run description: schema, validation and emission.
//!
//! Lengths are strings with a unit suffix (`"500nm"`, `"1um"`, `"2e-6m"`) or
//! `"inf"` for an unbounded gap. Materials are tagged records:
//!
//! ```json
//! {"type": "vacuum"}
//! {"type": "constant", "eps": 2.0, "mu": 1.0}
//! {"type": "drude_lorentz",
//!  "electric": [{"plasma_strength": 1e32, "resonance": 0.0, "damping": 1e13}],
//!  "magnetic": []}
//! {"type": "perfect_mirror"}
//! ```

use casimir_core::closed_forms::StaticMedium;
use casimir_core::geometry::{CavitySetup, Distance, GapSide, Layer, LayerStack};
use casimir_core::materials::{MaterialModel, OscillatorTerm};
use casimir_core::quadrature::{Mapping, QuadratureSpec};
use casimir_core::{CasimirError, Engine};
use serde::{Deserialize, Serialize};

use crate::CliError;

// ---- raw schema ----

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    medium: RawMaterial,
    wall1: RawStack,
    wall3: RawStack,
    plate: Vec<RawLayer>,
    d1: String,
    d3: String,
    #[serde(default)]
    engine: EngineChoice,
    #[serde(default)]
    task: RawTask,
    #[serde(default)]
    quadrature: RawQuadrature,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sweep: Option<RawSweep>,
    #[serde(default)]
    output: OutputSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum RawMaterial {
    Vacuum,
    Constant {
        eps: f64,
        #[serde(default = "one")]
        mu: f64,
    },
    DrudeLorentz {
        #[serde(default)]
        electric: Vec<RawOscillator>,
        #[serde(default)]
        magnetic: Vec<RawOscillator>,
    },
    PerfectMirror,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOscillator {
    plasma_strength: f64,
    #[serde(default)]
    resonance: f64,
    #[serde(default)]
    damping: f64,
}

/// A wall is either a bare half-space material or layers in front of a
/// terminating material.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum RawStack {
    Layered {
        layers: Vec<RawLayer>,
        termination: RawMaterial,
    },
    HalfSpace(RawMaterial),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLayer {
    thickness: String,
    material: RawMaterial,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum RawTask {
    Name(String),
    Full(Task),
}

impl Default for RawTask {
    fn default() -> Self {
        RawTask::Name("force".into())
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuadrature {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    abs_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mapping: Option<Mapping>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    variable: SweepVariable,
    values: Vec<String>,
}

// ---- validated config ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineChoice {
    Lorentz,
    Minkowski,
    #[default]
    Both,
}

impl EngineChoice {
    pub fn engines(self) -> Vec<Engine> {
        match self {
            EngineChoice::Lorentz => vec![Engine::Lorentz],
            EngineChoice::Minkowski => vec![Engine::Minkowski],
            EngineChoice::Both => vec![Engine::Lorentz, Engine::Minkowski],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GapName {
    Gap1,
    Gap3,
}

impl From<GapName> for GapSide {
    fn from(g: GapName) -> Self {
        match g {
            GapName::Gap1 => GapSide::Gap1,
            GapName::Gap3 => GapSide::Gap3,
        }
    }
}

/// Work requested by a run, with any task-specific parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Task {
    Force,
    StressProfile {
        #[serde(default = "default_gap")]
        gap: GapName,
        #[serde(default = "default_points")]
        points: usize,
    },
    Ratio,
    ClosedForm,
    Oracle {
        /// (ε, μ) pairs; defaults to the static response of the medium.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        media: Option<Vec<[f64; 2]>>,
    },
    Validate,
    Sweep,
}

fn default_gap() -> GapName {
    GapName::Gap3
}

fn default_points() -> usize {
    9
}

impl Task {
    pub fn from_name(name: &str) -> Option<Task> {
        Some(match name {
            "force" => Task::Force,
            "stress-profile" => Task::StressProfile {
                gap: default_gap(),
                points: default_points(),
            },
            "ratio" => Task::Ratio,
            "closed-form" => Task::ClosedForm,
            "oracle" => Task::Oracle { media: None },
            "validate" => Task::Validate,
            "sweep" => Task::Sweep,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    D1,
    D3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub values: Vec<Distance>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: OutputFormat,
    /// Destination file; standard output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub cavity: CavitySetup,
    pub engine: EngineChoice,
    pub task: Task,
    pub sweep: Option<Sweep>,
    pub quadrature: QuadratureSpec,
    pub output: OutputSpec,
}

impl RunConfig {
    /// Static (ε, μ) of the gap medium, if it has one.
    pub fn static_medium(&self) -> Result<StaticMedium, CasimirError> {
        StaticMedium::of(self.cavity.medium())
    }
}

// ---- parsing ----

fn parse_err(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Parse {
        path: path.to_string(),
        message: msg.to_string(),
    }
}

pub fn parse_length(text: &str) -> Result<Distance, String> {
    let t = text.trim();
    if t == "inf" {
        return Ok(Distance::Infinite);
    }
    let (num, exponent) = if let Some(n) = t.strip_suffix("nm") {
        (n.trim(), -9)
    } else if let Some(n) = t.strip_suffix("um") {
        (n.trim(), -6)
    } else if let Some(n) = t.strip_suffix('m') {
        (n.trim(), 0)
    } else {
        return Err(format!("length {text:?} needs a unit suffix nm, um or m (or \"inf\")"));
    };
    // Shift the decimal exponent in the text so "500nm" is exactly 5e-7.
    let shifted = match num.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = num[i + 1..]
                .parse()
                .map_err(|_| format!("cannot read a number from {text:?}"))?;
            format!("{}e{}", &num[..i], e + exponent)
        }
        None => format!("{num}e{exponent}"),
    };
    let v: f64 = shifted
        .parse()
        .map_err(|_| format!("cannot read a number from {text:?}"))?;
    Distance::finite(v).map_err(|e| e.to_string())
}

fn emit_length(d: Distance) -> String {
    match d {
        Distance::Infinite => "inf".into(),
        Distance::Finite(m) => format!("{m:e}m"),
    }
}

fn finite_length(text: &str, path: &str) -> Result<f64, CliError> {
    match parse_length(text).map_err(|m| parse_err(path, m))? {
        Distance::Finite(v) => Ok(v),
        Distance::Infinite => Err(parse_err(path, "a layer thickness must be finite")),
    }
}

fn material(raw: &RawMaterial, path: &str) -> Result<MaterialModel, CliError> {
    let m = match raw {
        RawMaterial::Vacuum => MaterialModel::Vacuum,
        RawMaterial::Constant { eps, mu } => {
            MaterialModel::constant(*eps, *mu).map_err(|e| parse_err(path, e))?
        }
        RawMaterial::DrudeLorentz { electric, magnetic } => {
            let terms = |list: &[RawOscillator], key: &str| {
                list.iter()
                    .enumerate()
                    .map(|(i, o)| {
                        OscillatorTerm::new(o.plasma_strength, o.resonance, o.damping)
                            .map_err(|e| parse_err(&format!("{path}.{key}[{i}]"), e))
                    })
                    .collect::<Result<Vec<_>, _>>()
            };
            MaterialModel::drude_lorentz(terms(electric, "electric")?, terms(magnetic, "magnetic")?)
        }
        RawMaterial::PerfectMirror => MaterialModel::PerfectMirror,
    };
    Ok(m)
}

fn bulk_material(raw: &RawMaterial, path: &str) -> Result<MaterialModel, CliError> {
    let m = material(raw, path)?;
    if m.is_perfect_mirror() {
        return Err(parse_err(path, "a perfect mirror can only terminate a wall"));
    }
    Ok(m)
}

fn layers(raw: &[RawLayer], path: &str) -> Result<Vec<Layer>, CliError> {
    raw.iter()
        .enumerate()
        .map(|(i, l)| {
            let p = format!("{path}[{i}]");
            let t = finite_length(&l.thickness, &format!("{p}.thickness"))?;
            let m = bulk_material(&l.material, &format!("{p}.material"))?;
            Layer::new(t, m).map_err(|e| parse_err(&p, e))
        })
        .collect()
}

fn stack(raw: &RawStack, path: &str) -> Result<LayerStack, CliError> {
    match raw {
        RawStack::HalfSpace(m) => {
            let m = material(m, path)?;
            LayerStack::new(Vec::new(), m).map_err(|e| parse_err(path, e))
        }
        RawStack::Layered {
            layers: l,
            termination,
        } => {
            let l = layers(l, &format!("{path}.layers"))?;
            let t = material(termination, &format!("{path}.termination"))?;
            LayerStack::new(l, t).map_err(|e| parse_err(path, e))
        }
    }
}

fn quadrature(raw: &RawQuadrature) -> Result<QuadratureSpec, CliError> {
    let d = QuadratureSpec::default();
    QuadratureSpec::new(
        raw.rel_tol.unwrap_or(d.rel_tol()),
        raw.abs_tol.unwrap_or(d.abs_tol()),
        raw.max_nodes.unwrap_or(d.max_nodes_per_axis()),
        raw.mapping.unwrap_or(d.mapping()),
    )
    .map_err(|e| parse_err("quadrature", e))
}

/// Parses and validates a JSON run description.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        parse_err(if path == "." { "<root>" } else { &path }, e.inner())
    })?;
    from_raw(raw)
}

fn from_raw(raw: RawConfig) -> Result<RunConfig, CliError> {
    let medium = bulk_material(&raw.medium, "medium")?;
    let wall1 = stack(&raw.wall1, "wall1")?;
    let wall3 = stack(&raw.wall3, "wall3")?;
    let plate = layers(&raw.plate, "plate")?;
    if plate.is_empty() {
        return Err(parse_err("plate", "the plate needs at least one layer"));
    }
    let d1 = parse_length(&raw.d1).map_err(|m| parse_err("d1", m))?;
    let d3 = parse_length(&raw.d3).map_err(|m| parse_err("d3", m))?;
    let cavity = CavitySetup::new(wall1, d1, plate, d3, wall3, medium)
        .map_err(|e| parse_err("<root>", e))?;
    let task = match raw.task {
        RawTask::Name(n) => Task::from_name(&n)
            .ok_or_else(|| parse_err("task", format!("unknown task {n:?}")))?,
        RawTask::Full(t) => t,
    };
    if let Task::StressProfile { points, .. } = task {
        if points < 2 {
            return Err(parse_err("task.points", "a profile needs at least 2 points"));
        }
    }
    if let Task::Oracle { media: Some(ref media) } = task {
        for (i, [eps, mu]) in media.iter().enumerate() {
            StaticMedium::new(*eps, *mu).map_err(|e| parse_err(&format!("task.media[{i}]"), e))?;
        }
    }
    let sweep = match raw.sweep {
        None => None,
        Some(s) => {
            let values = s
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| parse_length(v).map_err(|m| parse_err(&format!("sweep.values[{i}]"), m)))
                .collect::<Result<Vec<_>, _>>()?;
            if values.is_empty() {
                return Err(parse_err("sweep.values", "a sweep needs at least one value"));
            }
            Some(Sweep {
                variable: s.variable,
                values,
            })
        }
    };
    match (&task, &sweep) {
        (Task::Sweep, None) => return Err(parse_err("sweep", "task sweep requires a sweep block")),
        (t, Some(_)) if *t != Task::Sweep => {
            return Err(parse_err("sweep", "a sweep block is only allowed with task sweep"))
        }
        _ => {}
    }
    Ok(RunConfig {
        cavity,
        engine: raw.engine,
        task,
        sweep,
        quadrature: quadrature(&raw.quadrature)?,
        output: raw.output,
    })
}

// ---- emission ----

fn raw_oscillators(terms: &[OscillatorTerm]) -> Vec<RawOscillator> {
    terms
        .iter()
        .map(|t| RawOscillator {
            plasma_strength: t.plasma_strength(),
            resonance: t.resonance(),
            damping: t.damping(),
        })
        .collect()
}

fn raw_material(m: &MaterialModel) -> RawMaterial {
    match m {
        MaterialModel::Vacuum => RawMaterial::Vacuum,
        MaterialModel::Constant { eps, mu } => RawMaterial::Constant { eps: *eps, mu: *mu },
        MaterialModel::DrudeLorentz { electric, magnetic } => RawMaterial::DrudeLorentz {
            electric: raw_oscillators(electric),
            magnetic: raw_oscillators(magnetic),
        },
        MaterialModel::PerfectMirror => RawMaterial::PerfectMirror,
    }
}

fn raw_layers(layers: &[Layer]) -> Vec<RawLayer> {
    layers
        .iter()
        .map(|l| RawLayer {
            thickness: emit_length(Distance::Finite(l.thickness())),
            material: raw_material(l.material()),
        })
        .collect()
}

fn raw_stack(s: &LayerStack) -> RawStack {
    if s.layers().is_empty() {
        RawStack::HalfSpace(raw_material(s.termination()))
    } else {
        RawStack::Layered {
            layers: raw_layers(s.layers()),
            termination: raw_material(s.termination()),
        }
    }
}

fn to_raw(c: &RunConfig) -> RawConfig {
    let q = &c.quadrature;
    RawConfig {
        medium: raw_material(c.cavity.medium()),
        wall1: raw_stack(c.cavity.wall1()),
        wall3: raw_stack(c.cavity.wall3()),
        plate: raw_layers(c.cavity.plate()),
        d1: emit_length(c.cavity.d1()),
        d3: emit_length(c.cavity.d3()),
        engine: c.engine,
        task: RawTask::Full(c.task.clone()),
        quadrature: RawQuadrature {
            rel_tol: Some(q.rel_tol()),
            abs_tol: Some(q.abs_tol()),
            max_nodes: Some(q.max_nodes_per_axis()),
            mapping: Some(q.mapping()),
        },
        sweep: c.sweep.as_ref().map(|s| RawSweep {
            variable: s.variable,
            values: s.values.iter().map(|&d| emit_length(d)).collect(),
        }),
        output: c.output.clone(),
    }
}

/// The config as a JSON value in the input schema, with all defaults spelled out.
pub fn emit_value(c: &RunConfig) -> serde_json::Value {
    serde_json::to_value(to_raw(c)).expect("config schema serializes")
}

pub fn emit_config(c: &RunConfig) -> String {
    serde_json::to_string_pretty(&to_raw(c)).expect("config schema serializes")
}

/// Ideal-mirror vacuum cavity: d1 = ∞, d3 = 1 µm, a highly reflecting plate.
pub fn vacuum_mirror_config() -> RunConfig {
    parse_config(VACUUM_MIRROR).expect("built-in config is valid")
}

const VACUUM_MIRROR: &str = r#"{
  "medium": {"type": "vacuum"},
  "wall1": {"type": "perfect_mirror"},
  "wall3": {"type": "perfect_mirror"},
  "plate": [{"thickness": "1um", "material": {"type": "constant", "eps": 1e16}}],
  "d1": "inf",
  "d3": "1um",
  "task": "validate"
}"#;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths() {
        assert_eq!(parse_length("1um").unwrap(), Distance::Finite(1e-6));
        assert_eq!(parse_length("500nm").unwrap(), Distance::Finite(5e-7));
        assert_eq!(parse_length("2.5e3nm").unwrap(), Distance::Finite(2.5e-6));
        assert_eq!(parse_length("2e-6m").unwrap(), Distance::Finite(2e-6));
        assert_eq!(parse_length("inf").unwrap(), Distance::Infinite);
        assert!(parse_length("1").is_err());
        assert!(parse_length("0um").is_err());
        assert!(parse_length("-3nm").is_err());
        assert!(parse_length("abcnm").is_err());
    }

    #[test]
    fn defaults() {
        let c = vacuum_mirror_config();
        assert_eq!(c.engine, EngineChoice::Both);
        assert_eq!(c.quadrature, QuadratureSpec::default());
        assert_eq!(c.quadrature.rel_tol(), 1e-8);
        assert_eq!(c.cavity.d1(), Distance::Infinite);
        assert_eq!(c.output.format, OutputFormat::Csv);
    }

    #[test]
    fn round_trip() {
        let c = vacuum_mirror_config();
        assert_eq!(parse_config(&emit_config(&c)).unwrap(), c);
        let text = VACUUM_MIRROR.replace(
            r#""task": "validate""#,
            r#""task": {"kind": "stress-profile", "gap": "gap3", "points": 5},
               "medium": {"type": "drude_lorentz", "electric": [{"plasma_strength": 4e30, "resonance": 1e15, "damping": 1e12}]}"#,
        )
        .replace(r#""medium": {"type": "vacuum"},"#, "");
        let c = parse_config(&text).unwrap();
        assert_eq!(parse_config(&emit_config(&c)).unwrap(), c);
    }

    fn expect_path(text: &str, want: &str) {
        match parse_config(text) {
            Err(CliError::Parse { path, .. }) => assert_eq!(path, want, "{text}"),
            other => panic!("expected a parse error at {want}, got {other:?}"),
        }
    }

    #[test]
    fn error_paths() {
        expect_path(
            &VACUUM_MIRROR.replace(r#"{"type": "vacuum"}"#, r#"{"type": "perfect_mirror"}"#),
            "medium",
        );
        expect_path(&VACUUM_MIRROR.replace(r#""d3": "1um""#, r#""d3": "-1um""#), "d3");
        expect_path(&VACUUM_MIRROR.replace(r#""d3": "1um""#, r#""d3": "1um", "colour": 1"#), "colour");
        expect_path(&VACUUM_MIRROR.replace(r#""d1": "inf","#, ""), "<root>");
        expect_path(&VACUUM_MIRROR.replace("1e16", "0.5"), "plate[0].material");
        expect_path(&VACUUM_MIRROR.replace(r#""1um", "material""#, r#""0nm", "material""#), "plate[0].thickness");
        expect_path(&VACUUM_MIRROR.replace(r#""task": "validate""#, r#""task": "sweep""#), "sweep");
        expect_path(&VACUUM_MIRROR.replace(r#""task": "validate""#, r#""task": "dance""#), "task");
    }
}
