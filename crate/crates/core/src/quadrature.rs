//! Mapped adaptive double quadrature over the quadrant ξ ≥ 0, k ≥ 0.
//!
//! The quadrant is mapped onto the unit square with
//! ξ = (c / 2n₀d)·x/(1−x) and k = (1/2d)·y/(1−y), where n₀ is the static
//! refractive index of the gap medium. Both axes are then integrated with a
//! nested one-dimensional rule: adaptive Gauss–Kronrod (G10/K21) bisection
//! or level-doubling tanh-sinh. Kernel nodes are always interior, so ξ = 0
//! and k = 0 are never sampled exactly.

use crate::error::{CasimirError, Result};
use crate::materials::MaterialModel;
use crate::summation::CompensatedSum;
use crate::C_LIGHT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mapping {
    /// Rational map with adaptive Gauss–Kronrod bisection on each axis.
    ExpScaled,
    /// Rational map with tanh-sinh (double-exponential) nodes on each axis.
    TanhSinh,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    rel_tol: f64,
    abs_tol: f64,
    max_nodes_per_axis: usize,
    mapping: Mapping,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 0.0,
            max_nodes_per_axis: 4000,
            mapping: Mapping::ExpScaled,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_nodes_per_axis: usize, mapping: Mapping) -> Result<Self> {
        if !(rel_tol.is_finite() && rel_tol > 0.0) {
            return Err(CasimirError::Invalid(format!(
                "rel_tol must be finite and > 0, got {rel_tol}"
            )));
        }
        if !(abs_tol.is_finite() && abs_tol >= 0.0) {
            return Err(CasimirError::Invalid(format!(
                "abs_tol must be finite and >= 0, got {abs_tol}"
            )));
        }
        if max_nodes_per_axis < 16 {
            return Err(CasimirError::Invalid(format!(
                "max_nodes_per_axis must be >= 16, got {max_nodes_per_axis}"
            )));
        }
        Ok(Self {
            rel_tol,
            abs_tol,
            max_nodes_per_axis,
            mapping,
        })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn max_nodes_per_axis(&self) -> usize {
        self.max_nodes_per_axis
    }

    pub fn mapping(&self) -> Mapping {
        self.mapping
    }

    pub fn with_rel_tol(self, rel_tol: f64) -> Result<Self> {
        Self::new(rel_tol, self.abs_tol, self.max_nodes_per_axis, self.mapping)
    }

    pub fn with_mapping(self, mapping: Mapping) -> Self {
        Self { mapping, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub err_estimate: f64,
    /// Kernel evaluations.
    pub nodes_used: usize,
}

/// ∫₀^∞dξ ∫₀^∞dk kernel(ξ, k) for a kernel decaying like e^{−2κd} across a
/// gap of width `gap_width` filled with `medium`.
pub fn integrate2d<K>(
    kernel: K,
    gap_width: f64,
    medium: &MaterialModel,
    spec: &QuadratureSpec,
) -> Result<IntegralResult>
where
    K: Fn(f64, f64) -> Result<f64>,
{
    if !(gap_width.is_finite() && gap_width > 0.0) {
        return Err(CasimirError::Domain(format!(
            "gap width must be finite and > 0, got {gap_width}"
        )));
    }
    let n0 = medium.static_index().unwrap_or(1.0);
    let xi_scale = C_LIGHT / (2.0 * n0 * gap_width);
    let k_scale = 1.0 / (2.0 * gap_width);
    integrate_unit_square(
        |x, cx, y, cy| {
            let xi = xi_scale * x / cx;
            let k = k_scale * y / cy;
            let v = kernel(xi, k)?;
            if v == 0.0 {
                return Ok(0.0);
            }
            Ok(v * (xi_scale / (cx * cx)) * (k_scale / (cy * cy)))
        },
        spec,
    )
}

/// ∫₀¹∫₀¹ f(x, 1−x, y, 1−y) dy dx with the nested rule chosen by `spec`.
/// The complements are passed separately so the caller can map x → 1
/// without cancellation.
pub fn integrate_unit_square<F>(f: F, spec: &QuadratureSpec) -> Result<IntegralResult>
where
    F: Fn(f64, f64, f64, f64) -> Result<f64>,
{
    let inner_rel = 0.05 * spec.rel_tol;
    let max_nodes = spec.max_nodes_per_axis;
    let rule = spec.mapping;
    let mut total_nodes = 0usize;
    let mut inner_failure: Option<CasimirError> = None;

    let mut outer = |x: f64, cx: f64| -> Result<Sample> {
        let est = integrate_1d(rule, &mut |y, cy| Ok(Sample::plain(f(x, cx, y, cy)?)), inner_rel, 0.0, max_nodes)?;
        total_nodes += est.nodes;
        if !est.converged && inner_failure.is_none() {
            inner_failure = Some(CasimirError::NonConvergence {
                value: est.value,
                err_estimate: est.err,
                nodes_used: est.nodes,
            });
        }
        Ok(Sample {
            value: est.value,
            err: est.err,
        })
    };
    let est = integrate_1d(rule, &mut outer, spec.rel_tol, spec.abs_tol, max_nodes)?;
    let result = IntegralResult {
        value: est.value,
        err_estimate: est.err,
        nodes_used: total_nodes,
    };
    let tol = spec.abs_tol.max(spec.rel_tol * result.value.abs());
    if let Some(err) = inner_failure {
        if result.err_estimate > tol {
            return Err(err);
        }
    }
    if !est.converged {
        return Err(CasimirError::NonConvergence {
            value: result.value,
            err_estimate: result.err_estimate,
            nodes_used: result.nodes_used,
        });
    }
    Ok(result)
}

/// A function value together with the absolute error already carried by it
/// (non-zero when the value is itself an integral).
#[derive(Debug, Clone, Copy)]
struct Sample {
    value: f64,
    err: f64,
}

impl Sample {
    fn plain(value: f64) -> Self {
        Self { value, err: 0.0 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Estimate {
    value: f64,
    err: f64,
    nodes: usize,
    converged: bool,
}

type UnitFn<'a> = dyn FnMut(f64, f64) -> Result<Sample> + 'a;

fn integrate_1d(
    rule: Mapping,
    f: &mut UnitFn<'_>,
    rel_tol: f64,
    abs_tol: f64,
    max_nodes: usize,
) -> Result<Estimate> {
    match rule {
        Mapping::ExpScaled => adaptive_gauss_kronrod(f, rel_tol, abs_tol, max_nodes),
        Mapping::TanhSinh => tanh_sinh(f, rel_tol, abs_tol, max_nodes),
    }
}

// Gauss–Kronrod 21-point abscissae on [-1, 1] (positive half, centre last).
// Odd indices are the 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

/// One G10/K21 panel on [a, b] ⊂ [0, 1]; error rescaled as in QUADPACK and
/// increased by the error carried by the samples themselves.
fn gk21(f: &mut UnitFn<'_>, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [(0.0f64, 0.0f64); 10];
    let fc = f(center, 1.0 - center)?;
    let mut res_k = WGK[10] * fc.value;
    let mut res_g = 0.0;
    let mut res_abs = WGK[10] * fc.value.abs();
    let mut carried = WGK[10] * fc.err;
    for j in 0..10 {
        let dx = half * XGK[j];
        let (x1, x2) = (center - dx, center + dx);
        let s1 = f(x1, 1.0 - x1)?;
        let s2 = f(x2, 1.0 - x2)?;
        fv[j] = (s1.value, s2.value);
        res_k += WGK[j] * (s1.value + s2.value);
        res_abs += WGK[j] * (s1.value.abs() + s2.value.abs());
        carried += WGK[j] * (s1.err + s2.err);
        if j % 2 == 1 {
            res_g += WG[j / 2] * (s1.value + s2.value);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc.value - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv[j].0 - mean).abs() + (fv[j].1 - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        return Err(CasimirError::Domain(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    Ok(Segment {
        a,
        b,
        value,
        err: err + carried * half.abs(),
    })
}

fn adaptive_gauss_kronrod(
    f: &mut UnitFn<'_>,
    rel_tol: f64,
    abs_tol: f64,
    max_nodes: usize,
) -> Result<Estimate> {
    const PANEL: usize = 21;
    // Four initial panels resolve the typical e^{-y/(1-y)} shape quickly.
    let mut segments = Vec::with_capacity(64);
    for i in 0..4 {
        segments.push(gk21(f, i as f64 / 4.0, (i + 1) as f64 / 4.0)?);
    }
    let mut nodes = 4 * PANEL;
    loop {
        let (value, err) = totals(&segments);
        let tol = abs_tol.max(rel_tol * value.abs());
        if err <= tol {
            return Ok(Estimate {
                value,
                err,
                nodes,
                converged: true,
            });
        }
        // Worst panel; ties resolve to the lowest index.
        let (idx, worst) = segments
            .iter()
            .enumerate()
            .fold((0, segments[0]), |best, (i, s)| {
                if s.err > best.1.err {
                    (i, *s)
                } else {
                    best
                }
            });
        let mid = 0.5 * (worst.a + worst.b);
        let too_narrow = mid <= worst.a || mid >= worst.b;
        if nodes + 2 * PANEL > max_nodes || too_narrow {
            return Ok(Estimate {
                value,
                err,
                nodes,
                converged: false,
            });
        }
        let left = gk21(f, worst.a, mid)?;
        let right = gk21(f, mid, worst.b)?;
        nodes += 2 * PANEL;
        segments[idx] = left;
        segments.insert(idx + 1, right);
    }
}

/// Segments stay ordered by position, so summation order is fixed.
fn totals(segments: &[Segment]) -> (f64, f64) {
    let mut value = CompensatedSum::new();
    let mut err = CompensatedSum::new();
    for s in segments {
        value.add(s.value);
        err.add(s.err);
    }
    (value.value(), err.value())
}

/// Level-doubling tanh-sinh on [0, 1]:
/// x = 1/(1 + e^{−π sinh t}), truncated at |t| ≤ 4.
fn tanh_sinh(f: &mut UnitFn<'_>, rel_tol: f64, abs_tol: f64, max_nodes: usize) -> Result<Estimate> {
    const T_MAX: f64 = 4.0;
    let mut eval = |t: f64| -> Result<Sample> {
        let u = std::f64::consts::PI * t.sinh();
        // x and 1 − x without cancellation.
        let (x, cx) = (1.0 / (1.0 + (-u).exp()), 1.0 / (1.0 + u.exp()));
        let w = 0.25 * std::f64::consts::PI * t.cosh() / (0.5 * u).cosh().powi(2);
        if x <= 0.0 || cx <= 0.0 || w == 0.0 {
            return Ok(Sample::plain(0.0));
        }
        let s = f(x, cx)?;
        Ok(Sample {
            value: if s.value == 0.0 { 0.0 } else { w * s.value },
            err: w * s.err,
        })
    };

    let mut h = 0.5;
    let mut raw = CompensatedSum::new();
    let mut carried = CompensatedSum::new();
    let n0 = (T_MAX / h) as i64;
    for j in -n0..=n0 {
        let s = eval(j as f64 * h)?;
        raw.add(s.value);
        carried.add(s.err);
    }
    let mut nodes = (2 * n0 + 1) as usize;
    let mut estimate = h * raw.value();
    let mut err = f64::INFINITY;
    let mut level = 0;
    loop {
        let new_count = 2 * (T_MAX / h) as usize;
        if nodes + new_count > max_nodes {
            break;
        }
        h *= 0.5;
        let n = (T_MAX / h) as i64;
        for j in (-n..=n).filter(|j| j % 2 != 0) {
            let s = eval(j as f64 * h)?;
            raw.add(s.value);
            carried.add(s.err);
        }
        nodes += new_count;
        level += 1;
        let next = h * raw.value();
        let diff = (next - estimate).abs();
        estimate = next;
        err = diff + h * carried.value() + 50.0 * f64::EPSILON * estimate.abs();
        if level >= 2 && err <= abs_tol.max(rel_tol * estimate.abs()) {
            return Ok(Estimate {
                value: estimate,
                err,
                nodes,
                converged: true,
            });
        }
    }
    Ok(Estimate {
        value: estimate,
        err,
        nodes,
        converged: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(mapping: Mapping) -> QuadratureSpec {
        QuadratureSpec::new(1e-10, 0.0, 4000, mapping).unwrap()
    }

    #[test]
    fn zero_kernel() {
        for m in [Mapping::ExpScaled, Mapping::TanhSinh] {
            let r = integrate2d(|_, _| Ok(0.0), 1e-6, &MaterialModel::Vacuum, &spec(m)).unwrap();
            assert_eq!(r.value, 0.0);
            assert_eq!(r.err_estimate, 0.0);
        }
    }

    #[test]
    fn separable_polynomial_on_unit_square() {
        // ∫∫ x² y³ = 1/12
        for m in [Mapping::ExpScaled, Mapping::TanhSinh] {
            let r = integrate_unit_square(|x, _, y, _| Ok(x * x * y * y * y), &spec(m)).unwrap();
            assert!((r.value - 1.0 / 12.0).abs() < 1e-13, "{m:?}: {}", r.value);
        }
    }

    #[test]
    fn exponential_quadrant_integral() {
        // ∫∫ e^{-a ξ - b k} = 1/(ab)
        let d = 1e-6;
        let (a, b) = (2.0 * d / C_LIGHT, 2.0 * d);
        for m in [Mapping::ExpScaled, Mapping::TanhSinh] {
            let r = integrate2d(
                |xi, k| Ok((-a * xi - b * k).exp()),
                d,
                &MaterialModel::Vacuum,
                &spec(m),
            )
            .unwrap();
            let exact = 1.0 / (a * b);
            assert!(((r.value - exact) / exact).abs() < 1e-10, "{m:?}");
            assert!(r.err_estimate < 1e-9 * exact);
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let tight = QuadratureSpec::new(1e-14, 0.0, 16, Mapping::ExpScaled).unwrap();
        let r = integrate_unit_square(|x, _, y, _| Ok((30.0 * x * y).sin().abs()), &tight);
        assert!(matches!(r, Err(CasimirError::NonConvergence { .. })));
        let tight = QuadratureSpec::new(1e-14, 0.0, 16, Mapping::TanhSinh).unwrap();
        let r = integrate_unit_square(|x, _, y, _| Ok((30.0 * x * y).sin().abs()), &tight);
        assert!(matches!(r, Err(CasimirError::NonConvergence { .. })));
    }

    #[test]
    fn deterministic() {
        let s = spec(Mapping::ExpScaled);
        let f = |x: f64, _: f64, y: f64, _: f64| Ok((x * 3.0).cos() * (-y * 5.0).exp() / (1.0 + x * y));
        let a = integrate_unit_square(f, &s).unwrap();
        let b = integrate_unit_square(f, &s).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.err_estimate.to_bits(), b.err_estimate.to_bits());
    }

    #[test]
    fn spec_invariants() {
        assert!(QuadratureSpec::new(0.0, 0.0, 100, Mapping::ExpScaled).is_err());
        assert!(QuadratureSpec::new(1e-8, -1.0, 100, Mapping::ExpScaled).is_err());
        assert!(QuadratureSpec::new(1e-8, 0.0, 15, Mapping::ExpScaled).is_err());
        assert_eq!(QuadratureSpec::default().rel_tol(), 1e-8);
    }
}
