//! Task dispatch: every task produces one table.

use casimir_core::closed_forms::{
    casimir_ideal, factor, lorentz_factor, minkowski_factor, plate_force_closed, StaticMedium,
};
use casimir_core::geometry::{CavitySetup, Distance, GapSide, Layer, LayerStack};
use casimir_core::materials::MaterialModel;
use casimir_core::minkowski::StressResult;
use casimir_core::oracle::{factor_scan, oracle_force, OracleSpec};
use casimir_core::quadrature::QuadratureSpec;
use casimir_core::scattering::{stack_reflection, transfer_matrix, Polarization, TransverseChannel};
use casimir_core::{lorentz, minkowski, CasimirError, Engine};
use rayon::prelude::*;

use crate::config::{RunConfig, SweepVariable, Task};
use crate::output::{Cell, Table};

pub const FORCE_HEADER: [&str; 5] = ["engine", "d1_m", "d3_m", "force_Pa", "err_Pa"];
pub const PROFILE_HEADER: [&str; 3] = ["z_m", "stress_Pa", "err_Pa"];
pub const RATIO_HEADER: [&str; 5] = ["d3_m", "F_lorentz_Pa", "F_minkowski_Pa", "ratio", "closed_form_ratio"];
pub const CLOSED_FORM_HEADER: [&str; 5] = ["engine", "d1_m", "d3_m", "force_Pa", "factor"];
pub const ORACLE_HEADER: [&str; 6] = [
    "eps",
    "mu",
    "lorentz_measured",
    "lorentz_display",
    "minkowski_measured",
    "minkowski_display",
];
pub const VALIDATE_HEADER: [&str; 5] = ["check_name", "expected", "measured", "tolerance", "pass"];

/// Net plate force with one prescription.
pub fn engine_force(cavity: &CavitySetup, engine: Engine, spec: &QuadratureSpec) -> casimir_core::Result<StressResult> {
    match engine {
        Engine::Lorentz => lorentz::plate_force(cavity, spec),
        Engine::Minkowski => minkowski::plate_force(cavity, spec),
    }
}

fn distance_cell(d: Distance) -> Cell {
    match d {
        Distance::Finite(m) => Cell::Num(m),
        Distance::Infinite => Cell::Text("inf".into()),
    }
}

fn force_rows(cavities: &[CavitySetup], engines: &[Engine], spec: &QuadratureSpec) -> casimir_core::Result<Vec<Vec<Cell>>> {
    let jobs: Vec<(&CavitySetup, Engine)> = cavities
        .iter()
        .flat_map(|c| engines.iter().map(move |&e| (c, e)))
        .collect();
    jobs.par_iter()
        .map(|&(c, e)| {
            let f = engine_force(c, e, spec)?;
            Ok(vec![
                Cell::Text(e.name().into()),
                distance_cell(c.d1()),
                distance_cell(c.d3()),
                Cell::Num(f.value),
                Cell::Num(f.err_estimate),
            ])
        })
        .collect()
}

fn profile(cfg: &RunConfig, gap: GapSide, points: usize) -> casimir_core::Result<Table> {
    let g = cfg.cavity.gap_of(gap);
    let Distance::Finite(d) = g.width() else {
        return Err(CasimirError::Domain("cannot profile a gap of infinite width".into()));
    };
    let zs: Vec<f64> = (1..=points).map(|i| d * i as f64 / (points + 1) as f64).collect();
    let rows = zs
        .par_iter()
        .map(|&z| {
            let s = lorentz::stress_at(&g, z, &cfg.quadrature)?;
            Ok(vec![Cell::Num(z), Cell::Num(s.value), Cell::Num(s.err_estimate)])
        })
        .collect::<casimir_core::Result<Vec<_>>>()?;
    Ok(Table::new(&PROFILE_HEADER, rows))
}

fn ratio(cfg: &RunConfig) -> casimir_core::Result<Table> {
    let m = cfg.static_medium()?;
    let (l, mk) = rayon::join(
        || engine_force(&cfg.cavity, Engine::Lorentz, &cfg.quadrature),
        || engine_force(&cfg.cavity, Engine::Minkowski, &cfg.quadrature),
    );
    let (l, mk) = (l?, mk?);
    let row = vec![
        distance_cell(cfg.cavity.d3()),
        Cell::Num(l.value),
        Cell::Num(mk.value),
        Cell::Num(l.value / mk.value),
        Cell::Num(lorentz_factor(m) / minkowski_factor(m)),
    ];
    Ok(Table::new(&RATIO_HEADER, vec![row]))
}

fn closed_form(cfg: &RunConfig) -> casimir_core::Result<Table> {
    let m = cfg.static_medium()?;
    let (d1, d3) = (cfg.cavity.d1(), cfg.cavity.d3());
    let rows = cfg
        .engine
        .engines()
        .into_iter()
        .map(|e| {
            Ok(vec![
                Cell::Text(e.name().into()),
                distance_cell(d1),
                distance_cell(d3),
                Cell::Num(plate_force_closed(m, d1, d3, e)?),
                Cell::Num(factor(m, e)),
            ])
        })
        .collect::<casimir_core::Result<Vec<_>>>()?;
    Ok(Table::new(&CLOSED_FORM_HEADER, rows))
}

fn oracle(cfg: &RunConfig, media: &Option<Vec<[f64; 2]>>) -> casimir_core::Result<Table> {
    let media = match media {
        Some(list) => list
            .iter()
            .map(|&[eps, mu]| StaticMedium::new(eps, mu))
            .collect::<casimir_core::Result<Vec<_>>>()?,
        None => vec![cfg.static_medium()?],
    };
    let d = cfg
        .cavity
        .d3()
        .meters()
        .or(cfg.cavity.d1().meters())
        .expect("a cavity has at least one finite gap");
    let template = OracleSpec::new(StaticMedium::VACUUM, d);
    let rows = media
        .par_iter()
        .map(|m| factor_scan(std::slice::from_ref(m), &template).map(|r| r[0]))
        .collect::<casimir_core::Result<Vec<_>>>()?
        .into_iter()
        .map(|r| {
            vec![
                Cell::Num(r.eps),
                Cell::Num(r.mu),
                Cell::Num(r.lorentz_measured),
                Cell::Num(r.lorentz_display),
                Cell::Num(r.minkowski_measured),
                Cell::Num(r.minkowski_display),
            ]
        })
        .collect();
    Ok(Table::new(&ORACLE_HEADER, rows))
}

fn sweep(cfg: &RunConfig) -> casimir_core::Result<Table> {
    let s = cfg.sweep.as_ref().expect("validated: sweep task has a sweep block");
    let cavities = s
        .values
        .iter()
        .map(|&v| match s.variable {
            SweepVariable::D1 => cfg.cavity.with_d1(v),
            SweepVariable::D3 => cfg.cavity.with_d3(v),
        })
        .collect::<casimir_core::Result<Vec<_>>>()?;
    Ok(Table::new(
        &FORCE_HEADER,
        force_rows(&cavities, &cfg.engine.engines(), &cfg.quadrature)?,
    ))
}

/// One row of the validation bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub expected: f64,
    pub measured: f64,
    pub tolerance: f64,
    /// Relative tolerance if set, absolute otherwise.
    pub relative: bool,
}

impl Check {
    pub fn pass(&self) -> bool {
        let dev = (self.measured - self.expected).abs();
        let allowed = if self.relative {
            self.tolerance * self.expected.abs()
        } else {
            self.tolerance
        };
        dev <= allowed
    }
}

fn near_mirror_cavity(eps: f64) -> CavitySetup {
    let metal = MaterialModel::drude(1e19, 1e13).expect("valid Drude metal");
    let wall = LayerStack::half_space(metal.clone()).expect("valid wall");
    CavitySetup::new(
        wall.clone(),
        Distance::Infinite,
        vec![Layer::new(1e-6, metal).expect("valid plate")],
        Distance::Finite(1e-6),
        wall,
        MaterialModel::constant(eps, 1.0).expect("valid medium"),
    )
    .expect("valid cavity")
}

fn dielectric_cavity() -> CavitySetup {
    let glass = MaterialModel::drude_lorentz(
        vec![casimir_core::materials::OscillatorTerm::new(4e32, 2e16, 0.0).expect("valid term")],
        Vec::new(),
    );
    let wall = LayerStack::half_space(glass.clone()).expect("valid wall");
    CavitySetup::new(
        wall.clone(),
        Distance::Finite(2e-6),
        vec![Layer::new(300e-9, glass).expect("valid plate")],
        Distance::Finite(800e-9),
        wall,
        MaterialModel::Vacuum,
    )
    .expect("valid cavity")
}

fn scattering_check() -> casimir_core::Result<f64> {
    let layers = vec![
        Layer::new(120e-9, MaterialModel::constant(3.0, 1.0)?)?,
        Layer::new(40e-9, MaterialModel::constant(1.5, 2.0)?)?,
    ];
    let stack = LayerStack::new(layers, MaterialModel::drude(1.4e16, 1e14)?)?;
    let medium = MaterialModel::constant(1.8, 1.0)?;
    let mut worst: f64 = 0.0;
    for (xi, k) in [(1e14, 1e6), (3e15, 2e7), (1e13, 5e5), (8e15, 1e5)] {
        let ch = TransverseChannel::new(xi, k)?;
        for p in Polarization::BOTH {
            let a = stack_reflection(&medium, &stack, ch, p)?;
            let b = transfer_matrix::reflection(&medium, &stack, ch, p)?;
            worst = worst.max(((a - b) / b).abs());
        }
    }
    Ok(worst)
}

/// The fixed validation bundle; runs with the given quadrature settings.
pub fn validation_checks(spec: &QuadratureSpec) -> casimir_core::Result<Vec<Check>> {
    let vacuum = crate::config::vacuum_mirror_config().cavity;
    let ideal = casimir_ideal(1e-6);
    type Job = Box<dyn Fn() -> casimir_core::Result<Vec<Check>> + Send + Sync>;
    let spec = *spec;
    let jobs: Vec<Job> = vec![
        Box::new(move || {
            Ok(vec![Check {
                name: "closed_form_vacuum_1um",
                expected: 1.300_125_772_447_753_4e-3,
                measured: plate_force_closed(StaticMedium::VACUUM, Distance::Infinite, Distance::Finite(1e-6), Engine::Lorentz)?,
                tolerance: 1e-12,
                relative: true,
            }])
        }),
        Box::new(move || {
            let l = engine_force(&vacuum, Engine::Lorentz, &spec)?;
            let m = engine_force(&vacuum, Engine::Minkowski, &spec)?;
            Ok(vec![
                Check {
                    name: "lorentz_vacuum_mirrors",
                    expected: ideal,
                    measured: l.value,
                    tolerance: 1e-5,
                    relative: true,
                },
                Check {
                    name: "minkowski_vacuum_mirrors",
                    expected: ideal,
                    measured: m.value,
                    tolerance: 1e-5,
                    relative: true,
                },
            ])
        }),
        Box::new(move || {
            let c = dielectric_cavity();
            let l = engine_force(&c, Engine::Lorentz, &spec)?;
            let m = engine_force(&c, Engine::Minkowski, &spec)?;
            Ok(vec![Check {
                name: "engine_difference_vacuum_dielectric",
                expected: 0.0,
                measured: l.value - m.value,
                tolerance: 2.0 * (l.err_estimate + m.err_estimate),
                relative: false,
            }])
        }),
        Box::new(move || {
            let c = near_mirror_cavity(2.0);
            let l = engine_force(&c, Engine::Lorentz, &spec)?;
            let m = engine_force(&c, Engine::Minkowski, &spec)?;
            Ok(vec![
                Check {
                    name: "lorentz_factor_eps2",
                    expected: lorentz_factor(StaticMedium::new(2.0, 1.0)?),
                    measured: l.value / ideal,
                    tolerance: 0.01,
                    relative: true,
                },
                Check {
                    name: "force_ratio_eps2",
                    expected: 5.0 / 6.0,
                    measured: l.value / m.value,
                    tolerance: 0.01,
                    relative: true,
                },
            ])
        }),
        Box::new(move || {
            let m = StaticMedium::new(2.0, 1.0)?;
            let o = OracleSpec::new(m, 1e-6);
            Ok(vec![
                Check {
                    name: "oracle_lorentz_eps2",
                    expected: lorentz_factor(m),
                    measured: oracle_force(&o, Engine::Lorentz)? / ideal,
                    tolerance: 0.005,
                    relative: true,
                },
                Check {
                    name: "oracle_minkowski_eps2",
                    expected: minkowski_factor(m),
                    measured: oracle_force(&o, Engine::Minkowski)? / ideal,
                    tolerance: 0.005,
                    relative: true,
                },
            ])
        }),
        Box::new(move || {
            Ok(vec![Check {
                name: "recursion_vs_transfer_matrix",
                expected: 0.0,
                measured: scattering_check()?,
                tolerance: 1e-12,
                relative: false,
            }])
        }),
    ];
    let groups = jobs
        .par_iter()
        .map(|j| j())
        .collect::<casimir_core::Result<Vec<_>>>()?;
    Ok(groups.into_iter().flatten().collect())
}

fn validate(spec: &QuadratureSpec) -> casimir_core::Result<Table> {
    let rows = validation_checks(spec)?
        .into_iter()
        .map(|c| {
            let pass = c.pass();
            vec![
                Cell::Text(c.name.into()),
                Cell::Num(c.expected),
                Cell::Num(c.measured),
                Cell::Num(c.tolerance),
                Cell::Bool(pass),
            ]
        })
        .collect();
    Ok(Table::new(&VALIDATE_HEADER, rows))
}

/// Runs the configured task.
pub fn run_task(cfg: &RunConfig) -> casimir_core::Result<Table> {
    match &cfg.task {
        Task::Force => Ok(Table::new(
            &FORCE_HEADER,
            force_rows(std::slice::from_ref(&cfg.cavity), &cfg.engine.engines(), &cfg.quadrature)?,
        )),
        Task::StressProfile { gap, points } => profile(cfg, (*gap).into(), *points),
        Task::Ratio => ratio(cfg),
        Task::ClosedForm => closed_form(cfg),
        Task::Oracle { media } => oracle(cfg, media),
        Task::Validate => validate(&cfg.quadrature),
        Task::Sweep => sweep(cfg),
    }
}
