//! TOML configuration.
//!
//! Every key is optional and falls back to the catalogued gripper with a
//! 1.6 mm wire. Units at this boundary: lengths in mm, areas in mm²,
//! volumes in mm³, flow in L/min, pressures in kPa, mass in kg, time in s.
//!
//! ```toml
//! [outer_spring]
//! wire_diameter = 1.8
//!
//! [line]
//! flow_rate = 9.0
//!
//! [scenario]
//! mass = 0.2
//! distance = 95.0
//! ```

use std::path::Path;

use deploygrip_core::cycle::{Scenario, SimSettings};
use deploygrip_core::film::StationModel;
use deploygrip_core::picking::ForceSettings;
use deploygrip_core::types::{catalog, default_active_coils, helix_stiffness, validate_design};
use deploygrip_core::units::{kpa, lpm, mm, mm2, mm3};
use deploygrip_core::{GripperDesign, ObjectSpec, PneumaticLine, SpringParams};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpringConfig {
    pub free_length: Option<f64>,
    pub coil_radius: Option<f64>,
    pub pitch: Option<f64>,
    pub wire_diameter: Option<f64>,
    /// N/m. Defaults to the measured value for a listed wire, otherwise
    /// the helix estimate.
    pub spring_constant: Option<f64>,
    pub shear_modulus: Option<f64>,
    pub active_coils: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GripperConfig {
    pub film_thickness: Option<f64>,
    pub endcap_heights_total: Option<f64>,
    pub suction_cup_height: Option<f64>,
    pub suction_cup_effective_area: Option<f64>,
    pub body_effective_area_full: Option<f64>,
    pub endcap_radius: Option<f64>,
    pub radial_clearance: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineConfig {
    pub tube_diameter: Option<f64>,
    pub tube_length: Option<f64>,
    pub roughness: Option<f64>,
    pub flow_rate: Option<f64>,
    pub air_density: Option<f64>,
    pub dynamic_viscosity: Option<f64>,
    pub atmospheric_pressure: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForceConfig {
    pub vacuum_gauge: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub mass: Option<f64>,
    pub distance: Option<f64>,
    pub valve_switch_time: Option<f64>,
    pub hold_time: Option<f64>,
    pub seal_leak_area: Option<f64>,
    pub deploy_timeout: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub dead_volume: Option<f64>,
    pub cup_volume: Option<f64>,
    pub substeps: Option<usize>,
    pub area_nodes: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub outer_spring: SpringConfig,
    #[serde(default)]
    pub inner_spring: SpringConfig,
    #[serde(default)]
    pub gripper: GripperConfig,
    #[serde(default)]
    pub line: LineConfig,
    #[serde(default)]
    pub force: ForceConfig,
    #[serde(default)]
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub simulation: SimulationConfig,
}

/// Everything the commands need, in SI.
#[derive(Debug, Clone, Copy)]
pub struct Model {
    pub design: GripperDesign,
    pub line: PneumaticLine,
    pub force: ForceSettings,
    pub scenario: Scenario,
    pub sim: SimSettings,
}

impl Default for Model {
    fn default() -> Self {
        FileConfig::default().resolve(None, None).expect("defaults are valid")
    }
}

impl FileConfig {
    pub fn parse(text: &str, path: &Path) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config { path: path.to_path_buf(), message: e.to_string() })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
        Self::parse(&text, path)
    }

    /// Builds the SI model. `stations` and `timestep` come from global flags.
    pub fn resolve(&self, stations: Option<usize>, timestep: Option<f64>) -> CliResult<Model> {
        let outer = spring(&self.outer_spring, catalog::outer(1));
        let mut inner_base = catalog::inner();
        inner_base.free_length = outer.free_length;
        let inner = spring(&self.inner_spring, inner_base);

        let mut design = GripperDesign::with_outer_spring(outer);
        design.inner_spring = inner;
        let g = &self.gripper;
        set(&mut design.film_thickness, g.film_thickness, mm);
        set(&mut design.endcap_heights_total, g.endcap_heights_total, mm);
        set(&mut design.suction_cup_height, g.suction_cup_height, mm);
        set(&mut design.suction_cup_effective_area, g.suction_cup_effective_area, mm2);
        set(&mut design.body_effective_area_full, g.body_effective_area_full, mm2);
        if let Some(c) = g.radial_clearance {
            design.set_radial_clearance(mm(c));
        }
        set(&mut design.endcap_radius, g.endcap_radius, mm);

        let mut line = PneumaticLine::default();
        let l = &self.line;
        set(&mut line.tube_diameter, l.tube_diameter, mm);
        set(&mut line.tube_length, l.tube_length, mm);
        set(&mut line.roughness, l.roughness, mm);
        set(&mut line.flow_rate, l.flow_rate, lpm);
        set(&mut line.air_density, l.air_density, |v| v);
        set(&mut line.dynamic_viscosity, l.dynamic_viscosity, |v| v);
        set(&mut line.atmospheric_pressure, l.atmospheric_pressure, kpa);

        let violations = validate_design(&design, &line);
        if !violations.is_empty() {
            return Err(CliError::Validation(violations));
        }

        let mut stations_model = StationModel::default();
        if let Some(n) = stations {
            if n == 0 {
                return Err(CliError::input("stations", "must be at least 1"));
            }
            stations_model.stations = n;
        }
        let mut force = ForceSettings { stations: stations_model, ..ForceSettings::default() };
        set(&mut force.vacuum_gauge, self.force.vacuum_gauge, kpa);
        if !(force.vacuum_gauge < 0.0 && force.vacuum_gauge > -line.atmospheric_pressure) {
            return Err(CliError::input("force.vacuum_gauge", "must lie between -atmospheric_pressure and 0"));
        }

        let s = &self.scenario;
        let mut scenario = Scenario::new(ObjectSpec { mass: 0.005, distance: mm(95.0) });
        set(&mut scenario.object.mass, s.mass, |v| v);
        set(&mut scenario.object.distance, s.distance, mm);
        set(&mut scenario.valve_switch_time, s.valve_switch_time, |v| v);
        set(&mut scenario.hold_time, s.hold_time, |v| v);
        set(&mut scenario.seal_leak_area, s.seal_leak_area, mm2);
        set(&mut scenario.deploy_timeout, s.deploy_timeout, |v| v);
        if let Some(dt) = timestep {
            scenario.timestep = dt;
        }
        positive("scenario.mass", scenario.object.mass, true)?;
        positive("scenario.distance", scenario.object.distance, false)?;
        positive("scenario.valve_switch_time", scenario.valve_switch_time, true)?;
        positive("scenario.hold_time", scenario.hold_time, true)?;
        positive("scenario.seal_leak_area", scenario.seal_leak_area, true)?;
        positive("scenario.deploy_timeout", scenario.deploy_timeout, false)?;
        positive("timestep", scenario.timestep, false)?;

        let m = &self.simulation;
        let mut sim =
            SimSettings { vacuum_gauge: force.vacuum_gauge, stations: stations_model, ..SimSettings::default() };
        if let Some(v) = m.dead_volume {
            positive("simulation.dead_volume", v, true)?;
            sim.dead_volume = Some(mm3(v));
        }
        set(&mut sim.cup_volume, m.cup_volume, mm3);
        positive("simulation.cup_volume", sim.cup_volume, false)?;
        if let Some(n) = m.substeps {
            if n == 0 {
                return Err(CliError::input("simulation.substeps", "must be at least 1"));
            }
            sim.substeps = n;
        }
        if let Some(n) = m.area_nodes {
            if n < 2 {
                return Err(CliError::input("simulation.area_nodes", "must be at least 2"));
            }
            sim.area_nodes = n;
        }

        Ok(Model { design, line, force, scenario, sim })
    }
}

fn set(slot: &mut f64, value: Option<f64>, convert: impl Fn(f64) -> f64) {
    if let Some(v) = value {
        *slot = convert(v);
    }
}

fn positive(key: &str, v: f64, allow_zero: bool) -> CliResult<()> {
    let ok = if allow_zero { v >= 0.0 } else { v > 0.0 };
    if ok && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::input(key, format!("{v} is not {}", if allow_zero { ">= 0" } else { "> 0" })))
    }
}

/// Spring from config over `base`. Changing the wire or geometry without
/// giving a stiffness picks the measured value for a listed wire and the
/// helix estimate otherwise.
fn spring(c: &SpringConfig, base: SpringParams) -> SpringParams {
    let mut s = base;
    set(&mut s.free_length, c.free_length, mm);
    set(&mut s.coil_radius, c.coil_radius, mm);
    set(&mut s.pitch, c.pitch, mm);
    set(&mut s.wire_diameter, c.wire_diameter, mm);
    set(&mut s.shear_modulus, c.shear_modulus, kpa);
    s.active_coils = c.active_coils.unwrap_or_else(|| default_active_coils(s.free_length, s.pitch));
    let geometry_changed = c.free_length.is_some()
        || c.coil_radius.is_some()
        || c.pitch.is_some()
        || c.wire_diameter.is_some()
        || c.shear_modulus.is_some()
        || c.active_coils.is_some();
    s.spring_constant = match c.spring_constant {
        Some(k) => k,
        None if geometry_changed => stiffness_for(&s),
        None => base.spring_constant,
    };
    s
}

/// Stiffness assumed for `s` when none is given.
pub fn stiffness_for(s: &SpringParams) -> f64 {
    let listed = catalog::outer(0);
    let same_shape = (s.free_length - listed.free_length).abs() < 1e-9
        && (s.coil_radius - listed.coil_radius).abs() < 1e-9
        && (s.pitch - listed.pitch).abs() < 1e-9;
    match catalog::outer_constant_for(s.wire_diameter) {
        Some(k) if same_shape => k,
        _ => helix_stiffness(s),
    }
}
