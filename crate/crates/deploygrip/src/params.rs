//! Named design parameters and metrics shared by `sweep` and `optimize`.

use std::fmt;
use std::str::FromStr;

use deploygrip_core::cycle::simulate_cycle;
use deploygrip_core::picking::{can_pick, force_profile, picking_range, PickingRange};
use deploygrip_core::pneumatics::pressure_drop;
use deploygrip_core::types::validate_design;
use deploygrip_core::units::{kpa, lpm, mm, to_mm};

use crate::config::{stiffness_for, Model};
use crate::error::{CliError, CliResult};

/// A config value addressable from the command line, in CLI units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    /// mm; also resets the stiffness unless `spring_constant` is set too
    WireDiameter,
    FreeLength,
    FilmThickness,
    TubeDiameter,
    TubeLength,
    FlowRate,
    VacuumGauge,
    Mass,
    Distance,
    /// N/m
    SpringConstant,
}

impl Param {
    pub const ALL: [Param; 10] = [
        Param::WireDiameter,
        Param::FreeLength,
        Param::FilmThickness,
        Param::TubeDiameter,
        Param::TubeLength,
        Param::FlowRate,
        Param::VacuumGauge,
        Param::Mass,
        Param::Distance,
        Param::SpringConstant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::WireDiameter => "wire_diameter",
            Param::FreeLength => "free_length",
            Param::FilmThickness => "film_thickness",
            Param::TubeDiameter => "tube_diameter",
            Param::TubeLength => "tube_length",
            Param::FlowRate => "flow_rate",
            Param::VacuumGauge => "vacuum_gauge",
            Param::Mass => "mass",
            Param::Distance => "distance",
            Param::SpringConstant => "spring_constant",
        }
    }

    fn apply(self, m: &mut Model, v: f64) {
        let d = &mut m.design;
        match self {
            Param::WireDiameter => {
                d.outer_spring.wire_diameter = mm(v);
                d.outer_spring.spring_constant = stiffness_for(&d.outer_spring);
            }
            Param::FreeLength => {
                d.outer_spring.free_length = mm(v);
                d.inner_spring.free_length = mm(v);
                d.outer_spring.spring_constant = stiffness_for(&d.outer_spring);
            }
            Param::FilmThickness => d.film_thickness = mm(v),
            Param::TubeDiameter => m.line.tube_diameter = mm(v),
            Param::TubeLength => m.line.tube_length = mm(v),
            Param::FlowRate => m.line.flow_rate = lpm(v),
            Param::VacuumGauge => {
                m.force.vacuum_gauge = kpa(v);
                m.sim.vacuum_gauge = kpa(v);
            }
            Param::Mass => m.scenario.object.mass = v,
            Param::Distance => m.scenario.object.distance = mm(v),
            Param::SpringConstant => d.outer_spring.spring_constant = v,
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Param::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let names: Vec<_> = Param::ALL.iter().map(|p| p.name()).collect();
            CliError::input("parameter", format!("unknown `{s}`; expected one of {}", names.join(", ")))
        })
    }
}

/// `base` with every `(param, value)` applied and re-validated. The
/// stiffness is applied last so an explicit value wins over the default
/// that follows a wire change.
pub fn apply(base: &Model, values: &[(Param, f64)]) -> CliResult<Model> {
    let mut m = *base;
    let mut ordered = values.to_vec();
    ordered.sort_by_key(|(p, _)| *p);
    for (p, v) in ordered {
        if !v.is_finite() {
            return Err(CliError::input(p.name(), "must be finite"));
        }
        p.apply(&mut m, v);
    }
    let violations = validate_design(&m.design, &m.line);
    if !violations.is_empty() {
        return Err(CliError::Validation(violations));
    }
    if !(m.force.vacuum_gauge < 0.0 && m.force.vacuum_gauge > -m.line.atmospheric_pressure) {
        return Err(CliError::input("vacuum_gauge", "must lie between -atmospheric_pressure and 0"));
    }
    if !(m.scenario.object.distance > 0.0) || !(m.scenario.object.mass >= 0.0) {
        return Err(CliError::input("scenario", "distance must be > 0 and mass >= 0"));
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    DMin,
    DMax,
    DeploymentRatio,
    Reynolds,
    PressureDrop,
    BodyForce,
    CupForce,
    PickingForce,
    CanPick,
    CycleTime,
}

impl Metric {
    pub const ALL: [Metric; 10] = [
        Metric::DMin,
        Metric::DMax,
        Metric::DeploymentRatio,
        Metric::Reynolds,
        Metric::PressureDrop,
        Metric::BodyForce,
        Metric::CupForce,
        Metric::PickingForce,
        Metric::CanPick,
        Metric::CycleTime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::DMin => "d_min",
            Metric::DMax => "d_max",
            Metric::DeploymentRatio => "deployment_ratio",
            Metric::Reynolds => "reynolds",
            Metric::PressureDrop => "pressure_drop",
            Metric::BodyForce => "body_force",
            Metric::CupForce => "cup_force",
            Metric::PickingForce => "picking_force",
            Metric::CanPick => "can_pick",
            Metric::CycleTime => "cycle_time",
        }
    }
}

impl FromStr for Metric {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Metric::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| {
            let names: Vec<_> = Metric::ALL.iter().map(|m| m.name()).collect();
            CliError::input("metric", format!("unknown `{s}`; expected one of {}", names.join(", ")))
        })
    }
}

/// Lazily evaluated results for one model, in CLI units.
pub struct Evaluation<'a> {
    model: &'a Model,
    range: Option<PickingRange>,
}

impl<'a> Evaluation<'a> {
    pub fn new(model: &'a Model) -> Self {
        Self { model, range: None }
    }

    pub fn range(&mut self) -> CliResult<PickingRange> {
        if let Some(r) = self.range {
            return Ok(r);
        }
        let r = picking_range(&self.model.design, &self.model.line)?;
        self.range = Some(r);
        Ok(r)
    }

    /// Forces at `distance` (m): `(body, cup, picking)` in N.
    pub fn forces_at(&mut self, distance: f64) -> CliResult<(f64, f64, f64)> {
        let m = self.model;
        let p = force_profile(&m.design, &m.line, &[distance], &m.force)?[0];
        Ok((p.body_force_max, p.cup_force_max, p.picking_force))
    }

    pub fn metric(&mut self, metric: Metric) -> CliResult<f64> {
        let m = self.model;
        let distance = m.scenario.object.distance;
        Ok(match metric {
            Metric::DMin => to_mm(self.range()?.d_min),
            Metric::DMax => to_mm(self.range()?.d_max),
            Metric::DeploymentRatio => self.range()?.deployment_ratio,
            Metric::Reynolds => self.range()?.reynolds,
            Metric::PressureDrop => pressure_drop(&m.line).pressure_drop / 1e3,
            Metric::BodyForce => self.forces_at(distance)?.0,
            Metric::CupForce => self.forces_at(distance)?.1,
            Metric::PickingForce => self.forces_at(distance)?.2,
            Metric::CanPick => {
                let (ok, _) = can_pick(&m.design, &m.line, &m.scenario.object, &m.force)?;
                if ok {
                    1.0
                } else {
                    0.0
                }
            }
            Metric::CycleTime => simulate_cycle(&m.design, &m.line, &m.scenario, &m.sim)?.cycle_time,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in Param::ALL {
            assert_eq!(p.name().parse::<Param>().unwrap(), p);
        }
        for m in Metric::ALL {
            assert_eq!(m.name().parse::<Metric>().unwrap(), m);
        }
        assert!("k".parse::<Param>().is_err());
    }

    #[test]
    fn explicit_stiffness_beats_wire_default() {
        let base = Model::default();
        let m = apply(&base, &[(Param::SpringConstant, 300.0), (Param::WireDiameter, 2.0)]).unwrap();
        assert_eq!(m.design.outer_spring.spring_constant, 300.0);
        let m = apply(&base, &[(Param::WireDiameter, 2.0)]).unwrap();
        assert_eq!(m.design.outer_spring.spring_constant, 522.0);
    }

    #[test]
    fn invalid_points_are_rejected() {
        assert!(apply(&Model::default(), &[(Param::TubeDiameter, 0.0)]).is_err());
        assert!(apply(&Model::default(), &[(Param::VacuumGauge, 5.0)]).is_err());
    }
}
