//! Picking-distance range, lifting and holding forces, and the pick predicate.
//!
//! Distances run from the upper surface of the upper end-cap to the top of
//! the object, so they include the end-caps and the suction cup.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::film::{effective_area, StationModel};
use crate::math::PI;
use crate::pneumatics::pressure_drop;
use crate::types::{GripperDesign, ObjectSpec, PneumaticLine, DEFAULT_VACUUM_GAUGE};
use crate::GRAVITY;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinCase {
    /// Vacuum contraction balances the spring before the coils touch.
    Equilibrium,
    /// The spring is driven to solid length.
    SolidLength,
}

impl MinCase {
    pub fn as_str(self) -> &'static str {
        match self {
            MinCase::Equilibrium => "equilibrium",
            MinCase::SolidLength => "solid_length",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PickingRange {
    pub d_min: f64,
    pub d_max: f64,
    /// Fully deployed spring length over contracted spring length.
    pub deployment_ratio: f64,
    pub min_case: MinCase,
    /// Line Reynolds number at the configured flow.
    pub reynolds: f64,
}

impl PickingRange {
    pub fn contains(&self, distance: f64) -> bool {
        distance >= self.d_min && distance <= self.d_max
    }
}

/// Minimum distance: the larger of the vacuum/spring equilibrium
/// `L − P_atm·A_b/k + h` and the solid stack `N·t + 2(N−1)·t_film + h`.
pub fn min_distance(design: &GripperDesign, line: &PneumaticLine) -> (f64, MinCase) {
    let s = &design.outer_spring;
    let caps = design.cap_heights();
    let equilibrium =
        s.free_length - line.atmospheric_pressure * design.body_effective_area_full / s.spring_constant + caps;
    let solid = design.solid_length() + caps;
    if equilibrium >= solid {
        (equilibrium, MinCase::Equilibrium)
    } else {
        (solid, MinCase::SolidLength)
    }
}

/// Fully deployed distance `L − ΔP·A_b/k + h`, with `ΔP` the line loss at
/// the configured flow.
pub fn max_distance(design: &GripperDesign, line: &PneumaticLine) -> Result<f64> {
    let s = &design.outer_spring;
    let drop = pressure_drop(line).pressure_drop;
    let contraction = drop * design.body_effective_area_full / s.spring_constant;
    let stroke = s.free_length - design.solid_length();
    if contraction >= stroke {
        return Err(Error::Degenerate { contraction, stroke });
    }
    Ok(s.free_length - contraction + design.cap_heights())
}

pub fn picking_range(design: &GripperDesign, line: &PneumaticLine) -> Result<PickingRange> {
    let (d_min, min_case) = min_distance(design, line);
    let d_max = max_distance(design, line)?;
    let caps = design.cap_heights();
    Ok(PickingRange {
        d_min,
        d_max,
        deployment_ratio: (d_max - caps) / (d_min - caps),
        min_case,
        reynolds: crate::pneumatics::reynolds_number(line),
    })
}

/// Body effective area at spring length `length`: the taut-film area `A_b`
/// scaled by the fraction of the end-cap disc that film contact leaves
/// pressure-bearing.
pub fn body_effective_area(design: &GripperDesign, length: f64, model: &StationModel) -> Result<f64> {
    let disc = PI * design.endcap_radius * design.endcap_radius;
    Ok(design.body_effective_area_full * effective_area(design, length, model)? / disc)
}

/// Net lifting force of the body, `(P_atm − P_b)·A_e(l) − k·(L − l)`,
/// floored at zero.
pub fn body_lifting_force(
    design: &GripperDesign,
    atmospheric_pressure: f64,
    body_pressure: f64,
    length: f64,
    model: &StationModel,
) -> Result<f64> {
    let area = body_effective_area(design, length, model)?;
    Ok(lifting_force_with_area(design, atmospheric_pressure - body_pressure, area, length))
}

/// Lifting force for a known pressure difference and area, floored at zero.
pub fn lifting_force_with_area(design: &GripperDesign, pressure_difference: f64, area: f64, length: f64) -> f64 {
    let s = &design.outer_spring;
    (pressure_difference * area - s.spring_constant * (s.free_length - length)).max(0.0)
}

/// Upper bound of the cup holding force, `(P_atm − P_s)·A_s`.
pub fn cup_holding_force_max(design: &GripperDesign, atmospheric_pressure: f64, cup_pressure: f64) -> f64 {
    ((atmospheric_pressure - cup_pressure) * design.suction_cup_effective_area).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limiting {
    Body,
    Cup,
}

impl Limiting {
    pub fn as_str(self) -> &'static str {
        match self {
            Limiting::Body => "body",
            Limiting::Cup => "cup",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForcePoint {
    pub distance: f64,
    pub body_force_max: f64,
    pub cup_force_max: f64,
    pub picking_force: f64,
    pub limiting: Limiting,
}

/// Vacuum level and area quadrature used by the force models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceSettings {
    /// Deepest gauge pressure the pump sustains (Pa, negative).
    pub vacuum_gauge: f64,
    pub stations: StationModel,
}

impl Default for ForceSettings {
    fn default() -> Self {
        Self { vacuum_gauge: DEFAULT_VACUUM_GAUGE, stations: StationModel::default() }
    }
}

/// Spring length when the cup touches an object at `distance`.
pub fn length_at_distance(design: &GripperDesign, distance: f64) -> f64 {
    let l = distance - design.cap_heights();
    l.clamp(design.solid_length(), design.outer_spring.free_length)
}

fn force_point(
    design: &GripperDesign,
    line: &PneumaticLine,
    distance: f64,
    settings: &ForceSettings,
) -> Result<ForcePoint> {
    let p_atm = line.atmospheric_pressure;
    let p_vac = p_atm + settings.vacuum_gauge;
    let length = length_at_distance(design, distance);
    let body = body_lifting_force(design, p_atm, p_vac, length, &settings.stations)?;
    let cup = cup_holding_force_max(design, p_atm, p_vac);
    let (picking_force, limiting) = if body < cup { (body, Limiting::Body) } else { (cup, Limiting::Cup) };
    Ok(ForcePoint { distance, body_force_max: body, cup_force_max: cup, picking_force, limiting })
}

/// Maximum forces at each distance, evaluated at the deepest vacuum.
pub fn force_profile(
    design: &GripperDesign,
    line: &PneumaticLine,
    distances: &[f64],
    settings: &ForceSettings,
) -> Result<Vec<ForcePoint>> {
    let range = picking_range(design, line)?;
    let tol = 1e-12;
    distances
        .iter()
        .map(|&x| {
            if x < range.d_min - tol || x > range.d_max + tol {
                return Err(Error::out_of_interval("distance", x, range.d_min, range.d_max));
            }
            force_point(design, line, x, settings)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PickReason {
    Ok,
    OutOfRange,
    BodyLimited,
    CupLimited,
}

impl PickReason {
    pub fn as_str(self) -> &'static str {
        match self {
            PickReason::Ok => "ok",
            PickReason::OutOfRange => "out_of_range",
            PickReason::BodyLimited => "body_limited",
            PickReason::CupLimited => "cup_limited",
        }
    }
}

/// Whether `object` can be lifted: it must lie within the picking range
/// and weigh no more than the smaller of the two force bounds.
pub fn can_pick(
    design: &GripperDesign,
    line: &PneumaticLine,
    object: &ObjectSpec,
    settings: &ForceSettings,
) -> Result<(bool, PickReason)> {
    let range = picking_range(design, line)?;
    if !range.contains(object.distance) {
        return Ok((false, PickReason::OutOfRange));
    }
    let p = force_point(design, line, object.distance, settings)?;
    if p.picking_force >= object.mass * GRAVITY {
        return Ok((true, PickReason::Ok));
    }
    let reason = match p.limiting {
        Limiting::Body => PickReason::BodyLimited,
        Limiting::Cup => PickReason::CupLimited,
    };
    Ok((false, reason))
}
