//! Quasi-static simulation of one pick-and-place cycle.
//!
//! The pneumatic side is a lumped isothermal model. The gas content `P·V` of
//! the body node changes with inflow from the atmosphere through the open
//! cup (deploying), a seal leak (sealed phases), and the pump, which
//! extracts the configured volumetric flow until the vacuum limit is
//! reached. The body volume is `A_b·(l − l_solid)` plus a fixed dead volume
//! for tubing and end-caps. Each sub-step the spring length is the
//! force-balance root of `(P_atm − P_b)·A_e(l) − k·(L − l) − W = 0`, clamped
//! to the solid length and to the length where the cup met the object.
//!
//! Phases follow the valve sequence: ready to pick → deploying (valve joins
//! cup and body) → sealed and retracting (cup closes on the object) →
//! holding → releasing (valve vents the cup) → ready to pick.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::film::StationModel;
use crate::math::{sqrt, PI};
use crate::picking::{body_effective_area, cup_holding_force_max, picking_range};
use crate::pneumatics::flow_for_pressure_drop;
use crate::types::{GripperDesign, ObjectSpec, PneumaticLine, DEFAULT_VACUUM_GAUGE};
use crate::GRAVITY;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CyclePhase {
    ReadyToPick,
    Deploying,
    SealedRetracting,
    Holding,
    Releasing,
}

impl CyclePhase {
    pub fn as_str(self) -> &'static str {
        match self {
            CyclePhase::ReadyToPick => "ready_to_pick",
            CyclePhase::Deploying => "deploying",
            CyclePhase::SealedRetracting => "sealed_retracting",
            CyclePhase::Holding => "holding",
            CyclePhase::Releasing => "releasing",
        }
    }

    /// Whether `self → next` is an edge of the valve sequence.
    pub fn can_follow_with(self, next: CyclePhase) -> bool {
        use CyclePhase::*;
        matches!(
            (self, next),
            (ReadyToPick, Deploying)
                | (Deploying, SealedRetracting)
                | (SealedRetracting, Holding)
                | (Holding, Releasing)
                | (Releasing, ReadyToPick)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Picked,
    Dropped,
    NoContact,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Picked => "picked",
            Outcome::Dropped => "dropped",
            Outcome::NoContact => "no_contact",
        }
    }
}

/// Why a sealed object was not picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DropCause {
    /// The body could not lift the object off its support.
    BodyForce,
    /// The cup bound `(P_atm − P_s)·A_s` was below the object weight.
    CupBound,
}

/// One pick to simulate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub object: ObjectSpec,
    /// When the valve switches to start picking (s).
    pub valve_switch_time: f64,
    /// Time spent holding before the valve switches back (s).
    pub hold_time: f64,
    /// Effective leak area around the sealed cup (m²).
    pub seal_leak_area: f64,
    /// Output sample interval (s).
    pub timestep: f64,
    /// Give up deploying after this long without contact (s).
    pub deploy_timeout: f64,
}

impl Scenario {
    pub fn new(object: ObjectSpec) -> Self {
        Self {
            object,
            valve_switch_time: 0.05,
            hold_time: 0.3,
            seal_leak_area: 0.0,
            timestep: 1e-3,
            deploy_timeout: 1.5,
        }
    }
}

/// Pump, volume and integration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSettings {
    /// Gauge pressure floor the pump reaches (Pa, negative).
    pub vacuum_gauge: f64,
    /// Volume outside the spring chamber on the body node (m³). `None`
    /// uses the bore volume of the two supply tubes.
    pub dead_volume: Option<f64>,
    /// Cup and air-tube volume, vented separately on release (m³).
    pub cup_volume: f64,
    /// Euler sub-steps per output timestep.
    pub substeps: usize,
    /// Lengths at which the body effective area is tabulated.
    pub area_nodes: usize,
    pub stations: StationModel,
    /// Orifice discharge coefficient for the seal leak.
    pub leak_discharge_coefficient: f64,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            vacuum_gauge: DEFAULT_VACUUM_GAUGE,
            dead_volume: None,
            cup_volume: 2e-6,
            substeps: 10,
            area_nodes: 64,
            stations: StationModel::default(),
            leak_discharge_coefficient: 0.6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    pub t: f64,
    pub phase: CyclePhase,
    /// Absolute body pressure (Pa).
    pub body_pressure: f64,
    /// Absolute cup pressure (Pa).
    pub cup_pressure: f64,
    /// Spring length (m).
    pub length: f64,
    /// Net lifting force of the body (N).
    pub body_force: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleTrace {
    pub samples: Vec<TraceSample>,
    pub outcome: Outcome,
    pub drop_cause: Option<DropCause>,
    /// From the picking valve switch to reaching the holding phase, or to
    /// the deploy timeout when nothing was reached (s).
    pub cycle_time: f64,
    pub atmospheric_pressure: f64,
    pub vacuum_limit: f64,
}

impl CycleTrace {
    /// Lowest body pressure while sealed or holding.
    pub fn min_sealed_body_pressure(&self) -> Option<f64> {
        self.samples
            .iter()
            .filter(|s| matches!(s.phase, CyclePhase::SealedRetracting | CyclePhase::Holding))
            .map(|s| s.body_pressure)
            .reduce(f64::min)
    }

    /// Largest cup vacuum `P_atm − P_s` over the cycle.
    pub fn max_cup_vacuum(&self) -> f64 {
        self.samples.iter().map(|s| self.atmospheric_pressure - s.cup_pressure).fold(0.0, f64::max)
    }

    /// True when `other` matches sample for sample, bit for bit.
    pub fn bit_identical(&self, other: &CycleTrace) -> bool {
        self.outcome == other.outcome
            && self.cycle_time.to_bits() == other.cycle_time.to_bits()
            && self.samples.len() == other.samples.len()
            && self.samples.iter().zip(&other.samples).all(|(a, b)| {
                a.phase == b.phase
                    && [a.t, a.body_pressure, a.cup_pressure, a.length, a.body_force]
                        .iter()
                        .zip([b.t, b.body_pressure, b.cup_pressure, b.length, b.body_force].iter())
                        .all(|(x, y)| x.to_bits() == y.to_bits())
            })
    }
}

/// Body effective area tabulated on a uniform length grid.
#[derive(Debug, Clone)]
struct AreaTable {
    lo: f64,
    step: f64,
    areas: Vec<f64>,
}

impl AreaTable {
    fn build(design: &GripperDesign, nodes: usize, stations: &StationModel) -> Result<Self> {
        let nodes = nodes.max(2);
        let lo = design.solid_length();
        let hi = design.outer_spring.free_length;
        let step = (hi - lo) / (nodes - 1) as f64;
        let areas = (0..nodes)
            .map(|i| {
                let l = if i + 1 == nodes { hi } else { lo + step * i as f64 };
                body_effective_area(design, l, stations)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { lo, step, areas })
    }

    fn node(&self, i: usize) -> f64 {
        self.lo + self.step * i as f64
    }

    /// Segment index and linear coefficients `(a₀, slope)` around `l`.
    fn segment(&self, l: f64) -> (usize, f64, f64) {
        let last = self.areas.len() - 2;
        let i = (((l - self.lo) / self.step) as usize).min(last);
        let slope = (self.areas[i + 1] - self.areas[i]) / self.step;
        (i, self.areas[i], slope)
    }

    fn at(&self, l: f64) -> f64 {
        let (i, a0, slope) = self.segment(l);
        a0 + slope * (l - self.node(i))
    }
}

/// Pre-computed model of one design on one line; runs any number of scenarios.
#[derive(Debug, Clone)]
pub struct CycleSimulator {
    design: GripperDesign,
    line: PneumaticLine,
    settings: SimSettings,
    table: AreaTable,
    p_atm: f64,
    p_vac: f64,
    dead_volume: f64,
}

const HOLD_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy)]
struct BodyState {
    /// Gas content `P·V` (Pa·m³).
    content: f64,
    pressure: f64,
    length: f64,
}

impl CycleSimulator {
    pub fn new(design: &GripperDesign, line: &PneumaticLine, settings: &SimSettings) -> Result<Self> {
        if !(settings.vacuum_gauge < 0.0 && settings.vacuum_gauge > -line.atmospheric_pressure) {
            return Err(Error::out_of_interval("vacuum_gauge", settings.vacuum_gauge, -line.atmospheric_pressure, 0.0));
        }
        if settings.substeps == 0 {
            return Err(Error::domain("substeps", 0.0));
        }
        let tube = 0.25 * PI * line.tube_diameter * line.tube_diameter * line.tube_length;
        Ok(Self {
            design: *design,
            line: *line,
            settings: *settings,
            table: AreaTable::build(design, settings.area_nodes, &settings.stations)?,
            p_atm: line.atmospheric_pressure,
            p_vac: line.atmospheric_pressure + settings.vacuum_gauge,
            dead_volume: settings.dead_volume.unwrap_or(2.0 * tube) + settings.cup_volume,
        })
    }

    pub fn vacuum_limit(&self) -> f64 {
        self.p_vac
    }

    /// Net lifting force `(P_atm − P)·A_e(l) − k·(L − l)`, not floored.
    fn net_lift(&self, pressure: f64, length: f64) -> f64 {
        let s = &self.design.outer_spring;
        (self.p_atm - pressure) * self.table.at(length) - s.spring_constant * (s.free_length - length)
    }

    /// Force-balance length for body pressure `pressure`, object load `load`
    /// and upper bound `hi`.
    fn balance_length(&self, pressure: f64, load: f64, hi: f64) -> f64 {
        let s = &self.design.outer_spring;
        let lo = self.table.lo;
        let dp = self.p_atm - pressure;
        let g = |l: f64| dp * self.table.at(l) - s.spring_constant * (s.free_length - l) - load;
        if g(hi) <= 0.0 {
            return hi;
        }
        if g(lo) >= 0.0 {
            return lo;
        }
        // g is increasing in l: bracket on table nodes, then solve the linear piece
        let (mut a, mut b) = (0usize, self.table.segment(hi).0 + 1);
        while b - a > 1 {
            let m = (a + b) / 2;
            if g(self.table.node(m).min(hi)) < 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        let (i, a0, slope) = self.table.segment(self.table.node(a));
        let x0 = self.table.node(i);
        // dp·(a0 + slope·(l − x0)) − k·(L − l) − W = 0
        let l = (s.spring_constant * s.free_length + load - dp * (a0 - slope * x0)) / (dp * slope + s.spring_constant);
        l.clamp(lo, hi)
    }

    fn volume(&self, length: f64) -> f64 {
        self.dead_volume + self.design.body_effective_area_full * (length - self.table.lo)
    }

    /// Pressure and length that hold `content` at the given load and bound.
    fn resolve(&self, content: f64, load: f64, hi: f64) -> BodyState {
        let h = |p: f64| p * self.volume(self.balance_length(p, load, hi)) - content;
        let (mut a, mut b) = (0.0, 2.0 * self.p_atm);
        let (mut fa, mut fb) = (h(a), h(b));
        let mut side = 0i8;
        for _ in 0..200 {
            let c = (a * fb - b * fa) / (fb - fa);
            let fc = h(c);
            if fc == 0.0 || (b - a) < 1e-7 {
                a = c;
                b = c;
                break;
            }
            if (fc > 0.0) == (fb > 0.0) {
                b = c;
                fb = fc;
                if side == 1 {
                    fa *= 0.5;
                }
                side = 1;
            } else {
                a = c;
                fa = fc;
                if side == -1 {
                    fb *= 0.5;
                }
                side = -1;
            }
        }
        let pressure = 0.5 * (a + b);
        BodyState { content, pressure, length: self.balance_length(pressure, load, hi) }
    }

    /// Pins the state to `pressure` (used at the pump floor and at atmosphere).
    fn pinned(&self, pressure: f64, load: f64, hi: f64) -> BodyState {
        let length = self.balance_length(pressure, load, hi);
        BodyState { content: pressure * self.volume(length), pressure, length }
    }

    fn pump_flow(&self, pressure: f64) -> f64 {
        if pressure > self.p_vac {
            self.line.flow_rate
        } else {
            0.0
        }
    }

    fn leak_flow(&self, pressure: f64, area: f64) -> f64 {
        if area <= 0.0 || pressure >= self.p_atm {
            return 0.0;
        }
        self.settings.leak_discharge_coefficient * area * sqrt(2.0 * (self.p_atm - pressure) / self.line.air_density)
    }

    fn step_body(&self, state: BodyState, inflow: f64, dt: f64, load: f64, hi: f64) -> BodyState {
        let dn = dt * (self.p_atm * inflow - state.pressure * self.pump_flow(state.pressure));
        let next = self.resolve(state.content + dn, load, hi);
        if next.pressure <= self.p_vac {
            self.pinned(self.p_vac, load, hi)
        } else if next.pressure >= self.p_atm {
            self.pinned(self.p_atm, load, hi)
        } else {
            next
        }
    }

    fn lifting_force(&self, pressure: f64, length: f64) -> f64 {
        self.net_lift(pressure, length).max(0.0)
    }

    /// Runs `scenario` from the contracted ready state.
    pub fn simulate(&self, scenario: &Scenario) -> Result<CycleTrace> {
        let dt = scenario.timestep;
        if !(dt > 0.0) {
            return Err(Error::domain("timestep", dt));
        }
        if !(scenario.seal_leak_area >= 0.0) {
            return Err(Error::domain("seal_leak_area", scenario.seal_leak_area));
        }
        if !(scenario.object.distance > 0.0) {
            return Err(Error::domain("object.distance", scenario.object.distance));
        }
        let design = &self.design;
        let free = design.outer_spring.free_length;
        let caps = design.cap_heights();
        let weight = scenario.object.mass * GRAVITY;
        let sub = self.settings.substeps;
        let dt_sub = dt / sub as f64;

        let mut phase = CyclePhase::ReadyToPick;
        let mut body = self.pinned(self.p_vac, 0.0, free);
        let mut cup_pressure = self.p_atm;
        let mut seal_length = free;
        let mut t_switch = None::<f64>;
        let mut t_phase = 0.0;
        let mut cycle_time = f64::NAN;
        let mut outcome = None::<Outcome>;
        let mut drop_cause = None;
        let mut lifted_without_cup = false;
        let mut finished = false;

        let mut samples = Vec::new();
        let sample = |t: f64, phase: CyclePhase, body: &BodyState, cup: f64| TraceSample {
            t,
            phase,
            body_pressure: body.pressure,
            cup_pressure: cup,
            length: body.length,
            body_force: self.lifting_force(body.pressure, body.length),
        };
        samples.push(sample(0.0, phase, &body, cup_pressure));

        let mut step = 0usize;
        while !finished {
            step += 1;
            for j in 0..sub {
                let t = (step - 1) as f64 * dt + (j + 1) as f64 * dt_sub;
                let before = phase;
                match phase {
                    CyclePhase::ReadyToPick => {
                        if t_switch.is_none() && t >= scenario.valve_switch_time {
                            t_switch = Some(t);
                            phase = CyclePhase::Deploying;
                            t_phase = t;
                            if body.length + caps >= scenario.object.distance {
                                seal_length = body.length;
                                phase = CyclePhase::SealedRetracting;
                            }
                        } else if t_switch.is_some() {
                            finished = true;
                        }
                    }
                    CyclePhase::Deploying => {
                        let inflow = flow_for_pressure_drop(&self.line, self.p_atm - body.pressure);
                        body = self.step_body(body, inflow, dt_sub, 0.0, free);
                        cup_pressure = self.p_atm;
                        let reach = scenario.object.distance - caps;
                        if body.length >= reach {
                            seal_length = reach.max(design.solid_length());
                            body = self.resolve(body.content, 0.0, seal_length);
                            cup_pressure = body.pressure;
                            phase = CyclePhase::SealedRetracting;
                            t_phase = t;
                        } else if t - t_phase >= scenario.deploy_timeout {
                            outcome = Some(Outcome::NoContact);
                            cycle_time = t - t_switch.unwrap_or(0.0);
                            finished = true;
                        }
                    }
                    CyclePhase::SealedRetracting | CyclePhase::Holding => {
                        let leak = self.leak_flow(body.pressure, scenario.seal_leak_area);
                        let previous = body.pressure;
                        body = self.step_body(body, leak, dt_sub, weight, seal_length);
                        cup_pressure = body.pressure;
                        if body.length < seal_length && cup_holding_force_max(design, self.p_atm, cup_pressure) < weight
                        {
                            lifted_without_cup = true;
                        }
                        if phase == CyclePhase::SealedRetracting {
                            let near_floor = body.pressure - self.p_vac <= HOLD_TOLERANCE * (self.p_atm - self.p_vac);
                            let stalled = scenario.seal_leak_area > 0.0 && (previous - body.pressure).abs() < 1e-6;
                            if near_floor || stalled {
                                phase = CyclePhase::Holding;
                                t_phase = t;
                                cycle_time = t - t_switch.unwrap_or(0.0);
                                let body_ok = self.lifting_force(body.pressure, seal_length) >= weight;
                                let cup_ok = cup_holding_force_max(design, self.p_atm, cup_pressure) >= weight;
                                let cause = if !body_ok {
                                    Some(DropCause::BodyForce)
                                } else if !cup_ok || lifted_without_cup {
                                    Some(DropCause::CupBound)
                                } else {
                                    None
                                };
                                drop_cause = cause;
                                outcome = Some(if cause.is_none() { Outcome::Picked } else { Outcome::Dropped });
                            }
                        } else if t - t_phase >= scenario.hold_time {
                            phase = CyclePhase::Releasing;
                            t_phase = t;
                        }
                    }
                    CyclePhase::Releasing => {
                        body = self.step_body(body, 0.0, dt_sub, 0.0, seal_length);
                        let dp = self.p_atm - cup_pressure;
                        let inflow = flow_for_pressure_drop(&self.line, dp);
                        let content = cup_pressure * self.settings.cup_volume + dt_sub * self.p_atm * inflow;
                        cup_pressure = (content / self.settings.cup_volume).min(self.p_atm);
                        if self.p_atm - cup_pressure <= HOLD_TOLERANCE * (self.p_atm - self.p_vac) {
                            cup_pressure = self.p_atm;
                            phase = CyclePhase::ReadyToPick;
                            t_phase = t;
                            finished = true;
                        }
                    }
                }
                if !(body.pressure.is_finite() && body.length.is_finite() && cup_pressure.is_finite()) {
                    return Err(Error::NonFinite { what: "cycle state", step });
                }
                if phase != before || finished {
                    samples.push(sample(t, phase, &body, cup_pressure));
                }
                if finished {
                    break;
                }
            }
            let t = step as f64 * dt;
            if samples.last().map_or(true, |s| s.t < t) {
                samples.push(sample(t, phase, &body, cup_pressure));
            }
        }

        Ok(CycleTrace {
            samples,
            outcome: outcome.unwrap_or(Outcome::NoContact),
            drop_cause,
            cycle_time,
            atmospheric_pressure: self.p_atm,
            vacuum_limit: self.p_vac,
        })
    }
}

/// One cycle of `scenario` with `settings`.
pub fn simulate_cycle(
    design: &GripperDesign,
    line: &PneumaticLine,
    scenario: &Scenario,
    settings: &SimSettings,
) -> Result<CycleTrace> {
    CycleSimulator::new(design, line, settings)?.simulate(scenario)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleSummary {
    pub outcome: Outcome,
    pub cycle_time: f64,
    /// Lowest body pressure while sealed or holding (Pa, absolute).
    pub min_body_pressure: f64,
    /// Largest cup vacuum `P_atm − P_s` (Pa).
    pub max_cup_vacuum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepeatSummary {
    pub cycles: Vec<CycleSummary>,
    /// Every cycle reproduced the first trace bit for bit.
    pub identical: bool,
    pub first: CycleTrace,
}

/// Replays `scenario` `count` times from the same ready state.
pub fn repeat_cycles(
    design: &GripperDesign,
    line: &PneumaticLine,
    scenario: &Scenario,
    settings: &SimSettings,
    count: usize,
) -> Result<RepeatSummary> {
    if count == 0 {
        return Err(Error::domain("count", 0.0));
    }
    let sim = CycleSimulator::new(design, line, settings)?;
    let first = sim.simulate(scenario)?;
    let summarize = |t: &CycleTrace| CycleSummary {
        outcome: t.outcome,
        cycle_time: t.cycle_time,
        min_body_pressure: t.min_sealed_body_pressure().unwrap_or(f64::NAN),
        max_cup_vacuum: t.max_cup_vacuum(),
    };
    let mut cycles = Vec::with_capacity(count);
    cycles.push(summarize(&first));
    let mut identical = true;
    for _ in 1..count {
        let trace = sim.simulate(scenario)?;
        identical &= trace.bit_identical(&first);
        cycles.push(summarize(&trace));
    }
    Ok(RepeatSummary { cycles, identical, first })
}

/// Distance past which a scenario can only end without contact.
pub fn reach_limit(design: &GripperDesign, line: &PneumaticLine) -> Result<f64> {
    Ok(picking_range(design, line)?.d_max)
}
