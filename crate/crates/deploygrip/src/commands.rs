//! CSV writers for the single-design commands.

use std::io::Write;

use deploygrip_core::cycle::{repeat_cycles, simulate_cycle, CycleTrace, RepeatSummary};
use deploygrip_core::film::{contact_boundaries, effective_area, quoted_forms, station_profile};
use deploygrip_core::picking::{force_profile, picking_range};
use deploygrip_core::units::{to_mm, to_mm2};

use crate::config::Model;
use crate::error::{CliError, CliResult};
use crate::sweep::{fmt_num, linspace};

fn writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::Writer::from_writer(out)
}

pub fn range(out: &mut dyn Write, m: &Model) -> CliResult<()> {
    let r = picking_range(&m.design, &m.line)?;
    let mut w = writer(out);
    w.write_record(["d_min_mm", "d_max_mm", "deployment_ratio", "min_case", "reynolds"])?;
    w.write_record([
        fmt_num(to_mm(r.d_min)),
        fmt_num(to_mm(r.d_max)),
        fmt_num(r.deployment_ratio),
        r.min_case.as_str().to_string(),
        fmt_num(r.reynolds),
    ])?;
    w.flush()?;
    Ok(())
}

/// Forces over `points` distances spanning `[from, to]` (m), defaulting to
/// the whole picking range.
pub fn force(out: &mut dyn Write, m: &Model, from: Option<f64>, to: Option<f64>, points: usize) -> CliResult<()> {
    if points == 0 {
        return Err(CliError::input("points", "must be at least 1"));
    }
    let r = picking_range(&m.design, &m.line)?;
    let xs = linspace(from.unwrap_or(r.d_min), to.unwrap_or(r.d_max), points);
    let profile = force_profile(&m.design, &m.line, &xs, &m.force)?;
    let mut w = writer(out);
    w.write_record(["distance_mm", "F_b_N", "F_s_N", "F_pick_N", "limiting"])?;
    for p in profile {
        w.write_record([
            fmt_num(to_mm(p.distance)),
            fmt_num(p.body_force_max),
            fmt_num(p.cup_force_max),
            fmt_num(p.picking_force),
            p.limiting.as_str().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Effective area at each length (m); free length when none are given.
pub fn area(out: &mut dyn Write, m: &Model, lengths: &[f64]) -> CliResult<()> {
    let free = [m.design.outer_spring.free_length];
    let lengths = if lengths.is_empty() { &free[..] } else { lengths };
    let mut w = writer(out);
    w.write_record(["l_mm", "A_e_mm2"])?;
    for &l in lengths {
        let a = effective_area(&m.design, l, &m.force.stations)?;
        w.write_record([fmt_num(to_mm(l)), fmt_num(to_mm2(a))])?;
    }
    w.flush()?;
    Ok(())
}

/// Per-station film solution; angles in rad, lengths in mm.
pub fn dump_stations(out: &mut dyn Write, m: &Model, length: f64) -> CliResult<()> {
    let profile = station_profile(&m.design, length, &m.force.stations)?;
    let mut w = writer(out);
    w.write_record(["phi", "state", "r", "theta", "d"])?;
    for (phi, s) in profile {
        w.write_record([
            fmt_num(phi),
            s.state.as_str().to_string(),
            fmt_num(to_mm(s.free_radius)),
            fmt_num(s.wrap_angle),
            fmt_num(to_mm(s.contact_distance)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Tangency thresholds next to the commonly quoted closed forms at every station.
pub fn compare_closed_forms(out: &mut dyn Write, m: &Model, length: f64) -> CliResult<()> {
    let model = &m.force.stations;
    let mut w = writer(out);
    w.write_record(["phi", "l1_mm", "l_ns_mm", "l_sd_mm", "quoted_l_ns_mm", "quoted_l_sd_mm", "quoted_d_mm"])?;
    let spring_t = to_mm(m.design.outer_spring.wire_diameter);
    for k in 0..=model.stations {
        let phi = std::f64::consts::TAU * k as f64 / model.stations as f64;
        let s = model.station(&m.design, length, phi);
        let b = contact_boundaries(&s)?;
        let (l1, l1p, t, delta) = (to_mm(s.l1), to_mm(s.l1p), to_mm(s.t), to_mm(s.delta));
        let (q_ns, q_sd) = quoted_forms::thresholds_mm(l1p, t, spring_t).unwrap_or((f64::NAN, f64::NAN));
        w.write_record([
            fmt_num(phi),
            fmt_num(l1),
            fmt_num(to_mm(b.l_ns)),
            fmt_num(to_mm(b.l_sd)),
            fmt_num(q_ns),
            fmt_num(q_sd),
            fmt_num(quoted_forms::double_contact_distance_mm(l1, l1p, t, delta)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Trace with gauge pressures in kPa.
pub fn write_trace(out: &mut dyn Write, trace: &CycleTrace) -> CliResult<()> {
    let p_atm = trace.atmospheric_pressure;
    let mut w = writer(out);
    w.write_record(["t_s", "phase", "P_b_kPa", "P_s_kPa", "l_mm", "F_b_N"])?;
    for s in &trace.samples {
        w.write_record([
            fmt_num(s.t),
            s.phase.as_str().to_string(),
            fmt_num((s.body_pressure - p_atm) / 1e3),
            fmt_num((s.cup_pressure - p_atm) / 1e3),
            fmt_num(to_mm(s.length)),
            fmt_num(s.body_force),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary(out: &mut dyn Write, summary: &RepeatSummary, p_atm: f64) -> CliResult<()> {
    let mut w = writer(out);
    w.write_record(["cycle", "outcome", "cycle_time_s", "min_P_b_kPa", "max_cup_vacuum_kPa", "identical"])?;
    for (i, c) in summary.cycles.iter().enumerate() {
        w.write_record([
            (i + 1).to_string(),
            c.outcome.as_str().to_string(),
            fmt_num(c.cycle_time),
            fmt_num((c.min_body_pressure - p_atm) / 1e3),
            fmt_num(c.max_cup_vacuum / 1e3),
            summary.identical.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn simulate(out: &mut dyn Write, m: &Model, summary: bool, repeat: usize) -> CliResult<()> {
    if repeat == 0 {
        return Err(CliError::input("repeat", "must be at least 1"));
    }
    if summary || repeat > 1 {
        let s = repeat_cycles(&m.design, &m.line, &m.scenario, &m.sim, repeat)?;
        write_summary(out, &s, m.line.atmospheric_pressure)
    } else {
        let trace = simulate_cycle(&m.design, &m.line, &m.scenario, &m.sim)?;
        write_trace(out, &trace)
    }
}
