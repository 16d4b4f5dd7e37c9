//! Exhaustive grid search over wire diameter, stiffness and flow rate.

use std::io::Write;

use deploygrip_core::units::{to_lpm, to_mm};
use rayon::prelude::*;

use crate::config::Model;
use crate::error::{CliError, CliResult};
use crate::params::{apply, Evaluation, Param};
use crate::sweep::{fmt_num, linspace};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    /// Maximise `d_max − d_min`.
    MaxRange,
    /// Maximise the picking force at this distance (m).
    MaxForceAtDistance(f64),
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::MaxRange => "max_range",
            Objective::MaxForceAtDistance(_) => "max_force_at_distance",
        }
    }
}

/// Grid for one searched parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum Bounds {
    /// Inclusive interval sampled with `OptimizeSpec::points`.
    Interval(f64, f64),
    Values(Vec<f64>),
}

impl Bounds {
    /// `min:max` or `v1,v2,...`, in CLI units.
    pub fn parse(key: &str, s: &str) -> CliResult<Self> {
        let number =
            |t: &str| t.trim().parse::<f64>().map_err(|_| CliError::input(key, format!("`{t}` is not a number")));
        if let Some((a, b)) = s.split_once(':') {
            let (a, b) = (number(a)?, number(b)?);
            if !(a <= b) {
                return Err(CliError::input(key, format!("bounds {a}:{b} are not ordered")));
            }
            Ok(Bounds::Interval(a, b))
        } else {
            let values = s.split(',').map(number).collect::<CliResult<Vec<_>>>()?;
            if values.is_empty() {
                return Err(CliError::input(key, "no values"));
            }
            Ok(Bounds::Values(values))
        }
    }

    fn grid(&self, points: usize) -> Vec<f64> {
        let mut v = match self {
            Bounds::Interval(a, b) if a == b => vec![*a],
            Bounds::Interval(a, b) => linspace(*a, *b, points),
            Bounds::Values(v) => v.clone(),
        };
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

#[derive(Debug, Clone)]
pub struct OptimizeSpec {
    pub objective: Objective,
    /// Smallest acceptable picking force (N).
    pub required_force: Option<f64>,
    /// Where `required_force` is checked (m); mid-range when `None`.
    pub force_distance: Option<f64>,
    /// Largest acceptable `d_min` (m).
    pub max_d_min: Option<f64>,
    /// Wire diameter in mm.
    pub wire_diameter: Option<Bounds>,
    /// N/m. When absent, each wire diameter takes its default stiffness.
    pub spring_constant: Option<Bounds>,
    /// L/min.
    pub flow_rate: Option<Bounds>,
    pub points: usize,
}

impl OptimizeSpec {
    pub fn new(objective: Objective) -> Self {
        Self {
            objective,
            required_force: None,
            force_distance: None,
            max_d_min: None,
            wire_diameter: None,
            spring_constant: None,
            flow_rate: None,
            points: 20,
        }
    }

    fn candidates(&self) -> CliResult<Vec<Vec<(Param, f64)>>> {
        if self.points == 0 {
            return Err(CliError::input("points", "must be at least 1"));
        }
        let axes: Vec<(Param, Vec<f64>)> = [
            (Param::WireDiameter, &self.wire_diameter),
            (Param::SpringConstant, &self.spring_constant),
            (Param::FlowRate, &self.flow_rate),
        ]
        .into_iter()
        .filter_map(|(p, b)| b.as_ref().map(|b| (p, b.grid(self.points))))
        .collect();
        let mut out = vec![Vec::new()];
        for (p, grid) in axes {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<(Param, f64)>| {
                    grid.iter().map(move |&v| {
                        let mut c = prefix.clone();
                        c.push((p, v));
                        c
                    })
                })
                .collect();
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub wire_diameter: f64,
    pub spring_constant: f64,
    pub flow_rate: f64,
    pub objective: f64,
    pub d_min: f64,
    pub d_max: f64,
    pub force_distance: f64,
    pub force: f64,
    pub force_margin: Option<f64>,
    pub d_min_margin: Option<f64>,
}

impl Candidate {
    fn feasible(&self) -> bool {
        self.force_margin.is_none_or(|m| m >= 0.0)
            && self.d_min_margin.is_none_or(|m| m >= 0.0)
            && self.objective.is_finite()
    }

    /// Tie-break order: smaller wire, then smaller flow, then softer spring.
    fn key(&self) -> (f64, f64, f64) {
        (self.wire_diameter, self.flow_rate, self.spring_constant)
    }
}

fn evaluate(model: &Model, spec: &OptimizeSpec) -> CliResult<Candidate> {
    let mut eval = Evaluation::new(model);
    let range = eval.range()?;
    let force_at = |eval: &mut Evaluation, x: f64| -> f64 {
        if range.contains(x) {
            eval.forces_at(x).map(|f| f.2).unwrap_or(0.0)
        } else {
            0.0
        }
    };
    let objective = match spec.objective {
        Objective::MaxRange => to_mm(range.d_max - range.d_min),
        Objective::MaxForceAtDistance(x) => {
            if range.contains(x) {
                eval.forces_at(x)?.2
            } else {
                f64::NEG_INFINITY
            }
        }
    };
    let force_distance = spec.force_distance.unwrap_or(0.5 * (range.d_min + range.d_max));
    let force = force_at(&mut eval, force_distance);
    let s = &model.design.outer_spring;
    Ok(Candidate {
        wire_diameter: to_mm(s.wire_diameter),
        spring_constant: s.spring_constant,
        flow_rate: to_lpm(model.line.flow_rate),
        objective,
        d_min: to_mm(range.d_min),
        d_max: to_mm(range.d_max),
        force_distance: to_mm(force_distance),
        force,
        force_margin: spec.required_force.map(|f| force - f),
        d_min_margin: spec.max_d_min.map(|d| to_mm(d - range.d_min)),
    })
}

/// Best feasible candidate, or an infeasibility error naming the
/// constraint that cannot be met.
pub fn optimize(base: &Model, spec: &OptimizeSpec) -> CliResult<Candidate> {
    if let Some(f) = spec.required_force {
        if !(f >= 0.0) {
            return Err(CliError::input("required_force", "must be >= 0"));
        }
        let cap = base.design.suction_cup_effective_area * -base.force.vacuum_gauge;
        if f > cap {
            return Err(CliError::Infeasible(format!(
                "required_force {f} N exceeds the cup holding limit {cap:.2} N (suction_cup_effective_area x vacuum)"
            )));
        }
    }
    let candidates = spec.candidates()?;
    let evaluated: Vec<Candidate> =
        candidates.par_iter().filter_map(|values| apply(base, values).and_then(|m| evaluate(&m, spec)).ok()).collect();
    if evaluated.is_empty() {
        return Err(CliError::Infeasible("no candidate in the search space is a valid, deployable design".into()));
    }
    let feasible: Vec<&Candidate> = evaluated.iter().filter(|c| c.feasible()).collect();
    if feasible.is_empty() {
        return Err(CliError::Infeasible(binding_constraint(spec, &evaluated)));
    }
    let best = feasible.iter().map(|c| c.objective).fold(f64::NEG_INFINITY, f64::max);
    let tol = 1e-12 * best.abs().max(1.0);
    let winner = feasible
        .into_iter()
        .filter(|c| c.objective >= best - tol)
        .min_by(|a, b| a.key().partial_cmp(&b.key()).expect("finite grid values"))
        .expect("at least one feasible candidate");
    Ok(winner.clone())
}

fn binding_constraint(spec: &OptimizeSpec, all: &[Candidate]) -> String {
    let best = |f: fn(&Candidate) -> Option<f64>| all.iter().filter_map(f).fold(f64::NEG_INFINITY, f64::max);
    let mut named = Vec::new();
    if let Some(req) = spec.required_force {
        let m = best(|c| c.force_margin);
        if m < 0.0 {
            named.push(format!("required_force {req} N (best achievable {:.2} N)", req + m));
        }
    }
    if let Some(d) = spec.max_d_min {
        let m = best(|c| c.d_min_margin);
        if m < 0.0 {
            named.push(format!("max_d_min {} mm (smallest d_min {:.2} mm)", to_mm(d), to_mm(d) - m));
        }
    }
    if let Objective::MaxForceAtDistance(x) = spec.objective {
        if all.iter().all(|c| !c.objective.is_finite()) {
            named.push(format!("objective distance {} mm lies outside every picking range", to_mm(x)));
        }
    }
    if named.is_empty() {
        "constraints cannot hold together (required_force with max_d_min)".into()
    } else {
        named.join("; ")
    }
}

pub fn write_candidate(out: &mut dyn Write, spec: &OptimizeSpec, c: &Candidate) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "wire_diameter_mm",
        "spring_constant_N_per_m",
        "flow_rate_lpm",
        "objective",
        "objective_value",
        "d_min_mm",
        "d_max_mm",
        "force_distance_mm",
        "picking_force_N",
        "force_margin_N",
        "d_min_margin_mm",
    ])?;
    let opt = |v: Option<f64>| v.map(fmt_num).unwrap_or_default();
    w.write_record([
        fmt_num(c.wire_diameter),
        fmt_num(c.spring_constant),
        fmt_num(c.flow_rate),
        spec.objective.name().to_string(),
        fmt_num(c.objective),
        fmt_num(c.d_min),
        fmt_num(c.d_max),
        fmt_num(c.force_distance),
        fmt_num(c.force),
        opt(c.force_margin),
        opt(c.d_min_margin),
    ])?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_wires() -> Option<Bounds> {
        Some(Bounds::Values(vec![1.4, 1.6, 1.8, 2.0]))
    }

    #[test]
    fn range_objective_with_force_constraint() {
        let mut spec = OptimizeSpec::new(Objective::MaxRange);
        spec.wire_diameter = table_wires();
        spec.required_force = Some(30.0);
        let best = optimize(&Model::default(), &spec).unwrap();
        assert!(best.force_margin.unwrap() >= 0.0);
        // brute force over the same four designs
        let mut expected = None::<Candidate>;
        for t in [1.4, 1.6, 1.8, 2.0] {
            let m = apply(&Model::default(), &[(Param::WireDiameter, t)]).unwrap();
            let c = evaluate(&m, &spec).unwrap();
            if c.feasible() && expected.as_ref().is_none_or(|e| c.objective > e.objective) {
                expected = Some(c);
            }
        }
        assert_eq!(best, expected.unwrap());
    }

    #[test]
    fn cup_limit_is_named() {
        let mut spec = OptimizeSpec::new(Objective::MaxRange);
        spec.required_force = Some(100.0);
        match optimize(&Model::default(), &spec) {
            Err(CliError::Infeasible(why)) => assert!(why.contains("cup holding limit"), "{why}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_point_space() {
        let mut spec = OptimizeSpec::new(Objective::MaxRange);
        spec.wire_diameter = Some(Bounds::Interval(1.8, 1.8));
        spec.flow_rate = Some(Bounds::Values(vec![9.0]));
        let best = optimize(&Model::default(), &spec).unwrap();
        assert_eq!((best.wire_diameter, best.flow_rate), (1.8, 9.0));
    }

    #[test]
    fn grid_order_does_not_matter() {
        let mut a = OptimizeSpec::new(Objective::MaxRange);
        a.wire_diameter = Some(Bounds::Values(vec![1.4, 1.6, 2.0]));
        a.flow_rate = Some(Bounds::Values(vec![4.0, 14.0]));
        let mut b = a.clone();
        b.wire_diameter = Some(Bounds::Values(vec![2.0, 1.4, 1.6]));
        b.flow_rate = Some(Bounds::Values(vec![14.0, 4.0]));
        assert_eq!(optimize(&Model::default(), &a).unwrap(), optimize(&Model::default(), &b).unwrap());
    }

    #[test]
    fn bounds_parse() {
        assert_eq!(Bounds::parse("k", "1:2").unwrap(), Bounds::Interval(1.0, 2.0));
        assert!(Bounds::parse("k", "2:1").is_err());
        assert_eq!(Bounds::parse("k", "3,1").unwrap().grid(20), vec![1.0, 3.0]);
    }
}
