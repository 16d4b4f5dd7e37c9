//! Air flow in the supply line: Reynolds number, Darcy friction factor
//! (Haaland form) and Darcy-Weisbach pressure drop.
//!
//! The air is incompressible in the line and minor losses from elbows,
//! fittings and the valve are neglected. The spring-lined air tube inside
//! the gripper is also left out; its drop is two orders of magnitude below
//! the supply tube's.

use crate::error::{Error, Result};
use crate::math::{log10, powf, PI};
use crate::types::PneumaticLine;

/// Reynolds number below which the laminar `64/Re` law is used.
pub const LAMINAR_LIMIT: f64 = 2300.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Laminar,
    Turbulent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowSolution {
    pub reynolds: f64,
    /// Darcy friction factor; zero only when there is no flow.
    pub friction_factor: f64,
    /// Pressure drop along the line (Pa).
    pub pressure_drop: f64,
    pub regime: Regime,
}

/// `Re = 4ρQ / (μπD₂)`.
pub fn reynolds_number(line: &PneumaticLine) -> f64 {
    reynolds_at(line, line.flow_rate)
}

fn reynolds_at(line: &PneumaticLine, flow_rate: f64) -> f64 {
    4.0 * line.air_density * flow_rate / (line.dynamic_viscosity * PI * line.tube_diameter)
}

/// Darcy friction factor.
///
/// Turbulent (`Re ≥ 2300`): `1/√f = −1.8·log₁₀(6.9/Re + ((ε/D)/3.7)^1.11)`.
/// Laminar: `f = 64/Re`.
pub fn friction_factor(reynolds: f64, relative_roughness: f64) -> Result<f64> {
    if !(reynolds > 0.0) || !reynolds.is_finite() {
        return Err(Error::domain("friction_factor.reynolds", reynolds));
    }
    if !(relative_roughness >= 0.0) {
        return Err(Error::domain("friction_factor.relative_roughness", relative_roughness));
    }
    if reynolds < LAMINAR_LIMIT {
        return Ok(64.0 / reynolds);
    }
    let inv_sqrt = -1.8 * log10(6.9 / reynolds + powf(relative_roughness / 3.7, 1.11));
    Ok(1.0 / (inv_sqrt * inv_sqrt))
}

/// Regime, friction factor and Darcy-Weisbach drop
/// `ΔP = 8·f·L_t·Q²·ρ / (π²·D₂⁵)` at the line's flow rate.
pub fn pressure_drop(line: &PneumaticLine) -> FlowSolution {
    pressure_drop_at(line, line.flow_rate)
}

/// [`pressure_drop`] at an arbitrary flow rate through the same line.
pub fn pressure_drop_at(line: &PneumaticLine, flow_rate: f64) -> FlowSolution {
    let reynolds = reynolds_at(line, flow_rate);
    if !(reynolds > 0.0) {
        return FlowSolution { reynolds: 0.0, friction_factor: 0.0, pressure_drop: 0.0, regime: Regime::Laminar };
    }
    let rel = line.roughness / line.tube_diameter;
    // reynolds > 0 here and roughness was validated upstream; fall back to smooth
    let f = friction_factor(reynolds, rel).unwrap_or_else(|_| friction_factor(reynolds, 0.0).unwrap_or(0.0));
    let regime = if reynolds < LAMINAR_LIMIT { Regime::Laminar } else { Regime::Turbulent };
    FlowSolution { reynolds, friction_factor: f, pressure_drop: darcy_drop(line, f, flow_rate), regime }
}

fn darcy_drop(line: &PneumaticLine, f: f64, q: f64) -> f64 {
    let d = line.tube_diameter;
    let d5 = d * d * d * d * d;
    8.0 * f * line.tube_length * q * q * line.air_density / (PI * PI * d5)
}

/// Flow rate that produces `drop` across the line: the inverse of
/// [`pressure_drop_at`].
///
/// `ΔP(Q)` jumps upward at the laminar limit; drops that fall inside the
/// jump map to the flow at `Re = 2300`, so the inverse stays monotone and
/// continuous.
pub fn flow_for_pressure_drop(line: &PneumaticLine, drop: f64) -> f64 {
    if !(drop > 0.0) {
        return 0.0;
    }
    let d = line.tube_diameter;
    // Hagen-Poiseuille: ΔP = 128·μ·L·Q / (π·D⁴)
    let laminar = drop * PI * d * d * d * d / (128.0 * line.dynamic_viscosity * line.tube_length);
    if reynolds_at(line, laminar) < LAMINAR_LIMIT {
        return laminar;
    }
    let q_limit = LAMINAR_LIMIT * line.dynamic_viscosity * PI * d / (4.0 * line.air_density);
    let rel = line.roughness / d;
    let coef = PI * PI * d * d * d * d * d / (8.0 * line.tube_length * line.air_density);
    // Q = sqrt(ΔP·coef / f(Q)); f varies slowly with Q so fixed-point converges fast.
    let mut q = laminar.min(q_limit.max(1e-12) * 10.0);
    for _ in 0..100 {
        let re = reynolds_at(line, q).max(LAMINAR_LIMIT);
        let f = friction_factor(re, rel).unwrap_or(64.0 / re);
        let next = crate::math::sqrt(drop * coef / f);
        let done = (next - q).abs() <= 1e-14 * next;
        q = next;
        if done {
            break;
        }
    }
    if q < q_limit {
        q_limit
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{lpm, mm};

    // Independent scalar evaluations (python, float64) used as oracles:
    //   f = (1 / (-1.8 * log10(6.9 / Re)))^2
    const F_AT_4453: f64 = 0.039_093;
    const F_AT_1E5: f64 = 0.017_825;

    fn line_for_reynolds(target: f64) -> PneumaticLine {
        let base = PneumaticLine::default().with_flow_rate(lpm(4.0));
        let d = 4.0 * base.air_density * base.flow_rate / (base.dynamic_viscosity * PI * target);
        PneumaticLine { tube_diameter: d, ..base }
    }

    #[test]
    fn reynolds_anchor() {
        let line = line_for_reynolds(4453.3);
        assert!((reynolds_number(&line) - 4453.3).abs() < 1e-9);
        assert!((line.tube_diameter - mm(1.2575)).abs() < mm(0.001), "{}", line.tube_diameter);
    }

    #[test]
    fn reynolds_zero_flow() {
        assert_eq!(reynolds_number(&PneumaticLine::default().with_flow_rate(0.0)), 0.0);
    }

    #[test]
    fn reynolds_default_line_at_14_lpm() {
        let re = reynolds_number(&PneumaticLine::default());
        assert!((re - 4899.937).abs() < 1e-2, "{re}");
    }

    #[test]
    fn friction_factor_values() {
        let a = friction_factor(4453.3, 0.0).unwrap();
        let b = friction_factor(1e5, 0.0).unwrap();
        assert!((a - F_AT_4453).abs() < 5e-5, "{a}");
        assert!((b - F_AT_1E5).abs() < 5e-5, "{b}");
        assert!(b < a);
        assert!((friction_factor(1000.0, 0.0).unwrap() - 0.064).abs() < 1e-15);
    }

    #[test]
    fn friction_factor_rejects_nonpositive_reynolds() {
        assert!(matches!(friction_factor(0.0, 0.0), Err(Error::Domain { .. })));
        assert!(friction_factor(-5.0, 0.0).is_err());
    }

    #[test]
    fn pressure_drop_default_line() {
        let s = pressure_drop(&PneumaticLine::default());
        assert_eq!(s.regime, Regime::Turbulent);
        // f = 0.037964 -> 8 f L Q^2 rho / (pi^2 D^5)
        assert!((s.pressure_drop - 1969.82).abs() < 0.05, "{}", s.pressure_drop);
    }

    #[test]
    fn pressure_drop_zero_flow() {
        let s = pressure_drop(&PneumaticLine::default().with_flow_rate(0.0));
        assert_eq!(s.pressure_drop, 0.0);
        assert_eq!(s.regime, Regime::Laminar);
    }

    #[test]
    fn pressure_drop_linear_in_length() {
        let a = pressure_drop(&PneumaticLine::default());
        let b = pressure_drop(&PneumaticLine { tube_length: 2.0, ..PneumaticLine::default() });
        assert_eq!(a.friction_factor, b.friction_factor);
        assert!((b.pressure_drop / a.pressure_drop - 2.0).abs() < 1e-12);
    }

    /// The laminar/turbulent switch at Re = 2300 is not continuous: Haaland
    /// gives f = 0.0485 where 64/Re gives 0.0278, a 74 % jump in ΔP.
    #[test]
    fn laminar_turbulent_jump_is_documented() {
        let line = PneumaticLine::default();
        let q_limit = LAMINAR_LIMIT * line.dynamic_viscosity * PI * line.tube_diameter / (4.0 * line.air_density);
        let below = pressure_drop_at(&line, q_limit * (1.0 - 1e-9));
        let above = pressure_drop_at(&line, q_limit * (1.0 + 1e-9));
        assert_eq!(below.regime, Regime::Laminar);
        assert_eq!(above.regime, Regime::Turbulent);
        let jump = above.pressure_drop / below.pressure_drop;
        assert!((jump - 1.74265).abs() < 1e-4, "{jump}");
    }

    #[test]
    fn inverse_recovers_flow() {
        let line = PneumaticLine::default();
        for q_lpm in [0.5, 2.0, 4.0, 9.0, 14.0, 60.0, 200.0] {
            let q = lpm(q_lpm);
            let dp = pressure_drop_at(&line, q).pressure_drop;
            let back = flow_for_pressure_drop(&line, dp);
            assert!((back - q).abs() / q < 1e-9, "{q_lpm}: {back}");
        }
        assert_eq!(flow_for_pressure_drop(&line, 0.0), 0.0);
    }

    proptest::proptest! {
        #[test]
        fn reynolds_is_linear_in_flow(q in 1e-6..1e-2f64, c in 0.01..100.0f64) {
            let line = PneumaticLine::default();
            let a = reynolds_number(&line.with_flow_rate(q));
            let b = reynolds_number(&line.with_flow_rate(c * q));
            proptest::prop_assert!((b - c * a).abs() <= 1e-9 * b.abs().max(1.0));
        }

        #[test]
        fn turbulent_drop_monotone(q in 1e-4..1e-3f64, l in 0.2..5.0f64, d in 3e-3..6e-3f64) {
            let line = PneumaticLine { flow_rate: q, tube_length: l, tube_diameter: d, ..PneumaticLine::default() };
            let base = pressure_drop(&line);
            proptest::prop_assume!(base.regime == Regime::Turbulent);
            proptest::prop_assert!(pressure_drop(&line.with_flow_rate(q * 1.01)).pressure_drop > base.pressure_drop);
            let longer = pressure_drop(&PneumaticLine { tube_length: l * 1.01, ..line });
            proptest::prop_assert!(longer.pressure_drop > base.pressure_drop);
            let wider = pressure_drop(&PneumaticLine { tube_diameter: d * 1.01, ..line });
            proptest::prop_assert!(wider.pressure_drop < base.pressure_drop);
        }

        #[test]
        fn inverse_is_monotone(a in 1.0..1e5f64, b in 1.0..1e5f64) {
            let line = PneumaticLine::default();
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            proptest::prop_assert!(flow_for_pressure_drop(&line, lo) <= flow_for_pressure_drop(&line, hi));
        }
    }
}
