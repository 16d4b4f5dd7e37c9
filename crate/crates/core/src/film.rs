//! Film contact with the lower end-cap and the effective body area.
//!
//! Each azimuthal station is a planar problem in the radial/axial plane.
//! The film is anchored at the end-cap rim, may lie on the end-cap for a
//! contact distance `d`, lifts off in a free arc of radius `r` that is
//! tangent to the end-cap, and wraps the film-covered wire (thickness `t`)
//! through an angle `θ` before running straight up along the coil's outer
//! side. With the wire centre at height `l′₁` and its outer edge `δ` inside
//! the rim, tangency gives
//!
//! ```text
//! r + (r + t/2)·sin θ − l′₁ = 0
//! r·(θ + π/2) + (t/2)·θ + d − l₁ = 0
//! δ + t/2 − (r + t/2)·cos θ − d = 0
//! ```
//!
//! where `l₁` is the film length from the rim to where it leaves the wire.
//! Eliminating `r` and `d` leaves a one-parameter family in `θ`:
//! contact starts where `d(θ) = 0` and the wrap completes when the free
//! arc shrinks to `r = l′₁/2` (`θ = π − asin(l′₁/(l′₁ + t))`). Past that
//! point additional film lies doubled on the end-cap, advancing contact by
//! half the extra length.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{asin, atan, cos, sin, FRAC_PI_2, PI, TAU};
use crate::types::GripperDesign;

/// Geometry at one azimuthal station. Lengths in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationInput {
    /// Film length from the rim anchor to where it leaves the wire, `l₁`.
    pub l1: f64,
    /// Height of the wire centre above the end-cap, `l′₁`.
    pub l1p: f64,
    /// Film-covered wire thickness.
    pub t: f64,
    /// Rim-to-coil clearance.
    pub delta: f64,
    /// End-cap radius.
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContactState {
    NonContact,
    SingleContact,
    DoubleContact,
}

impl ContactState {
    pub fn as_str(self) -> &'static str {
        match self {
            ContactState::NonContact => "non_contact",
            ContactState::SingleContact => "single_contact",
            ContactState::DoubleContact => "double_contact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilmContactSolution {
    pub state: ContactState,
    /// Radius of the free arc (m); zero without contact.
    pub free_radius: f64,
    /// Wrap angle around the wire (rad); zero without contact.
    pub wrap_angle: f64,
    /// Film length lying on the end-cap, measured inward from the rim (m).
    pub contact_distance: f64,
    /// Set when `contact_distance` was clamped to the end-cap radius.
    pub clamped: bool,
}

/// Film lengths at which the contact state changes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactBoundaries {
    /// Non-contact → single contact.
    pub l_ns: f64,
    /// Single → double contact.
    pub l_sd: f64,
    pub theta_ns: f64,
    pub theta_sd: f64,
}

/// Point of the single-contact family at wrap angle `theta`.
#[derive(Debug, Clone, Copy)]
struct FamilyPoint {
    r: f64,
    d: f64,
    length: f64,
}

fn family(input: &StationInput, theta: f64) -> FamilyPoint {
    let half_t = 0.5 * input.t;
    let (s, c) = (sin(theta), cos(theta));
    let r = (input.l1p - half_t * s) / (1.0 + s);
    let d = input.delta + half_t - (r + half_t) * c;
    let length = r * (theta + FRAC_PI_2) + half_t * theta + d;
    FamilyPoint { r, d, length }
}

fn check_input(input: &StationInput) -> Result<()> {
    let fields = [
        ("station.l1", input.l1),
        ("station.l1p", input.l1p),
        ("station.t", input.t),
        ("station.radius", input.radius),
    ];
    for (name, v) in fields {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::domain(name, v));
        }
    }
    if !(input.delta >= 0.0) {
        return Err(Error::domain("station.delta", input.delta));
    }
    if input.l1 < input.l1p * (1.0 - 1e-12) {
        return Err(Error::out_of_interval("station.l1", input.l1, input.l1p, f64::INFINITY));
    }
    if input.l1p < 0.5 * input.t * (1.0 - 1e-12) {
        return Err(Error::out_of_interval("station.l1p", input.l1p, 0.5 * input.t, f64::INFINITY));
    }
    Ok(())
}

/// Threshold film lengths `(l_ns, l_sd)` with their wrap angles.
///
/// Fails when the wire sits no higher than the clearance, where no
/// tangent configuration without end-cap contact exists.
pub fn contact_boundaries(input: &StationInput) -> Result<ContactBoundaries> {
    check_input(input)?;
    let half_t = 0.5 * input.t;
    // d(θ) = δ + t/2 − (l′₁ + t/2)·tan(π/4 − θ/2)
    let ratio = (input.delta + half_t) / (input.l1p + half_t);
    if !(ratio < 1.0) {
        return Err(Error::out_of_interval("l_ns", ratio, 0.0, 1.0));
    }
    let theta_ns = FRAC_PI_2 - 2.0 * atan(ratio);
    let arg = input.l1p / (input.l1p + input.t);
    if !(0.0..=1.0).contains(&arg) {
        return Err(Error::out_of_interval("l_sd", arg, 0.0, 1.0));
    }
    let theta_sd = PI - asin(arg);
    let l_ns = family(input, theta_ns).length;
    let l_sd = family(input, theta_sd).length;
    Ok(ContactBoundaries { l_ns, l_sd, theta_ns, theta_sd })
}

pub fn classify_state(input: &StationInput) -> Result<ContactState> {
    let b = contact_boundaries(input)?;
    Ok(classify_with(input.l1, &b))
}

fn classify_with(l1: f64, b: &ContactBoundaries) -> ContactState {
    if l1 < b.l_ns {
        ContactState::NonContact
    } else if l1 < b.l_sd {
        ContactState::SingleContact
    } else {
        ContactState::DoubleContact
    }
}

/// Newton iteration budget for the single-contact system.
pub const NEWTON_MAX_ITERATIONS: usize = 100;
/// Accepted residual max-norm (m).
pub const NEWTON_TOLERANCE: f64 = 1e-10;

/// Residual of the three tangency relations at `(r, θ, d)`.
pub fn tangency_residual(input: &StationInput, r: f64, theta: f64, d: f64) -> [f64; 3] {
    let half_t = 0.5 * input.t;
    let (s, c) = (sin(theta), cos(theta));
    [
        r + (r + half_t) * s - input.l1p,
        r * (theta + FRAC_PI_2) + half_t * theta + d - input.l1,
        input.delta + half_t - (r + half_t) * c - d,
    ]
}

fn max_norm(v: &[f64; 3]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Solves `a·x = b` for a 3×3 system by partial-pivot elimination.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in row + 1..3 {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Damped Newton on `(r, θ, d)`. Steps are halved until the residual
/// decreases and `θ` stays inside `[0, π]`.
fn newton_single_contact(input: &StationInput, guess: [f64; 3]) -> Result<([f64; 3], f64)> {
    let half_t = 0.5 * input.t;
    let mut x = guess;
    let mut res = tangency_residual(input, x[0], x[1], x[2]);
    let mut norm = max_norm(&res);
    for _ in 0..NEWTON_MAX_ITERATIONS {
        if norm <= 1e-15 {
            break;
        }
        let (r, theta) = (x[0], x[1]);
        let (s, c) = (sin(theta), cos(theta));
        let jac =
            [[1.0 + s, (r + half_t) * c, 0.0], [theta + FRAC_PI_2, r + half_t, 1.0], [-c, (r + half_t) * s, -1.0]];
        let Some(step) = solve3(jac, [-res[0], -res[1], -res[2]]) else {
            break;
        };
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial = [x[0] + lambda * step[0], x[1] + lambda * step[1], x[2] + lambda * step[2]];
            if (0.0..=PI).contains(&trial[1]) && trial[0] >= 0.0 {
                let tres = tangency_residual(input, trial[0], trial[1], trial[2]);
                let tnorm = max_norm(&tres);
                if tnorm < norm {
                    x = trial;
                    res = tres;
                    norm = tnorm;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if norm < NEWTON_TOLERANCE {
        Ok((x, norm))
    } else {
        Err(Error::NoConvergence {
            what: "film single-contact system",
            iterations: NEWTON_MAX_ITERATIONS,
            residual: norm,
        })
    }
}

/// Wrap angle on the single-contact family whose film length is `l1`.
/// The family length grows strictly with `θ`, so bisection always brackets it.
fn bracket_wrap_angle(input: &StationInput, b: &ContactBoundaries) -> f64 {
    let (mut lo, mut hi) = (b.theta_ns, b.theta_sd);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if family(input, mid).length < input.l1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Contact state and film configuration at one station.
pub fn solve_station(input: &StationInput) -> Result<FilmContactSolution> {
    let b = contact_boundaries(input)?;
    let (state, r, theta, d) = match classify_with(input.l1, &b) {
        ContactState::NonContact => (ContactState::NonContact, 0.0, 0.0, 0.0),
        ContactState::SingleContact => {
            let theta0 = bracket_wrap_angle(input, &b);
            let p = family(input, theta0);
            let (x, _) = newton_single_contact(input, [p.r, theta0, p.d])?;
            (ContactState::SingleContact, x[0], x[1], x[2].max(0.0))
        }
        ContactState::DoubleContact => {
            let p = family(input, b.theta_sd);
            (ContactState::DoubleContact, p.r, b.theta_sd, p.d + 0.5 * (input.l1 - b.l_sd))
        }
    };
    let clamped = d > input.radius;
    Ok(FilmContactSolution {
        state,
        free_radius: r,
        wrap_angle: theta,
        contact_distance: if clamped { input.radius } else { d },
        clamped,
    })
}

/// How stations are laid out around a compressed helical spring.
///
/// The lowest coil rests on the end-cap at azimuth 0 with an extra
/// clearance `coil_clearance`, and rises by the compressed pitch `l/N`
/// over one turn. The slack `L − l` is shared equally by the `N` coils.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationModel {
    /// Number of trapezoid intervals over `[0, 2π]`.
    pub stations: usize,
    /// Gap between the wire and the end-cap at azimuth 0 (m).
    pub coil_clearance: f64,
}

pub const DEFAULT_STATIONS: usize = 360;

impl Default for StationModel {
    fn default() -> Self {
        Self { stations: DEFAULT_STATIONS, coil_clearance: 0.0 }
    }
}

impl StationModel {
    pub fn with_stations(stations: usize) -> Self {
        Self { stations, ..Self::default() }
    }

    /// Station geometry at azimuth `phi` for spring length `length`.
    pub fn station(&self, design: &GripperDesign, length: f64, phi: f64) -> StationInput {
        let spring = &design.outer_spring;
        let coils = spring.total_coils();
        let t = design.covered_wire_thickness();
        let pitch = length / coils;
        let l1p = 0.5 * t + self.coil_clearance + pitch * phi / TAU;
        let slack = (spring.free_length - length).max(0.0) / coils;
        StationInput { l1: l1p + slack, l1p, t, delta: design.radial_clearance, radius: design.endcap_radius }
    }

    fn azimuths(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.stations;
        (0..=n).map(move |k| TAU * k as f64 / n as f64)
    }
}

fn check_length(design: &GripperDesign, length: f64) -> Result<()> {
    let lo = design.solid_length();
    let hi = design.outer_spring.free_length;
    let tol = 1e-12 * hi;
    if !(length >= lo - tol && length <= hi + tol) {
        return Err(Error::out_of_interval("current_length", length, lo, hi));
    }
    Ok(())
}

/// Solutions at every station node `φ_k = 2πk/N`, `k = 0..=N`.
pub fn station_profile(
    design: &GripperDesign,
    length: f64,
    model: &StationModel,
) -> Result<Vec<(f64, FilmContactSolution)>> {
    check_length(design, length)?;
    if model.stations == 0 {
        return Err(Error::domain("stations", 0.0));
    }
    model
        .azimuths()
        .map(|phi| {
            solve_station(&model.station(design, length, phi))
                .map(|s| (phi, s))
                .map_err(|e| Error::Station { phi, source: Box::new(e) })
        })
        .collect()
}

/// Pressure-bearing area `∮ ½(R − d(φ))² dφ` by the composite trapezoid
/// rule over `model.stations` intervals. Equals `πR²` with no slack.
pub fn effective_area(design: &GripperDesign, length: f64, model: &StationModel) -> Result<f64> {
    let profile = station_profile(design, length, model)?;
    let radius = design.endcap_radius;
    let n = model.stations;
    let mut sum = 0.0;
    for (k, (_, sol)) in profile.iter().enumerate() {
        let w = if k == 0 || k == n { 0.5 } else { 1.0 };
        let reach = radius - sol.contact_distance;
        sum += w * reach * reach;
    }
    Ok(0.5 * sum * TAU / n as f64)
}

/// Threshold and double-contact expressions in the closed form that is
/// commonly quoted for this film model. They add a bare `1` to lengths, so
/// they are only meaningful with lengths in millimetres, and they do not
/// reproduce the tangency solution. Kept for side-by-side comparison only.
pub mod quoted_forms {
    use crate::math::{acos, asin, sin, FRAC_PI_2, PI};

    /// `(θ_ns, θ_sd)`; `None` where an inverse-trig argument leaves `[−1, 1]`.
    pub fn wrap_angles_mm(l1p: f64, t: f64, t_spring: f64) -> Option<(f64, f64)> {
        let rho = (l1p * l1p + t + 1.0) / (2.0 * l1p);
        let a = (0.5 * t_spring + 1.0) / (rho + 0.5 * t_spring);
        let b = l1p / (l1p + t_spring);
        if !(-1.0..=1.0).contains(&a) || !(-1.0..=1.0).contains(&b) {
            return None;
        }
        Some((acos(a), PI - asin(b)))
    }

    /// `(l_ns, l_sd)` in millimetres.
    pub fn thresholds_mm(l1p: f64, t: f64, t_spring: f64) -> Option<(f64, f64)> {
        let (th_ns, th_sd) = wrap_angles_mm(l1p, t, t_spring)?;
        let rho = (l1p * l1p + t + 1.0) / (2.0 * l1p);
        let l_ns = rho * (th_ns + FRAC_PI_2) + 0.5 * t * th_ns;
        let tail = sin(th_sd - FRAC_PI_2);
        let l_sd = 0.5 * (t * (th_sd + 1.0 + tail) + l1p * (th_sd + FRAC_PI_2 + tail) + 1.0);
        Some((l_ns, l_sd))
    }

    /// Double-contact distance in millimetres.
    pub fn double_contact_distance_mm(l1: f64, l1p: f64, t: f64, delta: f64) -> f64 {
        0.5 * (l1 - FRAC_PI_2 * l1p - (FRAC_PI_2 - 1.0) * t + delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::mm;

    fn reference_station(l1: f64) -> StationInput {
        StationInput { l1, l1p: mm(5.0), t: mm(1.6), delta: mm(1.0), radius: mm(16.0) }
    }

    #[test]
    fn boundaries_are_ordered() {
        let b = contact_boundaries(&reference_station(mm(5.0))).unwrap();
        assert!(b.l_ns < b.l_sd);
        assert!(b.theta_ns < FRAC_PI_2 && b.theta_sd > FRAC_PI_2);
    }

    #[test]
    fn boundaries_reject_low_wire() {
        let input = StationInput { l1: mm(3.0), l1p: mm(0.9), t: mm(1.6), delta: mm(1.0), radius: mm(16.0) };
        match contact_boundaries(&input) {
            Err(Error::Domain { what, .. }) => assert_eq!(what, "l_ns"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classification_follows_thresholds() {
        let b = contact_boundaries(&reference_station(mm(5.0))).unwrap();
        let at = |l1: f64| classify_state(&reference_station(l1)).unwrap();
        assert_eq!(at(0.5 * (mm(5.0) + b.l_ns)), ContactState::NonContact);
        assert_eq!(at(0.5 * (b.l_ns + b.l_sd)), ContactState::SingleContact);
        assert_eq!(at(1.5 * b.l_sd), ContactState::DoubleContact);
    }

    #[test]
    fn no_contact_means_zero_distance() {
        let b = contact_boundaries(&reference_station(mm(5.0))).unwrap();
        let s = solve_station(&reference_station(0.5 * (mm(5.0) + b.l_ns))).unwrap();
        assert_eq!(s.state, ContactState::NonContact);
        assert_eq!(s.contact_distance, 0.0);
    }

    #[test]
    fn single_contact_residual_is_tiny() {
        let b = contact_boundaries(&reference_station(mm(5.0))).unwrap();
        let input = reference_station(0.5 * (b.l_ns + b.l_sd));
        let s = solve_station(&input).unwrap();
        assert_eq!(s.state, ContactState::SingleContact);
        let res = tangency_residual(&input, s.free_radius, s.wrap_angle, s.contact_distance);
        assert!(max_norm(&res) < NEWTON_TOLERANCE, "{res:?}");
    }

    #[test]
    fn newton_from_the_plain_guess_also_converges() {
        let b = contact_boundaries(&reference_station(mm(5.0))).unwrap();
        let input = reference_station(0.5 * (b.l_ns + b.l_sd));
        let (x, norm) = newton_single_contact(&input, [0.5 * input.l1p, core::f64::consts::FRAC_PI_4, 0.0]).unwrap();
        let s = solve_station(&input).unwrap();
        assert!(norm < NEWTON_TOLERANCE);
        assert!((x[2] - s.contact_distance).abs() < 1e-12);
    }

    #[test]
    fn distance_continuous_at_boundaries() {
        let b = contact_boundaries(&reference_station(mm(5.0))).unwrap();
        for l in [b.l_ns, b.l_sd] {
            let lo = solve_station(&reference_station(l - 1e-9)).unwrap();
            let hi = solve_station(&reference_station(l + 1e-9)).unwrap();
            assert!((lo.contact_distance - hi.contact_distance).abs() < 1e-6);
        }
    }

    #[test]
    fn clamp_is_reported() {
        let input = StationInput { radius: mm(2.0), ..reference_station(mm(40.0)) };
        let s = solve_station(&input).unwrap();
        assert!(s.clamped);
        assert_eq!(s.contact_distance, mm(2.0));
    }

    #[test]
    fn zero_slack_area_is_full_disc() {
        let design = GripperDesign::default();
        let a = effective_area(&design, design.outer_spring.free_length, &StationModel::default()).unwrap();
        let disc = PI * design.endcap_radius * design.endcap_radius;
        assert!((a - disc).abs() / disc < 1e-12);
    }

    #[test]
    fn area_rejects_lengths_outside_stroke() {
        let design = GripperDesign::default();
        assert!(effective_area(&design, 0.5 * design.solid_length(), &StationModel::default()).is_err());
        assert!(effective_area(&design, 1.01 * design.outer_spring.free_length, &StationModel::default()).is_err());
    }

    #[test]
    fn area_non_increasing_with_compression() {
        let design = GripperDesign::default();
        let model = StationModel::default();
        let (lo, hi) = (design.solid_length(), design.outer_spring.free_length);
        let mut prev = f64::INFINITY;
        for k in 0..=40 {
            let l = hi - (hi - lo) * k as f64 / 40.0;
            let a = effective_area(&design, l, &model).unwrap();
            assert!(a <= prev * (1.0 + 1e-12), "{l}: {a} > {prev}");
            assert!(a > 0.0);
            prev = a;
        }
    }

    #[test]
    fn halving_compression_never_increases_contact() {
        let design = GripperDesign::default();
        let model = StationModel::default();
        let (lo, hi) = (design.solid_length(), design.outer_spring.free_length);
        for frac in [0.2, 0.5, 0.9, 1.0] {
            let full = hi - frac * (hi - lo);
            let half = hi - 0.5 * frac * (hi - lo);
            let a = station_profile(&design, full, &model).unwrap();
            let b = station_profile(&design, half, &model).unwrap();
            for ((phi, x), (_, y)) in a.iter().zip(&b) {
                assert!(y.contact_distance <= x.contact_distance + 1e-15, "{phi}");
            }
        }
    }

    #[test]
    fn quoted_double_contact_is_linear_with_half_slope() {
        let a = quoted_forms::double_contact_distance_mm(10.0, 5.0, 1.6, 1.0);
        let b = quoted_forms::double_contact_distance_mm(12.0, 5.0, 1.6, 1.0);
        assert!((b - a - 1.0).abs() < 1e-12);
        assert!(quoted_forms::thresholds_mm(5.0, 1.72, 1.6).is_some());
    }

    proptest::proptest! {
        #[test]
        fn thresholds_ordered_for_random_inputs(
            l1p in 1.0e-3..20e-3f64, t in 0.5e-3..3e-3f64, delta_frac in 0.0..0.95f64,
        ) {
            let delta = delta_frac * l1p;
            let input = StationInput { l1: l1p, l1p: l1p.max(0.5 * t), t, delta, radius: 0.02 };
            if let Ok(b) = contact_boundaries(&input) {
                proptest::prop_assert!(b.l_ns < b.l_sd);
            }
        }

        #[test]
        fn distance_bounded(l1p in 1e-3..10e-3f64, extra in 0.0..30e-3f64) {
            let input = StationInput { l1: l1p + extra, l1p, t: 1.7e-3, delta: 0.5e-3, radius: 15.5e-3 };
            let s = solve_station(&input).unwrap();
            proptest::prop_assert!(s.contact_distance >= 0.0 && s.contact_distance <= input.radius);
            proptest::prop_assert!((0.0..=PI).contains(&s.wrap_angle));
        }
    }
}
