//! Design records shared by every model, plus their sanity rules.

use alloc::vec::Vec;

use crate::math::{round, PI};
use crate::units::{lpm, mm};

/// Shear modulus of spring steel (Pa).
pub const STEEL_SHEAR_MODULUS: f64 = 79.3e9;

/// Helical compression spring.
///
/// `spring_constant` is the authoritative stiffness used by every model.
/// [`helix_stiffness`] only predicts it from geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpringParams {
    /// Free length `L` (m).
    pub free_length: f64,
    /// Coil radius `R_s` (m).
    pub coil_radius: f64,
    /// Pitch at free length (m).
    pub pitch: f64,
    /// Wire diameter (m).
    pub wire_diameter: f64,
    /// Stiffness `k` (N/m).
    pub spring_constant: f64,
    /// Shear modulus `G` (Pa), only read by [`helix_stiffness`].
    pub shear_modulus: f64,
    /// Active coil count `n`.
    pub active_coils: f64,
}

impl SpringParams {
    /// Spring with steel shear modulus and the default active coil count.
    pub fn new(free_length: f64, coil_radius: f64, pitch: f64, wire_diameter: f64, spring_constant: f64) -> Self {
        Self {
            free_length,
            coil_radius,
            pitch,
            wire_diameter,
            spring_constant,
            shear_modulus: STEEL_SHEAR_MODULUS,
            active_coils: default_active_coils(free_length, pitch),
        }
    }

    /// Number of wire turns stacked along the free length, `round(L / p)`.
    pub fn total_coils(&self) -> f64 {
        round(self.free_length / self.pitch).max(1.0)
    }

    /// Fully compressed length of the spring with film folded between
    /// every pair of adjacent coils: `N·t + 2(N − 1)·t_film`.
    pub fn solid_length(&self, film_thickness: f64) -> f64 {
        let n = self.total_coils();
        n * self.wire_diameter + 2.0 * (n - 1.0) * film_thickness
    }
}

/// Active coils for a spring with two closed, inactive end turns.
pub fn default_active_coils(free_length: f64, pitch: f64) -> f64 {
    (round(free_length / pitch) - 2.0).max(1.0)
}

/// Rate of a helical spring, `G·t⁴ / (8·(2R_s)³·n)`.
pub fn helix_stiffness(spring: &SpringParams) -> f64 {
    let d = spring.wire_diameter;
    let mean_diameter = 2.0 * spring.coil_radius;
    spring.shear_modulus * d * d * d * d / (8.0 * mean_diameter * mean_diameter * mean_diameter * spring.active_coils)
}

/// Measured springs used throughout the examples and acceptance checks.
pub mod catalog {
    use super::SpringParams;
    use crate::units::mm;

    /// Outer-spring wire diameters (m).
    pub const OUTER_WIRE_DIAMETERS: [f64; 4] = [1.4e-3, 1.6e-3, 1.8e-3, 2.0e-3];
    /// Measured outer-spring stiffness for each wire diameter (N/m).
    pub const OUTER_SPRING_CONSTANTS: [f64; 4] = [125.0, 198.0, 326.0, 522.0];
    /// Inner-spring measured stiffness (N/m).
    pub const INNER_SPRING_CONSTANT: f64 = 22.3;

    /// Outer spring number `index` (0..4).
    pub fn outer(index: usize) -> SpringParams {
        SpringParams::new(mm(150.0), mm(15.0), mm(11.5), OUTER_WIRE_DIAMETERS[index], OUTER_SPRING_CONSTANTS[index])
    }

    pub fn inner() -> SpringParams {
        SpringParams::new(mm(150.0), mm(5.0), mm(5.36), mm(0.5), INNER_SPRING_CONSTANT)
    }

    /// Measured stiffness for a catalogued wire diameter, if it is one.
    pub fn outer_constant_for(wire_diameter: f64) -> Option<f64> {
        OUTER_WIRE_DIAMETERS.iter().position(|&t| (t - wire_diameter).abs() < 1e-9).map(|i| OUTER_SPRING_CONSTANTS[i])
    }
}

/// Full gripper: outer body spring, inner air-tube spring, film and end-caps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GripperDesign {
    pub outer_spring: SpringParams,
    pub inner_spring: SpringParams,
    /// Film thickness (m).
    pub film_thickness: f64,
    /// Sum of both end-cap heights (m).
    pub endcap_heights_total: f64,
    /// Suction cup height (m).
    pub suction_cup_height: f64,
    /// Suction cup effective area `A_s` (m²).
    pub suction_cup_effective_area: f64,
    /// Body effective area with taut film `A_b` (m²).
    pub body_effective_area_full: f64,
    /// End-cap radius `R` (m).
    pub endcap_radius: f64,
    /// End-cap radius minus outer coil radius (m).
    pub radial_clearance: f64,
}

/// Default radial clearance between coil envelope and end-cap rim.
pub const DEFAULT_RADIAL_CLEARANCE: f64 = 0.5e-3;
/// Default end-cap heights (upper + lower).
pub const DEFAULT_ENDCAP_HEIGHTS: f64 = 10e-3;
/// Default suction cup height.
pub const DEFAULT_SUCTION_HEIGHT: f64 = 15e-3;
/// Film thickness of the heat-pressed LDPE sleeves.
pub const DEFAULT_FILM_THICKNESS: f64 = 60e-6;
/// Gauge vacuum the pump holds in sealed phases (Pa, negative).
pub const DEFAULT_VACUUM_GAUGE: f64 = -91e3;
/// Cup holding force cap at the default vacuum (N).
pub const DEFAULT_CUP_FORCE_CAP: f64 = 45.0;

impl GripperDesign {
    /// Design around a given outer spring with every other field defaulted.
    /// The body area is the coil disc and the cup area gives a 45 N cap at
    /// the default vacuum.
    pub fn with_outer_spring(outer_spring: SpringParams) -> Self {
        let r_s = outer_spring.coil_radius;
        Self {
            outer_spring,
            inner_spring: SpringParams { free_length: outer_spring.free_length, ..catalog::inner() },
            film_thickness: DEFAULT_FILM_THICKNESS,
            endcap_heights_total: DEFAULT_ENDCAP_HEIGHTS,
            suction_cup_height: DEFAULT_SUCTION_HEIGHT,
            suction_cup_effective_area: DEFAULT_CUP_FORCE_CAP / -DEFAULT_VACUUM_GAUGE,
            body_effective_area_full: PI * r_s * r_s,
            endcap_radius: r_s + DEFAULT_RADIAL_CLEARANCE,
            radial_clearance: DEFAULT_RADIAL_CLEARANCE,
        }
    }

    /// One of the four measured grippers (index 0..4 → 1.4, 1.6, 1.8, 2.0 mm wire).
    pub fn catalog(index: usize) -> Self {
        Self::with_outer_spring(catalog::outer(index))
    }

    /// Combined height of end-caps and suction cup.
    pub fn cap_heights(&self) -> f64 {
        self.endcap_heights_total + self.suction_cup_height
    }

    pub fn solid_length(&self) -> f64 {
        self.outer_spring.solid_length(self.film_thickness)
    }

    /// Effective wire thickness seen by the film: wire plus a film layer on each side.
    pub fn covered_wire_thickness(&self) -> f64 {
        self.outer_spring.wire_diameter + 2.0 * self.film_thickness
    }

    /// Same design with the body radius moved, keeping `R = R_s + δ`.
    pub fn set_radial_clearance(&mut self, clearance: f64) {
        self.radial_clearance = clearance;
        self.endcap_radius = self.outer_spring.coil_radius + clearance;
    }
}

impl Default for GripperDesign {
    fn default() -> Self {
        Self::catalog(1)
    }
}

/// Supply line between the gripper and the pump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PneumaticLine {
    /// Tube inner diameter `D₂` (m).
    pub tube_diameter: f64,
    /// Tube length `L_t` (m).
    pub tube_length: f64,
    /// Wall roughness `ε` (m).
    pub roughness: f64,
    /// Pump volumetric flow `Q` (m³/s).
    pub flow_rate: f64,
    /// Air density (kg/m³).
    pub air_density: f64,
    /// Air dynamic viscosity (Pa·s).
    pub dynamic_viscosity: f64,
    /// Atmospheric pressure (Pa).
    pub atmospheric_pressure: f64,
}

impl Default for PneumaticLine {
    fn default() -> Self {
        Self {
            tube_diameter: mm(4.0),
            tube_length: 1.0,
            roughness: 0.0,
            flow_rate: lpm(14.0),
            air_density: 1.204,
            dynamic_viscosity: 1.825e-5,
            atmospheric_pressure: 101_325.0,
        }
    }
}

impl PneumaticLine {
    pub fn with_flow_rate(self, flow_rate: f64) -> Self {
        Self { flow_rate, ..self }
    }
}

/// Object to pick.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectSpec {
    /// Mass (kg).
    pub mass: f64,
    /// Distance from the upper end-cap surface to the object's top surface (m).
    pub distance: f64,
}

/// One broken parameter rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    /// Dotted field path, e.g. `outer_spring.pitch`.
    pub field: &'static str,
    pub rule: &'static str,
}

impl core::fmt::Display for Violation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}: {}", self.field, self.rule)
    }
}

fn check(out: &mut Vec<Violation>, ok: bool, field: &'static str, rule: &'static str) {
    if !ok {
        out.push(Violation { field, rule });
    }
}

fn check_spring(out: &mut Vec<Violation>, s: &SpringParams, prefix: &SpringFields) {
    check(out, s.free_length > 0.0, prefix.free_length, "must be > 0");
    check(out, s.coil_radius > 0.0, prefix.coil_radius, "must be > 0");
    check(out, s.pitch > 0.0, prefix.pitch, "must be > 0");
    check(out, s.wire_diameter > 0.0, prefix.wire_diameter, "must be > 0");
    check(out, s.spring_constant > 0.0, prefix.spring_constant, "must be > 0");
    check(out, s.shear_modulus > 0.0, prefix.shear_modulus, "must be > 0");
    check(out, s.pitch > s.wire_diameter, prefix.pitch, "must exceed wire_diameter");
    check(out, s.active_coils >= 1.0, prefix.active_coils, "must be >= 1");
    check(
        out,
        s.wire_diameter <= 0.0 || s.active_coils <= s.free_length / s.wire_diameter,
        prefix.active_coils,
        "solid length must fit within free_length",
    );
}

struct SpringFields {
    free_length: &'static str,
    coil_radius: &'static str,
    pitch: &'static str,
    wire_diameter: &'static str,
    spring_constant: &'static str,
    shear_modulus: &'static str,
    active_coils: &'static str,
}

macro_rules! spring_fields {
    ($p:literal) => {
        SpringFields {
            free_length: concat!($p, ".free_length"),
            coil_radius: concat!($p, ".coil_radius"),
            pitch: concat!($p, ".pitch"),
            wire_diameter: concat!($p, ".wire_diameter"),
            spring_constant: concat!($p, ".spring_constant"),
            shear_modulus: concat!($p, ".shear_modulus"),
            active_coils: concat!($p, ".active_coils"),
        }
    };
}

/// Every broken rule of `design` and `line`; empty when all hold.
pub fn validate_design(design: &GripperDesign, line: &PneumaticLine) -> Vec<Violation> {
    let mut out = Vec::new();
    check_spring(&mut out, &design.outer_spring, &spring_fields!("outer_spring"));
    check_spring(&mut out, &design.inner_spring, &spring_fields!("inner_spring"));

    let d = design;
    check(
        &mut out,
        (d.inner_spring.free_length - d.outer_spring.free_length).abs() <= 1e-9,
        "inner_spring.free_length",
        "must equal outer_spring.free_length",
    );
    check(&mut out, d.film_thickness >= 0.0, "film_thickness", "must be >= 0");
    check(&mut out, d.endcap_heights_total >= 0.0, "endcap_heights_total", "must be >= 0");
    check(&mut out, d.suction_cup_height >= 0.0, "suction_cup_height", "must be >= 0");
    check(&mut out, d.suction_cup_effective_area > 0.0, "suction_cup_effective_area", "must be > 0");
    check(&mut out, d.body_effective_area_full > 0.0, "body_effective_area_full", "must be > 0");
    check(&mut out, d.endcap_radius > 0.0, "endcap_radius", "must be > 0");
    check(
        &mut out,
        d.body_effective_area_full <= PI * d.endcap_radius * d.endcap_radius * (1.0 + 1e-12),
        "body_effective_area_full",
        "must not exceed the end-cap disc area",
    );
    if d.radial_clearance < 0.0 {
        out.push(Violation { field: "radial_clearance", rule: "must be >= 0" });
    } else {
        check(
            &mut out,
            (d.endcap_radius - (d.outer_spring.coil_radius + d.radial_clearance)).abs() <= 1e-9,
            "endcap_radius",
            "must equal outer_spring.coil_radius + radial_clearance",
        );
        check(
            &mut out,
            d.radial_clearance < 0.5 * d.covered_wire_thickness(),
            "radial_clearance",
            "must be smaller than the film-covered wire radius",
        );
    }

    let l = line;
    check(&mut out, l.tube_diameter > 0.0, "tube_diameter", "must be > 0");
    check(&mut out, l.tube_length > 0.0, "tube_length", "must be > 0");
    check(&mut out, l.flow_rate > 0.0, "flow_rate", "must be > 0");
    check(&mut out, l.air_density > 0.0, "air_density", "must be > 0");
    check(&mut out, l.dynamic_viscosity > 0.0, "dynamic_viscosity", "must be > 0");
    check(&mut out, l.atmospheric_pressure > 0.0, "atmospheric_pressure", "must be > 0");
    if l.roughness < 0.0 {
        out.push(Violation { field: "roughness", rule: "must be >= 0" });
    } else {
        check(&mut out, l.roughness < l.tube_diameter, "roughness", "must be smaller than tube_diameter");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_designs_are_consistent() {
        for i in 0..4 {
            let v = validate_design(&GripperDesign::catalog(i), &PneumaticLine::default());
            assert!(v.is_empty(), "{i}: {v:?}");
        }
    }

    #[test]
    fn negative_clearance_names_the_field() {
        let mut d = GripperDesign::default();
        d.radial_clearance = -1e-3;
        let v = validate_design(&d, &PneumaticLine::default());
        assert_eq!(v.len(), 1, "{v:?}");
        assert_eq!(v[0].field, "radial_clearance");
    }

    #[test]
    fn roughness_equal_to_diameter_is_rejected() {
        let line = PneumaticLine { roughness: mm(4.0), ..PneumaticLine::default() };
        let v = validate_design(&GripperDesign::default(), &line);
        assert_eq!(v.len(), 1, "{v:?}");
        assert_eq!(v[0].field, "roughness");
    }

    #[test]
    fn validation_is_idempotent() {
        let mut d = GripperDesign::default();
        d.outer_spring.pitch = 1e-3;
        d.body_effective_area_full = 1.0;
        let line = PneumaticLine { flow_rate: -1.0, ..PneumaticLine::default() };
        let a = validate_design(&d, &line);
        let b = validate_design(&d, &line);
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn active_coils_default_drops_end_turns() {
        assert_eq!(catalog::outer(0).total_coils(), 13.0);
        assert_eq!(catalog::outer(0).active_coils, 11.0);
        assert_eq!(catalog::inner().active_coils, 26.0);
    }

    #[test]
    fn helix_stiffness_first_row() {
        let k = helix_stiffness(&catalog::outer(0));
        // 79.3e9 * 1.4e-3^4 / (8 * 0.03^3 * 11)
        assert!((k - 128.216).abs() < 1e-2, "{k}");
        assert!((k - 125.0).abs() / 125.0 < 0.2);
    }

    #[test]
    fn helix_stiffness_is_quartic_in_wire() {
        let s = catalog::outer(0);
        let doubled = SpringParams { wire_diameter: 2.0 * s.wire_diameter, ..s };
        let ratio = helix_stiffness(&doubled) / helix_stiffness(&s);
        assert!((ratio - 16.0).abs() < 1e-12);
    }

    #[test]
    fn helix_stiffness_all_rows_within_20_percent() {
        for i in 0..4 {
            let s = catalog::outer(i);
            let rel = (helix_stiffness(&s) - s.spring_constant).abs() / s.spring_constant;
            assert!(rel < 0.2, "row {i}: {rel}");
        }
        let inner = catalog::inner();
        assert!((helix_stiffness(&inner) - inner.spring_constant).abs() / inner.spring_constant < 0.2);
    }

    #[test]
    fn solid_length_of_second_row() {
        // 13 * 1.6 mm + 2 * 12 * 0.06 mm
        let d = GripperDesign::catalog(1);
        assert!((d.solid_length() - 22.24e-3).abs() < 1e-12);
    }

    proptest::proptest! {
        #[test]
        fn helix_monotonicity(t in 0.5e-3..3e-3f64, r in 5e-3..30e-3f64, n in 1.0..30.0f64) {
            let s = SpringParams { wire_diameter: t, coil_radius: r, active_coils: n, ..catalog::outer(0) };
            let k = helix_stiffness(&s);
            let up_t = helix_stiffness(&SpringParams { wire_diameter: t * 1.01, ..s });
            let up_r = helix_stiffness(&SpringParams { coil_radius: r * 1.01, ..s });
            let up_n = helix_stiffness(&SpringParams { active_coils: n * 1.01, ..s });
            proptest::prop_assert!(up_t > k);
            proptest::prop_assert!(up_r < k);
            proptest::prop_assert!(up_n < k);
        }
    }
}
