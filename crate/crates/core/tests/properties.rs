use deploygrip_core::film::{effective_area, StationModel};
use deploygrip_core::math::PI;
use deploygrip_core::picking::{force_profile, max_distance, min_distance, picking_range, ForceSettings, Limiting};
use deploygrip_core::types::{catalog, validate_design, SpringParams};
use deploygrip_core::units::{lpm, mm};
use deploygrip_core::{GripperDesign, PneumaticLine};
use proptest::prelude::*;

fn design(wire_mm: f64, k: f64) -> GripperDesign {
    GripperDesign::with_outer_spring(SpringParams::new(mm(150.0), mm(15.0), mm(11.5), mm(wire_mm), k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn min_distance_never_exceeds_max(
        wire in 1.2..2.2f64, k in 50.0..800.0f64, q in 1.0..30.0f64, d in 3.0..6.0f64,
    ) {
        let g = design(wire, k);
        let line = PneumaticLine { tube_diameter: mm(d), ..PneumaticLine::default() }.with_flow_rate(lpm(q));
        prop_assume!(validate_design(&g, &line).is_empty());
        if let Ok(max) = max_distance(&g, &line) {
            prop_assert!(min_distance(&g, &line).0 <= max);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn effective_area_is_bounded(row in 0usize..4, frac in 0.0..1.0f64) {
        let g = GripperDesign::catalog(row);
        let (lo, hi) = (g.solid_length(), g.outer_spring.free_length);
        let l = lo + frac * (hi - lo);
        let a = effective_area(&g, l, &StationModel::with_stations(90)).unwrap();
        let disc = PI * g.endcap_radius * g.endcap_radius;
        prop_assert!(a > 0.0 && a <= disc * (1.0 + 1e-12));
        if l < hi * (1.0 - 1e-6) {
            prop_assert!(a < disc);
        }
    }
}

fn profile_1mm(g: &GripperDesign, line: &PneumaticLine) -> Vec<deploygrip_core::picking::ForcePoint> {
    let r = picking_range(g, line).unwrap();
    let n = ((r.d_max - r.d_min) / mm(1.0)).floor() as usize;
    let xs: Vec<f64> = (0..=n).map(|i| r.d_min + mm(1.0) * i as f64).collect();
    force_profile(g, line, &xs, &ForceSettings::default()).unwrap()
}

#[test]
fn picking_force_has_no_jumps_on_1mm_grid() {
    for row in 0..4 {
        let g = GripperDesign::catalog(row);
        let p = profile_1mm(&g, &PneumaticLine::default());
        let worst = p.windows(2).map(|w| (w[1].picking_force - w[0].picking_force).abs()).fold(0.0, f64::max);
        assert!(worst <= 0.5, "row {row}: step of {worst} N over 1 mm");
    }
}

/// Steps shrink in proportion to the grid spacing, so the profile has no
/// jumps; only its slope sets the step size.
#[test]
fn picking_force_steps_shrink_with_grid() {
    let line = PneumaticLine::default();
    for row in 0..4 {
        let g = GripperDesign::catalog(row);
        let r = picking_range(&g, &line).unwrap();
        let worst = |h: f64| {
            let n = ((r.d_max - r.d_min) / h).floor() as usize;
            let xs: Vec<f64> = (0..=n).map(|i| r.d_min + h * i as f64).collect();
            let p = force_profile(&g, &line, &xs, &ForceSettings::default()).unwrap();
            p.windows(2).map(|w| (w[1].picking_force - w[0].picking_force).abs()).fold(0.0, f64::max)
        };
        let (coarse, fine) = (worst(mm(1.0)), worst(mm(0.1)));
        assert!(fine <= 0.15 * coarse, "row {row}: {fine} vs {coarse}");
    }
}

#[test]
fn single_body_to_cup_crossover() {
    for row in 0..4 {
        for q in [4.0, 9.0, 14.0] {
            let p = profile_1mm(&GripperDesign::catalog(row), &PneumaticLine::default().with_flow_rate(lpm(q)));
            let flips: Vec<_> = p.windows(2).filter(|w| w[0].limiting != w[1].limiting).collect();
            assert!(flips.len() <= 1, "row {row}, Q {q}");
            if let Some(f) = flips.first() {
                assert_eq!((f[0].limiting, f[1].limiting), (Limiting::Body, Limiting::Cup));
            }
        }
    }
}

#[test]
fn table_springs_are_valid_designs() {
    for i in 0..4 {
        assert_eq!(GripperDesign::catalog(i).outer_spring, catalog::outer(i));
    }
}
