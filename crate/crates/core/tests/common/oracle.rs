//! Brute-force film geometry built from circle constructions.
//!
//! Coordinates: `x` runs inward from the end-cap rim along the cap, `y` up.
//! The covered wire is a circle of radius `t/2` centred at
//! `(δ + t/2, l′₁)`. The film lies on the cap from the rim to `x = d`, then
//! follows a circle of radius `r` resting on the cap that touches the wire
//! circle externally, and finally wraps the wire up to its outermost point
//! `(δ, l′₁)`. Lengths are measured on dense polylines, and thresholds and
//! states come from scans plus bisection on the arc radius.

use std::f64::consts::{PI, TAU};

use deploygrip_core::film::{ContactState, StationInput};

const ARC_SEGMENTS: usize = 4_000;
const SCAN_POINTS: usize = 400;
const LENGTH_SCAN_POINTS: usize = 100;

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub r: f64,
    pub d: f64,
    cy: f64,
    wire: (f64, f64, f64),
    sweeps: (f64, f64, f64),
}

impl Shape {
    /// Film length from the rim to where it leaves the wire.
    pub fn length(&self) -> f64 {
        let (wx, wy, h) = self.wire;
        let (start, sweep1, a_wire) = self.sweeps;
        let sweep2 = (a_wire - PI).max(0.0);
        self.d + polyline_arc(self.d, self.cy, self.r, start, sweep1) + polyline_arc(wx, wy, h, a_wire, -sweep2)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OracleSolution {
    pub state: ContactState,
    pub d: f64,
    pub l_ns: f64,
    pub l_sd: f64,
}

fn polyline_arc(cx: f64, cy: f64, rho: f64, from: f64, sweep: f64) -> f64 {
    let mut len = 0.0;
    let mut prev = (cx + rho * from.cos(), cy + rho * from.sin());
    for i in 1..=ARC_SEGMENTS {
        let a = from + sweep * i as f64 / ARC_SEGMENTS as f64;
        let p = (cx + rho * a.cos(), cy + rho * a.sin());
        len += (p.0 - prev.0).hypot(p.1 - prev.1);
        prev = p;
    }
    len
}

/// Shape with arc radius `r` on one side of the wire (`outer = true` puts
/// the arc centre nearer the rim than the wire centre).
pub fn shape(input: &StationInput, r: f64, outer: bool) -> Option<Shape> {
    let h = input.t / 2.0;
    let (wx, wy) = (input.delta + h, input.l1p);
    let reach = r + h;
    let dy = wy - r;
    let dx2 = reach * reach - dy * dy;
    if dx2 < 0.0 {
        return None;
    }
    let dx = if outer { dx2.sqrt() } else { -dx2.sqrt() };
    let (cx, cy) = (wx - dx, r);
    // contact point on the segment between centres
    let k = r / reach;
    let (px, py) = (cx + k * (wx - cx), cy + k * (wy - cy));
    let start = -PI / 2.0;
    let sweep1 = ((py - cy).atan2(px - cx) - start).rem_euclid(TAU);
    let a_wire = (py - wy).atan2(px - wx).rem_euclid(TAU);
    let sweep2 = a_wire - PI;
    if sweep2 < -1e-12 {
        return None;
    }
    Some(Shape { r, d: cx, cy, wire: (wx, wy, h), sweeps: (start, sweep1, a_wire) })
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Walks the family from a flat arc on the rim side (`s = 0`) through the
/// smallest admissible arc (`s = 1`) to the arc whose top reaches the wire
/// centre height (`s = 2`), where the wrap is complete.
pub struct Family<'a> {
    input: &'a StationInput,
    r_min: f64,
}

impl<'a> Family<'a> {
    pub fn new(input: &'a StationInput) -> Self {
        let h = input.t / 2.0;
        Self { input, r_min: ((input.l1p - h) / 2.0).max(0.0) }
    }

    pub fn at(&self, s: f64) -> Shape {
        let l1p = self.input.l1p;
        let (r, outer) = if s <= 1.0 {
            (l1p - s * (l1p - self.r_min), true)
        } else {
            (self.r_min + (s - 1.0) * (l1p / 2.0 - self.r_min), false)
        };
        // nudge off the tangent-degenerate end so the square root stays real
        shape(self.input, r.max(self.r_min * (1.0 + 1e-15)), outer)
            .or_else(|| shape(self.input, self.r_min * (1.0 + 1e-12), outer))
            .expect("admissible arc")
    }
}

pub fn solve(input: &StationInput) -> OracleSolution {
    let fam = Family::new(input);
    let grid: Vec<f64> = (0..=SCAN_POINTS).map(|i| 2.0 * i as f64 / SCAN_POINTS as f64).collect();
    let d_at = |s: f64| fam.at(s).d;
    // d is cheap, the polyline length is not: scan lengths on a coarser grid
    let coarse: Vec<f64> = (0..=LENGTH_SCAN_POINTS).map(|i| 2.0 * i as f64 / LENGTH_SCAN_POINTS as f64).collect();
    let i = grid.windows(2).position(|w| d_at(w[0]) < 0.0 && d_at(w[1]) >= 0.0).expect("contact start");
    let s_ns = bisect(grid[i], grid[i + 1], d_at);
    let l_ns = fam.at(s_ns).length();
    let end = fam.at(2.0);
    let l_sd = end.length();
    let l1 = input.l1;
    let (state, d) = if l1 < l_ns {
        (ContactState::NonContact, 0.0)
    } else if l1 >= l_sd {
        (ContactState::DoubleContact, end.d + 0.5 * (l1 - l_sd))
    } else {
        let len_at = |s: f64| fam.at(s).length() - l1;
        let j = coarse
            .windows(2)
            .position(|w| w[1] >= s_ns && len_at(w[0].max(s_ns)) <= 0.0 && len_at(w[1]) > 0.0)
            .expect("length bracket");
        let s = bisect(coarse[j].max(s_ns), coarse[j + 1], len_at);
        (ContactState::SingleContact, fam.at(s).d.max(0.0))
    };
    OracleSolution { state, d: d.min(input.radius), l_ns, l_sd }
}
