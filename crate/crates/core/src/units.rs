//! Conversions between SI and the units used at the I/O boundary
//! (mm, mm², mm³, L/min, kPa).

pub const MM: f64 = 1e-3;
pub const MM2: f64 = 1e-6;
pub const MM3: f64 = 1e-9;
pub const LPM: f64 = 1e-3 / 60.0;
pub const KPA: f64 = 1e3;

#[inline]
pub fn mm(v: f64) -> f64 {
    v * MM
}

#[inline]
pub fn to_mm(v: f64) -> f64 {
    v / MM
}

#[inline]
pub fn mm2(v: f64) -> f64 {
    v * MM2
}

#[inline]
pub fn to_mm2(v: f64) -> f64 {
    v / MM2
}

#[inline]
pub fn mm3(v: f64) -> f64 {
    v * MM3
}

#[inline]
pub fn to_mm3(v: f64) -> f64 {
    v / MM3
}

#[inline]
pub fn lpm(v: f64) -> f64 {
    v * LPM
}

#[inline]
pub fn to_lpm(v: f64) -> f64 {
    v / LPM
}

#[inline]
pub fn kpa(v: f64) -> f64 {
    v * KPA
}

#[inline]
pub fn to_kpa(v: f64) -> f64 {
    v / KPA
}
