//! Analytical models for compliant deployable suction grippers.
//!
//! The gripper body is a compression spring sealed in a thin film between
//! two end-caps; a concentric spring-lined air tube feeds a suction cup.
//! Both chambers share one vacuum source, so the body deploys while air
//! streams in through the open cup and retracts as soon as the cup seals.
//!
//! This crate holds the pure numerical side and builds without `std`:
//!
//! - [`types`]: design records, unit conversion and parameter validation
//! - [`pneumatics`]: Reynolds number, friction factor and line pressure drop
//! - [`film`]: film contact states, contact distance and effective body area
//! - [`picking`]: picking-distance range, lifting/holding forces, pick predicate
//! - [`cycle`]: quasi-static pick-and-place cycle simulation
//!
//! All quantities are SI internally. [`units`] is the only place that knows
//! about millimetres, litres per minute or kilopascals.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cycle;
pub mod error;
pub mod film;
pub mod math;
pub mod picking;
pub mod pneumatics;
pub mod types;
pub mod units;

pub use error::{Error, Result};
pub use types::{GripperDesign, ObjectSpec, PneumaticLine, SpringParams, Violation};

/// Standard gravity (m/s²).
pub const GRAVITY: f64 = 9.81;
