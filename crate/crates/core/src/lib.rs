//! Composite macro-financial resilience index engine.
//!
//! A country-year [`panel`] feeds three pillars ([`irs`], [`lnsr`],
//! [`ifc`]), each a missing-aware weighted mean of robustly [`scaling`]
//! scored components. The [`composite`] module combines pillars with a
//! weighted geometric mean and decomposes log changes; [`scenario`]
//! projects stylised pathways. [`pipeline`] runs everything over a panel
//! and [`report`] renders deterministic tables.

pub mod composite;
pub mod config;
pub mod error;
pub mod ifc;
pub mod irs;
pub mod lnsr;
pub mod manifest;
pub mod numerics;
pub mod panel;
pub mod pipeline;
pub mod reason;
pub mod report;
pub mod scaling;
pub mod scenario;
pub mod series;

pub use error::{Error, Result};
pub use reason::{Cell, Reason};
pub use series::TimeSeries;
