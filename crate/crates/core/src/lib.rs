//! Workload balancing for last-mile delivery crews: assign packages to
//! workers so that their total working days (handling plus walking a route)
//! come out as equal as possible.
//!
//! Start with [`io::generate_instance`] or [`io::load_instance`], score
//! assignments with [`objective::evaluate`], and run any solver through
//! [`solvers::solve`]. [`bench`](mod@bench) repeats seeded runs and holds the
//! exhaustive oracle for tiny instances.

// `!(x >= 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod clustering;
pub mod error;
pub mod io;
pub mod model;
pub mod objective;
pub mod rng;
pub mod routing;
pub mod solvers;

pub use error::{Error, Result};
