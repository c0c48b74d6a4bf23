//! Discrete-event simulation substrate shared by the polling and DCF
//! simulators.

mod calendar;
mod replicate;
mod rng;
mod stats;

pub use calendar::EventCalendar;
pub use replicate::{replicate, run_replications};
pub use rng::{sample_exponential, RngStream};
pub use stats::{ci95, student_t_quantile, ConfidenceInterval, ReplicationStats};
