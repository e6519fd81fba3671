//! Order parameters and pattern metrics for particle and grid outputs.

pub mod classify;
pub mod field;
pub mod order;
pub mod period;

pub use classify::{classify_pattern, Classification, Pattern, PatternMetrics, PatternThresholds};
pub use field::FieldSample;
pub use order::{mean_direction, polar_order, polar_order_weighted, OrderTimeSeries};
pub use period::{detect_period, PeriodEstimate, PeriodOptions};
