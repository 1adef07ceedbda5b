//! Certified evaluation of the bound functions `m, m', T, A, m̃, Δ, P, Q, R,
//! U` of the Euler genus, with `q = 9073/9072`. Integers are exact; the
//! astronomically large values are carried as `log2` intervals of dyadic
//! fixed-point numbers with outward rounding.

pub mod interval;
pub mod log;
pub mod tower;

pub use interval::Interval;
pub use tower::{
    asymptotic_report, constants, constants_with, f_of, identities, BoundValue, BoundsError, Constants, Identities, Log2Value, Options,
    ReportRow, Row, Q,
};
