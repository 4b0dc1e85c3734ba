//! Exact scalars, Laurent polynomials in `t`, truncated power series in `h`,
//! and the substitution `t = e^h`.

mod alexander;
mod laurent;
mod parse;
mod rational;
mod series;

pub use alexander::{deg_z, is_in_z, AlexanderPoly};
pub use laurent::{LaurentFraction, LaurentPoly};
pub use parse::{parse_laurent, parse_ratio_expr, parse_ratio_expr_at, RatioExpr};
pub use rational::{format_rational, parse_rational, rat, Rational};
pub use series::{exp_substitute, series_invert, HSeries};

/// Default truncation order for series in `h`.
pub const DEFAULT_ORDER: usize = 7;
