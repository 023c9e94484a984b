//! Expressions, Taylor jets and surface charts.

pub mod chart;
pub mod expr;
pub mod jet;

pub use chart::{Convention, Definition, Domain, SecondJets, SecondValues, SurfaceChart, SurfaceKind};
pub use expr::{Expr, Func, Node, Scalar};
pub use jet::{Jet, MAX_ORDER};

use crate::error::{EvalError, Result};

/// Parses `text` over the declared parameters.
pub fn parse_expression(text: &str, params: &[&str]) -> Result<Expr, crate::error::ParseError> {
    Expr::parse(text, params)
}

/// Order-4 jet of a two-parameter expression at `(x, y)`.
pub fn eval_jet(expr: &Expr, x: f64, y: f64) -> Result<Jet, EvalError> {
    eval_jet_order(expr, x, y, 4)
}

pub fn eval_jet_order(expr: &Expr, x: f64, y: f64, order: usize) -> Result<Jet, EvalError> {
    expr.eval(&[Jet::var_x(x, order), Jet::var_y(y, order)])
}

/// Convenience wrapper around [`SurfaceChart::lagrangean_residual`].
pub fn lagrangean_residual(chart: &SurfaceChart, x: f64, y: f64) -> Result<f64> {
    chart.lagrangean_residual(x, y)
}
