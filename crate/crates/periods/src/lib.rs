//! A symbolic-numeric calculator for periods: complex numbers expressible as
//! volumes of bounded semi-algebraic domains with rational data.
//!
//! The crate builds explicit volume witnesses for a gallery of constants
//! (pi, log q, pi*log 2, pi^2, even zeta values, square roots, rationals),
//! combines them through a ring algebra that tracks upper bounds on the
//! minimal dimension needed to realize each number, verifies every
//! construction numerically by deterministic Monte Carlo rejection sampling,
//! integrates univariate rational functions in closed form, and evaluates
//! degree-based zeta bounds.
//!
//! Module map:
//! - [`exactnum`]: arbitrary-precision rationals, quadratic surds, Bernoulli numbers
//! - [`semialg`]: multivariate polynomials, cells, domains, geometric transforms
//! - [`witness`]: period witnesses, the degree-bound ledger, registry, reports
//! - [`mcvol`]: deterministic Monte Carlo volume estimation
//! - [`ratint`]: exact definite integration of rational functions
//! - [`zeta`]: the zeta function of a period, from power-degree bounds
//! - [`expr`]: the expression language and witness builder
//! - [`verify`]: named invariant suites used by the CLI and the test suite

pub mod exactnum;
pub mod expr;
pub mod mcvol;
pub mod ratint;
pub mod semialg;
pub mod stream;
pub mod verify;
pub mod witness;
pub mod zeta;
