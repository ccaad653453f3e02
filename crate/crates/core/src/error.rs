use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A scalar left the domain where the model is defined (e.g. `log(u/r₀)` with `u ≤ 0`).
    #[error("{quantity} must be positive, got {value}")]
    NonPositive { quantity: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(&'static str),

    /// The Euler–Lagrange first integral admits no smooth periodic solution.
    #[error("no smooth periodic solution: {0}")]
    NoPeriodicSolution(String),

    #[error("branch parameters outside admissible window: {0}")]
    Branch(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(&'static str),

    /// `1/Q(v)` is needed but the profile touches or crosses the fibre radius.
    #[error("mobility vanishes or changes sign at node {index} (v = {value})")]
    SingularMobility { index: usize, value: f64 },

    #[error("singular linear system (pivot {pivot})")]
    SingularMatrix { pivot: usize },

    #[error("Newton iteration failed after {iterations} iterations (residual {residual:e})")]
    NewtonFailed { iterations: usize, residual: f64, best: Vec<f64> },

    /// Time step fell below `dt_min`; carries the last accepted state.
    #[error("time step underflow at t = {t} (dt = {dt:e})")]
    StepUnderflow { t: f64, dt: f64, values: Vec<f64> },

    #[error("quadrature did not reach tolerance: {0}")]
    Quadrature(&'static str),

    #[error("root bracket invalid: f(a) = {fa}, f(b) = {fb}")]
    Bracket { fa: f64, fb: f64 },
}
