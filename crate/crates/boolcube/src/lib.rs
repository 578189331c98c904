//! Exact analysis of Boolean functions on `{-1,1}^n` and of halfspaces with
//! rational weights.
//!
//! Truth tables, Fourier spectra, influences and vertex boundaries are exact
//! rationals. Halfspace tails are computed from the exact distribution of
//! `a·x`, so tail probabilities, interval probabilities and decay thresholds
//! carry no rounding.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```text
//! cargo run --example fourier_spectrum
//! cargo run --example influence_boundary
//! cargo run --example halfspace_tail
//! cargo run --example local_chernoff
//! cargo run --example flips
//! cargo run --example level_k
//! cargo run --example correlation
//! cargo run --example verify_suite
//! ```

pub mod bfcore;
pub mod check;
pub mod chernoff;
pub mod correlate;
pub mod error;
pub mod flips;
pub mod halfspace;
pub mod harness;
pub mod influence;
pub mod levelk;
pub mod rational;
pub mod spectral;
pub mod tail;

pub use bfcore::{BooleanFunction, FunctionSpec};
pub use check::{CheckRecord, Num, Outcome};
pub use error::{CubeError, Result};
pub use halfspace::Halfspace;
pub use rational::Rational;
pub use spectral::{fwht_spectrum, FourierSpectrum};
pub use tail::{DecayThresholds, Interval, TailDistribution};
