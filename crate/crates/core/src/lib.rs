//! Outage analysis of optimum combining (MMSE) antenna arrays in Poisson
//! fields of Rayleigh-faded interferers.
//!
//! * [`analytic`]: closed-form outage, regime special cases, SIR moments and
//!   spatial throughput.
//! * [`contention`]: optimum ALOHA contention density and peak throughput.
//! * [`linalg`]: small Hermitian linear algebra for the simulator.
//! * [`field`]: Monte Carlo simulator of the physical model, including
//!   MRC / ZF / PZF reference receivers and the fading-only conditional CDF.
//! * [`harness`]: scenario configs, experiment runners and CSV output used by
//!   the `ocfield` binary.

pub mod analytic;
pub mod contention;
pub mod error;
pub mod field;
pub mod harness;
pub mod linalg;

pub use analytic::{DeltaConst, SystemParams};
pub use error::{Error, Result};
