//! Two-qubit entanglement under amplitude and phase damping, with and
//! without local error correction.
//!
//! Modules build on each other bottom-up: [`qmat`] (dense complex linear
//! algebra), [`channels`] (Kraus maps), [`codes`] (syndrome structure of the
//! error-correcting codes), [`pipeline`] (encode, noise, recover), [`metrics`]
//! (concurrence and fidelity), [`analytic`] (closed forms and onsets) and
//! [`cli`] (sweeps and file output).

pub mod analytic;
pub mod channels;
pub mod cli;
pub mod codes;
pub mod error;
pub mod metrics;
pub mod pipeline;
pub mod qmat;

pub use error::{Error, Result};
