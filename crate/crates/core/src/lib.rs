//! Traveling waves of the defocusing quasilinear Gross-Pitaevskii equation
//!
//! ```text
//! i Psi_t = Psi_xx + Psi (1 - |Psi|^2) + kappa Psi (1 - |Psi|^2)_xx
//! ```
//!
//! with nonzero background `|Psi| -> 1`. A traveling wave `Psi(x, t) = u(x - c t)`
//! is described by its intensity `eta = 1 - |u|^2` and phase `theta`.
//!
//! * [`regions`] classifies `(c, kappa)` and lists the waves that exist there.
//! * [`closedforms`] evaluates the explicit implicit-profile functions and antiderivatives.
//! * [`profiles`] samples solitons, black solitons, cuspons, compactons and composite waves.
//! * [`observables`] computes energy and momentum by quadrature and in closed form.
//! * [`criticals`] finds the critical dispersion and speeds and the energy minimization curve.
//! * [`evolve`] integrates the hydrodynamic form of the equation in time.
//! * [`cli`] is the command line front end.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod closedforms;
pub mod criticals;
pub mod error;
pub mod evolve;
pub mod numerics;
pub mod observables;
pub mod profiles;
pub mod regions;

pub use error::{Error, Result};
pub use regions::{classify, Params, Region, WaveKind};
