//! Side-by-side solvers for the free and generalized Schrödinger equations and
//! the Euler–Bernoulli beam/plate equations, with numerical checks that one
//! complex Schrödinger solution is the same object as two real beam solutions
//! with coupled initial data.
//!
//! Module map:
//!
//! * [`spectral`]: periodic grids, fields, unitary DFT, spectral Laplacian.
//! * [`schrodinger`]: exact free propagation `e^{-ik²t}`.
//! * [`euler_bernoulli`]: beam evolution, coupled data, equivalence report.
//! * [`symplectic`]: `(u, v)` Hamiltonian form, exact and leapfrog flows.
//! * [`hamiltonian`]: `H = -Δ + V`, `H = -Δ_g`, `cos(Ht)`/`sin(Ht)` propagation.
//! * [`eigenmodes`]: beam natural frequencies versus box energies.
//! * [`two_slit`]: barrier scattering computed on both sides of the equivalence.
//! * [`padic`]: the same construction over a finite window of `Q_p`.

pub mod checks;
pub mod eigenmodes;
pub mod error;
pub mod euler_bernoulli;
pub mod hamiltonian;
pub mod initial_data;
pub mod numerics;
pub mod padic;
pub mod schrodinger;
pub mod spectral;
pub mod symplectic;
pub mod two_slit;

pub use error::{Error, Result};
