//! Floquet spectra of the periodically driven two-level system
//!
//! ```text
//! H(t) = (ε/2) σz + β σx + α σz cos(Ωt)
//! ```
//!
//! and the hidden time-nonlocal parity `J(t) = Q(t) P` that shows up at
//! integer detuning `ε = nΩ`. `P` shifts time by half a period.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: parameters, Pauli matrices, Fourier series of 2×2 operators.
//! * [`linalg`]: Hermitian eigendecomposition, SVD null spaces and a banded
//!   eigenvalue path used for large parameter scans.
//! * [`sambe`]: the truncated Floquet Hamiltonian, quasienergies, Floquet
//!   modes, splitting maps and a one-period propagator used as an oracle.
//! * [`symmetry_analytic`]: `Q(t)` from the scalar recurrence for `λ_k`, `μ_k`.
//! * [`symmetry_numeric`]: `Q(t)` and the parities recovered directly from
//!   Floquet-mode sidebands through a homogeneous null-space problem.
//! * [`io`]: CSV / JSON emitters for the datasets produced above.

pub mod error;
pub mod io;
pub mod linalg;
pub mod model;
pub mod sambe;
pub mod symmetry_analytic;
pub mod symmetry_numeric;

pub use error::{Error, Result};
pub use model::{
    pauli, ComplexMatrix2, FourierOperatorSeries, HamiltonianParams, Spinor, C64,
    DEFAULT_INTEGER_DETUNING_TOL,
};
pub use sambe::{FloquetMode, SplittingGrid, Spectrum};
pub use symmetry_analytic::RecurrenceSolution;
pub use symmetry_numeric::{ParitySolution, SpectrumRow};
