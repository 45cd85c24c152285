//! Exact integral homology of links of weighted homogeneous hypersurface
//! singularities.
//!
//! The pipeline starts from a [`WeightSystem`] `(w, d)`:
//!
//! * [`divisor`] implements the ring spanned by `Λ_n = div(t^n - 1)`;
//! * [`alexander`] builds the divisor of the Alexander polynomial, its
//!   product form, the middle Betti number and `Δ(±1)`;
//! * [`torsion`] runs Orlik's algorithm for the torsion subgroup;
//! * [`decompose`] recognises invertible polynomials (BP, chain and cycle
//!   blocks), the class where Orlik's algorithm is known to be valid;
//! * [`covers`] handles branched covers `z^p + f` and their sphere type;
//! * [`classify`] assembles link records and finds twins;
//! * [`catalog`] reads weight catalogs and writes result tables;
//! * [`oracle`] holds brute-force reference implementations.
//!
//! All arithmetic is exact.

pub mod alexander;
pub mod catalog;
pub mod classify;
pub mod covers;
pub mod decompose;
pub mod divisor;
pub mod error;
pub mod oracle;
pub mod torsion;
pub mod weights;

pub use error::{Error, Result};
pub use weights::WeightSystem;
