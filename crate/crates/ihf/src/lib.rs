//! Exact computational topology on triangulated closed manifolds.
//!
//! The library decides three families of questions, always with
//! machine-checkable certificates:
//!
//! * **Intrinsic harmonicity** — does a closed cochain admit positive
//!   diagonal Hodge-star weights (a combinatorial metric) making it harmonic?
//!   The positive answer is a weight vector; the negative answer is an exact
//!   Farkas certificate.
//! * **Cross-sections of volume-preserving flows** — a closed codimension-one
//!   cochain is read as a divergence-free flux on the dual graph; the library
//!   either finds an integral dual cocycle positive along the flow or exhibits
//!   a nonzero flow-invariant circulation with vanishing homology class.
//! * **Flatness of circle bundles** — a bundle is presented by its base and an
//!   integral Euler 2-cocycle; flatness is equivalent to the Euler class being
//!   torsion, and the library cross-checks the equivalent formulations
//!   (nonvanishing of the pulled-back volume class, nontriviality of the
//!   fiber class, intrinsic harmonicity on an explicit total space).
//!
//! Everything is exact: rational arithmetic throughout, integer Smith normal
//! forms for homology, and rational simplex with Bland's rule for
//! feasibility. No floating point appears anywhere.

pub mod bundles;
pub mod cochain;
pub mod complex;
pub mod dec;
pub mod dynamics;
pub mod error;
pub mod harmonic;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod num;

pub use cochain::Cochain;
pub use complex::{DualStructure, SimplicialComplex};
pub use error::{Error, Result};
pub use num::{Q, Z};
