//! # splitrips
//!
//! Vietoris–Rips homology of finite metric spaces through split decompositions.
//!
//! The crate computes homology and persistence of `VR_r(X)` for a finite metric
//! space `X` and exploits three kinds of structure when it is present:
//!
//! * **Circular decomposable metrics** ([`circular`]): the metric is a nonnegative
//!   combination of the circular splits of a polygon. When the turning function
//!   `σ` of the weight matrix satisfies the star property the metric is monotone,
//!   every VR 1-skeleton is a cyclic graph, and the homotopy type is read off a
//!   winding fraction ([`cyclic`]).
//! * **Non-monotone circular metrics** ([`mv`]): the VR complex is split into a
//!   cyclic component and the subcomplex spanned by the offending edges, and the
//!   Mayer–Vietoris sequence assembles the homology from the pieces.
//! * **Block structure** ([`block`]): when the metric is additive across a
//!   bipartition (a virtual cut point), VR homology in positive degrees is the
//!   direct sum of the homology of the augmented parts, and `H_0` follows from a
//!   merge rule.
//!
//! Every fast route is checked against a brute-force oracle ([`complex`],
//! [`homology`], [`persistence`]) that builds the complex and reduces boundary
//! matrices over `Q`, `GF(2)` or `GF(p)`.
//!
//! The split machinery of Bandelt and Dress ([`split`]) provides isolation indices,
//! d-split enumeration, weak compatibility and the split-prime residue.
//!
//! ## Conventions
//!
//! * Distances and weights are exact rationals ([`number::Rational`]).
//! * Library indices are 0-based; files and reports are 1-based.
//! * `VR_r` uses the open convention `diam < r`; barcodes are stored in the closed
//!   convention `diam <= r` so that endpoints are actual distances.
//!
//! ## Example
//!
//! ```
//! use splitrips::{circular, fixtures};
//!
//! let hexagon = fixtures::hexagon();
//! let (order, cd) = circular::recognize_circular(&hexagon).unwrap().expect("circular");
//! assert_eq!(order.len(), 6);
//! let sigma = circular::compute_sigma(&cd);
//! let cert = circular::compute_m(&cd, &sigma).unwrap();
//! assert!(cert.star_holds);
//! ```

pub mod bench;
pub mod block;
pub mod circular;
pub mod complex;
pub mod cyclic;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod metric;
pub mod mv;
pub mod number;
pub mod persistence;
pub mod pipeline;
pub mod split;

pub use error::{Error, Result};
pub use metric::DistanceMatrix;
pub use number::Rational;
