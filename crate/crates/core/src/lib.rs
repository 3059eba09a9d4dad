//! Simulation of the exponential corner growth model.
//!
//! The crate builds everything from one last-passage kernel: i.i.d. `Exp(1)`
//! bulk fields, point-to-point passage tables and geodesics, increment
//! stationary processes with boundary weights, finite-horizon Busemann
//! windows with their dual weights and dual geodesics, and Monte Carlo
//! experiments over many independent replicas.
//!
//! ```
//! use cornergrowth::{generate_bulk, lpp_backward, trace_geodesic, make_stream};
//! use cornergrowth::{LatticePoint, LatticeRect};
//!
//! let rect = LatticeRect::from_origin(LatticePoint::new(20, 20)).unwrap();
//! let bulk = generate_bulk(rect, &mut make_stream(1, 0)).unwrap();
//! let table = lpp_backward(&bulk, rect.hi()).unwrap();
//! let path = trace_geodesic(&table, rect.lo()).unwrap();
//! assert_eq!(path.end(), rect.hi());
//! ```

pub mod busemann;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod lattice;
pub mod lpp;
pub mod random;
pub mod stationary;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{robust_floor, scale_two_thirds, GeodesicPath, LatticePoint, LatticeRect, Step};
pub use lpp::*;
pub use random::{make_stream, sample_exp, ExpRate, RngStream};
pub use stationary::*;
pub use busemann::*;
