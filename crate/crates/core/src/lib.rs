//! Fast Johnson-Lindenstrauss transforms built from a sign-randomized
//! subsampled Walsh-Hadamard stage followed by a small dense sign matrix,
//! with a blocked fast-multiply batch pipeline and a statistical
//! verification suite.
//!
//! ```
//! use fastjl_core::mat::gaussian_matrix;
//! use fastjl_core::matmul::MultiplyPlan;
//! use fastjl_core::transform::{plan_dimensions_capped, ComposedTransform};
//! use fastjl_core::verify::distortion_report;
//!
//! let points = gaussian_matrix(256, 100, 7);
//! let plan = plan_dimensions_capped(100, 0.5, 0.1, 256, 6.0, 1.0).unwrap();
//! let transform = ComposedTransform::sample(&plan, 42).unwrap();
//! let embedded = transform.apply_batch(&points, &MultiplyPlan::naive()).unwrap();
//! assert_eq!(embedded.rows(), plan.m);
//! let report = distortion_report(&transform, &points, plan.epsilon).unwrap();
//! assert!(report.max_distortion < 1.0);
//! ```

pub mod calibrate;
pub mod error;
pub mod hadamard;
pub mod io;
pub mod mat;
pub mod matmul;
pub mod rng;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
