//! Visibility counting among non-crossing segments in the plane.

pub mod approx;
pub mod arrangement;
pub mod bench;
pub mod error;
pub mod exact;
pub mod frame;
pub mod generate;
pub mod kernel;
pub mod scene;
pub mod treap;
pub mod vsp;

pub use error::{Error, Result};
pub use kernel::{Line, Orientation, Point, Rational, Ray, Segment};
pub use scene::{load_scene, save_scene, validate_nondegenerate, DegeneracyReport, Scene};
