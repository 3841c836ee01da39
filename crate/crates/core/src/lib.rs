//! Holonomy representations of closed-surface groups from complex
//! Fenchel–Nielsen coordinates, together with numerical checks of the
//! Goldman symplectic structure on quasi-Fuchsian space.
//!
//! The crate is organised bottom-up:
//!
//! * [`moebius`]: SL₂(ℂ) matrices, points of ℂP¹, geodesics, complex lengths.
//! * [`hexagon`]: right-angled hexagons with complex sides.
//! * [`pants`]: pair-of-pants representations with prescribed cuff lengths.
//! * [`surface`]: gluing graphs, group presentations, holonomy.
//! * [`cocycle`]: tangent cocycles, the Goldman pairing, Gram matrices.
//! * [`schwarzian`]: the Schwarzian derivative and its cocycle law.
//! * [`config`] and [`limit_set`]: input files and limit-set point clouds.

pub mod cocycle;
pub mod config;
pub mod error;
pub mod hexagon;
pub mod limit_set;
pub mod moebius;
pub mod pants;
pub mod schwarzian;
pub mod surface;

pub use error::{Error, Result};
pub use moebius::{complex_distance, ComplexLength, Kind, Moebius, OrientedGeodesic, ProjectivePoint, C64};
