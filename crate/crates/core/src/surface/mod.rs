//! Closed surfaces glued from pants: gluing graphs, the surface-group
//! presentation with marked curves, and holonomy from complex
//! Fenchel–Nielsen coordinates.

pub mod graph;
pub mod holonomy;
pub mod presentation;
pub mod word;

pub use graph::{twist_flow, CuffRef, FnCoordinates, Gluing, PantsGraph};
pub use holonomy::{Representation, Surface, BRANCH_MARGIN};
pub use presentation::{build_presentation, Presentation};
pub use word::{Letter, Word};
