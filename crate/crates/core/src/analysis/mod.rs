//! Labels, statistics and 2D renderings of enumeration results.

mod label;
mod render;
mod stats;

pub use label::{argmax, label_regions, LabeledRegion};
pub use render::{render_svg_2d, RenderMode, RenderSpec};
pub use stats::{region_statistics, RegionStatistics};
