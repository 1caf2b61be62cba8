pub mod cli;
pub mod embed;
pub mod groups;
pub mod linalg;
pub mod lp;
pub mod metric;
pub mod scan;
pub mod sdp;
pub mod spectral;
pub mod warp;
