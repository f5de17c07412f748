//! Translation inference on graphs and its compilation into convolution
//! weight-sharing schemes, strided downscaling plans and data augmentation.
//!
//! The pipeline: infer a graph from signals ([`inference`]), find local
//! translations around every vertex ([`translation`]), propagate an indexing
//! kernel into a global family of proxy-translations ([`proxy`]), then compile
//! that family into a convolution scheme ([`scheme`]), a stride plan
//! ([`downscale`]) or augmentation operators ([`augment`]).

pub mod augment;
pub mod downscale;
pub mod error;
pub mod graph;
pub mod grid;
pub mod inference;
pub mod proxy;
pub mod scaling;
pub mod scheme;
pub mod signals;
pub mod translation;

pub use error::{Error, Result};
pub use graph::{Graph, Relabeling, VertexSet};
