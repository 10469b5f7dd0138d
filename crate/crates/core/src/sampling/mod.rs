//! Point streams, acceptance–rejection batches, domain bracketing and
//! direct conditional sampling.

mod batch;
mod bracket;
mod inverse;
mod sobol;
mod stream;

pub use batch::{draw_batch, PairedDesign, SampleBatch};
pub use bracket::{bracket_domain, bracket_domain_with_budget, BoundingBox, DEFAULT_NODE_BUDGET};
pub(crate) use bracket::{check_budget, unflatten};
pub use inverse::{
    draw_conditional_batch, draw_conditional_design, sequential_conditional_sample,
    triangle_inverse_cdf, triangle_inverse_cdfs, ConditionalInverseCdf,
};
pub use sobol::{Sobol, MAX_DIMENSION as MAX_SOBOL_DIMENSION};
pub use stream::{PointStream, StreamDescriptor, StreamKind};
