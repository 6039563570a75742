//! Wilson loops for two-dimensional Yang-Mills theory on the plane.
//!
//! The crate computes Wilson-loop expectation values for loops traced on
//! planar graphs: at finite N by Monte Carlo over independent heat-kernel
//! loop variables, and at N = infinity by the master-field recursion driven
//! by per-crossing area-derivative identities. Loops and graphs live in
//! [`planar_map`]; U(N) numerics in [`group_core`]; the measure, sampler and
//! gauge machinery in [`ym_measure`]; identity checks in [`mm_verify`]; the
//! large-N solver in [`master_field`]; and the file format / report layer in
//! [`cli`].

pub mod group_core;
pub mod master_field;
pub mod planar_map;
pub mod ym_measure;
