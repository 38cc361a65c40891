//! Paths in the punctured plane and continuous branches of `N`-th roots
//! along them.

mod branch;
mod construct;
mod path;

pub use branch::{total_arg_change, BranchTrace, MAX_STEP_ARG};
pub use construct::{build_gamma, default_epsilon, min_pairwise_distance, pochhammer_contour};
pub use path::{Path, PathParam, Piece, Segment};
