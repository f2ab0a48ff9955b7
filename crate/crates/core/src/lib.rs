//! Learning delta lenses with amendment over finite categories.

pub mod cli;
pub mod compose;
pub mod fincat;
pub mod fixtures;
pub mod learner;
pub mod lens;
pub mod modelspace;
pub mod pfun;
