//! Library surface of the beamsweep CLI: argument merging, CSV output,
//! command implementations and the sweep-time equivalence validator.

pub mod args;
pub mod commands;
pub mod output;
pub mod validate;
