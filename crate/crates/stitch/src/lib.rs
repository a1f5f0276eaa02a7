//! File formats, a thread pool, a spill store and the command line for
//! [`drat_stitch_core`].

pub mod cli;
pub mod io;
pub mod runtime;
