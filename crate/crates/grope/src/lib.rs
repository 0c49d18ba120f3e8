//! IO, file formats, the result cache and the `grope` command line on top
//! of [`grope_core`].

pub mod cli;
pub mod corpus;
pub mod format;
pub mod record;

pub use cli::run;
pub use record::{Cache, SpaceRecord};
