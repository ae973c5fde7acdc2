//! Theory files and the `rtk` command surface.

pub mod commands;
pub mod dot;
pub mod model;
pub mod parse;
pub mod print;

pub use commands::{run, Outcome};
pub use model::Model;
pub use parse::parse_theory;
pub use print::print_model;
