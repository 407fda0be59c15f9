//! Command-line front end for the `credal` library.

pub mod cases;
pub mod commands;
pub mod properties;
pub mod render;
