//! Document format, expression syntax and the commands behind the binary.

pub mod document;
pub mod expr;
pub mod commands;
