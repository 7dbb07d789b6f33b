//! Expression front end shared by the binary and its tests.

pub mod ast;
pub mod lower;
pub mod output;
pub mod parser;
