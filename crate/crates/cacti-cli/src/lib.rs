//! Library half of the command-line tool: the document format and the
//! checkers shared between `verify`, `selftest` and the acceptance tests.

pub mod checks;
pub mod doc;
pub mod views;
