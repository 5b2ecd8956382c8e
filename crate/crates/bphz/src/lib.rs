//! File formats, expression syntax and verification suites on top of
//! `bphz-core`. The `bphz` binary is a thin front end over this crate.

pub mod json;
pub mod parse;
pub mod verify;
