//! JSON documents and the `gerbes` command-line tool for `gerbes-core`.

pub mod cli;
pub mod json;
