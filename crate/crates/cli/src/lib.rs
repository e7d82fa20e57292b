//! Implementation of the `trimfit` command-line tool; the binary in
//! `main.rs` is a thin argument-parsing shell over these modules.

pub mod bench;
pub mod error;
pub mod example1;
pub mod fit;
pub mod manifest;
pub mod plotdata;
pub mod table;
