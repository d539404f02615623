//! Command-line front end for the `fracjet` engine.

pub mod commands;
pub mod model;
pub mod report;
pub mod selftest;
