//! Std companion to the core library: experiment orchestration, file
//! formats (CSV, JSON manifest, SVG charts), and the verification suite
//! behind the command-line front end.

pub mod formats;
pub mod predict;
pub mod runner;
pub mod verify;
