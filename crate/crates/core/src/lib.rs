//! Exact construction and certification of explicit bases for logarithmic
//! derivation modules of type A braid, Catalan and Shi arrangements.

pub mod arrangement;
pub mod basis;
pub mod cli;
pub mod discrete;
pub mod error;
pub mod family;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod serial;
pub mod verify;
