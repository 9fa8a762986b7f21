//! Dataset loading, the HTTP service, and helpers shared by the `xplore`
//! binary.

pub mod data;
pub mod service;
