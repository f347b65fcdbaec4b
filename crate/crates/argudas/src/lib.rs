//! HTTP service and command line for the argudas annotation store.

pub mod cli;
pub mod load;
pub mod render;
pub mod service;
