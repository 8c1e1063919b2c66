pub mod cli;
pub mod error;
pub mod exactnum;
pub mod moments;
pub mod rulefile;
pub mod rulesdb;
pub mod solver;
pub mod system;
pub mod triangle;

pub use error::{Error, Result};
