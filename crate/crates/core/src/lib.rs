pub mod audio;
pub mod cli;
pub mod corpus;
pub mod embed;
pub mod error;
pub mod fixtures;
pub mod metrics;
pub mod pipeline;
pub mod report;
pub mod service;
pub mod text;

pub use error::{Error, Result};
