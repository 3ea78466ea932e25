//! Desk-scale workbench for query-counted property testing of bounded
//! out-degree digraphs and integer sequences.

pub mod dualpoly;
pub mod error;
pub mod graph;
pub mod harness;
pub mod instances;
pub mod lin2;
pub mod numeric;
pub mod testers;

pub use error::{Error, Result};
