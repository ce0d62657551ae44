//! File formats, manifest ingestion, corpus generation and the command-line
//! front end for `protocheck-core`.

pub mod cli;
pub mod corpus;
pub mod demo;
pub mod json;
pub mod lts_io;
pub mod manifest;
pub mod sgd;

pub use cli::run;
pub use manifest::{emit_manifest, parse_mcp_manifest, ManifestError};
pub use sgd::{emit_sgd_schema, parse_sgd_schema, SgdError};
