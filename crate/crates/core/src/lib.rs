//! Process-calculus core for agent tool protocols.
//!
//! Schema-guided dialogue services (intents and slots) and MCP servers
//! (tools, resources, prompts) are both modelled as terms of one process
//! language. From a term this crate builds a finite labelled transition
//! system, maps terms across the two protocol families, decides strong and
//! weak bisimilarity, type-checks the five MCP⁺ metadata principles and
//! verifies ordering and confinement properties over every execution path.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, manifest
//! ingestion and the command-line front end live in the `protocheck` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod equivalence;
pub mod fixtures;
pub mod mapping;
pub mod registry;
pub mod report;
pub mod security;
pub mod semantics;
pub mod term;
pub mod typecheck;

pub use equivalence::{
    bisimilar, brute_force_bisim, normalize_label, trace_equivalent, ActionClass, BisimMode,
    EquivalenceVerdict, NormalizeOptions,
};
pub use mapping::{phi, phi_inverse, phi_plus, phi_plus_inverse, round_trip_report, MapOutcome};
pub use registry::{McpRegistry, SgdRegistry};
pub use report::{Status, VerificationReport};
pub use semantics::{build_lts, mcp_step, sgd_step, traces, ExploreConfig, Lts, TransitionLabel};
pub use term::{
    canonicalize, free_names, parse_term, substitute, Calculus, Intent, JsonSchema, Literal,
    ProcessTerm, SlotDef, Tool, ToolMetadata, TriBool,
};
