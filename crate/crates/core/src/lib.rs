//! Compiler toolkit for BeePath, a controlled natural language for business
//! process descriptions.
//!
//! The pipeline is: [`grammar`] parses text into a [`grammar::Description`],
//! [`model`] resolves it into a [`model::ProcessSpec`], and the two
//! translators produce a [`petri::PetriNet`] and a [`declare::DeclareSpec`].
//! [`consistency`] cross-checks the two, [`emit`] serializes them, and
//! [`llm`] turns free text into BeePath through a chat-completion endpoint.

pub mod cli;
pub mod consistency;
pub mod declare;
pub mod diagnostic;
pub mod emit;
pub mod grammar;
pub mod llm;
pub mod model;
pub mod petri;

pub use diagnostic::{Diagnostic, Diagnostics, Position, Severity};
