//! Structured argumentation over description-logic legal ontologies.
//!
//! The pipeline runs [`ontology::parse_ontology`] →
//! [`translation::translate_ontology`] → [`engine::construct_arguments`] →
//! [`preferences`] (attacks and defeats) → [`semantics`] (extensions), and
//! [`tasks`] answers queries over the result.

pub mod engine;
pub mod formula;
pub mod ontology;
pub mod preferences;
pub mod semantics;
pub mod tasks;
pub mod translation;

pub use engine::{construct_arguments, ArgId, Argument, ArgumentStore, EngineError, Limits};
pub use formula::{Formula, Individual, Literal, Term};
pub use ontology::{parse_ontology, Ontology};
pub use semantics::{AcceptanceMode, Semantics};
pub use tasks::{Compiled, Reasoner, Settings, TaskError};
pub use translation::{translate_ontology, ArgumentationTheory, TranslateOptions};
