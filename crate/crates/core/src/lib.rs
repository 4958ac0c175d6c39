//! Personalized breakfast planning.
//!
//! Setups are taught as binary presence vectors over an object catalog,
//! served from a k-day short-term memory that favours the least-eaten option,
//! and new ones are sampled from a Gaussian fitted to the taught setups and
//! repaired with an inferred `is_required` knowledge graph.

pub mod conceptspace;
pub mod creativity;
pub mod error;
pub mod fixtures;
pub mod household;
pub mod kitchen;
pub mod memory;
pub mod rng;
pub mod rules;

pub use conceptspace::{Catalog, FoodContextLv, ObjectClass, ObjectId, ObjectLv, ObjectSpec};
pub use creativity::{BatchReport, BatchStats, GaussianModel};
pub use error::{Error, Result};
pub use household::{HouseholdState, StateLock};
pub use kitchen::{HistoryRow, ServePlan, ServeRequest};
pub use memory::{EatenCounts, EntryId, EpisodicEntry, Served};
pub use rules::{KnowledgeGraph, ValidationReport};
