//! The persisted household aggregate: catalog, both memories, the day
//! counter and the random stream.

use std::io::Write;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::conceptspace::{Catalog, ObjectClass, ObjectId, ObjectLv, ObjectSpec};
use crate::creativity::{self, BatchStats, Creator, GaussianModel, DEFAULT_MAX_ATTEMPTS};
use crate::error::{Error, Result};
use crate::memory::{self, EatenCounts, EntryId, EpisodicEntry, EpisodicMemory, Served, ShortTermMemory};
use crate::rng::{self, HouseholdRng};
use crate::rules::{self, KnowledgeGraph, ValidationReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Default)]
struct Derived {
    graph: KnowledgeGraph,
    model: Option<GaussianModel>,
}

#[derive(Clone, Debug)]
pub struct HouseholdState {
    catalog: Catalog,
    episodic: EpisodicMemory,
    stm: ShortTermMemory,
    day: u64,
    rng: HouseholdRng,
    max_attempts: usize,
    derived: OnceLock<std::sync::Arc<Derived>>,
}

impl HouseholdState {
    pub fn new(stm_days: usize, seed: u64) -> Result<Self> {
        Ok(Self {
            catalog: Catalog::new(),
            episodic: EpisodicMemory::new(),
            stm: ShortTermMemory::new(stm_days)?,
            day: 0,
            rng: HouseholdRng::from_seed(seed),
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            derived: OnceLock::new(),
        })
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn episodic(&self) -> &EpisodicMemory {
        &self.episodic
    }

    pub fn stm(&self) -> &ShortTermMemory {
        &self.stm
    }

    pub fn day(&self) -> u64 {
        self.day
    }

    pub fn rng(&self) -> &HouseholdRng {
        &self.rng
    }

    pub fn max_attempts(&self) -> usize {
        self.max_attempts
    }

    pub fn set_max_attempts(&mut self, max_attempts: usize) {
        self.max_attempts = max_attempts.max(1);
    }

    fn invalidate(&mut self) {
        self.derived = OnceLock::new();
    }

    pub fn add_object(&mut self, name: &str, class: ObjectClass, graspable: bool) -> Result<ObjectId> {
        let id = self.catalog.add_object(name, class, graspable)?;
        self.episodic.extend_dims(self.catalog.len());
        self.stm.extend_dims(self.catalog.len());
        self.invalidate();
        Ok(id)
    }

    pub fn teach<S: AsRef<str>>(&mut self, name: &str, objects: &[S]) -> Result<&EpisodicEntry> {
        let id = self.episodic.teach(&self.catalog, name, objects, self.day)?.id;
        self.invalidate();
        Ok(&self.episodic.entries()[id.0])
    }

    pub fn teach_lv(&mut self, name: &str, lv: ObjectLv) -> Result<&EpisodicEntry> {
        let id = self.episodic.insert(&self.catalog, name, lv, self.day)?.id;
        self.invalidate();
        Ok(&self.episodic.entries()[id.0])
    }

    pub fn record_served(&mut self, served: Served) -> Result<()> {
        match &served {
            Served::Entry(id) => {
                if self.episodic.get(*id).is_none() {
                    return Err(Error::UnknownEntry(id.0));
                }
            }
            Served::Surprise(lv) => self.catalog.check_dim(lv)?,
        }
        self.stm.push(self.day, served);
        Ok(())
    }

    pub fn advance_day(&mut self) -> u64 {
        self.day += 1;
        self.stm.evict(self.day);
        self.day
    }

    pub fn eaten_counts(&self) -> EatenCounts {
        self.stm.eaten_counts(self.episodic.len())
    }

    pub fn least_eaten(&mut self) -> Result<EntryId> {
        let counts = self.eaten_counts();
        memory::least_eaten(&counts, &mut self.rng)
    }

    fn derived(&self) -> Result<&Derived> {
        if let Some(d) = self.derived.get() {
            return Ok(d);
        }
        let graph = rules::infer_rules(self.episodic.lvs(), &self.catalog)?;
        let model = if self.episodic.is_empty() {
            None
        } else {
            Some(creativity::fit_gaussian(&self.episodic, &self.catalog)?)
        };
        Ok(self.derived.get_or_init(|| std::sync::Arc::new(Derived { graph, model })))
    }

    pub fn knowledge_graph(&self) -> Result<&KnowledgeGraph> {
        Ok(&self.derived()?.graph)
    }

    pub fn gaussian_model(&self) -> Result<&GaussianModel> {
        self.derived()?.model.as_ref().ok_or(Error::EmptyMemory)
    }

    pub fn validate(&self, lv: &ObjectLv) -> Result<ValidationReport> {
        rules::validate(lv, self.knowledge_graph()?, &self.catalog)
    }

    pub fn fix(&self, lv: &ObjectLv) -> Result<ObjectLv> {
        rules::fix(lv, self.knowledge_graph()?, &self.catalog)
    }

    pub fn rules_dump(&self) -> Result<String> {
        Ok(rules::dump(self.knowledge_graph()?, &self.catalog))
    }

    fn split_creator(&mut self) -> Result<(Creator<'_>, &mut HouseholdRng)> {
        if self.episodic.is_empty() {
            return Err(Error::EmptyMemory);
        }
        // Populate the cache before borrowing fields separately.
        self.derived()?;
        let derived = self.derived.get().expect("derived state was just built");
        let creator = Creator {
            catalog: &self.catalog,
            memory: &self.episodic,
            graph: &derived.graph,
            model: derived.model.as_ref().ok_or(Error::EmptyMemory)?,
            max_attempts: self.max_attempts,
        };
        Ok((creator, &mut self.rng))
    }

    pub fn create_breakfast(&mut self) -> Result<ObjectLv> {
        let (creator, rng) = self.split_creator()?;
        creator.create_breakfast(rng)
    }

    pub fn simulate_batch(&mut self, n: usize) -> Result<BatchStats> {
        let (creator, rng) = self.split_creator()?;
        creator.simulate_batch(rng, n)
    }

    pub fn to_document(&self) -> StateDocument {
        let names = |lv: &ObjectLv| -> Vec<String> {
            let mut names = self.catalog.decode(lv).expect("stored LVs match the catalog");
            names.sort();
            names
        };
        StateDocument {
            schema_version: SCHEMA_VERSION,
            stm_days: self.stm.capacity_days(),
            day: self.day,
            max_attempts: self.max_attempts,
            rng: RngDocument {
                algorithm: rng::ALGORITHM.to_string(),
                seed: self.rng.seed(),
                word_pos: self.rng.word_pos(),
            },
            catalog: self.catalog.objects().to_vec(),
            breakfasts: self
                .episodic
                .entries()
                .iter()
                .map(|e| BreakfastDocument {
                    id: e.id.0,
                    name: e.name.clone(),
                    objects: names(&e.lv),
                    taught_on_day: e.taught_on_day,
                })
                .collect(),
            history: self
                .stm
                .records()
                .iter()
                .map(|r| HistoryDocument {
                    day: r.day,
                    served: match &r.served {
                        Served::Entry(id) => ServedDocument::Entry(id.0),
                        Served::Surprise(lv) => ServedDocument::Surprise(names(lv)),
                    },
                })
                .collect(),
        }
    }

    pub fn from_document(doc: StateDocument) -> Result<Self> {
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::UnsupportedVersion(doc.schema_version));
        }
        if doc.rng.algorithm != rng::ALGORITHM {
            return Err(Error::InvalidConfig(format!("unknown rng algorithm {:?}", doc.rng.algorithm)));
        }
        let mut state = Self::new(doc.stm_days, doc.rng.seed)?;
        state.rng = HouseholdRng::restore(doc.rng.seed, doc.rng.word_pos);
        state.max_attempts = doc.max_attempts.max(1);
        state.day = doc.day;
        for (pos, spec) in doc.catalog.iter().enumerate() {
            if spec.id.0 != pos {
                return Err(Error::InvalidConfig(format!("catalog id {} out of order", spec.id.0)));
            }
            state.catalog.add_object(&spec.name, spec.class, spec.graspable)?;
        }
        for (pos, b) in doc.breakfasts.into_iter().enumerate() {
            if b.id != pos {
                return Err(Error::InvalidConfig(format!("breakfast id {} out of order", b.id)));
            }
            let lv = state.catalog.encode(&b.objects)?;
            state.episodic.insert(&state.catalog, &b.name, lv, b.taught_on_day)?;
        }
        for h in doc.history {
            let served = match h.served {
                ServedDocument::Entry(id) => {
                    if id >= state.episodic.len() {
                        return Err(Error::UnknownEntry(id));
                    }
                    Served::Entry(EntryId(id))
                }
                ServedDocument::Surprise(objects) => Served::Surprise(state.catalog.encode(&objects)?),
            };
            state.stm.push(h.day, served);
        }
        state.stm.evict(state.day);
        Ok(state)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_document()).expect("state document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Self::from_document(serde_json::from_str(json)?)
    }

    /// Write-temp-then-rename so a crash leaves either the old or the new file.
    pub fn save(&self, path: &Path) -> Result<()> {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(self.to_json().as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Exclusive advisory lock next to a state file, held for the lifetime of the value.
#[derive(Debug)]
pub struct StateLock {
    _file: std::fs::File,
}

impl StateLock {
    pub fn lock_path(state_path: &Path) -> std::path::PathBuf {
        let mut name = state_path.file_name().unwrap_or_default().to_os_string();
        name.push(".lock");
        state_path.with_file_name(name)
    }

    /// Fails with [`Error::Locked`] when another process holds the lock.
    pub fn acquire(state_path: &Path) -> Result<Self> {
        let path = Self::lock_path(state_path);
        let file = std::fs::OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&path)?;
        match file.try_lock() {
            Ok(()) => Ok(Self { _file: file }),
            Err(std::fs::TryLockError::WouldBlock) => Err(Error::Locked(path.display().to_string())),
            Err(std::fs::TryLockError::Error(e)) => Err(e.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDocument {
    pub schema_version: u32,
    pub stm_days: usize,
    pub day: u64,
    pub max_attempts: usize,
    pub rng: RngDocument,
    pub catalog: Vec<ObjectSpec>,
    pub breakfasts: Vec<BreakfastDocument>,
    pub history: Vec<HistoryDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngDocument {
    pub algorithm: String,
    pub seed: u64,
    pub word_pos: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreakfastDocument {
    pub id: usize,
    pub name: String,
    pub objects: Vec<String>,
    pub taught_on_day: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryDocument {
    pub day: u64,
    pub served: ServedDocument,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ServedDocument {
    Entry(usize),
    Surprise(Vec<String>),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn catalog_growth_zero_extends_memories() {
        let mut state = fixtures::kitchen_household(1);
        state.record_served(Served::Surprise(state.catalog().encode(&["milk", "cup"]).unwrap())).unwrap();
        state.add_object("toast", ObjectClass::Food, true).unwrap();
        assert!(state.episodic().lvs().all(|lv| lv.len() == 10));
        assert!(state.knowledge_graph().unwrap().rule(ObjectId(9)).is_none());
        assert_eq!(state.gaussian_model().unwrap().dim(), 10);
        let reloaded = HouseholdState::from_json(&state.to_json()).unwrap();
        assert_eq!(reloaded.to_document(), state.to_document());
    }

    #[test]
    fn teaching_does_not_touch_stm_and_days_do_not_touch_memory() {
        let mut state = fixtures::kitchen_household(1);
        state.record_served(Served::Entry(EntryId(0))).unwrap();
        let before = state.stm().records().to_vec();
        state.teach("plain cereal", &["cereal", "bowl"]).unwrap();
        assert_eq!(state.stm().records(), before.as_slice());
        let entries = state.episodic().entries().to_vec();
        state.advance_day();
        assert_eq!(state.episodic().entries(), entries.as_slice());
    }

    #[test]
    fn record_served_checks_entry() {
        let mut state = fixtures::kitchen_household(1);
        assert!(matches!(state.record_served(Served::Entry(EntryId(99))), Err(Error::UnknownEntry(99))));
        state.record_served(Served::Entry(EntryId(0))).unwrap();
        state.record_served(Served::Entry(EntryId(0))).unwrap();
        assert_eq!(state.stm().records().len(), 2);
        assert!(state.stm().records().iter().all(|r| r.day == 0));
    }

    #[test]
    fn save_is_atomic_and_loadable() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("household.json");
        let state = fixtures::kitchen_household(5);
        state.save(&path).unwrap();
        state.save(&path).unwrap();
        let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names.len(), 1);
        assert_eq!(HouseholdState::load(&path).unwrap().to_document(), state.to_document());
    }

    #[test]
    fn second_lock_is_refused() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("household.json");
        let held = StateLock::acquire(&path).unwrap();
        assert!(matches!(StateLock::acquire(&path), Err(Error::Locked(_))));
        drop(held);
        StateLock::acquire(&path).unwrap();
    }

    #[test]
    fn rejects_foreign_documents() {
        let state = fixtures::kitchen_household(5);
        let mut doc = state.to_document();
        doc.schema_version = 9;
        assert!(matches!(HouseholdState::from_document(doc), Err(Error::UnsupportedVersion(9))));
        let mut doc = state.to_document();
        doc.rng.algorithm = "pcg".into();
        assert!(HouseholdState::from_document(doc).is_err());
    }
}
