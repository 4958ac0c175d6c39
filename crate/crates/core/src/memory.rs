//! Episodic memory of taught breakfasts and the k-day short-term memory of
//! what was served.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::conceptspace::{Catalog, ObjectLv};
use crate::error::{Error, Result};

pub const DEFAULT_STM_DAYS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntryId(pub usize);

impl fmt::Display for EntryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpisodicEntry {
    pub id: EntryId,
    pub name: String,
    pub lv: ObjectLv,
    pub taught_on_day: u64,
}

#[derive(Clone, Debug, Default)]
pub struct EpisodicMemory {
    entries: Vec<EpisodicEntry>,
}

impl EpisodicMemory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[EpisodicEntry] {
        &self.entries
    }

    pub fn get(&self, id: EntryId) -> Option<&EpisodicEntry> {
        self.entries.get(id.0)
    }

    pub fn find_by_name(&self, name: &str) -> Option<&EpisodicEntry> {
        let key = name.trim().to_lowercase();
        self.entries.iter().find(|e| e.name.to_lowercase() == key)
    }

    pub fn find_by_lv(&self, lv: &ObjectLv) -> Option<&EpisodicEntry> {
        self.entries.iter().find(|e| &e.lv == lv)
    }

    pub fn contains_lv(&self, lv: &ObjectLv) -> bool {
        self.find_by_lv(lv).is_some()
    }

    pub fn lvs(&self) -> impl Iterator<Item = &ObjectLv> + '_ {
        self.entries.iter().map(|e| &e.lv)
    }

    /// Store a user-taught setup.
    pub fn teach<S: AsRef<str>>(
        &mut self,
        catalog: &Catalog,
        name: &str,
        objects: &[S],
        day: u64,
    ) -> Result<&EpisodicEntry> {
        let lv = catalog.encode(objects)?;
        self.insert(catalog, name, lv, day)
    }

    pub fn insert(&mut self, catalog: &Catalog, name: &str, lv: ObjectLv, day: u64) -> Result<&EpisodicEntry> {
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::EmptyName);
        }
        catalog.check_dim(&lv)?;
        if !catalog.has_food(&lv) {
            return Err(Error::NoFoodItem);
        }
        if self.find_by_name(name).is_some() {
            return Err(Error::DuplicateName(name.to_string()));
        }
        if let Some(existing) = self.find_by_lv(&lv) {
            return Err(Error::DuplicateSetup(existing.name.clone()));
        }
        let id = EntryId(self.entries.len());
        self.entries.push(EpisodicEntry {
            id,
            name: name.to_string(),
            lv,
            taught_on_day: day,
        });
        Ok(&self.entries[id.0])
    }

    pub(crate) fn extend_dims(&mut self, len: usize) {
        for e in &mut self.entries {
            e.lv.extend_to(len);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Served {
    Entry(EntryId),
    Surprise(ObjectLv),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StmRecord {
    pub day: u64,
    pub served: Served,
}

/// Servings from the `capacity_days` most recent day indices, today included.
#[derive(Clone, Debug)]
pub struct ShortTermMemory {
    capacity_days: usize,
    records: Vec<StmRecord>,
}

impl ShortTermMemory {
    pub fn new(capacity_days: usize) -> Result<Self> {
        if capacity_days == 0 {
            return Err(Error::InvalidConfig("short-term memory needs at least one day".into()));
        }
        Ok(Self {
            capacity_days,
            records: Vec::new(),
        })
    }

    pub fn capacity_days(&self) -> usize {
        self.capacity_days
    }

    pub fn records(&self) -> &[StmRecord] {
        &self.records
    }

    pub fn push(&mut self, day: u64, served: Served) {
        self.records.push(StmRecord { day, served });
    }

    /// Oldest day index still inside the window when `today` is current.
    pub fn window_start(&self, today: u64) -> u64 {
        (today + 1).saturating_sub(self.capacity_days as u64)
    }

    pub fn evict(&mut self, today: u64) {
        let start = self.window_start(today);
        self.records.retain(|r| r.day >= start);
    }

    pub fn eaten_counts(&self, entries: usize) -> EatenCounts {
        let mut m = vec![0u32; entries];
        for r in &self.records {
            if let Served::Entry(id) = r.served {
                if let Some(c) = m.get_mut(id.0) {
                    *c += 1;
                }
            }
        }
        EatenCounts(m)
    }

    pub(crate) fn extend_dims(&mut self, len: usize) {
        for r in &mut self.records {
            if let Served::Surprise(lv) = &mut r.served {
                lv.extend_to(len);
            }
        }
    }
}

/// Servings per episodic entry inside the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct EatenCounts(pub Vec<u32>);

impl EatenCounts {
    pub fn argmin_set(&self) -> Vec<EntryId> {
        let Some(min) = self.0.iter().min() else {
            return Vec::new();
        };
        self.0
            .iter()
            .enumerate()
            .filter(|(_, c)| *c == min)
            .map(|(i, _)| EntryId(i))
            .collect()
    }
}

/// Pick an entry with the fewest servings; ties are broken uniformly with `rng`.
pub fn least_eaten<R: Rng + ?Sized>(counts: &EatenCounts, rng: &mut R) -> Result<EntryId> {
    let candidates = counts.argmin_set();
    if candidates.is_empty() {
        return Err(Error::EmptyMemory);
    }
    Ok(candidates[rng.random_range(0..candidates.len())])
}
