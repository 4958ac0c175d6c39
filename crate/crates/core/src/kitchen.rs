//! Serving: resolve a request into a setup, record it, and split the fetch
//! list between the robot and the user.

use serde::{Deserialize, Serialize};

use crate::conceptspace::ObjectLv;
use crate::error::{Error, Result};
use crate::household::HouseholdState;
use crate::memory::{EntryId, Served};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ServeRequest {
    ByName { name: String },
    LeastEaten,
    Surprise,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlanSource {
    Episodic { id: EntryId, name: String },
    Created,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlannedObject {
    pub name: String,
    pub graspable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ServePlan {
    pub source: PlanSource,
    pub objects: Vec<PlannedObject>,
    pub robot_fetches: Vec<String>,
    pub user_fetches: Vec<String>,
    pub day: u64,
}

impl ServePlan {
    pub fn to_text(&self) -> String {
        let source = match &self.source {
            PlanSource::Episodic { id, name } => format!("episodic #{id} ({name})"),
            PlanSource::Created => "created".to_string(),
        };
        let names: Vec<&str> = self.objects.iter().map(|o| o.name.as_str()).collect();
        format!(
            "source: {source}\nday: {}\nobjects: {}\nrobot_fetches: {}\nuser_fetches: {}\n",
            self.day,
            names.join(", "),
            self.robot_fetches.join(", "),
            self.user_fetches.join(", ")
        )
    }
}

fn plan(state: &HouseholdState, source: PlanSource, lv: &ObjectLv) -> ServePlan {
    let catalog = state.catalog();
    let objects: Vec<PlannedObject> = lv
        .ones()
        .map(|id| {
            let spec = catalog.spec(id);
            PlannedObject {
                name: spec.name.clone(),
                graspable: spec.graspable,
            }
        })
        .collect();
    let (robot, user): (Vec<_>, Vec<_>) = objects.iter().partition(|o| o.graspable);
    ServePlan {
        source,
        robot_fetches: robot.into_iter().map(|o| o.name.clone()).collect(),
        user_fetches: user.into_iter().map(|o| o.name.clone()).collect(),
        objects,
        day: state.day(),
    }
}

pub fn serve(state: &mut HouseholdState, request: &ServeRequest) -> Result<ServePlan> {
    let (id, source, lv) = match request {
        ServeRequest::ByName { name } => {
            if name.trim().is_empty() {
                return Err(Error::EmptyName);
            }
            let entry = state
                .episodic()
                .find_by_name(name)
                .ok_or_else(|| Error::UnknownBreakfast(name.trim().to_string()))?;
            (Some(entry.id), episodic_source(entry.id, &entry.name), entry.lv.clone())
        }
        ServeRequest::LeastEaten => {
            let id = state.least_eaten()?;
            let entry = &state.episodic().entries()[id.0];
            (Some(id), episodic_source(id, &entry.name), entry.lv.clone())
        }
        ServeRequest::Surprise => (None, PlanSource::Created, state.create_breakfast()?),
    };
    state.record_served(match id {
        Some(id) => Served::Entry(id),
        None => Served::Surprise(lv.clone()),
    })?;
    Ok(plan(state, source, &lv))
}

fn episodic_source(id: EntryId, name: &str) -> PlanSource {
    PlanSource::Episodic {
        id,
        name: name.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HistoryRow {
    pub day: u64,
    pub served: String,
    pub objects: Vec<String>,
}

/// In-window servings, oldest first.
pub fn history(state: &HouseholdState) -> Vec<HistoryRow> {
    state
        .stm()
        .records()
        .iter()
        .map(|r| {
            let (served, lv) = match &r.served {
                Served::Entry(id) => {
                    let entry = &state.episodic().entries()[id.0];
                    (entry.name.clone(), &entry.lv)
                }
                Served::Surprise(lv) => ("surprise".to_string(), lv),
            };
            HistoryRow {
                day: r.day,
                served,
                objects: state.catalog().decode(lv).expect("stored LVs match the catalog"),
            }
        })
        .collect()
}
