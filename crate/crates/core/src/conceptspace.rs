//! Object catalog and the latent-variable encoding of breakfast setups.
//!
//! Every object the household knows about is one dimension of the conceptual
//! space. A breakfast setup is a binary presence vector over those dimensions
//! (an [`ObjectLv`]); the same vector split by object class is a
//! [`FoodContextLv`].

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense index of an object in the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectId(pub usize);

impl ObjectId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectClass {
    Food,
    Utensil,
}

impl ObjectClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ObjectClass::Food => "food",
            ObjectClass::Utensil => "utensil",
        }
    }
}

impl fmt::Display for ObjectClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ObjectClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "food" => Ok(ObjectClass::Food),
            "utensil" => Ok(ObjectClass::Utensil),
            other => Err(format!("unknown object class {other:?} (expected food or utensil)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectSpec {
    pub id: ObjectId,
    pub name: String,
    pub class: ObjectClass,
    pub graspable: bool,
}

/// Append-only registry of household objects.
///
/// Names are matched case-insensitively but stored as given (trimmed).
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    objects: Vec<ObjectSpec>,
    by_name: HashMap<String, ObjectId>,
}

fn name_key(name: &str) -> String {
    name.trim().to_lowercase()
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[ObjectSpec] {
        &self.objects
    }

    pub fn add_object(&mut self, name: &str, class: ObjectClass, graspable: bool) -> Result<ObjectId> {
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::EmptyName);
        }
        let key = name_key(name);
        if self.by_name.contains_key(&key) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        let id = ObjectId(self.objects.len());
        self.objects.push(ObjectSpec {
            id,
            name: name.to_string(),
            class,
            graspable,
        });
        self.by_name.insert(key, id);
        Ok(id)
    }

    pub fn lookup(&self, name: &str) -> Option<ObjectId> {
        self.by_name.get(&name_key(name)).copied()
    }

    pub fn resolve(&self, name: &str) -> Result<ObjectId> {
        self.lookup(name)
            .ok_or_else(|| Error::UnknownObject(name.trim().to_string()))
    }

    pub fn get(&self, id: ObjectId) -> Option<&ObjectSpec> {
        self.objects.get(id.0)
    }

    /// Panics on ids outside the catalog; ids handed out by this catalog are always valid.
    pub fn spec(&self, id: ObjectId) -> &ObjectSpec {
        &self.objects[id.0]
    }

    pub fn name(&self, id: ObjectId) -> &str {
        &self.spec(id).name
    }

    pub fn class_of(&self, id: ObjectId) -> ObjectClass {
        self.spec(id).class
    }

    pub fn ids_of_class(&self, class: ObjectClass) -> impl Iterator<Item = ObjectId> + '_ {
        self.objects
            .iter()
            .filter(move |o| o.class == class)
            .map(|o| o.id)
    }

    /// Encode a set of object names as a presence vector. Repeated names collapse.
    pub fn encode<S: AsRef<str>>(&self, names: &[S]) -> Result<ObjectLv> {
        let mut lv = ObjectLv::zeros(self.len());
        for name in names {
            lv.set(self.resolve(name.as_ref())?);
        }
        Ok(lv)
    }

    /// Names of the present objects in ascending id order.
    pub fn decode(&self, lv: &ObjectLv) -> Result<Vec<String>> {
        self.check_dim(lv)?;
        Ok(lv.ones().map(|id| self.name(id).to_string()).collect())
    }

    pub fn food_context_view(&self, lv: &ObjectLv) -> Result<FoodContextLv> {
        self.check_dim(lv)?;
        let mut view = FoodContextLv {
            food_ids: Vec::new(),
            food_bits: Vec::new(),
            utensil_ids: Vec::new(),
            utensil_bits: Vec::new(),
        };
        for spec in &self.objects {
            let bit = lv.get(spec.id);
            match spec.class {
                ObjectClass::Food => {
                    view.food_ids.push(spec.id);
                    view.food_bits.push(bit);
                }
                ObjectClass::Utensil => {
                    view.utensil_ids.push(spec.id);
                    view.utensil_bits.push(bit);
                }
            }
        }
        Ok(view)
    }

    pub fn has_food(&self, lv: &ObjectLv) -> bool {
        lv.ones().any(|id| self.class_of(id) == ObjectClass::Food)
    }

    pub fn check_dim(&self, lv: &ObjectLv) -> Result<()> {
        if lv.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: lv.len(),
            });
        }
        Ok(())
    }
}

/// Binary presence vector over catalog dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectLv {
    bits: Vec<bool>,
}

impl ObjectLv {
    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn from_ids(len: usize, ids: impl IntoIterator<Item = ObjectId>) -> Self {
        let mut lv = Self::zeros(len);
        for id in ids {
            lv.set(id);
        }
        lv
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, id: ObjectId) -> bool {
        self.bits.get(id.0).copied().unwrap_or(false)
    }

    pub fn set(&mut self, id: ObjectId) {
        self.bits[id.0] = true;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_zero(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    pub fn ones(&self) -> impl Iterator<Item = ObjectId> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| ObjectId(i))
    }

    /// Every bit set here is also set in `other`.
    pub fn is_subset_of(&self, other: &ObjectLv) -> bool {
        self.ones().all(|id| other.get(id))
    }

    /// Zero-extend to `len` dimensions (catalog growth). Never truncates.
    pub fn extend_to(&mut self, len: usize) {
        if len > self.bits.len() {
            self.bits.resize(len, false);
        }
    }
}

/// An object LV partitioned into its food and utensil dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoodContextLv {
    pub food_ids: Vec<ObjectId>,
    pub food_bits: Vec<bool>,
    pub utensil_ids: Vec<ObjectId>,
    pub utensil_bits: Vec<bool>,
}

impl FoodContextLv {
    fn part(&self, class: ObjectClass) -> (&[ObjectId], &[bool]) {
        match class {
            ObjectClass::Food => (&self.food_ids, &self.food_bits),
            ObjectClass::Utensil => (&self.utensil_ids, &self.utensil_bits),
        }
    }

    pub fn class_of(&self, id: ObjectId) -> Option<ObjectClass> {
        if self.food_ids.binary_search(&id).is_ok() {
            Some(ObjectClass::Food)
        } else if self.utensil_ids.binary_search(&id).is_ok() {
            Some(ObjectClass::Utensil)
        } else {
            None
        }
    }

    pub fn contains(&self, id: ObjectId) -> bool {
        [ObjectClass::Food, ObjectClass::Utensil].into_iter().any(|class| {
            let (ids, bits) = self.part(class);
            ids.binary_search(&id).map(|pos| bits[pos]).unwrap_or(false)
        })
    }

    /// Present ids of one class, ascending.
    pub fn present(&self, class: ObjectClass) -> impl Iterator<Item = ObjectId> + '_ {
        let (ids, bits) = self.part(class);
        ids.iter().zip(bits).filter(|(_, b)| **b).map(|(id, _)| *id)
    }

    pub fn reassemble(&self) -> ObjectLv {
        let len = self.food_ids.len() + self.utensil_ids.len();
        ObjectLv::from_ids(
            len,
            self.present(ObjectClass::Food)
                .chain(self.present(ObjectClass::Utensil)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_catalog() -> Catalog {
        let mut c = Catalog::new();
        for name in ["milk", "cup", "cereal", "apple", "orange", "honey"] {
            let class = if name == "cup" { ObjectClass::Utensil } else { ObjectClass::Food };
            c.add_object(name, class, true).unwrap();
        }
        c.add_object("banana", ObjectClass::Food, false).unwrap();
        c.add_object("bowl", ObjectClass::Utensil, false).unwrap();
        c.add_object("spoon", ObjectClass::Utensil, false).unwrap();
        c
    }

    #[test]
    fn first_insertion_gets_id_zero() {
        let mut c = Catalog::new();
        assert_eq!(c.add_object("milk", ObjectClass::Food, true).unwrap(), ObjectId(0));
    }

    #[test]
    fn duplicate_names_are_rejected_case_insensitively() {
        let mut c = Catalog::new();
        c.add_object("milk", ObjectClass::Food, true).unwrap();
        assert!(matches!(c.add_object("milk", ObjectClass::Food, true), Err(Error::DuplicateName(_))));
        assert!(matches!(c.add_object("  MILK ", ObjectClass::Food, true), Err(Error::DuplicateName(_))));
        assert!(matches!(c.add_object("   ", ObjectClass::Food, true), Err(Error::EmptyName)));
    }

    #[test]
    fn nine_object_kitchen() {
        let c = table_catalog();
        assert_eq!(c.len(), 9);
        let not_graspable: Vec<_> = c.objects().iter().filter(|o| !o.graspable).map(|o| o.name.as_str()).collect();
        assert_eq!(not_graspable, ["banana", "bowl", "spoon"]);
        assert_eq!(c.lookup("Banana"), Some(ObjectId(6)));
        assert_eq!(c.name(ObjectId(6)), "banana");
    }

    #[test]
    fn encode_sets_named_bits() {
        let c = table_catalog();
        let lv = c.encode(&["milk", "cup", "milk"]).unwrap();
        assert_eq!(lv.ones().collect::<Vec<_>>(), [ObjectId(0), ObjectId(1)]);
        assert!(c.encode::<&str>(&[]).unwrap().is_zero());
        assert!(matches!(c.encode(&["milk", "yogurt"]), Err(Error::UnknownObject(n)) if n == "yogurt"));
    }

    #[test]
    fn decode_round_trips_table_setup() {
        let c = table_catalog();
        let names = ["banana", "milk", "cereal", "spoon", "bowl"];
        let decoded = c.decode(&c.encode(&names).unwrap()).unwrap();
        let mut expected: Vec<_> = names.iter().map(|s| s.to_string()).collect();
        expected.sort_by_key(|n| c.lookup(n).unwrap());
        assert_eq!(decoded, expected);
        assert!(c.decode(&ObjectLv::zeros(9)).unwrap().is_empty());
        assert!(matches!(c.decode(&ObjectLv::zeros(3)), Err(Error::DimensionMismatch { expected: 9, actual: 3 })));
    }

    #[test]
    fn food_context_partitions_by_class() {
        let c = table_catalog();
        let view = c.food_context_view(&c.encode(&["milk", "cup"]).unwrap()).unwrap();
        assert_eq!(view.present(ObjectClass::Food).collect::<Vec<_>>(), [ObjectId(0)]);
        assert_eq!(view.present(ObjectClass::Utensil).collect::<Vec<_>>(), [ObjectId(1)]);

        let fruit = c.encode(&["apple", "orange", "banana"]).unwrap();
        let view = c.food_context_view(&fruit).unwrap();
        assert!(view.utensil_bits.iter().all(|b| !b));
        assert_eq!(view.reassemble(), fruit);

        let view = c.food_context_view(&ObjectLv::zeros(9)).unwrap();
        assert!(view.food_bits.iter().chain(&view.utensil_bits).all(|b| !b));
    }

    #[test]
    fn extend_keeps_existing_bits() {
        let mut lv = ObjectLv::from_ids(3, [ObjectId(2)]);
        lv.extend_to(5);
        assert_eq!(lv.len(), 5);
        assert_eq!(lv.ones().collect::<Vec<_>>(), [ObjectId(2)]);
    }
}
