#![allow(dead_code)]

use breakfast_core::conceptspace::{Catalog, ObjectClass, ObjectId, ObjectLv};
use breakfast_core::memory::EpisodicMemory;
use proptest::prelude::*;

/// Random catalog classes (at least one food) plus taught setups, each with a food.
#[derive(Clone, Debug)]
pub struct RandomHousehold {
    pub catalog: Catalog,
    pub memory: EpisodicMemory,
}

pub fn build_household(classes: &[bool], setups: &[Vec<bool>]) -> RandomHousehold {
    let mut catalog = Catalog::new();
    for (i, is_food) in classes.iter().enumerate() {
        let class = if *is_food { ObjectClass::Food } else { ObjectClass::Utensil };
        catalog.add_object(&format!("obj{i}"), class, i % 3 != 0).unwrap();
    }
    let mut memory = EpisodicMemory::new();
    for (k, bits) in setups.iter().enumerate() {
        let mut lv = ObjectLv::from_bits(bits.clone());
        if !catalog.has_food(&lv) {
            let food = classes.iter().position(|f| *f).unwrap();
            lv.set(ObjectId(food));
        }
        // Duplicate patterns are legitimately rejected; skip them.
        let _ = memory.insert(&catalog, &format!("setup{k}"), lv, 0);
    }
    RandomHousehold { catalog, memory }
}

pub fn household_strategy(max_objects: usize, max_setups: usize) -> impl Strategy<Value = RandomHousehold> {
    (2..=max_objects)
        .prop_flat_map(move |n| {
            (
                prop::collection::vec(any::<bool>(), n),
                0..n,
                prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.35), n), 1..=max_setups),
            )
        })
        .prop_map(|(mut classes, forced_food, setups)| {
            classes[forced_food] = true;
            build_household(&classes, &setups)
        })
}

/// Every subset of catalog ids as LVs, smallest first.
pub fn all_subsets(len: usize) -> Vec<ObjectLv> {
    let mut out: Vec<ObjectLv> = (0u32..(1 << len))
        .map(|mask| ObjectLv::from_ids(len, (0..len).filter(|i| mask & (1 << i) != 0).map(ObjectId)))
        .collect();
    out.sort_by_key(|lv| lv.count());
    out
}
