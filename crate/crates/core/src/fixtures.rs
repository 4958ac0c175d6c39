//! Reference households used by tests, the CLI `--preset` flag and the
//! batch experiments.

use crate::conceptspace::ObjectClass::{self, Food, Utensil};
use crate::household::HouseholdState;
use crate::memory::DEFAULT_STM_DAYS;

/// Nine-object kitchen: (name, class, graspable).
pub const KITCHEN_OBJECTS: [(&str, ObjectClass, bool); 9] = [
    ("milk", Food, true),
    ("cup", Utensil, true),
    ("cereal", Food, true),
    ("apple", Food, true),
    ("orange", Food, true),
    ("honey", Food, true),
    ("banana", Food, false),
    ("bowl", Utensil, false),
    ("spoon", Utensil, false),
];

/// The seven taught breakfasts of the reference household.
pub const TAUGHT_BREAKFASTS: [(&str, &[&str]); 7] = [
    ("milk and cup", &["milk", "cup"]),
    ("milk, cup, banana", &["milk", "cup", "banana"]),
    ("cereal", &["milk", "cereal", "spoon", "bowl"]),
    ("banana cereal", &["banana", "milk", "cereal", "spoon", "bowl"]),
    ("honey cereal", &["honey", "milk", "cereal", "spoon", "bowl"]),
    ("honey milk", &["honey", "milk", "cup"]),
    ("fruit", &["apple", "orange", "banana"]),
];

/// Five novel setups produced from the reference household, all valid.
pub const CREATED_BREAKFASTS: [&[&str]; 5] = [
    &["milk", "banana", "honey", "cup"],
    &["apple", "milk", "cereal", "spoon", "bowl"],
    &["apple", "honey", "milk", "cereal", "spoon", "bowl"],
    &["milk", "cereal", "bowl", "cup", "spoon"],
    &["apple", "milk", "banana", "orange", "cup"],
];

/// Twenty-five objects: the kitchen above plus sixteen more.
pub const PANTRY_OBJECTS: [(&str, ObjectClass, bool); 25] = [
    ("milk", Food, true),
    ("cup", Utensil, true),
    ("cereal", Food, true),
    ("apple", Food, true),
    ("orange", Food, true),
    ("honey", Food, true),
    ("banana", Food, false),
    ("bowl", Utensil, false),
    ("spoon", Utensil, false),
    ("yogurt", Food, true),
    ("peanut_butter", Food, true),
    ("bread", Food, true),
    ("jam", Food, true),
    ("butter", Food, true),
    ("eggs", Food, false),
    ("coffee", Food, true),
    ("tea", Food, true),
    ("oatmeal", Food, true),
    ("strawberries", Food, true),
    ("juice", Food, true),
    ("plate", Utensil, true),
    ("knife", Utensil, true),
    ("fork", Utensil, true),
    ("mug", Utensil, true),
    ("glass", Utensil, true),
];

pub const PANTRY_BREAKFASTS: [(&str, &[&str]); 20] = [
    ("milk and cup", &["milk", "cup"]),
    ("milk, cup, banana", &["milk", "cup", "banana"]),
    ("cereal", &["milk", "cereal", "spoon", "bowl"]),
    ("banana cereal", &["banana", "milk", "cereal", "spoon", "bowl"]),
    ("honey cereal", &["honey", "milk", "cereal", "spoon", "bowl"]),
    ("honey milk", &["honey", "milk", "cup"]),
    ("fruit", &["apple", "orange", "banana"]),
    ("toast and jam", &["bread", "jam", "plate", "knife"]),
    ("buttered toast", &["bread", "butter", "plate", "knife"]),
    ("eggs on toast", &["eggs", "bread", "plate", "fork"]),
    ("coffee", &["coffee", "mug"]),
    ("honey tea", &["tea", "honey", "mug"]),
    ("berry yogurt", &["yogurt", "strawberries", "bowl", "spoon"]),
    ("porridge", &["oatmeal", "milk", "bowl", "spoon"]),
    ("banana porridge", &["oatmeal", "honey", "banana", "bowl", "spoon"]),
    ("peanut butter toast", &["peanut_butter", "bread", "plate", "knife"]),
    ("eggs and coffee", &["eggs", "coffee", "plate", "fork", "mug"]),
    ("juice", &["juice", "glass"]),
    ("continental", &["bread", "jam", "butter", "juice", "plate", "knife", "glass"]),
    ("apple slices", &["apple", "peanut_butter", "plate", "knife"]),
];

/// Twelve setups over the pantry, half of them unconventional.
pub const UNCONVENTIONAL_BREAKFASTS: [(&str, &[&str]); 12] = [
    ("cereal", &["milk", "cereal", "spoon", "bowl"]),
    ("milk and cup", &["milk", "cup"]),
    ("fruit", &["apple", "orange", "banana"]),
    ("toast and jam", &["bread", "jam", "plate", "knife"]),
    ("coffee", &["coffee", "mug"]),
    ("berry yogurt", &["yogurt", "strawberries", "bowl", "spoon"]),
    ("dry cereal", &["cereal", "bowl"]),
    ("peanut butter bowl", &["peanut_butter", "bowl", "spoon"]),
    ("plain yogurt", &["yogurt", "spoon"]),
    ("apple and yogurt", &["apple", "yogurt", "bowl"]),
    ("tea alone", &["tea", "cup"]),
    ("bread and honey", &["bread", "honey", "plate"]),
];

fn build(objects: &[(&str, ObjectClass, bool)], taught: &[(&str, &[&str])], seed: u64) -> HouseholdState {
    let mut state = HouseholdState::new(DEFAULT_STM_DAYS, seed).expect("positive window");
    for (name, class, graspable) in objects {
        state.add_object(name, *class, *graspable).expect("fixture objects are unique");
    }
    for (name, items) in taught {
        state.teach(name, items).expect("fixture setups are valid");
    }
    state
}

pub fn kitchen_household(seed: u64) -> HouseholdState {
    build(&KITCHEN_OBJECTS, &TAUGHT_BREAKFASTS, seed)
}

pub fn pantry_household(seed: u64) -> HouseholdState {
    build(&PANTRY_OBJECTS, &PANTRY_BREAKFASTS, seed)
}

pub fn unconventional_household(seed: u64) -> HouseholdState {
    build(&PANTRY_OBJECTS, &UNCONVENTIONAL_BREAKFASTS, seed)
}
