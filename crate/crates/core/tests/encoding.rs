use std::collections::BTreeSet;

use breakfast_core::conceptspace::{Catalog, ObjectClass, ObjectId};
use proptest::prelude::*;

fn catalog_of(classes: &[bool]) -> Catalog {
    let mut c = Catalog::new();
    for (i, food) in classes.iter().enumerate() {
        let class = if *food { ObjectClass::Food } else { ObjectClass::Utensil };
        c.add_object(&format!("Item{i}"), class, *food).unwrap();
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn encode_decode_is_identity_on_sets(
        classes in prop::collection::vec(any::<bool>(), 1..=64),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 0..40),
    ) {
        let c = catalog_of(&classes);
        let names: Vec<String> = picks.iter().map(|ix| format!("item{}", ix.index(c.len()))).collect();
        let lv = c.encode(&names).unwrap();
        let decoded: BTreeSet<String> = c.decode(&lv).unwrap().into_iter().map(|n| n.to_lowercase()).collect();
        let expected: BTreeSet<String> = names.into_iter().collect();
        prop_assert_eq!(decoded, expected);

        let view = c.food_context_view(&lv).unwrap();
        prop_assert_eq!(view.reassemble(), lv.clone());
        for id in view.present(ObjectClass::Food) {
            prop_assert_eq!(c.class_of(id), ObjectClass::Food);
        }
        for id in view.present(ObjectClass::Utensil) {
            prop_assert_eq!(c.class_of(id), ObjectClass::Utensil);
        }
    }

    #[test]
    fn catalog_is_append_only(names in prop::collection::vec("[a-d]{1,3}", 1..40)) {
        let mut c = Catalog::new();
        let mut issued: Vec<(ObjectId, String)> = Vec::new();
        for name in names {
            if let Ok(id) = c.add_object(&name, ObjectClass::Food, true) {
                prop_assert_eq!(id.0, issued.len());
                issued.push((id, name));
            }
            for (id, name) in &issued {
                prop_assert_eq!(c.name(*id), name.as_str());
            }
        }
    }
}
