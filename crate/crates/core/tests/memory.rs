use breakfast_core::fixtures;
use breakfast_core::memory::{EntryId, Served};
use breakfast_core::{HouseholdState, ObjectLv};
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Op {
    Serve(usize),
    Surprise,
    Advance,
    LeastEaten,
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        4 => (0usize..7).prop_map(Op::Serve),
        1 => Just(Op::Surprise),
        2 => Just(Op::Advance),
        2 => Just(Op::LeastEaten),
    ]
}

/// Full log replay: count servings whose day lies in the last k day indices.
fn recount(log: &[(u64, Option<usize>)], today: u64, k: u64, n: usize) -> Vec<u32> {
    let mut m = vec![0; n];
    for (day, entry) in log {
        if *day + k > today {
            if let Some(e) = entry {
                m[*e] += 1;
            }
        }
    }
    m
}

fn household(k: usize, seed: u64) -> HouseholdState {
    let mut state = HouseholdState::new(k, seed).unwrap();
    for (name, class, graspable) in fixtures::KITCHEN_OBJECTS {
        state.add_object(name, class, graspable).unwrap();
    }
    for (name, items) in fixtures::TAUGHT_BREAKFASTS {
        state.teach(name, items).unwrap();
    }
    state
}

#[test]
fn window_example_evicts_first_two_days() {
    let mut state = household(5, 0);
    for day in 0..=5 {
        assert_eq!(state.day(), day);
        state.record_served(Served::Entry(EntryId(0))).unwrap();
        if day < 5 {
            state.advance_day();
        }
    }
    assert_eq!(state.advance_day(), 6);
    let days: Vec<u64> = state.stm().records().iter().map(|r| r.day).collect();
    assert_eq!(days, [2, 3, 4, 5]);
}

#[test]
fn counts_outside_window_are_zero() {
    let mut state = household(3, 0);
    state.record_served(Served::Entry(EntryId(2))).unwrap();
    state.record_served(Served::Entry(EntryId(1))).unwrap();
    for _ in 0..3 {
        state.advance_day();
    }
    assert_eq!(state.eaten_counts().0, vec![0; 7]);
    let mut fresh = household(3, 0);
    fresh.advance_day();
    assert!(fresh.stm().records().is_empty());
}

#[test]
fn three_least_eaten_requests_land_in_argmin() {
    // serve by name, with least-eaten requests at turns 5, 10 and 15
    let mut state = household(5, 2024);
    let named = [0usize, 2, 1, 3, 5, 6, 1, 0, 4, 2, 3, 6];
    let mut named = named.iter();
    for turn in 1..=15 {
        if turn % 5 == 0 {
            let argmin = state.eaten_counts().argmin_set();
            let pick = state.least_eaten().unwrap();
            assert!(argmin.contains(&pick));
            state.record_served(Served::Entry(pick)).unwrap();
        } else {
            state.record_served(Served::Entry(EntryId(*named.next().unwrap()))).unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn counts_match_replay(k in prop::sample::select(vec![1usize, 3, 5]), seed in any::<u64>(), ops in prop::collection::vec(op(), 0..60)) {
        let mut state = household(k, seed);
        let mut log = Vec::new();
        for op in ops {
            match op {
                Op::Serve(e) => {
                    state.record_served(Served::Entry(EntryId(e))).unwrap();
                    log.push((state.day(), Some(e)));
                }
                Op::Surprise => {
                    let lv: ObjectLv = state.catalog().encode(&["apple", "honey", "cup"]).unwrap();
                    state.record_served(Served::Surprise(lv)).unwrap();
                    log.push((state.day(), None));
                }
                Op::Advance => {
                    state.advance_day();
                }
                Op::LeastEaten => {
                    let expected = recount(&log, state.day(), k as u64, 7);
                    let min = *expected.iter().min().unwrap();
                    let pick = state.least_eaten().unwrap();
                    prop_assert_eq!(expected[pick.0], min);
                }
            }
            prop_assert_eq!(&state.eaten_counts().0, &recount(&log, state.day(), k as u64, 7));
        }
    }
}
