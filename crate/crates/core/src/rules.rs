//! `is_required` knowledge graph inferred from taught setups.
//!
//! For every food, the taught setups containing it are examined once for
//! utensil companions and once for food companions. Within those setups the
//! pairwise conditional probabilities P(j|l) of companions form an m×m
//! dependency matrix; companions that never co-occur with any other companion
//! become singleton requirements and groups that always co-occur become
//! joint requirements. The exact companion set of every supporting setup is
//! kept as a witness so the training data always satisfies its own rules.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::conceptspace::{Catalog, FoodContextLv, ObjectClass, ObjectId, ObjectLv};
use crate::error::{Error, Result};

/// One alternative set of companions; ids ascending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Combo(Vec<ObjectId>);

impl Combo {
    pub fn new(ids: impl IntoIterator<Item = ObjectId>) -> Self {
        let mut ids: Vec<_> = ids.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        Combo(ids)
    }

    pub fn ids(&self) -> &[ObjectId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn satisfied_by(&self, lv: &ObjectLv) -> bool {
        self.0.iter().all(|id| lv.get(*id))
    }

    fn missing_from(&self, lv: &ObjectLv) -> Vec<ObjectId> {
        self.0.iter().copied().filter(|id| !lv.get(*id)).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RequiredCombos {
    /// The food was seen at least once without any companion of this class.
    pub none_ok: bool,
    /// All alternatives: inferred from the dependency matrix plus witnesses.
    pub combos: BTreeSet<Combo>,
    /// The subset of `combos` derived from the dependency matrix.
    pub inferred: BTreeSet<Combo>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyRule {
    pub food: ObjectId,
    pub utensils: RequiredCombos,
    pub foods: RequiredCombos,
}

impl DependencyRule {
    pub fn companions(&self, class: ObjectClass) -> &RequiredCombos {
        match class {
            ObjectClass::Utensil => &self.utensils,
            ObjectClass::Food => &self.foods,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnowledgeGraph {
    pub rules: BTreeMap<ObjectId, DependencyRule>,
    pub built_from: usize,
}

impl KnowledgeGraph {
    pub fn rule(&self, food: ObjectId) -> Option<&DependencyRule> {
        self.rules.get(&food)
    }
}

/// P(j|l): among `lvs` containing `l`, the fraction that also contain `j`.
/// `None` when no LV contains `l`.
pub fn conditional_prob(j: ObjectId, l: ObjectId, lvs: &[FoodContextLv]) -> Result<Option<f64>> {
    if j == l {
        return Err(Error::SameItem);
    }
    if let Some(view) = lvs.first() {
        if view.class_of(j).is_none() || view.class_of(j) != view.class_of(l) {
            return Err(Error::ClassMismatch(j.0, l.0));
        }
    }
    let with_l = lvs.iter().filter(|v| v.contains(l)).count();
    if with_l == 0 {
        return Ok(None);
    }
    let both = lvs.iter().filter(|v| v.contains(l) && v.contains(j)).count();
    Ok(Some(both as f64 / with_l as f64))
}

/// Fraction of the LVs containing food `food` that hold no other item of `class`.
pub fn no_companion_prob(food: ObjectId, class: ObjectClass, lvs: &[FoodContextLv]) -> Result<f64> {
    let with_food: Vec<_> = lvs.iter().filter(|v| v.contains(food)).collect();
    if with_food.is_empty() {
        return Err(Error::FoodUnseen(food.0));
    }
    let alone = with_food
        .iter()
        .filter(|v| v.present(class).all(|id| id == food))
        .count();
    Ok(alone as f64 / with_food.len() as f64)
}

fn required_combos(food: ObjectId, class: ObjectClass, restricted: &[FoodContextLv]) -> RequiredCombos {
    let none_ok = no_companion_prob(food, class, restricted).map(|p| p > 0.0).unwrap_or(true);

    let companions: Vec<ObjectId> = restricted
        .iter()
        .flat_map(|v| v.present(class))
        .filter(|id| *id != food)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let m = companions.len();
    // dependency[a][b] = P(companions[a] | companions[b])
    let mut dependency = vec![vec![0.0; m]; m];
    for a in 0..m {
        for b in 0..m {
            if a != b {
                dependency[a][b] = conditional_prob(companions[a], companions[b], restricted)
                    .ok()
                    .flatten()
                    .unwrap_or(0.0);
            }
        }
    }

    let mut inferred = BTreeSet::new();
    for a in 0..m {
        if (0..m).filter(|b| *b != a).all(|b| dependency[a][b] == 0.0) {
            inferred.insert(Combo::new([companions[a]]));
        }
    }
    let mut grouped = vec![false; m];
    for a in 0..m {
        if grouped[a] {
            continue;
        }
        let group: Vec<usize> = (a..m)
            .filter(|b| *b == a || (dependency[a][*b] == 1.0 && dependency[*b][a] == 1.0))
            .collect();
        for b in &group {
            grouped[*b] = true;
        }
        if group.len() >= 2 {
            inferred.insert(Combo::new(group.iter().map(|b| companions[*b])));
        }
    }

    let mut combos = inferred.clone();
    for view in restricted {
        let witness = Combo::new(view.present(class).filter(|id| *id != food));
        if !witness.is_empty() {
            combos.insert(witness);
        }
    }

    RequiredCombos {
        none_ok,
        combos,
        inferred,
    }
}

/// Rebuild the knowledge graph from scratch over the taught setups.
pub fn infer_rules<'a>(lvs: impl IntoIterator<Item = &'a ObjectLv>, catalog: &Catalog) -> Result<KnowledgeGraph> {
    let views = lvs
        .into_iter()
        .map(|lv| catalog.food_context_view(lv))
        .collect::<Result<Vec<_>>>()?;

    let mut rules = BTreeMap::new();
    for food in catalog.ids_of_class(ObjectClass::Food) {
        let restricted: Vec<FoodContextLv> = views.iter().filter(|v| v.contains(food)).cloned().collect();
        if restricted.is_empty() {
            continue;
        }
        rules.insert(
            food,
            DependencyRule {
                food,
                utensils: required_combos(food, ObjectClass::Utensil, &restricted),
                foods: required_combos(food, ObjectClass::Food, &restricted),
            },
        );
    }
    Ok(KnowledgeGraph {
        rules,
        built_from: views.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub food: ObjectId,
    pub missing_class: ObjectClass,
    pub candidates: Vec<Combo>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub valid: bool,
    pub no_food: bool,
    pub violations: Vec<Violation>,
    /// Present foods that no taught setup contains; they pass unchecked.
    pub unruled_foods: Vec<ObjectId>,
}

fn requirement_met(rule: &DependencyRule, class: ObjectClass, lv: &ObjectLv, catalog: &Catalog) -> bool {
    let req = rule.companions(class);
    if req.none_ok || req.combos.iter().any(|c| c.satisfied_by(lv)) {
        return true;
    }
    // A food taught only with other foods is fine next to any other food;
    // the combos decide what gets added when it would be served alone.
    class == ObjectClass::Food
        && lv
            .ones()
            .any(|id| id != rule.food && catalog.class_of(id) == ObjectClass::Food)
}

pub fn validate(lv: &ObjectLv, kg: &KnowledgeGraph, catalog: &Catalog) -> Result<ValidationReport> {
    catalog.check_dim(lv)?;
    let foods: Vec<ObjectId> = lv
        .ones()
        .filter(|id| catalog.class_of(*id) == ObjectClass::Food)
        .collect();
    let mut report = ValidationReport {
        no_food: foods.is_empty(),
        ..Default::default()
    };
    for food in foods {
        let Some(rule) = kg.rule(food) else {
            report.unruled_foods.push(food);
            continue;
        };
        for class in [ObjectClass::Utensil, ObjectClass::Food] {
            if !requirement_met(rule, class, lv, catalog) {
                report.violations.push(Violation {
                    food,
                    missing_class: class,
                    candidates: rule.companions(class).combos.iter().cloned().collect(),
                });
            }
        }
    }
    report.valid = !report.no_food && report.violations.is_empty();
    Ok(report)
}

/// Add the missing companions of unsatisfied foods until the setup validates.
///
/// Each round picks, over all candidate combos of all violations, the one
/// with the fewest missing items, then the one that clears the most
/// violations, then the lowest missing ids. Bits are only ever added.
pub fn fix(lv: &ObjectLv, kg: &KnowledgeGraph, catalog: &Catalog) -> Result<ObjectLv> {
    catalog.check_dim(lv)?;
    if !catalog.has_food(lv) {
        return Err(Error::NoFoodItem);
    }
    let mut current = lv.clone();
    for _ in 0..=catalog.len() {
        let report = validate(&current, kg, catalog)?;
        if report.valid {
            return Ok(current);
        }

        let mut best: Option<(usize, std::cmp::Reverse<usize>, Vec<ObjectId>)> = None;
        for violation in &report.violations {
            for combo in &violation.candidates {
                if combo.ids().iter().any(|id| id.0 >= catalog.len()) {
                    return Err(Error::Unsatisfiable(violation.food.0));
                }
                let missing = combo.missing_from(&current);
                let mut candidate = current.clone();
                for id in &missing {
                    candidate.set(*id);
                }
                let cleared = report
                    .violations
                    .iter()
                    .filter(|v| {
                        let rule = &kg.rules[&v.food];
                        requirement_met(rule, v.missing_class, &candidate, catalog)
                    })
                    .count();
                let key = (missing.len(), std::cmp::Reverse(cleared), missing);
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            }
        }
        let Some((_, _, missing)) = best else {
            return Err(Error::Unsatisfiable(report.violations[0].food.0));
        };
        for id in missing {
            current.set(id);
        }
    }
    Err(Error::Unsatisfiable(
        validate(&current, kg, catalog)?
            .violations
            .first()
            .map_or(0, |v| v.food.0),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct CompanionView {
    pub none_ok: bool,
    pub combos: Vec<Vec<String>>,
    pub inferred: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RuleView {
    pub food: String,
    pub food_id: ObjectId,
    pub utensils: CompanionView,
    pub foods: CompanionView,
}

/// Name-resolved rules in ascending food id order.
pub fn rule_views(kg: &KnowledgeGraph, catalog: &Catalog) -> Vec<RuleView> {
    let names = |set: &BTreeSet<Combo>| -> Vec<Vec<String>> {
        set.iter()
            .map(|c| c.ids().iter().map(|id| catalog.name(*id).to_string()).collect())
            .collect()
    };
    let view = |req: &RequiredCombos| CompanionView {
        none_ok: req.none_ok,
        combos: names(&req.combos),
        inferred: names(&req.inferred),
    };
    kg.rules
        .values()
        .map(|rule| RuleView {
            food: catalog.name(rule.food).to_string(),
            food_id: rule.food,
            utensils: view(&rule.utensils),
            foods: view(&rule.foods),
        })
        .collect()
}

/// Plain-text dump, byte-stable for a given graph and catalog.
///
/// ```text
/// milk
///   utensils: none_ok=false
///     - cup [inferred]
///     - bowl, spoon [inferred]
/// ```
pub fn dump(kg: &KnowledgeGraph, catalog: &Catalog) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# rules inferred from {} setups", kg.built_from);
    for rule in kg.rules.values() {
        let _ = writeln!(out, "{}", catalog.name(rule.food));
        for (label, req) in [("utensils", &rule.utensils), ("foods", &rule.foods)] {
            let _ = writeln!(out, "  {label}: none_ok={}", req.none_ok);
            for combo in &req.combos {
                let names: Vec<&str> = combo.ids().iter().map(|id| catalog.name(*id)).collect();
                let tag = if req.inferred.contains(combo) { " [inferred]" } else { "" };
                let _ = writeln!(out, "    - {}{tag}", names.join(", "));
            }
        }
    }
    out
}
