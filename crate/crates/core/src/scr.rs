//! Direct mining of SCR-ruleitems and assembly of SCR-patterns.
//!
//! An SCR-ruleitem is a condset together with its support counts in both
//! classes. The miner runs the usual levelwise loop but filters each level
//! with a five-branch frequency-and-contrast test:
//!
//! 1. frequent in both classes            -> keep
//! 2. frequent in neither                 -> exclude
//! 3. frequent in one, all invariant      -> exclude
//! 4. frequent in one, no contrast pair
//!    frequent on the opposite class      -> exclude
//! 5. frequent in one, some contrast pair
//!    frequent on the opposite class      -> keep
//!
//! Excluded condsets suppress their supersets, so whole sublattices are
//! never counted. Two kept ruleitems later assemble into an SCR-pattern when
//! their classification rules satisfy all seven contrast conditions at the
//! requested confidence level.
//!
//! The contrast-pair relation between ruleitems is deliberately weaker than
//! the one between rules: single-attribute condsets are allowed, and when no
//! invariant attribute is present the varying values may all differ. The
//! stricter rule-level conditions are re-imposed during assembly.

use std::collections::{HashMap, HashSet};

use num_rational::Rational64;

use crate::car::ClassificationRule;
use crate::dataset::{AttributeSchema, ClassCounts, ClassId, Dataset};
use crate::lattice::{
    count_supports, initial_candidates, self_join, subset_prune, Condset, Item, LevelStats,
    SupportTable,
};
use crate::params::{MiningParams, MinSupport};

/// A condset with its exact per-class support counts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScrRuleitem {
    pub condset: Condset,
    pub counts: ClassCounts,
}

/// Which arm of the filter decided a ruleitem's fate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Frequent in both classes.
    FrequentBoth,
    /// Frequent in neither class.
    FrequentNone,
    /// Frequent in one class only, condset entirely invariant.
    AllInvariant,
    /// Frequent in one class only, no contrast pair frequent opposite.
    NoFrequentPair,
    /// Frequent in one class only, rescued by a contrast pair.
    FrequentPair,
}

impl Branch {
    pub fn number(self) -> u8 {
        match self {
            Branch::FrequentBoth => 1,
            Branch::FrequentNone => 2,
            Branch::AllInvariant => 3,
            Branch::NoFrequentPair => 4,
            Branch::FrequentPair => 5,
        }
    }

    pub fn keeps(self) -> bool {
        matches!(self, Branch::FrequentBoth | Branch::FrequentPair)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Keep,
    Exclude,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterDecision {
    pub ruleitem: ScrRuleitem,
    pub verdict: Verdict,
    pub branch: Branch,
}

/// The relaxed contrast-pair relation between SCR-ruleitems: same attribute
/// set, equal values on every invariant attribute, at least one varying
/// attribute with different values. Single-attribute condsets qualify and no
/// shared varying value is required.
pub fn is_contrast_pair_ruleitems(
    a: &ScrRuleitem,
    b: &ScrRuleitem,
    schema: &AttributeSchema,
) -> bool {
    condsets_are_relaxed_pair(&a.condset, &b.condset, schema)
}

fn condsets_are_relaxed_pair(a: &Condset, b: &Condset, schema: &AttributeSchema) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut varying_differs = false;
    for (ia, ib) in a.items().iter().zip(b.items()) {
        if ia.attr != ib.attr {
            return false;
        }
        if ia.value != ib.value {
            if schema.is_invariant(ia.attr as usize) {
                return false;
            }
            varying_differs = true;
        }
    }
    varying_differs
}

/// Applies the five-branch filter to one counted level. Decisions are
/// simultaneous: branch 4/5 pair lookups read the level exactly as counted,
/// never a partially filtered one. Thresholds are per class.
///
/// The returned decisions are sorted by condset, so the output does not
/// depend on the input order.
pub fn choose_frequent_and_contrast(
    level: &SupportTable,
    schema: &AttributeSchema,
    thresholds: (u64, u64),
) -> Vec<FilterDecision> {
    let entries = level.entries();
    let frequent: Vec<[bool; 2]> = entries
        .iter()
        .map(|(_, counts)| {
            [
                counts.get(ClassId::FIRST) >= thresholds.0,
                counts.get(ClassId::SECOND) >= thresholds.1,
            ]
        })
        .collect();

    // Group by (attribute set, invariant item values): two distinct members
    // of a group are exactly the relaxed contrast pairs of each other.
    let mut group_of = vec![0usize; entries.len()];
    let mut group_frequent: Vec<[u32; 2]> = Vec::new();
    {
        let mut groups: HashMap<(Vec<u16>, Vec<Item>), usize> = HashMap::new();
        for (idx, (condset, _)) in entries.iter().enumerate() {
            let attrs: Vec<u16> = condset.attrs().collect();
            let invariant_items: Vec<Item> = condset
                .items()
                .iter()
                .copied()
                .filter(|item| schema.is_invariant(item.attr as usize))
                .collect();
            let group = *groups
                .entry((attrs, invariant_items))
                .or_insert_with(|| {
                    group_frequent.push([0, 0]);
                    group_frequent.len() - 1
                });
            group_of[idx] = group;
            for class in 0..2 {
                if frequent[idx][class] {
                    group_frequent[group][class] += 1;
                }
            }
        }
    }

    let mut decisions: Vec<FilterDecision> = entries
        .iter()
        .enumerate()
        .map(|(idx, (condset, counts))| {
            let [f1, f2] = frequent[idx];
            let branch = match (f1, f2) {
                (true, true) => Branch::FrequentBoth,
                (false, false) => Branch::FrequentNone,
                _ => {
                    let all_invariant = condset
                        .attrs()
                        .all(|attr| schema.is_invariant(attr as usize));
                    if all_invariant {
                        Branch::AllInvariant
                    } else {
                        // The candidate itself is not frequent on the
                        // opposite class, so any frequent group member there
                        // is a genuine pair.
                        let opposite = if f1 { 1 } else { 0 };
                        if group_frequent[group_of[idx]][opposite] > 0 {
                            Branch::FrequentPair
                        } else {
                            Branch::NoFrequentPair
                        }
                    }
                }
            };
            FilterDecision {
                ruleitem: ScrRuleitem {
                    condset: condset.clone(),
                    counts: *counts,
                },
                verdict: if branch.keeps() {
                    Verdict::Keep
                } else {
                    Verdict::Exclude
                },
                branch,
            }
        })
        .collect();
    decisions.sort_unstable_by(|a, b| a.ruleitem.condset.cmp(&b.ruleitem.condset));
    decisions
}

#[derive(Debug, Clone)]
pub struct ScrMineOutcome {
    /// Kept SCR-ruleitems of all sizes, level by level in canonical order.
    pub kept: Vec<ScrRuleitem>,
    /// Every decision taken, including exclusions.
    pub decisions: Vec<FilterDecision>,
    pub levels: Vec<LevelStats>,
    pub n_total: u64,
}

/// The levelwise loop with the contrast filter in place of the plain
/// frequency test. Levels are generated by self-join plus subset pruning
/// over the kept condsets only, so excluded condsets suppress their whole
/// superset cone.
pub fn mine_scr_ruleitems(
    dataset: &Dataset,
    min_supp: MinSupport,
    threads: usize,
) -> ScrMineOutcome {
    let threshold = min_supp.to_count(dataset.n_total());
    let schema = dataset.schema();
    let mut kept = Vec::new();
    let mut decisions = Vec::new();
    let mut levels = Vec::new();
    let mut candidates = initial_candidates(schema);
    let mut level = 1;
    while !candidates.is_empty() {
        let table = count_supports(&candidates, dataset, threads);
        let level_decisions = choose_frequent_and_contrast(&table, schema, (threshold, threshold));
        let kept_level: Vec<Condset> = level_decisions
            .iter()
            .filter(|d| d.verdict == Verdict::Keep)
            .map(|d| d.ruleitem.condset.clone())
            .collect();
        levels.push(LevelStats {
            level,
            generated: candidates.len(),
            kept: kept_level.len(),
        });
        kept.extend(
            level_decisions
                .iter()
                .filter(|d| d.verdict == Verdict::Keep)
                .map(|d| d.ruleitem.clone()),
        );
        decisions.extend(level_decisions);
        let kept_set: HashSet<Condset> = kept_level.iter().cloned().collect();
        candidates = subset_prune(self_join(&kept_level), &kept_set);
        level += 1;
    }
    ScrMineOutcome {
        kept,
        decisions,
        levels,
        n_total: dataset.n_total(),
    }
}

/// Conditions 2-7 on a pair of classification rules: different classes, same
/// antecedent attributes, at least two attributes with one varying, equal
/// invariant values, a shared varying value when no invariant attribute is
/// present, and at least one differing varying value.
pub fn structural_contrast_conditions(
    condset1: &Condset,
    class1: ClassId,
    condset2: &Condset,
    class2: ClassId,
    schema: &AttributeSchema,
) -> bool {
    if class1 == class2 {
        return false;
    }
    if condset1.len() != condset2.len() || condset1.len() < 2 {
        return false;
    }
    let mut has_invariant = false;
    let mut has_varying = false;
    let mut varying_shared = false;
    let mut varying_differs = false;
    for (i1, i2) in condset1.items().iter().zip(condset2.items()) {
        if i1.attr != i2.attr {
            return false;
        }
        if schema.is_invariant(i1.attr as usize) {
            has_invariant = true;
            if i1.value != i2.value {
                return false;
            }
        } else {
            has_varying = true;
            if i1.value == i2.value {
                varying_shared = true;
            } else {
                varying_differs = true;
            }
        }
    }
    if !has_varying || !varying_differs {
        return false;
    }
    if !has_invariant && !varying_shared {
        return false;
    }
    true
}

/// All seven conditions of the contrast-pair definition for rules: both
/// confidences at or above alpha plus the structural conditions.
pub fn is_contrast_pair_rules(
    r1: &ClassificationRule,
    r2: &ClassificationRule,
    schema: &AttributeSchema,
    alpha: Rational64,
) -> bool {
    r1.confidence >= alpha
        && r2.confidence >= alpha
        && structural_contrast_conditions(&r1.condset, r1.class, &r2.condset, r2.class, schema)
}

/// An unordered pair of contrasting classification rules, stored with the
/// first-class rule first. `shared` holds the items with equal values in
/// both rules; `varying1`/`varying2` hold each rule's differing items.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ScrPattern {
    pub rule1: ClassificationRule,
    pub rule2: ClassificationRule,
    pub shared: Vec<Item>,
    pub varying1: Vec<Item>,
    pub varying2: Vec<Item>,
    pub alpha: Rational64,
}

impl ScrPattern {
    /// Builds the canonical form from the class-1 and class-2 rules.
    pub fn from_rules(
        rule_class1: ClassificationRule,
        rule_class2: ClassificationRule,
        alpha: Rational64,
    ) -> ScrPattern {
        assert_eq!(rule_class1.class, ClassId::FIRST);
        assert_eq!(rule_class2.class, ClassId::SECOND);
        let mut shared = Vec::new();
        let mut varying1 = Vec::new();
        let mut varying2 = Vec::new();
        for (i1, i2) in rule_class1
            .condset
            .items()
            .iter()
            .zip(rule_class2.condset.items())
        {
            debug_assert_eq!(i1.attr, i2.attr);
            if i1.value == i2.value {
                shared.push(*i1);
            } else {
                varying1.push(*i1);
                varying2.push(*i2);
            }
        }
        ScrPattern {
            rule1: rule_class1,
            rule2: rule_class2,
            shared,
            varying1,
            varying2,
            alpha,
        }
    }

    /// Identity of the pattern: the two condsets in class order.
    pub fn key(&self) -> (Condset, Condset) {
        (self.rule1.condset.clone(), self.rule2.condset.clone())
    }
}

/// Tries every unordered pair of kept ruleitems in both class directions,
/// forms the candidate rules with confidence `count_k / (count_1+count_2)`,
/// and emits the pairs that pass all seven contrast conditions with both
/// rule supports at or above the mining threshold. Output is deduplicated
/// and canonically sorted.
pub fn assemble_patterns(
    kept: &[ScrRuleitem],
    schema: &AttributeSchema,
    params: &MiningParams,
    n_total: u64,
) -> Vec<ScrPattern> {
    let threshold = params.min_supp.to_count(n_total);
    let alpha = params.min_conf;
    let mut patterns = Vec::new();
    for i in 0..kept.len() {
        for j in (i + 1)..kept.len() {
            let (a, b) = (&kept[i], &kept[j]);
            if a.condset.len() != b.condset.len() {
                continue;
            }
            for class_a in ClassId::BOTH {
                let class_b = class_a.other();
                let count_a = a.counts.get(class_a);
                let count_b = b.counts.get(class_b);
                if count_a < threshold || count_b < threshold {
                    continue;
                }
                let rule_a = rule_from_counts(a, class_a, n_total);
                let rule_b = rule_from_counts(b, class_b, n_total);
                if is_contrast_pair_rules(&rule_a, &rule_b, schema, alpha) {
                    let pattern = if class_a == ClassId::FIRST {
                        ScrPattern::from_rules(rule_a, rule_b, alpha)
                    } else {
                        ScrPattern::from_rules(rule_b, rule_a, alpha)
                    };
                    patterns.push(pattern);
                }
            }
        }
    }
    patterns.sort_unstable();
    patterns.dedup();
    patterns
}

fn rule_from_counts(ruleitem: &ScrRuleitem, class: ClassId, n_total: u64) -> ClassificationRule {
    let count = ruleitem.counts.get(class);
    let total = ruleitem.counts.total();
    ClassificationRule {
        condset: ruleitem.condset.clone(),
        class,
        support: Rational64::new(count as i64, n_total as i64),
        confidence: Rational64::new(count as i64, total as i64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::AttributeRole;
    use crate::testutil::{condset, example1_dataset, example2_dataset, example_schema};

    fn ruleitem(pairs: &[(usize, usize)], counts: (u64, u64)) -> ScrRuleitem {
        ScrRuleitem {
            condset: condset(pairs),
            counts: ClassCounts::new(counts.0, counts.1),
        }
    }

    fn table(entries: &[(&[(usize, usize)], (u64, u64))]) -> SupportTable {
        SupportTable::from_entries(
            entries
                .iter()
                .map(|(pairs, counts)| (condset(pairs), ClassCounts::new(counts.0, counts.1)))
                .collect(),
        )
    }

    fn branch_of(decisions: &[FilterDecision], pairs: &[(usize, usize)]) -> (u8, Verdict) {
        let c = condset(pairs);
        let d = decisions
            .iter()
            .find(|d| d.ruleitem.condset == c)
            .expect("decision present");
        (d.branch.number(), d.verdict)
    }

    // Schema reminder: A (attr 0) invariant, B (1) and C (2) varying.

    #[test]
    fn ruleitem_pairs_follow_the_relaxed_relation() {
        let schema = example_schema();
        // {A1,B1} vs {A1,B2}: invariant equal, varying differs.
        assert!(is_contrast_pair_ruleitems(
            &ruleitem(&[(0, 0), (1, 0)], (0, 0)),
            &ruleitem(&[(0, 0), (1, 1)], (0, 0)),
            &schema
        ));
        // {B1,C1} vs {B2,C2}: all varying values differ, still a pair.
        assert!(is_contrast_pair_ruleitems(
            &ruleitem(&[(1, 0), (2, 0)], (0, 0)),
            &ruleitem(&[(1, 1), (2, 1)], (0, 0)),
            &schema
        ));
        // {A1,B1} vs {A2,B2}: invariant values differ.
        assert!(!is_contrast_pair_ruleitems(
            &ruleitem(&[(0, 0), (1, 0)], (0, 0)),
            &ruleitem(&[(0, 1), (1, 1)], (0, 0)),
            &schema
        ));
        // {C2} vs {C1}: single varying attribute is allowed.
        assert!(is_contrast_pair_ruleitems(
            &ruleitem(&[(2, 1)], (0, 0)),
            &ruleitem(&[(2, 0)], (0, 0)),
            &schema
        ));
        // Identical condsets are not their own pair.
        assert!(!is_contrast_pair_ruleitems(
            &ruleitem(&[(2, 1)], (0, 0)),
            &ruleitem(&[(2, 1)], (0, 0)),
            &schema
        ));
        // Different attribute sets never pair.
        assert!(!is_contrast_pair_ruleitems(
            &ruleitem(&[(1, 0)], (0, 0)),
            &ruleitem(&[(2, 0)], (0, 0)),
            &schema
        ));
    }

    #[test]
    fn filter_branches_match_the_worked_examples() {
        let schema = example_schema();
        let thresholds = (2, 2);

        // Example 1, level 2: A1C1<4,5> branch 1, A1C2<1,1> and B2C2<0,0>
        // branch 2.
        let level = table(&[
            (&[(0, 0), (2, 0)], (4, 5)),
            (&[(0, 0), (2, 1)], (1, 1)),
            (&[(1, 1), (2, 1)], (0, 0)),
        ]);
        let decisions = choose_frequent_and_contrast(&level, &schema, thresholds);
        assert_eq!(
            branch_of(&decisions, &[(0, 0), (2, 0)]),
            (1, Verdict::Keep)
        );
        assert_eq!(
            branch_of(&decisions, &[(0, 0), (2, 1)]),
            (2, Verdict::Exclude)
        );
        assert_eq!(
            branch_of(&decisions, &[(1, 1), (2, 1)]),
            (2, Verdict::Exclude)
        );

        // Example 1, level 1: A2<5,0> is invariant-only, branch 3; C2<4,1>
        // is rescued by its pair C1<6,5>, branch 5.
        let level = table(&[
            (&[(0, 1)], (5, 0)),
            (&[(2, 1)], (4, 1)),
            (&[(2, 0)], (6, 5)),
        ]);
        let decisions = choose_frequent_and_contrast(&level, &schema, thresholds);
        assert_eq!(branch_of(&decisions, &[(0, 1)]), (3, Verdict::Exclude));
        assert_eq!(branch_of(&decisions, &[(2, 1)]), (5, Verdict::Keep));

        // Example 2, level 2: A1B1<2,1> has only the pair A1B2<3,1>, not
        // frequent on the second class, branch 4; B1C1<4,1> is rescued by
        // B2C2<1,4>, branch 5.
        let level = table(&[
            (&[(0, 0), (1, 0)], (2, 1)),
            (&[(0, 0), (1, 1)], (3, 1)),
            (&[(1, 0), (2, 0)], (4, 1)),
            (&[(1, 1), (2, 1)], (1, 4)),
        ]);
        let decisions = choose_frequent_and_contrast(&level, &schema, thresholds);
        assert_eq!(
            branch_of(&decisions, &[(0, 0), (1, 0)]),
            (4, Verdict::Exclude)
        );
        assert_eq!(branch_of(&decisions, &[(1, 0), (2, 0)]), (5, Verdict::Keep));
    }

    #[test]
    fn every_decision_is_one_branch_and_keep_iff_1_or_5() {
        let ds = example1_dataset();
        let mined = mine_scr_ruleitems(&ds, MinSupport::Count(2), 1);
        for decision in &mined.decisions {
            let keeps = decision.branch.keeps();
            assert_eq!(decision.verdict == Verdict::Keep, keeps);
            assert!(matches!(decision.branch.number(), 1..=5));
        }
    }

    #[test]
    fn excluded_subsets_suppress_supersets() {
        let ds = example1_dataset();
        let mined = mine_scr_ruleitems(&ds, MinSupport::Count(2), 1);
        // A2 falls to branch 3 at level 1, so A2B1C2<3,0> is never counted
        // even though it could form a frequent, confident rule.
        let a2b1c2 = condset(&[(0, 1), (1, 0), (2, 1)]);
        assert!(mined
            .decisions
            .iter()
            .all(|d| d.ruleitem.condset != a2b1c2));
        // Level sizes: 6 singletons, then 8 of the 12 pairs (the four
        // containing A2 are suppressed), then the 2 triples over A1..C1.
        let generated: Vec<usize> = mined.levels.iter().map(|l| l.generated).collect();
        assert_eq!(generated, vec![6, 8, 2]);
        let kept: Vec<usize> = mined.levels.iter().map(|l| l.kept).collect();
        assert_eq!(kept, vec![5, 6, 2]);
        assert_eq!(mined.kept.len(), 13);
    }

    #[test]
    fn example2_kept_set() {
        let ds = example2_dataset();
        let mined = mine_scr_ruleitems(&ds, MinSupport::Count(2), 1);
        let kept: Vec<usize> = mined.levels.iter().map(|l| l.kept).collect();
        assert_eq!(kept, vec![6, 8, 2]);
        // A1B1<2,1> went to branch 4.
        let a1b1 = condset(&[(0, 0), (1, 0)]);
        let decision = mined
            .decisions
            .iter()
            .find(|d| d.ruleitem.condset == a1b1)
            .unwrap();
        assert_eq!(decision.branch, Branch::NoFrequentPair);
    }

    #[test]
    fn all_frequent_dataset_keeps_the_car_condsets() {
        // Both classes see both values of the single varying attribute.
        let schema = crate::dataset::load_schema("B:varying\nCl:class").unwrap();
        let csv = "B,Cl\n1,x\n1,x\n2,x\n2,x\n1,y\n1,y\n2,y\n2,y\n";
        let ds = crate::dataset::load_dataset(csv.as_bytes(), &schema).unwrap();
        let mined = mine_scr_ruleitems(&ds, MinSupport::Count(2), 1);
        let car = crate::car::mine_car_ruleitems(&ds, MinSupport::Count(2), 1);
        let scr_condsets: Vec<&Condset> = mined.kept.iter().map(|r| &r.condset).collect();
        let car_condsets: Vec<&Condset> = car.condsets.keys().collect();
        assert_eq!(scr_condsets, car_condsets);
        assert!(mined
            .decisions
            .iter()
            .all(|d| d.branch == Branch::FrequentBoth));
    }

    #[test]
    fn empty_dataset_mines_nothing() {
        let schema = crate::dataset::AttributeSchema::with_domains(vec![
            ("A".into(), AttributeRole::Varying, vec!["1".into(), "2".into()]),
            ("Cl".into(), AttributeRole::Class, vec!["x".into(), "y".into()]),
        ])
        .unwrap();
        let ds = crate::dataset::Dataset::from_value_rows(schema, vec![]).unwrap();
        let mined = mine_scr_ruleitems(&ds, MinSupport::Ratio(Rational64::new(1, 10)), 1);
        assert!(mined.kept.is_empty());
    }

    fn rule(
        pairs: &[(usize, usize)],
        class: ClassId,
        confidence: Rational64,
    ) -> ClassificationRule {
        ClassificationRule {
            condset: condset(pairs),
            class,
            support: Rational64::new(1, 4),
            confidence,
        }
    }

    #[test]
    fn rule_pairs_require_all_seven_conditions() {
        let schema = example_schema();
        let half = Rational64::new(1, 2);
        // {A1,B1,C1} -> Cl2 at 2/3 with {A1,B2,C1} -> Cl1 at 1/2.
        let r1 = rule(&[(0, 0), (1, 0), (2, 0)], ClassId::SECOND, Rational64::new(2, 3));
        let r2 = rule(&[(0, 0), (1, 1), (2, 0)], ClassId::FIRST, half);
        assert!(is_contrast_pair_rules(&r1, &r2, &schema, half));
        // Same pair fails at alpha = 0.6.
        assert!(!is_contrast_pair_rules(
            &r1,
            &r2,
            &schema,
            Rational64::new(3, 5)
        ));
        // No invariant attribute and no shared varying value: condition 6.
        let r1 = rule(&[(1, 0), (2, 0)], ClassId::FIRST, Rational64::new(1, 1));
        let r2 = rule(&[(1, 1), (2, 1)], ClassId::SECOND, Rational64::new(1, 1));
        assert!(!is_contrast_pair_rules(&r1, &r2, &schema, half));
        // {A2,B1,C1} -> Cl1 at 1 with {A2,B2,C2} -> Cl2 at 0.8.
        let r1 = rule(&[(0, 1), (1, 0), (2, 0)], ClassId::FIRST, Rational64::new(1, 1));
        let r2 = rule(&[(0, 1), (1, 1), (2, 1)], ClassId::SECOND, Rational64::new(4, 5));
        assert!(is_contrast_pair_rules(&r1, &r2, &schema, half));
        // Same class never pairs.
        let r2_same = rule(&[(0, 1), (1, 1), (2, 1)], ClassId::FIRST, Rational64::new(1, 1));
        assert!(!is_contrast_pair_rules(&r1, &r2_same, &schema, half));
        // Single-attribute antecedents fail condition 4 for rules.
        let r1 = rule(&[(2, 0)], ClassId::FIRST, Rational64::new(1, 1));
        let r2 = rule(&[(2, 1)], ClassId::SECOND, Rational64::new(1, 1));
        assert!(!is_contrast_pair_rules(&r1, &r2, &schema, half));
    }

    #[test]
    fn pair_checks_are_symmetric() {
        let schema = example_schema();
        let half = Rational64::new(1, 2);
        let a = ruleitem(&[(0, 0), (1, 0)], (2, 1));
        let b = ruleitem(&[(0, 0), (1, 1)], (3, 1));
        assert_eq!(
            is_contrast_pair_ruleitems(&a, &b, &schema),
            is_contrast_pair_ruleitems(&b, &a, &schema)
        );
        let r1 = rule(&[(0, 0), (1, 0), (2, 0)], ClassId::SECOND, Rational64::new(2, 3));
        let r2 = rule(&[(0, 0), (1, 1), (2, 0)], ClassId::FIRST, half);
        assert_eq!(
            is_contrast_pair_rules(&r1, &r2, &schema, half),
            is_contrast_pair_rules(&r2, &r1, &schema, half)
        );
    }

    #[test]
    fn assembly_reproduces_the_cited_pattern() {
        let schema = example_schema();
        let kept = vec![
            ruleitem(&[(0, 0), (1, 0), (2, 0)], (1, 2)),
            ruleitem(&[(0, 0), (1, 1), (2, 0)], (3, 3)),
        ];
        let params = MiningParams::new(MinSupport::Count(2), Rational64::new(1, 2)).unwrap();
        let patterns = assemble_patterns(&kept, &schema, &params, 16);
        assert_eq!(patterns.len(), 1);
        let p = &patterns[0];
        // A1C1 is shared; B differs: B2 -> Cl1 at 1/2, B1 -> Cl2 at 2/3.
        assert_eq!(p.rule1.condset, condset(&[(0, 0), (1, 1), (2, 0)]));
        assert_eq!(p.rule1.confidence, Rational64::new(1, 2));
        assert_eq!(p.rule2.condset, condset(&[(0, 0), (1, 0), (2, 0)]));
        assert_eq!(p.rule2.confidence, Rational64::new(2, 3));
        assert_eq!(p.shared, vec![Item::new(0, 0), Item::new(2, 0)]);
        assert_eq!(p.varying1, vec![Item::new(1, 1)]);
        assert_eq!(p.varying2, vec![Item::new(1, 0)]);

        // At alpha = 0.6 the 1/2-confidence side fails and nothing is built.
        let strict = MiningParams::new(MinSupport::Count(2), Rational64::new(3, 5)).unwrap();
        assert!(assemble_patterns(&kept, &schema, &strict, 16).is_empty());
    }

    #[test]
    fn assembly_of_example2_matches_the_cited_pattern() {
        let schema = example_schema();
        let kept = vec![
            ruleitem(&[(0, 1), (1, 0), (2, 0)], (2, 0)),
            ruleitem(&[(0, 1), (1, 1), (2, 1)], (1, 4)),
        ];
        let params = MiningParams::new(MinSupport::Count(2), Rational64::new(1, 2)).unwrap();
        let patterns = assemble_patterns(&kept, &schema, &params, 14);
        assert_eq!(patterns.len(), 1);
        let p = &patterns[0];
        // {A2 / B1C1 -> Cl1, conf 1 : B2C2 -> Cl2, conf 0.8}.
        assert_eq!(p.rule1.confidence, Rational64::new(1, 1));
        assert_eq!(p.rule2.confidence, Rational64::new(4, 5));
        assert_eq!(p.shared, vec![Item::new(0, 1)]);
        assert_eq!(p.varying1, vec![Item::new(1, 0), Item::new(2, 0)]);
        assert_eq!(p.varying2, vec![Item::new(1, 1), Item::new(2, 1)]);
    }

    #[test]
    fn single_ruleitem_assembles_nothing() {
        let schema = example_schema();
        let kept = vec![ruleitem(&[(0, 0), (1, 0)], (5, 5))];
        let params = MiningParams::new(MinSupport::Count(1), Rational64::new(1, 2)).unwrap();
        assert!(assemble_patterns(&kept, &schema, &params, 10).is_empty());
    }

    #[test]
    fn filter_output_ignores_input_order() {
        let schema = example_schema();
        let entries = [
            (&[(0usize, 0usize), (1, 0)][..], (2u64, 1u64)),
            (&[(0, 0), (1, 1)][..], (3, 1)),
            (&[(1, 0), (2, 0)][..], (4, 1)),
            (&[(1, 1), (2, 1)][..], (1, 4)),
        ];
        let forward = choose_frequent_and_contrast(&table(&entries), &schema, (2, 2));
        let mut reversed_entries = entries;
        reversed_entries.reverse();
        let reversed = choose_frequent_and_contrast(&table(&reversed_entries), &schema, (2, 2));
        assert_eq!(forward, reversed);
    }
}
