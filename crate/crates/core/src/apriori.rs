//! Classic Apriori: levelwise mining of all frequent itemsets followed by
//! confident-rule generation. Here the class column is treated as a regular
//! attribute, so classification rules fall out of a post-filter on the rule
//! set. This is the baseline the direct miners are proved equivalent to.

use std::collections::{BTreeMap, HashSet};

use num_rational::Rational64;

use crate::car::ClassificationRule;
use crate::dataset::{AttributeSchema, ClassCounts, ClassId, Dataset};
use crate::lattice::{
    count_supports, initial_candidates_with_class, self_join, subset_prune, Condset, LevelStats,
};
use crate::params::MinSupport;

/// All frequent itemsets with their exact per-class counts (whole-dataset
/// support is the sum of the pair).
#[derive(Debug, Clone)]
pub struct FrequentItemsets {
    pub itemsets: BTreeMap<Condset, ClassCounts>,
    pub levels: Vec<LevelStats>,
    pub n_total: u64,
}

impl FrequentItemsets {
    pub fn support_count(&self, itemset: &Condset) -> Option<u64> {
        self.itemsets.get(itemset).map(|c| c.total())
    }
}

/// An induction rule `antecedent -> consequent` over disjoint itemsets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AssociationRule {
    pub antecedent: Condset,
    pub consequent: Condset,
    /// Support of the union, as a fraction of all records.
    pub support: Rational64,
    pub confidence: Rational64,
}

/// Mines every itemset whose support count reaches the threshold, looping
/// levelwise: filter the counted level, collect survivors, self-join them
/// into the next level, stop when a filtered level comes out empty.
pub fn mine_frequent_itemsets(
    dataset: &Dataset,
    min_supp: MinSupport,
    threads: usize,
) -> FrequentItemsets {
    let threshold = min_supp.to_count(dataset.n_total());
    let mut itemsets = BTreeMap::new();
    let mut levels = Vec::new();
    let mut candidates = initial_candidates_with_class(dataset.schema());
    let mut level = 1;
    while !candidates.is_empty() {
        let table = count_supports(&candidates, dataset, threads);
        let survivors: Vec<(Condset, ClassCounts)> = table
            .entries()
            .iter()
            .filter(|(_, counts)| counts.total() >= threshold)
            .cloned()
            .collect();
        levels.push(LevelStats {
            level,
            generated: candidates.len(),
            kept: survivors.len(),
        });
        let kept: Vec<Condset> = survivors.iter().map(|(c, _)| c.clone()).collect();
        itemsets.extend(survivors);
        let kept_set: HashSet<Condset> = kept.iter().cloned().collect();
        candidates = subset_prune(self_join(&kept), &kept_set);
        level += 1;
    }
    FrequentItemsets {
        itemsets,
        levels,
        n_total: dataset.n_total(),
    }
}

/// Builds every rule `(c - beta) -> beta` over the frequent itemsets `c` and
/// their non-empty proper subsets `beta`, keeping those at or above the
/// confidence threshold. Subsets are enumerated directly; the datasets in
/// scope have few attributes.
pub fn generate_rules(frequent: &FrequentItemsets, min_conf: Rational64) -> Vec<AssociationRule> {
    let mut rules = Vec::new();
    for (itemset, counts) in &frequent.itemsets {
        let k = itemset.len();
        if k < 2 {
            continue;
        }
        let union_count = counts.total();
        let support = ratio(union_count, frequent.n_total);
        // Masks skip 0 (empty consequent) and full (empty antecedent).
        for mask in 1..((1u64 << k) - 1) {
            let (consequent, antecedent) = itemset.split_by_mask(mask);
            let (consequent, antecedent) = (consequent.unwrap(), antecedent.unwrap());
            let antecedent_count = frequent
                .support_count(&antecedent)
                .expect("frequent set is downward-closed");
            let confidence = ratio(union_count, antecedent_count);
            if confidence >= min_conf {
                rules.push(AssociationRule {
                    antecedent,
                    consequent,
                    support,
                    confidence,
                });
            }
        }
    }
    rules.sort_unstable();
    rules
}

/// Keeps exactly the rules whose consequent is a single class-attribute item
/// and converts them to classification rules.
pub fn classification_rules_via_postfilter(
    rules: &[AssociationRule],
    schema: &AttributeSchema,
) -> Vec<ClassificationRule> {
    let class_attr = schema.class_index() as u16;
    let mut out: Vec<ClassificationRule> = rules
        .iter()
        .filter(|rule| {
            rule.consequent.len() == 1 && rule.consequent.items()[0].attr == class_attr
        })
        .map(|rule| ClassificationRule {
            condset: rule.antecedent.clone(),
            class: ClassId::from_index(rule.consequent.items()[0].value as usize),
            support: rule.support,
            confidence: rule.confidence,
        })
        .collect();
    out.sort_unstable();
    out
}

fn ratio(numerator: u64, denominator: u64) -> Rational64 {
    Rational64::new(numerator as i64, denominator as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::AttributeRole;
    use crate::testutil::{condset, example1_dataset};

    #[test]
    fn example1_a1c1_is_frequent_with_count_9() {
        let ds = example1_dataset();
        let frequent = mine_frequent_itemsets(&ds, MinSupport::Count(2), 1);
        // A1C1 has per-class counts <4,5>.
        let a1c1 = condset(&[(0, 0), (2, 0)]);
        assert_eq!(frequent.support_count(&a1c1), Some(9));
    }

    #[test]
    fn min_supp_one_over_n_keeps_every_observed_itemset() {
        let ds = example1_dataset();
        let all = mine_frequent_itemsets(
            &ds,
            MinSupport::Ratio(Rational64::new(1, ds.n_total() as i64)),
            1,
        );
        // Every single observed item is frequent, none with count 0 appears.
        assert!(all.itemsets.values().all(|c| c.total() >= 1));
        let a1 = condset(&[(0, 0)]);
        assert!(all.itemsets.contains_key(&a1));
    }

    #[test]
    fn empty_dataset_mines_nothing() {
        let schema = crate::dataset::AttributeSchema::with_domains(vec![
            ("A".into(), AttributeRole::Varying, vec!["1".into()]),
            ("Cl".into(), AttributeRole::Class, vec!["x".into(), "y".into()]),
        ])
        .unwrap();
        let ds = crate::dataset::Dataset::from_value_rows(schema, vec![]).unwrap();
        let frequent = mine_frequent_itemsets(&ds, MinSupport::Ratio(Rational64::new(1, 10)), 1);
        assert!(frequent.itemsets.is_empty());
        assert!(generate_rules(&frequent, Rational64::new(1, 2)).is_empty());
    }

    #[test]
    fn class_consequent_confidence_from_cited_counts() {
        let ds = example1_dataset();
        let frequent = mine_frequent_itemsets(&ds, MinSupport::Count(2), 1);
        let rules = generate_rules(&frequent, Rational64::new(0, 1));
        // c = {A1, C1, Cl2}, beta = {Cl2}: confidence 5/9 from A1C1<4,5>.
        let rule = rules
            .iter()
            .find(|r| {
                r.antecedent == condset(&[(0, 0), (2, 0)])
                    && r.consequent == condset(&[(3, 1)])
            })
            .expect("rule {A1,C1} -> {Cl2} exists");
        assert_eq!(rule.confidence, Rational64::new(5, 9));
        assert_eq!(rule.support, Rational64::new(5, 16));
    }

    #[test]
    fn rules_never_have_empty_sides() {
        let ds = example1_dataset();
        let frequent = mine_frequent_itemsets(&ds, MinSupport::Count(2), 1);
        // minConf 0 emits every rule from every frequent itemset.
        let rules = generate_rules(&frequent, Rational64::new(0, 1));
        assert!(!rules.is_empty());
        for rule in &rules {
            assert!(!rule.antecedent.is_empty());
            assert!(!rule.consequent.is_empty());
            let expected: usize = rule.antecedent.len() + rule.consequent.len();
            let union: std::collections::HashSet<_> = rule
                .antecedent
                .items()
                .iter()
                .chain(rule.consequent.items())
                .collect();
            assert_eq!(union.len(), expected, "antecedent and consequent overlap");
        }
    }

    #[test]
    fn postfilter_keeps_only_single_class_consequents() {
        let ds = example1_dataset();
        let frequent = mine_frequent_itemsets(&ds, MinSupport::Count(2), 1);
        let rules = generate_rules(&frequent, Rational64::new(1, 100));
        let classification = classification_rules_via_postfilter(&rules, ds.schema());
        assert!(!classification.is_empty());
        // {A1} -> {C1} style rules and multi-item consequents are gone.
        let class_attr = ds.schema().class_index() as u16;
        for rule in &classification {
            assert!(!rule.condset.contains_attr(class_attr));
        }
        let total_with_class_in_consequent = rules
            .iter()
            .filter(|r| r.consequent.len() == 1 && r.consequent.items()[0].attr == class_attr)
            .count();
        assert_eq!(classification.len(), total_with_class_in_consequent);
    }

    #[test]
    fn output_is_downward_closed() {
        let ds = example1_dataset();
        let frequent = mine_frequent_itemsets(&ds, MinSupport::Count(2), 1);
        for itemset in frequent.itemsets.keys() {
            for drop in 0..itemset.len() {
                if let Some(subset) = itemset.without_index(drop) {
                    assert!(
                        frequent.itemsets.contains_key(&subset),
                        "{subset:?} missing below {itemset:?}"
                    );
                }
            }
        }
    }
}
