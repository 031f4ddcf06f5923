//! CAR-Apriori: levelwise mining of frequent ruleitems and direct
//! generation of confident classification rules.
//!
//! A ruleitem pairs a condset with one class label; its support counts the
//! records that contain the condset and belong to that class, over all
//! records. The candidate lattice runs over condsets, and a condset is
//! carried to the next level while at least one of its two ruleitems is
//! frequent (downward closure holds per class).

use std::collections::{BTreeMap, HashSet};

use num_rational::Rational64;

use crate::dataset::{ClassCounts, ClassId, Dataset};
use crate::lattice::{
    count_supports, initial_candidates, self_join, subset_prune, Condset, LevelStats,
};
use crate::params::MinSupport;

/// A condset paired with one class label and its support count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ruleitem {
    pub condset: Condset,
    pub class: ClassId,
    /// Records containing the condset and belonging to the class.
    pub count: u64,
}

impl Ruleitem {
    pub fn support(&self, n_total: u64) -> Rational64 {
        Rational64::new(self.count as i64, n_total as i64)
    }
}

/// `condset -> class` with the ruleitem's support and the confidence
/// `ruleitem support / condset support`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassificationRule {
    pub condset: Condset,
    pub class: ClassId,
    pub support: Rational64,
    pub confidence: Rational64,
}

#[derive(Debug, Clone)]
pub struct CarMineOutcome {
    /// Frequent ruleitems in canonical order.
    pub ruleitems: Vec<Ruleitem>,
    /// Every condset with at least one frequent ruleitem, with exact counts.
    pub condsets: BTreeMap<Condset, ClassCounts>,
    pub levels: Vec<LevelStats>,
    pub n_total: u64,
}

/// Mines exactly the ruleitems whose support count reaches the threshold.
/// Same loop as the itemset miner with the frequency test applied per class.
pub fn mine_car_ruleitems(
    dataset: &Dataset,
    min_supp: MinSupport,
    threads: usize,
) -> CarMineOutcome {
    let threshold = min_supp.to_count(dataset.n_total());
    let mut ruleitems = Vec::new();
    let mut condsets = BTreeMap::new();
    let mut levels = Vec::new();
    let mut candidates = initial_candidates(dataset.schema());
    let mut level = 1;
    while !candidates.is_empty() {
        let table = count_supports(&candidates, dataset, threads);
        let mut kept = Vec::new();
        for (condset, counts) in table.entries() {
            let mut any = false;
            for class in ClassId::BOTH {
                if counts.get(class) >= threshold {
                    ruleitems.push(Ruleitem {
                        condset: condset.clone(),
                        class,
                        count: counts.get(class),
                    });
                    any = true;
                }
            }
            if any {
                condsets.insert(condset.clone(), *counts);
                kept.push(condset.clone());
            }
        }
        levels.push(LevelStats {
            level,
            generated: candidates.len(),
            kept: kept.len(),
        });
        let kept_set: HashSet<Condset> = kept.iter().cloned().collect();
        candidates = subset_prune(self_join(&kept), &kept_set);
        level += 1;
    }
    ruleitems.sort_unstable();
    CarMineOutcome {
        ruleitems,
        condsets,
        levels,
        n_total: dataset.n_total(),
    }
}

/// Forms the classification rule for each ruleitem and keeps those at or
/// above the confidence threshold. Condset supports must cover every
/// ruleitem's condset.
pub fn rules_from_ruleitems(
    ruleitems: &[Ruleitem],
    condset_counts: &BTreeMap<Condset, ClassCounts>,
    min_conf: Rational64,
    n_total: u64,
) -> Vec<ClassificationRule> {
    let mut rules = Vec::new();
    for ruleitem in ruleitems {
        let counts = condset_counts
            .get(&ruleitem.condset)
            .expect("condset support available for every ruleitem");
        let condset_count = counts.total();
        debug_assert!(condset_count >= ruleitem.count);
        let confidence = Rational64::new(ruleitem.count as i64, condset_count as i64);
        if confidence >= min_conf {
            rules.push(ClassificationRule {
                condset: ruleitem.condset.clone(),
                class: ruleitem.class,
                support: ruleitem.support(n_total),
                confidence,
            });
        }
    }
    rules.sort_unstable();
    rules
}

impl CarMineOutcome {
    pub fn rules(&self, min_conf: Rational64) -> Vec<ClassificationRule> {
        rules_from_ruleitems(&self.ruleitems, &self.condsets, min_conf, self.n_total)
    }
}
