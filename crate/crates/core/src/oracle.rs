//! Brute-force reference pipeline: exhaustively enumerate every condset,
//! count it with a naive record scan, form all frequent and confident
//! classification rules, and post-filter every rule pair through the
//! contrast-pair conditions.
//!
//! This path shares the seven-condition checker with the direct miner (one
//! source of truth for the definition) but none of the lattice pruning or
//! the frequency-and-contrast filter, so agreement between the two pattern
//! sets is meaningful evidence.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use thiserror::Error;

use crate::car::ClassificationRule;
use crate::dataset::{AttributeSchema, ClassCounts, ClassId, Dataset};
use crate::lattice::{Condset, Item};
use crate::params::MiningParams;
use crate::scr::{is_contrast_pair_rules, ScrPattern};

/// Default ceiling on the number of condsets the oracle will enumerate.
pub const DEFAULT_CONDSET_CAP: u64 = 2_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("schema spans {count} condsets, above the configured cap of {cap}")]
    CapExceeded { count: u128, cap: u64 },
}

/// What the reference pipeline saw at each stage.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub patterns: Vec<ScrPattern>,
    pub n_condsets: u64,
    pub n_frequent_condsets: u64,
    pub n_frequent_ruleitems: u64,
    pub n_confident_rules: u64,
    pub n_patterns: u64,
}

/// Number of condsets over the non-class attributes: the product of
/// (domain size + 1) minus the empty set.
pub fn condset_space_size(schema: &AttributeSchema) -> u128 {
    let mut product: u128 = 1;
    for attr_idx in schema.non_class_indices() {
        product = product.saturating_mul(schema.attr(attr_idx).domain().len() as u128 + 1);
    }
    product - 1
}

/// Every non-empty condset with at most one item per attribute, in
/// canonical order. Refuses with the computed count when the space exceeds
/// the cap.
pub fn enumerate_all_condsets(
    schema: &AttributeSchema,
    cap: u64,
) -> Result<Vec<Condset>, OracleError> {
    let count = condset_space_size(schema);
    if count > cap as u128 {
        return Err(OracleError::CapExceeded { count, cap });
    }
    let attrs: Vec<usize> = schema.non_class_indices().collect();
    let mut out = Vec::with_capacity(count as usize);
    let mut stack: Vec<Item> = Vec::new();
    enumerate_rec(schema, &attrs, 0, &mut stack, &mut out);
    out.sort_unstable();
    Ok(out)
}

fn enumerate_rec(
    schema: &AttributeSchema,
    attrs: &[usize],
    next: usize,
    stack: &mut Vec<Item>,
    out: &mut Vec<Condset>,
) {
    if next == attrs.len() {
        if !stack.is_empty() {
            out.push(Condset::new(stack.clone()).expect("stack holds distinct attributes"));
        }
        return;
    }
    // Skip this attribute entirely, then try each of its values.
    enumerate_rec(schema, attrs, next + 1, stack, out);
    let attr_idx = attrs[next];
    for value in 0..schema.attr(attr_idx).domain().len() {
        stack.push(Item::new(attr_idx, value));
        enumerate_rec(schema, attrs, next + 1, stack, out);
        stack.pop();
    }
}

/// Runs the whole reference pipeline. Counting here is an independent naive
/// scan per condset, not the shared level counter.
pub fn oracle_scr_patterns(
    dataset: &Dataset,
    params: &MiningParams,
    cap: u64,
) -> Result<OracleReport, OracleError> {
    let schema = dataset.schema();
    let condsets = enumerate_all_condsets(schema, cap)?;
    let threshold = params.min_supp.to_count(dataset.n_total());
    let n_total = dataset.n_total();

    let mut n_frequent_condsets = 0u64;
    let mut n_frequent_ruleitems = 0u64;
    let mut rules: Vec<ClassificationRule> = Vec::new();
    for condset in &condsets {
        let mut counts = ClassCounts::ZERO;
        for (row_idx, row) in dataset.rows().enumerate() {
            if condset.matches_row(row) {
                counts.bump(dataset.row_class(row_idx));
            }
        }
        let mut any_frequent = false;
        for class in ClassId::BOTH {
            let count = counts.get(class);
            if count < threshold {
                continue;
            }
            any_frequent = true;
            n_frequent_ruleitems += 1;
            let confidence = Rational64::new(count as i64, counts.total() as i64);
            if confidence >= params.min_conf {
                rules.push(ClassificationRule {
                    condset: condset.clone(),
                    class,
                    support: Rational64::new(count as i64, n_total as i64),
                    confidence,
                });
            }
        }
        if any_frequent {
            n_frequent_condsets += 1;
        }
    }
    let n_confident_rules = rules.len() as u64;

    // Condition 3 partitions candidate pairs by antecedent attribute set;
    // every pair within a group is tested with the shared checker.
    let mut groups: BTreeMap<Vec<u16>, Vec<usize>> = BTreeMap::new();
    for (idx, rule) in rules.iter().enumerate() {
        groups.entry(rule.condset.attrs().collect()).or_default().push(idx);
    }
    let mut patterns: BTreeSet<ScrPattern> = BTreeSet::new();
    for members in groups.values() {
        for (pos, &i) in members.iter().enumerate() {
            for &j in &members[pos + 1..] {
                let (a, b) = (&rules[i], &rules[j]);
                if is_contrast_pair_rules(a, b, schema, params.min_conf) {
                    let (first, second) = if a.class == ClassId::FIRST {
                        (a.clone(), b.clone())
                    } else {
                        (b.clone(), a.clone())
                    };
                    patterns.insert(ScrPattern::from_rules(first, second, params.min_conf));
                }
            }
        }
    }

    let patterns: Vec<ScrPattern> = patterns.into_iter().collect();
    Ok(OracleReport {
        n_condsets: condsets.len() as u64,
        n_frequent_condsets,
        n_frequent_ruleitems,
        n_confident_rules,
        n_patterns: patterns.len() as u64,
        patterns,
    })
}

/// Set difference of two canonical pattern lists.
#[derive(Debug, Clone, Default)]
pub struct PatternDiff {
    pub missing_from_a: Vec<ScrPattern>,
    pub missing_from_b: Vec<ScrPattern>,
}

impl PatternDiff {
    pub fn is_empty(&self) -> bool {
        self.missing_from_a.is_empty() && self.missing_from_b.is_empty()
    }
}

pub fn compare_pattern_sets(a: &[ScrPattern], b: &[ScrPattern]) -> PatternDiff {
    let set_a: BTreeSet<&ScrPattern> = a.iter().collect();
    let set_b: BTreeSet<&ScrPattern> = b.iter().collect();
    PatternDiff {
        missing_from_a: set_b.difference(&set_a).map(|p| (*p).clone()).collect(),
        missing_from_b: set_a.difference(&set_b).map(|p| (*p).clone()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::load_schema;
    use crate::params::MinSupport;
    use crate::scr::{assemble_patterns, mine_scr_ruleitems};
    use crate::testutil::{condset, example1_dataset, example2_dataset, example_schema};

    #[test]
    fn enumerates_the_full_lattice() {
        // Three binary attributes: 3^3 - 1 = 26 condsets.
        let schema = example_schema();
        let condsets = enumerate_all_condsets(&schema, 1000).unwrap();
        assert_eq!(condsets.len(), 26);

        let single = load_schema("A:varying\nCl:class").unwrap();
        // Domains are observed, so declare them through a loaded dataset.
        let ds =
            crate::dataset::load_dataset("A,Cl\n1,x\n2,y\n".as_bytes(), &single).unwrap();
        assert_eq!(enumerate_all_condsets(ds.schema(), 1000).unwrap().len(), 2);
    }

    #[test]
    fn refuses_and_reports_when_over_cap() {
        let schema = example_schema();
        let err = enumerate_all_condsets(&schema, 10).unwrap_err();
        assert_eq!(
            err,
            OracleError::CapExceeded {
                count: 26,
                cap: 10
            }
        );
    }

    #[test]
    fn finds_the_cited_pattern_on_example1() {
        let ds = example1_dataset();
        let params =
            MiningParams::new(MinSupport::Count(2), Rational64::new(1, 2)).unwrap();
        let report = oracle_scr_patterns(&ds, &params, DEFAULT_CONDSET_CAP).unwrap();
        // {A1C1/B1 -> Cl2 : A1C1/B2 -> Cl1} must be present.
        let rule1_condset = condset(&[(0, 0), (1, 1), (2, 0)]);
        let rule2_condset = condset(&[(0, 0), (1, 0), (2, 0)]);
        assert!(report
            .patterns
            .iter()
            .any(|p| p.rule1.condset == rule1_condset && p.rule2.condset == rule2_condset));
        assert!(report.n_confident_rules <= report.n_frequent_ruleitems);
        assert!(report.n_frequent_condsets <= report.n_condsets);
    }

    #[test]
    fn impossible_thresholds_produce_nothing() {
        let ds = example1_dataset();
        // Threshold above the larger class size, alpha = 1.
        let params =
            MiningParams::new(MinSupport::Count(11), Rational64::new(1, 1)).unwrap();
        let report = oracle_scr_patterns(&ds, &params, DEFAULT_CONDSET_CAP).unwrap();
        assert!(report.patterns.is_empty());
        assert_eq!(report.n_frequent_ruleitems, 0);
    }

    #[test]
    fn agrees_with_the_direct_miner_on_the_examples() {
        for ds in [example1_dataset(), example2_dataset()] {
            let params =
                MiningParams::new(MinSupport::Count(2), Rational64::new(1, 2)).unwrap();
            let mined = mine_scr_ruleitems(&ds, params.min_supp, 1);
            let direct =
                assemble_patterns(&mined.kept, ds.schema(), &params, ds.n_total());
            let report = oracle_scr_patterns(&ds, &params, DEFAULT_CONDSET_CAP).unwrap();
            let diff = compare_pattern_sets(&direct, &report.patterns);
            assert!(diff.is_empty(), "diff: {diff:?}");
            assert_eq!(direct.len(), 4);
        }
    }

    #[test]
    fn diff_reports_both_directions() {
        let ds = example2_dataset();
        let params =
            MiningParams::new(MinSupport::Count(2), Rational64::new(1, 2)).unwrap();
        let report = oracle_scr_patterns(&ds, &params, DEFAULT_CONDSET_CAP).unwrap();
        let full = report.patterns.clone();
        assert!(compare_pattern_sets(&full, &full).is_empty());

        let truncated = full[1..].to_vec();
        let diff = compare_pattern_sets(&truncated, &full);
        assert_eq!(diff.missing_from_a.len(), 1);
        assert!(diff.missing_from_b.is_empty());

        let left = vec![full[0].clone()];
        let right = vec![full[1].clone()];
        let diff = compare_pattern_sets(&left, &right);
        assert_eq!(diff.missing_from_a.len(), 1);
        assert_eq!(diff.missing_from_b.len(), 1);
    }
}
