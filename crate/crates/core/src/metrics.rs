//! Quality measures and pruning statistics.
//!
//! Two support normalizations coexist on purpose: growth rate divides
//! within-class supports (`count_k / n_class_k`), while ruleitem frequency
//! divides by the whole record count (`count_k / n_total`). Functions name
//! the one they use.

use num_rational::Rational64;
use thiserror::Error;

use crate::dataset::{ClassCounts, ClassId, Dataset};
use crate::lattice::Condset;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("growth rate undefined: the condset has zero support in both classes")]
    UndefinedGrowthRate,
}

/// Ratio of within-class supports between two classes; infinite when the
/// condset never occurs in the source class but does in the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthRate {
    Finite(Rational64),
    Infinite,
}

impl GrowthRate {
    pub fn at_least(self, rho: Rational64) -> bool {
        match self {
            GrowthRate::Finite(v) => v >= rho,
            GrowthRate::Infinite => true,
        }
    }
}

/// A growth rate together with its direction: emerging `from` one class
/// `to` the other, i.e. `supp_to / supp_from`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowthRateValue {
    pub value: GrowthRate,
    pub from: ClassId,
    pub to: ClassId,
}

/// Growth rate of a condset on a dataset. Within-class supports are
/// `count_k / n_class_k`; an empty class contributes support zero.
pub fn growth_rate(
    condset: &Condset,
    dataset: &Dataset,
    from: ClassId,
    to: ClassId,
) -> Result<GrowthRateValue, MetricsError> {
    let mut counts = ClassCounts::ZERO;
    for (row_idx, row) in dataset.rows().enumerate() {
        if condset.matches_row(row) {
            counts.bump(dataset.row_class(row_idx));
        }
    }
    growth_rate_from_counts(counts, dataset.class_record_counts(), from, to)
}

/// Growth rate from precomputed per-class support counts and class sizes.
pub fn growth_rate_from_counts(
    counts: ClassCounts,
    class_sizes: ClassCounts,
    from: ClassId,
    to: ClassId,
) -> Result<GrowthRateValue, MetricsError> {
    let supp = |class: ClassId| -> Rational64 {
        let size = class_sizes.get(class);
        if size == 0 {
            Rational64::new(0, 1)
        } else {
            Rational64::new(counts.get(class) as i64, size as i64)
        }
    };
    let numerator = supp(to);
    let denominator = supp(from);
    let value = if denominator == Rational64::new(0, 1) {
        if numerator == Rational64::new(0, 1) {
            return Err(MetricsError::UndefinedGrowthRate);
        }
        GrowthRate::Infinite
    } else {
        GrowthRate::Finite(numerator / denominator)
    };
    Ok(GrowthRateValue { value, from, to })
}

/// True iff the growth rate from `from` to `to` reaches `rho` (infinity
/// passes any threshold). An undefined growth rate yields false; callers
/// can distinguish that case through [`growth_rate`]. Requires `rho > 1`.
pub fn is_rho_emerging(
    condset: &Condset,
    dataset: &Dataset,
    from: ClassId,
    to: ClassId,
    rho: Rational64,
) -> bool {
    assert!(rho > Rational64::new(1, 1), "rho must exceed 1");
    match growth_rate(condset, dataset, from, to) {
        Ok(gr) => gr.value.at_least(rho),
        Err(MetricsError::UndefinedGrowthRate) => false,
    }
}

/// Stage counts of one mining run, as consumed by [`pruning_stats`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunCounts {
    /// SCR-ruleitems kept, or CAR frequent ruleitems (condset, class pairs).
    pub ruleitems: u64,
    /// Distinct condsets behind those ruleitems.
    pub condsets: u64,
    /// Classification rules emitted (for the SCR side: distinct rules
    /// appearing in the assembled patterns).
    pub rules: u64,
}

/// Side-by-side counts with the ratios the direct miner is judged by.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruningStats {
    pub scr_ruleitems: u64,
    pub car_ruleitems: u64,
    pub scr_condsets: u64,
    pub car_condsets: u64,
    pub scr_rules: u64,
    pub car_rules: u64,
    /// scr_ruleitems / car_ruleitems.
    pub ruleitem_ratio: Option<Rational64>,
    /// scr_condsets / car_condsets; the subset-comparable pair.
    pub condset_ratio: Option<Rational64>,
    /// scr_rules / car_rules.
    pub rule_ratio: Option<Rational64>,
}

pub fn pruning_stats(scr: &RunCounts, car: &RunCounts) -> PruningStats {
    let ratio = |num: u64, den: u64| {
        if den == 0 {
            None
        } else {
            Some(Rational64::new(num as i64, den as i64))
        }
    };
    PruningStats {
        scr_ruleitems: scr.ruleitems,
        car_ruleitems: car.ruleitems,
        scr_condsets: scr.condsets,
        car_condsets: car.condsets,
        scr_rules: scr.rules,
        car_rules: car.rules,
        ruleitem_ratio: ratio(scr.ruleitems, car.ruleitems),
        condset_ratio: ratio(scr.condsets, car.condsets),
        rule_ratio: ratio(scr.rules, car.rules),
    }
}
