//! Levelwise candidate machinery shared by all miners: items, condsets,
//! self-join candidate generation, subset pruning and one-pass class-wise
//! support counting.
//!
//! Condsets hold at most one item per attribute and keep their items sorted
//! by `(attribute index, value id)`. That canonical order makes prefix-based
//! self-joins deterministic and duplicate-free.

use std::collections::HashSet;
use std::thread;

use thiserror::Error;

use crate::dataset::{AttributeSchema, ClassCounts, Dataset};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CondsetError {
    #[error("condset must contain at least one item")]
    Empty,
    #[error("condset holds two values of attribute {0}")]
    DuplicateAttribute(u16),
}

/// A single attribute=value assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Item {
    pub attr: u16,
    pub value: u16,
}

impl Item {
    pub fn new(attr: usize, value: usize) -> Item {
        Item {
            attr: attr.try_into().expect("attribute index fits in u16"),
            value: value.try_into().expect("value id fits in u16"),
        }
    }
}

/// A sorted set of items, at most one per attribute.
///
/// In the classification miners condsets never carry the class attribute;
/// the plain Apriori miner also uses them for itemsets that may include a
/// class item.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Condset {
    items: Vec<Item>,
}

impl Condset {
    pub fn new(mut items: Vec<Item>) -> Result<Condset, CondsetError> {
        if items.is_empty() {
            return Err(CondsetError::Empty);
        }
        items.sort_unstable();
        for pair in items.windows(2) {
            if pair[0].attr == pair[1].attr {
                return Err(CondsetError::DuplicateAttribute(pair[0].attr));
            }
        }
        Ok(Condset { items })
    }

    fn from_sorted(items: Vec<Item>) -> Condset {
        debug_assert!(items.windows(2).all(|p| p[0].attr < p[1].attr));
        Condset { items }
    }

    pub fn single(item: Item) -> Condset {
        Condset { items: vec![item] }
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn attrs(&self) -> impl Iterator<Item = u16> + '_ {
        self.items.iter().map(|i| i.attr)
    }

    pub fn contains_attr(&self, attr: u16) -> bool {
        self.items.binary_search_by_key(&attr, |i| i.attr).is_ok()
    }

    pub fn value_of(&self, attr: u16) -> Option<u16> {
        self.items
            .binary_search_by_key(&attr, |i| i.attr)
            .ok()
            .map(|pos| self.items[pos].value)
    }

    /// True when every item matches the record's cells.
    pub fn matches_row(&self, row: &[u16]) -> bool {
        self.items
            .iter()
            .all(|item| row[item.attr as usize] == item.value)
    }

    /// The condset without the item at `index`; `None` for singletons.
    pub fn without_index(&self, index: usize) -> Option<Condset> {
        if self.items.len() <= 1 {
            return None;
        }
        let mut items = self.items.clone();
        items.remove(index);
        Some(Condset::from_sorted(items))
    }

    /// Splits into (items with bit set, items with bit clear); both sides
    /// stay sorted. Panics above 63 items.
    pub fn split_by_mask(&self, mask: u64) -> (Option<Condset>, Option<Condset>) {
        assert!(self.items.len() < 64, "condset too large to split by mask");
        let mut inside = Vec::new();
        let mut outside = Vec::new();
        for (pos, item) in self.items.iter().enumerate() {
            if mask & (1 << pos) != 0 {
                inside.push(*item);
            } else {
                outside.push(*item);
            }
        }
        let wrap = |v: Vec<Item>| {
            if v.is_empty() {
                None
            } else {
                Some(Condset::from_sorted(v))
            }
        };
        (wrap(inside), wrap(outside))
    }
}

/// Support counts for one level of same-size condsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportTable {
    entries: Vec<(Condset, ClassCounts)>,
}

impl SupportTable {
    /// Takes entries in any order and stores them sorted canonically.
    pub fn from_entries(mut entries: Vec<(Condset, ClassCounts)>) -> SupportTable {
        entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        SupportTable { entries }
    }

    pub fn entries(&self) -> &[(Condset, ClassCounts)] {
        &self.entries
    }

    pub fn get(&self, condset: &Condset) -> Option<ClassCounts> {
        self.entries
            .binary_search_by(|(c, _)| c.cmp(condset))
            .ok()
            .map(|pos| self.entries[pos].1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Candidate and survivor counts for one level of a mining run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelStats {
    pub level: usize,
    pub generated: usize,
    pub kept: usize,
}

/// All 1-condsets over the non-class attributes, in canonical order.
pub fn initial_candidates(schema: &AttributeSchema) -> Vec<Condset> {
    initial_candidates_from(schema, false)
}

/// All 1-itemsets over every attribute including the class attribute, for
/// the plain Apriori miner where the class column is a regular attribute.
pub fn initial_candidates_with_class(schema: &AttributeSchema) -> Vec<Condset> {
    initial_candidates_from(schema, true)
}

fn initial_candidates_from(schema: &AttributeSchema, include_class: bool) -> Vec<Condset> {
    let mut out = Vec::new();
    for attr_idx in 0..schema.attr_count() {
        if !include_class && attr_idx == schema.class_index() {
            continue;
        }
        for value in 0..schema.attr(attr_idx).domain().len() {
            out.push(Condset::single(Item::new(attr_idx, value)));
        }
    }
    out
}

/// Exact per-class containment counts for all candidates in one pass over
/// the records. With `threads > 1` the records are partitioned and the
/// partial counts merged by addition, which is bit-identical to the
/// sequential result.
pub fn count_supports(
    candidates: &[Condset],
    dataset: &Dataset,
    threads: usize,
) -> SupportTable {
    debug_assert!(
        candidates.windows(2).all(|p| p[0].len() == p[1].len()),
        "candidates must share one size"
    );
    let n_rows = dataset.n_total() as usize;
    let threads = threads.max(1).min(n_rows.max(1));
    let counts = if threads <= 1 || n_rows < 2 * threads {
        count_chunk(candidates, dataset, 0, n_rows)
    } else {
        let chunk = n_rows.div_ceil(threads);
        let mut partials: Vec<Vec<ClassCounts>> = thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let start = t * chunk;
                    let end = ((t + 1) * chunk).min(n_rows);
                    scope.spawn(move || count_chunk(candidates, dataset, start, end))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let mut total = partials.pop().unwrap_or_default();
        for partial in partials {
            for (sum, part) in total.iter_mut().zip(partial) {
                sum.add(part);
            }
        }
        total
    };
    SupportTable::from_entries(candidates.iter().cloned().zip(counts).collect())
}

fn count_chunk(
    candidates: &[Condset],
    dataset: &Dataset,
    start: usize,
    end: usize,
) -> Vec<ClassCounts> {
    let mut counts = vec![ClassCounts::ZERO; candidates.len()];
    for row_idx in start..end {
        let row = dataset.row(row_idx);
        let class = dataset.row_class(row_idx);
        for (slot, candidate) in counts.iter_mut().zip(candidates) {
            if candidate.matches_row(row) {
                slot.bump(class);
            }
        }
    }
    counts
}

/// Joins pairs of size-p condsets that agree on their first p-1 items and
/// differ in the last. Joins that would put two values of one attribute into
/// a condset are dropped. Input must be canonically sorted and
/// duplicate-free; the output is too.
pub fn self_join(level: &[Condset]) -> Vec<Condset> {
    debug_assert!(level.windows(2).all(|p| p[0] < p[1]), "level must be sorted");
    let mut out = Vec::new();
    for i in 0..level.len() {
        let prefix_len = level[i].len() - 1;
        for j in (i + 1)..level.len() {
            if level[i].items()[..prefix_len] != level[j].items()[..prefix_len] {
                break;
            }
            let last_i = level[i].items()[prefix_len];
            let last_j = level[j].items()[prefix_len];
            if last_i.attr == last_j.attr {
                continue;
            }
            let mut items = level[i].items().to_vec();
            items.push(last_j);
            out.push(Condset::from_sorted(items));
        }
    }
    out
}

/// Keeps a candidate iff every size-p subset is among the survivors of
/// level p.
pub fn subset_prune(candidates: Vec<Condset>, survivors: &HashSet<Condset>) -> Vec<Condset> {
    candidates
        .into_iter()
        .filter(|candidate| {
            (0..candidate.len()).all(|drop| match candidate.without_index(drop) {
                Some(subset) => survivors.contains(&subset),
                None => true,
            })
        })
        .collect()
}
