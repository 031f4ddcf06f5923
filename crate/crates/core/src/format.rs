//! Rendering and parsing of the pattern and rule file formats.
//!
//! The human-readable pattern record mirrors the `/` notation for
//! contrasting rules, one per line:
//!
//! ```text
//! {A2 / B1C1 -> Cl1 (conf=1.0000, supp=0.1429) : B2C2 -> Cl2 (conf=0.8000, supp=0.2857)}
//! ```
//!
//! The part before `/` holds the items shared by both rules, the parts
//! after it each rule's differing items. Items render as the attribute name
//! directly followed by the value. Confidence and support carry four
//! decimal places. A parallel tab-separated format carries the same fields
//! plus the raw per-class counts, which makes it exactly invertible.

use num_rational::Rational64;
use num_traits::Signed;
use thiserror::Error;

use crate::car::ClassificationRule;
use crate::dataset::{AttributeSchema, ClassCounts, ClassId};
use crate::lattice::{Condset, Item};
use crate::params::{parse_ratio, MinSupport};
use crate::scr::ScrPattern;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { line, message: message.into() }
}

/// Run parameters embedded in file headers, exact enough to reproduce the
/// run (`alpha` and ratio thresholds render as fractions).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FileMeta {
    pub alpha: Rational64,
    pub min_supp: MinSupport,
    pub n_total: u64,
}

/// Four decimal places, rounding half away from zero, computed in integer
/// arithmetic so equal rationals always print identically.
pub fn format_ratio_4dp(value: Rational64) -> String {
    let negative = value.is_negative();
    let n = value.numer().unsigned_abs() as u128;
    let d = *value.denom() as u128;
    let scaled = (n * 10_000 * 2 + d) / (2 * d);
    let sign = if negative { "-" } else { "" };
    format!("{sign}{}.{:04}", scaled / 10_000, scaled % 10_000)
}

/// Exact rendering: integers as-is, everything else as `numer/denom`.
pub fn format_ratio_exact(value: Rational64) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Percentage with four significant digits, e.g. `58.00%` or `6.400%`.
pub fn format_percent(value: Rational64) -> String {
    let v = (*value.numer() as f64 / *value.denom() as f64) * 100.0;
    if v == 0.0 {
        return "0.000%".to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (3 - magnitude).clamp(0, 12) as usize;
    format!("{v:.decimals$}%")
}

/// Items as name-value runs, e.g. `B1C1`.
pub fn render_items(items: &[Item], schema: &AttributeSchema) -> String {
    let mut out = String::new();
    for item in items {
        let attr = schema.attr(item.attr as usize);
        out.push_str(attr.name());
        out.push_str(attr.value(item.value));
    }
    out
}

/// Items as `name=value` pairs joined by commas, for the machine format.
pub fn render_items_eq(items: &[Item], schema: &AttributeSchema) -> String {
    items
        .iter()
        .map(|item| {
            let attr = schema.attr(item.attr as usize);
            format!("{}={}", attr.name(), attr.value(item.value))
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses a name-value run back into items. Attribute order must ascend, so
/// a backtracking scan resolves names that prefix each other.
pub fn parse_items(text: &str, schema: &AttributeSchema) -> Option<Vec<Item>> {
    fn rec(
        text: &str,
        schema: &AttributeSchema,
        min_attr: usize,
        acc: &mut Vec<Item>,
    ) -> bool {
        if text.is_empty() {
            return !acc.is_empty();
        }
        for attr_idx in min_attr..schema.attr_count() {
            if attr_idx == schema.class_index() {
                continue;
            }
            let attr = schema.attr(attr_idx);
            if let Some(rest) = text.strip_prefix(attr.name()) {
                let mut by_len: Vec<(usize, &String)> =
                    attr.domain().iter().enumerate().collect();
                by_len.sort_by_key(|(_, v)| std::cmp::Reverse(v.len()));
                for (value_id, value) in by_len {
                    if let Some(rest2) = rest.strip_prefix(value.as_str()) {
                        acc.push(Item::new(attr_idx, value_id));
                        if rec(rest2, schema, attr_idx + 1, acc) {
                            return true;
                        }
                        acc.pop();
                    }
                }
            }
        }
        false
    }
    let mut acc = Vec::new();
    if rec(text, schema, 0, &mut acc) {
        Some(acc)
    } else {
        None
    }
}

fn parse_items_eq(text: &str, schema: &AttributeSchema) -> Option<Vec<Item>> {
    let mut items = Vec::new();
    for part in text.split(',') {
        let (name, value) = part.split_once('=')?;
        let attr_idx = (0..schema.attr_count()).find(|&i| schema.attr(i).name() == name)?;
        let value_id = schema.attr(attr_idx).value_id(value)?;
        items.push(Item::new(attr_idx, value_id as usize));
    }
    Some(items)
}

fn rule_side(rule: &ClassificationRule, varying: &[Item], schema: &AttributeSchema) -> String {
    format!(
        "{} -> {} (conf={}, supp={})",
        render_items(varying, schema),
        schema.class_name(rule.class),
        format_ratio_4dp(rule.confidence),
        format_ratio_4dp(rule.support),
    )
}

/// One pattern in the `/` notation.
pub fn render_pattern_line(pattern: &ScrPattern, schema: &AttributeSchema) -> String {
    format!(
        "{{{} / {} : {}}}",
        render_items(&pattern.shared, schema),
        rule_side(&pattern.rule1, &pattern.varying1, schema),
        rule_side(&pattern.rule2, &pattern.varying2, schema),
    )
}

fn meta_header(meta: &FileMeta, count: usize, what: &str) -> String {
    format!(
        "# alpha={} min_supp={} n_total={} {what}={count}\n",
        format_ratio_exact(meta.alpha),
        meta.min_supp,
        meta.n_total,
    )
}

/// The pattern file: a `#` header with the run parameters, then one pattern
/// per line in canonical order.
pub fn patterns_to_text(
    patterns: &[ScrPattern],
    schema: &AttributeSchema,
    meta: &FileMeta,
) -> String {
    let mut out = meta_header(meta, patterns.len(), "patterns");
    for pattern in patterns {
        out.push_str(&render_pattern_line(pattern, schema));
        out.push('\n');
    }
    out
}

/// Reads the human-readable pattern file back into canonical pattern keys
/// (class-1 condset, class-2 condset).
pub fn read_pattern_keys(
    text: &str,
    schema: &AttributeSchema,
) -> Result<Vec<(Condset, Condset)>, FormatError> {
    let mut keys = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = lineno + 1;
        let body = line
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| parse_err(lineno, "pattern records are wrapped in braces"))?;
        let (left, right) = body
            .split_once(" : ")
            .ok_or_else(|| parse_err(lineno, "expected two rule sides split by ` : `"))?;
        let (shared_text, rule1_text) = left
            .split_once(" / ")
            .ok_or_else(|| parse_err(lineno, "expected `shared / varying` on the left side"))?;
        let shared = parse_items(shared_text, schema)
            .ok_or_else(|| parse_err(lineno, format!("cannot parse items `{shared_text}`")))?;
        let mut sides = Vec::new();
        for side in [rule1_text, right] {
            let (items_text, rest) = side
                .split_once(" -> ")
                .ok_or_else(|| parse_err(lineno, "expected `items -> class`"))?;
            let class_text = rest
                .split_once(" (")
                .map(|(c, _)| c)
                .ok_or_else(|| parse_err(lineno, "expected `(conf=..., supp=...)`"))?;
            let items = parse_items(items_text, schema)
                .ok_or_else(|| parse_err(lineno, format!("cannot parse items `{items_text}`")))?;
            let class = schema
                .class_id(class_text)
                .ok_or_else(|| parse_err(lineno, format!("unknown class `{class_text}`")))?;
            let mut all = shared.clone();
            all.extend(items);
            let condset = Condset::new(all)
                .map_err(|e| parse_err(lineno, e.to_string()))?;
            sides.push((class, condset));
        }
        sides.sort_by_key(|(class, _)| *class);
        if sides[0].0 == sides[1].0 {
            return Err(parse_err(lineno, "both rules carry the same class"));
        }
        keys.push((sides[0].1.clone(), sides[1].1.clone()));
    }
    Ok(keys)
}

const PATTERN_TSV_COLUMNS: &str = "shared\tvary1\tclass1\tconf1\tsupp1\tcount1_cl1\tcount1_cl2\tvary2\tclass2\tconf2\tsupp2\tcount2_cl1\tcount2_cl2";

fn pattern_counts(rule: &ClassificationRule, meta: &FileMeta) -> ClassCounts {
    // conf = count_class / total and supp = count_class / n_total determine
    // both per-class counts of the rule's condset.
    let count_class = (rule.support * Rational64::from_integer(meta.n_total as i64))
        .to_integer() as u64;
    let total = if rule.confidence == Rational64::from_integer(0) {
        0
    } else {
        (Rational64::from_integer(count_class as i64) / rule.confidence).to_integer() as u64
    };
    match rule.class {
        ClassId::FIRST => ClassCounts::new(count_class, total - count_class),
        _ => ClassCounts::new(total - count_class, count_class),
    }
}

/// The machine-readable pattern table: same fields as the text format plus
/// the raw per-class counts of both condsets.
pub fn patterns_to_tsv(
    patterns: &[ScrPattern],
    schema: &AttributeSchema,
    meta: &FileMeta,
) -> String {
    let mut out = meta_header(meta, patterns.len(), "patterns");
    out.push_str(PATTERN_TSV_COLUMNS);
    out.push('\n');
    for p in patterns {
        let counts1 = pattern_counts(&p.rule1, meta);
        let counts2 = pattern_counts(&p.rule2, meta);
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            render_items_eq(&p.shared, schema),
            render_items_eq(&p.varying1, schema),
            schema.class_name(p.rule1.class),
            format_ratio_4dp(p.rule1.confidence),
            format_ratio_4dp(p.rule1.support),
            counts1.first(),
            counts1.second(),
            render_items_eq(&p.varying2, schema),
            schema.class_name(p.rule2.class),
            format_ratio_4dp(p.rule2.confidence),
            format_ratio_4dp(p.rule2.support),
            counts2.first(),
            counts2.second(),
        ));
    }
    out
}

fn parse_meta(line: &str, lineno: usize) -> Result<FileMeta, FormatError> {
    let mut alpha = None;
    let mut min_supp = None;
    let mut n_total = None;
    for token in line.trim_start_matches('#').split_whitespace() {
        if let Some((key, value)) = token.split_once('=') {
            match key {
                "alpha" => {
                    alpha = Some(parse_ratio(value).map_err(|e| {
                        parse_err(lineno, format!("bad alpha: {e}"))
                    })?)
                }
                "min_supp" => {
                    min_supp = Some(match value.split_once(':') {
                        Some(("count", c)) => MinSupport::Count(c.parse().map_err(|_| {
                            parse_err(lineno, format!("bad support count `{c}`"))
                        })?),
                        Some(("ratio", r)) => MinSupport::Ratio(parse_ratio(r).map_err(
                            |e| parse_err(lineno, format!("bad support ratio: {e}")),
                        )?),
                        _ => {
                            return Err(parse_err(
                                lineno,
                                format!("bad min_supp `{value}`"),
                            ))
                        }
                    })
                }
                "n_total" => {
                    n_total = Some(value.parse().map_err(|_| {
                        parse_err(lineno, format!("bad n_total `{value}`"))
                    })?)
                }
                _ => {}
            }
        }
    }
    match (alpha, min_supp, n_total) {
        (Some(alpha), Some(min_supp), Some(n_total)) => Ok(FileMeta { alpha, min_supp, n_total }),
        _ => Err(parse_err(lineno, "header must carry alpha, min_supp and n_total")),
    }
}

/// Reads the machine format back into exact patterns (confidences and
/// supports are rebuilt from the raw counts).
pub fn read_patterns_tsv(
    text: &str,
    schema: &AttributeSchema,
) -> Result<(Vec<ScrPattern>, FileMeta), FormatError> {
    let mut meta = None;
    let mut patterns = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim_end_matches('\n');
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with('#') {
            meta = Some(parse_meta(line, lineno)?);
            continue;
        }
        if line == PATTERN_TSV_COLUMNS {
            continue;
        }
        let meta = meta
            .as_ref()
            .ok_or_else(|| parse_err(lineno, "data row before the `#` header"))?;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 13 {
            return Err(parse_err(lineno, format!("expected 13 fields, got {}", fields.len())));
        }
        let shared = parse_items_eq(fields[0], schema)
            .ok_or_else(|| parse_err(lineno, format!("cannot parse items `{}`", fields[0])))?;
        let mut rules = Vec::new();
        for (items_field, class_field, cl1_field, cl2_field) in
            [(1, 2, 5, 6), (7, 8, 11, 12)]
                .map(|(a, b, c, d)| (fields[a], fields[b], fields[c], fields[d]))
        {
            let varying = parse_items_eq(items_field, schema).ok_or_else(|| {
                parse_err(lineno, format!("cannot parse items `{items_field}`"))
            })?;
            let class = schema
                .class_id(class_field)
                .ok_or_else(|| parse_err(lineno, format!("unknown class `{class_field}`")))?;
            let counts = ClassCounts::new(
                cl1_field
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad count `{cl1_field}`")))?,
                cl2_field
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad count `{cl2_field}`")))?,
            );
            let mut all = shared.clone();
            all.extend(varying.iter().copied());
            let condset =
                Condset::new(all).map_err(|e| parse_err(lineno, e.to_string()))?;
            rules.push(ClassificationRule {
                condset,
                class,
                support: Rational64::new(counts.get(class) as i64, meta.n_total as i64),
                confidence: Rational64::new(counts.get(class) as i64, counts.total() as i64),
            });
        }
        let second = rules.pop().expect("two rules per row");
        let first = rules.pop().expect("two rules per row");
        let (first, second) = if first.class == ClassId::FIRST {
            (first, second)
        } else {
            (second, first)
        };
        patterns.push(ScrPattern::from_rules(first, second, meta.alpha));
    }
    let meta = meta.ok_or_else(|| parse_err(0, "missing `#` header"))?;
    Ok((patterns, meta))
}

/// One classification rule per line, e.g. `A1C1 -> Cl2 (conf=0.5556, supp=0.3125)`.
pub fn render_rule_line(rule: &ClassificationRule, schema: &AttributeSchema) -> String {
    format!(
        "{} -> {} (conf={}, supp={})",
        render_items(rule.condset.items(), schema),
        schema.class_name(rule.class),
        format_ratio_4dp(rule.confidence),
        format_ratio_4dp(rule.support),
    )
}

pub fn rules_to_text(
    rules: &[ClassificationRule],
    schema: &AttributeSchema,
    meta: &FileMeta,
) -> String {
    let mut out = meta_header(meta, rules.len(), "rules");
    for rule in rules {
        out.push_str(&render_rule_line(rule, schema));
        out.push('\n');
    }
    out
}

pub fn rules_to_tsv(
    rules: &[ClassificationRule],
    schema: &AttributeSchema,
    meta: &FileMeta,
) -> String {
    let mut out = meta_header(meta, rules.len(), "rules");
    out.push_str("condset\tclass\tconf\tsupp\n");
    for rule in rules {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            render_items_eq(rule.condset.items(), schema),
            schema.class_name(rule.class),
            format_ratio_4dp(rule.confidence),
            format_ratio_4dp(rule.support),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{MiningParams, MinSupport};
    use crate::scr::{assemble_patterns, mine_scr_ruleitems};
    use crate::testutil::{condset, example2_dataset};

    #[test]
    fn four_decimals_round_half_away_from_zero() {
        assert_eq!(format_ratio_4dp(Rational64::new(1, 1)), "1.0000");
        assert_eq!(format_ratio_4dp(Rational64::new(4, 5)), "0.8000");
        assert_eq!(format_ratio_4dp(Rational64::new(2, 3)), "0.6667");
        assert_eq!(format_ratio_4dp(Rational64::new(1, 3)), "0.3333");
        assert_eq!(format_ratio_4dp(Rational64::new(2, 14)), "0.1429");
        assert_eq!(format_ratio_4dp(Rational64::new(1, 20000)), "0.0001");
        assert_eq!(format_ratio_4dp(Rational64::new(0, 1)), "0.0000");
    }

    #[test]
    fn percents_use_four_significant_digits() {
        assert_eq!(format_percent(Rational64::new(58, 100)), "58.00%");
        assert_eq!(format_percent(Rational64::new(64, 1000)), "6.400%");
        assert_eq!(format_percent(Rational64::new(1, 1)), "100.0%");
        assert_eq!(format_percent(Rational64::new(0, 1)), "0.000%");
    }

    #[test]
    fn item_runs_round_trip() {
        let ds = example2_dataset();
        let items = vec![crate::lattice::Item::new(1, 0), crate::lattice::Item::new(2, 0)];
        let rendered = render_items(&items, ds.schema());
        assert_eq!(rendered, "B1C1");
        assert_eq!(parse_items(&rendered, ds.schema()).unwrap(), items);
        assert_eq!(render_items_eq(&items, ds.schema()), "B=1,C=1");
        assert_eq!(parse_items_eq("B=1,C=1", ds.schema()).unwrap(), items);
        assert!(parse_items("Q7", ds.schema()).is_none());
    }

    fn example2_patterns() -> (Vec<crate::scr::ScrPattern>, crate::dataset::Dataset, FileMeta) {
        let ds = example2_dataset();
        let params = MiningParams::new(MinSupport::Count(2), Rational64::new(1, 2)).unwrap();
        let mined = mine_scr_ruleitems(&ds, params.min_supp, 1);
        let patterns = assemble_patterns(&mined.kept, ds.schema(), &params, ds.n_total());
        let meta = FileMeta {
            alpha: params.min_conf,
            min_supp: params.min_supp,
            n_total: ds.n_total(),
        };
        (patterns, ds, meta)
    }

    #[test]
    fn pattern_line_matches_the_documented_record() {
        let (patterns, ds, _) = example2_patterns();
        let a2b1c1 = condset(&[(0, 1), (1, 0), (2, 0)]);
        let target = patterns
            .iter()
            .find(|p| p.rule1.condset == a2b1c1)
            .expect("the A2/B1C1 pattern is mined");
        assert_eq!(
            render_pattern_line(target, ds.schema()),
            "{A2 / B1C1 -> Cl1 (conf=1.0000, supp=0.1429) : B2C2 -> Cl2 (conf=0.8000, supp=0.2857)}"
        );
    }

    #[test]
    fn text_file_round_trips_to_the_canonical_keys() {
        let (patterns, ds, meta) = example2_patterns();
        let text = patterns_to_text(&patterns, ds.schema(), &meta);
        let keys = read_pattern_keys(&text, ds.schema()).unwrap();
        let expected: Vec<(Condset, Condset)> = patterns.iter().map(|p| p.key()).collect();
        assert_eq!(keys, expected);
    }

    #[test]
    fn tsv_round_trips_exactly() {
        let (patterns, ds, meta) = example2_patterns();
        let tsv = patterns_to_tsv(&patterns, ds.schema(), &meta);
        let (reparsed, remeta) = read_patterns_tsv(&tsv, ds.schema()).unwrap();
        assert_eq!(reparsed, patterns);
        assert_eq!(remeta, meta);
    }

    #[test]
    fn malformed_lines_name_their_line_number() {
        let ds = example2_dataset();
        let err = read_pattern_keys("{oops}\n", ds.schema()).unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 1, .. }));
        let err = read_patterns_tsv("A=1\tonly\n", ds.schema()).unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 1, .. }));
    }
}
