//! Deterministic synthetic dataset generation for benchmarks and property
//! tests: uniform random class-labeled records, and planted-pattern data in
//! which a chosen pair of contrasting rules is guaranteed discoverable.
//!
//! All randomness comes from a ChaCha8 stream cipher seeded through
//! SplitMix64 expansion of the 64-bit seed (`ChaCha8Rng::seed_from_u64`).
//! Categorical draws take `next_u64() % domain_size`; the final record
//! shuffle is a Fisher-Yates pass using the same draw. The same seed
//! therefore reproduces the same records byte for byte, in any
//! implementation of these primitives.
//!
//! Planted generation lays out four deterministic blocks: records matching
//! each template condset (labeled to hit the target confidence exactly), a
//! contrast-free block that keeps one invariant value frequent in a single
//! class (so the direct miner provably prunes something), and uniform noise
//! records resampled to avoid both template condsets.

use num_rational::Rational64;
use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::dataset::{AttributeRole, AttributeSchema, ClassId, Dataset};
use crate::lattice::{Condset, Item};
use crate::scr::structural_contrast_conditions;

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("noise rate must be in [0, 1], got {0}")]
    NoiseOutOfRange(f64),
    #[error("invalid generator dimensions: {0}")]
    BadDims(String),
    #[error("invalid planted template: {0}")]
    BadTemplate(String),
    #[error("infeasible planted spec: {0}")]
    Infeasible(String),
}

/// One side of a planted pattern: a condset template, the class its rule
/// points at, and the confidence the generated data must reach.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedRule {
    pub items: Vec<Item>,
    pub class: ClassId,
    pub confidence: Rational64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedSpec {
    pub rule1: PlantedRule,
    pub rule2: PlantedRule,
    /// Support threshold the planted rules must clear.
    pub min_supp: Rational64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    /// Number of non-class attributes.
    pub attrs: usize,
    /// Domain size shared by every non-class attribute.
    pub values: usize,
    /// The first `invariant` attributes are invariant, the rest varying.
    pub invariant: usize,
    pub records_per_class: (u64, u64),
    pub seed: u64,
    /// Fraction of records that are uniform noise (planted mode only).
    pub noise: f64,
    pub planted: Option<PlantedSpec>,
}

/// Attribute names are A..Z, then X26, X27, ...
pub fn attr_name(index: usize) -> String {
    if index < 26 {
        char::from(b'A' + index as u8).to_string()
    } else {
        format!("X{index}")
    }
}

/// Value names are 1-based decimals, matching the bundled examples.
pub fn value_name(value: usize) -> String {
    (value + 1).to_string()
}

pub fn class_value_name(class: ClassId) -> String {
    format!("Cl{}", class.index() + 1)
}

#[derive(Debug, Clone)]
pub struct GenOutput {
    pub dataset: Dataset,
    pub warnings: Vec<String>,
}

/// Dispatches on the presence of a planted spec.
pub fn generate(spec: &GenSpec) -> Result<GenOutput, GenError> {
    if spec.planted.is_some() {
        gen_planted(spec)
    } else {
        gen_random(spec)
    }
}

/// Uniform random records: every non-class cell is an independent uniform
/// draw, class labels fill the per-class budgets in order.
pub fn gen_random(spec: &GenSpec) -> Result<GenOutput, GenError> {
    if spec.planted.is_some() {
        return Err(GenError::BadTemplate(
            "gen_random does not accept a planted spec".into(),
        ));
    }
    let mut warnings = Vec::new();
    let schema = build_schema(spec, &mut warnings)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut rows = Vec::new();
    for class in ClassId::BOTH {
        for _ in 0..spec.records_per_class.0 * (1 - class.index() as u64)
            + spec.records_per_class.1 * class.index() as u64
        {
            rows.push(uniform_row(&mut rng, spec, class));
        }
    }
    let dataset = Dataset::from_value_rows(schema, rows).expect("generated rows are in domain");
    Ok(GenOutput { dataset, warnings })
}

/// Planted-pattern generation. Errors when the spec cannot guarantee the
/// pattern: confidence 1.0 with positive noise, per-class budgets too small,
/// or a value space that cannot avoid the template condsets.
pub fn gen_planted(spec: &GenSpec) -> Result<GenOutput, GenError> {
    let planted = spec
        .planted
        .clone()
        .ok_or_else(|| GenError::BadTemplate("gen_planted needs a planted spec".into()))?;
    let mut warnings = Vec::new();
    let schema = build_schema(spec, &mut warnings)?;
    validate_template(&planted, spec, &schema)?;

    if spec.noise >= 1.0 {
        warnings.push("noise rate 1.0 disables planting; records are uniform".into());
        let mut uniform = spec.clone();
        uniform.planted = None;
        let mut out = gen_random(&uniform)?;
        warnings.append(&mut out.warnings);
        return Ok(GenOutput { dataset: out.dataset, warnings });
    }
    if spec.noise > 0.0
        && (planted.rule1.confidence.is_one() || planted.rule2.confidence.is_one())
    {
        return Err(GenError::Infeasible(
            "target confidence 1.0 cannot be guaranteed with positive noise".into(),
        ));
    }

    let (n1, n2) = spec.records_per_class;
    let n_total = n1 + n2;
    let threshold = threshold_count(planted.min_supp, n_total);
    let condset1 = Condset::new(planted.rule1.items.clone()).expect("validated template");
    let condset2 = Condset::new(planted.rule2.items.clone()).expect("validated template");

    // A spare value on an invariant attribute feeds the contrast-free
    // block; it appears nowhere else, so it stays frequent in exactly one
    // class and the filter provably excludes it.
    let decoy = pick_decoy(spec, &condset1);
    if decoy.is_none() {
        warnings.push(
            "no invariant attribute with a spare value; contrast-free block skipped".into(),
        );
    }

    let noise_n = (spec.noise * n_total as f64).round() as u64;
    let decoy_n = if decoy.is_some() { threshold } else { 0 };
    let plant_total = n_total
        .checked_sub(noise_n + decoy_n)
        .filter(|&p| p >= 2)
        .ok_or_else(|| {
            GenError::Infeasible(format!(
                "{n_total} records leave no room for two planted blocks after \
                 {noise_n} noise and {decoy_n} contrast-free records"
            ))
        })?;

    // Both template blocks get m records. The largest m that fits the
    // per-class budgets wins; any remainder joins the uniform filler pool,
    // which never touches the template condsets and so cannot dilute the
    // confidences.
    let class_need = |m: u64| -> [u64; 2] {
        let hits1 = ceil_mul(planted.rule1.confidence, m);
        let hits2 = ceil_mul(planted.rule2.confidence, m);
        let mut need = [0u64; 2];
        need[planted.rule1.class.index()] += hits1;
        need[planted.rule1.class.other().index()] += m - hits1;
        need[planted.rule2.class.index()] += hits2;
        need[planted.rule2.class.other().index()] += m - hits2;
        need[0] += decoy_n;
        need
    };
    let m = (1..=plant_total / 2)
        .rev()
        .find(|&m| {
            let need = class_need(m);
            need[0] <= n1 && need[1] <= n2
        })
        .ok_or_else(|| {
            GenError::Infeasible(format!(
                "per-class budgets ({n1}, {n2}) cannot hold the planted blocks"
            ))
        })?;
    let hits1 = ceil_mul(planted.rule1.confidence, m);
    let hits2 = ceil_mul(planted.rule2.confidence, m);
    for (hits, which) in [(hits1, "first"), (hits2, "second")] {
        if hits < threshold {
            return Err(GenError::Infeasible(format!(
                "the {which} planted rule reaches support {hits} < threshold {threshold}; \
                 add records or lower noise/min_supp"
            )));
        }
    }
    let need = class_need(m);
    let noise_c1 = n1 - need[0];
    let noise_c2 = n2 - need[1];

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut rows = Vec::with_capacity(n_total as usize);
    for (condset, m, hits, class) in [
        (&condset1, m, hits1, planted.rule1.class),
        (&condset2, m, hits2, planted.rule2.class),
    ] {
        for i in 0..m {
            let label = if i < hits { class } else { class.other() };
            rows.push(template_row(&mut rng, spec, condset, label, decoy)?);
        }
    }
    if let Some((decoy_attr, decoy_value)) = decoy {
        for _ in 0..decoy_n {
            let mut row = avoiding_row(
                &mut rng,
                spec,
                &condset1,
                &condset2,
                ClassId::FIRST,
                decoy,
                Some((decoy_attr, decoy_value)),
            )?;
            row[decoy_attr] = decoy_value as u16;
            rows.push(row);
        }
    }
    for (class, n) in [(ClassId::FIRST, noise_c1), (ClassId::SECOND, noise_c2)] {
        for _ in 0..n {
            rows.push(avoiding_row(
                &mut rng, spec, &condset1, &condset2, class, decoy, None,
            )?);
        }
    }

    // Fisher-Yates so the blocks are not trivially contiguous.
    for i in (1..rows.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        rows.swap(i, j);
    }
    let dataset = Dataset::from_value_rows(schema, rows).expect("generated rows are in domain");
    Ok(GenOutput { dataset, warnings })
}

fn build_schema(spec: &GenSpec, warnings: &mut Vec<String>) -> Result<AttributeSchema, GenError> {
    if !(0.0..=1.0).contains(&spec.noise) || spec.noise.is_nan() {
        return Err(GenError::NoiseOutOfRange(spec.noise));
    }
    if spec.attrs == 0 || spec.values == 0 {
        return Err(GenError::BadDims(
            "need at least one attribute and one value".into(),
        ));
    }
    if spec.invariant > spec.attrs {
        return Err(GenError::BadDims(format!(
            "{} invariant attributes exceed {} attributes",
            spec.invariant, spec.attrs
        )));
    }
    if spec.records_per_class.0 == 0 || spec.records_per_class.1 == 0 {
        return Err(GenError::BadDims("both classes need at least one record".into()));
    }
    if spec.invariant == spec.attrs {
        warnings.push("schema has no varying attribute; no pattern can exist".into());
    }
    let domain: Vec<String> = (0..spec.values).map(value_name).collect();
    let mut attrs: Vec<(String, AttributeRole, Vec<String>)> = (0..spec.attrs)
        .map(|i| {
            let role = if i < spec.invariant {
                AttributeRole::Invariant
            } else {
                AttributeRole::Varying
            };
            (attr_name(i), role, domain.clone())
        })
        .collect();
    attrs.push((
        "Cl".into(),
        AttributeRole::Class,
        vec![
            class_value_name(ClassId::FIRST),
            class_value_name(ClassId::SECOND),
        ],
    ));
    AttributeSchema::with_domains(attrs).map_err(|e| GenError::BadDims(e.to_string()))
}

fn validate_template(
    planted: &PlantedSpec,
    spec: &GenSpec,
    schema: &AttributeSchema,
) -> Result<(), GenError> {
    for rule in [&planted.rule1, &planted.rule2] {
        if rule.items.is_empty() {
            return Err(GenError::BadTemplate("planted condsets must be non-empty".into()));
        }
        for item in &rule.items {
            if item.attr as usize >= spec.attrs {
                return Err(GenError::BadTemplate(format!(
                    "attribute index {} out of range",
                    item.attr
                )));
            }
            if item.value as usize >= spec.values {
                return Err(GenError::BadTemplate(format!(
                    "value id {} out of range",
                    item.value
                )));
            }
        }
        if rule.confidence <= Rational64::zero() || rule.confidence > Rational64::one() {
            return Err(GenError::BadTemplate(format!(
                "target confidence {} outside (0, 1]",
                rule.confidence
            )));
        }
    }
    if planted.min_supp <= Rational64::zero() || planted.min_supp > Rational64::one() {
        return Err(GenError::BadTemplate(format!(
            "planted min_supp {} outside (0, 1]",
            planted.min_supp
        )));
    }
    let c1 = Condset::new(planted.rule1.items.clone())
        .map_err(|e| GenError::BadTemplate(e.to_string()))?;
    let c2 = Condset::new(planted.rule2.items.clone())
        .map_err(|e| GenError::BadTemplate(e.to_string()))?;
    if !structural_contrast_conditions(&c1, planted.rule1.class, &c2, planted.rule2.class, schema)
    {
        return Err(GenError::BadTemplate(
            "the two rules do not satisfy the structural contrast conditions".into(),
        ));
    }
    Ok(())
}

/// An invariant attribute and a spare value for the contrast-free block.
/// The spare value is withheld from every other record, so attributes
/// outside the pattern are preferred: reserving a value there never blocks
/// the noise sampler from escaping the templates. An in-pattern attribute
/// works too, but only with a third value to leave the sampler room.
fn pick_decoy(spec: &GenSpec, condset1: &Condset) -> Option<(usize, usize)> {
    if spec.values < 2 {
        return None;
    }
    for attr in 0..spec.invariant {
        if condset1.value_of(attr as u16).is_none() {
            return Some((attr, spec.values - 1));
        }
    }
    if spec.values >= 3 {
        for attr in 0..spec.invariant {
            if let Some(v) = condset1.value_of(attr as u16) {
                return Some((attr, ((v as usize) + 1) % spec.values));
            }
        }
    }
    None
}

fn draw(rng: &mut ChaCha8Rng, bound: usize) -> usize {
    (rng.next_u64() % bound as u64) as usize
}

/// A cell value for `attr`, never producing the decoy value on the decoy
/// attribute.
fn fill_value(
    rng: &mut ChaCha8Rng,
    spec: &GenSpec,
    attr: usize,
    decoy: Option<(usize, usize)>,
) -> usize {
    match decoy {
        Some((decoy_attr, decoy_value)) if decoy_attr == attr => {
            let v = draw(rng, spec.values - 1);
            if v >= decoy_value {
                v + 1
            } else {
                v
            }
        }
        _ => draw(rng, spec.values),
    }
}

fn uniform_row(rng: &mut ChaCha8Rng, spec: &GenSpec, class: ClassId) -> Vec<u16> {
    let mut row: Vec<u16> = (0..spec.attrs)
        .map(|_| draw(rng, spec.values) as u16)
        .collect();
    row.push(class.index() as u16);
    row
}

/// A record containing the template condset, other attributes random.
fn template_row(
    rng: &mut ChaCha8Rng,
    spec: &GenSpec,
    condset: &Condset,
    class: ClassId,
    decoy: Option<(usize, usize)>,
) -> Result<Vec<u16>, GenError> {
    let mut row = Vec::with_capacity(spec.attrs + 1);
    for attr in 0..spec.attrs {
        match condset.value_of(attr as u16) {
            Some(v) => row.push(v),
            None => row.push(fill_value(rng, spec, attr, decoy) as u16),
        }
    }
    row.push(class.index() as u16);
    Ok(row)
}

/// A random record guaranteed to contain neither template condset.
/// `pinned` fixes one cell before the containment check.
fn avoiding_row(
    rng: &mut ChaCha8Rng,
    spec: &GenSpec,
    condset1: &Condset,
    condset2: &Condset,
    class: ClassId,
    decoy: Option<(usize, usize)>,
    pinned: Option<(usize, usize)>,
) -> Result<Vec<u16>, GenError> {
    const MAX_ATTEMPTS: usize = 10_000;
    for _ in 0..MAX_ATTEMPTS {
        let mut row: Vec<u16> = (0..spec.attrs)
            .map(|attr| fill_value(rng, spec, attr, decoy) as u16)
            .collect();
        if let Some((attr, value)) = pinned {
            row[attr] = value as u16;
        }
        row.push(class.index() as u16);
        if !condset1.matches_row(&row) && !condset2.matches_row(&row) {
            return Ok(row);
        }
    }
    Err(GenError::Infeasible(
        "the attribute space cannot avoid the planted condsets".into(),
    ))
}

fn threshold_count(min_supp: Rational64, n_total: u64) -> u64 {
    let scaled = min_supp * Rational64::from_integer(n_total as i64);
    (scaled.ceil().to_integer().max(0) as u64).max(1)
}

fn ceil_mul(ratio: Rational64, count: u64) -> u64 {
    let scaled = ratio * Rational64::from_integer(count as i64);
    scaled.ceil().to_integer().max(0) as u64
}

/// Parses `A=1,B=1->Cl1@0.9 : A=1,B=2->Cl2@0.8` against the generated
/// naming scheme.
pub fn parse_planted(
    text: &str,
    spec_attrs: usize,
    spec_values: usize,
    min_supp: Rational64,
) -> Result<PlantedSpec, GenError> {
    let (left, right) = text
        .split_once(':')
        .ok_or_else(|| GenError::BadTemplate("expected `rule : rule`".into()))?;
    Ok(PlantedSpec {
        rule1: parse_planted_rule(left, spec_attrs, spec_values)?,
        rule2: parse_planted_rule(right, spec_attrs, spec_values)?,
        min_supp,
    })
}

fn parse_planted_rule(
    text: &str,
    spec_attrs: usize,
    spec_values: usize,
) -> Result<PlantedRule, GenError> {
    let bad = |msg: &str| GenError::BadTemplate(format!("`{}`: {msg}", text.trim()));
    let (items_text, rest) = text
        .split_once("->")
        .ok_or_else(|| bad("expected `items->class@conf`"))?;
    let (class_text, conf_text) = rest
        .split_once('@')
        .ok_or_else(|| bad("expected `class@conf`"))?;
    let mut items = Vec::new();
    for part in items_text.split(',') {
        let (name, value) = part
            .trim()
            .split_once('=')
            .ok_or_else(|| bad("items are `name=value`"))?;
        let attr = (0..spec_attrs)
            .find(|&i| attr_name(i) == name.trim())
            .ok_or_else(|| bad(&format!("unknown attribute `{}`", name.trim())))?;
        let value = (0..spec_values)
            .find(|&v| value_name(v) == value.trim())
            .ok_or_else(|| bad(&format!("unknown value `{}`", value.trim())))?;
        items.push(Item::new(attr, value));
    }
    let class = match class_text.trim() {
        "Cl1" => ClassId::FIRST,
        "Cl2" => ClassId::SECOND,
        other => return Err(bad(&format!("unknown class `{other}`"))),
    };
    let confidence = crate::params::parse_ratio(conf_text.trim())
        .map_err(|e| bad(&e.to_string()))?;
    Ok(PlantedRule { items, class, confidence })
}
