//! Command-line surface: mine rule sets and patterns, cross-check the
//! direct miner against the brute-force pipeline, generate synthetic
//! datasets, and benchmark the pruning.
//!
//! Exit codes: 0 success, 1 comparison mismatch, 2 usage or validation
//! error, 3 resource cap exceeded.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;

use scr_apriori::apriori::{
    classification_rules_via_postfilter, generate_rules, mine_frequent_itemsets,
};
use scr_apriori::car::{mine_car_ruleitems, ClassificationRule};
use scr_apriori::datagen::{self, GenSpec};
use scr_apriori::dataset::{load_dataset, load_schema, Dataset};
use scr_apriori::format::{
    format_percent, format_ratio_exact, patterns_to_text, patterns_to_tsv, render_pattern_line,
    rules_to_text, rules_to_tsv, FileMeta,
};
use scr_apriori::lattice::LevelStats;
use scr_apriori::metrics::{pruning_stats, PruningStats, RunCounts};
use scr_apriori::oracle::{compare_pattern_sets, oracle_scr_patterns, OracleError, DEFAULT_CONDSET_CAP};
use scr_apriori::params::{parse_ratio, MiningParams, MinSupport};
use scr_apriori::scr::{assemble_patterns, mine_scr_ruleitems, ScrPattern};
use scr_apriori::ClassId;

#[derive(Parser, Debug)]
#[command(
    name = "scr",
    version,
    about = "Mine sets of contrasting rules from two-class categorical data"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Mine patterns or classification rules from a CSV dataset
    Mine(MineArgs),
    /// Mine patterns and verify them against the brute-force pipeline
    OracleCompare(OracleCompareArgs),
    /// Compare the direct miner against CAR-Apriori over a sweep of runs
    Bench(BenchArgs),
    /// Generate a synthetic dataset (CSV plus schema file)
    Gen(GenArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Apriori,
    Car,
    Scr,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct SupportArg {
    /// Minimum support as a ratio of all records, e.g. 0.07 or 7/100
    #[arg(long, value_name = "RATIO")]
    min_supp: Option<String>,
    /// Minimum support as an absolute record count, e.g. 2
    #[arg(long, value_name = "COUNT")]
    min_supp_count: Option<u64>,
}

impl SupportArg {
    fn parse(&self) -> Result<MinSupport> {
        Ok(match (&self.min_supp, self.min_supp_count) {
            (Some(ratio), None) => MinSupport::Ratio(parse_ratio(ratio)?),
            (None, Some(count)) => MinSupport::Count(count),
            _ => unreachable!("clap enforces exactly one support flag"),
        })
    }
}

#[derive(Args, Debug)]
struct InputArgs {
    /// CSV data file with a header row
    #[arg(long, value_name = "PATH")]
    data: PathBuf,
    /// Schema file, one `name:role` line per attribute
    #[arg(long, value_name = "PATH")]
    schema: PathBuf,
}

impl InputArgs {
    fn load(&self) -> Result<Dataset> {
        let schema_text = fs::read_to_string(&self.schema)
            .with_context(|| format!("cannot read schema file `{}`", self.schema.display()))?;
        let schema = load_schema(&schema_text)
            .with_context(|| format!("invalid schema `{}`", self.schema.display()))?;
        if !schema.has_varying() {
            eprintln!("warning: schema has no varying attribute; no pattern can exist");
        }
        let file = fs::File::open(&self.data)
            .with_context(|| format!("cannot read data file `{}`", self.data.display()))?;
        load_dataset(BufReader::new(file), &schema)
            .with_context(|| format!("invalid dataset `{}`", self.data.display()))
    }
}

#[derive(Args, Debug)]
struct MineArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Mining algorithm
    #[arg(long, value_enum)]
    algo: Algo,
    #[command(flatten)]
    support: SupportArg,
    /// Minimum confidence (alpha), e.g. 0.5 or 2/3
    #[arg(long, value_name = "RATIO")]
    min_conf: String,
    /// Pattern or rule file to write
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Stats file; defaults to `<out>.stats`
    #[arg(long, value_name = "PATH")]
    stats: Option<PathBuf>,
    /// Tab-separated machine-readable output
    #[arg(long, value_name = "PATH")]
    machine_out: Option<PathBuf>,
    /// Worker threads for support counting
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args, Debug)]
struct OracleCompareArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    support: SupportArg,
    /// Minimum confidence (alpha)
    #[arg(long, value_name = "RATIO")]
    min_conf: String,
    /// Ceiling on the number of condsets the oracle may enumerate
    #[arg(long, default_value_t = DEFAULT_CONDSET_CAP)]
    oracle_cap: u64,
    /// Write the diff report here instead of stdout
    #[arg(long, value_name = "PATH")]
    diff: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Harness self-test: drop the first mined pattern before comparing
    #[arg(long, hide = true)]
    corrupt_first: bool,
}

#[derive(Args, Debug)]
struct GenShape {
    /// Number of non-class attributes
    #[arg(long, default_value_t = 4)]
    attrs: usize,
    /// Values per attribute
    #[arg(long, default_value_t = 2)]
    values: usize,
    /// Leading attributes marked invariant; the rest are varying
    #[arg(long, default_value_t = 1)]
    invariant: usize,
    /// Total record count, split evenly across the two classes
    #[arg(long, default_value_t = 60)]
    records: u64,
    /// Fraction of uniform noise records in planted mode
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Planted pattern, e.g. "B=1,C=1->Cl1@0.9 : B=1,C=2->Cl2@0.8"
    #[arg(long, value_name = "SPEC")]
    plant: Option<String>,
    /// Support threshold the planted rules must clear
    #[arg(long, default_value = "0.1", value_name = "RATIO")]
    plant_min_supp: String,
}

impl GenShape {
    fn to_spec(&self, seed: u64) -> Result<GenSpec> {
        let planted = match &self.plant {
            Some(text) => Some(datagen::parse_planted(
                text,
                self.attrs,
                self.values,
                parse_ratio(&self.plant_min_supp)?,
            )?),
            None => None,
        };
        Ok(GenSpec {
            attrs: self.attrs,
            values: self.values,
            invariant: self.invariant,
            records_per_class: (self.records.div_ceil(2), self.records / 2),
            seed,
            noise: self.noise,
            planted,
        })
    }
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    shape: GenShape,
    /// Generator seed
    #[arg(long)]
    seed: u64,
    /// CSV file to write
    #[arg(long, value_name = "PATH")]
    out_data: PathBuf,
    /// Schema file to write
    #[arg(long, value_name = "PATH")]
    out_schema: PathBuf,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Benchmark an existing dataset instead of generated ones
    #[arg(long, value_name = "PATH", requires = "schema")]
    data: Option<PathBuf>,
    #[arg(long, value_name = "PATH", requires = "data")]
    schema: Option<PathBuf>,
    /// Generator seeds, comma-separated; one run per seed
    #[arg(long, value_name = "LIST", default_value = "")]
    seeds: String,
    #[command(flatten)]
    shape: GenShape,
    #[command(flatten)]
    support: SupportArg,
    /// Minimum confidence (alpha)
    #[arg(long, value_name = "RATIO")]
    min_conf: String,
    /// Plain-text table file; stdout when omitted
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Tab-separated table file
    #[arg(long, value_name = "PATH")]
    tsv: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Mine(args) => cmd_mine(args),
        Cmd::OracleCompare(args) => cmd_oracle_compare(args),
        Cmd::Bench(args) => cmd_bench(args),
        Cmd::Gen(args) => cmd_gen(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let cap_exceeded = err
                .chain()
                .any(|cause| matches!(cause.downcast_ref(), Some(OracleError::CapExceeded { .. })));
            ExitCode::from(if cap_exceeded { 3 } else { 2 })
        }
    }
}

fn params_from(support: &SupportArg, min_conf: &str) -> Result<MiningParams> {
    let min_supp = support.parse()?;
    let min_conf = parse_ratio(min_conf)?;
    Ok(MiningParams::new(min_supp, min_conf)?)
}

/// Distinct classification rules appearing in a pattern set.
fn pattern_rules(patterns: &[ScrPattern]) -> Vec<ClassificationRule> {
    let mut rules: Vec<ClassificationRule> = patterns
        .iter()
        .flat_map(|p| [p.rule1.clone(), p.rule2.clone()])
        .collect();
    rules.sort_unstable();
    rules.dedup();
    rules
}

struct StatsFile {
    lines: Vec<(String, String)>,
    levels: Vec<LevelStats>,
}

impl StatsFile {
    fn new() -> StatsFile {
        StatsFile { lines: Vec::new(), levels: Vec::new() }
    }

    fn push(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    fn render(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.lines {
            out.push_str(&format!("{key}\t{value}\n"));
        }
        out.push_str("level\tgenerated\tkept\n");
        for level in &self.levels {
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                level.level, level.generated, level.kept
            ));
        }
        out
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write `{}`", path.display()))
}

fn cmd_mine(args: MineArgs) -> Result<u8> {
    let started = Instant::now();
    let dataset = args.input.load()?;
    let params = params_from(&args.support, &args.min_conf)?;
    let schema = dataset.schema();
    let threshold = params.min_supp.to_count(dataset.n_total());
    let meta = FileMeta {
        alpha: params.min_conf,
        min_supp: params.min_supp,
        n_total: dataset.n_total(),
    };

    let mut stats = StatsFile::new();
    stats.push("algorithm", format!("{:?}", args.algo).to_lowercase());
    stats.push("data", args.input.data.display());
    stats.push("records", dataset.n_total());
    stats.push("class_first", schema.class_name(ClassId::FIRST));
    stats.push("class_second", schema.class_name(ClassId::SECOND));
    stats.push("class_first_count", dataset.class_record_counts().first());
    stats.push("class_second_count", dataset.class_record_counts().second());
    stats.push("min_supp", params.min_supp);
    stats.push("min_conf", format_ratio_exact(params.min_conf));
    stats.push("support_count_threshold", threshold);
    stats.push("threads", args.threads);

    let (out_text, machine_text, summary) = match args.algo {
        Algo::Scr => {
            let mined = mine_scr_ruleitems(&dataset, params.min_supp, args.threads);
            let patterns = assemble_patterns(&mined.kept, schema, &params, dataset.n_total());
            let rules = pattern_rules(&patterns);
            stats.push("scr_ruleitems_kept", mined.kept.len());
            stats.push("patterns", patterns.len());
            stats.push("pattern_rules", rules.len());
            stats.levels = mined.levels;
            (
                patterns_to_text(&patterns, schema, &meta),
                patterns_to_tsv(&patterns, schema, &meta),
                format!("{} patterns", patterns.len()),
            )
        }
        Algo::Car => {
            let mined = mine_car_ruleitems(&dataset, params.min_supp, args.threads);
            let rules = mined.rules(params.min_conf);
            stats.push("car_condsets", mined.condsets.len());
            stats.push("car_ruleitems", mined.ruleitems.len());
            stats.push("rules", rules.len());
            stats.levels = mined.levels;
            (
                rules_to_text(&rules, schema, &meta),
                rules_to_tsv(&rules, schema, &meta),
                format!("{} classification rules", rules.len()),
            )
        }
        Algo::Apriori => {
            let frequent = mine_frequent_itemsets(&dataset, params.min_supp, args.threads);
            let association = generate_rules(&frequent, params.min_conf);
            let rules = classification_rules_via_postfilter(&association, schema);
            stats.push("frequent_itemsets", frequent.itemsets.len());
            stats.push("association_rules", association.len());
            stats.push("classification_rules", rules.len());
            stats.levels = frequent.levels;
            (
                rules_to_text(&rules, schema, &meta),
                rules_to_tsv(&rules, schema, &meta),
                format!("{} classification rules (post-filtered)", rules.len()),
            )
        }
    };

    write_file(&args.out, &out_text)?;
    if let Some(machine_out) = &args.machine_out {
        write_file(machine_out, &machine_text)?;
    }
    stats.push("wall_time_ms", started.elapsed().as_millis());
    let stats_path = args
        .stats
        .clone()
        .unwrap_or_else(|| default_stats_path(&args.out));
    write_file(&stats_path, &stats.render())?;
    println!("mined {summary} -> {}", args.out.display());
    Ok(0)
}

fn default_stats_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".stats");
    out.with_file_name(name)
}

fn cmd_oracle_compare(args: OracleCompareArgs) -> Result<u8> {
    let dataset = args.input.load()?;
    let params = params_from(&args.support, &args.min_conf)?;

    let mined = mine_scr_ruleitems(&dataset, params.min_supp, args.threads);
    let mut direct = assemble_patterns(&mined.kept, dataset.schema(), &params, dataset.n_total());
    if args.corrupt_first && !direct.is_empty() {
        direct.remove(0);
    }
    let report = oracle_scr_patterns(&dataset, &params, args.oracle_cap)?;
    let diff = compare_pattern_sets(&direct, &report.patterns);

    let mut text = String::new();
    text.push_str(&format!("direct_patterns\t{}\n", direct.len()));
    text.push_str(&format!("oracle_patterns\t{}\n", report.patterns.len()));
    text.push_str(&format!("oracle_condsets\t{}\n", report.n_condsets));
    text.push_str(&format!(
        "oracle_frequent_ruleitems\t{}\n",
        report.n_frequent_ruleitems
    ));
    text.push_str(&format!("oracle_confident_rules\t{}\n", report.n_confident_rules));
    text.push_str(&format!(
        "verdict\t{}\n",
        if diff.is_empty() { "equal" } else { "MISMATCH" }
    ));
    for pattern in &diff.missing_from_a {
        text.push_str(&format!(
            "missing_from_direct\t{}\n",
            render_pattern_line(pattern, dataset.schema())
        ));
    }
    for pattern in &diff.missing_from_b {
        text.push_str(&format!(
            "missing_from_oracle\t{}\n",
            render_pattern_line(pattern, dataset.schema())
        ));
    }
    match &args.diff {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(if diff.is_empty() { 0 } else { 1 })
}

fn cmd_gen(args: GenArgs) -> Result<u8> {
    let spec = args.shape.to_spec(args.seed)?;
    let out = datagen::generate(&spec)?;
    for warning in &out.warnings {
        eprintln!("warning: {warning}");
    }
    write_file(&args.out_schema, &out.dataset.schema().to_schema_text())?;
    write_file(&args.out_data, &out.dataset.to_csv_string())?;
    println!(
        "generated {} records -> {}",
        out.dataset.n_total(),
        args.out_data.display()
    );
    Ok(0)
}

struct BenchRow {
    label: String,
    records: u64,
    stats: PruningStats,
    scr_levels: Vec<LevelStats>,
    car_levels: Vec<LevelStats>,
    scr_ms: u128,
    car_ms: u128,
}

fn bench_one(label: String, dataset: &Dataset, params: &MiningParams, threads: usize) -> BenchRow {
    let scr_started = Instant::now();
    let mined = mine_scr_ruleitems(dataset, params.min_supp, threads);
    let patterns = assemble_patterns(&mined.kept, dataset.schema(), params, dataset.n_total());
    let scr_ms = scr_started.elapsed().as_millis();
    let scr_rules = pattern_rules(&patterns);

    let car_started = Instant::now();
    let car = mine_car_ruleitems(dataset, params.min_supp, threads);
    let car_rules = car.rules(params.min_conf);
    let car_ms = car_started.elapsed().as_millis();

    let stats = pruning_stats(
        &RunCounts {
            ruleitems: mined.kept.len() as u64,
            condsets: mined.kept.len() as u64,
            rules: scr_rules.len() as u64,
        },
        &RunCounts {
            ruleitems: car.ruleitems.len() as u64,
            condsets: car.condsets.len() as u64,
            rules: car_rules.len() as u64,
        },
    );
    BenchRow {
        label,
        records: dataset.n_total(),
        stats,
        scr_levels: mined.levels,
        car_levels: car.levels,
        scr_ms,
        car_ms,
    }
}

fn levels_compact(levels: &[LevelStats]) -> String {
    if levels.is_empty() {
        return "-".to_string();
    }
    levels
        .iter()
        .map(|l| format!("{}/{}", l.generated, l.kept))
        .collect::<Vec<_>>()
        .join(" ")
}

fn ratio_cell(ratio: &Option<Rational64>) -> String {
    match ratio {
        Some(r) => format_percent(*r),
        None => "-".to_string(),
    }
}

fn cmd_bench(args: BenchArgs) -> Result<u8> {
    let params = params_from(&args.support, &args.min_conf)?;
    let mut rows = Vec::new();
    if let (Some(data), Some(schema)) = (&args.data, &args.schema) {
        let input = InputArgs { data: data.clone(), schema: schema.clone() };
        let dataset = input.load()?;
        rows.push(bench_one(
            data.display().to_string(),
            &dataset,
            &params,
            args.threads,
        ));
    } else {
        for part in args.seeds.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let seed: u64 = part
                .parse()
                .with_context(|| format!("invalid seed `{part}`"))?;
            let spec = args.shape.to_spec(seed)?;
            let out = datagen::generate(&spec)?;
            for warning in &out.warnings {
                eprintln!("warning: seed {seed}: {warning}");
            }
            rows.push(bench_one(
                format!("seed={seed}"),
                &out.dataset,
                &params,
                args.threads,
            ));
        }
    }

    const HEADER: [&str; 12] = [
        "run", "records", "scr_ruleitems", "car_ruleitems", "car_condsets", "scr_rules",
        "car_rules", "ruleitem_ratio", "rule_ratio", "scr_levels", "car_levels", "ms_scr/car",
    ];
    let mut table: Vec<Vec<String>> = vec![HEADER.iter().map(|s| s.to_string()).collect()];
    for row in &rows {
        table.push(vec![
            row.label.clone(),
            row.records.to_string(),
            row.stats.scr_ruleitems.to_string(),
            row.stats.car_ruleitems.to_string(),
            row.stats.car_condsets.to_string(),
            row.stats.scr_rules.to_string(),
            row.stats.car_rules.to_string(),
            ratio_cell(&row.stats.ruleitem_ratio),
            ratio_cell(&row.stats.rule_ratio),
            levels_compact(&row.scr_levels),
            levels_compact(&row.car_levels),
            format!("{}/{}", row.scr_ms, row.car_ms),
        ]);
    }
    let widths: Vec<usize> = (0..HEADER.len())
        .map(|col| table.iter().map(|r| r[col].len()).max().unwrap_or(0))
        .collect();
    let mut text = String::new();
    for row in &table {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(col, cell)| format!("{cell:<width$}", width = widths[col]))
            .collect();
        text.push_str(line.join("  ").trim_end());
        text.push('\n');
    }
    for row in &rows {
        text.push_str(&format!(
            "{}: SCR-ruleitems = {} of CAR frequent ruleitems; SCR rules = {} of CAR classification rules\n",
            row.label,
            ratio_cell(&row.stats.ruleitem_ratio),
            ratio_cell(&row.stats.rule_ratio),
        ));
    }
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }

    if let Some(tsv_path) = &args.tsv {
        let mut tsv = String::from(
            "run\trecords\tscr_ruleitems\tcar_ruleitems\tcar_condsets\tscr_rules\tcar_rules\truleitem_ratio\tcondset_ratio\trule_ratio\tscr_levels\tcar_levels\tscr_ms\tcar_ms\n",
        );
        for row in &rows {
            tsv.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                row.label,
                row.records,
                row.stats.scr_ruleitems,
                row.stats.car_ruleitems,
                row.stats.car_condsets,
                row.stats.scr_rules,
                row.stats.car_rules,
                ratio_cell(&row.stats.ruleitem_ratio),
                ratio_cell(&row.stats.condset_ratio),
                ratio_cell(&row.stats.rule_ratio),
                levels_compact(&row.scr_levels),
                levels_compact(&row.car_levels),
                row.scr_ms,
                row.car_ms,
            ));
        }
        write_file(tsv_path, &tsv)?;
    }
    Ok(0)
}
