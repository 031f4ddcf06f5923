//! Direct mining of SCR-patterns ("sets of contrasting rules") from
//! two-class categorical data, next to the classic Apriori and CAR-Apriori
//! miners it extends and a brute-force post-filtering oracle that proves the
//! outputs equivalent.
//!
//! An SCR-pattern pairs two confident classification rules over the same
//! attributes that agree on every invariant attribute and differ in at least
//! one varying one. The SCR miner prunes the levelwise search space with a
//! five-branch frequency-and-contrast filter instead of post-filtering the
//! full rule set.
//!
//! ```
//! use scr_apriori::dataset::{load_dataset, load_schema};
//! use scr_apriori::params::{parse_ratio, MiningParams, MinSupport};
//! use scr_apriori::scr::{assemble_patterns, mine_scr_ruleitems};
//!
//! let schema = load_schema("A:invariant\nB:varying\nCl:class").unwrap();
//! let csv = "A,B,Cl\n1,1,x\n1,1,x\n1,2,y\n1,2,y\n";
//! let dataset = load_dataset(csv.as_bytes(), &schema).unwrap();
//! let params = MiningParams::new(
//!     MinSupport::Count(2),
//!     parse_ratio("0.5").unwrap(),
//! ).unwrap();
//! let mined = mine_scr_ruleitems(&dataset, params.min_supp, 1);
//! let patterns = assemble_patterns(
//!     &mined.kept,
//!     dataset.schema(),
//!     &params,
//!     dataset.n_total(),
//! );
//! assert_eq!(patterns.len(), 1);
//! ```

pub mod apriori;
pub mod car;
pub mod datagen;
pub mod dataset;
pub mod format;
pub mod lattice;
pub mod metrics;
pub mod oracle;
pub mod params;
pub mod scr;

#[cfg(test)]
pub(crate) mod testutil;

pub use dataset::{
    load_dataset, load_schema, AttributeRole, AttributeSchema, ClassCounts, ClassId, DataError,
    Dataset,
};
pub use lattice::{Condset, Item, LevelStats, SupportTable};
pub use params::{parse_ratio, MiningParams, MinSupport, ParamError};
