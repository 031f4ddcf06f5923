//! Mining thresholds and exact-ratio parsing.
//!
//! Thresholds are kept as exact rationals throughout so that comparisons
//! like `2/3 >= 0.5` never depend on floating-point rounding.

use num_rational::Rational64;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("invalid ratio `{0}`: expected a decimal like 0.07 or a fraction like 2/3")]
    BadRatio(String),
    #[error("minimum support ratio must be in (0, 1], got {0}")]
    SupportOutOfRange(Rational64),
    #[error("minimum support count must be at least 1")]
    ZeroSupportCount,
    #[error("minimum confidence must be in (0, 1], got {0}")]
    ConfidenceOutOfRange(Rational64),
}

/// Minimum-support threshold: relative to the total record count, or an
/// absolute support number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinSupport {
    Ratio(Rational64),
    Count(u64),
}

impl MinSupport {
    /// Smallest support count satisfying the threshold on `n_total` records
    /// ("above or equal" semantics, hence the ceiling).
    ///
    /// Ratio thresholds floor at one occurrence so that datasets with no
    /// records never report frequent itemsets.
    pub fn to_count(self, n_total: u64) -> u64 {
        match self {
            MinSupport::Count(c) => c,
            MinSupport::Ratio(r) => {
                let scaled = r * Rational64::from_integer(n_total as i64);
                (scaled.ceil().to_integer().max(0) as u64).max(1)
            }
        }
    }
}

impl std::fmt::Display for MinSupport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MinSupport::Ratio(r) => write!(f, "ratio:{}", r),
            MinSupport::Count(c) => write!(f, "count:{}", c),
        }
    }
}

/// Thresholds shared by all miners.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MiningParams {
    pub min_supp: MinSupport,
    /// Minimum confidence; doubles as the alpha of contrast-pair checks.
    pub min_conf: Rational64,
}

impl MiningParams {
    pub fn new(min_supp: MinSupport, min_conf: Rational64) -> Result<Self, ParamError> {
        match min_supp {
            MinSupport::Ratio(r) if r <= Rational64::zero() || r > Rational64::one() => {
                return Err(ParamError::SupportOutOfRange(r));
            }
            MinSupport::Count(0) => return Err(ParamError::ZeroSupportCount),
            _ => {}
        }
        if min_conf <= Rational64::zero() || min_conf > Rational64::one() {
            return Err(ParamError::ConfidenceOutOfRange(min_conf));
        }
        Ok(MiningParams { min_supp, min_conf })
    }
}

/// Parses a non-negative ratio written either as a decimal (`0.07`) or as a
/// fraction (`7/100`). The decimal form is converted exactly.
pub fn parse_ratio(text: &str) -> Result<Rational64, ParamError> {
    let t = text.trim();
    let bad = || ParamError::BadRatio(text.to_string());
    if t.is_empty() || t.starts_with('-') || t.starts_with('+') {
        return Err(bad());
    }
    if let Some((num, den)) = t.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| bad())?;
        let d: i64 = den.trim().parse().map_err(|_| bad())?;
        if d <= 0 || n < 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(n, d));
    }
    let (int_part, frac_part) = match t.split_once('.') {
        Some((i, f)) => (i, f),
        None => (t, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let int_val: i64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| bad())?
    };
    if frac_part.is_empty() {
        return Ok(Rational64::from_integer(int_val));
    }
    if frac_part.len() > 12 || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: i64 = frac_part.parse().map_err(|_| bad())?;
    let scale = 10i64.pow(frac_part.len() as u32);
    Ok(Rational64::from_integer(int_val) + Rational64::new(digits, scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_ratio("0.07").unwrap(), Rational64::new(7, 100));
        assert_eq!(parse_ratio("0.5").unwrap(), Rational64::new(1, 2));
        assert_eq!(parse_ratio("1").unwrap(), Rational64::one());
        assert_eq!(parse_ratio(".25").unwrap(), Rational64::new(1, 4));
    }

    #[test]
    fn parses_fractions() {
        assert_eq!(parse_ratio("2/3").unwrap(), Rational64::new(2, 3));
        assert_eq!(parse_ratio("7/100").unwrap(), Rational64::new(7, 100));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "-0.5", "abc", "1/0", "0.1.2", "1e-3"] {
            assert!(parse_ratio(bad).is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn ratio_threshold_rounds_up() {
        // 0.07 of 16 records is 1.12, so 2 occurrences are needed.
        let t = MinSupport::Ratio(Rational64::new(7, 100));
        assert_eq!(t.to_count(16), 2);
        // Exact multiples stay exact.
        assert_eq!(MinSupport::Ratio(Rational64::new(7, 100)).to_count(100), 7);
        // 1/n keeps every itemset that occurs at least once.
        assert_eq!(MinSupport::Ratio(Rational64::new(1, 16)).to_count(16), 1);
        // Zero-record datasets still require one occurrence.
        assert_eq!(t.to_count(0), 1);
        assert_eq!(MinSupport::Count(2).to_count(0), 2);
    }

    #[test]
    fn params_validate_domains() {
        let half = Rational64::new(1, 2);
        assert!(MiningParams::new(MinSupport::Count(1), half).is_ok());
        assert!(MiningParams::new(MinSupport::Count(0), half).is_err());
        assert!(MiningParams::new(MinSupport::Ratio(Rational64::zero()), half).is_err());
        assert!(
            MiningParams::new(MinSupport::Ratio(Rational64::new(3, 2)), half).is_err()
        );
        assert!(MiningParams::new(MinSupport::Count(1), Rational64::zero()).is_err());
        assert!(
            MiningParams::new(MinSupport::Count(1), Rational64::new(5, 4)).is_err()
        );
    }
}
