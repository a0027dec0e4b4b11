//! Exact nonnegative edge costs.
//!
//! Dual growth compares slacks for exact ties, so costs are arbitrary
//! precision rationals end to end; floating point never enters the solver.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Cost = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CostError {
    #[error("cannot parse {0:?} as a rational cost")]
    Malformed(String),
    #[error("cost {0:?} has a zero denominator")]
    ZeroDenominator(String),
    #[error("cost {0:?} is negative")]
    Negative(String),
}

/// Parses `"3"`, `"2.5"`, or `"7/2"` into an exact nonnegative rational.
pub fn parse_cost(text: &str) -> Result<Cost, CostError> {
    let s = text.trim();
    let malformed = || CostError::Malformed(text.to_string());
    let value = if let Some((numer, denom)) = s.split_once('/') {
        let n: BigInt = numer.trim().parse().map_err(|_| malformed())?;
        let d: BigInt = denom.trim().parse().map_err(|_| malformed())?;
        if d.is_zero() {
            return Err(CostError::ZeroDenominator(text.to_string()));
        }
        BigRational::new(n, d)
    } else if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let negative = whole.trim_start().starts_with('-');
        let w: BigInt = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| malformed())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let digits: BigInt = frac.parse().map_err(|_| malformed())?;
        let signed_digits = if negative { -digits } else { digits };
        BigRational::new(w * &scale + signed_digits, scale)
    } else {
        let n: BigInt = s.parse().map_err(|_| malformed())?;
        BigRational::from_integer(n)
    };
    if value.is_negative() {
        return Err(CostError::Negative(text.to_string()));
    }
    Ok(value)
}

/// Renders a cost canonically: plain integer when possible, `p/q` otherwise.
pub fn format_cost(c: &Cost) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Cost {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_integers_decimals_and_fractions() {
        assert_eq!(parse_cost("3").unwrap(), rat(3, 1));
        assert_eq!(parse_cost("2.5").unwrap(), rat(5, 2));
        assert_eq!(parse_cost("7/2").unwrap(), rat(7, 2));
        assert_eq!(parse_cost("0").unwrap(), rat(0, 1));
        assert_eq!(parse_cost("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_cost(" 10 ").unwrap(), rat(10, 1));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_cost("-1"), Err(CostError::Negative(_))));
        assert!(matches!(parse_cost("-0.5"), Err(CostError::Negative(_))));
        assert!(matches!(
            parse_cost("1/0"),
            Err(CostError::ZeroDenominator(_))
        ));
        assert!(matches!(parse_cost("abc"), Err(CostError::Malformed(_))));
        assert!(matches!(parse_cost("1.2.3"), Err(CostError::Malformed(_))));
        assert!(matches!(parse_cost(""), Err(CostError::Malformed(_))));
        assert!(matches!(parse_cost("1."), Err(CostError::Malformed(_))));
    }

    #[test]
    fn formats_round_trip() {
        for text in ["3", "5/2", "0", "7/3"] {
            let c = parse_cost(text).unwrap();
            assert_eq!(format_cost(&c), text);
            assert_eq!(parse_cost(&format_cost(&c)).unwrap(), c);
        }
        assert_eq!(format_cost(&parse_cost("2.5").unwrap()), "5/2");
    }
}
