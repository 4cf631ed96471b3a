//! Exact rational scalars and parsing/formatting helpers.

use crate::{Error, Result};
use num::rational::Ratio;
use num::{One, Signed, Zero};

/// Exact rational number used throughout the crate.
pub type Rat = Ratio<i128>;

/// Build a rational from an integer.
pub fn rat(n: i128) -> Rat {
    Rat::from_integer(n)
}

/// Build a rational from numerator and denominator.
pub fn ratio(n: i128, d: i128) -> Rat {
    Rat::new(n, d)
}

/// Parse `"a/b"` or `"a"` (optionally signed) into a rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let mk_err = || Error::InvalidInput(format!("cannot parse rational from {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let n: i128 = num.trim().parse().map_err(|_| mk_err())?;
        let d: i128 = den.trim().parse().map_err(|_| mk_err())?;
        if d == 0 {
            return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
        }
        Ok(Rat::new(n, d))
    } else {
        let n: i128 = s.parse().map_err(|_| mk_err())?;
        Ok(rat(n))
    }
}

/// Format a rational as `"a"` when integral, else `"a/b"`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True if the rational is an integer.
pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// True if the rational is a strictly positive integer.
pub fn is_positive_integer(r: &Rat) -> bool {
    is_integer(r) && r.is_positive()
}

/// True if the rational is a nonnegative integer.
pub fn is_nonnegative_integer(r: &Rat) -> bool {
    is_integer(r) && !r.is_negative()
}

/// Extract the integer value (error when not integral).
pub fn to_integer(r: &Rat) -> Result<i128> {
    if is_integer(r) {
        Ok(*r.numer())
    } else {
        Err(Error::InvalidInput(format!(
            "expected integer, got {}",
            format_rat(r)
        )))
    }
}

/// Sum of a slice of rationals.
pub fn rat_sum<'a>(it: impl IntoIterator<Item = &'a Rat>) -> Rat {
    it.into_iter().fold(Rat::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-7/4", "0", "1/2", "-12"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        // Non-reduced input normalizes.
        assert_eq!(format_rat(&parse_rat("6/4").unwrap()), "3/2");
        assert_eq!(format_rat(&parse_rat("4/2").unwrap()), "2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn integer_predicates() {
        assert!(is_integer(&rat(5)));
        assert!(!is_integer(&ratio(1, 2)));
        assert!(is_positive_integer(&rat(2)));
        assert!(!is_positive_integer(&rat(0)));
        assert!(is_nonnegative_integer(&rat(0)));
        assert_eq!(to_integer(&rat(-3)).unwrap(), -3);
        assert!(to_integer(&ratio(1, 2)).is_err());
    }
}
