//! Exact rational helpers: `num/den` strings and presentation decimals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Rational = BigRational;

pub fn from_int(n: impl Into<BigInt>) -> Rational {
    BigRational::from_integer(n.into())
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    BigRational::new(num.into(), den.into())
}

/// Reduced `num/den`, always with an explicit denominator.
pub fn to_fraction_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_fraction(s: &str) -> Option<Rational> {
    let (n, d) = s.split_once('/')?;
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Decimal rendering rounded half away from zero to `places` digits.
pub fn to_decimal_string(r: &Rational, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled: BigInt = r.numer().abs() * &scale * 2 + r.denom();
    let (q, _) = scaled.div_rem(&(r.denom() * 2));
    let (int_part, frac_part) = q.div_rem(&scale);
    let sign = if r.is_negative() && !q.is_zero() { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = places)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions() {
        assert_eq!(to_fraction_string(&ratio(14, 26)), "7/13");
        assert_eq!(to_fraction_string(&from_int(40)), "40/1");
        assert_eq!(parse_fraction("7/13"), Some(ratio(7, 13)));
        assert_eq!(parse_fraction("-2/4"), Some(ratio(-1, 2)));
        assert_eq!(parse_fraction("1/0"), None);
        assert_eq!(parse_fraction("3"), None);
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal_string(&ratio(7, 13), 6), "0.538462");
        assert_eq!(to_decimal_string(&ratio(1, 7), 4), "0.1429");
        assert_eq!(to_decimal_string(&ratio(-3, 2), 0), "-2");
        assert_eq!(to_decimal_string(&ratio(-1, 3), 3), "-0.333");
        assert_eq!(to_decimal_string(&from_int(0), 2), "0.00");
        assert_eq!(to_decimal_string(&ratio(-1, 1000), 2), "0.00");
    }
}
