//! Exact rational scalars.
//!
//! Every quantity that participates in a decision (LP pivots, containment
//! checks, active-constraint detection) is a [`Rational`]: an arbitrary
//! precision fraction, always normalized with a positive denominator. No
//! floating point is used anywhere in the decision path.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Arbitrary-precision rational number, normalized, denominator > 0.
pub type Rational = BigRational;

/// Shorthand for a small integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse a rational from `"a/b"` or `"a"`. Decimal and scientific notation
/// are rejected: exactness is part of the input contract.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty rational literal".to_string());
    }
    if t.contains(['.', 'e', 'E']) {
        return Err(format!(
            "rational literal {t:?} uses decimal or scientific notation; write an exact fraction like \"3/4\""
        ));
    }
    match t.split('/').collect::<Vec<_>>()[..] {
        [n] => n
            .parse::<BigInt>()
            .map(Rational::from_integer)
            .map_err(|_| format!("invalid integer literal {n:?}")),
        [n, d] => {
            let num = n
                .parse::<BigInt>()
                .map_err(|_| format!("invalid numerator {n:?}"))?;
            let den = d
                .parse::<BigInt>()
                .map_err(|_| format!("invalid denominator {d:?}"))?;
            if den.is_zero() {
                return Err(format!("zero denominator in {t:?}"));
            }
            Ok(Rational::new(num, den))
        }
        _ => Err(format!("invalid rational literal {t:?}")),
    }
}

/// Render a rational as `"a/b"`, or `"a"` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Fixed-point decimal rendering with exact round-half-even at `digits`
/// fractional digits, trailing zeros trimmed. Used only for SVG coordinate
/// output, never for decisions; determinism is the point.
pub fn format_decimal(x: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = x * Rational::from_integer(scale.clone());
    let floor = scaled.floor();
    let frac = &scaled - &floor;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut units = floor.to_integer();
    if frac > half || (frac == half && (&units % 2u32) != BigInt::zero()) {
        units += 1;
    }
    let negative = units.is_negative();
    let mag = units.magnitude().to_string();
    let mag = if mag.len() <= digits as usize {
        format!("{}{}", "0".repeat(digits as usize + 1 - mag.len()), mag)
    } else {
        mag
    };
    let (int_part, frac_part) = mag.split_at(mag.len() - digits as usize);
    let frac_part = frac_part.trim_end_matches('0');
    let mut out = String::new();
    if negative && (int_part.trim_start_matches('0') != "" || !frac_part.is_empty()) {
        out.push('-');
    }
    out.push_str(if int_part.is_empty() { "0" } else { int_part });
    if !frac_part.is_empty() {
        out.push('.');
        out.push_str(frac_part);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7));
        assert_eq!(parse_rational(" 10/-4 ").unwrap(), ratio(-5, 2));
    }

    #[test]
    fn rejects_decimals() {
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn normalizes_sign() {
        let x = parse_rational("2/-6").unwrap();
        assert_eq!(format_rational(&x), "-1/3");
    }

    #[test]
    fn decimal_formatting_is_exact_and_trimmed() {
        assert_eq!(format_decimal(&ratio(1, 2), 3), "0.5");
        assert_eq!(format_decimal(&ratio(1, 3), 3), "0.333");
        assert_eq!(format_decimal(&ratio(2, 3), 3), "0.667");
        assert_eq!(format_decimal(&rat(600), 3), "600");
        assert_eq!(format_decimal(&ratio(-1, 8), 3), "-0.125");
        // round-half-even at the boundary
        assert_eq!(format_decimal(&ratio(1, 16), 3), "0.062");
        assert_eq!(format_decimal(&ratio(3, 16), 3), "0.188");
    }
}
