//! Probability distributions over a finite outcome set, as exact
//! rational vectors.

use crate::linalg::RationalVector;
use crate::rational::{parse_rational, Rational};
use num::{One, Signed};

/// True when `p` is entrywise nonnegative and sums to one.
pub fn is_distribution(p: &[Rational]) -> bool {
    !p.is_empty()
        && p.iter().all(|x| !x.is_negative())
        && p.iter().sum::<Rational>() == Rational::one()
}

/// Indices of the outcomes with positive probability.
pub fn support(p: &[Rational]) -> Vec<usize> {
    p.iter()
        .enumerate()
        .filter(|(_, x)| x.is_positive())
        .map(|(i, _)| i)
        .collect()
}

/// Number of outcomes with positive probability.
pub fn support_size(p: &[Rational]) -> usize {
    support(p).len()
}

pub fn uniform(n: usize) -> RationalVector {
    assert!(n > 0);
    vec![Rational::new(1.into(), n.into()); n]
}

/// Parse a comma-separated list of rationals as a distribution over `n`
/// outcomes. Rejects wrong arity, negative entries, and mass not summing
/// to one.
pub fn parse_distribution(text: &str, n: usize) -> Result<RationalVector, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != n {
        return Err(format!(
            "distribution has {} entries but the outcome set has {}",
            parts.len(),
            n
        ));
    }
    let mut p = Vec::with_capacity(n);
    for part in parts {
        let x = parse_rational(part)?;
        if x.is_negative() {
            return Err(format!("distribution entry {part:?} is negative"));
        }
        p.push(x);
    }
    if p.iter().sum::<Rational>() != Rational::one() {
        return Err("distribution entries must sum to 1".to_string());
    }
    Ok(p)
}
