//! Exact arithmetic on reals presented as rational combinations of declared,
//! ℚ-linearly independent basis symbols.
//!
//! A [`QLinearValue`] is a coefficient map; a [`BasisRegistry`] supplies the
//! decimal approximations needed to order values. Equality is always exact.
//! Ordering of values with distinct coefficients falls back to interval
//! evaluation with widening precision and fails loudly when the declared
//! approximations are too coarse.

mod rank;
mod registry;
mod value;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use rank::integer_rank;
pub use registry::{BasisRegistry, Interval, SymbolEntry};
pub use value::{QLinearValue, UNIT};

use crate::error::{Error, Result};

/// Rank of the ℤ-submodule of ℝ generated by `values`.
///
/// A finitely generated subgroup of ℝ is torsion-free, so its rank is the
/// dimension of the ℚ-span of the coefficient vectors.
pub fn rank(values: &[QLinearValue]) -> Result<usize> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let symbols: BTreeSet<&str> = values.iter().flat_map(|v| v.support()).collect();
    let rows: Vec<Vec<BigInt>> = values
        .iter()
        .map(|v| {
            let row: Vec<BigRational> = symbols.iter().map(|s| v.coeff(s)).collect();
            clear_denominators(&row)
        })
        .collect();
    Ok(integer_rank(rows))
}

fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let den = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| q.numer() * (&den / q.denom())).collect()
}

/// Returns `q` with `x = q·y` when the coefficient vectors are proportional.
pub fn rational_ratio(x: &QLinearValue, y: &QLinearValue) -> Result<Option<BigRational>> {
    let (sym, cy) = y.terms().next().ok_or(Error::DivisionByZero)?;
    let q = x.coeff(sym) / cy;
    Ok((y.scale(&q) == *x).then_some(q))
}

fn check_positive(qs: &[BigRational]) -> Result<()> {
    if qs.is_empty() {
        return Err(Error::EmptyInput);
    }
    match qs.iter().find(|q| !q.is_positive()) {
        Some(q) => Err(Error::NonPositiveInput(q.to_string())),
        None => Ok(()),
    }
}

/// Largest `T` with every `q/T` a positive integer.
pub fn rational_gcd(qs: &[BigRational]) -> Result<BigRational> {
    check_positive(qs)?;
    let num = qs.iter().fold(BigInt::zero(), |acc, q| acc.gcd(q.numer()));
    let den = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    Ok(BigRational::new(num, den))
}

/// Smallest `T` with every `T/q` a positive integer.
pub fn rational_lcm(qs: &[BigRational]) -> Result<BigRational> {
    check_positive(qs)?;
    let num = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.numer()));
    let den = qs.iter().fold(BigInt::zero(), |acc, q| acc.gcd(q.denom()));
    Ok(BigRational::new(num, den))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` into a reduced rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let valid = |t: &str| {
        let digits = t.strip_prefix('-').unwrap_or(t);
        !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
    };
    if !valid(n) || !valid(d) || d.starts_with('-') {
        return None;
    }
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Canonical text form: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
