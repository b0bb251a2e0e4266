use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Symbol carrying the rational part of a value. It is implicitly part of
/// every registry and evaluates to exactly one.
pub const UNIT: &str = "1";

/// An exact element of the ℚ-span of `1` and the declared basis symbols.
///
/// Stored as a finitely supported map from symbol to nonzero rational
/// coefficient, so structural equality is exact equality of reals (given
/// the declared independence of the basis).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QLinearValue {
    coeffs: BTreeMap<String, BigRational>,
}

impl QLinearValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut v = Self::zero();
        v.add_term(UNIT, q);
        v
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Shorthand for the rational `num/den`.
    ///
    /// Panics if `den` is zero.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// The value `1·symbol`.
    pub fn symbol(symbol: &str) -> Self {
        Self::term(symbol, BigRational::one())
    }

    pub fn term(symbol: &str, coeff: BigRational) -> Self {
        let mut v = Self::zero();
        v.add_term(symbol, coeff);
        v
    }

    pub fn from_terms<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = (S, BigRational)>,
        S: AsRef<str>,
    {
        let mut v = Self::zero();
        for (s, c) in terms {
            v.add_term(s.as_ref(), c);
        }
        v
    }

    fn add_term(&mut self, symbol: &str, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.coeffs.get_mut(symbol) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.coeffs.remove(symbol);
                }
            }
            None => {
                self.coeffs.insert(symbol.to_string(), coeff);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `symbol` (zero when absent).
    pub fn coeff(&self, symbol: &str) -> BigRational {
        self.coeffs
            .get(symbol)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Nonzero terms in symbol order.
    pub fn terms(&self) -> impl Iterator<Item = (&str, &BigRational)> {
        self.coeffs.iter().map(|(s, c)| (s.as_str(), c))
    }

    pub fn support(&self) -> impl Iterator<Item = &str> {
        self.coeffs.keys().map(String::as_str)
    }

    /// The value as a rational, if it has no irrational part.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => self.coeffs.get(UNIT).cloned(),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(s, c)| (s.clone(), c * q))
                .collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&BigRational::from_integer(n.into()))
    }

    pub fn checked_div_rational(&self, q: &BigRational) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.scale(&q.recip()))
    }
}

impl Add for &QLinearValue {
    type Output = QLinearValue;

    fn add(self, rhs: &QLinearValue) -> QLinearValue {
        let mut out = self.clone();
        for (s, c) in &rhs.coeffs {
            out.add_term(s, c.clone());
        }
        out
    }
}

impl Add for QLinearValue {
    type Output = QLinearValue;

    fn add(self, rhs: QLinearValue) -> QLinearValue {
        &self + &rhs
    }
}

impl Sub for &QLinearValue {
    type Output = QLinearValue;

    fn sub(self, rhs: &QLinearValue) -> QLinearValue {
        let mut out = self.clone();
        for (s, c) in &rhs.coeffs {
            out.add_term(s, -c.clone());
        }
        out
    }
}

impl Sub for QLinearValue {
    type Output = QLinearValue;

    fn sub(self, rhs: QLinearValue) -> QLinearValue {
        &self - &rhs
    }
}

impl Neg for &QLinearValue {
    type Output = QLinearValue;

    fn neg(self) -> QLinearValue {
        QLinearValue {
            coeffs: self.coeffs.iter().map(|(s, c)| (s.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for QLinearValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.coeffs.iter().enumerate() {
            let abs = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if s == UNIT {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{s}")?;
            } else {
                write!(f, "{abs}*{s}")?;
            }
        }
        Ok(())
    }
}
