use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use super::value::{QLinearValue, UNIT};
use crate::error::{Error, Result};

/// One declared basis symbol with its decimal approximation.
///
/// The approximation is trusted to be correct to its last printed digit.
/// `precision_digits` is the number of fractional digits used for the
/// first comparison attempt; comparisons widen from there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolEntry {
    pub symbol: String,
    pub approx: String,
    pub precision_digits: u32,
}

impl SymbolEntry {
    pub fn new(
        symbol: impl Into<String>,
        approx: impl Into<String>,
        precision_digits: u32,
    ) -> Self {
        Self {
            symbol: symbol.into(),
            approx: approx.into(),
            precision_digits,
        }
    }
}

/// Closed interval with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(x: BigRational) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    fn scaled(&self, c: &BigRational) -> Self {
        if c.is_negative() {
            Self {
                lo: &self.hi * c,
                hi: &self.lo * c,
            }
        } else {
            Self {
                lo: &self.lo * c,
                hi: &self.hi * c,
            }
        }
    }

    fn add_assign(&mut self, other: &Interval) {
        self.lo += &other.lo;
        self.hi += &other.hi;
    }

    pub fn midpoint_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        ((&self.lo + &self.hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

/// Decimal approximation split into an integer mantissa and a count of
/// fractional digits: `mantissa / 10^frac_digits`.
#[derive(Debug)]
struct Decimal {
    mantissa: BigInt,
    frac_digits: u32,
}

impl Decimal {
    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        let s = s.strip_prefix('+').unwrap_or(s);
        let (int, frac) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int.is_empty() && frac.is_empty() {
            return None;
        }
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{int}{frac}");
        let mantissa: BigInt = digits.parse().ok()?;
        Some(Self {
            mantissa,
            frac_digits: frac.len() as u32,
        })
    }

    /// Enclosure of the true value using `w` fractional digits.
    fn enclosure(&self, w: u32) -> Interval {
        let eff = w.min(self.frac_digits);
        let ten = BigInt::from(10);
        let scale: BigInt = Pow::pow(&ten, eff);
        let dropped: BigInt = Pow::pow(&ten, self.frac_digits - eff);
        let truncated = self.mantissa.div_floor(&dropped);
        let (lo, hi) = if eff == self.frac_digits {
            (&truncated - 1, &truncated + 1)
        } else {
            (&truncated - 1, &truncated + 2)
        };
        Interval {
            lo: BigRational::new(lo, scale.clone()),
            hi: BigRational::new(hi, scale),
        }
    }
}

#[derive(Debug)]
struct Symbol {
    entry: SymbolEntry,
    /// Enclosures at each widening level, finest last.
    levels: Vec<(u32, Interval)>,
}

#[derive(Debug)]
struct Inner {
    symbols: Vec<Symbol>,
    index: HashMap<String, usize>,
    max_precision_digits: Option<u32>,
}

/// Immutable set of basis symbols declared ℚ-linearly independent together
/// with `1`. Independence is trusted, not verified.
///
/// Cloning is cheap; clones share the same underlying table.
#[derive(Clone, Debug)]
pub struct BasisRegistry {
    inner: Arc<Inner>,
}

impl PartialEq for BasisRegistry {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.max_precision_digits == other.inner.max_precision_digits
                && self.entries().eq(other.entries()))
    }
}

impl Default for BasisRegistry {
    fn default() -> Self {
        Self::rational_only()
    }
}

impl BasisRegistry {
    pub fn new(entries: Vec<SymbolEntry>) -> Result<Self> {
        Self::with_max_precision(entries, None)
    }

    /// Registry with only the implicit unit symbol.
    pub fn rational_only() -> Self {
        Self::new(Vec::new()).expect("empty registry is valid")
    }

    /// Like [`BasisRegistry::new`], but caps comparison widening at
    /// `max_precision_digits` instead of four times each symbol's declared
    /// precision.
    pub fn with_max_precision(
        entries: Vec<SymbolEntry>,
        max_precision_digits: Option<u32>,
    ) -> Result<Self> {
        let mut index = HashMap::new();
        let mut symbols = Vec::with_capacity(entries.len());
        for entry in entries {
            let name = entry.symbol.as_str();
            if name == UNIT || !valid_identifier(name) {
                return Err(Error::InvalidSymbol(entry.symbol));
            }
            if index.contains_key(name) {
                return Err(Error::DuplicateSymbol(entry.symbol));
            }
            if entry.precision_digits == 0 {
                return Err(Error::InvalidPrecision(entry.symbol));
            }
            let decimal = match Decimal::parse(&entry.approx) {
                Some(d) if d.mantissa.is_positive() => d,
                _ => {
                    return Err(Error::NonPositiveApprox {
                        symbol: entry.symbol,
                        approx: entry.approx,
                    })
                }
            };
            let start = entry.precision_digits;
            let cap = max_precision_digits
                .unwrap_or_else(|| start.saturating_mul(4))
                .max(start);
            let mut levels = Vec::new();
            let mut w = start;
            loop {
                levels.push((w, decimal.enclosure(w)));
                if w >= cap {
                    break;
                }
                w = w.saturating_mul(2).min(cap);
            }
            index.insert(entry.symbol.clone(), symbols.len());
            symbols.push(Symbol { entry, levels });
        }
        Ok(Self {
            inner: Arc::new(Inner {
                symbols,
                index,
                max_precision_digits,
            }),
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = &SymbolEntry> {
        self.inner.symbols.iter().map(|s| &s.entry)
    }

    pub fn max_precision_digits(&self) -> Option<u32> {
        self.inner.max_precision_digits
    }

    pub fn contains(&self, symbol: &str) -> bool {
        symbol == UNIT || self.inner.index.contains_key(symbol)
    }

    /// Fails with `UnknownSymbol` if `x` mentions an undeclared symbol.
    pub fn check(&self, x: &QLinearValue) -> Result<()> {
        match x.support().find(|s| !self.contains(s)) {
            Some(s) => Err(Error::UnknownSymbol(s.to_string())),
            None => Ok(()),
        }
    }

    fn symbol(&self, name: &str) -> Result<&Symbol> {
        self.inner
            .index
            .get(name)
            .map(|&i| &self.inner.symbols[i])
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// Interval evaluation of `x` at widening level `level` (0 is the declared
    /// precision). Levels past a symbol's last one reuse its finest enclosure.
    pub fn interval(&self, x: &QLinearValue, level: usize) -> Result<Interval> {
        let mut acc = Interval::point(BigRational::zero());
        for (s, c) in x.terms() {
            if s == UNIT {
                acc.add_assign(&Interval::point(c.clone()));
                continue;
            }
            let sym = self.symbol(s)?;
            let (_, enc) = &sym.levels[level.min(sym.levels.len() - 1)];
            acc.add_assign(&enc.scaled(c));
        }
        Ok(acc)
    }

    /// Sign of `x`. Exact for zero and for rational values; otherwise decided
    /// by interval evaluation with widening precision.
    pub fn sign(&self, x: &QLinearValue) -> Result<Ordering> {
        if let Some(q) = x.as_rational() {
            return Ok(q.cmp(&BigRational::zero()));
        }
        self.check(x)?;
        let levels = x
            .support()
            .filter(|s| *s != UNIT)
            .map(|s| self.symbol(s).map(|sym| sym.levels.len()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap_or(1);
        for level in 0..levels {
            let iv = self.interval(x, level)?;
            if iv.lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if iv.hi.is_negative() {
                return Ok(Ordering::Less);
            }
        }
        let digits = x
            .support()
            .filter(|s| *s != UNIT)
            .filter_map(|s| self.symbol(s).ok())
            .filter_map(|sym| sym.levels.last().map(|(w, _)| *w))
            .max()
            .unwrap_or(0);
        Err(Error::IndistinguishableAtPrecision { digits })
    }

    /// Total order on values. `Equal` is decided only by exact coefficient
    /// equality, never numerically.
    pub fn compare(&self, x: &QLinearValue, y: &QLinearValue) -> Result<Ordering> {
        if x == y {
            self.check(x)?;
            return Ok(Ordering::Equal);
        }
        self.sign(&(x - y))
    }

    /// Sorts ascending under [`BasisRegistry::compare`], reporting the first
    /// comparison failure.
    pub fn sort(&self, values: &mut [QLinearValue]) -> Result<()> {
        let mut failure = None;
        values.sort_by(|x, y| match self.compare(x, y) {
            Ok(o) => o,
            Err(e) => {
                failure.get_or_insert(e);
                Ordering::Equal
            }
        });
        failure.map_or(Ok(()), Err)
    }

    pub fn is_positive(&self, x: &QLinearValue) -> Result<bool> {
        Ok(self.sign(x)? == Ordering::Greater)
    }

    /// Largest integer `n` with `n·unit ≤ x`, for positive `unit`.
    pub fn floor_div(&self, x: &QLinearValue, unit: &QLinearValue) -> Result<BigInt> {
        if unit.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let (Some(a), Some(b)) = (x.as_rational(), unit.as_rational()) {
            return Ok((a / b).floor().to_integer());
        }
        let ix = self.interval(x, 0)?;
        let iu = self.interval(unit, 0)?;
        let mut n = if iu.lo.is_positive() {
            (ix.lo.clone().max(BigRational::zero()) / &iu.hi)
                .floor()
                .to_integer()
        } else {
            BigInt::zero()
        };
        let one = BigInt::one();
        loop {
            let next = unit.scale(&BigRational::from_integer(&n + &one));
            if self.compare(&next, x)? == Ordering::Greater {
                break;
            }
            n += &one;
        }
        loop {
            let cur = unit.scale(&BigRational::from_integer(n.clone()));
            if self.compare(&cur, x)? != Ordering::Greater {
                break;
            }
            n -= &one;
        }
        Ok(n)
    }
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> BasisRegistry {
        BasisRegistry::new(vec![SymbolEntry::new("s", "1.4142135623730951", 15)]).unwrap()
    }

    #[test]
    fn compare_examples() {
        let reg = sqrt2();
        let one = QLinearValue::from_integer(1);
        let s = QLinearValue::symbol("s");
        assert_eq!(reg.compare(&one, &one), Ok(Ordering::Equal));
        assert_eq!(reg.compare(&one, &s), Ok(Ordering::Less));
        assert_eq!(
            reg.compare(&s.scale_int(3), &QLinearValue::from_integer(4)),
            Ok(Ordering::Greater)
        );
    }

    #[test]
    fn rejects_bad_entries() {
        let dup = vec![
            SymbolEntry::new("s", "1.4", 2),
            SymbolEntry::new("s", "1.7", 2),
        ];
        assert_eq!(
            BasisRegistry::new(dup).unwrap_err().name(),
            "DuplicateSymbol"
        );
        for bad in ["0", "0.000", "-1.5", "abc", "", "1e3"] {
            let err = BasisRegistry::new(vec![SymbolEntry::new("s", bad, 3)]).unwrap_err();
            assert_eq!(err.name(), "NonPositiveApprox", "{bad}");
        }
        let err = BasisRegistry::new(vec![SymbolEntry::new("1", "2.0", 3)]).unwrap_err();
        assert_eq!(err.name(), "InvalidSymbol");
        let err = BasisRegistry::new(vec![SymbolEntry::new("s", "2.0", 0)]).unwrap_err();
        assert_eq!(err.name(), "InvalidPrecision");
    }

    #[test]
    fn unknown_symbol_is_reported() {
        let reg = sqrt2();
        let err = reg
            .compare(&QLinearValue::symbol("t"), &QLinearValue::from_integer(1))
            .unwrap_err();
        assert_eq!(err, Error::UnknownSymbol("t".into()));
    }

    #[test]
    fn coarse_approximation_is_indistinguishable() {
        // s ≈ 1.4 known to one digit cannot separate 10·s from 14.
        let reg = BasisRegistry::new(vec![SymbolEntry::new("s", "1.4", 1)]).unwrap();
        let err = reg
            .compare(
                &QLinearValue::symbol("s").scale_int(10),
                &QLinearValue::from_integer(14),
            )
            .unwrap_err();
        assert_eq!(err.name(), "IndistinguishableAtPrecision");
    }

    #[test]
    fn widening_resolves_close_values() {
        // 1000·s vs 1414: needs more than the 2 declared digits.
        let reg = BasisRegistry::new(vec![SymbolEntry::new("s", "1.41421356", 2)]).unwrap();
        let x = QLinearValue::symbol("s").scale_int(1000);
        assert_eq!(
            reg.compare(&x, &QLinearValue::from_integer(1414)),
            Ok(Ordering::Greater)
        );
    }

    #[test]
    fn max_precision_caps_widening() {
        let entries = vec![SymbolEntry::new("s", "1.41421356", 2)];
        let reg = BasisRegistry::with_max_precision(entries, Some(2)).unwrap();
        let x = QLinearValue::symbol("s").scale_int(1000);
        assert!(reg.compare(&x, &QLinearValue::from_integer(1414)).is_err());
    }

    #[test]
    fn enclosure_contains_approximation() {
        let d = Decimal::parse("3.14159").unwrap();
        let approx = BigRational::new(314159.into(), 100000.into());
        for w in 0..8 {
            let iv = d.enclosure(w);
            assert!(iv.lo < approx && approx < iv.hi, "w={w}");
        }
    }

    #[test]
    fn floor_div_irrational() {
        let reg = sqrt2();
        let s = QLinearValue::symbol("s");
        let ten = QLinearValue::from_integer(10);
        assert_eq!(reg.floor_div(&ten, &s).unwrap(), BigInt::from(7));
        assert_eq!(reg.floor_div(&s.scale_int(3), &s).unwrap(), BigInt::from(3));
        assert_eq!(
            reg.floor_div(&QLinearValue::ratio(1, 2), &s).unwrap(),
            BigInt::from(0)
        );
    }
}
