//! Prime action spectra and the decisions built on them.
//!
//! A closed contact 3-manifold is Besse iff its action spectrum has rank 1,
//! iff some τ > 0 is an integer multiple of every prime period. The
//! operations here apply that equivalence to a finite presentation of the
//! prime spectrum.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlinear::{self, BasisRegistry, QLinearValue};

/// Finite set of minimal periods of closed Reeb orbits, sorted ascending.
///
/// For non-Besse flows the set is read as a declared generating set of the
/// prime spectrum.
#[derive(Clone, Debug)]
pub struct PrimeSpectrum {
    elements: Vec<QLinearValue>,
    registry: BasisRegistry,
}

impl PartialEq for PrimeSpectrum {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl PrimeSpectrum {
    /// Validates positivity, drops exact duplicates and sorts.
    pub fn new(elements: Vec<QLinearValue>, registry: BasisRegistry) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut seen = HashSet::new();
        let mut unique = Vec::with_capacity(elements.len());
        for x in elements {
            if !registry.is_positive(&x)? {
                return Err(Error::NonPositiveInput(x.to_string()));
            }
            if seen.insert(x.clone()) {
                unique.push(x);
            }
        }
        registry.sort(&mut unique)?;
        Ok(Self {
            elements: unique,
            registry,
        })
    }

    pub fn rational(elements: &[BigRational]) -> Result<Self> {
        Self::new(
            elements
                .iter()
                .cloned()
                .map(QLinearValue::from_rational)
                .collect(),
            BasisRegistry::rational_only(),
        )
    }

    pub fn elements(&self) -> &[QLinearValue] {
        &self.elements
    }

    pub fn registry(&self) -> &BasisRegistry {
        &self.registry
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn max(&self) -> &QLinearValue {
        self.elements.last().expect("nonempty")
    }

    pub fn contains(&self, x: &QLinearValue) -> bool {
        self.elements.contains(x)
    }

    /// Rank of the ℤ-module generated by the elements. The full spectrum
    /// generates the same module.
    pub fn rank(&self) -> usize {
        qlinear::rank(&self.elements).expect("nonempty")
    }

    /// Ratios of every element against the smallest one, when all are
    /// rational multiples of it.
    fn ratios(&self) -> Option<(QLinearValue, Vec<BigRational>)> {
        let reference = self.elements[0].clone();
        let ratios = self
            .elements
            .iter()
            .map(|x| qlinear::rational_ratio(x, &reference).ok().flatten())
            .collect::<Option<Vec<_>>>()?;
        Some((reference, ratios))
    }

    /// Least τ > 0 that is a positive-integer multiple of every element.
    /// Absent when the rank is at least 2.
    pub fn common_period(&self) -> Option<QLinearValue> {
        let (reference, ratios) = self.ratios()?;
        let l = qlinear::rational_lcm(&ratios).ok()?;
        Some(reference.scale(&l))
    }

    /// Largest T with every element in {nT : n ∈ ℕ}. Absent when the rank
    /// is at least 2.
    pub fn rank_one_witness(&self) -> Option<QLinearValue> {
        let (reference, ratios) = self.ratios()?;
        let g = qlinear::rational_gcd(&ratios).ok()?;
        Some(reference.scale(&g))
    }

    pub fn besse_verdict(&self) -> BesseVerdict {
        if self.rank() == 1 {
            let period = self
                .common_period()
                .expect("rank 1 spectra have a common period");
            BesseVerdict::Besse { period }
        } else {
            BesseVerdict::NotBesse
        }
    }

    /// Zoll iff every closed orbit has the same minimal period.
    pub fn is_zoll(&self) -> bool {
        self.elements.len() == 1
    }

    /// All periods n·τ' ≤ `cutoff` with n ≥ 1 and τ' in the prime spectrum,
    /// deduplicated and sorted.
    pub fn enumerate_action_spectrum(&self, cutoff: &QLinearValue) -> Result<Vec<QLinearValue>> {
        if !self.registry.is_positive(cutoff)? {
            return Err(Error::NonPositiveInput(cutoff.to_string()));
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for tau in &self.elements {
            let n_max = self.registry.floor_div(cutoff, tau)?;
            let mut n = BigInt::one();
            while n <= n_max {
                let v = tau.scale(&BigRational::from_integer(n.clone()));
                if seen.insert(v.clone()) {
                    out.push(v);
                }
                n += 1;
            }
        }
        self.registry.sort(&mut out)?;
        Ok(out)
    }
}

/// Outcome of the Besse decision; a Besse verdict carries the minimal
/// common period as witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BesseVerdict {
    Besse { period: QLinearValue },
    NotBesse,
}

impl BesseVerdict {
    pub fn is_besse(&self) -> bool {
        matches!(self, BesseVerdict::Besse { .. })
    }

    pub fn witness(&self) -> Option<&QLinearValue> {
        match self {
            BesseVerdict::Besse { period } => Some(period),
            BesseVerdict::NotBesse => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricClass {
    General,
    Reversible,
    Riemannian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Surface {
    #[serde(rename = "S2")]
    Sphere,
    #[serde(rename = "RP2")]
    ProjectivePlane,
}

/// What the length-spectrum rank licenses about a closed connected Finsler
/// surface. Rank ≥ 2 licenses nothing beyond "not a Besse S² / ℝP²".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinslerConclusion {
    pub surface: Option<Surface>,
    pub besse: bool,
    pub zoll: bool,
    pub constant_curvature: bool,
}

pub fn finsler_conclusion(
    orientable: bool,
    metric: MetricClass,
    rank: usize,
) -> Result<FinslerConclusion> {
    if rank == 0 {
        return Err(Error::PreconditionViolated(
            "length spectrum rank must be at least 1".into(),
        ));
    }
    if rank >= 2 {
        return Ok(FinslerConclusion {
            surface: None,
            besse: false,
            zoll: false,
            constant_curvature: false,
        });
    }
    let conclusion = if orientable {
        FinslerConclusion {
            surface: Some(Surface::Sphere),
            besse: true,
            // Riemannian metrics are reversible.
            zoll: metric != MetricClass::General,
            constant_curvature: false,
        }
    } else {
        let riemannian = metric == MetricClass::Riemannian;
        FinslerConclusion {
            surface: Some(Surface::ProjectivePlane),
            besse: true,
            zoll: riemannian,
            constant_curvature: riemannian,
        }
    };
    Ok(conclusion)
}

/// Interval midpoint of `x`, for diagnostics only.
pub fn approx_f64(registry: &BasisRegistry, x: &QLinearValue) -> Option<f64> {
    match x.as_rational() {
        Some(q) => q.to_f64(),
        None => registry
            .interval(x, usize::MAX)
            .ok()
            .map(|iv| iv.midpoint_f64()),
    }
}

/// Checks `xs` is strictly increasing under `registry`.
pub fn is_strictly_increasing(registry: &BasisRegistry, xs: &[QLinearValue]) -> Result<bool> {
    for w in xs.windows(2) {
        if registry.compare(&w[0], &w[1])? != Ordering::Less {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinear::SymbolEntry;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn rat(xs: &[(i64, i64)]) -> PrimeSpectrum {
        PrimeSpectrum::rational(&xs.iter().map(|&(n, d)| q(n, d)).collect::<Vec<_>>()).unwrap()
    }

    fn ab_registry() -> BasisRegistry {
        BasisRegistry::new(vec![
            SymbolEntry::new("a", "1.2247448713915890", 15),
            SymbolEntry::new("b", "1.7320508075688772", 15),
        ])
        .unwrap()
    }

    fn independent() -> PrimeSpectrum {
        PrimeSpectrum::new(
            vec![QLinearValue::symbol("a"), QLinearValue::symbol("b")],
            ab_registry(),
        )
        .unwrap()
    }

    fn sqrt2() -> BasisRegistry {
        BasisRegistry::new(vec![SymbolEntry::new("s", "1.4142135623730951", 15)]).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert_eq!(PrimeSpectrum::rational(&[]).unwrap_err(), Error::EmptyInput);
        assert_eq!(
            PrimeSpectrum::rational(&[q(1, 1), q(-1, 2)])
                .unwrap_err()
                .name(),
            "NonPositiveInput"
        );
        let sp = rat(&[(2, 1), (1, 1), (2, 1)]);
        assert_eq!(
            sp.elements(),
            &[QLinearValue::from_integer(1), QLinearValue::from_integer(2)]
        );
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rat(&[(1, 1), (2, 1)]).rank(), 1);
        assert_eq!(independent().rank(), 2);
        assert_eq!(rat(&[(1, 1)]).rank(), 1);
    }

    #[test]
    fn common_period_examples() {
        assert_eq!(
            rat(&[(1, 1), (1, 2), (1, 3)]).common_period(),
            Some(QLinearValue::from_integer(1))
        );
        assert_eq!(
            rat(&[(2, 3), (1, 2)]).common_period(),
            Some(QLinearValue::from_integer(2))
        );
        assert_eq!(independent().common_period(), None);
    }

    #[test]
    fn witness_examples() {
        assert_eq!(
            rat(&[(1, 1), (1, 2)]).rank_one_witness(),
            Some(QLinearValue::ratio(1, 2))
        );
        assert_eq!(
            rat(&[(2, 3), (1, 2)]).rank_one_witness(),
            Some(QLinearValue::ratio(1, 6))
        );
        assert_eq!(independent().rank_one_witness(), None);
    }

    #[test]
    fn symbolic_rank_one() {
        // {2s, 3s} is rank 1 with common period 6s.
        let sp = PrimeSpectrum::new(
            vec![
                QLinearValue::symbol("s").scale_int(2),
                QLinearValue::symbol("s").scale_int(3),
            ],
            sqrt2(),
        )
        .unwrap();
        assert_eq!(
            sp.besse_verdict(),
            BesseVerdict::Besse {
                period: QLinearValue::symbol("s").scale_int(6)
            }
        );
        assert_eq!(sp.rank_one_witness(), Some(QLinearValue::symbol("s")));
    }

    #[test]
    fn verdict_examples() {
        assert_eq!(
            rat(&[(1, 1), (2, 1)]).besse_verdict(),
            BesseVerdict::Besse {
                period: QLinearValue::from_integer(2)
            }
        );
        assert_eq!(independent().besse_verdict(), BesseVerdict::NotBesse);
        let zoll = rat(&[(3, 1)]);
        assert_eq!(
            zoll.besse_verdict().witness(),
            Some(&QLinearValue::from_integer(3))
        );
    }

    #[test]
    fn zoll_examples() {
        assert!(rat(&[(1, 1)]).is_zoll());
        assert!(!rat(&[(1, 1), (2, 1)]).is_zoll());
        assert!(rat(&[(2, 3)]).is_zoll());
    }

    #[test]
    fn enumerate_examples() {
        let ints = |v: &[i64]| {
            v.iter()
                .map(|&n| QLinearValue::from_integer(n))
                .collect::<Vec<_>>()
        };
        assert_eq!(
            rat(&[(1, 1)])
                .enumerate_action_spectrum(&QLinearValue::from_integer(3))
                .unwrap(),
            ints(&[1, 2, 3])
        );
        assert_eq!(
            rat(&[(1, 1), (2, 1)])
                .enumerate_action_spectrum(&QLinearValue::from_integer(4))
                .unwrap(),
            ints(&[1, 2, 3, 4])
        );
        let s = QLinearValue::symbol("s");
        let sp =
            PrimeSpectrum::new(vec![QLinearValue::from_integer(1), s.clone()], sqrt2()).unwrap();
        assert_eq!(
            sp.enumerate_action_spectrum(&QLinearValue::from_integer(3))
                .unwrap(),
            vec![
                QLinearValue::from_integer(1),
                s.clone(),
                QLinearValue::from_integer(2),
                s.scale_int(2),
                QLinearValue::from_integer(3),
            ]
        );
        assert_eq!(
            sp.enumerate_action_spectrum(&QLinearValue::zero())
                .unwrap_err()
                .name(),
            "NonPositiveInput"
        );
    }

    #[test]
    fn finsler_table() {
        let c = finsler_conclusion(true, MetricClass::General, 1).unwrap();
        assert_eq!(
            (c.surface, c.besse, c.zoll),
            (Some(Surface::Sphere), true, false)
        );
        let c = finsler_conclusion(true, MetricClass::Reversible, 1).unwrap();
        assert_eq!((c.surface, c.zoll), (Some(Surface::Sphere), true));
        let c = finsler_conclusion(false, MetricClass::Riemannian, 1).unwrap();
        assert_eq!(c.surface, Some(Surface::ProjectivePlane));
        assert!(c.constant_curvature && c.zoll && c.besse);
        let c = finsler_conclusion(false, MetricClass::Reversible, 1).unwrap();
        assert!(c.besse && !c.zoll && !c.constant_curvature);
        let c = finsler_conclusion(true, MetricClass::General, 2).unwrap();
        assert_eq!(c.surface, None);
        assert!(!c.besse);
        assert!(finsler_conclusion(true, MetricClass::General, 0).is_err());
    }

    fn rational_spectrum() -> impl Strategy<Value = PrimeSpectrum> {
        prop::collection::vec((1i64..=12, 1i64..=6), 1..5).prop_map(|xs| rat(&xs))
    }

    proptest! {
        #[test]
        fn three_way_equivalence(sp in rational_spectrum(), add_b in any::<bool>()) {
            let sp = if add_b {
                let mut xs = sp.elements().to_vec();
                xs.push(QLinearValue::symbol("b"));
                PrimeSpectrum::new(xs, ab_registry()).unwrap()
            } else { sp };
            let rank_one = sp.rank() == 1;
            prop_assert_eq!(sp.besse_verdict().is_besse(), rank_one);
            prop_assert_eq!(sp.common_period().is_some(), rank_one);
            prop_assert_eq!(sp.rank_one_witness().is_some(), rank_one);
            if sp.is_zoll() {
                prop_assert!(sp.besse_verdict().is_besse());
            }
        }

        #[test]
        fn enumeration_is_complete_and_divisible(sp in rational_spectrum(), cutoff in 1i64..=20) {
            let c = QLinearValue::from_integer(cutoff);
            let got = sp.enumerate_action_spectrum(&c).unwrap();
            prop_assert!(is_strictly_increasing(sp.registry(), &got).unwrap());
            // Brute force over rationals.
            let mut expect: Vec<BigRational> = Vec::new();
            for tau in sp.elements() {
                let t = tau.as_rational().unwrap();
                let mut n = 1i64;
                while &t * BigRational::from_integer(n.into()) <= BigRational::from_integer(cutoff.into()) {
                    expect.push(&t * BigRational::from_integer(n.into()));
                    n += 1;
                }
            }
            expect.sort();
            expect.dedup();
            let got_q: Vec<_> = got.iter().map(|v| v.as_rational().unwrap()).collect();
            prop_assert_eq!(&got_q, &expect);
            let t = sp.rank_one_witness().unwrap().as_rational().unwrap();
            for v in &got_q {
                prop_assert!((v / &t).is_integer());
            }
        }

        #[test]
        fn common_period_is_lcm(sp in rational_spectrum()) {
            let qs: Vec<_> = sp.elements().iter().map(|v| v.as_rational().unwrap()).collect();
            prop_assert_eq!(
                sp.common_period().unwrap(),
                QLinearValue::from_rational(qlinear::rational_lcm(&qs).unwrap())
            );
        }

        #[test]
        fn compare_is_total_order(
            xs in prop::collection::vec((-8i64..=8, -8i64..=8), 1..8)
        ) {
            let reg = sqrt2();
            let mut vals: Vec<QLinearValue> = xs.iter()
                .map(|&(m, n)| &QLinearValue::from_integer(m) + &QLinearValue::symbol("s").scale_int(n))
                .collect();
            let unique: HashSet<_> = vals.iter().cloned().collect();
            vals = unique.into_iter().collect();
            reg.sort(&mut vals).unwrap();
            for i in 0..vals.len() {
                for j in 0..vals.len() {
                    let o = reg.compare(&vals[i], &vals[j]).unwrap();
                    prop_assert_eq!(o, i.cmp(&j));
                }
            }
        }
    }
}
