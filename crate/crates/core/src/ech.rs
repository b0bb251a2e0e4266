//! Action-filtered ECH generators on the boundary of an ellipsoid.
//!
//! ∂E(a, b) has exactly two simple Reeb orbits when b/a is irrational, with
//! actions a and b, both elliptic. Orbit sets are then pairs of
//! multiplicities (m, n) with action m·a + n·b, and the spectral invariants
//! along the U-tower are the sorted values
//!
//! ```text
//! N_0 ≤ N_1 ≤ N_2 ≤ …   the multiset {m·a + n·b : m, n ≥ 0}.
//! ```
//!
//! The U map is modelled as the index shift k+1 → k. A collision
//! N_{k+1} = N_k is the action coincidence that detects the Besse property.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::qlinear::{BasisRegistry, Interval, QLinearValue};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitEntry {
    pub multiplicity: u64,
    pub action: QLinearValue,
    pub hyperbolic: bool,
}

/// Finite set of (multiplicity, simple orbit) pairs. Hyperbolic orbits
/// carry multiplicity 1; each simple orbit appears at most once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrbitSet {
    entries: Vec<OrbitEntry>,
}

impl OrbitSet {
    pub fn new(entries: Vec<OrbitEntry>, registry: &BasisRegistry) -> Result<Self> {
        for (i, e) in entries.iter().enumerate() {
            if e.multiplicity == 0 {
                return Err(Error::InvalidOrbitSet(format!(
                    "entry {i} has multiplicity 0"
                )));
            }
            if e.hyperbolic && e.multiplicity != 1 {
                return Err(Error::InvalidOrbitSet(format!(
                    "hyperbolic orbit {} has multiplicity {}",
                    e.action, e.multiplicity
                )));
            }
            if !registry.is_positive(&e.action)? {
                return Err(Error::InvalidOrbitSet(format!(
                    "action {} is not positive",
                    e.action
                )));
            }
            if entries[..i].iter().any(|o| o.action == e.action) {
                return Err(Error::InvalidOrbitSet(format!(
                    "orbit {} repeated",
                    e.action
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[OrbitEntry] {
        &self.entries
    }

    /// Σ m_i·A(γ_i).
    pub fn action(&self) -> QLinearValue {
        self.entries.iter().fold(QLinearValue::zero(), |acc, e| {
            &acc + &e
                .action
                .scale(&BigRational::from_integer(e.multiplicity.into()))
        })
    }
}

/// #{(m, n) ∈ ℕ² : m·a + n·b ≤ level}.
pub fn filtered_generator_count(
    a: &QLinearValue,
    b: &QLinearValue,
    level: &QLinearValue,
    registry: &BasisRegistry,
) -> Result<u64> {
    check_axes(a, b, registry)?;
    if registry.sign(level)? == Ordering::Less {
        return Ok(0);
    }
    let mut count = BigInt::zero();
    let mut rest = level.clone();
    while registry.sign(&rest)? != Ordering::Less {
        count += registry.floor_div(&rest, a)? + 1;
        rest = &rest - b;
    }
    Ok(count.to_u64().expect("count fits in u64"))
}

fn check_axes(a: &QLinearValue, b: &QLinearValue, registry: &BasisRegistry) -> Result<()> {
    for x in [a, b] {
        if !registry.is_positive(x)? {
            return Err(Error::NonPositiveInput(x.to_string()));
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
struct Candidate {
    m: u64,
    n: u64,
    value: QLinearValue,
    exact: Option<BigRational>,
    /// Enclosure at the declared precision, for symbolic values.
    enclosure: Option<Interval>,
}

impl Candidate {
    fn bounds(&self) -> (&BigRational, &BigRational) {
        match (&self.exact, &self.enclosure) {
            (Some(q), _) => (q, q),
            (None, Some(iv)) => (&iv.lo, &iv.hi),
            (None, None) => unreachable!("symbolic candidates carry an enclosure"),
        }
    }
}

/// The sequence N_k(a, b), extended on demand by a lattice walk driven by
/// an exact priority queue.
///
/// From each popped point (m, n) the walk pushes (m, n+1), and also
/// (m+1, 0) when n = 0, so every lattice point is reached exactly once and
/// the frontier holds one point per started row.
#[derive(Clone, Debug)]
pub struct EchSpectrum {
    a: QLinearValue,
    b: QLinearValue,
    registry: BasisRegistry,
    values: Vec<QLinearValue>,
    points: Vec<(u64, u64)>,
    heap: Vec<Candidate>,
}

impl EchSpectrum {
    pub fn new(a: QLinearValue, b: QLinearValue, registry: BasisRegistry) -> Result<Self> {
        check_axes(&a, &b, &registry)?;
        let origin = Candidate {
            m: 0,
            n: 0,
            value: QLinearValue::zero(),
            exact: Some(BigRational::zero()),
            enclosure: None,
        };
        Ok(Self {
            a,
            b,
            registry,
            values: Vec::new(),
            points: Vec::new(),
            heap: vec![origin],
        })
    }

    pub fn rational(a: BigRational, b: BigRational) -> Result<Self> {
        Self::new(
            QLinearValue::from_rational(a),
            QLinearValue::from_rational(b),
            BasisRegistry::rational_only(),
        )
    }

    pub fn a(&self) -> &QLinearValue {
        &self.a
    }

    pub fn b(&self) -> &QLinearValue {
        &self.b
    }

    pub fn registry(&self) -> &BasisRegistry {
        &self.registry
    }

    /// Values certified so far.
    pub fn computed(&self) -> &[QLinearValue] {
        &self.values
    }

    /// Extends the certified prefix to include N_k.
    pub fn extend_to(&mut self, k: usize) -> Result<()> {
        while self.values.len() <= k {
            let top = self.pop()?;
            if top.n == 0 {
                self.push(top.m + 1, 0)?;
            }
            self.push(top.m, top.n + 1)?;
            self.values.push(top.value);
            self.points.push((top.m, top.n));
        }
        Ok(())
    }

    pub fn value(&mut self, k: usize) -> Result<&QLinearValue> {
        self.extend_to(k)?;
        Ok(&self.values[k])
    }

    /// [N_0, …, N_{k_max}].
    pub fn values(&mut self, k_max: usize) -> Result<&[QLinearValue]> {
        self.extend_to(k_max)?;
        Ok(&self.values[..=k_max])
    }

    /// The orbit set (m, n) realizing N_k in this enumeration.
    pub fn lattice_point(&mut self, k: usize) -> Result<(u64, u64)> {
        self.extend_to(k)?;
        Ok(self.points[k])
    }

    fn candidate(&self, m: u64, n: u64) -> Result<Candidate> {
        let value = &self.a.scale(&BigRational::from_integer(m.into()))
            + &self.b.scale(&BigRational::from_integer(n.into()));
        let exact = value.as_rational();
        let enclosure = match exact {
            Some(_) => None,
            None => Some(self.registry.interval(&value, 0)?),
        };
        Ok(Candidate {
            m,
            n,
            value,
            exact,
            enclosure,
        })
    }

    fn less(&self, x: &Candidate, y: &Candidate) -> Result<bool> {
        let by_value = match (&x.exact, &y.exact) {
            (Some(p), Some(q)) => p.cmp(q),
            _ => {
                let (x_lo, x_hi) = x.bounds();
                let (y_lo, y_hi) = y.bounds();
                if x_hi < y_lo {
                    Ordering::Less
                } else if y_hi < x_lo {
                    Ordering::Greater
                } else {
                    self.registry.compare(&x.value, &y.value)?
                }
            }
        };
        Ok(by_value.then((x.n, x.m).cmp(&(y.n, y.m))) == Ordering::Less)
    }

    fn push(&mut self, m: u64, n: u64) -> Result<()> {
        let c = self.candidate(m, n)?;
        self.heap.push(c);
        let mut i = self.heap.len() - 1;
        while i > 0 {
            let parent = (i - 1) / 2;
            if !self.less(&self.heap[i], &self.heap[parent])? {
                break;
            }
            self.heap.swap(i, parent);
            i = parent;
        }
        Ok(())
    }

    fn pop(&mut self) -> Result<Candidate> {
        let last = self.heap.len() - 1;
        self.heap.swap(0, last);
        let top = self.heap.pop().expect("frontier is never empty");
        let len = self.heap.len();
        let mut i = 0;
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut best = i;
            if l < len && self.less(&self.heap[l], &self.heap[best])? {
                best = l;
            }
            if r < len && self.less(&self.heap[r], &self.heap[best])? {
                best = r;
            }
            if best == i {
                break;
            }
            self.heap.swap(i, best);
            i = best;
        }
        Ok(top)
    }
}

pub fn ech_spectrum_values(
    a: &QLinearValue,
    b: &QLinearValue,
    k_max: usize,
    registry: &BasisRegistry,
) -> Result<Vec<QLinearValue>> {
    let mut sp = EchSpectrum::new(a.clone(), b.clone(), registry.clone())?;
    Ok(sp.values(k_max)?.to_vec())
}

/// Smallest k < k_max with N_{k+1} = N_k.
pub fn first_gap_collision(
    a: &QLinearValue,
    b: &QLinearValue,
    k_max: usize,
    registry: &BasisRegistry,
) -> Result<Option<usize>> {
    let values = ech_spectrum_values(a, b, k_max, registry)?;
    Ok(values.windows(2).position(|w| w[0] == w[1]))
}

/// N_k/k at one checkpoint, with an enclosure of the ratio.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfilePoint {
    pub k: usize,
    pub value: QLinearValue,
    pub ratio: Interval,
}

/// N_k/k at each checkpoint. Checkpoints must be strictly increasing and
/// at least 1.
pub fn sublinearity_profile(
    a: &QLinearValue,
    b: &QLinearValue,
    checkpoints: &[usize],
    registry: &BasisRegistry,
) -> Result<Vec<ProfilePoint>> {
    if checkpoints.first() == Some(&0) || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::PreconditionViolated(
            "checkpoints must be strictly increasing and at least 1".into(),
        ));
    }
    let mut sp = EchSpectrum::new(a.clone(), b.clone(), registry.clone())?;
    checkpoints
        .iter()
        .map(|&k| {
            let value = sp.value(k)?.clone();
            let iv = registry.interval(&value, usize::MAX)?;
            let kq = BigRational::from_integer(k.into());
            Ok(ProfilePoint {
                k,
                value,
                ratio: Interval {
                    lo: iv.lo / &kq,
                    hi: iv.hi / kq,
                },
            })
        })
        .collect()
}

/// True when each enclosure lies strictly below the previous one.
pub fn certainly_decreasing(profile: &[ProfilePoint]) -> bool {
    profile.windows(2).all(|w| w[1].ratio.hi < w[0].ratio.lo)
}

/// Enclosure of N_k² / (2·a·b·k). The lattice count below L is about
/// L²/(2ab), so this tends to 1.
pub fn volume_asymptotic_ratio(
    a: &QLinearValue,
    b: &QLinearValue,
    k: usize,
    registry: &BasisRegistry,
) -> Result<Interval> {
    if k == 0 {
        return Err(Error::PreconditionViolated("k must be at least 1".into()));
    }
    let mut sp = EchSpectrum::new(a.clone(), b.clone(), registry.clone())?;
    let nk = sp.value(k)?.clone();
    let fine = usize::MAX;
    let n = registry.interval(&nk, fine)?;
    let ia = registry.interval(a, fine)?;
    let ib = registry.interval(b, fine)?;
    if !ia.lo.is_positive() || !ib.lo.is_positive() {
        return Err(Error::IndistinguishableAtPrecision { digits: 0 });
    }
    let n_lo = n.lo.max(BigRational::zero());
    let two_k = BigRational::from_integer((2 * k).into());
    Ok(Interval {
        lo: &n_lo * &n_lo / (&ia.hi * &ib.hi * &two_k),
        hi: &n.hi * &n.hi / (&ia.lo * &ib.lo * &two_k),
    })
}
