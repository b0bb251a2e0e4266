//! Presentations of Besse Reeb flows and of ellipsoid boundaries.
//!
//! A Besse flow on a closed 3-manifold is presented by its minimal common
//! period τ and the Seifert invariants of the fibration by its orbits. The
//! exceptional fiber of multiplicity α is a closed orbit of minimal period
//! τ/α, and regular fibers have minimal period τ.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlinear::{self, BasisRegistry, QLinearValue};
use crate::seifert::SeifertInvariants;
use crate::spectra::PrimeSpectrum;

/// Label used for the 3-sphere, the boundary of every ellipsoid.
pub const SPHERE_LABEL: &str = "S3";

#[derive(Clone, Debug, PartialEq)]
pub struct BesseModel {
    manifold: String,
    tau: QLinearValue,
    seifert: SeifertInvariants,
    registry: BasisRegistry,
}

impl BesseModel {
    /// `manifold` is the caller's assertion of the underlying 3-manifold;
    /// it is not checked against the Seifert data.
    pub fn new(
        manifold: impl Into<String>,
        tau: QLinearValue,
        seifert: SeifertInvariants,
        registry: BasisRegistry,
    ) -> Result<Self> {
        let manifold = manifold.into();
        if manifold.trim().is_empty() {
            return Err(Error::InvalidModel("empty manifold label".into()));
        }
        if !registry.is_positive(&tau)? {
            return Err(Error::InvalidModel(format!("period {tau} is not positive")));
        }
        if !seifert.besse_realizable() {
            return Err(Error::InvalidModel(format!(
                "Euler number {} is not positive",
                seifert.euler_number()
            )));
        }
        Ok(Self {
            manifold,
            tau,
            seifert,
            registry,
        })
    }

    pub fn manifold(&self) -> &str {
        &self.manifold
    }

    pub fn tau(&self) -> &QLinearValue {
        &self.tau
    }

    pub fn seifert(&self) -> &SeifertInvariants {
        &self.seifert
    }

    pub fn registry(&self) -> &BasisRegistry {
        &self.registry
    }

    /// {τ} ∪ {τ/α : α ≥ 2 an exceptional multiplicity}.
    pub fn prime_spectrum(&self) -> PrimeSpectrum {
        let mut elements = vec![self.tau.clone()];
        for alpha in self.seifert.exceptional_multiplicities() {
            elements.push(
                self.tau
                    .scale(&BigRational::new(BigInt::one(), alpha.into())),
            );
        }
        PrimeSpectrum::new(elements, self.registry.clone()).expect("τ/α is positive whenever τ is")
    }

    pub fn multiplicity_strata(&self) -> BTreeMap<i64, Stratum> {
        let mut strata = BTreeMap::from([(1, Stratum::Regular)]);
        for (alpha, count) in crate::seifert::multiplicity_counts(&self.seifert) {
            strata.insert(alpha, Stratum::Exceptional(count));
        }
        strata
    }
}

/// Fixed-point stratum of the flow at time τ/α.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Stratum {
    Regular,
    Exceptional(usize),
}

/// Two Besse forms on the same manifold are pulled back to one another by
/// a diffeomorphism iff their prime spectra agree.
pub fn besse_forms_equivalent(m1: &BesseModel, m2: &BesseModel) -> Result<bool> {
    if m1.manifold != m2.manifold {
        return Err(Error::ManifoldMismatch(
            m1.manifold.clone(),
            m2.manifold.clone(),
        ));
    }
    let s1: HashSet<_> = m1.prime_spectrum().elements().iter().cloned().collect();
    let s2: HashSet<_> = m2.prime_spectrum().elements().iter().cloned().collect();
    Ok(s1 == s2)
}

/// Recovers τ and the set of exceptional multiplicities from a prime
/// spectrum of the shape {τ, τ/α_1, …, τ/α_s}. Repeated multiplicities are
/// invisible to the spectrum and collapse.
pub fn reconstruct_multiplicities(sp: &PrimeSpectrum) -> Option<(QLinearValue, BTreeSet<u64>)> {
    if sp.rank() != 1 {
        return None;
    }
    let tau = sp.max().clone();
    let mut alphas = BTreeSet::new();
    for x in sp.elements() {
        if *x == tau {
            continue;
        }
        let r = qlinear::rational_ratio(&tau, x).ok().flatten()?;
        if !r.is_integer() {
            return None;
        }
        alphas.insert(r.to_integer().to_u64()?);
    }
    Some((tau, alphas))
}

/// Boundary of the ellipsoid E(a, b), stored with a ≤ b.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipsoidModel {
    a: QLinearValue,
    b: QLinearValue,
    registry: BasisRegistry,
}

impl EllipsoidModel {
    pub fn new(a: QLinearValue, b: QLinearValue, registry: BasisRegistry) -> Result<Self> {
        for x in [&a, &b] {
            if !registry.is_positive(x)? {
                return Err(Error::NonPositiveInput(x.to_string()));
            }
        }
        let (a, b) = if registry.compare(&a, &b)?.is_gt() {
            (b, a)
        } else {
            (a, b)
        };
        Ok(Self { a, b, registry })
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

    /// b/a when rational.
    pub fn ratio(&self) -> Option<BigRational> {
        qlinear::rational_ratio(&self.b, &self.a).expect("a is nonzero")
    }

    /// The two axis orbits have minimal periods a and b; when b/a is
    /// rational every other orbit has minimal period lcm(a, b).
    pub fn prime_spectrum(&self) -> PrimeSpectrum {
        let mut elements = vec![self.a.clone(), self.b.clone()];
        if let Some(r) = self.ratio() {
            let l = qlinear::rational_lcm(&[BigRational::one(), r]).expect("positive ratio");
            elements.push(self.a.scale(&l));
        }
        PrimeSpectrum::new(elements, self.registry.clone()).expect("a, b are positive")
    }

    pub fn is_besse(&self) -> bool {
        self.ratio().is_some()
    }

    /// Writes a = p·t, b = q·t with p, q coprime, and presents the Reeb flow
    /// of ∂E(a, b) as the Besse model on S³ with τ = p·q·t and invariants
    /// (0; q,β_1, p,β_2), where p·β_1 + q·β_2 = 1 and 0 ≤ β_1 < q. Trivial
    /// (1, 0) pairs are dropped, so the Euler number is 1/(p·q).
    pub fn to_besse_model(&self) -> Result<BesseModel> {
        let r = self.ratio().ok_or_else(|| {
            Error::NotBesse(format!("b/a is irrational for E({}, {})", self.a, self.b))
        })?;
        let (q, p) = (r.numer().clone(), r.denom().clone());
        let t = self.a.scale(&BigRational::new(BigInt::one(), p.clone()));
        let tau = t.scale(&BigRational::from_integer(&p * &q));
        let (p, q) = (
            p.to_i64()
                .ok_or_else(|| Error::InvalidModel("p overflows".into()))?,
            q.to_i64()
                .ok_or_else(|| Error::InvalidModel("q overflows".into()))?,
        );
        let beta1 = if q == 1 { 0 } else { mod_inverse(p, q) };
        let beta2 = (1 - p * beta1) / q;
        debug_assert_eq!(p * beta1 + q * beta2, 1);
        let pairs = [(q, beta1), (p, beta2)]
            .into_iter()
            .filter(|&pair| pair != (1, 0))
            .collect();
        BesseModel::new(
            SPHERE_LABEL,
            tau,
            SeifertInvariants::new(0, pairs)?,
            self.registry.clone(),
        )
    }
}

/// Inverse of `a` modulo `m` in [0, m), for coprime `a`, `m > 1`.
fn mod_inverse(a: i64, m: i64) -> i64 {
    let e = a.extended_gcd(&m);
    debug_assert_eq!(e.gcd.abs(), 1);
    (e.x * e.gcd.signum()).rem_euclid(m)
}
