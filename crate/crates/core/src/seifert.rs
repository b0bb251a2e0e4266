//! Seifert invariants of fibrations over closed orientable surfaces.
//!
//! A tuple `(g; α_1,β_1, …, α_r,β_r)` is taken up to the moves
//!
//! - permuting pairs,
//! - inserting or deleting a `(1, 0)` pair,
//! - replacing `β_i, β_j` by `β_i + α_i, β_j − α_j` for `i ≠ j`,
//!
//! which generate orientation-preserving fibration isomorphism. The canonical
//! representative is `(g; b; (α_1, β̄_1), …)` with one unnormalized `(1, b)`
//! pair and residues `0 < β̄ < α` on the exceptional fibers, sorted.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSeifert", into = "RawSeifert")]
pub struct SeifertInvariants {
    genus: u32,
    pairs: Vec<(i64, i64)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeifert {
    genus: u32,
    pairs: Vec<[i64; 2]>,
}

impl TryFrom<RawSeifert> for SeifertInvariants {
    type Error = Error;

    fn try_from(raw: RawSeifert) -> Result<Self> {
        Self::new(
            raw.genus,
            raw.pairs.into_iter().map(|[a, b]| (a, b)).collect(),
        )
    }
}

impl From<SeifertInvariants> for RawSeifert {
    fn from(s: SeifertInvariants) -> Self {
        RawSeifert {
            genus: s.genus,
            pairs: s.pairs.into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

/// One equivalence move on a Seifert tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Swap(usize, usize),
    InsertTrivial(usize),
    /// Removes the pair at the index, which must be `(1, 0)`.
    DeleteTrivial(usize),
    /// `β_from += α_from`, `β_to −= α_to`.
    Shift {
        from: usize,
        to: usize,
    },
}

impl SeifertInvariants {
    pub fn new(genus: u32, pairs: Vec<(i64, i64)>) -> Result<Self> {
        for &(alpha, beta) in &pairs {
            if alpha < 1 {
                return Err(Error::InvalidSeifert(format!(
                    "multiplicity {alpha} must be at least 1"
                )));
            }
            if alpha.gcd(&beta) != 1 {
                return Err(Error::InvalidSeifert(format!(
                    "pair ({alpha}, {beta}) is not coprime"
                )));
            }
        }
        Ok(Self { genus, pairs })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn pairs(&self) -> &[(i64, i64)] {
        &self.pairs
    }

    /// Multiplicities of the exceptional fibers (pairs with α ≥ 2).
    pub fn exceptional_multiplicities(&self) -> impl Iterator<Item = i64> + '_ {
        self.pairs.iter().map(|&(a, _)| a).filter(|&a| a >= 2)
    }

    pub fn singular_fiber_count(&self) -> usize {
        self.exceptional_multiplicities().count()
    }

    /// e = Σ β_i/α_i.
    pub fn euler_number(&self) -> BigRational {
        self.pairs.iter().fold(BigRational::zero(), |acc, &(a, b)| {
            acc + BigRational::new(b.into(), a.into())
        })
    }

    pub fn normalize(&self) -> NormalForm {
        let mut exceptional: Vec<(i64, i64)> = self
            .pairs
            .iter()
            .filter(|&&(a, _)| a >= 2)
            .map(|&(a, b)| (a, b.rem_euclid(a)))
            .collect();
        exceptional.sort_unstable();
        let residues = exceptional
            .iter()
            .fold(BigRational::zero(), |acc, &(a, r)| {
                acc + BigRational::new(r.into(), a.into())
            });
        let b = self.euler_number() - residues;
        debug_assert!(b.is_integer());
        let b = b
            .to_integer()
            .to_i64()
            .expect("normal form offset fits in i64");
        NormalForm {
            genus: self.genus,
            b,
            exceptional,
        }
    }

    pub fn equivalent(&self, other: &Self) -> bool {
        self.normalize() == other.normalize()
    }

    /// Same fibration with the total space orientation reversed: every β
    /// negated.
    pub fn reverse_orientation(&self) -> Self {
        Self {
            genus: self.genus,
            pairs: self.pairs.iter().map(|&(a, b)| (a, -b)).collect(),
        }
    }

    /// Necessary condition for the fibration to come from a Besse contact
    /// form: positive Euler number.
    pub fn besse_realizable(&self) -> bool {
        self.euler_number().is_positive()
    }

    pub fn apply(&self, mv: Move) -> Result<Self> {
        let n = self.pairs.len();
        let bad = |what: &str| Err(Error::PreconditionViolated(format!("invalid move: {what}")));
        let mut pairs = self.pairs.clone();
        match mv {
            Move::Swap(i, j) if i < n && j < n => pairs.swap(i, j),
            Move::InsertTrivial(i) if i <= n => pairs.insert(i, (1, 0)),
            Move::DeleteTrivial(i) if i < n && pairs[i] == (1, 0) => {
                pairs.remove(i);
            }
            Move::Shift { from, to } if from < n && to < n && from != to => {
                pairs[from].1 += pairs[from].0;
                pairs[to].1 -= pairs[to].0;
            }
            _ => return bad(&format!("{mv:?} on {n} pairs")),
        }
        Self::new(self.genus, pairs)
    }
}

/// Canonical representative of a Seifert tuple up to the equivalence moves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormalForm {
    pub genus: u32,
    pub b: i64,
    pub exceptional: Vec<(i64, i64)>,
}

impl NormalForm {
    pub fn euler_number(&self) -> BigRational {
        self.exceptional
            .iter()
            .fold(BigRational::from_integer(self.b.into()), |acc, &(a, r)| {
                acc + BigRational::new(r.into(), a.into())
            })
    }

    /// `(g; 1,b, α_1,β̄_1, …)`.
    pub fn to_invariants(&self) -> SeifertInvariants {
        let mut pairs = vec![(1, self.b)];
        pairs.extend(self.exceptional.iter().copied());
        SeifertInvariants::new(self.genus, pairs).expect("normal form pairs are coprime")
    }
}

/// Checks a Seifert fibration of the lens space `L(p, q)` over S² against
/// the known constraints:
///
/// - `p = 0` (S²×S¹): invariants `(0; α,β, α,−β)` up to equivalence;
/// - `p > 0`, at most one exceptional fiber: equivalent to `(0; α, p)` with
///   `α ≡ q` or `αq ≡ 1 (mod p)`;
/// - `p > 0`, two exceptional fibers: `gcd(α_1, α_2)` divides `p`. The
///   β-values are not constrained here.
///
/// Tuples over a base of positive genus or with more than two exceptional
/// fibers are never lens space fibrations over S² and yield `false`.
pub fn lens_fibration_check(p: i64, q: i64, s: &SeifertInvariants) -> Result<bool> {
    if p < 0 || p.gcd(&q) != 1 {
        return Err(Error::InvalidLensParameters { p, q });
    }
    if s.genus != 0 {
        return Ok(false);
    }
    let nf = s.normalize();
    let e = s.euler_number();
    match (p, nf.exceptional.as_slice()) {
        (_, ex) if ex.len() > 2 => Ok(false),
        (0, []) => Ok(e.is_zero()),
        (0, [(a1, _), (a2, _)]) => Ok(a1 == a2 && e.is_zero()),
        (0, _) => Ok(false),
        (_, [] | [_]) => {
            let alpha = nf.exceptional.first().map_or(1, |&(a, _)| a);
            let matches_tuple = e == BigRational::new(p.into(), alpha.into());
            let congruent = (alpha - q).rem_euclid(p) == 0 || (alpha * q - 1).rem_euclid(p) == 0;
            Ok(matches_tuple && congruent)
        }
        (_, [(a1, _), (a2, _)]) => Ok(p % a1.gcd(a2) == 0),
        _ => unreachable!("lengths above 2 handled first"),
    }
}

/// Verifies that no integer `n_2` with `|n_2| ≤ bound` solves
/// `(1 + n_1 n_2)·α = q` or `(q + n_1 n_2)·α = 1`, where `n_1 = p/α`.
///
/// These are the equations forced when a lens space carried Besse forms
/// with one and two singular fibers of the same multiplicity.
pub fn singular_count_obstruction(p: i64, q: i64, alpha: i64, bound: u64) -> Result<bool> {
    if p <= 1 || alpha <= 1 {
        return Err(Error::PreconditionViolated(format!(
            "need p > 1 and alpha > 1, got p={p}, alpha={alpha}"
        )));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::PreconditionViolated(format!("gcd({p}, {q}) != 1")));
    }
    if p % alpha != 0 {
        return Err(Error::PreconditionViolated(format!(
            "{alpha} does not divide {p}"
        )));
    }
    Ok(!obstruction_solvable(p, q, alpha, bound))
}

/// Exact solver behind [`singular_count_obstruction`], without the
/// coprimality precondition.
fn obstruction_solvable(p: i64, q: i64, alpha: i64, bound: u64) -> bool {
    let n1 = BigInt::from(p / alpha);
    let alpha = BigInt::from(alpha);
    let bound = BigInt::from(bound);
    // (c + n1·n2)·α = rhs has a solution iff α | rhs and n1 | (rhs/α − c).
    let solvable = |c: BigInt, rhs: BigInt| {
        if !rhs.is_multiple_of(&alpha) {
            return false;
        }
        let t = &rhs / &alpha - c;
        t.is_multiple_of(&n1) && (t / &n1).abs() <= bound
    };
    let q = BigInt::from(q);
    solvable(BigInt::from(1), q.clone()) || solvable(q, BigInt::from(1))
}

/// Multiplicity → number of exceptional fibers with that multiplicity.
pub fn multiplicity_counts(s: &SeifertInvariants) -> BTreeMap<i64, usize> {
    let mut counts = BTreeMap::new();
    for a in s.exceptional_multiplicities() {
        *counts.entry(a).or_insert(0) += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(g: u32, pairs: &[(i64, i64)]) -> SeifertInvariants {
        SeifertInvariants::new(g, pairs.to_vec()).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn validation() {
        assert!(SeifertInvariants::new(0, vec![(0, 1)]).is_err());
        assert!(SeifertInvariants::new(0, vec![(4, 2)]).is_err());
        assert!(SeifertInvariants::new(0, vec![(1, 0)]).is_ok());
        assert!(SeifertInvariants::new(0, vec![]).is_ok());
        let err = SeifertInvariants::new(0, vec![(3, -6)]).unwrap_err();
        assert_eq!(err.name(), "InvalidSeifert");
    }

    #[test]
    fn euler_examples() {
        assert_eq!(s(0, &[(2, 1), (2, 1)]).euler_number(), q(1, 1));
        assert_eq!(s(0, &[(5, 3), (5, -3)]).euler_number(), q(0, 1));
        assert_eq!(s(0, &[(3, 2), (2, -1)]).euler_number(), q(1, 6));
        assert_eq!(s(2, &[]).euler_number(), q(0, 1));
    }

    #[test]
    fn normalize_examples() {
        let nf = s(0, &[(1, 0), (2, 1)]).normalize();
        assert_eq!(
            nf,
            NormalForm {
                genus: 0,
                b: 0,
                exceptional: vec![(2, 1)]
            }
        );
        let nf = s(0, &[(2, 3)]).normalize();
        assert_eq!(
            nf,
            NormalForm {
                genus: 0,
                b: 1,
                exceptional: vec![(2, 1)]
            }
        );
        let nf = s(0, &[(3, 2), (2, -1)]).normalize();
        assert_eq!(
            nf,
            NormalForm {
                genus: 0,
                b: -1,
                exceptional: vec![(2, 1), (3, 2)]
            }
        );
        assert_eq!(nf.euler_number(), q(1, 6));
    }

    #[test]
    fn equivalence_examples() {
        assert!(s(0, &[(3, 2), (2, -1)]).equivalent(&s(0, &[(3, -1), (2, 1)])));
        assert!(!s(0, &[(2, 1)]).equivalent(&s(0, &[(2, -1)])));
        let x = s(1, &[(5, 2), (3, 1)]);
        assert!(x.equivalent(&x));
        assert!(!x.equivalent(&s(0, &[(5, 2), (3, 1)])));
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(s(0, &[(2, 1)]).reverse_orientation(), s(0, &[(2, -1)]));
        let sym = s(0, &[(5, 2), (5, -2)]);
        assert!(sym.equivalent(&sym.reverse_orientation()));
        let x = s(0, &[(3, 2), (2, -1)]);
        assert_eq!(x.reverse_orientation().reverse_orientation(), x);
    }

    #[test]
    fn realizable_examples() {
        assert!(s(0, &[(2, 1), (2, 1)]).besse_realizable());
        assert!(!s(0, &[(7, 3), (7, -3)]).besse_realizable());
        assert!(s(0, &[(3, 2), (2, -1)]).besse_realizable());
    }

    #[test]
    fn lens_examples() {
        assert!(lens_fibration_check(0, 1, &s(0, &[(2, 1), (2, -1)])).unwrap());
        assert!(lens_fibration_check(5, 2, &s(0, &[(3, 5)])).unwrap());
        assert!(lens_fibration_check(4, 1, &s(0, &[(2, 1), (6, 1)])).unwrap());
        // Wrong β for the one-fiber shape.
        assert!(!lens_fibration_check(5, 2, &s(0, &[(3, 4)])).unwrap());
        // Congruence fails: 4 ≢ 2 and 4·2 = 8 ≢ 1 mod 5.
        assert!(!lens_fibration_check(5, 2, &s(0, &[(4, 5)])).unwrap());
        // gcd(4, 6) = 2 does not divide 5.
        assert!(!lens_fibration_check(5, 2, &s(0, &[(4, 1), (6, 1)])).unwrap());
        // S²×S¹ needs e = 0.
        assert!(!lens_fibration_check(0, 1, &s(0, &[(2, 1), (2, 1)])).unwrap());
        assert!(lens_fibration_check(0, 1, &s(0, &[(1, 3), (1, -3)])).unwrap());
        assert!(!lens_fibration_check(0, 1, &s(1, &[(2, 1), (2, -1)])).unwrap());
        assert!(!lens_fibration_check(3, 1, &s(0, &[(2, 1), (3, 1), (5, 1)])).unwrap());
        assert_eq!(
            lens_fibration_check(4, 2, &s(0, &[])).unwrap_err(),
            Error::InvalidLensParameters { p: 4, q: 2 }
        );
        assert!(lens_fibration_check(0, 3, &s(0, &[])).is_err());
        assert!(lens_fibration_check(-3, 1, &s(0, &[])).is_err());
    }

    /// Literal scan of n_2 over [-bound, bound].
    fn obstruction_scan(p: i64, q: i64, alpha: i64, bound: i64) -> bool {
        let n1 = p / alpha;
        !(-bound..=bound).any(|n2| (1 + n1 * n2) * alpha == q || (q + n1 * n2) * alpha == 1)
    }

    #[test]
    fn obstruction_examples() {
        assert!(singular_count_obstruction(4, 1, 2, 100).unwrap());
        assert!(singular_count_obstruction(6, 5, 3, 100).unwrap());
        assert!(singular_count_obstruction(9, 2, 3, 1000).unwrap());
        assert!(obstruction_scan(4, 1, 2, 100));
        assert!(obstruction_scan(6, 5, 3, 100));
        assert!(obstruction_scan(9, 2, 3, 1000));
    }

    #[test]
    fn obstruction_preconditions() {
        for (p, q, a) in [(1, 1, 2), (4, 1, 1), (4, 2, 2), (6, 1, 4)] {
            let err = singular_count_obstruction(p, q, a, 10).unwrap_err();
            assert_eq!(err.name(), "PreconditionViolated", "{p} {q} {a}");
        }
    }

    #[test]
    fn exact_solver_matches_scan() {
        // Without gcd(p, q) = 1 the equations do have solutions, so this
        // exercises both outcomes.
        for p in 2..=24 {
            for alpha in (2..=p).filter(|a| p % a == 0) {
                for q in -30..=30 {
                    for bound in [0, 1, 3, 50] {
                        assert_eq!(
                            !obstruction_solvable(p, q, alpha, bound as u64),
                            obstruction_scan(p, q, alpha, bound),
                            "p={p} q={q} alpha={alpha} bound={bound}"
                        );
                    }
                }
            }
        }
    }

    fn tuple_strategy() -> impl Strategy<Value = SeifertInvariants> {
        (
            0u32..3,
            prop::collection::vec((1i64..=12, -50i64..=50), 0..=6),
        )
            .prop_map(|(g, raw)| {
                let pairs = raw
                    .into_iter()
                    .map(|(a, b)| {
                        // Nudge β until coprime with α.
                        let mut b = b;
                        while a.gcd(&b) != 1 {
                            b += 1;
                        }
                        (a, b)
                    })
                    .collect();
                SeifertInvariants::new(g, pairs).unwrap()
            })
    }

    fn random_move(s: &SeifertInvariants, pick: (u8, usize, usize)) -> Option<Move> {
        let n = s.pairs().len();
        let (kind, i, j) = pick;
        match kind % 4 {
            0 if n >= 2 => Some(Move::Swap(i % n, j % n)),
            1 => Some(Move::InsertTrivial(i % (n + 1))),
            2 => s
                .pairs()
                .iter()
                .position(|&p| p == (1, 0))
                .map(Move::DeleteTrivial),
            3 if n >= 2 && i % n != j % n => Some(Move::Shift {
                from: i % n,
                to: j % n,
            }),
            _ => None,
        }
    }

    proptest! {
        #[test]
        fn moves_preserve_normal_form(
            t in tuple_strategy(),
            moves in prop::collection::vec((any::<u8>(), any::<usize>(), any::<usize>()), 0..20)
        ) {
            let nf = t.normalize();
            let e = t.euler_number();
            let mut cur = t.clone();
            for pick in moves {
                if let Some(mv) = random_move(&cur, pick) {
                    cur = cur.apply(mv).unwrap();
                }
            }
            prop_assert_eq!(cur.normalize(), nf.clone());
            prop_assert_eq!(cur.euler_number(), e);
            prop_assert_eq!(nf.to_invariants().normalize(), nf);
        }

        #[test]
        fn reversal_facts(t in tuple_strategy()) {
            let r = t.reverse_orientation();
            prop_assert_eq!(r.reverse_orientation(), t.clone());
            prop_assert_eq!(r.euler_number(), -t.euler_number());
            if t.equivalent(&r) {
                prop_assert!(t.euler_number().is_zero());
            }
            prop_assert!(!(t.besse_realizable() && r.besse_realizable()));
        }
    }
}
