//! Finitely generated abelian groups in canonical (primary) form.
//!
//! A group is stored as its free rank together with the multiset of its
//! prime-power cyclic factors, sorted by prime and then exponent. Two groups
//! are isomorphic exactly when their canonical forms are equal, so all
//! comparisons below are structural.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_prime::nt_funcs::{factorize, factorize64, is_prime64};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::matrix::IntMatrix;
use crate::snf::smith_normal_form;

/// `m` copies of the cyclic group of order `p^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u64,
    pub e: u32,
    pub m: usize,
}

impl PrimePower {
    /// `p^e`, if it fits in 64 bits.
    pub fn order(&self) -> Option<u64> {
        self.p.checked_pow(self.e)
    }

    pub fn order_big(&self) -> BigUint {
        BigUint::from(self.p).pow(self.e)
    }
}

/// Serialized as `{"rank": r, "torsion": [...]}`; also deserializes from the
/// compact text form such as `"Z^2+Z_6"`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FGAbelianGroup {
    rank: usize,
    torsion: Vec<PrimePower>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    rank: usize,
    #[serde(default)]
    torsion: Vec<PrimePower>,
}

impl<'de> Deserialize<'de> for FGAbelianGroup {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct GroupVisitor;

        impl<'de> serde::de::Visitor<'de> for GroupVisitor {
            type Value = FGAbelianGroup;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a group object {rank, torsion} or a string like \"Z^2+Z_6\"")
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Self::Value, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_map<A: serde::de::MapAccess<'de>>(
                self,
                map: A,
            ) -> Result<Self::Value, A::Error> {
                let raw = RawGroup::deserialize(serde::de::value::MapAccessDeserializer::new(map))?;
                FGAbelianGroup::new(raw.rank, raw.torsion.iter().map(|f| (f.p, f.e, f.m)))
                    .map_err(serde::de::Error::custom)
            }
        }

        deserializer.deserialize_any(GroupVisitor)
    }
}

impl FGAbelianGroup {
    /// Builds the canonical form of `Z^rank ⊕ (⊕ Z_{p^e}^m)`. Repeated `(p, e)`
    /// pairs are merged; every `p` must be prime and `e`, `m` positive.
    pub fn new(
        rank: usize,
        factors: impl IntoIterator<Item = (u64, u32, usize)>,
    ) -> Result<Self, Error> {
        let mut merged: BTreeMap<(u64, u32), usize> = BTreeMap::new();
        for (p, e, m) in factors {
            if !is_prime64(p) {
                return Err(Error::NotPrime(p));
            }
            if e == 0 || m == 0 {
                return Err(Error::EmptyFactor);
            }
            *merged.entry((p, e)).or_default() += m;
        }
        Ok(Self::from_merged(rank, merged))
    }

    fn from_merged(rank: usize, merged: BTreeMap<(u64, u32), usize>) -> Self {
        let torsion = merged
            .into_iter()
            .map(|((p, e), m)| PrimePower { p, e, m })
            .collect();
        Self { rank, torsion }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            rank,
            torsion: Vec::new(),
        }
    }

    /// The cyclic group of the given order; order 0 gives `Z`, order 1 the trivial group.
    pub fn cyclic(order: u64) -> Self {
        match order {
            0 => Self::free(1),
            _ => Self::from_merged(
                0,
                factorize64(order)
                    .into_iter()
                    .map(|(p, e)| ((p, e as u32), 1))
                    .collect(),
            ),
        }
    }

    /// Builds a group from its invariant factors: zeros count towards the rank,
    /// ones vanish, everything else splits into prime powers.
    pub fn from_invariant_factors<'a>(
        factors: impl IntoIterator<Item = &'a BigInt>,
    ) -> Result<Self, Error> {
        let mut rank = 0;
        let mut merged: BTreeMap<(u64, u32), usize> = BTreeMap::new();
        for d in factors {
            let d = d.magnitude();
            if d.is_zero() {
                rank += 1;
                continue;
            }
            for (p, e) in factor_biguint(d)? {
                *merged.entry((p, e)).or_default() += 1;
            }
        }
        Ok(Self::from_merged(rank, merged))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[PrimePower] {
        &self.torsion
    }

    pub fn torsion_part(&self) -> Self {
        Self {
            rank: 0,
            torsion: self.torsion.clone(),
        }
    }

    pub fn free_part(&self) -> Self {
        Self::free(self.rank)
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn torsion_order(&self) -> BigUint {
        self.torsion
            .iter()
            .fold(BigUint::one(), |acc, f| acc * f.order_big().pow(f.m as u32))
    }

    /// Number of cyclic factors in the primary decomposition (rank excluded).
    pub fn factor_count(&self) -> usize {
        self.torsion.iter().map(|f| f.m).sum()
    }

    /// Each `(p, e)` present among the torsion factors, without multiplicity.
    pub fn factor_kinds(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.torsion.iter().map(|f| (f.p, f.e))
    }

    pub fn has_factor_of_order(&self, q: u64) -> bool {
        self.torsion.iter().any(|f| f.order() == Some(q))
    }

    /// Multiplicity of `Z_{p^e}` among the torsion factors.
    pub fn multiplicity(&self, p: u64, e: u32) -> usize {
        self.torsion
            .iter()
            .find(|f| f.p == p && f.e == e)
            .map_or(0, |f| f.m)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut merged: BTreeMap<(u64, u32), usize> = BTreeMap::new();
        for f in self.torsion.iter().chain(&other.torsion) {
            *merged.entry((f.p, f.e)).or_default() += f.m;
        }
        Self::from_merged(self.rank + other.rank, merged)
    }

    /// `n` copies of this group.
    pub fn power(&self, n: usize) -> Self {
        let merged = self
            .torsion
            .iter()
            .map(|f| ((f.p, f.e), f.m * n))
            .filter(|(_, m)| *m > 0);
        Self::from_merged(self.rank * n, merged.collect())
    }

    /// True when some `K` exists with `self ⊕ K ≅ g`.
    pub fn is_summand_of(&self, g: &Self) -> bool {
        self.rank <= g.rank && self.torsion.iter().all(|f| f.m <= g.multiplicity(f.p, f.e))
    }

    /// The unique `K` with `self ⊕ K ≅ g`, or `None` when `self` is not a summand of `g`.
    pub fn complement_in(&self, g: &Self) -> Option<Self> {
        if !self.is_summand_of(g) {
            return None;
        }
        let merged = g
            .torsion
            .iter()
            .map(|f| ((f.p, f.e), f.m - self.multiplicity(f.p, f.e)))
            .filter(|(_, m)| *m > 0)
            .collect();
        Some(Self::from_merged(g.rank - self.rank, merged))
    }

    pub fn shares_canonical_factor(&self, other: &Self) -> bool {
        self.factor_kinds()
            .any(|(p, e)| other.multiplicity(p, e) > 0)
    }

    /// The invariant factors of the torsion part (`d_1 | d_2 | ...`, all > 1).
    pub fn invariant_factors(&self) -> Vec<BigUint> {
        // The i-th largest invariant factor collects the i-th largest power of each prime.
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for f in &self.torsion {
            by_prime
                .entry(f.p)
                .or_default()
                .extend(std::iter::repeat_n(f.e, f.m));
        }
        let longest = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![BigUint::one(); longest];
        for (p, mut exps) in by_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (i, e) in exps.into_iter().enumerate() {
                let slot = longest - 1 - i;
                out[slot] *= BigUint::from(p).pow(e);
            }
        }
        out
    }

    /// A square diagonal relation matrix presenting this group.
    pub fn presentation(&self) -> IntMatrix {
        let tors: Vec<BigInt> = self
            .torsion
            .iter()
            .flat_map(|f| std::iter::repeat_n(BigInt::from(f.order_big()), f.m))
            .collect();
        let g = tors.len() + self.rank;
        let mut diag = tors;
        diag.extend(std::iter::repeat_n(BigInt::zero(), self.rank));
        IntMatrix::from_diagonal(g, g, &diag)
    }
}

/// The group `Z^g / (column span of M)` for a `g`-row relation matrix `M`.
pub fn canonicalize(relations: &IntMatrix) -> Result<FGAbelianGroup, Error> {
    let snf = smith_normal_form(relations);
    let diag = snf.d.diagonal();
    let generators = relations.rows();
    let killed = diag.iter().filter(|d| !d.is_zero()).count();
    let torsion = FGAbelianGroup::from_invariant_factors(diag.iter().filter(|d| !d.is_zero()))?;
    Ok(torsion.direct_sum(&FGAbelianGroup::free(generators - killed)))
}

fn factor_biguint(n: &BigUint) -> Result<Vec<(u64, u32)>, Error> {
    if let Some(small) = n.to_u64() {
        return Ok(factorize64(small)
            .into_iter()
            .map(|(p, e)| (p, e as u32))
            .collect());
    }
    factorize(n.clone())
        .into_iter()
        .map(|(p, e)| {
            p.to_u64()
                .map(|p| (p, e as u32))
                .ok_or(Error::PrimeTooLarge)
        })
        .collect()
}

impl Add for FGAbelianGroup {
    type Output = FGAbelianGroup;

    fn add(self, rhs: Self) -> Self {
        self.direct_sum(&rhs)
    }
}

impl<'a> Add<&'a FGAbelianGroup> for &'a FGAbelianGroup {
    type Output = FGAbelianGroup;

    fn add(self, rhs: &FGAbelianGroup) -> FGAbelianGroup {
        self.direct_sum(rhs)
    }
}

impl std::iter::Sum for FGAbelianGroup {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::trivial(), |a, b| a.direct_sum(&b))
    }
}

/// Text form: `0`, `Z`, `Z^2 + Z_2^3 + Z_9`.
impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut terms = Vec::new();
        match self.rank {
            0 => {}
            1 => terms.push("Z".to_string()),
            r => terms.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            let order = t.order_big();
            terms.push(match t.m {
                1 => format!("Z_{order}"),
                m => format!("Z_{order}^{m}"),
            });
        }
        f.write_str(&terms.join(" + "))
    }
}

/// Parses the text form. Cyclic terms need not be prime powers: `Z_6` is read as `Z_2 + Z_3`.
impl FromStr for FGAbelianGroup {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self, Error> {
        let err = |reason: &str| Error::GroupSyntax {
            text: text.to_string(),
            reason: reason.into(),
        };
        let mut group = FGAbelianGroup::trivial();
        for term in text.split(['+', '⊕']) {
            let term = term.trim();
            if term.is_empty() {
                return Err(err("empty term"));
            }
            if term == "0" {
                continue;
            }
            let (base, power) = match term.split_once('^') {
                Some((b, p)) => (
                    b.trim(),
                    p.trim().parse::<usize>().map_err(|_| err("bad exponent"))?,
                ),
                None => (term, 1),
            };
            let piece = if base == "Z" {
                FGAbelianGroup::free(1)
            } else if let Some(order) = base.strip_prefix("Z_") {
                let order: BigUint = order.trim().parse().map_err(|_| err("bad cyclic order"))?;
                if order.is_zero() {
                    FGAbelianGroup::free(1)
                } else {
                    FGAbelianGroup::from_invariant_factors(&[BigInt::from(order)])?
                }
            } else {
                return Err(err("terms look like Z, Z^k, Z_n or Z_n^k"));
            };
            group = group.direct_sum(&piece.power(power));
        }
        Ok(group)
    }
}
