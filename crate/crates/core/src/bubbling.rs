//! Homology of a Reeb space under bubbling operations.
//!
//! A part `P` of the generating polyhedron shifts its homology up by
//! `n - dim P` in degrees below `n`, leaving out its fundamental class; each
//! operation adds one `Z` in degree `n` however many parts it has.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::group::FGAbelianGroup;
use crate::manifold::{Bouquet, ManifoldProfile};
use crate::target::TargetFamily;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawState")]
pub struct ReebState {
    n: usize,
    homology: Vec<FGAbelianGroup>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    n: usize,
    homology: Vec<FGAbelianGroup>,
}

impl TryFrom<RawState> for ReebState {
    type Error = Error;

    fn try_from(raw: RawState) -> Result<Self, Error> {
        ReebState::new(raw.n, raw.homology)
    }
}

impl ReebState {
    pub fn new(n: usize, homology: Vec<FGAbelianGroup>) -> Result<Self, Error> {
        if n == 0 || homology.len() != n + 1 {
            return Err(Error::StateLength {
                expected: n + 1,
                found: homology.len(),
            });
        }
        if homology[0] != FGAbelianGroup::free(1) {
            return Err(Error::DisconnectedState(homology[0].to_string()));
        }
        Ok(Self { n, homology })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn homology(&self) -> &[FGAbelianGroup] {
        &self.homology
    }

    pub fn h(&self, i: usize) -> &FGAbelianGroup {
        &self.homology[i]
    }
}

/// The Reeb space of a special generic map onto the `n`-disc: `(Z, 0, ..., 0)`.
///
/// # Panics
/// If `n` is 0.
pub fn initial_disc_state(n: usize) -> ReebState {
    assert!(n >= 1, "the disc state needs n >= 1");
    let mut homology = vec![FGAbelianGroup::trivial(); n + 1];
    homology[0] = FGAbelianGroup::free(1);
    ReebState { n, homology }
}

/// Fiber behaviour of an operation. Recorded for provenance only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OpKind {
    M,
    S,
    #[serde(rename = "trivial-M")]
    TrivialM,
    #[serde(rename = "trivial-S")]
    TrivialS,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BubblingOp {
    pub kind: OpKind,
    pub polyhedron: Bouquet,
}

impl BubblingOp {
    pub fn point(kind: OpKind) -> Self {
        Self {
            kind,
            polyhedron: Bouquet::Point,
        }
    }

    pub fn bouquet(kind: OpKind, parts: Vec<ManifoldProfile>) -> Self {
        Self {
            kind,
            polyhedron: Bouquet::of(parts),
        }
    }
}

/// What a single part adds in degree `i` of an `n`-dimensional Reeb space.
pub fn contribution(part: &ManifoldProfile, n: usize, i: usize) -> Result<FGAbelianGroup, Error> {
    if part.dim >= n {
        return Err(Error::PartTooLarge {
            name: part.name.clone(),
            dim: part.dim,
            n,
        });
    }
    let shift = n - part.dim;
    Ok(if i < n && i >= shift {
        part.h(i - shift)
    } else {
        FGAbelianGroup::trivial()
    })
}

fn check_part(part: &ManifoldProfile, n: usize) -> Result<(), Error> {
    if part.dim >= n {
        return Err(Error::PartTooLarge {
            name: part.name.clone(),
            dim: part.dim,
            n,
        });
    }
    part.clone().validated()?;
    match part.embeds_in {
        Some(e) if e > n => Err(Error::NotEmbeddable {
            name: part.name.clone(),
            embeds_in: e,
            n,
        }),
        _ => Ok(()),
    }
}

/// The degreewise groups one operation adds to an `n`-dimensional state.
pub fn op_delta(n: usize, op: &BubblingOp) -> Result<Vec<FGAbelianGroup>, Error> {
    let mut delta = vec![FGAbelianGroup::trivial(); n + 1];
    for part in op.polyhedron.parts() {
        check_part(part, n)?;
        for (i, d) in delta.iter_mut().enumerate().take(n) {
            *d = d.direct_sum(&contribution(part, n, i)?);
        }
    }
    delta[n] = FGAbelianGroup::free(1);
    Ok(delta)
}

pub fn apply_op(state: &ReebState, op: &BubblingOp) -> Result<ReebState, Error> {
    let delta = op_delta(state.n, op)?;
    let homology = state
        .homology
        .iter()
        .zip(&delta)
        .map(|(h, d)| h.direct_sum(d))
        .collect();
    Ok(ReebState {
        n: state.n,
        homology,
    })
}

/// Per operation, the groups it added in each degree `0..=n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ledger(pub Vec<Vec<FGAbelianGroup>>);

/// Folds `ops` over `initial`; the error names the first operation that fails.
pub fn apply_plan(initial: &ReebState, ops: &[BubblingOp]) -> Result<(ReebState, Ledger), Error> {
    let mut state = initial.clone();
    let mut ledger = Vec::with_capacity(ops.len());
    for (index, op) in ops.iter().enumerate() {
        let delta = op_delta(state.n, op).map_err(|e| Error::InvalidOp {
            index,
            source: Box::new(e),
        })?;
        state.homology = state
            .homology
            .iter()
            .zip(&delta)
            .map(|(h, d)| h.direct_sum(d))
            .collect();
        ledger.push(delta);
    }
    Ok((state, Ledger(ledger)))
}

/// An initial state, its operations, and the ledger their replay produces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Plan {
    initial: ReebState,
    ops: Vec<BubblingOp>,
    ledger: Ledger,
    final_state: ReebState,
}

impl Plan {
    pub fn new(initial: ReebState, ops: Vec<BubblingOp>) -> Result<Self, Error> {
        let (final_state, ledger) = apply_plan(&initial, &ops)?;
        Ok(Self {
            initial,
            ops,
            ledger,
            final_state,
        })
    }

    /// Like [`Plan::new`], but also checks a recorded ledger against the replay.
    pub fn with_ledger(
        initial: ReebState,
        ops: Vec<BubblingOp>,
        recorded: &Ledger,
    ) -> Result<Self, Error> {
        let plan = Self::new(initial, ops)?;
        let (a, b) = (&plan.ledger.0, &recorded.0);
        if let Some(i) = (0..a.len().max(b.len())).find(|&i| a.get(i) != b.get(i)) {
            return Err(Error::LedgerMismatch(i));
        }
        Ok(plan)
    }

    pub fn n(&self) -> usize {
        self.initial.n
    }

    pub fn initial(&self) -> &ReebState {
        &self.initial
    }

    pub fn ops(&self) -> &[BubblingOp] {
        &self.ops
    }

    pub fn ledger(&self) -> &Ledger {
        &self.ledger
    }

    pub fn final_state(&self) -> &ReebState {
        &self.final_state
    }

    /// The family this plan adds to its initial state.
    pub fn delta(&self) -> TargetFamily {
        delta_family(&self.initial, &self.final_state)
            .expect("a replayed plan only ever adds summands")
    }
}

/// `G_j` with `H_j(initial) ⊕ G_j ≅ H_j(final)` in every degree, or `None`
/// when the states have different `n` or some degree is not a summand.
pub fn delta_family(initial: &ReebState, final_state: &ReebState) -> Option<TargetFamily> {
    if initial.n != final_state.n {
        return None;
    }
    let groups = initial
        .homology
        .iter()
        .zip(&final_state.homology)
        .map(|(a, b)| a.complement_in(b))
        .collect::<Option<Vec<_>>>()?;
    TargetFamily::new(initial.n, groups).ok()
}

/// Source-manifold homology read off a Reeb space in low degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SourceReport {
    pub m: usize,
    pub n: usize,
    pub codimension: usize,
    /// `(l, H_l(M))` for every degree the report covers.
    pub degrees: Vec<DegreeGroup>,
    /// Conditions on the map that are assumed, not checked.
    pub assumptions: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeGroup {
    pub degree: usize,
    pub group: FGAbelianGroup,
}

/// For a map from a closed `m`-manifold with codimension `k = m - n > 1`, the
/// quotient onto the Reeb space is an isomorphism on `H_l` for `l < k`, and
/// for `l <= k` when the map is special generic.
pub fn infer_source_homology(
    state: &ReebState,
    m: usize,
    special_generic: bool,
) -> Result<SourceReport, Error> {
    let k = m as isize - state.n as isize;
    if k <= 1 {
        return Err(Error::CodimensionTooSmall { m, k });
    }
    let k = k as usize;
    let top = if special_generic { k } else { k - 1 };
    let degrees = (0..=top)
        .map(|l| DegreeGroup {
            degree: l,
            group: state.homology.get(l).cloned().unwrap_or_default(),
        })
        .collect();
    let mut assumptions = vec![
        "the map is a simple fold map".to_string(),
        "inverse images of regular values are disjoint unions of almost-spheres".to_string(),
    ];
    if !special_generic {
        assumptions.push("every singular point has index 0 or 1".to_string());
    }
    Ok(SourceReport {
        m,
        n: state.n,
        codimension: k,
        degrees,
        assumptions,
    })
}
