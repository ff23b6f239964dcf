//! Explicit plans for targets whose shape matches a known construction.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bubbling::{contribution, initial_disc_state, BubblingOp, OpKind, Plan};
use crate::error::Error;
use crate::group::FGAbelianGroup;
use crate::manifold::{Bouquet, ManifoldProfile};
use crate::target::TargetFamily;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanFailure {
    HypothesisNotMet(String),
    /// The search ran out of candidates within its bounds.
    Exhausted,
    Invalid(Error),
}

impl fmt::Display for PlanFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanFailure::HypothesisNotMet(w) => write!(f, "hypothesis not met: {w}"),
            PlanFailure::Exhausted => f.write_str("no plan found within the search bounds"),
            PlanFailure::Invalid(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for PlanFailure {}

fn unmet<T>(why: impl Into<String>) -> Result<T, PlanFailure> {
    Err(PlanFailure::HypothesisNotMet(why.into()))
}

fn require_structure(t: &TargetFamily) -> Result<(), PlanFailure> {
    if let Some(issue) = t.structural_issues().into_iter().next() {
        return unmet(issue);
    }
    let top = t.g(t.n());
    if !top.is_free() {
        return unmet(format!("G_{} = {top} is not free", t.n()));
    }
    Ok(())
}

/// Per degree `0..n`, the direct sum of what `carriers` add below degree `n`.
pub(crate) fn carrier_sums(
    n: usize,
    carriers: &[ManifoldProfile],
) -> Result<Vec<FGAbelianGroup>, Error> {
    let mut sums = vec![FGAbelianGroup::trivial(); n];
    for c in carriers {
        for (i, s) in sums.iter_mut().enumerate() {
            *s = s.direct_sum(&contribution(c, n, i)?);
        }
    }
    Ok(sums)
}

/// One bouquet holding `carriers` and enough spheres to fill the free
/// residue in every degree below `n`, then `rank G_n - 1` points.
pub(crate) fn realize_with_carriers(
    t: &TargetFamily,
    carriers: &[ManifoldProfile],
    kind: OpKind,
) -> Result<Plan, PlanFailure> {
    require_structure(t)?;
    let n = t.n();
    let sums =
        carrier_sums(n, carriers).map_err(|e| PlanFailure::HypothesisNotMet(e.to_string()))?;
    let mut parts = carriers.to_vec();
    for (i, added) in sums.iter().enumerate() {
        let g = t.g(i);
        let Some(rest) = added.complement_in(&g) else {
            return unmet(format!(
                "carriers add {added} in degree {i}, not a summand of G_{i} = {g}"
            ));
        };
        if !rest.is_free() {
            return unmet(format!(
                "torsion {} of G_{i} is not supplied",
                rest.torsion_part()
            ));
        }
        if i == 0 {
            continue;
        }
        parts.extend(std::iter::repeat_with(|| ManifoldProfile::sphere(n - i)).take(rest.rank()));
    }
    let mut ops = vec![BubblingOp {
        kind,
        polyhedron: Bouquet::of(parts),
    }];
    ops.extend(std::iter::repeat_with(|| BubblingOp::point(kind)).take(t.rank(n) - 1));
    let plan = Plan::new(initial_disc_state(n), ops)
        .map_err(|e| PlanFailure::HypothesisNotMet(e.to_string()))?;
    debug_assert_eq!(&plan.delta(), t);
    Ok(plan)
}

fn require_free(t: &TargetFamily) -> Result<(), PlanFailure> {
    match (0..=t.n()).find(|&j| !t.g(j).is_free()) {
        Some(j) => unmet(format!("G_{j} = {} is not free", t.g(j))),
        None => Ok(()),
    }
}

/// Free targets: every sphere in the first operation, the rest points.
pub fn plan_free_bouquet(t: &TargetFamily) -> Result<Plan, PlanFailure> {
    require_free(t)?;
    realize_with_carriers(t, &[], OpKind::TrivialS)
}

/// Free targets with `sum_{0<j<n} rank G_j <= rank G_n`: one sphere per
/// operation, then points.
pub fn plan_free_spheres(t: &TargetFamily) -> Result<Plan, PlanFailure> {
    require_free(t)?;
    require_structure(t)?;
    let n = t.n();
    let spheres: usize = (1..n).map(|j| t.rank(j)).sum();
    if spheres > t.rank(n) {
        return unmet(format!(
            "sum of rank G_1..G_{} = {spheres} exceeds rank G_{n} = {}",
            n - 1,
            t.rank(n)
        ));
    }
    let mut ops = Vec::with_capacity(t.rank(n));
    for j in 1..n {
        for _ in 0..t.rank(j) {
            ops.push(BubblingOp::bouquet(
                OpKind::TrivialS,
                vec![ManifoldProfile::sphere(n - j)],
            ));
        }
    }
    ops.extend(
        std::iter::repeat_with(|| BubblingOp::point(OpKind::TrivialS)).take(t.rank(n) - spheres),
    );
    Plan::new(initial_disc_state(n), ops).map_err(PlanFailure::Invalid)
}

/// Checks that `carrier` has dimension `dim` and that its only middle
/// homology sits in `degrees`, where it is pure torsion.
fn require_shape(
    label: &str,
    carrier: &ManifoldProfile,
    dim: isize,
    degrees: &[usize],
) -> Result<(), PlanFailure> {
    if carrier.dim as isize != dim {
        return unmet(format!(
            "{label} {} has dimension {}, need {dim}",
            carrier.name, carrier.dim
        ));
    }
    for k in carrier.middle_degrees() {
        let h = carrier.h(k);
        if degrees.contains(&k) {
            if !h.is_finite() {
                return unmet(format!(
                    "{label} {} has H_{k} = {h}, which is not finite",
                    carrier.name
                ));
            }
        } else if !h.is_trivial() {
            return unmet(format!(
                "{label} {} has H_{k} = {h}, which must vanish",
                carrier.name
            ));
        }
    }
    Ok(())
}

fn require_group(
    label: &str,
    carrier: &ManifoldProfile,
    k: usize,
    want: &FGAbelianGroup,
) -> Result<(), PlanFailure> {
    let h = carrier.h(k);
    if &h != want {
        return unmet(format!(
            "{label} {} has H_{k} = {h}, need {want}",
            carrier.name
        ));
    }
    Ok(())
}

fn require_rank(t: &TargetFamily, degree: isize) -> Result<(), PlanFailure> {
    if t.rank_at(degree) == 0 {
        return unmet(format!("rank G_{degree} is not positive"));
    }
    Ok(())
}

/// Torsion in exactly one degree `j`, supplied by a `(2n - 2j - 1)`-manifold
/// whose only middle homology is `T G_j` in degree `n - j - 1`.
pub fn plan_single_torsion(
    t: &TargetFamily,
    carrier: &ManifoldProfile,
) -> Result<Plan, PlanFailure> {
    let support = t.torsion_support();
    let [j] = support[..] else {
        return unmet(format!(
            "torsion sits in degrees {support:?}, need exactly one"
        ));
    };
    let (n, ji) = (t.n() as isize, j as isize);
    let dim = 2 * n - 2 * ji - 1;
    if dim <= 0 || dim >= n {
        return unmet(format!(
            "carrier dimension 2n - 2j - 1 = {dim} is not in 1..{n}"
        ));
    }
    let a = (n - ji - 1) as usize;
    require_shape("carrier", carrier, dim, &[a])?;
    require_group("carrier", carrier, a, &t.g(j).torsion_part())?;
    require_rank(t, 2 * ji - n + 1)?;
    realize_with_carriers(t, std::slice::from_ref(carrier), OpKind::TrivialM)
}

/// Which arrangement of two torsion carriers to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TwoDegreeCase {
    /// `T G_{j1}` is not a summand of `T G_{j2}`; one carrier per degree.
    #[serde(rename = "1a")]
    LowNotInHigh,
    /// `T G_{j2}` is not a summand of `T G_{j1}`; one carrier per degree.
    #[serde(rename = "1b")]
    HighNotInLow,
    /// `T G_{j2} = T G_{j1} ⊕ G`; a second carrier spans both degrees.
    #[serde(rename = "2")]
    LowInHigh,
    /// `T G_{j1} = T G_{j2} ⊕ G`; a second carrier spans both degrees.
    #[serde(rename = "3")]
    HighInLow,
}

impl FromStr for TwoDegreeCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "1a" => Ok(Self::LowNotInHigh),
            "1b" => Ok(Self::HighNotInLow),
            "2" => Ok(Self::LowInHigh),
            "3" => Ok(Self::HighInLow),
            _ => Err(Error::UnknownBuiltin(format!("case {s}"))),
        }
    }
}

/// Torsion in exactly two degrees `j1 < j2`, supplied by `s1` and `s2`
/// arranged as `case` describes. Summand relations compare torsion parts.
pub fn plan_two_torsion(
    t: &TargetFamily,
    s1: &ManifoldProfile,
    s2: &ManifoldProfile,
    case: TwoDegreeCase,
) -> Result<Plan, PlanFailure> {
    let support = t.torsion_support();
    let [j1, j2] = support[..] else {
        return unmet(format!(
            "torsion sits in degrees {support:?}, need exactly two"
        ));
    };
    let n = t.n() as isize;
    let (t1, t2) = (t.g(j1).torsion_part(), t.g(j2).torsion_part());
    let (a1, a2) = (n - j1 as isize - 1, n - j2 as isize - 1);
    if a2 < 1 {
        return unmet(format!("j2 = {j2} must be below n - 1 = {}", n - 1));
    }
    let (a1, a2) = (a1 as usize, a2 as usize);
    match case {
        TwoDegreeCase::LowNotInHigh | TwoDegreeCase::HighNotInLow => {
            let fired = match case {
                TwoDegreeCase::LowNotInHigh => !t1.is_summand_of(&t2),
                _ => !t2.is_summand_of(&t1),
            };
            if !fired {
                return unmet(format!(
                    "case guard fails for T G_{j1} = {t1}, T G_{j2} = {t2}"
                ));
            }
            require_shape("S1", s1, 2 * n - 2 * j1 as isize - 1, &[a1])?;
            require_group("S1", s1, a1, &t1)?;
            require_shape("S2", s2, 2 * n - 2 * j2 as isize - 1, &[a2])?;
            require_group("S2", s2, a2, &t2)?;
            require_rank(t, 2 * j1 as isize + 1 - n)?;
            require_rank(t, 2 * j2 as isize + 1 - n)?;
        }
        TwoDegreeCase::LowInHigh | TwoDegreeCase::HighInLow => {
            let (small, big, jb, ab) = match case {
                TwoDegreeCase::LowInHigh => (&t1, &t2, j2, a2),
                _ => (&t2, &t1, j1, a1),
            };
            let Some(rest) = small.complement_in(big) else {
                return unmet(format!("{small} is not a summand of {big}"));
            };
            require_shape("S1", s1, 2 * n - 2 * jb as isize - 1, &[ab])?;
            require_group("S1", s1, ab, &rest)?;
            require_shape("S2", s2, 2 * n - (j1 + j2) as isize - 1, &[a1, a2])?;
            require_group("S2", s2, a1, small)?;
            require_group("S2", s2, a2, small)?;
            require_rank(t, 2 * jb as isize + 1 - n)?;
            require_rank(t, (j1 + j2) as isize + 1 - n)?;
        }
    }
    realize_with_carriers(t, &[s1.clone(), s2.clone()], OpKind::TrivialM)
}

/// Regroups `plan` into `rank H` operations: the first `rank H - 1` are kept
/// and the rest merge into one bouquet. Degrees below `n` are unchanged.
pub fn truncate_top(plan: &Plan, h: &FGAbelianGroup) -> Result<Plan, Error> {
    let ops = plan.ops();
    let r = h.rank();
    if !h.is_free() || r == 0 || r > ops.len() {
        return Err(Error::TruncationRank {
            rank: r,
            ops: ops.len(),
        });
    }
    let mut out = ops[..r - 1].to_vec();
    let tail = &ops[r - 1..];
    let parts = tail
        .iter()
        .flat_map(|op| op.polyhedron.parts().iter().cloned())
        .collect();
    out.push(BubblingOp {
        kind: tail[0].kind,
        polyhedron: Bouquet::of(parts),
    });
    Plan::new(plan.initial().clone(), out)
}
