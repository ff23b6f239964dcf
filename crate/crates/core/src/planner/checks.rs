//! Necessary conditions a target family must meet to be realizable.

use std::collections::BTreeSet;
use std::fmt;

use num_prime::nt_funcs::factorize64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::group::FGAbelianGroup;
use crate::subgroups::{count_subgroups_isomorphic_to, SubgroupCount};
use crate::target::TargetFamily;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Status {
    Consistent,
    Infeasible,
    HypothesisNotMet,
    Unverifiable,
}

/// Which condition a verdict is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// `G_0` trivial and `G_n` non-trivial.
    Structure,
    /// `G_{n-1}` is free.
    CodimOneFree,
    /// `G_n` is free.
    TopDegreeFree,
    SingleTorsionDegree,
    TwoTorsionDegrees,
    ThreeTorsionDegrees,
    PrimePowerWindows,
    SubgroupFamily,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("unit variant serializes to a string"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub theorem: Check,
    pub witness: String,
}

impl Verdict {
    fn new(status: Status, theorem: Check, witness: impl Into<String>) -> Self {
        Self {
            status,
            theorem,
            witness: witness.into(),
        }
    }
}

/// How "`A` is a summand of `B`" is read when comparing two target groups.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SummandReading {
    /// Compare torsion parts only. Sound for every realizable target.
    #[default]
    Torsion,
    /// Compare the groups with their free parts. Flags some realizable
    /// targets; kept for comparison.
    FullGroup,
}

impl SummandReading {
    fn is_summand(self, a: &FGAbelianGroup, b: &FGAbelianGroup) -> bool {
        match self {
            SummandReading::Torsion => a.torsion_part().is_summand_of(&b.torsion_part()),
            SummandReading::FullGroup => a.is_summand_of(b),
        }
    }
}

pub fn necessary_conditions(t: &TargetFamily) -> Vec<Verdict> {
    necessary_conditions_with(t, SummandReading::Torsion)
}

/// Runs the structural checks, then the torsion-degree check matching the
/// size of the torsion support (one, two or three degrees). A check whose
/// shape does not match the target produces no verdict.
pub fn necessary_conditions_with(t: &TargetFamily, reading: SummandReading) -> Vec<Verdict> {
    let n = t.n();
    let mut out = Vec::new();

    let top_minus_one = t.g(n - 1).torsion_part();
    out.push(if top_minus_one.is_trivial() {
        Verdict::new(
            Status::Consistent,
            Check::CodimOneFree,
            format!("G_{} is free", n - 1),
        )
    } else {
        Verdict::new(
            Status::Infeasible,
            Check::CodimOneFree,
            format!(
                "T G_{} = {top_minus_one} but G_{} must be free",
                n - 1,
                n - 1
            ),
        )
    });
    let top = t.g(n).torsion_part();
    out.push(if top.is_trivial() {
        Verdict::new(
            Status::Consistent,
            Check::TopDegreeFree,
            format!("G_{n} is free"),
        )
    } else {
        Verdict::new(
            Status::Infeasible,
            Check::TopDegreeFree,
            format!("T G_{n} = {top} but G_{n} must be free"),
        )
    });
    let issues = t.structural_issues();
    out.push(if issues.is_empty() {
        Verdict::new(
            Status::Consistent,
            Check::Structure,
            "G_0 trivial and G_n non-trivial",
        )
    } else {
        Verdict::new(Status::Infeasible, Check::Structure, issues.join("; "))
    });

    let support = t.torsion_support();
    match support[..] {
        [j] => out.push(single_torsion_degree(t, j)),
        [j1, j2] if j1 > 0 && j2 < n => out.push(two_torsion_degrees(t, j1, j2, reading)),
        [j1, j2, j3] if j1 >= 1 && j3 < n => out.extend(three_torsion_degrees(t, j1, j2, j3)),
        _ => {}
    }
    out
}

fn single_torsion_degree(t: &TargetFamily, j: usize) -> Verdict {
    let n = t.n() as isize;
    let ji = j as isize;
    let low = 2 * ji - n + 1;
    let fail = |w: String| Verdict::new(Status::Infeasible, Check::SingleTorsionDegree, w);
    if ji >= n - 1 {
        return fail(format!("torsion degree j = {j} but j < n - 1 = {}", n - 1));
    }
    if low <= 0 {
        return fail(format!(
            "2j - n + 1 = 2*{j} - {n} + 1 = {low} is not positive"
        ));
    }
    if t.rank_at(low) == 0 {
        return fail(format!("rank G_{low} = 0 (degree 2j - n + 1 for j = {j})"));
    }
    Verdict::new(
        Status::Consistent,
        Check::SingleTorsionDegree,
        format!("j = {j}, rank G_{low} = {}", t.rank_at(low)),
    )
}

fn two_torsion_degrees(t: &TargetFamily, j1: usize, j2: usize, reading: SummandReading) -> Verdict {
    let n = t.n();
    let fail = |w: String| Verdict::new(Status::Infeasible, Check::TwoTorsionDegrees, w);
    if j2 >= n - 1 {
        return fail(format!(
            "torsion degrees {j1}, {j2} but both must be < n - 1 = {}",
            n - 1
        ));
    }
    let (g1, g2) = (t.g(j1), t.g(j2));
    let mut fired = false;
    for (a, b, ja, jb) in [(&g1, &g2, j1, j2), (&g2, &g1, j2, j1)] {
        if reading.is_summand(a, b) {
            continue;
        }
        fired = true;
        let low = 2 * ja as isize - n as isize + 1;
        if low <= 0 {
            return fail(format!(
                "G_{ja} = {a} is not a summand of G_{jb} = {b}, so 2n - 2j - 1 = {} must be < n = {n}",
                2 * n as isize - 2 * ja as isize - 1
            ));
        }
        if t.rank_at(low) == 0 {
            return fail(format!(
                "G_{ja} = {a} is not a summand of G_{jb} = {b}, so rank G_{low} must be positive"
            ));
        }
    }
    if fired {
        let positive = t.positive_rank_degrees(0..=n);
        if positive.len() < 2 {
            return fail(format!(
                "only degrees {positive:?} have positive rank; need at least 2"
            ));
        }
    }
    Verdict::new(
        Status::Consistent,
        Check::TwoTorsionDegrees,
        format!("torsion degrees {j1} and {j2} satisfy the window conditions"),
    )
}

fn three_torsion_degrees(t: &TargetFamily, j1: usize, j2: usize, j3: usize) -> Option<Verdict> {
    let (t1, t3) = (t.g(j1).torsion_part(), t.g(j3).torsion_part());
    if t1 == t3 && 2 * j2 == j1 + j3 {
        return None;
    }
    let positive = t.positive_rank_degrees(1..=t.n() - 1);
    let why = if t1 != t3 {
        format!("T G_{j1} = {t1} differs from T G_{j3} = {t3}")
    } else {
        format!("2*{j2} != {j1} + {j3}")
    };
    Some(if positive.len() >= 2 {
        Verdict::new(
            Status::Consistent,
            Check::ThreeTorsionDegrees,
            format!("{why}; degrees {positive:?} have positive rank"),
        )
    } else {
        Verdict::new(
            Status::Infeasible,
            Check::ThreeTorsionDegrees,
            format!(
                "{why}, so two of G_1..G_{} need positive rank; found {positive:?}",
                t.n() - 1
            ),
        )
    })
}

/// Disjoint non-empty sets of prime powers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPartition")]
pub struct PrimePowerPartition {
    sets: Vec<BTreeSet<u64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPartition {
    sets: Vec<BTreeSet<u64>>,
}

impl TryFrom<RawPartition> for PrimePowerPartition {
    type Error = Error;

    fn try_from(raw: RawPartition) -> Result<Self, Error> {
        PrimePowerPartition::new(raw.sets)
    }
}

impl PrimePowerPartition {
    pub fn new(sets: Vec<BTreeSet<u64>>) -> Result<Self, Error> {
        let bad = |s: String| Err(Error::MalformedPartition(s));
        if sets.is_empty() {
            return bad("no sets".into());
        }
        let mut seen = BTreeSet::new();
        for (i, set) in sets.iter().enumerate() {
            if set.is_empty() {
                return bad(format!("set {i} is empty"));
            }
            for &q in set {
                if q < 2 || factorize64(q).len() != 1 {
                    return bad(format!("{q} is not a prime power"));
                }
                if !seen.insert(q) {
                    return bad(format!("{q} appears in two sets"));
                }
            }
        }
        Ok(Self { sets })
    }

    pub fn sets(&self) -> &[BTreeSet<u64>] {
        &self.sets
    }
}

/// For each set `A`, the degrees whose group has a cyclic factor with order in
/// `A` must be ordered set after set; then each set forces positive rank in
/// the window `[2 min - n + 1, 2 max - n + 1]`.
pub fn check_prime_power_windows(t: &TargetFamily, partition: &PrimePowerPartition) -> Verdict {
    let n = t.n() as isize;
    let tag = Check::PrimePowerWindows;
    let degrees: Vec<Vec<usize>> = partition
        .sets
        .iter()
        .map(|set| {
            (0..=t.n())
                .filter(|&j| set.iter().any(|&q| t.g(j).has_factor_of_order(q)))
                .collect()
        })
        .collect();
    if let Some(i) = degrees.iter().position(Vec::is_empty) {
        return Verdict::new(
            Status::HypothesisNotMet,
            tag,
            format!(
                "no group has a cyclic factor of order in set {i} {:?}",
                partition.sets[i]
            ),
        );
    }
    for (i, pair) in degrees.windows(2).enumerate() {
        let (hi, lo) = (pair[0].last().unwrap(), pair[1][0]);
        if *hi >= lo {
            return Verdict::new(
                Status::HypothesisNotMet,
                tag,
                format!(
                    "max of degrees for set {i} is {hi}, not below min {lo} for set {}",
                    i + 1
                ),
            );
        }
    }
    for (i, ds) in degrees.iter().enumerate() {
        let lo = (2 * ds[0] as isize - n + 1).max(1);
        let hi = (2 * *ds.last().unwrap() as isize - n + 1).min(n - 1);
        if !(lo..=hi).any(|j| t.rank_at(j) > 0) {
            return Verdict::new(
                Status::Infeasible,
                tag,
                format!(
                    "set {i} sits in degrees {ds:?}; no degree in [{lo}, {hi}] has positive rank"
                ),
            );
        }
    }
    let positive = t.positive_rank_degrees(0..=t.n());
    if positive.len() < degrees.len() {
        return Verdict::new(
            Status::Infeasible,
            tag,
            format!(
                "{} sets need as many positive-rank degrees; found {positive:?}",
                degrees.len()
            ),
        );
    }
    Verdict::new(Status::Consistent, tag, format!("degree sets {degrees:?}"))
}

/// Finite groups `H_j`, each paired with the set of degrees it should occupy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFamily")]
pub struct SubgroupFamily {
    pairs: Vec<SubgroupPair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupPair {
    pub group: FGAbelianGroup,
    pub degrees: BTreeSet<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    pairs: Vec<SubgroupPair>,
}

impl TryFrom<RawFamily> for SubgroupFamily {
    type Error = Error;

    fn try_from(raw: RawFamily) -> Result<Self, Error> {
        SubgroupFamily::new(raw.pairs)
    }
}

impl SubgroupFamily {
    pub fn new(pairs: Vec<SubgroupPair>) -> Result<Self, Error> {
        let bad = |s: String| Err(Error::MalformedFamily(s));
        if pairs.is_empty() {
            return bad("no pairs".into());
        }
        for (i, p) in pairs.iter().enumerate() {
            if !p.group.is_finite() || p.group.is_trivial() {
                return bad(format!(
                    "group {i} = {} is not finite and non-trivial",
                    p.group
                ));
            }
            if p.degrees.is_empty() {
                return bad(format!("degree set {i} is empty"));
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[SubgroupPair] {
        &self.pairs
    }
}

/// Checks the five hypotheses on `(H_j, A_j)` against the target and, when
/// they hold, that each `H_j` forces positive rank at some `2j' - n + 1`.
pub fn check_subgroup_family(
    t: &TargetFamily,
    family: &SubgroupFamily,
    order_bound: u64,
) -> Result<Verdict, Error> {
    let n = t.n();
    let tag = Check::SubgroupFamily;
    let unmet = |w: String| Ok(Verdict::new(Status::HypothesisNotMet, tag, w));
    let pairs = &family.pairs;
    if let Some(&d) = pairs
        .iter()
        .flat_map(|p| &p.degrees)
        .find(|&&d| d == 0 || d >= n)
    {
        return Err(Error::MalformedFamily(format!(
            "degree {d} outside 1..={}",
            n - 1
        )));
    }
    for (a, pa) in pairs.iter().enumerate() {
        for pb in &pairs[a + 1..] {
            if pa.group == pb.group {
                return unmet(format!("group {} is listed twice", pa.group));
            }
            if pa.degrees == pb.degrees {
                return unmet(format!("degree set {:?} is listed twice", pa.degrees));
            }
        }
    }
    let mut unbounded = Vec::new();
    for p in pairs {
        let h = &p.group;
        let summand_degrees: BTreeSet<usize> =
            (1..n).filter(|&j| h.is_summand_of(&t.g(j))).collect();
        if summand_degrees != p.degrees {
            return unmet(format!(
                "{h} is a summand exactly in degrees {summand_degrees:?}, not {:?}",
                p.degrees
            ));
        }
        for &j in &p.degrees {
            let rest = h
                .complement_in(&t.g(j).torsion_part())
                .expect("summand checked above");
            if h.shares_canonical_factor(&rest) {
                return unmet(format!(
                    "in degree {j}, {h} and its complement {rest} share a factor"
                ));
            }
            match count_subgroups_isomorphic_to(&t.g(j), h, order_bound)? {
                SubgroupCount::Exact(1) => {}
                SubgroupCount::Exact(c) => {
                    return unmet(format!(
                        "G_{j} has {c} subgroups isomorphic to {h}, not one"
                    ));
                }
                SubgroupCount::Unbounded => unbounded.push(j),
            }
        }
        if let Some(j) =
            (1..n).find(|j| !p.degrees.contains(j) && h.shares_canonical_factor(&t.g(*j)))
        {
            return unmet(format!(
                "G_{j} = {} shares a cyclic factor with {h}",
                t.g(j)
            ));
        }
        if p.degrees.len() % 2 == 0 {
            return unmet(format!("degree set {:?} has even size", p.degrees));
        }
    }
    if !unbounded.is_empty() {
        return Ok(Verdict::new(
            Status::Unverifiable,
            tag,
            format!("torsion in degrees {unbounded:?} exceeds the order bound {order_bound}"),
        ));
    }
    for p in pairs {
        let hit = p
            .degrees
            .iter()
            .map(|&j| 2 * j as isize - n as isize + 1)
            .find(|&d| t.rank_at(d) > 0);
        if hit.is_none() {
            return Ok(Verdict::new(
                Status::Infeasible,
                tag,
                format!(
                    "{} occupies degrees {:?} but G_(2j-n+1) has rank 0 for each of them",
                    p.group, p.degrees
                ),
            ));
        }
    }
    let positive = t.positive_rank_degrees(0..=n);
    if positive.len() < pairs.len() {
        return Ok(Verdict::new(
            Status::Infeasible,
            tag,
            format!(
                "{} groups need as many positive-rank degrees; found {positive:?}",
                pairs.len()
            ),
        ));
    }
    Ok(Verdict::new(
        Status::Consistent,
        tag,
        format!("{} group(s) placed", pairs.len()),
    ))
}
