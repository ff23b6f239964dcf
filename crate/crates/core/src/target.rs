//! Target families `G_0..G_n`: the degreewise growth a plan should produce.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::group::FGAbelianGroup;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTarget")]
pub struct TargetFamily {
    n: usize,
    groups: Vec<FGAbelianGroup>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTarget {
    n: usize,
    groups: Vec<FGAbelianGroup>,
}

impl TryFrom<RawTarget> for TargetFamily {
    type Error = Error;

    fn try_from(raw: RawTarget) -> Result<Self, Error> {
        TargetFamily::new(raw.n, raw.groups)
    }
}

impl TargetFamily {
    /// Only the length is enforced here; see [`TargetFamily::structural_issues`].
    pub fn new(n: usize, groups: Vec<FGAbelianGroup>) -> Result<Self, Error> {
        if n == 0 || groups.len() != n + 1 {
            return Err(Error::StateLength {
                expected: n + 1,
                found: groups.len(),
            });
        }
        Ok(Self { n, groups })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn groups(&self) -> &[FGAbelianGroup] {
        &self.groups
    }

    /// `G_j`, trivial above `n`.
    pub fn g(&self, j: usize) -> FGAbelianGroup {
        self.groups.get(j).cloned().unwrap_or_default()
    }

    pub fn rank(&self, j: usize) -> usize {
        self.groups.get(j).map_or(0, FGAbelianGroup::rank)
    }

    /// Rank at a possibly negative or out-of-range degree; zero there.
    pub fn rank_at(&self, j: isize) -> usize {
        usize::try_from(j).map_or(0, |j| self.rank(j))
    }

    pub fn is_free(&self) -> bool {
        self.groups.iter().all(FGAbelianGroup::is_free)
    }

    /// Degrees whose group has a non-trivial torsion part, ascending.
    pub fn torsion_support(&self) -> Vec<usize> {
        (0..=self.n)
            .filter(|&j| !self.groups[j].is_free())
            .collect()
    }

    /// Degrees in `range` with positive rank.
    pub fn positive_rank_degrees(&self, range: std::ops::RangeInclusive<usize>) -> Vec<usize> {
        range.filter(|&j| self.rank(j) > 0).collect()
    }

    /// Violations of `G_0 = 0` and `G_n != 0`, one message each.
    pub fn structural_issues(&self) -> Vec<String> {
        let mut issues = Vec::new();
        if !self.groups[0].is_trivial() {
            issues.push(format!("G_0 = {} is not trivial", self.groups[0]));
        }
        if self.groups[self.n].is_trivial() {
            issues.push(format!("G_{} is trivial", self.n));
        }
        issues
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_accessors() {
        let t: TargetFamily =
            serde_json::from_str(r#"{"n":3,"groups":["0","Z^2","Z+Z_2",{"rank":2}]}"#).unwrap();
        assert_eq!(t.rank(1), 2);
        assert_eq!(t.rank_at(-1), 0);
        assert_eq!(t.torsion_support(), vec![2]);
        assert_eq!(t.positive_rank_degrees(1..=2), vec![1, 2]);
        assert!(t.structural_issues().is_empty());
        assert!(serde_json::from_str::<TargetFamily>(r#"{"n":3,"groups":["0"]}"#).is_err());
    }

    #[test]
    fn structural_issues_are_reported() {
        let t = TargetFamily::new(
            2,
            vec!["Z".parse().unwrap(), Default::default(), Default::default()],
        )
        .unwrap();
        assert_eq!(t.structural_issues().len(), 2);
    }
}
