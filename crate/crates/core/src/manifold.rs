//! Homology profiles of closed, connected, orientable manifolds.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::group::FGAbelianGroup;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldProfile {
    pub name: String,
    pub dim: usize,
    pub homology: Vec<FGAbelianGroup>,
    /// Smallest Euclidean dimension the manifold is asserted to embed in.
    /// Never verified.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embeds_in: Option<usize>,
}

/// Which duality law a profile breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    /// `homology` has the wrong number of entries.
    Length,
    /// `H_0` is not `Z`.
    Connected,
    /// `H_d` is not `Z`.
    Orientable,
    /// `rank H_k != rank H_{d-k}`.
    RankDuality,
    /// `T H_k` differs from `T H_{d-k-1}`.
    TorsionDuality,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub degree: usize,
    pub law: Law,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} at degree {}: {}",
            self.law, self.degree, self.detail
        )
    }
}

impl ManifoldProfile {
    pub fn new(name: impl Into<String>, homology: Vec<FGAbelianGroup>) -> Self {
        let dim = homology.len().saturating_sub(1);
        Self {
            name: name.into(),
            dim,
            homology,
            embeds_in: None,
        }
    }

    pub fn with_embedding(mut self, n: usize) -> Self {
        self.embeds_in = Some(n);
        self
    }

    /// `H_k`, trivial outside `0..=dim`.
    pub fn h(&self, k: usize) -> FGAbelianGroup {
        self.homology.get(k).cloned().unwrap_or_default()
    }

    /// Degrees strictly between 0 and the dimension.
    pub fn middle_degrees(&self) -> std::ops::Range<usize> {
        1..self.dim
    }

    pub fn has_torsion(&self) -> bool {
        self.homology.iter().any(|h| !h.is_free())
    }

    pub fn is_homology_sphere(&self) -> bool {
        self.middle_degrees().all(|k| self.homology[k].is_trivial())
    }

    pub fn validate(&self) -> Result<(), Violation> {
        let d = self.dim;
        let violation = |degree, law, detail: String| {
            Err(Violation {
                degree,
                law,
                detail,
            })
        };
        if self.homology.len() != d + 1 {
            return violation(
                0,
                Law::Length,
                format!("{} groups for dimension {d}", self.homology.len()),
            );
        }
        let z = FGAbelianGroup::free(1);
        if self.homology[0] != z {
            return violation(0, Law::Connected, format!("H_0 = {}", self.homology[0]));
        }
        if self.homology[d] != z {
            return violation(d, Law::Orientable, format!("H_{d} = {}", self.homology[d]));
        }
        for k in 0..=d {
            let (a, b) = (self.homology[k].rank(), self.homology[d - k].rank());
            if a != b {
                return violation(
                    k,
                    Law::RankDuality,
                    format!("rank H_{k} = {a} but rank H_{} = {b}", d - k),
                );
            }
        }
        for k in (0..d).rev() {
            let dual = d - k - 1;
            let (a, b) = (
                self.homology[k].torsion_part(),
                self.homology[dual].torsion_part(),
            );
            if a != b {
                return violation(
                    k,
                    Law::TorsionDuality,
                    format!("T H_{k} = {a} but T H_{dual} = {b}"),
                );
            }
        }
        Ok(())
    }

    pub fn validated(self) -> Result<Self, Error> {
        match self.validate() {
            Ok(()) => Ok(self),
            Err(violation) => Err(Error::InvalidProfile {
                name: self.name,
                violation,
            }),
        }
    }

    pub fn sphere(d: usize) -> Self {
        let mut homology = vec![FGAbelianGroup::trivial(); d + 1];
        homology[0] = FGAbelianGroup::free(1);
        homology[d] = FGAbelianGroup::free(1);
        if d == 0 {
            // S^0 is two points; it is not connected and never a valid part.
            homology[0] = FGAbelianGroup::free(2);
        }
        Self::new(format!("S^{d}"), homology).with_embedding(d + 1)
    }

    pub fn lens(p: u64) -> Self {
        let z = FGAbelianGroup::free(1);
        Self::new(
            format!("L({p})"),
            vec![
                z.clone(),
                FGAbelianGroup::cyclic(p),
                FGAbelianGroup::trivial(),
                z,
            ],
        )
        .with_embedding(5)
    }

    /// Sum of two profiles of the same dimension: middle degrees add.
    pub fn connected_sum(&self, other: &Self) -> Result<Self, Error> {
        if self.dim != other.dim || self.dim == 0 {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let d = self.dim;
        let homology = (0..=d)
            .map(|k| {
                if k == 0 || k == d {
                    FGAbelianGroup::free(1)
                } else {
                    self.h(k).direct_sum(&other.h(k))
                }
            })
            .collect();
        let embeds_in = match (self.embeds_in, other.embeds_in) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        Ok(Self {
            name: format!("{}#{}", self.name, other.name),
            dim: d,
            homology,
            embeds_in,
        })
    }

    /// The `(2a + k2)`-manifold obtained from an odd-dimensional `self` whose
    /// only middle homology sits in degree `a`; that group reappears in degrees
    /// `a` and `a + k2 - 1`.
    pub fn sphere_bundle_transform(&self, k2: usize) -> Result<Self, Error> {
        let bad = |why: String| Err(Error::TransformHypothesis(why));
        if self.dim.is_multiple_of(2) || self.dim < 3 {
            return bad(format!("dimension {} is not odd and at least 3", self.dim));
        }
        if k2 < 2 {
            return bad(format!("k2 = {k2} places both copies in one degree"));
        }
        let a = (self.dim - 1) / 2;
        if let Some(j) = self
            .middle_degrees()
            .find(|&j| j != a && !self.homology[j].is_trivial())
        {
            return bad(format!("H_{j} = {} must vanish", self.homology[j]));
        }
        let dim = 2 * a + k2;
        let mut homology = vec![FGAbelianGroup::trivial(); dim + 1];
        homology[0] = FGAbelianGroup::free(1);
        homology[dim] = FGAbelianGroup::free(1);
        homology[a] = self.homology[a].clone();
        homology[a + k2 - 1] = self.homology[a].clone();
        let name = format!("S({},{k2})[{}]", self.dim, self.name);
        Self {
            name,
            dim,
            homology,
            embeds_in: None,
        }
        .validated()
    }
}

/// Builtin manifold families usable as catalog entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ManifoldSpec {
    Sphere(usize),
    Lens(u64),
    /// Simply connected 5-manifold with `H_2 = T` finite.
    Barden5(FGAbelianGroup),
    /// 2-connected 7-manifold with `H_3 = T` finite.
    Crowley7(FGAbelianGroup),
}

impl ManifoldSpec {
    pub fn profile(&self) -> Result<ManifoldProfile, Error> {
        let z = FGAbelianGroup::free(1);
        let zero = FGAbelianGroup::trivial;
        let profile = match self {
            ManifoldSpec::Sphere(d) if *d >= 1 => ManifoldProfile::sphere(*d),
            ManifoldSpec::Sphere(_) => return Err(Error::UnknownBuiltin("sphere:0".into())),
            ManifoldSpec::Lens(p) if *p >= 2 => ManifoldProfile::lens(*p),
            ManifoldSpec::Lens(p) => return Err(Error::UnknownBuiltin(format!("lens:{p}"))),
            ManifoldSpec::Barden5(t) | ManifoldSpec::Crowley7(t) if !t.is_finite() => {
                return Err(Error::UnknownBuiltin(format!("{t} is not finite")));
            }
            ManifoldSpec::Barden5(t) => ManifoldProfile::new(
                format!("B5({t})"),
                vec![z.clone(), zero(), t.clone(), zero(), zero(), z],
            ),
            ManifoldSpec::Crowley7(t) => ManifoldProfile::new(
                format!("C7({t})"),
                vec![
                    z.clone(),
                    zero(),
                    zero(),
                    t.clone(),
                    zero(),
                    zero(),
                    zero(),
                    z,
                ],
            ),
        };
        profile.validated()
    }
}

/// `sphere:d`, `lens:p`, `barden5:<group>`, `crowley7:<group>`.
impl FromStr for ManifoldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let unknown = || Error::UnknownBuiltin(s.to_string());
        let (kind, arg) = s.trim().split_once(':').ok_or_else(unknown)?;
        match kind.trim() {
            "sphere" => arg
                .trim()
                .parse()
                .map(ManifoldSpec::Sphere)
                .map_err(|_| unknown()),
            "lens" => arg
                .trim()
                .parse()
                .map(ManifoldSpec::Lens)
                .map_err(|_| unknown()),
            "barden5" => Ok(ManifoldSpec::Barden5(arg.parse()?)),
            "crowley7" => Ok(ManifoldSpec::Crowley7(arg.parse()?)),
            _ => Err(unknown()),
        }
    }
}

/// The generating polyhedron of a bubbling operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bouquet {
    Point,
    Parts(Vec<ManifoldProfile>),
}

impl Bouquet {
    pub fn parts(&self) -> &[ManifoldProfile] {
        match self {
            Bouquet::Point => &[],
            Bouquet::Parts(p) => p,
        }
    }

    /// A bouquet of the given parts, or the point when there are none.
    pub fn of(parts: Vec<ManifoldProfile>) -> Self {
        if parts.is_empty() {
            Bouquet::Point
        } else {
            Bouquet::Parts(parts)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FGAbelianGroup {
        s.parse().unwrap()
    }

    fn gs(list: &[&str]) -> Vec<FGAbelianGroup> {
        list.iter().map(|s| g(s)).collect()
    }

    fn spec(s: &str) -> ManifoldProfile {
        s.parse::<ManifoldSpec>().unwrap().profile().unwrap()
    }

    #[test]
    fn validate_examples() {
        assert_eq!(ManifoldProfile::lens(5).validate(), Ok(()));
        let bad = ManifoldProfile::new("bad", gs(&["Z", "0", "Z_2", "Z"]));
        let v = bad.validate().unwrap_err();
        assert_eq!((v.degree, v.law), (2, Law::TorsionDuality));
        assert!(v.detail.contains("T H_0 = 0"));
        assert_eq!(ManifoldProfile::sphere(4).validate(), Ok(()));
    }

    #[test]
    fn validate_other_laws() {
        let v = ManifoldProfile::new("x", gs(&["Z", "Z", "0", "Z"]))
            .validate()
            .unwrap_err();
        assert_eq!(v.law, Law::RankDuality);
        let v = ManifoldProfile::new("x", gs(&["Z^2", "0", "Z"]))
            .validate()
            .unwrap_err();
        assert_eq!(v.law, Law::Connected);
        let v = ManifoldProfile::new("x", gs(&["Z", "0", "Z_2"]))
            .validate()
            .unwrap_err();
        assert_eq!(v.law, Law::Orientable);
        let mut p = ManifoldProfile::lens(3);
        p.dim = 4;
        assert_eq!(p.validate().unwrap_err().law, Law::Length);
        // T H_{d-1} must vanish.
        let v = ManifoldProfile::new("x", gs(&["Z", "0", "Z_3", "Z"]))
            .validate()
            .unwrap_err();
        assert_eq!(v.law, Law::TorsionDuality);
    }

    #[test]
    fn catalog_builtins() {
        assert_eq!(spec("lens:25").homology, gs(&["Z", "Z_25", "0", "Z"]));
        assert_eq!(spec("lens:25").embeds_in, Some(5));
        assert_eq!(spec("sphere:2").homology, gs(&["Z", "0", "Z"]));
        assert_eq!(spec("sphere:2").embeds_in, Some(3));
        assert_eq!(
            spec("barden5:Z_3").homology,
            gs(&["Z", "0", "Z_3", "0", "0", "Z"])
        );
        assert_eq!(spec("crowley7:Z_2").dim, 7);
        assert!("barden5:Z"
            .parse::<ManifoldSpec>()
            .unwrap()
            .profile()
            .is_err());
        assert!("lens:1".parse::<ManifoldSpec>().unwrap().profile().is_err());
        assert!("torus:2".parse::<ManifoldSpec>().is_err());
    }

    #[test]
    fn connected_sum_examples() {
        let s = ManifoldProfile::lens(3)
            .connected_sum(&ManifoldProfile::lens(5))
            .unwrap();
        assert_eq!(s.homology, gs(&["Z", "Z_15", "0", "Z"]));
        assert_eq!(s.validate(), Ok(()));
        let l = ManifoldProfile::lens(7);
        assert_eq!(
            l.connected_sum(&ManifoldProfile::sphere(3))
                .unwrap()
                .homology,
            l.homology
        );
        let s2s2 = ManifoldProfile::new("S2xS2", gs(&["Z", "0", "Z^2", "0", "Z"]));
        assert_eq!(s2s2.connected_sum(&s2s2).unwrap().h(2), g("Z^4"));
        assert!(l.connected_sum(&ManifoldProfile::sphere(2)).is_err());
    }

    #[test]
    fn sphere_bundle_examples() {
        let t = ManifoldProfile::lens(5).sphere_bundle_transform(2).unwrap();
        assert_eq!(t.dim, 4);
        assert_eq!(t.homology, gs(&["Z", "Z_5", "Z_5", "0", "Z"]));
        let t = ManifoldProfile::lens(7).sphere_bundle_transform(3).unwrap();
        assert_eq!(t.homology, gs(&["Z", "Z_7", "0", "Z_7", "0", "Z"]));
        let t = ManifoldProfile::sphere(3)
            .sphere_bundle_transform(2)
            .unwrap();
        assert_eq!(t.homology, gs(&["Z", "0", "0", "0", "Z"]));
    }

    #[test]
    fn sphere_bundle_rejections() {
        assert!(ManifoldProfile::lens(5).sphere_bundle_transform(1).is_err());
        assert!(ManifoldProfile::sphere(4)
            .sphere_bundle_transform(2)
            .is_err());
        let b = spec("barden5:Z_3");
        // a = 2 but H_2 is the only non-trivial middle group, so B5 qualifies.
        assert_eq!(b.sphere_bundle_transform(2).unwrap().homology[2], g("Z_3"));
        let bad = ManifoldProfile::new("x", gs(&["Z", "Z_2", "0", "Z_2", "0", "Z"]));
        assert!(bad.sphere_bundle_transform(2).is_err());
    }
}
