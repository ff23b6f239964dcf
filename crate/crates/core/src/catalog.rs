//! Named collections of manifold profiles.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::group::FGAbelianGroup;
use crate::manifold::{ManifoldProfile, ManifoldSpec};

pub const DEFAULT_LENS_ORDERS: [u64; 5] = [2, 3, 5, 7, 25];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Catalog {
    entries: Vec<ManifoldProfile>,
}

impl Catalog {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Spheres of dimension 1 to 8, the lens spaces `L(2)`, `L(3)`, `L(5)`,
    /// `L(7)`, `L(25)`, two simply connected 5-manifolds and two 2-connected
    /// 7-manifolds with torsion, and the 4-manifolds `S(3,2)[L(p)]`.
    pub fn builtin() -> Self {
        let mut entries: Vec<ManifoldProfile> = (1..=8).map(ManifoldProfile::sphere).collect();
        entries.extend(
            DEFAULT_LENS_ORDERS
                .iter()
                .map(|&p| ManifoldProfile::lens(p)),
        );
        let templates = [
            ManifoldSpec::Barden5(FGAbelianGroup::cyclic(2)),
            ManifoldSpec::Barden5(FGAbelianGroup::cyclic(3).power(2)),
            ManifoldSpec::Crowley7(FGAbelianGroup::cyclic(2)),
            ManifoldSpec::Crowley7(FGAbelianGroup::cyclic(3)),
        ];
        entries.extend(
            templates
                .iter()
                .map(|t| t.profile().expect("builtin template is valid")),
        );
        entries.extend(DEFAULT_LENS_ORDERS.iter().map(|&p| {
            ManifoldProfile::lens(p)
                .sphere_bundle_transform(2)
                .expect("lens spaces satisfy the transform")
        }));
        Self { entries }
    }

    /// Checks every entry and rejects duplicate names.
    pub fn from_entries(entries: Vec<ManifoldProfile>) -> Result<Self, Error> {
        let mut catalog = Self::empty();
        for e in entries {
            catalog.add(e)?;
        }
        Ok(catalog)
    }

    pub fn entries(&self) -> &[ManifoldProfile] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, name: &str) -> Option<&ManifoldProfile> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn add(&mut self, profile: ManifoldProfile) -> Result<(), Error> {
        if self.get(&profile.name).is_some() {
            return Err(Error::DuplicateManifold(profile.name));
        }
        self.entries.push(profile.validated()?);
        Ok(())
    }

    /// Looks a name up in the catalog, falling back to the builtin spellings
    /// `S^d`, `L(p)`, `B5(T)`, `C7(T)`, `sphere:d`, `lens:p`, `barden5:T`,
    /// `crowley7:T` and transforms `S(k1,k2)[inner]`.
    pub fn resolve(&self, name: &str) -> Result<ManifoldProfile, Error> {
        if let Some(p) = self.get(name) {
            return Ok(p.clone());
        }
        let name = name.trim();
        if let Some(inner) = name.strip_prefix("S(").and_then(|r| r.strip_suffix(']')) {
            if let Some((ks, inner)) = inner.split_once(")[") {
                let (k1, k2) = ks
                    .split_once(',')
                    .ok_or(Error::UnknownManifold(name.into()))?;
                let k2: usize = k2
                    .trim()
                    .parse()
                    .map_err(|_| Error::UnknownManifold(name.into()))?;
                let base = self.resolve(inner)?;
                if k1.trim().parse::<usize>().ok() != Some(base.dim) {
                    return Err(Error::UnknownManifold(name.into()));
                }
                return base.sphere_bundle_transform(k2);
            }
        }
        let spec = if let Some(d) = name.strip_prefix("S^") {
            d.parse().ok().map(ManifoldSpec::Sphere)
        } else if let Some(p) = name.strip_prefix("L(").and_then(|r| r.strip_suffix(')')) {
            p.parse().ok().map(ManifoldSpec::Lens)
        } else if let Some(t) = name.strip_prefix("B5(").and_then(|r| r.strip_suffix(')')) {
            t.parse().ok().map(ManifoldSpec::Barden5)
        } else if let Some(t) = name.strip_prefix("C7(").and_then(|r| r.strip_suffix(')')) {
            t.parse().ok().map(ManifoldSpec::Crowley7)
        } else {
            name.parse().ok()
        };
        spec.ok_or_else(|| Error::UnknownManifold(name.into()))?
            .profile()
    }

    /// Each entry's validation verdict.
    pub fn validate_all(&self) -> Vec<(String, Result<(), crate::manifold::Violation>)> {
        self.entries
            .iter()
            .map(|e| (e.name.clone(), e.validate()))
            .collect()
    }
}
