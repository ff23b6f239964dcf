//! JSON form of plans, with manifold names resolved through a catalog.
//!
//! ```json
//! {"n": 5, "initial": "disc",
//!  "ops": [{"kind": "trivial-M", "bouquet": ["L(25)", {"name": "X", ...}]},
//!          {"kind": "trivial-S", "bouquet": "point"}],
//!  "ledger": [...]}
//! ```

use std::fmt;

use serde::de::{self, MapAccess, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bubbling::{initial_disc_state, BubblingOp, Ledger, OpKind, Plan, ReebState};
use crate::catalog::Catalog;
use crate::error::Error;
use crate::manifold::{Bouquet, ManifoldProfile};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanDocument {
    pub n: usize,
    pub initial: Initial,
    pub ops: Vec<OpDocument>,
    /// Checked against the replay when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ledger: Option<Ledger>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Initial {
    Disc,
    State(ReebState),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpDocument {
    pub kind: OpKind,
    pub bouquet: BouquetDocument,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BouquetDocument {
    Point,
    Parts(Vec<PartRef>),
}

/// A catalog name or an inline profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartRef {
    Name(String),
    Inline(ManifoldProfile),
}

impl PlanDocument {
    /// Names every part that the catalog resolves to an identical profile.
    pub fn from_plan(plan: &Plan, catalog: &Catalog) -> Self {
        let initial = if *plan.initial() == initial_disc_state(plan.n()) {
            Initial::Disc
        } else {
            Initial::State(plan.initial().clone())
        };
        let ops = plan
            .ops()
            .iter()
            .map(|op| OpDocument {
                kind: op.kind,
                bouquet: match &op.polyhedron {
                    Bouquet::Point => BouquetDocument::Point,
                    Bouquet::Parts(parts) => BouquetDocument::Parts(
                        parts
                            .iter()
                            .map(|p| PartRef::describe(p, catalog))
                            .collect(),
                    ),
                },
            })
            .collect();
        Self {
            n: plan.n(),
            initial,
            ops,
            ledger: Some(plan.ledger().clone()),
        }
    }

    pub fn to_plan(&self, catalog: &Catalog) -> Result<Plan, Error> {
        let initial = match &self.initial {
            Initial::Disc if self.n == 0 => {
                return Err(Error::StateLength {
                    expected: 1,
                    found: 0,
                })
            }
            Initial::Disc => initial_disc_state(self.n),
            Initial::State(s) if s.n() != self.n => {
                return Err(Error::TargetMismatch(self.n, s.n()))
            }
            Initial::State(s) => s.clone(),
        };
        let ops = self
            .ops
            .iter()
            .enumerate()
            .map(|(index, op)| {
                op.resolve(catalog).map_err(|e| Error::InvalidOp {
                    index,
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        match &self.ledger {
            Some(l) => Plan::with_ledger(initial, ops, l),
            None => Plan::new(initial, ops),
        }
    }
}

impl OpDocument {
    fn resolve(&self, catalog: &Catalog) -> Result<BubblingOp, Error> {
        let polyhedron = match &self.bouquet {
            BouquetDocument::Point => Bouquet::Point,
            BouquetDocument::Parts(parts) => Bouquet::of(
                parts
                    .iter()
                    .map(|p| match p {
                        PartRef::Name(name) => catalog.resolve(name),
                        PartRef::Inline(profile) => Ok(profile.clone()),
                    })
                    .collect::<Result<_, _>>()?,
            ),
        };
        Ok(BubblingOp {
            kind: self.kind,
            polyhedron,
        })
    }
}

impl PartRef {
    fn describe(p: &ManifoldProfile, catalog: &Catalog) -> Self {
        match catalog.resolve(&p.name) {
            Ok(found) if found == *p => PartRef::Name(p.name.clone()),
            _ => PartRef::Inline(p.clone()),
        }
    }
}

impl Serialize for Initial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Initial::Disc => s.serialize_str("disc"),
            Initial::State(state) => state.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Initial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Initial;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("\"disc\" or a state {n, homology}")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Initial, E> {
                match v {
                    "disc" => Ok(Initial::Disc),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
            fn visit_map<A: MapAccess<'de>>(self, map: A) -> Result<Initial, A::Error> {
                ReebState::deserialize(de::value::MapAccessDeserializer::new(map))
                    .map(Initial::State)
            }
        }
        d.deserialize_any(V)
    }
}

impl Serialize for BouquetDocument {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            BouquetDocument::Point => s.serialize_str("point"),
            BouquetDocument::Parts(parts) => parts.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for BouquetDocument {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = BouquetDocument;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("\"point\" or a list of manifold names and profiles")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<BouquetDocument, E> {
                match v {
                    "point" => Ok(BouquetDocument::Point),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
            fn visit_seq<A: SeqAccess<'de>>(self, seq: A) -> Result<BouquetDocument, A::Error> {
                let parts =
                    Vec::<PartRef>::deserialize(de::value::SeqAccessDeserializer::new(seq))?;
                Ok(if parts.is_empty() {
                    BouquetDocument::Point
                } else {
                    BouquetDocument::Parts(parts)
                })
            }
        }
        d.deserialize_any(V)
    }
}

impl Serialize for PartRef {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            PartRef::Name(name) => s.serialize_str(name),
            PartRef::Inline(p) => p.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for PartRef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = PartRef;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a manifold name or an inline profile")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<PartRef, E> {
                Ok(PartRef::Name(v.to_string()))
            }
            fn visit_map<A: MapAccess<'de>>(self, map: A) -> Result<PartRef, A::Error> {
                ManifoldProfile::deserialize(de::value::MapAccessDeserializer::new(map))
                    .map(PartRef::Inline)
            }
        }
        d.deserialize_any(V)
    }
}
