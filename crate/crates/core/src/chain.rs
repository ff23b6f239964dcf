//! Finite cellular chain complexes over the integers and their homology.
//!
//! This module is deliberately independent of the homology profiles in
//! [`crate::manifold`]; it recomputes homology from boundary matrices so the
//! two can be checked against each other.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::group::FGAbelianGroup;
use crate::matrix::IntMatrix;
use crate::snf::smith_normal_form;

/// `boundaries[k - 1]` is the boundary map from degree `k` to degree `k - 1`,
/// a `dims[k - 1] x dims[k]` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawComplex")]
pub struct ChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<IntMatrix>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplex {
    dims: Vec<usize>,
    #[serde(default)]
    boundaries: Vec<IntMatrix>,
}

impl TryFrom<RawComplex> for ChainComplex {
    type Error = Error;

    fn try_from(raw: RawComplex) -> Result<Self, Error> {
        ChainComplex::new(raw.dims, raw.boundaries)
    }
}

impl ChainComplex {
    /// Checks shapes and `∂∂ = 0`. A boundary given with no rows (JSON `[]`)
    /// stands for the zero map of the implied shape; missing trailing
    /// boundaries are zero as well.
    pub fn new(dims: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self, Error> {
        if dims.is_empty() {
            return Err(Error::Complex("a complex needs at least degree 0".into()));
        }
        let top = dims.len() - 1;
        if boundaries.len() > top {
            return Err(Error::Complex(format!(
                "{} boundary maps for top degree {top}",
                boundaries.len()
            )));
        }
        let mut normalized = Vec::with_capacity(top);
        for k in 1..=top {
            let (rows, cols) = (dims[k - 1], dims[k]);
            let b = match boundaries.get(k - 1) {
                None => IntMatrix::zeros(rows, cols),
                Some(b) if b.rows() == 0 => {
                    if b.cols() != 0 && b.cols() != cols {
                        return Err(Error::Complex(format!("boundary {k} has wrong width")));
                    }
                    IntMatrix::zeros(rows, cols)
                }
                Some(b) => {
                    if (b.rows(), b.cols()) != (rows, cols) {
                        return Err(Error::Complex(format!(
                            "boundary {k} is {}x{}, expected {rows}x{cols}",
                            b.rows(),
                            b.cols()
                        )));
                    }
                    b.clone()
                }
            };
            normalized.push(b);
        }
        for k in 1..top {
            if !(&normalized[k - 1] * &normalized[k]).is_zero() {
                return Err(Error::Complex(format!(
                    "boundary {k} composed with boundary {} is non-zero",
                    k + 1
                )));
            }
        }
        Ok(Self {
            dims,
            boundaries: normalized,
        })
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// The boundary out of degree `k` (zero map for `k = 0`).
    pub fn boundary(&self, k: usize) -> IntMatrix {
        match k {
            0 => IntMatrix::zeros(0, self.dims[0]),
            k if k <= self.top_degree() => self.boundaries[k - 1].clone(),
            _ => IntMatrix::zeros(self.dims.get(k - 1).copied().unwrap_or(0), 0),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    pub fn homology(&self, k: usize) -> Result<FGAbelianGroup, Error> {
        let top = self.top_degree();
        if k > top {
            return Err(Error::DegreeOutOfRange { degree: k, top });
        }
        let outgoing = smith_normal_form(&self.boundary(k)).rank();
        let incoming = smith_normal_form(&self.boundary(k + 1));
        let rank = self.dims[k] - outgoing - incoming.rank();
        let torsion = FGAbelianGroup::from_invariant_factors(&incoming.invariant_factors())?;
        // from_invariant_factors sees only non-zero entries here, so it is pure torsion.
        Ok(torsion.direct_sum(&FGAbelianGroup::free(rank)))
    }

    pub fn homology_all(&self) -> Result<Vec<FGAbelianGroup>, Error> {
        (0..=self.top_degree()).map(|k| self.homology(k)).collect()
    }

    pub fn builtin(kind: Builtin) -> Result<Self, Error> {
        match kind {
            Builtin::Point => Self::new(vec![1], vec![]),
            Builtin::Sphere(0) => Self::new(vec![2], vec![]),
            Builtin::Sphere(1) => Self::new(
                vec![2, 2],
                vec![IntMatrix::from_rows(&[vec![-1i64, 1], vec![1, -1]])?],
            ),
            Builtin::Sphere(d) => {
                let mut dims = vec![0; d + 1];
                dims[0] = 1;
                dims[d] = 1;
                Self::new(dims, vec![])
            }
            Builtin::Lens(p) if p < 2 => Err(Error::UnknownBuiltin(format!("lens:{p}"))),
            Builtin::Lens(p) => Self::new(
                vec![1, 1, 1, 1],
                vec![
                    IntMatrix::zeros(1, 1),
                    IntMatrix::from_rows(&[vec![BigInt::from(p)]])?,
                    IntMatrix::zeros(1, 1),
                ],
            ),
        }
    }

    /// Cellular chains of the product, with `∂(a⊗b) = ∂a⊗b + (-1)^{|a|} a⊗∂b`.
    #[allow(clippy::needless_range_loop)]
    pub fn tensor(&self, other: &Self) -> Self {
        let top = self.top_degree() + other.top_degree();
        // offsets[k][i] = position of the (i, k - i) block inside degree k.
        let mut dims = vec![0usize; top + 1];
        let mut offsets = vec![vec![0usize; self.dims.len()]; top + 1];
        for (k, dim) in dims.iter_mut().enumerate() {
            for i in 0..=self.top_degree().min(k) {
                let j = k - i;
                if j > other.top_degree() {
                    continue;
                }
                offsets[k][i] = *dim;
                *dim += self.dims[i] * other.dims[j];
            }
        }
        let mut boundaries = Vec::with_capacity(top);
        for k in 1..=top {
            let mut b = IntMatrix::zeros(dims[k - 1], dims[k]);
            for i in 0..=self.top_degree().min(k) {
                let j = k - i;
                if j > other.top_degree() {
                    continue;
                }
                let width = other.dims[j];
                for a in 0..self.dims[i] {
                    for c in 0..width {
                        let col = offsets[k][i] + a * width + c;
                        if i > 0 {
                            let da = &self.boundaries[i - 1];
                            let w = other.dims[j];
                            for a2 in 0..self.dims[i - 1] {
                                let coef = &da[(a2, a)];
                                if !coef.is_zero() {
                                    b[(offsets[k - 1][i - 1] + a2 * w + c, col)] += coef;
                                }
                            }
                        }
                        if j > 0 {
                            let db = &other.boundaries[j - 1];
                            let w = other.dims[j - 1];
                            for c2 in 0..w {
                                let coef = &db[(c2, c)];
                                if !coef.is_zero() {
                                    let row = offsets[k - 1][i] + a * w + c2;
                                    if i % 2 == 0 {
                                        b[(row, col)] += coef;
                                    } else {
                                        b[(row, col)] -= coef;
                                    }
                                }
                            }
                        }
                    }
                }
            }
            boundaries.push(b);
        }
        Self::new(dims, boundaries).expect("tensor product of complexes is a complex")
    }

    /// One-point union, identifying the first 0-cell of each complex.
    pub fn wedge(&self, other: &Self) -> Self {
        let top = self.top_degree().max(other.top_degree());
        let dim = |c: &Self, k: usize| c.dims.get(k).copied().unwrap_or(0);
        let mut dims: Vec<usize> = (0..=top).map(|k| dim(self, k) + dim(other, k)).collect();
        let shared = usize::from(self.dims[0] > 0 && other.dims[0] > 0);
        dims[0] -= shared;

        // Row index of a 0-cell of `other` after merging.
        let other_vertex = |r: usize| {
            if shared == 1 && r == 0 {
                0
            } else {
                self.dims[0] + r - shared
            }
        };
        let mut boundaries = Vec::with_capacity(top);
        for k in 1..=top {
            let mut b = IntMatrix::zeros(dims[k - 1], dims[k]);
            if k <= self.top_degree() {
                let src = &self.boundaries[k - 1];
                for r in 0..src.rows() {
                    for c in 0..src.cols() {
                        b[(r, c)] += &src[(r, c)];
                    }
                }
            }
            if k <= other.top_degree() {
                let src = &other.boundaries[k - 1];
                let col0 = dim(self, k);
                for r in 0..src.rows() {
                    let row = if k == 1 {
                        other_vertex(r)
                    } else {
                        dim(self, k - 1) + r
                    };
                    for c in 0..src.cols() {
                        b[(row, col0 + c)] += &src[(r, c)];
                    }
                }
            }
            boundaries.push(b);
        }
        Self::new(dims, boundaries).expect("wedge of complexes is a complex")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    Point,
    Sphere(usize),
    Lens(u64),
}

/// Accepts `point`, `sphere:d`, `lens:p`, and the catalog spellings `S^d`, `L(p)`.
impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let unknown = || Error::UnknownBuiltin(s.to_string());
        let t = s.trim();
        if t == "point" {
            return Ok(Builtin::Point);
        }
        if let Some(d) = t.strip_prefix("sphere:").or_else(|| t.strip_prefix("S^")) {
            return d.trim().parse().map(Builtin::Sphere).map_err(|_| unknown());
        }
        let lens = t
            .strip_prefix("lens:")
            .or_else(|| t.strip_prefix("L(").and_then(|r| r.strip_suffix(')')));
        if let Some(p) = lens {
            let p: u64 = p.trim().parse().map_err(|_| unknown())?;
            if p < 2 {
                return Err(unknown());
            }
            return Ok(Builtin::Lens(p));
        }
        Err(unknown())
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Point => f.write_str("point"),
            Builtin::Sphere(d) => write!(f, "sphere:{d}"),
            Builtin::Lens(p) => write!(f, "lens:{p}"),
        }
    }
}
