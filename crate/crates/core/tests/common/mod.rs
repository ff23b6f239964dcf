#![allow(dead_code)]

use foldhom::bubbling::{BubblingOp, OpKind};
use foldhom::chain::{Builtin, ChainComplex};
use foldhom::matrix::IntMatrix;
use foldhom::{smith_normal_form, Catalog, FGAbelianGroup, ManifoldProfile, TargetFamily};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

pub fn g(s: &str) -> FGAbelianGroup {
    s.parse().unwrap()
}

pub fn target(list: &[&str]) -> TargetFamily {
    TargetFamily::new(list.len() - 1, list.iter().map(|s| g(s)).collect()).unwrap()
}

/// Small groups with torsion over the primes 2, 3, 5.
pub fn group(max_rank: usize) -> impl Strategy<Value = FGAbelianGroup> {
    let factor = (prop::sample::select(vec![2u64, 3, 5]), 1u32..=2, 1usize..=2);
    (0..=max_rank, prop::collection::vec(factor, 0..3))
        .prop_map(|(r, fs)| FGAbelianGroup::new(r, fs).unwrap())
}

pub fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (0..=max_dim, 0..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r).prop_map(move |rows| {
            if rows.is_empty() {
                IntMatrix::zeros(0, c)
            } else {
                IntMatrix::from_rows(&rows).unwrap()
            }
        })
    })
}

/// Catalog parts that an `n`-dimensional Reeb space accepts.
pub fn fitting_parts(catalog: &Catalog, n: usize) -> Vec<ManifoldProfile> {
    catalog
        .entries()
        .iter()
        .filter(|p| p.dim < n && p.embeds_in.is_none_or(|e| e <= n))
        .cloned()
        .collect()
}

/// An `n` in `2..=max_n` and operations drawn from the builtin catalog.
pub fn random_ops(max_n: usize, max_ops: usize) -> impl Strategy<Value = (usize, Vec<BubblingOp>)> {
    (2..=max_n).prop_flat_map(move |n| {
        let parts = fitting_parts(&Catalog::builtin(), n);
        let kinds = prop::sample::select(vec![
            OpKind::M,
            OpKind::S,
            OpKind::TrivialM,
            OpKind::TrivialS,
        ]);
        let op = (
            kinds,
            prop::collection::vec(prop::sample::select(parts), 0..4),
        )
            .prop_map(|(kind, parts)| BubblingOp::bouquet(kind, parts));
        (Just(n), prop::collection::vec(op, 0..=max_ops))
    })
}

// ---- Chain-level model of a bubbling operation ----

/// A chain complex as plain data, so pieces can be shifted and summed.
#[derive(Clone, Debug)]
pub struct Cells {
    pub dims: Vec<usize>,
    /// `bounds[k - 1]` is the boundary out of degree `k`.
    pub bounds: Vec<IntMatrix>,
}

impl Cells {
    pub fn from_complex(c: &ChainComplex) -> Self {
        let dims = c.dims().to_vec();
        let bounds = (1..dims.len()).map(|k| c.boundary(k)).collect();
        Self { dims, bounds }
    }

    pub fn point() -> Self {
        Self {
            dims: vec![1],
            bounds: vec![],
        }
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    fn padded(&self, top: usize) -> Self {
        let mut out = self.clone();
        while out.top() < top {
            let k = out.top() + 1;
            out.bounds.push(IntMatrix::zeros(out.dims[k - 1], 0));
            out.dims.push(0);
        }
        out
    }

    /// Moves every cell up by `s` degrees.
    pub fn shifted(&self, s: usize) -> Self {
        let mut dims = vec![0; s];
        dims.extend(&self.dims);
        let mut bounds: Vec<IntMatrix> = (1..=s).map(|k| IntMatrix::zeros(0, dims[k])).collect();
        bounds.extend(self.bounds.iter().cloned());
        Self { dims, bounds }
    }

    /// Degreewise direct sum with block-diagonal boundaries.
    pub fn sum(&self, other: &Self) -> Self {
        let top = self.top().max(other.top());
        let (a, b) = (self.padded(top), other.padded(top));
        let dims: Vec<usize> = a.dims.iter().zip(&b.dims).map(|(x, y)| x + y).collect();
        let bounds = (0..top)
            .map(|k| {
                let (ma, mb) = (&a.bounds[k], &b.bounds[k]);
                let mut m = IntMatrix::zeros(dims[k], dims[k + 1]);
                for i in 0..ma.rows() {
                    for j in 0..ma.cols() {
                        m[(i, j)] = ma[(i, j)].clone();
                    }
                }
                for i in 0..mb.rows() {
                    for j in 0..mb.cols() {
                        m[(ma.rows() + i, ma.cols() + j)] = mb[(i, j)].clone();
                    }
                }
                m
            })
            .collect();
        Self { dims, bounds }
    }

    /// Adds cells of degree `k` whose boundaries are the given columns.
    pub fn attach(&self, k: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut out = self.padded(k);
        let old = out.dims[k];
        out.dims[k] += columns.len();
        let prev = &out.bounds[k - 1];
        let mut m = IntMatrix::zeros(out.dims[k - 1], out.dims[k]);
        for i in 0..prev.rows() {
            for j in 0..prev.cols() {
                m[(i, j)] = prev[(i, j)].clone();
            }
        }
        for (c, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, old + c)] = x.clone();
            }
        }
        out.bounds[k - 1] = m;
        if k < out.top() {
            // Cells above k keep their boundaries; pad with zero rows for the new cells.
            let above = &out.bounds[k];
            let mut m = IntMatrix::zeros(out.dims[k], out.dims[k + 1]);
            for i in 0..above.rows() {
                for j in 0..above.cols() {
                    m[(i, j)] = above[(i, j)].clone();
                }
            }
            out.bounds[k] = m;
        }
        out
    }

    pub fn complex(&self) -> ChainComplex {
        ChainComplex::new(self.dims.clone(), self.bounds.clone()).unwrap()
    }

    pub fn homology(&self) -> Vec<FGAbelianGroup> {
        self.complex().homology_all().unwrap()
    }
}

/// A generator of the top-degree cycles of a closed, connected, orientable complex.
pub fn fundamental_cycle(c: &Cells) -> Vec<BigInt> {
    let d = c.top();
    let boundary = if d == 0 {
        IntMatrix::zeros(0, c.dims[0])
    } else {
        c.bounds[d - 1].clone()
    };
    let snf = smith_normal_form(&boundary);
    let r = snf.rank();
    assert_eq!(c.dims[d] - r, 1, "top-degree cycles must have rank 1");
    (0..c.dims[d]).map(|i| snf.v[(i, r)].clone()).collect()
}

/// The state complex after an operation whose parts have the given cell
/// structures: each part moves up by `n - dim`, the fundamental classes of
/// all parts are identified, and a point polyhedron adds a single `n`-cell.
pub fn bubble_cells(state: &Cells, n: usize, parts: &[Cells]) -> Cells {
    if parts.is_empty() {
        return state.attach(n, &[vec![]]);
    }
    let mut out = state.clone();
    let mut offsets = Vec::new();
    for p in parts {
        let shifted = p.shifted(n - p.top());
        offsets.push(out.padded(n).dims[n]);
        out = out.sum(&shifted);
    }
    let width = out.dims[n];
    let cycle = |i: usize| {
        let mut v = vec![BigInt::zero(); width];
        for (j, x) in fundamental_cycle(&parts[i]).into_iter().enumerate() {
            v[offsets[i] + j] = x;
        }
        v
    };
    let first = cycle(0);
    let glue: Vec<Vec<BigInt>> = (1..parts.len())
        .map(|i| first.iter().zip(cycle(i)).map(|(a, b)| a - b).collect())
        .collect();
    if glue.is_empty() {
        out
    } else {
        out.attach(n + 1, &glue)
    }
}

pub fn builtin_cells(b: Builtin) -> Cells {
    Cells::from_complex(&ChainComplex::builtin(b).unwrap())
}

// ---- Künneth formula over cyclic decompositions ----

/// Orders of a cyclic decomposition; 0 stands for `Z`.
pub fn cyclic_orders(g: &FGAbelianGroup) -> Vec<u64> {
    let mut out = vec![0; g.rank()];
    for f in g.torsion() {
        out.extend(std::iter::repeat_n(f.p.pow(f.e), f.m));
    }
    out
}

fn cyclic(order: u64) -> FGAbelianGroup {
    FGAbelianGroup::cyclic(order)
}

fn tensor_cyclic(a: u64, b: u64) -> FGAbelianGroup {
    match (a, b) {
        (0, 0) => cyclic(0),
        (0, x) | (x, 0) => cyclic(x),
        (x, y) => cyclic(x.gcd(&y)),
    }
}

fn tor_cyclic(a: u64, b: u64) -> FGAbelianGroup {
    match (a, b) {
        (0, _) | (_, 0) => FGAbelianGroup::trivial(),
        (x, y) => cyclic(x.gcd(&y)),
    }
}

pub fn kunneth(x: &[FGAbelianGroup], y: &[FGAbelianGroup]) -> Vec<FGAbelianGroup> {
    let top = x.len() + y.len() - 2;
    (0..=top)
        .map(|k| {
            let mut acc = FGAbelianGroup::trivial();
            for (i, xi) in x.iter().enumerate() {
                for (j, yj) in y.iter().enumerate() {
                    for a in cyclic_orders(xi) {
                        for b in cyclic_orders(yj) {
                            if i + j == k {
                                acc = acc.direct_sum(&tensor_cyclic(a, b));
                            }
                            if i + j + 1 == k {
                                acc = acc.direct_sum(&tor_cyclic(a, b));
                            }
                        }
                    }
                }
            }
            acc
        })
        .collect()
}

// ---- Smith normal form via determinantal divisors ----

fn minors(m: &IntMatrix, k: usize) -> BigInt {
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }
    let mut acc = BigInt::zero();
    for rows in subsets(m.rows(), k) {
        for cols in subsets(m.cols(), k) {
            let sub: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|&i| cols.iter().map(|&j| m[(i, j)].clone()).collect())
                .collect();
            acc = acc.gcd(&IntMatrix::from_rows(&sub).unwrap().determinant());
        }
    }
    acc
}

/// Invariant factors `d_k = D_k / D_{k-1}`, where `D_k` is the gcd of all
/// `k x k` minors. Stops at the rank.
pub fn invariant_factors_by_minors(m: &IntMatrix) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=m.rows().min(m.cols()) {
        let dk = minors(m, k);
        if dk.is_zero() {
            break;
        }
        out.push((&dk / &prev).abs());
        prev = dk;
    }
    out
}
