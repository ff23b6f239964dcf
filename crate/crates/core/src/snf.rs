//! Smith normal form over the integers with unimodular transforms.
//!
//! For an `r x c` matrix `M` the decomposition returns `U` (`r x r`), `D`
//! (`r x c`) and `V` (`c x c`) with `D = U * M * V`, both transforms of
//! determinant `+1` or `-1`, and the diagonal of `D` non-negative with each
//! entry dividing the next.
//!
//! Pivoting always moves the entry of least absolute value into the corner,
//! so every reduction pass strictly shrinks the pivot until it divides the
//! whole remaining block.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// The non-zero invariant factors, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d
            .diagonal()
            .into_iter()
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.d.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_nonzero(&d, t) else {
            break;
        };
        move_to_corner(&mut d, &mut u, &mut v, t, pi, pj);

        loop {
            let mut dirty = false;

            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                let neg = -q;
                d.add_row_multiple(i, t, &neg);
                u.add_row_multiple(i, t, &neg);
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                let neg = -q;
                d.add_col_multiple(j, t, &neg);
                v.add_col_multiple(j, t, &neg);
                dirty |= !d[(t, j)].is_zero();
            }

            if dirty {
                // A remainder survived: it is smaller than the pivot.
                let (pi, pj) = smallest_in_cross(&d, t);
                move_to_corner(&mut d, &mut u, &mut v, t, pi, pj);
                continue;
            }

            // Row and column are clear; the pivot must divide the rest of the block.
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }

        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    SmithDecomposition { u, d, v }
}

fn smallest_nonzero(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(_, b)| &a < b) {
                best = Some(((i, j), a));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

fn smallest_in_cross(d: &IntMatrix, t: usize) -> (usize, usize) {
    let column = (t..d.rows()).map(|i| (i, t));
    let row = (t + 1..d.cols()).map(|j| (t, j));
    column
        .chain(row)
        .filter(|&p| !d[p].is_zero())
        .min_by(|&a, &b| d[a].abs().cmp(&d[b].abs()))
        .expect("pivot cross cannot be all zero")
}

fn move_to_corner(
    d: &mut IntMatrix,
    u: &mut IntMatrix,
    v: &mut IntMatrix,
    t: usize,
    i: usize,
    j: usize,
) {
    d.swap_rows(t, i);
    u.swap_rows(t, i);
    d.swap_cols(t, j);
    v.swap_cols(t, j);
}
