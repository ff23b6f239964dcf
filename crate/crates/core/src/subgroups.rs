//! Counting subgroups of a finite abelian group isomorphic to a given one.
//!
//! The count splits over primes, so each primary component is handled on its
//! own. Inside a `p`-group `P` the number of subgroups isomorphic to `H` is
//! `|Inj(H, P)| / |Aut(H)|`, and `|Aut(H)| = |Inj(H, H)|`. Injective
//! homomorphisms are enumerated generator by generator: each new image must
//! have exactly the order of its cyclic factor and meet the span of the
//! previous images trivially. Partial spans are memoized, since the number
//! of completions depends only on the span reached so far.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::Error;
use crate::group::FGAbelianGroup;

pub const DEFAULT_ORDER_BOUND: u64 = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "value")]
pub enum SubgroupCount {
    Exact(u128),
    /// The torsion part of the ambient group exceeds the enumeration bound.
    Unbounded,
}

/// Number of subgroups of `torsion(g)` isomorphic to the finite group `h`.
pub fn count_subgroups_isomorphic_to(
    g: &FGAbelianGroup,
    h: &FGAbelianGroup,
    order_bound: u64,
) -> Result<SubgroupCount, Error> {
    if !h.is_finite() {
        return Err(Error::InfiniteSubgroup(h.rank()));
    }
    if g.torsion_order() > BigUint::from(order_bound) {
        return Ok(SubgroupCount::Unbounded);
    }
    let primes: BTreeSet<u64> = h.torsion().iter().map(|f| f.p).collect();
    let mut total: u128 = 1;
    for p in primes {
        let ambient = PrimaryGroup::new(p, exponents(g, p));
        let sub = PrimaryGroup::new(p, exponents(h, p));
        let embeddings = ambient.count_embeddings(&sub.factor_orders());
        if embeddings == 0 {
            return Ok(SubgroupCount::Exact(0));
        }
        let automorphisms = sub.count_embeddings(&sub.factor_orders());
        total *= embeddings / automorphisms;
    }
    Ok(SubgroupCount::Exact(total))
}

fn exponents(g: &FGAbelianGroup, p: u64) -> Vec<u32> {
    g.torsion()
        .iter()
        .filter(|f| f.p == p)
        .flat_map(|f| std::iter::repeat_n(f.e, f.m))
        .collect()
}

/// `⊕ Z_{p^e_i}` with elements indexed in mixed radix.
struct PrimaryGroup {
    moduli: Vec<u64>,
    size: usize,
    coords: Vec<Vec<u64>>,
}

impl PrimaryGroup {
    fn new(p: u64, mut exps: Vec<u32>) -> Self {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        let moduli: Vec<u64> = exps.iter().map(|&e| p.pow(e)).collect();
        let size = moduli
            .iter()
            .product::<u64>()
            .to_usize()
            .expect("bounded group");
        let coords = (0..size)
            .map(|mut idx| {
                moduli
                    .iter()
                    .map(|&q| {
                        let c = idx as u64 % q;
                        idx /= q as usize;
                        c
                    })
                    .collect()
            })
            .collect();
        Self {
            moduli,
            size,
            coords,
        }
    }

    fn factor_orders(&self) -> Vec<u64> {
        self.moduli.clone()
    }

    fn index(&self, coords: &[u64]) -> usize {
        let mut idx = 0usize;
        for (c, q) in coords.iter().zip(&self.moduli).rev() {
            idx = idx * *q as usize + *c as usize;
        }
        idx
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let sum: Vec<u64> = self.coords[a]
            .iter()
            .zip(&self.coords[b])
            .zip(&self.moduli)
            .map(|((x, y), q)| (x + y) % q)
            .collect();
        self.index(&sum)
    }

    fn element_order(&self, a: usize) -> u64 {
        self.coords[a]
            .iter()
            .zip(&self.moduli)
            .map(|(&c, &q)| if c == 0 { 1 } else { q / gcd(c, q) })
            .max()
            .unwrap_or(1)
    }

    /// Number of injective homomorphisms `⊕ Z_{orders[i]} -> self`.
    fn count_embeddings(&self, orders: &[u64]) -> u128 {
        let mut span = vec![false; self.size];
        span[0] = true;
        let mut memo = HashMap::new();
        self.extend(&span, orders, &mut memo)
    }

    fn extend(&self, span: &[bool], orders: &[u64], memo: &mut HashMap<Vec<u64>, u128>) -> u128 {
        let Some((&order, rest)) = orders.split_first() else {
            return 1;
        };
        let key = pack(span, orders.len());
        if let Some(&hit) = memo.get(&key) {
            return hit;
        }
        let members: Vec<usize> = (0..self.size).filter(|&x| span[x]).collect();
        let mut total = 0u128;
        for g in 0..self.size {
            if self.element_order(g) != order {
                continue;
            }
            // <g> must meet the span only in 0.
            let mut multiple = g;
            let mut independent = true;
            for _ in 1..order {
                if span[multiple] {
                    independent = false;
                    break;
                }
                multiple = self.add(multiple, g);
            }
            if !independent {
                continue;
            }
            if rest.is_empty() {
                total += 1;
                continue;
            }
            let mut next = vec![false; self.size];
            let mut multiple = 0usize;
            for _ in 0..order {
                for &s in &members {
                    next[self.add(s, multiple)] = true;
                }
                multiple = self.add(multiple, g);
            }
            total += self.extend(&next, rest, memo);
        }
        memo.insert(key, total);
        total
    }
}

fn pack(span: &[bool], depth: usize) -> Vec<u64> {
    let mut words = vec![depth as u64];
    for chunk in span.chunks(64) {
        words.push(
            chunk
                .iter()
                .enumerate()
                .fold(0u64, |w, (i, &b)| w | ((b as u64) << i)),
        );
    }
    words
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
