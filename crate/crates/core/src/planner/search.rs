//! Backtracking over multisets of torsion carriers drawn from a catalog.

use std::collections::BTreeSet;

use crate::bubbling::{contribution, OpKind, Plan};
use crate::catalog::Catalog;
use crate::error::Error;
use crate::group::FGAbelianGroup;
use crate::manifold::ManifoldProfile;
use crate::target::TargetFamily;

use super::construct::{realize_with_carriers, PlanFailure};

/// Catalog entries with torsion, plus their `S(2a+1, k2)` transforms, that fit
/// into degree `n` and add only summands of `t`. Sorted by descending torsion
/// order, then name; entries with equal dimension and homology are kept once.
pub fn candidate_carriers(t: &TargetFamily, catalog: &Catalog) -> Vec<ManifoldProfile> {
    let n = t.n();
    let mut pool: Vec<ManifoldProfile> = Vec::new();
    for entry in catalog.entries() {
        pool.push(entry.clone());
        if entry.dim % 2 == 1 {
            for k2 in 2.. {
                if entry.dim + k2 > n {
                    break;
                }
                match entry.sphere_bundle_transform(k2) {
                    Ok(p) => pool.push(p),
                    Err(_) => break,
                }
            }
        }
    }
    let fits = |p: &ManifoldProfile| {
        p.has_torsion()
            && p.dim < n
            && p.embeds_in.is_none_or(|e| e <= n)
            && p.validate().is_ok()
            && (0..n).all(|i| contribution(p, n, i).is_ok_and(|c| c.is_summand_of(&t.g(i))))
    };
    let mut out: Vec<ManifoldProfile> = pool.into_iter().filter(fits).collect();
    out.sort_by(|a, b| {
        torsion_order(b)
            .cmp(&torsion_order(a))
            .then_with(|| a.name.cmp(&b.name))
    });
    let mut seen = BTreeSet::new();
    out.retain(|p| seen.insert((p.dim, p.homology.clone())));
    out
}

fn torsion_order(p: &ManifoldProfile) -> num_bigint::BigUint {
    p.homology
        .iter()
        .map(FGAbelianGroup::torsion_order)
        .product()
}

/// Finds a plan for `t` using at most `max_carriers` carriers. Smaller carrier
/// sets are tried first, and within a size the carrier order above decides.
pub fn plan_search(
    t: &TargetFamily,
    catalog: &Catalog,
    max_carriers: usize,
) -> Result<Plan, PlanFailure> {
    if catalog.is_empty() {
        return Err(PlanFailure::Invalid(Error::EmptyCatalog));
    }
    let n = t.n();
    if !t.structural_issues().is_empty() || !t.g(n).is_free() {
        return Err(PlanFailure::Exhausted);
    }
    let candidates = candidate_carriers(t, catalog);
    let contributions: Vec<Vec<FGAbelianGroup>> = candidates
        .iter()
        .map(|c| {
            (0..n)
                .map(|i| contribution(c, n, i).expect("filtered to fit"))
                .collect()
        })
        .collect();
    let search = Search {
        t,
        contributions: &contributions,
    };
    for size in 0..=max_carriers {
        let mut chosen = Vec::with_capacity(size);
        let acc = vec![FGAbelianGroup::trivial(); n];
        if search.extend(&acc, 0, size, &mut chosen) {
            let carriers: Vec<_> = chosen.iter().map(|&i| candidates[i].clone()).collect();
            return realize_with_carriers(t, &carriers, OpKind::TrivialM);
        }
    }
    Err(PlanFailure::Exhausted)
}

struct Search<'a> {
    t: &'a TargetFamily,
    contributions: &'a [Vec<FGAbelianGroup>],
}

impl Search<'_> {
    /// Adds `remaining` more carriers with index at least `from`; true when
    /// `chosen` then leaves a free residue in every degree.
    fn extend(
        &self,
        acc: &[FGAbelianGroup],
        from: usize,
        remaining: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if remaining == 0 {
            return acc.iter().enumerate().all(|(i, a)| {
                a.complement_in(&self.t.g(i))
                    .is_some_and(|rest| rest.is_free())
            });
        }
        for c in from..self.contributions.len() {
            let next: Vec<FGAbelianGroup> = acc
                .iter()
                .zip(&self.contributions[c])
                .map(|(a, b)| a.direct_sum(b))
                .collect();
            if !next
                .iter()
                .enumerate()
                .all(|(i, g)| g.is_summand_of(&self.t.g(i)))
            {
                continue;
            }
            chosen.push(c);
            if self.extend(&next, c, remaining - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}
