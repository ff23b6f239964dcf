//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS or FAIL line.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use foldhom::bubbling::{
    apply_op, apply_plan, delta_family, initial_disc_state, BubblingOp, OpKind, Plan,
};
use foldhom::chain::{Builtin, ChainComplex};
use foldhom::matrix::IntMatrix;
use foldhom::planner::{
    check_subgroup_family, necessary_conditions, plan_free_bouquet, plan_free_spheres, plan_search,
    plan_single_torsion, plan_two_torsion, PlanFailure, Status, SubgroupFamily, SubgroupPair,
    TwoDegreeCase,
};
use foldhom::subgroups::{count_subgroups_isomorphic_to, SubgroupCount, DEFAULT_ORDER_BOUND};
use foldhom::{
    smith_normal_form, Catalog, FGAbelianGroup, ManifoldProfile, ReebState, TargetFamily,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(took)
}

fn round_fold_maps() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for n in 1..=6 {
        for l in 1..=5 {
            let ops = vec![BubblingOp::point(OpKind::TrivialS); l];
            let (state, _) = apply_plan(&initial_disc_state(n), &ops).map_err(|e| e.to_string())?;
            let mut expected = vec![FGAbelianGroup::trivial(); n + 1];
            expected[0] = FGAbelianGroup::free(1);
            expected[n] = FGAbelianGroup::free(l);
            ensure(state.homology() == expected, || {
                format!("n={n}, l={l}: {:?}", state.homology())
            })?;
            cases += 1;
        }
    }
    let took = within(start, Duration::from_secs(1))?;
    Ok(format!("{cases} cases in {took:.2?}"))
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> ReebState {
    let mut homology = vec![FGAbelianGroup::free(1)];
    for _ in 1..=n {
        let rank = rng.gen_range(0..=2);
        let factors: Vec<(u64, u32, usize)> = (0..rng.gen_range(0..=2))
            .map(|_| {
                (
                    *[2u64, 3, 5, 7].choose(rng).unwrap(),
                    rng.gen_range(1..=2),
                    1,
                )
            })
            .collect();
        homology.push(FGAbelianGroup::new(rank, factors).unwrap());
    }
    ReebState::new(n, homology).unwrap()
}

fn update_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let catalog = Catalog::builtin();
    let kinds = [OpKind::M, OpKind::S, OpKind::TrivialM, OpKind::TrivialS];
    let mut with_parts = 0;
    for trial in 0..200 {
        let n = rng.gen_range(1..=7);
        let state = random_state(&mut rng, n);
        let pool = fitting_parts(&catalog, n);
        let count = if pool.is_empty() {
            0
        } else {
            rng.gen_range(0..=3)
        };
        let parts: Vec<ManifoldProfile> = (0..count)
            .map(|_| pool.choose(&mut rng).unwrap().clone())
            .collect();
        with_parts += usize::from(!parts.is_empty());
        let op = BubblingOp::bouquet(*kinds.choose(&mut rng).unwrap(), parts);
        let out = apply_op(&state, &op).map_err(|e| format!("trial {trial}: {e}"))?;
        let delta = delta_family(&state, &out).ok_or(format!("trial {trial}: not a summand"))?;
        ensure(delta.g(n) == FGAbelianGroup::free(1), || {
            format!("trial {trial}: degree-{n} delta {}", delta.g(n))
        })?;
        ensure(delta.g(n - 1).is_free(), || {
            format!(
                "trial {trial}: degree-{} delta {} has torsion",
                n - 1,
                delta.g(n - 1)
            )
        })?;
    }
    Ok(format!(
        "200 operations ({with_parts} with parts), 0 violations"
    ))
}

fn chain_oracle() -> Outcome {
    let start = Instant::now();
    let err = |e: foldhom::Error| e.to_string();
    let point = ChainComplex::builtin(Builtin::Point)
        .map_err(err)?
        .homology_all()
        .map_err(err)?;
    ensure(point == [FGAbelianGroup::free(1)], || {
        format!("point: {point:?}")
    })?;
    for d in 0..=6 {
        let h = ChainComplex::builtin(Builtin::Sphere(d))
            .map_err(err)?
            .homology_all()
            .map_err(err)?;
        ensure(h == ManifoldProfile::sphere(d).homology, || {
            format!("S^{d}: {h:?}")
        })?;
    }
    let catalog = Catalog::builtin();
    for p in [2u64, 3, 5, 7, 25] {
        let h = ChainComplex::builtin(Builtin::Lens(p))
            .map_err(err)?
            .homology_all()
            .map_err(err)?;
        let entry = catalog
            .get(&format!("L({p})"))
            .ok_or(format!("L({p}) missing"))?;
        ensure(h == entry.homology, || format!("L({p}): {h:?}"))?;
    }
    for a in 1..=3 {
        for b in 1..=3 {
            let sa = ChainComplex::builtin(Builtin::Sphere(a)).map_err(err)?;
            let sb = ChainComplex::builtin(Builtin::Sphere(b)).map_err(err)?;
            let h = sa.tensor(&sb).homology_all().map_err(err)?;
            let mut expected = vec![FGAbelianGroup::trivial(); a + b + 1];
            for k in [0, a, b, a + b] {
                expected[k] = expected[k].direct_sum(&FGAbelianGroup::free(1));
            }
            ensure(h == expected, || format!("S^{a} x S^{b}: {h:?}"))?;
            let via_formula = kunneth(
                &sa.homology_all().map_err(err)?,
                &sb.homology_all().map_err(err)?,
            );
            ensure(h == via_formula, || {
                format!("S^{a} x S^{b} against the Kunneth sum")
            })?;
        }
    }
    let took = within(start, Duration::from_secs(5))?;
    Ok(format!(
        "point, 7 spheres, 5 lens spaces, 9 products in {took:.2?}"
    ))
}

fn smith_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..1000 {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..c).map(|_| rng.gen_range(-100..=100)).collect())
            .collect();
        let m = IntMatrix::from_rows(&rows).unwrap();
        let s = smith_normal_form(&m);
        ensure(&(&s.u * &m) * &s.v == s.d, || {
            format!("trial {trial}: UMV != D for {rows:?}")
        })?;
        ensure(s.d.is_diagonal(), || {
            format!("trial {trial}: D not diagonal")
        })?;
        let f = s.invariant_factors();
        ensure(f.iter().all(|x| x.is_positive()), || {
            format!("trial {trial}: negative factor")
        })?;
        ensure(f.windows(2).all(|w| w[1].is_multiple_of(&w[0])), || {
            format!("trial {trial}: divisibility fails: {f:?}")
        })?;
        let one = BigInt::from(1);
        ensure(
            s.u.determinant().abs() == one && s.v.determinant().abs() == one,
            || format!("trial {trial}: transform not unimodular"),
        )?;
    }
    Ok("1000 matrices up to 6x6".into())
}

fn random_free_target(rng: &mut ChaCha8Rng, spheres_fit_top: bool) -> TargetFamily {
    let n = rng.gen_range(1..=7);
    let mut mid: Vec<usize> = (1..n).map(|_| rng.gen_range(0..=5)).collect();
    if spheres_fit_top {
        while mid.iter().sum::<usize>() > 5 {
            let i = rng.gen_range(0..mid.len());
            mid[i] = mid[i].saturating_sub(1);
        }
    }
    let floor = if spheres_fit_top {
        mid.iter().sum::<usize>().max(1)
    } else {
        1
    };
    let top = rng.gen_range(floor..=5);
    let mut groups = vec![FGAbelianGroup::trivial()];
    groups.extend(mid.into_iter().map(FGAbelianGroup::free));
    groups.push(FGAbelianGroup::free(top));
    TargetFamily::new(n, groups).unwrap()
}

fn planner_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let fail = |t: &TargetFamily, e: PlanFailure| format!("{t:?}: {e}");
    for _ in 0..100 {
        let t = random_free_target(&mut rng, false);
        let plan = plan_free_bouquet(&t).map_err(|e| fail(&t, e))?;
        ensure(plan.delta() == t, || format!("bouquet plan misses {t:?}"))?;
    }
    for _ in 0..100 {
        let t = random_free_target(&mut rng, true);
        let plan = plan_free_spheres(&t).map_err(|e| fail(&t, e))?;
        ensure(plan.delta() == t, || format!("sphere plan misses {t:?}"))?;
    }
    let single = target(&["0", "0", "Z", "Z_7", "0", "Z"]);
    let plan =
        plan_single_torsion(&single, &ManifoldProfile::lens(7)).map_err(|e| fail(&single, e))?;
    ensure(plan.delta() == single, || "single-degree fixture".into())?;

    let two = target(&["0", "Z", "Z+Z_5", "Z_5+Z_25", "0", "Z"]);
    let s2 = ManifoldProfile::lens(5)
        .sphere_bundle_transform(2)
        .map_err(|e| e.to_string())?;
    let plan = plan_two_torsion(
        &two,
        &ManifoldProfile::lens(25),
        &s2,
        TwoDegreeCase::LowInHigh,
    )
    .map_err(|e| fail(&two, e))?;
    ensure(plan.delta() == two, || "two-degree fixture".into())?;
    let took = within(start, Duration::from_secs(10))?;
    Ok(format!(
        "200 free targets and 2 torsion fixtures in {took:.2?}"
    ))
}

fn all_targets(n: usize) -> Vec<TargetFamily> {
    let choices: Vec<FGAbelianGroup> = [0usize, 1]
        .iter()
        .flat_map(|&r| ["0", "Z_2", "Z_3"].map(|t| g(t).direct_sum(&FGAbelianGroup::free(r))))
        .collect();
    let mut out = vec![vec![]];
    for _ in 0..=n {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<FGAbelianGroup>| {
                choices.iter().map(move |c| {
                    let mut next = prefix.clone();
                    next.push(c.clone());
                    next
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|groups| TargetFamily::new(n, groups).unwrap())
        .collect()
}

fn checker_consistency() -> Outcome {
    let start = Instant::now();
    let catalog = Catalog::builtin();
    let (mut total, mut flagged, mut realized, mut realized_torsion) = (0, 0, 0, 0);
    for n in 1..=5 {
        for t in all_targets(n) {
            total += 1;
            let infeasible = necessary_conditions(&t)
                .iter()
                .any(|v| v.status == Status::Infeasible);
            flagged += usize::from(infeasible);
            match plan_search(&t, &catalog, 3) {
                Ok(plan) => {
                    ensure(!infeasible, || format!("flagged target realized: {t:?}"))?;
                    ensure(plan.delta() == t, || format!("search plan misses {t:?}"))?;
                    realized += 1;
                    realized_torsion += usize::from(!t.is_free());
                }
                Err(PlanFailure::Exhausted) => {}
                Err(e) => return Err(format!("{t:?}: {e}")),
            }
        }
    }
    ensure(realized_torsion > 0, || {
        "no target with torsion was realized".into()
    })?;
    let took = within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{total} targets, {flagged} flagged, {realized} realized ({realized_torsion} with torsion), \
         0 conflicts in {took:.2?}"
    ))
}

fn transform_degrees() -> Outcome {
    for p in [2u64, 5] {
        for k2 in [2usize, 3, 4] {
            let s = ManifoldProfile::lens(p)
                .sphere_bundle_transform(k2)
                .map_err(|e| e.to_string())?;
            s.validate().map_err(|v| format!("p={p}, k2={k2}: {v}"))?;
            let degrees: BTreeSet<usize> = (0..=s.dim).filter(|&k| !s.h(k).is_free()).collect();
            ensure(degrees == BTreeSet::from([1, k2]), || {
                format!("p={p}, k2={k2}: torsion in {degrees:?}")
            })?;
            ensure(
                (s.h(1) == FGAbelianGroup::cyclic(p)) && (s.h(k2) == FGAbelianGroup::cyclic(p)),
                || format!("p={p}, k2={k2}: groups {:?}", s.homology),
            )?;
        }
    }
    Ok("p in {2, 5}, k2 in {2, 3, 4}".into())
}

fn subgroup_counts() -> Outcome {
    let count = |ambient: &str, sub: &str| {
        count_subgroups_isomorphic_to(&g(ambient), &g(sub), DEFAULT_ORDER_BOUND)
            .map_err(|e| e.to_string())
    };
    for p in [2u64, 3, 5, 7] {
        let got = count(&format!("Z_{p}^2"), &format!("Z_{p}"))?;
        ensure(got == SubgroupCount::Exact(u128::from(p) + 1), || {
            format!("p={p}: {got:?}")
        })?;
    }
    let got = count("Z_2 + Z_2", "Z_2")?;
    ensure(got == SubgroupCount::Exact(3), || {
        format!("Z_2+Z_2: {got:?}")
    })?;
    Ok("p + 1 for p in {2, 3, 5, 7}; 3 in Z_2 + Z_2".into())
}

fn subgroup_family_fixture() -> Outcome {
    let n = 7;
    let catalog = Catalog::builtin();
    let family = |h: &str| {
        SubgroupFamily::new(vec![SubgroupPair {
            group: g(h),
            degrees: BTreeSet::from([n - 3]),
        }])
        .map_err(|e| e.to_string())
    };
    let mut checked = 0;
    for (t5, lens, expect) in [
        ("Z_3^2", 2u64, Status::Consistent),
        ("Z_2", 3, Status::Consistent),
        ("Z_3^2", 5, Status::Consistent),
        ("Z_3^2", 3, Status::HypothesisNotMet),
    ] {
        let first = catalog
            .resolve(&format!("B5({t5})"))
            .map_err(|e| e.to_string())?;
        let second = catalog
            .resolve(&format!("S(3,2)[L({lens})]"))
            .map_err(|e| e.to_string())?;
        let ops = vec![
            BubblingOp::bouquet(OpKind::M, vec![first]),
            BubblingOp::bouquet(OpKind::M, vec![second]),
        ];
        let t = Plan::new(initial_disc_state(n), ops)
            .map_err(|e| e.to_string())?
            .delta();
        if expect == Status::Consistent {
            let zero = FGAbelianGroup::trivial();
            let expected_groups = [
                zero.clone(),
                zero.clone(),
                g("Z"),
                g("Z"),
                g(t5).direct_sum(&FGAbelianGroup::cyclic(lens)),
                FGAbelianGroup::cyclic(lens),
                zero,
                g("Z^2"),
            ];
            ensure(t.groups() == expected_groups, || {
                format!("realized {:?}", t.groups())
            })?;
            for v in necessary_conditions(&t) {
                ensure(v.status == Status::Consistent, || format!("{v:?}"))?;
            }
        }
        let v = check_subgroup_family(&t, &family(t5)?, DEFAULT_ORDER_BOUND)
            .map_err(|e| e.to_string())?;
        ensure(v.status == expect, || {
            format!("B5({t5}) + L({lens}): {v:?}")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} carrier pairs with exact verdicts"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("round fold maps", round_fold_maps),
        ("update engine", update_engine),
        ("chain oracle", chain_oracle),
        ("smith normal form", smith_suite),
        ("planner round trip", planner_round_trip),
        ("checker and search consistency", checker_consistency),
        ("transformed lens spaces", transform_degrees),
        ("subgroup counting", subgroup_counts),
        ("subgroup family fixture", subgroup_family_fixture),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
