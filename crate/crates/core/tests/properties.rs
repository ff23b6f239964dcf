mod common;

use common::*;
use foldhom::bubbling::{
    apply_op, apply_plan, delta_family, initial_disc_state, BubblingOp, OpKind, Plan,
};
use foldhom::manifold::Bouquet;
use foldhom::matrix::IntMatrix;
use foldhom::planner::{
    necessary_conditions, plan_free_bouquet, plan_free_spheres, plan_search, truncate_top, Status,
};
use foldhom::{canonicalize, smith_normal_form, Catalog, FGAbelianGroup, TargetFamily};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use proptest::prelude::*;

fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for &(i, j, f) in ops {
        if n > 0 && i % n != j % n {
            m.add_row_multiple(i % n, j % n, &BigInt::from(f));
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_decomposition_is_exact(m in matrix(5, 30)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.d.clone());
        prop_assert!(s.d.is_diagonal());
        prop_assert_eq!(s.u.determinant().abs(), BigInt::from(1));
        prop_assert_eq!(s.v.determinant().abs(), BigInt::from(1));
        let f = s.invariant_factors();
        prop_assert!(f.iter().all(|x| x.is_positive()));
        prop_assert!(f.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
    }

    #[test]
    fn smith_matches_determinantal_divisors(m in matrix(4, 12)) {
        prop_assert_eq!(smith_normal_form(&m).invariant_factors(), invariant_factors_by_minors(&m));
    }

    #[test]
    fn canonical_form_ignores_change_of_basis(
        m in matrix(4, 9),
        row_ops in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..6),
        col_ops in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..6),
    ) {
        let p = unimodular(m.rows(), &row_ops);
        let q = unimodular(m.cols(), &col_ops);
        let moved = &(&p * &m) * &q;
        prop_assert_eq!(canonicalize(&moved).unwrap(), canonicalize(&m).unwrap());
    }

    #[test]
    fn canonicalize_is_idempotent(x in group(3)) {
        let once = canonicalize(&x.presentation()).unwrap();
        prop_assert_eq!(&once, &x);
        prop_assert_eq!(canonicalize(&once.presentation()).unwrap(), x);
    }

    #[test]
    fn direct_sum_is_commutative_and_associative(a in group(2), b in group(2), c in group(2)) {
        prop_assert_eq!(a.direct_sum(&b), b.direct_sum(&a));
        prop_assert_eq!(a.direct_sum(&b).direct_sum(&c), a.direct_sum(&b.direct_sum(&c)));
        prop_assert_eq!(a.direct_sum(&FGAbelianGroup::trivial()), a.clone());
    }

    #[test]
    fn summand_iff_complement(a in group(2), b in group(2)) {
        let sum = a.direct_sum(&b);
        prop_assert!(a.is_summand_of(&sum));
        prop_assert_eq!(a.complement_in(&sum), Some(b.clone()));
        match a.complement_in(&b) {
            Some(k) => {
                prop_assert!(a.is_summand_of(&b));
                prop_assert_eq!(a.direct_sum(&k), b);
            }
            None => prop_assert!(!a.is_summand_of(&b)),
        }
    }

    #[test]
    fn text_form_round_trips(a in group(3)) {
        prop_assert_eq!(a.to_string().parse::<FGAbelianGroup>().unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn bubbling_invariants((n, ops) in random_ops(7, 5)) {
        let initial = initial_disc_state(n);
        let (fin, ledger) = apply_plan(&initial, &ops).unwrap();
        prop_assert_eq!(fin.h(0), initial.h(0));
        prop_assert_eq!(fin.h(n).rank(), initial.h(n).rank() + ops.len());
        prop_assert_eq!(fin.h(n).torsion_part(), initial.h(n).torsion_part());
        for delta in &ledger.0 {
            prop_assert_eq!(&delta[n], &FGAbelianGroup::free(1));
            prop_assert!(delta[n - 1].is_free());
            prop_assert!(delta[0].is_trivial());
        }
        let d = delta_family(&initial, &fin).unwrap();
        prop_assert!(d.g(n - 1).is_free());
        let again = apply_plan(&initial, &ops).unwrap();
        prop_assert_eq!(again, (fin, ledger));
    }

    #[test]
    fn grouping_changes_only_the_top_degree(
        (n, ops) in random_ops(7, 4),
        cuts in prop::collection::vec(any::<bool>(), 12),
    ) {
        let parts: Vec<_> = ops.iter().flat_map(|op| op.polyhedron.parts().to_vec()).collect();
        let mut regrouped: Vec<BubblingOp> = vec![BubblingOp::point(OpKind::M)];
        for (i, p) in parts.into_iter().enumerate() {
            if cuts[i % cuts.len()] && regrouped.last().unwrap().polyhedron != Bouquet::Point {
                regrouped.push(BubblingOp::point(OpKind::M));
            }
            let last = regrouped.last_mut().unwrap();
            let mut list = last.polyhedron.parts().to_vec();
            list.push(p);
            last.polyhedron = Bouquet::of(list);
        }
        let a = apply_plan(&initial_disc_state(n), &ops).unwrap().0;
        let b = apply_plan(&initial_disc_state(n), &regrouped).unwrap().0;
        prop_assert_eq!(&a.homology()[..n], &b.homology()[..n]);
        prop_assert_eq!(b.h(n).rank(), regrouped.len());
    }

    #[test]
    fn realized_targets_pass_the_necessary_conditions((n, ops) in random_ops(7, 4)) {
        prop_assume!(!ops.is_empty());
        let plan = Plan::new(initial_disc_state(n), ops).unwrap();
        let t = plan.delta();
        for v in necessary_conditions(&t) {
            prop_assert!(v.status != Status::Infeasible, "{:?} flagged realized target {:?}", v, t);
        }
    }

    #[test]
    fn truncation_keeps_lower_degrees((n, ops) in random_ops(7, 5), r in 1usize..6) {
        prop_assume!(!ops.is_empty());
        let r = 1 + (r - 1) % ops.len();
        let plan = Plan::new(initial_disc_state(n), ops).unwrap();
        let cut = truncate_top(&plan, &FGAbelianGroup::free(r)).unwrap();
        let (short, full) = (cut.delta(), plan.delta());
        prop_assert_eq!(&short.groups()[..n], &full.groups()[..n]);
        prop_assert_eq!(cut.delta().g(n), FGAbelianGroup::free(r));
        prop_assert_eq!(cut.ops().len(), r);
    }

    #[test]
    fn search_plans_replay_exactly((n, ops) in random_ops(6, 2)) {
        prop_assume!(!ops.is_empty());
        let t = Plan::new(initial_disc_state(n), ops).unwrap().delta();
        if let Ok(plan) = plan_search(&t, &Catalog::builtin(), 2) {
            prop_assert_eq!(plan.delta(), t);
        }
    }
}

fn free_target(max_n: usize, max_rank: usize) -> impl Strategy<Value = TargetFamily> {
    (1..=max_n).prop_flat_map(move |n| {
        (prop::collection::vec(0..=max_rank, n - 1), 1..=max_rank).prop_map(move |(mid, top)| {
            let mut groups = vec![FGAbelianGroup::trivial()];
            groups.extend(mid.iter().map(|&r| FGAbelianGroup::free(r)));
            groups.push(FGAbelianGroup::free(top));
            TargetFamily::new(n, groups).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn free_planners_agree(t in free_target(7, 5)) {
        let a = plan_free_bouquet(&t).unwrap();
        prop_assert_eq!(a.delta(), t.clone());
        let mid: usize = (1..t.n()).map(|j| t.rank(j)).sum();
        match plan_free_spheres(&t) {
            Ok(b) => {
                prop_assert!(mid <= t.rank(t.n()));
                prop_assert_eq!(b.delta(), a.delta());
            }
            Err(_) => prop_assert!(mid > t.rank(t.n())),
        }
    }

    #[test]
    fn torsion_on_top_degrees_is_infeasible(t in free_target(6, 3), extra in group(0), top in any::<bool>()) {
        prop_assume!(!extra.is_trivial() && t.n() >= 2);
        let mut groups = t.groups().to_vec();
        let j = if top { t.n() } else { t.n() - 1 };
        groups[j] = groups[j].direct_sum(&extra);
        let worse = TargetFamily::new(t.n(), groups).unwrap();
        prop_assert!(necessary_conditions(&worse).iter().any(|v| v.status == Status::Infeasible));
    }

    #[test]
    fn apply_op_agrees_with_plan_fold((n, ops) in random_ops(6, 3)) {
        let mut state = initial_disc_state(n);
        for op in &ops {
            state = apply_op(&state, op).unwrap();
        }
        prop_assert_eq!(state, apply_plan(&initial_disc_state(n), &ops).unwrap().0);
    }
}

#[test]
fn zero_matrix_has_no_invariant_factors() {
    let z = IntMatrix::zeros(3, 2);
    assert!(smith_normal_form(&z).invariant_factors().is_empty());
    assert!(invariant_factors_by_minors(&z).is_empty());
}
