use maxineq_core::finite_prob::{DecreasingFiltration, FilteredSpace, FiniteProbSpace, Partition, RandomVector};
use maxineq_core::inequalities::{
    cauchy_distances, prop21_second_telescoped_rhs, random_instance, random_instance_within, sides, verify, InequalityId,
    Outcome, DEFAULT_TOL,
};
use maxineq_core::weights::WeightSequence;
use proptest::prelude::*;

const P_GRID: [f64; 3] = [1.5, 2.0, 3.0];

fn suite_weights(seed: u64) -> WeightSequence {
    match seed % 4 {
        0 => WeightSequence::Constant(1.0),
        1 => WeightSequence::Power(-0.5),
        2 => WeightSequence::alternating(WeightSequence::Constant(1.0)),
        _ => WeightSequence::Power(0.25),
    }
}

#[test]
fn every_id_passes_on_random_instances() {
    for id in InequalityId::ALL {
        for p in P_GRID {
            if !id.valid_p(p) {
                continue;
            }
            for seed in 0..100u64 {
                let inst = random_instance_within(seed, 64, 32, 3).unwrap();
                let w = suite_weights(seed);
                let r = verify(id, &inst, inst.sequence.len(), p, id.needs_weights().then_some(&w), DEFAULT_TOL).unwrap();
                assert!(r.passed(), "{id} p={p} seed={seed}: lhs {} rhs {} C {}", r.lhs, r.rhs, r.constant);
            }
        }
    }
}

#[test]
fn first_inequality_at_one_term() {
    for p in P_GRID {
        let inst = random_instance(3, 10, 4, 3, 2).unwrap();
        let s = sides(InequalityId::Prop21First, &inst, 1, p, None).unwrap();
        assert!((s.rhs - 2.0 * s.lhs).abs() <= 1e-14 * s.rhs);
    }
}

#[test]
fn zero_weights_are_skipped() {
    let inst = random_instance(5, 12, 6, 5, 1).unwrap();
    let r = verify(InequalityId::Cor25, &inst, 5, 2.0, Some(&WeightSequence::zero()), DEFAULT_TOL).unwrap();
    assert_eq!((r.lhs, r.rhs, r.outcome), (0.0, 0.0, Outcome::Skipped));
    assert!(r.ratio().is_nan());
}

#[test]
fn weighted_ids_need_weights_and_valid_p() {
    let inst = random_instance(5, 12, 6, 5, 1).unwrap();
    assert!(verify(InequalityId::Dyadic, &inst, 5, 2.0, None, DEFAULT_TOL).is_err());
    assert!(verify(InequalityId::Prop21Second, &inst, 5, 3.0, None, DEFAULT_TOL).is_err());
    assert!(verify(InequalityId::Cor25, &inst, 5, 1.5, Some(&WeightSequence::Constant(1.0)), DEFAULT_TOL).is_err());
}

#[test]
fn martingale_differences_are_orthogonal_in_smooth_check() {
    // Terms P^i(Y_i) reduce the smoothness check to Pythagoras.
    for seed in 0..50 {
        let inst = random_instance_within(seed, 40, 16, 3).unwrap();
        let s = sides(InequalityId::RSmooth, &inst, inst.sequence.len(), 2.0, None).unwrap();
        assert!((s.lhs - s.rhs).abs() <= 1e-12 * (1.0 + s.rhs), "seed {seed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn telescoped_route_is_no_larger(seed in any::<u64>()) {
        let inst = random_instance_within(seed, 40, 16, 3).unwrap();
        let n = inst.sequence.len();
        let s = sides(InequalityId::Prop21Second, &inst, n, 2.0, None).unwrap();
        let telescoped = prop21_second_telescoped_rhs(&inst, n).unwrap();
        prop_assert!(telescoped <= s.rhs * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn first_lhs_nondecreasing_in_n(seed in any::<u64>(), p in prop::sample::select(P_GRID.to_vec())) {
        let inst = random_instance_within(seed, 40, 16, 2).unwrap();
        let mut previous = 0.0;
        for n in 1..=inst.sequence.len() {
            let s = sides(InequalityId::Prop21First, &inst, n, p, None).unwrap();
            prop_assert!(s.lhs >= previous);
            previous = s.lhs;
        }
    }
}

#[test]
fn stabilized_filtration_gives_cauchy_partial_sums() {
    // Six genuine levels, then a constant tail; geometric weights make the
    // weighted sums bounded, and past the stabilization index the distances
    // between S_m and S_{2m} vanish geometrically.
    let atoms = 8;
    let levels = vec![
        (0..atoms).map(|a| vec![a]).collect::<Vec<_>>(),
        vec![vec![0, 1], vec![2], vec![3], vec![4], vec![5], vec![6], vec![7]],
        vec![vec![0, 1], vec![2, 3], vec![4], vec![5], vec![6], vec![7]],
        vec![vec![0, 1, 2, 3], vec![4], vec![5], vec![6], vec![7]],
        vec![vec![0, 1, 2, 3], vec![4, 5], vec![6, 7]],
        vec![vec![0, 1, 2, 3, 4, 5], vec![6, 7]],
    ];
    let partitions = levels
        .into_iter()
        .enumerate()
        .map(|(i, b)| Partition::new(atoms, b, i + 1).unwrap())
        .collect();
    let f = DecreasingFiltration::new(partitions).unwrap().with_constant_tail(400);
    let space = FiniteProbSpace::new(vec![0.05, 0.1, 0.15, 0.2, 0.1, 0.1, 0.2, 0.1]).unwrap();
    let fs = FilteredSpace::new(space, f).unwrap();
    let x = RandomVector::scalar(vec![1.0, -2.0, 0.5, 3.0, -1.0, 2.0, 0.0, -0.5]).unwrap();
    let w = WeightSequence::Explicit((1..=400).map(|j| 0.8f64.powi(j)).collect());
    let checkpoints = [8, 16, 32, 64, 128, 200];
    for p in P_GRID {
        let d = cauchy_distances(&fs, &x, &w, p, &checkpoints).unwrap();
        assert!(d.windows(2).all(|w| w[1] <= w[0]), "{d:?}");
        assert!(*d.last().unwrap() <= 1e-10);
    }
}
