use maxineq_core::inequalities::{traced_constant, InequalityId, MarkovCheckId, DEFAULT_TOL};
use maxineq_core::markov::{
    check_conditions, lemma45_residual, make_chain, random_disconnected_instance, random_markov_instance,
    split_functionals, variance_growth, SpectralDecomposition, verify_markov_inequality, ChainModel, Observable, PowerTable,
};
use maxineq_core::seed::mix;
use maxineq_core::simulate::{exact_path_max_moment, mc_max_moment, SimConfig};
use maxineq_core::weights::{WeightSequence, WeightStats};
use proptest::prelude::*;

fn weights_for(seed: u64) -> WeightSequence {
    match seed % 5 {
        0 => WeightSequence::Constant(1.0),
        1 => WeightSequence::Power(-0.5),
        2 => WeightSequence::alternating(WeightSequence::Power(-0.25)),
        3 => WeightSequence::Power(0.5),
        _ => WeightSequence::Explicit((1..=400).map(|j| ((j * 7919) % 13) as f64 / 6.0 - 1.0).collect()),
    }
}

#[test]
fn conditions_agree_across_generated_pairs() {
    for seed in 0..60u64 {
        let inst = match seed % 3 {
            0 => random_markov_instance(seed, 30, 1, true).unwrap(),
            1 => random_markov_instance(seed, 30, 1, false).unwrap(),
            _ => random_disconnected_instance(seed, 30, seed % 2 == 0).unwrap(),
        };
        let r = check_conditions(&inst.chain, &inst.observable, 256).unwrap();
        assert!(r.all_agree(), "seed {seed}: {:?}", r.flags());
        if r.c_finite {
            assert!((r.c_sigma2 - r.c_sigma2_integral).abs() <= 1e-10 * (1.0 + r.c_sigma2));
            assert!(r.b_sup <= r.b_bound * (1.0 + 1e-12) + 1e-12);
        }
    }
}

#[test]
fn variance_gap_halves_on_gapped_chains() {
    for seed in 0..20u64 {
        let inst = random_markov_instance(seed, 12, 1, true).unwrap();
        // Probe well past the relaxation time 1 / (1 - max |lambda|), lambda != 1.
        let spectrum = SpectralDecomposition::new(&inst.chain).unwrap();
        let second = spectrum
            .eigenvalues()
            .iter()
            .map(|l| l.abs())
            .filter(|&l| l < 1.0 - 1e-9)
            .fold(0.0, f64::max);
        let relaxation = 1.0 / (1.0 - second);
        let mut n = (20.0 * relaxation).max(64.0).ceil() as usize;
        let end = 16 * n;
        let sigma2 = check_conditions(&inst.chain, &inst.observable, 4).unwrap().c_sigma2;
        let mut previous = (sigma2 - variance_growth(&inst.chain, &inst.observable, n).unwrap()).abs();
        while n < end {
            n *= 2;
            let gap = (sigma2 - variance_growth(&inst.chain, &inst.observable, n).unwrap()).abs();
            if previous > 1e-9 {
                assert!(gap <= 0.6 * previous, "seed {seed} n {n}: {gap} vs {previous}");
            }
            previous = gap;
        }
    }
}

#[test]
fn lemma45_on_random_triples() {
    for seed in 0..40u64 {
        let inst = random_markov_instance(seed, 50, 1 + seed as usize % 2, seed % 2 == 0).unwrap();
        let n = 1 + (mix(seed, 9) % 100) as usize;
        let r = lemma45_residual(&inst.chain, &inst.observable, &weights_for(seed), n).unwrap();
        assert!(r <= 1e-10, "seed {seed}: {r}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn even_odd_split_dominates(seed in any::<u64>(), n in 1usize..40) {
        let inst = random_markov_instance(seed, 20, 1, seed % 2 == 0).unwrap();
        let s = split_functionals(&inst.chain, &inst.observable, &weights_for(seed), n).unwrap();
        prop_assert!(s.full <= s.split_bound() + 1e-12 * (1.0 + s.split_bound()));
    }

    #[test]
    fn constant_observable_theorem(seed in any::<u64>(), n in 1usize..30) {
        // f constant: Q^j f = f, so both sides are pure weight expressions.
        let inst = random_markov_instance(seed, 15, 1, false).unwrap();
        let f = Observable::constant(inst.chain.states(), &[1.0]);
        let inst = maxineq_core::markov::MarkovInstance { observable: f, ..inst };
        let w = weights_for(seed);
        let r = verify_markov_inequality(MarkovCheckId::Thm41, &inst, n, Some(&w), DEFAULT_TOL).unwrap();
        let stats = WeightStats::compute(&w, n).unwrap();
        let rhs: f64 = (1..=n).map(|j| stats.b_star(j).unwrap()).sum();
        let lhs = (1..=2 * n).map(|k| stats.s(k) * stats.s(k)).fold(0.0, f64::max);
        prop_assert!((r.rhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
        prop_assert!((r.lhs - lhs).abs() <= 1e-12 * (1.0 + lhs));
        prop_assert!(r.passed());
    }
}

#[test]
fn chain_corollaries_on_random_chains() {
    for seed in 0..30u64 {
        let inst = random_markov_instance(seed, 50, 1 + seed as usize % 3, seed % 4 != 0).unwrap();
        let n = 1 + (mix(seed, 3) % 128) as usize;
        for id in [MarkovCheckId::Cor42Const, MarkovCheckId::Cor42Sqrt] {
            let r = verify_markov_inequality(id, &inst, n, None, DEFAULT_TOL).unwrap();
            assert!(r.passed(), "{id} seed {seed}: ratio {}", r.ratio());
        }
    }
}

#[test]
fn mc_agrees_with_enumeration_and_bound() {
    let three = make_chain(&ChainModel::Metropolis {
        target: vec![0.5, 0.3, 0.2],
        proposal: vec![vec![0.2, 0.4, 0.4], vec![0.4, 0.2, 0.4], vec![0.4, 0.4, 0.2]],
    })
    .unwrap();
    let f = three.center(&Observable::scalar(vec![1.0, -2.0, 0.5]).unwrap());
    let w = WeightSequence::Power(-0.5);
    let n = 5;
    let exact = exact_path_max_moment(&three, &f, &w, n).unwrap();
    let cfg = SimConfig {
        master_seed: 77,
        trials: 10_000,
        horizon: n,
        threads: 1,
    };
    let mc = mc_max_moment(&three, &f, &w, n, &cfg).unwrap();
    assert!((mc.estimate - exact).abs() <= 3.0 * mc.standard_error);
    // Weighted second-moment bound transported to the chain.
    let table = PowerTable::new(&three, &f, n).unwrap();
    let stats = WeightStats::compute_basic(&w, n).unwrap();
    let rhs: f64 = (1..=n).map(|k| stats.b(k) * three.inner(table.get(k), table.get(k))).sum();
    let c = traced_constant(InequalityId::Cor25, 2.0).unwrap().value;
    assert!(mc.estimate <= c * rhs + 3.0 * mc.standard_error);
}
