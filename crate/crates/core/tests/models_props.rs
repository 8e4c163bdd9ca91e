use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qfgrowth::linalg::{ComplexMatrix, IndexSpace, ONE, ZERO};
use qfgrowth::models::{
    acceptance_direct, acceptance_formula, acceptance_formula_complex, bias, reduce_clean_qubits,
    AlgorithmSpec, Model, Restriction,
};
use qfgrowth::sampling::{random_input, random_spec};

fn model_strategy() -> impl Strategy<Value = Model> {
    prop_oneof![Just(Model::Bqp), Just(Model::Dqck), Just(Model::HalfBqp)]
}

fn swap(m: usize, a: usize, b: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(m, m, |r, c| {
        let img = if c == a { b } else if c == b { a } else { c };
        if r == img {
            ONE
        } else {
            ZERO
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn direct_and_formula_agree(model in model_strategy(), n in 1u32..=2, w in 0u32..=1, d in 1usize..=3, seed in any::<u64>()) {
        let k = if model == Model::Dqck { 1 } else { 0 };
        let space = IndexSpace::new(n, w, k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec(model, space, d, &mut rng).unwrap();
        let x = random_input(space.oracle_dim(), &mut rng);
        let a = acceptance_direct(&spec, &x).unwrap();
        let b = acceptance_formula(&spec, &x).unwrap();
        prop_assert!((a - b).abs() <= 1e-9);
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&a));
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&b));
        prop_assert!(acceptance_formula_complex(&spec, &x).unwrap().im.abs() <= 1e-9);
    }

    /// A ½BQP predicate that ignores the start is the average over starts of
    /// BQP runs launched from each start.
    #[test]
    fn half_bqp_with_start_free_predicate(d in 1usize..=2, seed in any::<u64>()) {
        let space = IndexSpace::new(1, 1, 0).unwrap();
        let m = space.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = random_spec(Model::Bqp, space, d, &mut rng).unwrap();
        let accepted: Vec<usize> = (0..m).filter(|&j| base.accepts(j)).collect();
        let half = AlgorithmSpec::half_bqp(space, base.unitaries().to_vec(), |_, j| base.accepts(j)).unwrap();
        let x = random_input(space.oracle_dim(), &mut rng);
        let mut avg = 0.0;
        for s in 0..m {
            let mut us = base.unitaries().to_vec();
            us[0] = us[0].matmul(&swap(m, 0, s));
            let from_s = AlgorithmSpec::bqp(space, us, &accepted).unwrap();
            avg += acceptance_direct(&from_s, &x).unwrap() / m as f64;
        }
        prop_assert!((acceptance_direct(&half, &x).unwrap() - avg).abs() <= 1e-9);
    }
}

#[test]
fn reduction_composes_multiplicatively() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let space = IndexSpace::new(1, 0, 4).unwrap();
    let spec = random_spec(Model::Dqck, space, 1, &mut rng).unwrap();
    let once = reduce_clean_qubits(&spec, 1).unwrap();
    let twice = reduce_clean_qubits(&once, 1).unwrap();
    for y in 0..4 {
        let x = Restriction::all_free(2).expand(y);
        let b0 = bias(acceptance_direct(&spec, &x).unwrap());
        let b2 = bias(acceptance_direct(&twice, &x).unwrap());
        assert!((b2 - b0 / 16.0).abs() <= 1e-9);
    }
}

#[test]
fn restriction_random_is_seeded() {
    let a = Restriction::random(30, 0.4, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
    let b = Restriction::random(30, 0.4, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
    assert_eq!(a, b);
}
