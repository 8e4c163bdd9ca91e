use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qfgrowth::bounds::{bqp_ceiling, dqck_ceiling};
use qfgrowth::fourier::{
    acceptance_spectrum, acceptance_table, signed_growth, FourierSpectrum, SignFamily,
};
use qfgrowth::linalg::{within_bound, IndexSpace};
use qfgrowth::models::{Model, Restriction};
use qfgrowth::sampling::random_spec;

fn table(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..1usize << n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn gamma(seed: u64, len: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn parseval(seed in any::<u64>(), n in 0usize..=10) {
        let t = table(seed, n);
        let sp = FourierSpectrum::from_truth_table(&t).unwrap();
        let mean_sq = t.iter().map(|v| v * v).sum::<f64>() / t.len() as f64;
        prop_assert!((sp.l2_mass() - mean_sq).abs() <= 1e-9);
    }

    #[test]
    fn signed_growth_is_dominated(seed in any::<u64>(), nb in 1usize..=3, beta in any::<bool>()) {
        let n = 3 * nb;
        let sp = FourierSpectrum::from_truth_table(&table(seed, n)).unwrap();
        let g = gamma(seed ^ 0x5a5a, n);
        let signs = if beta { SignFamily::beta(g) } else { SignFamily::alpha(g) }.unwrap();
        let s = signed_growth(&sp, &signs).unwrap();
        prop_assert!(within_bound(s.abs(), sp.growth(signs.level())));
    }

    #[test]
    fn restriction_commutes_with_transform(seed in any::<u64>(), n in 1usize..=8, p in 0.0f64..=1.0) {
        let t = table(seed, n);
        let sp = FourierSpectrum::from_truth_table(&t).unwrap();
        let rho = Restriction::random(n, p, &mut ChaCha8Rng::seed_from_u64(seed.rotate_left(7))).unwrap();
        let folded = sp.restrict(&rho).unwrap();
        let restricted_table: Vec<f64> = (0..1usize << rho.num_free())
            .map(|y| {
                let x = rho.expand(y);
                let idx = x.iter().enumerate().fold(0, |acc, (i, &v)| acc | (((v < 0) as usize) << i));
                t[idx]
            })
            .collect();
        let direct = FourierSpectrum::from_truth_table(&restricted_table).unwrap();
        for (a, b) in folded.coeffs().iter().zip(direct.coeffs()) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn acceptance_spectrum_parseval_and_ceilings(
        model in prop_oneof![Just(Model::Bqp), Just(Model::Dqck)],
        seed in any::<u64>(),
        d in 1usize..=3,
        p in 0.3f64..=1.0,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = if model == Model::Dqck { rng.random_range(1..=2) } else { 0 };
        let space = IndexSpace::new(2, rng.random_range(0..=1), k).unwrap();
        let spec = random_spec(model, space, d, &mut rng).unwrap();
        let rho = Restriction::random(4, p, &mut rng).unwrap();
        let tbl = acceptance_table(&spec, Some(&rho)).unwrap();
        let sp = acceptance_spectrum(&spec, Some(&rho)).unwrap();
        let mean_sq = tbl.iter().map(|v| v * v).sum::<f64>() / tbl.len() as f64;
        prop_assert!((sp.l2_mass() - mean_sq).abs() <= 1e-9);
        for l in 1..=3 {
            prop_assert!(within_bound(sp.growth(l), bqp_ceiling(4, d, l)));
            if model == Model::Dqck && l >= 2 {
                prop_assert!(within_bound(sp.growth(l), dqck_ceiling(k, 4, d, l).unwrap()));
            }
        }
    }
}
