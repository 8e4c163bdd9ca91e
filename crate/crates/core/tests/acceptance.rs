//! Desk-scale acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qfgrowth::bounds::{bqp_ceiling, dqck_ceiling, hybrid_dqck_ceiling};
use qfgrowth::decomposition::{spectrum_via_decomposition, verify};
use qfgrowth::fourier::{
    acceptance_spectrum, direct_spectrum, hybrid_spectrum, signed_growth_mapped, SignFamily,
};
use qfgrowth::forrelation::{
    forr, forr_dense, hadamard_test_circuit, normalized_trace, random_instance, tightness_circuit, tightness_coefficient,
    trace_circuit, trace_input,
};
use qfgrowth::linalg::{within_bound, IndexSpace};
use qfgrowth::models::{
    acceptance_direct, acceptance_formula, bias, reduce_clean_qubits, Literal, Model, Restriction,
};
use qfgrowth::sampling::{random_decomposition_spec, random_hybrid, random_input, random_spec};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn decomposition_sweep() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let shapes = [(1, 0, 0), (1, 1, 0), (2, 0, 0), (2, 1, 0), (3, 0, 0), (1, 1, 1)];
    let (mut worst_entry, mut worst_norm, mut failures) = (0.0f64, 0.0f64, Vec::new());
    for trial in 0..50 {
        let (n, w, k) = shapes[rng.random_range(0..shapes.len())];
        let space = IndexSpace::new(n, w, k).map_err(|e| e.to_string())?;
        let d = rng.random_range(1..=4);
        let n_tilde = rng.random_range(0..=space.oracle_dim().min(4));
        let slots = d - 1;
        let p = rng.random_range(0..=(slots / 2).min(2));
        let q = rng.random_range(0..=(slots - 2 * p).min(2));
        let spec = random_decomposition_spec(space, d, n_tilde, p, q, &mut rng)
            .map_err(|e| e.to_string())?;
        let report = verify(&spec).map_err(|e| e.to_string())?;
        worst_entry = worst_entry.max(report.max_entry_deviation);
        worst_norm = worst_norm.max(report.max_factor_norm);
        if !report.pass {
            failures.push(trial);
        }
    }
    check(
        failures.is_empty(),
        format!("max entry dev {worst_entry:.2e}, max factor norm {worst_norm:.12}, failing trials {failures:?}"),
    )
}

fn formula_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst = 0.0f64;
    let mut out_of_range = 0;
    for model in [Model::Bqp, Model::Dqck, Model::HalfBqp] {
        for _ in 0..50 {
            let n = rng.random_range(1..=2);
            let w = rng.random_range(0..=1);
            let k = if model == Model::Dqck { rng.random_range(1..=2) } else { 0 };
            let d = rng.random_range(1..=3);
            let space = IndexSpace::new(n, w, k).map_err(|e| e.to_string())?;
            let spec = random_spec(model, space, d, &mut rng).map_err(|e| e.to_string())?;
            let x = random_input(space.oracle_dim(), &mut rng);
            let a = acceptance_direct(&spec, &x).map_err(|e| e.to_string())?;
            let b = acceptance_formula(&spec, &x).map_err(|e| e.to_string())?;
            worst = worst.max((a - b).abs());
            if !(-1e-9..=1.0 + 1e-9).contains(&a) {
                out_of_range += 1;
            }
        }
    }
    check(
        worst <= 1e-9 && out_of_range == 0,
        format!("150 pairs, max |direct − formula| {worst:.2e}, out of [0,1]: {out_of_range}"),
    )
}

fn ceiling_harness(model: Model, levels: &[usize], seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut violations, mut checks, mut tightest) = (0, 0, 0.0f64);
    for _ in 0..25 {
        let n = rng.random_range(2..=3);
        let w = rng.random_range(0..=1);
        let k = if model == Model::Dqck { rng.random_range(1..=2) } else { 0 };
        let d = rng.random_range(1..=3);
        let space = IndexSpace::new(n, w, k).map_err(|e| e.to_string())?;
        let spec = random_spec(model, space, d, &mut rng).map_err(|e| e.to_string())?;
        let big_n = space.oracle_dim();
        for _ in 0..5 {
            let p = rng.random_range(0.2..=1.0);
            let rho = Restriction::random(big_n, p, &mut rng).map_err(|e| e.to_string())?;
            let sp = acceptance_spectrum(&spec, Some(&rho)).map_err(|e| e.to_string())?;
            for &l in levels {
                let ceiling = match model {
                    Model::Dqck => dqck_ceiling(k, big_n, d, l).map_err(|e| e.to_string())?,
                    _ => bqp_ceiling(big_n, d, l),
                };
                let g = sp.growth(l);
                checks += 1;
                if ceiling > 0.0 {
                    tightest = tightest.max(g / ceiling);
                }
                if !within_bound(g, ceiling) {
                    violations += 1;
                }
            }
        }
    }
    check(
        violations == 0,
        format!("{checks} checks, {violations} violations, max growth/ceiling {tightest:.4}"),
    )
}

fn tightness() -> Outcome {
    let (n, d) = (2u32, 3usize);
    let (spec, rho) = tightness_circuit(n, d).map_err(|e| e.to_string())?;
    let sp = acceptance_spectrum(&spec, Some(&rho)).map_err(|e| e.to_string())?;
    let big_n = 1usize << n;
    let magnitude = 1.0 / (2.0 * big_n as f64 * (big_n as f64).powf(d as f64 / 2.0));
    let nonzero: Vec<usize> = (1..sp.coeffs().len())
        .filter(|&s| sp.coefficient(s).abs() > 1e-12)
        .collect();
    let magnitudes_ok = nonzero
        .iter()
        .all(|&s| (sp.coefficient(s).abs() - magnitude).abs() <= 1e-9);
    let entrywise = (0..sp.coeffs().len())
        .map(|s| (sp.coefficient(s) - tightness_coefficient(n, d, s)).abs())
        .fold(0.0, f64::max);
    let g = sp.growth(d);
    let target = (big_n as f64).powf(d as f64 / 2.0 - 1.0) / 2.0;
    check(
        (g - target).abs() <= 1e-9 && nonzero.len() == 64 && magnitudes_ok && entrywise <= 1e-9,
        format!(
            "level-3 growth {g:.12} (target {target}), {} nonconstant nonzero coefficients of magnitude {magnitude}, max dev from closed form {entrywise:.2e}",
            nonzero.len()
        ),
    )
}

fn clean_qubit_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut worst = 0.0f64;
    let mut lines = Vec::new();
    for trial in 0..3 {
        let w = rng.random_range(0..=1);
        let d = rng.random_range(1..=2);
        let space = IndexSpace::new(2, w, 3).map_err(|e| e.to_string())?;
        let spec = random_spec(Model::Dqck, space, d, &mut rng).map_err(|e| e.to_string())?;
        for t in 1..=2u32 {
            let reduced = reduce_clean_qubits(&spec, t).map_err(|e| e.to_string())?;
            let ratio = 2f64.powi(-(t as i32) - 1);
            for y in 0..16usize {
                let x = Restriction::all_free(4).expand(y);
                let b0 = bias(acceptance_direct(&spec, &x).map_err(|e| e.to_string())?);
                let b1 = bias(acceptance_direct(&reduced, &x).map_err(|e| e.to_string())?);
                worst = worst.max((b1 - ratio * b0).abs());
            }
            lines.push(format!("trial {trial} t={t} ratio {ratio}"));
        }
    }
    check(
        worst <= 1e-9,
        format!("{} (spec, t) runs over all 16 inputs, max |bias' − 2^(−t−1)·bias| {worst:.2e}", lines.len()),
    )
}

fn oracle_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut worst = 0.0f64;
    let mut runs = 0;
    let dqc1 = IndexSpace::new(1, 0, 1).map_err(|e| e.to_string())?;
    let plain = IndexSpace::new(2, 0, 0).map_err(|e| e.to_string())?;
    for _ in 0..10 {
        for (model, space) in [(Model::Dqck, dqc1), (Model::Bqp, plain), (Model::HalfBqp, plain)] {
            let spec = random_spec(model, space, 2, &mut rng).map_err(|e| e.to_string())?;
            let rho = Restriction::random(space.oracle_dim(), 0.5, &mut rng)
                .map_err(|e| e.to_string())?;
            for r in [None, Some(&rho)] {
                let wht = acceptance_spectrum(&spec, r).map_err(|e| e.to_string())?;
                let direct = direct_spectrum(&spec, r).map_err(|e| e.to_string())?;
                let mut routes = vec![direct];
                if model == Model::Dqck {
                    routes.push(spectrum_via_decomposition(&spec, r).map_err(|e| e.to_string())?);
                }
                for other in routes {
                    for (a, b) in wht.coeffs().iter().zip(other.coeffs()) {
                        worst = worst.max((a - b).abs());
                    }
                }
                runs += 1;
            }
        }
    }
    check(
        worst <= 1e-8,
        format!("{runs} spectra, max deviation across WHT/direct/decomposition {worst:.2e}"),
    )
}

fn random_gamma(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..len).map(|_| if rng.random() { 1.0 } else { -1.0 }).collect()
}

/// ½BQP spectrum over `3·nb` data coordinates seen through a controlled
/// oracle: the doubled input's first half is fixed to `+1`, and in each data
/// block only the first `free` coordinates stay free (the rest get random
/// signs). Returns the spectrum and the data coordinate of each free variable.
fn controlled_half_bqp(
    nb: usize,
    free: usize,
    d: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(qfgrowth::FourierSpectrum, Vec<usize>), String> {
    let data = 3 * nb;
    let space = IndexSpace::with_oracle_dim(2 * data, 0, 0).map_err(|e| e.to_string())?;
    let spec = random_spec(Model::HalfBqp, space, d, rng).map_err(|e| e.to_string())?;
    let mut literals = Restriction::controlled(data).literals().to_vec();
    for i in 0..data {
        if i % nb >= free {
            literals[data + i] = if rng.random() { Literal::Plus } else { Literal::Minus };
        }
    }
    let rho = Restriction::new(literals);
    let vars = rho.free_indices().into_iter().map(|i| i - data).collect();
    let sp = acceptance_spectrum(&spec, Some(&rho)).map_err(|e| e.to_string())?;
    Ok((sp, vars))
}

fn signed_growth_sanity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let nb = 4;
    let (mut pairs, mut violations) = (0, 0);
    let (mut max_a, mut max_b) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let d = rng.random_range(1..=3);
        let (sp, vars) = controlled_half_bqp(nb, nb, d, &mut rng)?;
        for _ in 0..5 {
            let alpha = SignFamily::alpha(random_gamma(3 * nb, &mut rng)).map_err(|e| e.to_string())?;
            let beta = SignFamily::beta(random_gamma(3 * nb, &mut rng)).map_err(|e| e.to_string())?;
            let la = signed_growth_mapped(&sp, &vars, &alpha).map_err(|e| e.to_string())?;
            let lb = signed_growth_mapped(&sp, &vars, &beta).map_err(|e| e.to_string())?;
            max_a = max_a.max(la.abs());
            max_b = max_b.max(lb.abs());
            if !within_bound(la.abs(), sp.growth(3)) || !within_bound(lb.abs(), sp.growth(6)) {
                violations += 1;
            }
            pairs += 1;
        }
    }

    let mut ratios = Vec::new();
    let d = 2;
    for (nb, free) in [(4usize, 4usize), (8, 4), (16, 3)] {
        let (sp, vars) = controlled_half_bqp(nb, free, d, &mut rng)?;
        let alpha = SignFamily::alpha(random_gamma(3 * nb, &mut rng)).map_err(|e| e.to_string())?;
        let la = signed_growth_mapped(&sp, &vars, &alpha).map_err(|e| e.to_string())?;
        let ratio = la.abs() / ((d * d * d) as f64 * (nb as f64).sqrt());
        ratios.push(format!("N={nb}: {ratio:.3e}"));
    }
    let (ht, ht_rho) = hadamard_test_circuit(3, 2).map_err(|e| e.to_string())?;
    let ht_sp = acceptance_spectrum(&ht, Some(&ht_rho)).map_err(|e| e.to_string())?;
    let ones = SignFamily::alpha(vec![1.0; 12]).map_err(|e| e.to_string())?;
    let vars: Vec<usize> = (0..12).collect();
    let ht_l = signed_growth_mapped(&ht_sp, &vars, &ones).map_err(|e| e.to_string())?;
    check(
        violations == 0,
        format!(
            "{pairs} pairs, {violations} violations, max |L^α| {max_a:.3e}, max |L^β| {max_b:.3e}; |L^α|/(d³√N) at d={d} [{}]; 3-query Hadamard test at N=4, γ≡1: L^α = {ht_l:.6}",
            ratios.join(", ")
        ),
    )
}

fn hybrid_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let (mut violations, mut checks, mut tightest) = (0, 0, 0.0f64);
    for _ in 0..10 {
        let w = rng.random_range(0..=1);
        let k = rng.random_range(1..=2);
        let d = rng.random_range(1..=2);
        let depth = rng.random_range(0..=d);
        let space = IndexSpace::new(2, w, k).map_err(|e| e.to_string())?;
        let h = random_hybrid(Model::Dqck, space, d, depth, &mut rng).map_err(|e| e.to_string())?;
        let sp = hybrid_spectrum(&h, None).map_err(|e| e.to_string())?;
        for l in [2, 3] {
            let ceiling = hybrid_dqck_ceiling(k, 4, d, l).map_err(|e| e.to_string())?;
            let g = sp.growth(l);
            checks += 1;
            if ceiling > 0.0 {
                tightest = tightest.max(g / ceiling);
            }
            if !within_bound(g, ceiling) {
                violations += 1;
            }
        }
    }
    check(
        violations == 0,
        format!("{checks} checks, {violations} violations, max growth/ceiling {tightest:.4}"),
    )
}

fn forrelation_pipeline() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(1..=6);
        let k = rng.random_range(1..=4);
        let inst = random_instance(k, n, &mut rng).map_err(|e| e.to_string())?;
        let dense = forr_dense(&inst).map_err(|e| e.to_string())?;
        worst = worst.max((forr(&inst) - dense).abs());
    }
    let mut trace_dev = 0.0f64;
    for (k, n) in [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (3, 2), (4, 1)] {
        let (spec, _) = trace_circuit(k, n).map_err(|e| e.to_string())?;
        for _ in 0..5 {
            let inst = random_instance(k, n, &mut rng).map_err(|e| e.to_string())?;
            let acc = acceptance_direct(&spec, &trace_input(&inst)).map_err(|e| e.to_string())?;
            let tr = normalized_trace(&inst).map_err(|e| e.to_string())?;
            trace_dev = trace_dev.max((acc - 0.5 - tr / 2.0).abs());
        }
    }
    check(
        worst <= 1e-12 && trace_dev <= 1e-9,
        format!("1000 instances, max |statevector − product| {worst:.2e}; trace circuit max dev {trace_dev:.2e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 10] = [
        ("decomposition correctness", decomposition_sweep, Some(Duration::from_secs(60))),
        ("acceptance-formula equivalence", formula_equivalence, Some(Duration::from_secs(30))),
        ("DQC(k) ceiling", || ceiling_harness(Model::Dqck, &[2, 3], 303), Some(Duration::from_secs(300))),
        ("BQP ceiling", || ceiling_harness(Model::Bqp, &[1, 2, 3], 404), None),
        ("tightness", tightness, None),
        ("clean-qubit reduction", clean_qubit_reduction, None),
        ("Fourier oracle agreement", oracle_agreement, None),
        ("signed-growth sanity", signed_growth_sanity, None),
        ("hybrid bound", hybrid_bound, None),
        ("forrelation pipeline", forrelation_pipeline, None),
    ];
    let mut all = true;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = limit.is_some_and(|l| elapsed > l);
        let (ok, detail) = match outcome {
            Ok(d) if !over => (true, d),
            Ok(d) => (false, format!("{d}; took {elapsed:.1?}, limit {:?}", limit.unwrap())),
            Err(d) => (false, d),
        };
        all &= ok;
        println!(
            "criterion {:>2} {} {name}: {detail} [{elapsed:.2?}]",
            i + 1,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
