use std::path::Path;

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use qfgrowth::bounds::{bqp_ceiling, dqck_ceiling, hybrid_dqck_ceiling};
use qfgrowth::decomposition::verify;
use qfgrowth::fourier::{acceptance_spectrum, hybrid_spectrum, FourierSpectrum};
use qfgrowth::forrelation::{
    classify_value, default_eps, forr, forr_dense, forrelated_instance, random_instance,
    tightness_circuit, tightness_coefficient, ForrelationInstance, Label,
};
use qfgrowth::linalg::{within_bound, IndexSpace};
use qfgrowth::models::{acceptance_direct, bias, reduce_clean_qubits, SpecDocument};
use qfgrowth::sampling::{random_decomposition_spec, random_hybrid, random_spec};
use qfgrowth::{AlgorithmSpec, Model, Restriction};

use crate::output::emit;
use crate::{
    ForrelationArgs, Generator, GrowthArgs, HybridArgs, ReduceArgs, SpectrumArgs, TightnessArgs,
    VerifyArgs,
};

/// Independent stream per trial so results do not depend on scheduling.
fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

#[derive(Serialize)]
struct Echo<'a, A: Serialize> {
    command: &'static str,
    #[serde(flatten)]
    args: &'a A,
}

fn echo<'a, A: Serialize>(command: &'static str, args: &'a A) -> Echo<'a, A> {
    Echo { command, args }
}

enum RestrictionPolicy {
    None,
    Fixed(Restriction),
    Random(f64),
}

impl RestrictionPolicy {
    fn parse(text: Option<&str>) -> Result<Self> {
        let Some(text) = text else {
            return Ok(Self::None);
        };
        if let Some(p) = text.strip_prefix("random:") {
            let p: f64 = p.parse().with_context(|| format!("bad star probability {p:?}"))?;
            if !(0.0..=1.0).contains(&p) {
                bail!("star probability {p} outside [0,1]");
            }
            return Ok(Self::Random(p));
        }
        Ok(Self::Fixed(text.parse()?))
    }

    fn draw(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<Option<Restriction>> {
        Ok(match self {
            Self::None => None,
            Self::Fixed(r) => {
                r.check_len(n)?;
                Some(r.clone())
            }
            Self::Random(p) => Some(Restriction::random(n, *p, rng)?),
        })
    }
}

fn check_levels(levels: &[usize]) -> Result<()> {
    if levels.is_empty() || levels.contains(&0) {
        bail!("levels must be a nonempty list of positive integers");
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_spec(path: &Path) -> Result<(AlgorithmSpec, Option<Restriction>)> {
    Ok(SpecDocument::from_json(&read(path)?)?.build()?)
}

fn ceiling(model: Model, k: u32, n_vars: usize, d: usize, level: usize) -> Result<(f64, &'static str)> {
    Ok(match model {
        Model::Dqck if level >= 2 => (dqck_ceiling(k, n_vars, d, level)?, "dqck"),
        _ => (bqp_ceiling(n_vars, d, level), "bqp"),
    })
}

#[derive(Serialize)]
struct GrowthRow {
    model: Model,
    n_vars: usize,
    w: u32,
    k: u32,
    d: usize,
    level: usize,
    trials: usize,
    observed_max: f64,
    ceiling: f64,
    ceiling_source: &'static str,
    pass: bool,
}

fn max_per_level(spectra: &[FourierSpectrum], levels: &[usize]) -> Vec<f64> {
    levels
        .iter()
        .map(|&l| spectra.iter().map(|s| s.growth(l)).fold(0.0, f64::max))
        .collect()
}

pub fn growth(a: &GrowthArgs) -> Result<bool> {
    check_levels(&a.levels)?;
    let policy = RestrictionPolicy::parse(a.restriction.as_deref())?;
    let fixed = a.spec.as_deref().map(load_spec).transpose()?;
    let (model, space, d) = match &fixed {
        Some((spec, _)) => (spec.model(), spec.space(), spec.d()),
        None => {
            let k = a.k.unwrap_or(if a.model == Model::Dqck { 1 } else { 0 });
            (a.model, IndexSpace::new(a.n, a.w, k)?, a.d)
        }
    };
    let n_vars = space.oracle_dim();
    let spectra = (0..a.trials)
        .into_par_iter()
        .map(|t| -> Result<FourierSpectrum> {
            let mut rng = trial_rng(a.common.seed, t);
            let (spec, doc_rho) = match &fixed {
                Some((spec, rho)) => (spec.clone(), rho.clone()),
                None => (random_spec(model, space, d, &mut rng)?, None),
            };
            let rho = policy.draw(n_vars, &mut rng)?.or(doc_rho);
            Ok(acceptance_spectrum(&spec, rho.as_ref())?)
        })
        .collect::<Result<Vec<_>>>()?;
    let observed = max_per_level(&spectra, &a.levels);
    let mut rows = Vec::new();
    for (&level, &obs) in a.levels.iter().zip(&observed) {
        let (ceil, source) = ceiling(model, space.k(), n_vars, d, level)?;
        rows.push(GrowthRow {
            model,
            n_vars,
            w: space.w(),
            k: space.k(),
            d,
            level,
            trials: a.trials,
            observed_max: obs,
            ceiling: ceil,
            ceiling_source: source,
            pass: within_bound(obs, ceil),
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    emit(&echo("growth", a), &rows, a.common.format, a.common.out.as_deref())?;
    Ok(pass)
}

#[derive(Serialize)]
struct HybridRow {
    n_vars: usize,
    w: u32,
    k: u32,
    d: usize,
    depth: usize,
    level: usize,
    trials: usize,
    observed_max: f64,
    ceiling: f64,
    pass: bool,
}

pub fn hybrid_growth(a: &HybridArgs) -> Result<bool> {
    check_levels(&a.levels)?;
    if a.levels.contains(&1) {
        bail!("the hybrid ceiling is stated for levels ≥ 2");
    }
    let policy = RestrictionPolicy::parse(a.restriction.as_deref())?;
    let space = IndexSpace::new(a.n, a.w, a.k)?;
    let depth = a.depth.unwrap_or(a.d);
    if depth > a.d {
        bail!("tree depth {depth} exceeds d = {}", a.d);
    }
    let n_vars = space.oracle_dim();
    let spectra = (0..a.trials)
        .into_par_iter()
        .map(|t| -> Result<FourierSpectrum> {
            let mut rng = trial_rng(a.common.seed, t);
            let h = random_hybrid(Model::Dqck, space, a.d, depth, &mut rng)?;
            let rho = policy.draw(n_vars, &mut rng)?;
            Ok(hybrid_spectrum(&h, rho.as_ref())?)
        })
        .collect::<Result<Vec<_>>>()?;
    let observed = max_per_level(&spectra, &a.levels);
    let mut rows = Vec::new();
    for (&level, &obs) in a.levels.iter().zip(&observed) {
        let ceil = hybrid_dqck_ceiling(a.k, n_vars, a.d, level)?;
        rows.push(HybridRow {
            n_vars,
            w: a.w,
            k: a.k,
            d: a.d,
            depth,
            level,
            trials: a.trials,
            observed_max: obs,
            ceiling: ceil,
            pass: within_bound(obs, ceil),
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    emit(&echo("hybrid-growth", a), &rows, a.common.format, a.common.out.as_deref())?;
    Ok(pass)
}

#[derive(Serialize)]
struct VerifyRow {
    trial: usize,
    equality_pairs: String,
    memory_steps: String,
    ignored: String,
    entries_checked: usize,
    max_entry_deviation: f64,
    max_factor_norm: f64,
    product_frobenius: f64,
    min_input_frobenius: f64,
    block_structure: bool,
    reversal_deviation: Option<f64>,
    pass: bool,
}

fn join<T: std::fmt::Debug>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn verify_decomposition(a: &VerifyArgs) -> Result<bool> {
    let space = IndexSpace::new(a.n, a.w, a.k)?;
    let n_tilde = a.n_tilde.unwrap_or(space.oracle_dim().min(4));
    let reports = (0..a.trials)
        .into_par_iter()
        .map(|t| -> Result<_> {
            let mut rng = trial_rng(a.common.seed, t);
            let spec = random_decomposition_spec(space, a.d, n_tilde, a.pairs, a.memory, &mut rng)?;
            let mut report = verify(&spec)?;
            report.seed = Some(a.common.seed);
            Ok(report)
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = reports.iter().all(|r| r.pass);
    match a.common.format {
        crate::output::Format::Json => {
            emit(&echo("verify-decomposition", a), &reports, a.common.format, a.common.out.as_deref())?
        }
        crate::output::Format::Csv => {
            let rows: Vec<VerifyRow> = reports
                .iter()
                .enumerate()
                .map(|(trial, r)| VerifyRow {
                    trial,
                    equality_pairs: join(&r.spec.equality_pairs),
                    memory_steps: join(&r.spec.memory_indices),
                    ignored: join(&r.spec.ignored),
                    entries_checked: r.entries_checked,
                    max_entry_deviation: r.max_entry_deviation,
                    max_factor_norm: r.max_factor_norm,
                    product_frobenius: r.product_frobenius,
                    min_input_frobenius: r.min_input_frobenius,
                    block_structure: r.block_structure,
                    reversal_deviation: r.reversal_deviation,
                    pass: r.pass,
                })
                .collect();
            emit(&echo("verify-decomposition", a), &rows, a.common.format, a.common.out.as_deref())?
        }
    }
    Ok(pass)
}

#[derive(Serialize)]
struct ForrRow {
    trial: usize,
    k: usize,
    n: u32,
    forr: f64,
    forr_dense: f64,
    eps: f64,
    label: Label,
}

pub fn forrelation(a: &ForrelationArgs) -> Result<bool> {
    let instances: Vec<ForrelationInstance> = match &a.spec {
        Some(path) => vec![ForrelationInstance::from_json(&read(path)?)?],
        None => (0..a.trials)
            .map(|t| {
                let mut rng = trial_rng(a.common.seed, t);
                Ok(match a.generator {
                    Generator::Uniform => random_instance(a.k, a.n, &mut rng)?,
                    Generator::Forrelated => forrelated_instance(a.k, a.n, &mut rng)?,
                })
            })
            .collect::<Result<_>>()?,
    };
    let mut rows = Vec::new();
    let mut agree = true;
    for (trial, inst) in instances.iter().enumerate() {
        let eps = match a.eps {
            Some(e) => e,
            None => default_eps(inst.k(), inst.len())?,
        };
        let v = forr(inst);
        let dense = forr_dense(inst)?;
        agree &= (v - dense).abs() <= 1e-12;
        rows.push(ForrRow {
            trial,
            k: inst.k(),
            n: inst.n(),
            forr: v,
            forr_dense: dense,
            eps,
            label: classify_value(v, eps)?,
        });
    }
    emit(&echo("forrelation", a), &rows, a.common.format, a.common.out.as_deref())?;
    Ok(agree)
}

#[derive(Serialize)]
struct TightnessReport {
    n: u32,
    d: usize,
    big_n: usize,
    level_d_growth: f64,
    expected_growth: f64,
    nonzero_coefficients: usize,
    expected_nonzero: usize,
    expected_magnitude: f64,
    max_closed_form_deviation: f64,
    pass: bool,
}

pub fn tightness(a: &TightnessArgs) -> Result<bool> {
    let (spec, rho) = tightness_circuit(a.n, a.d)?;
    let sp = acceptance_spectrum(&spec, Some(&rho))?;
    let big_n = 1usize << a.n;
    let nf = big_n as f64;
    let expected_growth = nf.powf(a.d as f64 / 2.0 - 1.0) / 2.0;
    let expected_magnitude = 1.0 / (2.0 * nf * nf.powf(a.d as f64 / 2.0));
    let nonzero = sp.support(1e-12).into_iter().filter(|&s| s != 0).count();
    let deviation = (0..sp.coeffs().len())
        .map(|s| (sp.coefficient(s) - tightness_coefficient(a.n, a.d, s)).abs())
        .fold(0.0, f64::max);
    let growth = sp.growth(a.d);
    let expected_nonzero = big_n.pow(a.d as u32);
    let report = TightnessReport {
        n: a.n,
        d: a.d,
        big_n,
        level_d_growth: growth,
        expected_growth,
        nonzero_coefficients: nonzero,
        expected_nonzero,
        expected_magnitude,
        max_closed_form_deviation: deviation,
        pass: (growth - expected_growth).abs() <= 1e-9
            && nonzero == expected_nonzero
            && deviation <= 1e-9,
    };
    let pass = report.pass;
    emit(&echo("tightness", a), &[&report], a.common.format, a.common.out.as_deref())?;
    Ok(pass)
}

#[derive(Serialize)]
struct SpectrumRow {
    subset: String,
    level: u32,
    coefficient: f64,
}

pub fn spectrum(a: &SpectrumArgs) -> Result<bool> {
    let policy = RestrictionPolicy::parse(a.restriction.as_deref())?;
    let mut rng = trial_rng(a.common.seed, 0);
    let sp = match (&a.spec, &a.table) {
        (Some(path), None) => {
            let (spec, doc_rho) = load_spec(path)?;
            let rho = policy.draw(spec.num_vars(), &mut rng)?.or(doc_rho);
            acceptance_spectrum(&spec, rho.as_ref())?
        }
        (None, Some(path)) => {
            let table: Vec<f64> = serde_json::from_str(&read(path)?)?;
            let sp = FourierSpectrum::from_truth_table(&table)?;
            match policy.draw(sp.num_vars(), &mut rng)? {
                Some(rho) => sp.restrict(&rho)?,
                None => sp,
            }
        }
        _ => bail!("give exactly one of --spec or --table"),
    };
    let rows: Vec<SpectrumRow> = sp
        .to_csv_rows(a.tol)
        .into_iter()
        .map(|(s, c)| SpectrumRow {
            subset: join((0..sp.num_vars()).filter(|i| (s >> i) & 1 == 1)),
            level: s.count_ones(),
            coefficient: c,
        })
        .collect();
    emit(&echo("spectrum", a), &rows, a.common.format, a.common.out.as_deref())?;
    Ok(true)
}

#[derive(Serialize)]
struct ReduceRow {
    trial: usize,
    t: u32,
    k: u32,
    reduced_k: u32,
    inputs: usize,
    expected_ratio: f64,
    observed_ratio_min: Option<f64>,
    observed_ratio_max: Option<f64>,
    max_deviation: f64,
    pass: bool,
}

pub fn reduce(a: &ReduceArgs) -> Result<bool> {
    let space = IndexSpace::new(a.n, a.w, a.k)?;
    let n_vars = space.oracle_dim();
    if n_vars > 12 {
        bail!("reduce enumerates all 2^N inputs; N = {n_vars} is above 12");
    }
    let expected = 2f64.powi(-(a.t as i32) - 1);
    let rows = (0..a.trials)
        .into_par_iter()
        .map(|trial| -> Result<ReduceRow> {
            let mut rng = trial_rng(a.common.seed, trial);
            let spec = random_spec(Model::Dqck, space, a.d, &mut rng)?;
            let reduced = reduce_clean_qubits(&spec, a.t)?;
            let all = Restriction::all_free(n_vars);
            let (mut lo, mut hi, mut dev) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
            for y in 0..1usize << n_vars {
                let x = all.expand(y);
                let b0 = bias(acceptance_direct(&spec, &x)?);
                let b1 = bias(acceptance_direct(&reduced, &x)?);
                dev = dev.max((b1 - expected * b0).abs());
                if b0.abs() > 1e-6 {
                    lo = lo.min(b1 / b0);
                    hi = hi.max(b1 / b0);
                }
            }
            Ok(ReduceRow {
                trial,
                t: a.t,
                k: a.k,
                reduced_k: reduced.space().k(),
                inputs: 1 << n_vars,
                expected_ratio: expected,
                observed_ratio_min: lo.is_finite().then_some(lo),
                observed_ratio_max: hi.is_finite().then_some(hi),
                max_deviation: dev,
                pass: dev <= 1e-9,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = rows.iter().all(|r| r.pass);
    emit(&echo("reduce", a), &rows, a.common.format, a.common.out.as_deref())?;
    Ok(pass)
}
