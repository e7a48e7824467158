//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//!     cargo test -p saccade-lab-core --test acceptance

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use saccade_lab::engine::{
    memory_decay_value, run_null_model, trial_rng, Ablation, ModelConfig, SaccadePrior, Simulator,
    TrialInput,
};
use saccade_lab::features::{
    decode_feature_tensor, encode_feature_tensor, extract_features, FeatureBackend, Level,
};
use saccade_lab::gbvs::{activation_weights, gbvs_saliency, graph_equilibrium, GbvsParams};
use saccade_lab::io::{format_fixation_log, parse_fixation_log};
use saccade_lab::metrics::{
    detect_return_fixations, kl_divergence, recognition_error_rates, shannon_entropy,
    similarity_index, trial_return_proportion, turning_angles, FixationClass, ProportionOptions,
    ReturnAnnotation, ReturnOffsets, TurningAngles, DEFAULT_ANGLE_BIN_DEG,
};
use saccade_lab::synth::{planted_target_scene, textured_scene, SceneParams};
use saccade_lab::{ImageGrid, Scanpath, Source, StopReason};

const FREE_VIEWING_SCENES: u64 = 20;
const NULL_SEQUENCES: usize = 1000;
const RETURN_PROPORTION_RANGE: (f64, f64) = (0.02, 0.40);
const RUNTIME_LIMIT: Duration = Duration::from_secs(60);
const OFFSET_SPLIT: usize = 3;
const ABLATION_TRIALS: u64 = 50;
const PRIOR_SACCADES: usize = 10_000;
const KS_LIMIT: f64 = 0.05;
const CLOSED_FORM_TOL: f64 = 1e-6;
const KLD_REFERENCE: (f64, f64) = (0.3681, 1e-4);
const IDENTICAL_KLD_TOL: f64 = 1e-9;
const GBVS_ORACLE_SIDE: usize = 16;
const GBVS_L1_TOL: f64 = 1e-4;
const GBVS_UNIFORM_TOL: f64 = 1e-6;
const SEARCH_TRIALS: u64 = 50;
const SEARCH_TARGET_PX: usize = 16;
const SEARCH_THRESHOLD: f64 = 0.5;
const SEARCH_MAX_FIXATIONS: usize = 20;
const SEARCH_MIN_SUCCESS: f64 = 0.8;
const MONOTONICITY_THRESHOLDS: [f64; 4] = [1.0, 2.0, 3.0, 4.0];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

struct FreeViewing {
    scanpaths: Vec<Scanpath>,
    annotations: Vec<ReturnAnnotation>,
    dims_dva: (f64, f64),
    elapsed: Duration,
}

fn free_viewing_scanpaths(seeds: std::ops::Range<u64>, ablation: Ablation) -> Vec<Scanpath> {
    let backend = FeatureBackend::builtin();
    let prior = SaccadePrior::default_gamma();
    let params = SceneParams::default();
    seeds
        .map(|seed| {
            let image = textured_scene(seed, &params).expect("scene");
            let config = ModelConfig {
                seed,
                ablation,
                ..ModelConfig::free_viewing()
            };
            let sim = Simulator::new(&config, &backend, &prior).expect("config");
            let id = format!("scene{seed:02}");
            sim.run(&TrialInput::new(&id, &image, None), false)
                .expect("run")
                .scanpath
        })
        .collect()
}

fn annotate(scanpaths: &[Scanpath], threshold: f64) -> Vec<ReturnAnnotation> {
    scanpaths
        .iter()
        .map(|s| detect_return_fixations(s, threshold).expect("annotate"))
        .collect()
}

fn mean_proportion(annotations: &[ReturnAnnotation]) -> f64 {
    let total: f64 = annotations
        .iter()
        .map(|a| trial_return_proportion(a, ProportionOptions::default()))
        .sum();
    total / annotations.len() as f64
}

fn free_viewing() -> FreeViewing {
    let start = Instant::now();
    let scanpaths = free_viewing_scanpaths(0..FREE_VIEWING_SCENES, Ablation::None);
    let annotations = annotate(&scanpaths, 1.0);
    let p = SceneParams::default();
    let side = p.size_px as f64 * p.dva_per_px;
    FreeViewing {
        scanpaths,
        annotations,
        dims_dva: (side, side),
        elapsed: start.elapsed(),
    }
}

fn criterion_emergence(fv: &FreeViewing) -> Outcome {
    let start = Instant::now();
    let model = mean_proportion(&fv.annotations);
    let length = fv.scanpaths[0].len();
    let prior = SaccadePrior::default_gamma();
    let mut rng = trial_rng(0, "null");
    let nulls: Vec<Scanpath> = (0..NULL_SEQUENCES)
        .map(|_| run_null_model(&prior, length, fv.dims_dva, &mut rng).expect("null"))
        .collect();
    let null = mean_proportion(&annotate(&nulls, 1.0));
    let elapsed = fv.elapsed + start.elapsed();
    let (lo, hi) = RETURN_PROPORTION_RANGE;
    outcome(
        (lo..=hi).contains(&model) && model > null && elapsed < RUNTIME_LIMIT,
        format!(
            "model {model:.3} in [{lo}, {hi}], null {null:.3} over {NULL_SEQUENCES} sequences of {length}, {:.1}s < {}s",
            elapsed.as_secs_f64(),
            RUNTIME_LIMIT.as_secs()
        ),
    )
}

fn criterion_offsets(fv: &FreeViewing) -> Outcome {
    let offsets = ReturnOffsets::pooled(&fv.annotations);
    let near = offsets.mass_up_to(OFFSET_SPLIT);
    let far = offsets.histogram.total() - near;
    outcome(
        near > far,
        format!("offsets <= {OFFSET_SPLIT}: {near}, > {OFFSET_SPLIT}: {far}"),
    )
}

fn criterion_reversal(fv: &FreeViewing) -> Outcome {
    let mut pooled: Option<TurningAngles> = None;
    for (s, a) in fv.scanpaths.iter().zip(&fv.annotations) {
        let t = turning_angles(s, a, DEFAULT_ANGLE_BIN_DEG).expect("angles");
        match &mut pooled {
            Some(p) => p.merge(&t).expect("merge"),
            None => pooled = Some(t),
        }
    }
    let returns = pooled.expect("scenes").returns;
    let counts = returns.counts();
    let last = counts.len() - 1;
    let peak = counts[last];
    let unique_max = counts[..last].iter().all(|c| *c < peak);
    outcome(
        unique_max,
        format!(
            "bin [168, 180] holds {peak} of {} return angles; next best {}",
            returns.total(),
            { counts[..last].iter().cloned().fold(0.0, f64::max) }
        ),
    )
}

fn criterion_ablations() -> Outcome {
    let seeds = 0..ABLATION_TRIALS;
    let full = mean_proportion(&annotate(
        &free_viewing_scanpaths(seeds.clone(), Ablation::None),
        1.0,
    ));
    let defective = mean_proportion(&annotate(
        &free_viewing_scanpaths(seeds.clone(), Ablation::DefectiveMemory),
        1.0,
    ));
    let no_maps = mean_proportion(&annotate(
        &free_viewing_scanpaths(seeds.clone(), Ablation::NoSimilaritySaliency),
        1.0,
    ));
    let infinite_returns: usize =
        annotate(&free_viewing_scanpaths(seeds, Ablation::InfiniteIor), 1.0)
            .iter()
            .map(|a| a.count(FixationClass::Return))
            .sum();
    outcome(
        defective > full && no_maps < full && infinite_returns == 0,
        format!(
            "full {full:.3}, defective_memory {defective:.3}, no_similarity_saliency {no_maps:.3}, infinite_ior returns {infinite_returns} ({ABLATION_TRIALS} trials)"
        ),
    )
}

fn criterion_prior() -> Outcome {
    let prior = SaccadePrior::default_gamma();
    let mut rng = trial_rng(5, "prior");
    let path =
        run_null_model(&prior, PRIOR_SACCADES + 1, (1000.0, 1000.0), &mut rng).expect("null");
    let mut sizes: Vec<f64> = path
        .fixations
        .windows(2)
        .map(|w| w[0].distance(&w[1]))
        .collect();
    sizes.sort_by(f64::total_cmp);
    // two-sided KS distance against the prior CDF
    let n = sizes.len() as f64;
    let ks = sizes
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let f = prior.cdf(*x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max);
    outcome(
        ks < KS_LIMIT,
        format!("KS {ks:.4} < {KS_LIMIT} over {} saccades", sizes.len()),
    )
}

fn criterion_closed_form() -> Outcome {
    let mut failures = Vec::new();
    for k in 0..10usize {
        let got = memory_decay_value(k, 0, 0.92, 0.5).expect("decay");
        let mut power = 1.0;
        for _ in 0..k {
            power *= 0.92;
        }
        let expected = if power > 0.5 { power } else { 0.5 };
        if (got - expected).abs() > CLOSED_FORM_TOL {
            failures.push(format!("decay({k}) = {got}, expected {expected}"));
        }
    }
    let onset = (0..10).find(|k| memory_decay_value(*k, 0, 0.92, 0.5).unwrap() == 0.5);
    if onset != Some(9) {
        failures.push(format!("clipping onset {onset:?}, expected 9"));
    }
    let si = similarity_index(0.2, 0.1).expect("si");
    if (si - 2.0 / 3.0).abs() > CLOSED_FORM_TOL {
        failures.push(format!("SI(0.2, 0.1) = {si}"));
    }
    let uniform = vec![1.0 / 1280.0; 1280];
    let h = shannon_entropy(&uniform);
    if (h - 1280f64.ln()).abs() > CLOSED_FORM_TOL {
        failures.push(format!("uniform entropy {h}"));
    }
    let kld = kl_divergence(&[0.9, 0.1], &[0.5, 0.5]);
    let direct = 0.9 * (0.9f64 / 0.5).ln() + 0.1 * (0.1f64 / 0.5).ln();
    if (kld - KLD_REFERENCE.0).abs() > KLD_REFERENCE.1 || (kld - direct).abs() > CLOSED_FORM_TOL {
        failures.push(format!("KLD {kld}"));
    }
    let p = [0.1, 0.2, 0.3, 0.4];
    let same = kl_divergence(&p, &p);
    if same.abs() > IDENTICAL_KLD_TOL {
        failures.push(format!("identical KLD {same}"));
    }
    let detail = if failures.is_empty() {
        format!("decay 0..9, onset 9, SI {si:.6}, H {h:.6}, KLD {kld:.6}, KLD(p,p) {same:e}")
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

fn criterion_gbvs() -> Outcome {
    let side = GBVS_ORACLE_SIDE;
    let n = side * side;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let values: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let sigma = GbvsParams::default().sigma_fraction;
    let eq = graph_equilibrium(&values, side, side, sigma, 1e-13, 200_000);

    let w = activation_weights(&values, side, side, sigma);
    let degree: Vec<f64> = (0..n).map(|i| w[i * n..(i + 1) * n].iter().sum()).collect();
    let s = DMatrix::from_fn(n, n, |i, j| w[i * n + j] / (degree[i] * degree[j]).sqrt());
    let eigen = SymmetricEigen::new(s);
    let top = eigen.eigenvalues.imax();
    let v = eigen.eigenvectors.column(top);
    let unnormalized: Vec<f64> = (0..n).map(|i| (v[i] * degree[i].sqrt()).abs()).collect();
    let total: f64 = unnormalized.iter().sum();
    let l1: f64 = unnormalized
        .iter()
        .zip(&eq.distribution)
        .map(|(o, p)| (o / total - p).abs())
        .sum();

    let constant = ImageGrid::constant(64, 48, 3, 0.4, 0.05).expect("image");
    let map = gbvs_saliency(&constant).map;
    let u = 1.0 / map.values().len() as f64;
    let worst = map
        .values()
        .iter()
        .map(|v| (v - u).abs())
        .fold(0.0, f64::max);
    outcome(
        eq.converged && l1 < GBVS_L1_TOL && worst < GBVS_UNIFORM_TOL,
        format!("L1 to eigen oracle {l1:.2e} < {GBVS_L1_TOL:e}; constant image max deviation {worst:.2e} < {GBVS_UNIFORM_TOL:e}"),
    )
}

fn criterion_search() -> Outcome {
    let backend = FeatureBackend::builtin();
    let prior = SaccadePrior::default_gamma();
    let params = SceneParams::default();
    let mut scanpaths = Vec::new();
    let mut boxes = HashMap::new();
    for seed in 0..SEARCH_TRIALS {
        let scene = planted_target_scene(seed, &params, SEARCH_TARGET_PX, true).expect("scene");
        let config = ModelConfig {
            seed,
            recognition_threshold: SEARCH_THRESHOLD,
            ..ModelConfig::visual_search()
        };
        let sim = Simulator::new(&config, &backend, &prior).expect("config");
        let id = format!("search{seed:02}");
        let run = sim
            .run(
                &TrialInput::new(&id, &scene.search, Some(&scene.target)),
                false,
            )
            .expect("run");
        boxes.insert(id, scene.target_box_dva);
        scanpaths.push(run.scanpath);
    }
    let found = scanpaths
        .iter()
        .filter(|s| s.stop_reason == StopReason::TargetFound && s.len() <= SEARCH_MAX_FIXATIONS)
        .count();
    let share = found as f64 / scanpaths.len() as f64;
    let rates = recognition_error_rates(&scanpaths, &boxes)
        .expect("rates")
        .expect("trials");
    outcome(
        share >= SEARCH_MIN_SUCCESS && rates.false_positive == 0.0,
        format!(
            "found within {SEARCH_MAX_FIXATIONS} fixations in {found}/{SEARCH_TRIALS} (>= {SEARCH_MIN_SUCCESS}), FP rate {}",
            rates.false_positive
        ),
    )
}

fn figure_3i() -> Scanpath {
    let points = [
        (0.0, 0.0),
        (5.0, 0.0),
        (10.0, 0.0),
        (10.0, 5.0),
        (5.0, 5.0),
        (10.0, 0.3),
        (5.0, 5.2),
        (0.0, 10.0),
    ];
    Scanpath::from_points("s", "fig3i", &points, Source::Experimental)
}

fn criterion_determinism_and_formats() -> Outcome {
    let mut failures = Vec::new();
    let csv = |paths: &[Scanpath]| {
        let mut bytes = Vec::new();
        format_fixation_log(&mut bytes, paths).expect("format");
        bytes
    };
    let first = csv(&free_viewing_scanpaths(0..3, Ablation::None));
    let second = csv(&free_viewing_scanpaths(0..3, Ablation::None));
    if first != second {
        failures.push("repeated simulation differs".to_string());
    }
    let parsed = parse_fixation_log(first.as_slice()).expect("parse");
    if csv(&parsed) != first {
        failures.push("fixation log round trip differs".to_string());
    }

    let image = textured_scene(1, &SceneParams::default()).expect("scene");
    let tensor =
        extract_features(&image, &FeatureBackend::builtin(), Level::Search).expect("features");
    let decoded = decode_feature_tensor(&encode_feature_tensor(&tensor)).expect("decode");
    let bit_exact = decoded
        .values()
        .iter()
        .zip(tensor.values())
        .all(|(a, b)| a.to_bits() == b.to_bits());
    if decoded != tensor || !bit_exact {
        failures.push("FMAP round trip differs".to_string());
    }

    let ann = detect_return_fixations(&figure_3i(), 1.0).expect("annotate");
    let of = |class| -> Vec<usize> {
        (0..ann.len())
            .filter(|k| ann.classes[*k] == class)
            .map(|k| k + 1)
            .collect()
    };
    let classes = (
        of(FixationClass::Return),
        of(FixationClass::ToBeRevisited),
        of(FixationClass::NonReturn),
    );
    if classes != (vec![6, 7], vec![3, 5], vec![1, 2, 4, 8]) {
        failures.push(format!("hand-coded sequence classified as {classes:?}"));
    }
    let offset = ann.matched_index[5].map(|i| 5 - i - 1);
    if offset != Some(2) {
        failures.push(format!("offset 3 -> 6 is {offset:?}"));
    }
    let detail = if failures.is_empty() {
        "identical CSVs, lossless log and FMAP round trips, hand-coded sequence classified"
            .to_string()
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

fn criterion_monotonicity(fv: &FreeViewing) -> Outcome {
    let counts: Vec<usize> = MONOTONICITY_THRESHOLDS
        .iter()
        .map(|t| {
            annotate(&fv.scanpaths, *t)
                .iter()
                .map(|a| a.count(FixationClass::Return))
                .sum()
        })
        .collect();
    let ok = counts.windows(2).all(|w| w[0] <= w[1]);
    outcome(
        ok,
        format!("returns at {MONOTONICITY_THRESHOLDS:?} dva: {counts:?}"),
    )
}

fn main() -> ExitCode {
    let started = Instant::now();
    let fv = free_viewing();
    let results = [
        ("return-fixation emergence", criterion_emergence(&fv)),
        ("offset decay", criterion_offsets(&fv)),
        ("reversal peak", criterion_reversal(&fv)),
        ("ablation ordering", criterion_ablations()),
        ("saccade prior fidelity", criterion_prior()),
        ("closed-form checks", criterion_closed_form()),
        ("graph saliency correctness", criterion_gbvs()),
        ("search competence", criterion_search()),
        (
            "determinism and formats",
            criterion_determinism_and_formats(),
        ),
        ("threshold monotonicity", criterion_monotonicity(&fv)),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        results.len() - failed,
        results.len(),
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
