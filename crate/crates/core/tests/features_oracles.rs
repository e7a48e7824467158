use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use saccade_lab::features::{
    extract_features, write_feature_tensor, FeatureBackend, FeatureTensor, Level,
};
use saccade_lab::gbvs::{activation_weights, gbvs_saliency, graph_equilibrium};
use saccade_lab::recognition::{recognition_distance, recognition_input};
use saccade_lab::synth::{textured_scene, SceneParams};
use saccade_lab::{normalize_map, AttentionMap, ImageGrid, MapKind};

fn eigen_oracle(values: &[f64], side: usize, sigma: f64) -> Vec<f64> {
    let n = side * side;
    let w = activation_weights(values, side, side, sigma);
    let d: Vec<f64> = (0..n).map(|i| w[i * n..(i + 1) * n].iter().sum()).collect();
    let s = DMatrix::from_fn(n, n, |i, j| w[i * n + j] / (d[i] * d[j]).sqrt());
    let eigen = SymmetricEigen::new(s);
    let v = eigen
        .eigenvectors
        .column(eigen.eigenvalues.imax())
        .into_owned();
    let pi: Vec<f64> = (0..n).map(|i| (v[i] * d[i].sqrt()).abs()).collect();
    let total: f64 = pi.iter().sum();
    pi.iter().map(|p| p / total).collect()
}

#[test]
fn equilibrium_matches_dense_eigensolver() {
    for (seed, sigma) in [(1u64, 0.15), (2, 0.3), (3, 0.08)] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..256).map(|_| rng.random::<f64>()).collect();
        let eq = graph_equilibrium(&values, 16, 16, sigma, 1e-13, 200_000);
        assert!(eq.converged);
        let l1: f64 = eigen_oracle(&values, 16, sigma)
            .iter()
            .zip(&eq.distribution)
            .map(|(a, b)| (a - b).abs())
            .sum();
        assert!(l1 < 1e-4, "seed {seed}: L1 {l1}");
    }
}

#[test]
fn constant_image_gives_uniform_saliency() {
    let img = ImageGrid::constant(80, 60, 3, 0.7, 0.05).unwrap();
    let map = gbvs_saliency(&img).map;
    let u = 1.0 / map.values().len() as f64;
    assert!(map.values().iter().all(|v| (v - u).abs() < 1e-6));
}

#[test]
fn import_backend_passes_tensor_dims_through() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("f.fmap");
    let tensor = FeatureTensor::new(8, 16, 16, vec![0.25; 8 * 256], 8.0).unwrap();
    write_feature_tensor(&file, &tensor).unwrap();
    let img = ImageGrid::constant(33, 17, 1, 0.1, 0.1).unwrap();
    let got = extract_features(&img, &FeatureBackend::import(&file), Level::Search).unwrap();
    assert_eq!((got.channels(), got.height(), got.width()), (8, 16, 16));
}

#[test]
fn orthogonal_imported_vectors_have_unit_distance() {
    let dir = tempfile::tempdir().unwrap();
    let backend = FeatureBackend::import(dir.path());
    let search = textured_scene(
        4,
        &SceneParams {
            size_px: 64,
            ..Default::default()
        },
    )
    .unwrap();
    let target = ImageGrid::constant(16, 16, 3, 0.5, search.dva_per_px()).unwrap();
    let center = (2.0, 2.0);
    let patch = recognition_input(&search, center, 1.0, &backend).unwrap();
    let unit = |k: usize| {
        let mut v = vec![0.0f32; 4];
        v[k] = 1.0;
        FeatureTensor::new(4, 1, 1, v, 8.0).unwrap()
    };
    write_feature_tensor(
        dir.path().join(format!("{}.fmap", patch.fingerprint())),
        &unit(0),
    )
    .unwrap();
    write_feature_tensor(
        dir.path().join(format!("{}.fmap", target.fingerprint())),
        &unit(2),
    )
    .unwrap();
    let d = recognition_distance(&search, center, &target, &backend, 1.0).unwrap();
    assert!((d - 1.0).abs() < 1e-9, "distance {d}");
}

#[test]
fn builtin_features_are_bit_identical_across_calls() {
    let img = textured_scene(9, &SceneParams::default()).unwrap();
    let b = FeatureBackend::builtin();
    let a = extract_features(&img, &b, Level::Search).unwrap();
    let c = extract_features(&img, &b, Level::Search).unwrap();
    assert!(a
        .values()
        .iter()
        .zip(c.values())
        .all(|(x, y)| x.to_bits() == y.to_bits()));
    assert_eq!(a.channels(), 14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gbvs_output_is_a_distribution(seed in 0u64..10_000, w in 8usize..48, h in 8usize..48, gray: bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let channels = if gray { 1 } else { 3 };
        let img = ImageGrid::from_fn(w, h, channels, 0.1, |_, _, _| rng.random::<f64>()).unwrap();
        let map = gbvs_saliency(&img).map;
        let sum: f64 = map.values().iter().sum();
        prop_assert!(map.values().iter().all(|v| *v >= 0.0));
        prop_assert!((sum - 1.0).abs() < 1e-6);
    }

    #[test]
    fn normalization_keeps_argmax(values in prop::collection::vec(-50.0..50.0f64, 2..60)) {
        let n = values.len();
        let map = AttentionMap::new(1, n, values, MapKind::Saliency).unwrap();
        let norm = normalize_map(&map);
        let (lo, hi) = norm.min_max();
        if map.min_max().0 < map.min_max().1 {
            prop_assert_eq!((lo, hi), (0.0, 1.0));
            prop_assert_eq!(norm.argmax(), map.argmax());
        }
    }
}
