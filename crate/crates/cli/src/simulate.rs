use anyhow::{Context, Result};
use log::info;

use saccade_lab::engine::{RunOutcome, Simulator, TrialInput};
use saccade_lab::features::{encode_feature_tensor, FeatureTensor, SEARCH_STRIDE_PX};
use saccade_lab::io::{format_fixation_log, TrialManifest};
use saccade_lab::{AttentionMap, Scanpath};

use crate::args::Global;
use crate::output::{file_stem_for, Staged};
use crate::setup::{load_images, load_trials, Setup};

pub const SCANPATH_FILE: &str = "scanpaths.csv";

pub fn run(global: &Global) -> Result<()> {
    let setup = Setup::load(global)?;
    let trials = load_trials(global)?;
    let outcomes = setup.parallel(&trials, |t| simulate_trial(&setup, t, global.dump_maps))?;

    let mut staged = Staged::default();
    let scanpaths: Vec<Scanpath> = outcomes.iter().map(|o| o.scanpath.clone()).collect();
    staged.add(SCANPATH_FILE, log_bytes(&scanpaths)?);
    if global.dump_maps {
        for (trial, outcome) in trials.iter().zip(&outcomes) {
            stage_maps(&mut staged, &trial.trial_id, outcome)?;
        }
    }
    info!("{} trial(s) simulated", trials.len());
    staged.commit(&setup.out, global.force)
}

pub fn simulate_trial(
    setup: &Setup,
    trial: &TrialManifest,
    keep_trace: bool,
) -> Result<RunOutcome> {
    let inner = || -> Result<RunOutcome> {
        let images = load_images(trial)?;
        let config = setup.model_for(trial);
        let sim = Simulator::new(&config, &setup.backend, &setup.prior)?;
        let input = TrialInput::new(&trial.trial_id, &images.search, images.target.as_ref());
        Ok(sim.run(&input, keep_trace)?)
    };
    inner().with_context(|| format!("trial {}", trial.trial_id))
}

pub fn log_bytes(scanpaths: &[Scanpath]) -> Result<Vec<u8>> {
    let mut bytes = Vec::new();
    format_fixation_log(&mut bytes, scanpaths)?;
    Ok(bytes)
}

fn map_tensor(map: &AttentionMap) -> Result<FeatureTensor> {
    let values = map.values().iter().map(|v| *v as f32).collect();
    Ok(FeatureTensor::new(
        1,
        map.height(),
        map.width(),
        values,
        SEARCH_STRIDE_PX as f32,
    )?)
}

/// Four maps per trial plus memory, saccade and combined maps for every
/// transition, under `maps/<trial>/`.
fn stage_maps(staged: &mut Staged, trial_id: &str, outcome: &RunOutcome) -> Result<()> {
    let Some(trace) = &outcome.trace else {
        return Ok(());
    };
    let dir = format!("maps/{}", file_stem_for(trial_id));
    let s = &trace.statics;
    let w = &outcome.weights;
    let image_term: Vec<f64> = s
        .similarity
        .values()
        .iter()
        .zip(s.saliency.values())
        .map(|(sim, sal)| w.sim * sim + w.sal * sal)
        .collect();
    let image_map = AttentionMap::new(
        s.saliency.height(),
        s.saliency.width(),
        image_term,
        s.saliency.kind(),
    )?;
    staged.add(
        format!("{dir}/search_features.fmap"),
        encode_feature_tensor(&s.search_features),
    );
    staged.add(
        format!("{dir}/similarity.fmap"),
        encode_feature_tensor(&map_tensor(&s.similarity)?),
    );
    staged.add(
        format!("{dir}/saliency.fmap"),
        encode_feature_tensor(&map_tensor(&s.saliency)?),
    );
    staged.add(
        format!("{dir}/image_term.fmap"),
        encode_feature_tensor(&map_tensor(&image_map)?),
    );
    for step in &trace.steps {
        let k = step.from_index;
        for (name, map) in [
            ("memory", &step.memory),
            ("saccade", &step.saccade),
            ("combined", &step.combined),
        ] {
            staged.add(
                format!("{dir}/fix{k:03}_{name}.fmap"),
                encode_feature_tensor(&map_tensor(map)?),
            );
        }
    }
    Ok(())
}
