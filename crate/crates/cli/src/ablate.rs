use std::collections::HashMap;
use std::path::PathBuf;

use anyhow::{Context, Result};

use saccade_lab::engine::{Ablation, ModelConfig, Simulator, TrialInput};
use saccade_lab::io::{read_fixation_log, DatasetKind, TrialManifest};
use saccade_lab::metrics::similarity_index;
use saccade_lab::{Scanpath, Source};

use crate::analysis::{Annotated, Headline};
use crate::args::Global;
use crate::output::Staged;
use crate::setup::{load_images, load_trials, Setup};
use crate::simulate::log_bytes;

pub const FULL_MODEL: &str = "full";

pub fn run(global: &Global, reference: &[PathBuf]) -> Result<()> {
    let setup = Setup::load(global)?;
    let trials = load_trials(global)?;
    let datasets: HashMap<&str, DatasetKind> = trials
        .iter()
        .map(|t| (t.trial_id.as_str(), t.dataset))
        .collect();
    let threshold = |s: &Scanpath| setup.threshold_for(datasets.get(s.trial_id.as_str()).copied());

    let variants: Vec<Ablation> = std::iter::once(Ablation::None)
        .chain(Ablation::VARIANTS)
        .collect();
    let mut runs: Vec<(String, Vec<Scanpath>)> = Vec::new();
    for variant in &variants {
        let scanpaths = setup.parallel(&trials, |t| run_variant(&setup, t, *variant))?;
        runs.push((variant_name(*variant).to_string(), scanpaths));
    }

    let reference_data = if reference.is_empty() {
        Annotated::new(runs[0].1.clone(), threshold)?
    } else {
        let mut pooled = Vec::new();
        for path in reference {
            pooled.extend(
                read_fixation_log(path)
                    .with_context(|| format!("fixation log {}", path.display()))?,
            );
        }
        Annotated::new(pooled, threshold)?
    };
    let reference_headline = Headline::of(&reference_data)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["variant", "statistic", "model", "reference", "si"])?;
    for (name, scanpaths) in &runs {
        let model = Headline::of(&Annotated::new(scanpaths.clone(), threshold)?)?;
        for ((stat, m), r) in Headline::NAMES
            .iter()
            .zip(model.values())
            .zip(reference_headline.values())
        {
            let si = match (m, r) {
                (Some(m), Some(r)) => similarity_index(m, r).ok(),
                _ => None,
            };
            w.write_record([name.clone(), stat.to_string(), cell(m), cell(r), cell(si)])?;
        }
    }

    let all: Vec<Scanpath> = runs.into_iter().flat_map(|(_, s)| s).collect();
    let mut staged = Staged::default();
    staged.add("ablation_scanpaths.csv", log_bytes(&all)?);
    staged.add("si_table.csv", w.into_inner()?);
    staged.commit(&setup.out, global.force)
}

fn variant_name(variant: Ablation) -> &'static str {
    match variant {
        Ablation::None => FULL_MODEL,
        v => v.as_str(),
    }
}

fn cell(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

fn run_variant(setup: &Setup, trial: &TrialManifest, variant: Ablation) -> Result<Scanpath> {
    let inner = || -> Result<Scanpath> {
        let images = load_images(trial)?;
        let config = ModelConfig {
            ablation: variant,
            ..setup.model_for(trial)
        };
        let sim = Simulator::new(&config, &setup.backend, &setup.prior)?;
        let input = TrialInput {
            subject_id: variant_name(variant),
            ..TrialInput::new(&trial.trial_id, &images.search, images.target.as_ref())
        };
        let mut s = sim.run(&input, false)?.scanpath;
        if variant != Ablation::None {
            s.source = Source::Ablated;
        }
        Ok(s)
    };
    inner().with_context(|| format!("trial {} ({})", trial.trial_id, variant_name(variant)))
}
