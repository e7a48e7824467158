use anyhow::{Context, Result};

use saccade_lab::engine::{run_null_model, trial_rng};
use saccade_lab::metrics::stats::bootstrap_mean_interval;
use saccade_lab::metrics::{detect_return_fixations, trial_return_proportion, ProportionOptions};
use saccade_lab::Scanpath;

use crate::args::Global;
use crate::output::Staged;
use crate::report::MetricTable;
use crate::setup::{load_trials, Setup};
use crate::simulate::log_bytes;

pub const DEFAULT_COUNT: usize = 1000;
pub const BOOTSTRAP_RESAMPLES: usize = 1000;
pub const INTERVAL_LEVEL: f64 = 0.95;

/// Sequences are spread round-robin over the manifest trials, each as long
/// as a free-viewing model scanpath and confined to that trial's image.
pub fn run(global: &Global) -> Result<()> {
    let setup = Setup::load(global)?;
    let trials = load_trials(global)?;
    let count = global.count.unwrap_or(DEFAULT_COUNT);
    let length = setup.config.model.n_c;
    let seed = setup.config.model.seed;
    let jobs: Vec<usize> = (0..count).collect();
    let results = setup.parallel(&jobs, |k| {
        let trial = &trials[k % trials.len()];
        let mut rng = trial_rng(seed, &format!("{}/null{k}", trial.trial_id));
        let mut s = run_null_model(
            &setup.prior,
            length,
            (trial.image_width_dva, trial.image_height_dva),
            &mut rng,
        )
        .with_context(|| format!("trial {}", trial.trial_id))?;
        s.subject_id = format!("null{k:06}");
        s.trial_id = trial.trial_id.clone();
        let threshold = setup.threshold_for(Some(trial.dataset));
        let proportion = trial_return_proportion(
            &detect_return_fixations(&s, threshold)?,
            ProportionOptions::default(),
        );
        Ok((s, proportion))
    })?;
    let (scanpaths, proportions): (Vec<Scanpath>, Vec<f64>) = results.into_iter().unzip();

    let mut table = MetricTable::default();
    let n = proportions.len();
    let mean = (n > 0).then(|| proportions.iter().sum::<f64>() / n as f64);
    let mut rng = trial_rng(seed, "bootstrap");
    let interval =
        bootstrap_mean_interval(&proportions, BOOTSTRAP_RESAMPLES, INTERVAL_LEVEL, &mut rng);
    table.push("null", "all", "proportion_return_mean", mean, n);
    table.push(
        "null",
        "all",
        "proportion_return_ci_low",
        interval.map(|i| i.0),
        n,
    );
    table.push(
        "null",
        "all",
        "proportion_return_ci_high",
        interval.map(|i| i.1),
        n,
    );

    let mut staged = Staged::default();
    staged.add("null_scanpaths.csv", log_bytes(&scanpaths)?);
    staged.add("null_report.csv", table.to_csv()?);
    staged.commit(&setup.out, global.force)
}
