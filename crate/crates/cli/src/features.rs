use std::collections::BTreeMap;

use anyhow::{Context, Result};

use saccade_lab::features::{encode_feature_tensor, extract_features, FeatureBackend, Level};

use crate::args::Global;
use crate::output::Staged;
use crate::setup::{load_images, load_trials, Setup};

/// trial id, role, file name, encoded tensor
type Export = (String, String, String, Vec<u8>);

/// Writes builtin feature tensors in the layout the import backend reads:
/// `features/<fingerprint>.fmap` for search images and
/// `features/<fingerprint>.target.fmap` for targets.
pub fn run(global: &Global) -> Result<()> {
    let setup = Setup::load(global)?;
    let trials = load_trials(global)?;
    let backend = FeatureBackend::builtin();
    let per_trial = setup.parallel(&trials, |t| {
        let inner = || -> Result<Vec<Export>> {
            let images = load_images(t)?;
            let fp = images.search.fingerprint();
            let tensor = extract_features(&images.search, &backend, Level::Search)?;
            let mut out = vec![(
                t.trial_id.clone(),
                "search".to_string(),
                format!("{fp}.fmap"),
                encode_feature_tensor(&tensor),
            )];
            if let Some(target) = &images.target {
                let fp = target.fingerprint();
                let tensor = extract_features(target, &backend, Level::Target)?;
                out.push((
                    t.trial_id.clone(),
                    "target".to_string(),
                    format!("{fp}.target.fmap"),
                    encode_feature_tensor(&tensor),
                ));
            }
            Ok(out)
        };
        inner().with_context(|| format!("trial {}", t.trial_id))
    })?;

    let mut staged = Staged::default();
    let mut files: BTreeMap<String, Vec<u8>> = BTreeMap::new();
    let mut index = csv::Writer::from_writer(Vec::new());
    index.write_record(["trial_id", "role", "file"])?;
    for (trial, role, file, bytes) in per_trial.into_iter().flatten() {
        index.write_record([trial.as_str(), role.as_str(), file.as_str()])?;
        // identical images share one file
        files.entry(file).or_insert(bytes);
    }
    for (file, bytes) in files {
        staged.add(format!("features/{file}"), bytes);
    }
    staged.add("features/index.csv", index.into_inner()?);
    staged.commit(&setup.out, global.force)
}
