use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use anyhow::{Context, Result};

use saccade_lab::engine::{trial_rng, Mode};
use saccade_lab::gbvs::gbvs_saliency;
use saccade_lab::io::{read_fixation_log, read_manifest, TrialManifest};
use saccade_lab::metrics::stats::summarize;
use saccade_lab::metrics::{
    angle_size_correlation, chance_entropy, consistency_entropy, fixation_durations_by_class,
    recognition_error_rates, saliency_at_fixations_map, spatial_kld, EntropyParams, FixationClass,
    Histogram, KldParams, PerClass, ProportionOptions, TargetBox,
};
use saccade_lab::{AttentionMap, Scanpath};

use crate::analysis::{mean, mean_offset, reversal_share, Annotated};
use crate::args::Global;
use crate::output::Staged;
use crate::report::{collect_per_class, histogram_csv, MetricTable};
use crate::setup::Setup;
use crate::svg::histogram_svg;

const CHANCE_REPETITIONS: usize = 100;
const OFFSET_SPLIT: usize = 3;

/// A scanpath plus the subject key used when several logs are pooled.
struct Entry {
    subject_key: String,
}

pub fn run(global: &Global, logs: &[PathBuf]) -> Result<()> {
    let setup = Setup::load(global)?;
    let manifest: HashMap<String, TrialManifest> = match &global.manifest {
        Some(path) => read_manifest(path)
            .with_context(|| format!("manifest {}", path.display()))?
            .into_iter()
            .map(|t| (t.trial_id.clone(), t))
            .collect(),
        None => HashMap::new(),
    };

    let mut scanpaths = Vec::new();
    let mut entries = Vec::new();
    for (i, path) in logs.iter().enumerate() {
        let data =
            read_fixation_log(path).with_context(|| format!("fixation log {}", path.display()))?;
        for s in data {
            entries.push(Entry {
                subject_key: format!("{i}:{}", s.subject_id),
            });
            scanpaths.push(s);
        }
    }
    let experiment = experiment_label(logs);
    let data = Annotated::new(scanpaths, |s| {
        setup.threshold_for(manifest.get(&s.trial_id).map(|t| t.dataset))
    })?;

    let mut table = MetricTable::default();
    let mut staged = Staged::default();
    let mut notices = Vec::new();
    let n_trials = data.scanpaths.len();
    let e = experiment.as_str();

    table.push(
        e,
        "all",
        "proportion_return_mean",
        data.proportion(ProportionOptions::default())?,
        n_trials,
    );
    let twice = ProportionOptions {
        twice_only: true,
        ..Default::default()
    };
    table.push(
        e,
        "all",
        "proportion_return_twice_mean",
        data.proportion(twice)?,
        n_trials,
    );
    for class in FixationClass::ALL {
        let c = data.count(class);
        table.push(e, class.as_str(), "fixation_count", Some(c as f64), c);
    }

    let offsets = data.offsets();
    let total = offsets.histogram.total();
    let returns = total as usize;
    table.push(
        e,
        "return",
        "return_offset_mean",
        mean_offset(&offsets),
        returns,
    );
    table.push(
        e,
        "return",
        "offset_up_to_3_share",
        (total > 0.0).then(|| offsets.mass_up_to(OFFSET_SPLIT) / total),
        returns,
    );
    table.push(
        e,
        "return",
        "zero_offset_count",
        Some(offsets.zero_offset as f64),
        returns,
    );
    staged.add("offsets.csv", histogram_csv(&offsets.histogram)?);

    let angles = data.turning_angles()?;
    table.push(
        e,
        "return",
        "reversal_share",
        reversal_share(&angles),
        angles.returns.total() as usize,
    );
    staged.add(
        "turning_angles_returns.csv",
        histogram_csv(&angles.returns)?,
    );
    staged.add(
        "turning_angles_non_returns.csv",
        histogram_csv(&angles.non_returns)?,
    );

    let sizes = data.saccade_sizes()?;
    table.push_per_class(e, "saccade_size", &sizes.map(|v| summarize(v)));
    let all_sizes: Vec<f64> = FixationClass::ALL
        .iter()
        .flat_map(|c| sizes.get(*c).clone())
        .collect();
    let size_hist = size_histogram(&all_sizes);
    staged.add("saccade_sizes.csv", histogram_csv(&size_hist)?);
    let pairs: usize = data
        .scanpaths
        .iter()
        .map(|s| s.len().saturating_sub(2))
        .sum();
    table.push(
        e,
        "all",
        "angle_size_correlation",
        angle_size_correlation(&data.scanpaths),
        pairs,
    );

    durations(&data, e, &mut table, &mut notices)?;
    spatial(
        &setup,
        &data,
        &entries,
        &manifest,
        e,
        &mut table,
        &mut notices,
    )?;
    saliency(&setup, &data, &manifest, e, &mut table, &mut notices)?;
    recognition(&data, &manifest, e, &mut table, &mut notices)?;

    staged.add("metrics.csv", table.to_csv()?);
    if global.figures {
        staged.add(
            "figures/offsets.svg",
            histogram_svg("Return offsets", "offset (fixations)", &offsets.histogram),
        );
        staged.add(
            "figures/turning_angles_returns.svg",
            histogram_svg(
                "Turning angles before returns",
                "angle (deg)",
                &angles.returns,
            ),
        );
        staged.add(
            "figures/turning_angles_non_returns.svg",
            histogram_svg(
                "Turning angles before non-returns",
                "angle (deg)",
                &angles.non_returns,
            ),
        );
        staged.add(
            "figures/saccade_sizes.svg",
            histogram_svg("Saccade sizes", "size (dva)", &size_hist),
        );
    }
    for n in &notices {
        eprintln!("notice: {n}");
    }
    staged.commit(&setup.out, global.force)
}

fn experiment_label(logs: &[PathBuf]) -> String {
    logs.iter()
        .map(|p| {
            p.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "log".into())
        })
        .collect::<Vec<_>>()
        .join("+")
}

/// Half-dva bins from zero past the largest saccade.
fn size_histogram(sizes: &[f64]) -> Histogram {
    let top = sizes.iter().copied().fold(0.0, f64::max);
    let bins = ((top / 0.5).floor() as usize + 1).max(1);
    let mut h = Histogram::uniform(0.0, bins as f64 * 0.5, bins).expect("positive extent");
    for s in sizes {
        h.add(*s, 1.0);
    }
    h
}

fn durations(
    data: &Annotated,
    e: &str,
    table: &mut MetricTable,
    notices: &mut Vec<String>,
) -> Result<()> {
    let complete = data
        .scanpaths
        .iter()
        .all(|s| s.fixations.iter().all(|f| f.duration_ms.is_some()));
    if !complete || data.scanpaths.is_empty() {
        notices.push("fixation durations missing; duration report skipped".into());
        return Ok(());
    }
    let parts = data
        .scanpaths
        .iter()
        .zip(&data.annotations)
        .map(|(s, a)| fixation_durations_by_class(s, a, |_| true))
        .collect::<saccade_lab::Result<Vec<_>>>()?;
    table.push_per_class(
        e,
        "duration_ms",
        &collect_per_class(&parts).map(|v| summarize(v)),
    );
    Ok(())
}

fn image_dims(manifest: &HashMap<String, TrialManifest>, trial_id: &str) -> Option<(f64, f64)> {
    manifest
        .get(trial_id)
        .map(|t| (t.image_width_dva, t.image_height_dva))
}

/// Cross-subject entropy of return locations and the spatial KLD between
/// return and non-return fixations, averaged over images.
fn spatial(
    setup: &Setup,
    data: &Annotated,
    entries: &[Entry],
    manifest: &HashMap<String, TrialManifest>,
    e: &str,
    table: &mut MetricTable,
    notices: &mut Vec<String>,
) -> Result<()> {
    let mut by_image: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, s) in data.scanpaths.iter().enumerate() {
        by_image.entry(s.trial_id.as_str()).or_default().push(i);
    }
    let missing: Vec<&str> = by_image
        .keys()
        .copied()
        .filter(|t| image_dims(manifest, t).is_none())
        .collect();
    if !missing.is_empty() {
        notices.push(format!(
            "no image extent for {} trial(s) (first: {}); entropy and KLD use the remaining trials",
            missing.len(),
            missing[0]
        ));
    }
    let (mut entropies, mut chances, mut klds) = (Vec::new(), Vec::new(), Vec::new());
    let params = EntropyParams::default();
    let mut rng = trial_rng(setup.config.model.seed, "chance_entropy");
    for (trial_id, idx) in &by_image {
        let Some(dims) = image_dims(manifest, trial_id) else {
            continue;
        };
        let mut subjects: BTreeMap<&str, Vec<(f64, f64)>> = BTreeMap::new();
        let (mut ret, mut non) = (Vec::new(), Vec::new());
        for i in idx {
            let (s, a) = (&data.scanpaths[*i], &data.annotations[*i]);
            let mine = subjects
                .entry(entries[*i].subject_key.as_str())
                .or_default();
            for (f, class) in s.fixations.iter().zip(&a.classes) {
                if *class == FixationClass::Return {
                    mine.push(f.point());
                    ret.push(f.point());
                } else {
                    non.push(f.point());
                }
            }
        }
        let per_subject: Vec<Vec<(f64, f64)>> = subjects.into_values().collect();
        if let Some(h) = consistency_entropy(&per_subject, dims, &params)? {
            entropies.push(h);
            let counts: Vec<usize> = per_subject.iter().map(Vec::len).collect();
            if let Some(c) = chance_entropy(&counts, dims, &params, CHANCE_REPETITIONS, &mut rng)? {
                chances.push(c);
            }
        }
        if let Some(k) = spatial_kld(&ret, &non, dims, &KldParams::default())? {
            klds.push(k);
        }
    }
    table.push(
        e,
        "return",
        "consistency_entropy_mean",
        mean(&entropies),
        entropies.len(),
    );
    table.push(
        e,
        "return",
        "chance_entropy_mean",
        mean(&chances),
        chances.len(),
    );
    table.push(
        e,
        "all",
        "return_vs_non_return_kld_mean",
        mean(&klds),
        klds.len(),
    );
    Ok(())
}

fn saliency(
    setup: &Setup,
    data: &Annotated,
    manifest: &HashMap<String, TrialManifest>,
    e: &str,
    table: &mut MetricTable,
    notices: &mut Vec<String>,
) -> Result<()> {
    let mut ids: Vec<&str> = data.scanpaths.iter().map(|s| s.trial_id.as_str()).collect();
    ids.sort_unstable();
    ids.dedup();
    let known: Vec<&TrialManifest> = ids.iter().filter_map(|id| manifest.get(*id)).collect();
    if known.is_empty() {
        notices.push("no manifest images; saliency at fixations skipped".into());
        return Ok(());
    }
    let maps: Vec<(String, AttentionMap, (f64, f64))> = setup.parallel(&known, |t| {
        let image = t
            .load_search()
            .with_context(|| format!("trial {}", t.trial_id))?;
        Ok((
            t.trial_id.clone(),
            gbvs_saliency(&image).map,
            (image.width_dva(), image.height_dva()),
        ))
    })?;
    let maps: HashMap<&str, (&AttentionMap, (f64, f64))> = maps
        .iter()
        .map(|(id, m, d)| (id.as_str(), (m, *d)))
        .collect();
    let mut sums: PerClass<(f64, usize)> = PerClass::default();
    for (s, a) in data.scanpaths.iter().zip(&data.annotations) {
        let Some((map, dims)) = maps.get(s.trial_id.as_str()) else {
            continue;
        };
        let per = saliency_at_fixations_map(map, *dims, s, a, setup.config.model.patch_dva)?;
        for class in FixationClass::ALL {
            let summary = per.get(class);
            if let Some(m) = summary.mean {
                let slot = sums.get_mut(class);
                slot.0 += m * summary.n as f64;
                slot.1 += summary.n;
            }
        }
    }
    for class in FixationClass::ALL {
        let (sum, n) = *sums.get(class);
        table.push(
            e,
            class.as_str(),
            "saliency_at_fixation_mean",
            (n > 0).then(|| sum / n as f64),
            n,
        );
    }
    Ok(())
}

fn recognition(
    data: &Annotated,
    manifest: &HashMap<String, TrialManifest>,
    e: &str,
    table: &mut MetricTable,
    notices: &mut Vec<String>,
) -> Result<()> {
    let boxes: HashMap<String, TargetBox> = manifest
        .values()
        .filter(|t| t.task == Mode::VisualSearch)
        .filter_map(|t| t.target_box_dva.map(|b| (t.trial_id.clone(), b)))
        .collect();
    let searched: Vec<Scanpath> = data
        .scanpaths
        .iter()
        .filter(|s| boxes.contains_key(&s.trial_id))
        .cloned()
        .collect();
    match recognition_error_rates(&searched, &boxes)? {
        Some(r) => {
            table.push(
                e,
                "all",
                "recognition_false_negative_rate",
                Some(r.false_negative),
                r.fixations,
            );
            table.push(
                e,
                "all",
                "recognition_false_positive_rate",
                Some(r.false_positive),
                r.trials,
            );
        }
        None => notices
            .push("no search trials with target boxes; recognition error rates skipped".into()),
    }
    Ok(())
}
