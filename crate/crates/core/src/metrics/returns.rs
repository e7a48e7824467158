//! Return, to-be-revisited and non-return fixations.

use std::fmt;

use super::histogram::Histogram;
use crate::error::{Error, Result};
use crate::scanpath::Scanpath;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixationClass {
    Return,
    ToBeRevisited,
    NonReturn,
}

impl FixationClass {
    pub const ALL: [FixationClass; 3] = [
        FixationClass::Return,
        FixationClass::ToBeRevisited,
        FixationClass::NonReturn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FixationClass::Return => "return",
            FixationClass::ToBeRevisited => "to_be_revisited",
            FixationClass::NonReturn => "non_return",
        }
    }
}

impl fmt::Display for FixationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A value per fixation class.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PerClass<T> {
    pub returns: T,
    pub to_be_revisited: T,
    pub non_return: T,
}

impl<T> PerClass<T> {
    pub fn get(&self, class: FixationClass) -> &T {
        match class {
            FixationClass::Return => &self.returns,
            FixationClass::ToBeRevisited => &self.to_be_revisited,
            FixationClass::NonReturn => &self.non_return,
        }
    }

    pub fn get_mut(&mut self, class: FixationClass) -> &mut T {
        match class {
            FixationClass::Return => &mut self.returns,
            FixationClass::ToBeRevisited => &mut self.to_be_revisited,
            FixationClass::NonReturn => &mut self.non_return,
        }
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> PerClass<U> {
        PerClass {
            returns: f(&self.returns),
            to_be_revisited: f(&self.to_be_revisited),
            non_return: f(&self.non_return),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReturnAnnotation {
    pub threshold_dva: f64,
    pub classes: Vec<FixationClass>,
    /// For returns, the earliest earlier fixation within the threshold.
    pub matched_index: Vec<Option<usize>>,
    /// How many later returns matched each fixation.
    pub revisit_count: Vec<usize>,
}

impl ReturnAnnotation {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn count(&self, class: FixationClass) -> usize {
        self.classes.iter().filter(|c| **c == class).count()
    }

    pub fn return_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|i| self.classes[*i] == FixationClass::Return)
    }

    /// `(return index, matched index)` pairs in order.
    pub fn matches(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.matched_index
            .iter()
            .enumerate()
            .filter_map(|(j, m)| m.map(|i| (j, i)))
    }
}

pub fn detect_return_fixations(
    scanpath: &Scanpath,
    threshold_dva: f64,
) -> Result<ReturnAnnotation> {
    if !(threshold_dva.is_finite() && threshold_dva > 0.0) {
        return Err(Error::domain(format!(
            "return threshold must be positive, got {threshold_dva}"
        )));
    }
    let fx = &scanpath.fixations;
    let n = fx.len();
    let mut matched_index = vec![None; n];
    let mut revisit_count = vec![0usize; n];
    for j in 1..n {
        if let Some(i) = (0..j).find(|i| fx[*i].distance(&fx[j]) <= threshold_dva) {
            matched_index[j] = Some(i);
            revisit_count[i] += 1;
        }
    }
    let classes = (0..n)
        .map(|k| {
            if matched_index[k].is_some() {
                FixationClass::Return
            } else if revisit_count[k] > 0 {
                FixationClass::ToBeRevisited
            } else {
                FixationClass::NonReturn
            }
        })
        .collect();
    Ok(ReturnAnnotation {
        threshold_dva,
        classes,
        matched_index,
        revisit_count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProportionOptions {
    /// Only the first k fixations of each trial.
    pub first_k: Option<usize>,
    /// Count locations returned to at least twice instead of returns.
    pub twice_only: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProportionReport {
    pub per_trial: Vec<f64>,
    pub mean: f64,
}

/// Share of return fixations among a trial's fixations.
pub fn trial_return_proportion(annotation: &ReturnAnnotation, options: ProportionOptions) -> f64 {
    let n = options
        .first_k
        .map_or(annotation.len(), |k| k.min(annotation.len()));
    if n < 2 {
        return 0.0;
    }
    // a return inside the window always has its match inside it too
    let hits = if options.twice_only {
        let mut counts = vec![0usize; n];
        for (j, i) in annotation.matches() {
            if j < n {
                counts[i] += 1;
            }
        }
        counts.iter().filter(|c| **c >= 2).count()
    } else {
        annotation.return_indices().filter(|j| *j < n).count()
    };
    hits as f64 / n as f64
}

pub fn proportion_return(
    annotations: &[ReturnAnnotation],
    options: ProportionOptions,
) -> Result<ProportionReport> {
    if annotations.is_empty() {
        return Err(Error::domain(
            "proportion of returns needs at least one trial",
        ));
    }
    let per_trial: Vec<f64> = annotations
        .iter()
        .map(|a| trial_return_proportion(a, options))
        .collect();
    let mean = per_trial.iter().sum::<f64>() / per_trial.len() as f64;
    Ok(ProportionReport { per_trial, mean })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReturnOffsets {
    /// Unit bins `[k, k+1)` over offsets.
    pub histogram: Histogram,
    /// Returns to the immediately preceding fixation (offset 0).
    pub zero_offset: usize,
}

impl ReturnOffsets {
    pub fn empty() -> Self {
        Self {
            histogram: Histogram::integer(1),
            zero_offset: 0,
        }
    }

    /// Pools offsets from several trials.
    pub fn pooled(annotations: &[ReturnAnnotation]) -> Self {
        let offsets: Vec<usize> = annotations.iter().flat_map(offsets_of).collect();
        Self::from_offsets(&offsets)
    }

    fn from_offsets(offsets: &[usize]) -> Self {
        let max = offsets.iter().copied().max().unwrap_or(0);
        let mut histogram = Histogram::integer(max + 1);
        for o in offsets {
            histogram.add(*o as f64, 1.0);
        }
        Self {
            histogram,
            zero_offset: offsets.iter().filter(|o| **o == 0).count(),
        }
    }

    /// Count of returns with offset at most `k`.
    pub fn mass_up_to(&self, k: usize) -> f64 {
        self.histogram.counts().iter().take(k + 1).sum()
    }
}

fn offsets_of(annotation: &ReturnAnnotation) -> Vec<usize> {
    annotation.matches().map(|(j, i)| j - i - 1).collect()
}

/// Intervening fixations between each return and its match.
pub fn return_offsets(annotation: &ReturnAnnotation) -> ReturnOffsets {
    let offsets = offsets_of(annotation);
    if offsets.is_empty() {
        return ReturnOffsets::empty();
    }
    ReturnOffsets::from_offsets(&offsets)
}
