//! Dataset-level summaries shared by `analyze` and `ablate`.

use anyhow::Result;

use saccade_lab::metrics::{
    detect_return_fixations, proportion_return, saccade_sizes_by_class, turning_angles,
    FixationClass, Histogram, PerClass, ProportionOptions, ReturnAnnotation, ReturnOffsets,
    TurningAngles, DEFAULT_ANGLE_BIN_DEG,
};
use saccade_lab::Scanpath;

use crate::report::collect_per_class;

pub struct Annotated {
    pub scanpaths: Vec<Scanpath>,
    pub annotations: Vec<ReturnAnnotation>,
}

impl Annotated {
    pub fn new(scanpaths: Vec<Scanpath>, threshold: impl Fn(&Scanpath) -> f64) -> Result<Self> {
        let annotations = scanpaths
            .iter()
            .map(|s| detect_return_fixations(s, threshold(s)))
            .collect::<saccade_lab::Result<Vec<_>>>()?;
        Ok(Self {
            scanpaths,
            annotations,
        })
    }

    pub fn proportion(&self, options: ProportionOptions) -> Result<Option<f64>> {
        if self.annotations.is_empty() {
            return Ok(None);
        }
        Ok(Some(proportion_return(&self.annotations, options)?.mean))
    }

    pub fn offsets(&self) -> ReturnOffsets {
        ReturnOffsets::pooled(&self.annotations)
    }

    pub fn turning_angles(&self) -> Result<TurningAngles> {
        let mut pooled = TurningAngles {
            returns: Histogram::uniform(0.0, 180.0, (180.0 / DEFAULT_ANGLE_BIN_DEG) as usize)?,
            non_returns: Histogram::uniform(0.0, 180.0, (180.0 / DEFAULT_ANGLE_BIN_DEG) as usize)?,
        };
        for (s, a) in self.scanpaths.iter().zip(&self.annotations) {
            pooled.merge(&turning_angles(s, a, DEFAULT_ANGLE_BIN_DEG)?)?;
        }
        Ok(pooled)
    }

    pub fn saccade_sizes(&self) -> Result<PerClass<Vec<f64>>> {
        let parts = self
            .scanpaths
            .iter()
            .zip(&self.annotations)
            .map(|(s, a)| saccade_sizes_by_class(s, a))
            .collect::<saccade_lab::Result<Vec<_>>>()?;
        Ok(collect_per_class(&parts))
    }

    pub fn count(&self, class: FixationClass) -> usize {
        self.annotations.iter().map(|a| a.count(class)).sum()
    }
}

pub fn mean_offset(offsets: &ReturnOffsets) -> Option<f64> {
    let h = &offsets.histogram;
    let total = h.total();
    (total > 0.0).then(|| {
        h.counts()
            .iter()
            .enumerate()
            .map(|(k, c)| k as f64 * c)
            .sum::<f64>()
            / total
    })
}

/// Share of return turning angles in the bin that holds 180 degrees.
pub fn reversal_share(angles: &TurningAngles) -> Option<f64> {
    let h = &angles.returns;
    let total = h.total();
    (total > 0.0).then(|| h.counts()[h.len() - 1] / total)
}

pub fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// The four statistics compared between model variants and a reference.
#[derive(Debug, Clone, Copy)]
pub struct Headline {
    pub return_proportion: Option<f64>,
    pub mean_return_offset: Option<f64>,
    pub reversal_share: Option<f64>,
    pub mean_saccade_size: Option<f64>,
}

impl Headline {
    pub const NAMES: [&'static str; 4] = [
        "return_proportion",
        "mean_return_offset",
        "reversal_share",
        "mean_saccade_size",
    ];

    pub fn of(data: &Annotated) -> Result<Self> {
        let sizes = data.saccade_sizes()?;
        let all: Vec<f64> = FixationClass::ALL
            .iter()
            .flat_map(|c| sizes.get(*c).clone())
            .collect();
        Ok(Self {
            return_proportion: data.proportion(ProportionOptions::default())?,
            mean_return_offset: mean_offset(&data.offsets()),
            reversal_share: reversal_share(&data.turning_angles()?),
            mean_saccade_size: mean(&all),
        })
    }

    pub fn values(&self) -> [Option<f64>; 4] {
        [
            self.return_proportion,
            self.mean_return_offset,
            self.reversal_share,
            self.mean_saccade_size,
        ]
    }
}
