use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    VisualSearch,
    FreeViewing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ablation {
    None,
    /// No target similarity / saliency; next fixation sampled from the map.
    NoSimilaritySaliency,
    NoSaccadePrior,
    /// Per-trial memory weight drawn uniformly from [-1, 0].
    DefectiveMemory,
    /// Previously fixated neighbourhoods are excluded forever.
    InfiniteIor,
}

impl Ablation {
    pub const VARIANTS: [Ablation; 4] = [
        Ablation::NoSimilaritySaliency,
        Ablation::NoSaccadePrior,
        Ablation::DefectiveMemory,
        Ablation::InfiniteIor,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Ablation::None => "none",
            Ablation::NoSimilaritySaliency => "no_similarity_saliency",
            Ablation::NoSaccadePrior => "no_saccade_prior",
            Ablation::DefectiveMemory => "defective_memory",
            Ablation::InfiniteIor => "infinite_ior",
        }
    }
}

impl fmt::Display for Ablation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Ablation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "none" => Ok(Ablation::None),
            "no_similarity_saliency" => Ok(Ablation::NoSimilaritySaliency),
            "no_saccade_prior" => Ok(Ablation::NoSaccadePrior),
            "defective_memory" => Ok(Ablation::DefectiveMemory),
            "infinite_ior" => Ok(Ablation::InfiniteIor),
            other => Err(Error::Config(format!("unknown ablation '{other}'"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::VisualSearch => "visual_search",
            Mode::FreeViewing => "free_viewing",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "visual_search" => Ok(Mode::VisualSearch),
            "free_viewing" => Ok(Mode::FreeViewing),
            other => Err(Error::Config(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    Argmax,
    Sample,
}

/// Every scalar of the model. Defaults are the natural-image settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    /// Memory decay base.
    pub alpha: f64,
    /// Floor of the decayed memory value.
    pub beta: f64,
    /// Memory Gaussian width as a fraction of the image width.
    pub sigma: f64,
    pub w_mem: f64,
    pub w_sac: f64,
    pub w_sim: f64,
    pub w_sal: f64,
    /// Cosine distance below which the target counts as found.
    pub recognition_threshold: f64,
    pub patch_dva: f64,
    /// Fixations generated in free viewing.
    pub n_c: usize,
    pub return_threshold_dva: f64,
    pub seed: u64,
    pub mode: Mode,
    pub ablation: Ablation,
    /// Search gives up after this many fixations.
    pub max_search_fixations: usize,
    /// Divide the radial saccade density by `2 pi r`.
    pub area_correct: bool,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            alpha: 0.92,
            beta: 0.5,
            sigma: 0.02,
            w_mem: -0.93,
            w_sac: 0.2346,
            w_sim: 1.0,
            w_sal: 1.0,
            recognition_threshold: 0.3,
            patch_dva: 1.0,
            n_c: 15,
            return_threshold_dva: 1.0,
            seed: 0,
            mode: Mode::FreeViewing,
            ablation: Ablation::None,
            max_search_fixations: 80,
            area_correct: false,
        }
    }
}

/// Weights actually applied in the map integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub mem: f64,
    pub sac: f64,
    pub sim: f64,
    pub sal: f64,
}

impl ModelConfig {
    pub fn free_viewing() -> Self {
        Self::default()
    }

    pub fn visual_search() -> Self {
        Self {
            mode: Mode::VisualSearch,
            ..Self::default()
        }
    }

    /// Settings for object-array displays: wider memory mask, looser recognition.
    pub fn object_arrays() -> Self {
        Self {
            mode: Mode::VisualSearch,
            sigma: 0.08,
            recognition_threshold: 0.5,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Config(what.to_string()))
            }
        };
        check(
            self.alpha > 0.0 && self.alpha < 1.0,
            "alpha must lie in (0,1)",
        )?;
        check(self.beta > 0.0 && self.beta < 1.0, "beta must lie in (0,1)")?;
        check(
            self.sigma > 0.0 && self.sigma.is_finite(),
            "sigma must be positive",
        )?;
        check(
            self.w_mem <= 0.0 && self.w_mem.is_finite(),
            "w_mem must be <= 0",
        )?;
        for (w, name) in [
            (self.w_sac, "w_sac"),
            (self.w_sim, "w_sim"),
            (self.w_sal, "w_sal"),
        ] {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::Config(format!("{name} must be non-negative")));
            }
        }
        check(
            (0.0..=2.0).contains(&self.recognition_threshold),
            "recognition_threshold must lie in [0,2]",
        )?;
        check(
            self.patch_dva > 0.0 && self.patch_dva.is_finite(),
            "patch_dva must be positive",
        )?;
        check(self.n_c >= 1, "n_c must be >= 1")?;
        check(
            self.return_threshold_dva > 0.0 && self.return_threshold_dva.is_finite(),
            "return_threshold_dva must be positive",
        )?;
        check(
            self.max_search_fixations >= 1,
            "max_search_fixations must be >= 1",
        )?;
        Ok(())
    }

    /// Integration weights for the mode and ablation, before any per-trial
    /// draw. Search uses the similarity map only, free viewing the saliency map only.
    pub fn weights(&self) -> Weights {
        let (sim, sal) = match self.mode {
            Mode::VisualSearch => (self.w_sim, 0.0),
            Mode::FreeViewing => (0.0, self.w_sal),
        };
        let mut w = Weights {
            mem: self.w_mem,
            sac: self.w_sac,
            sim,
            sal,
        };
        match self.ablation {
            Ablation::NoSimilaritySaliency => {
                w.sim = 0.0;
                w.sal = 0.0;
            }
            Ablation::NoSaccadePrior => w.sac = 0.0,
            _ => {}
        }
        w
    }

    pub fn selection(&self) -> Selection {
        match self.ablation {
            Ablation::NoSimilaritySaliency => Selection::Sample,
            _ => Selection::Argmax,
        }
    }

    /// Fixation budget of one trial.
    pub fn fixation_cap(&self) -> usize {
        match self.mode {
            Mode::VisualSearch => self.max_search_fixations,
            Mode::FreeViewing => self.n_c,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let c = ModelConfig::default();
        c.validate().unwrap();
        assert_eq!(c.alpha, 0.92);
        assert_eq!(c.beta, 0.5);
        assert_eq!(c.w_mem, -0.93);
        assert_eq!(c.w_sac, 0.2346);
        assert_eq!(ModelConfig::object_arrays().sigma, 0.08);
    }

    #[test]
    fn mode_selects_one_image_map() {
        let fv = ModelConfig::free_viewing().weights();
        assert_eq!((fv.sim, fv.sal), (0.0, 1.0));
        let vs = ModelConfig::visual_search().weights();
        assert_eq!((vs.sim, vs.sal), (1.0, 0.0));
    }

    #[test]
    fn ablations_adjust_weights() {
        let mut c = ModelConfig {
            ablation: Ablation::NoSaccadePrior,
            ..Default::default()
        };
        assert_eq!(c.weights().sac, 0.0);
        assert_eq!(c.selection(), Selection::Argmax);
        c.ablation = Ablation::NoSimilaritySaliency;
        assert_eq!(c.weights().sal, 0.0);
        assert_eq!(c.selection(), Selection::Sample);
    }

    #[test]
    fn invalid_values_rejected() {
        let bad = [
            ModelConfig {
                alpha: 1.0,
                ..Default::default()
            },
            ModelConfig {
                w_mem: 0.1,
                ..Default::default()
            },
            ModelConfig {
                w_sac: -0.1,
                ..Default::default()
            },
            ModelConfig {
                recognition_threshold: 2.5,
                ..Default::default()
            },
            ModelConfig {
                n_c: 0,
                ..Default::default()
            },
        ];
        for c in bad {
            assert!(matches!(c.validate(), Err(Error::Config(_))));
        }
        assert!("nope".parse::<Ablation>().is_err());
    }
}
