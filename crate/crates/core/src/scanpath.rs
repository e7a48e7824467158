//! Fixations and scanpaths shared by the engine, the metrics, and IO.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixation {
    pub index: usize,
    pub x_dva: f64,
    pub y_dva: f64,
    /// Experimental data only.
    pub duration_ms: Option<f64>,
    pub on_target: Option<bool>,
}

impl Fixation {
    pub fn at(index: usize, x_dva: f64, y_dva: f64) -> Self {
        Self {
            index,
            x_dva,
            y_dva,
            duration_ms: None,
            on_target: None,
        }
    }

    pub fn point(&self) -> (f64, f64) {
        (self.x_dva, self.y_dva)
    }

    pub fn distance(&self, other: &Fixation) -> f64 {
        (self.x_dva - other.x_dva).hypot(self.y_dva - other.y_dva)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StopReason {
    TargetFound,
    MaxFixations,
    Aborted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    Experimental,
    Model,
    Null,
    Ablated,
}

macro_rules! text_enum {
    ($ty:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self { $($ty::$variant => $text),+ }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self, Error> {
                match s.trim() {
                    $($text => Ok($ty::$variant),)+
                    other => Err(Error::Validation(format!(
                        concat!("unknown ", stringify!($ty), " '{}'"), other
                    ))),
                }
            }
        }
    };
}

text_enum!(StopReason {
    TargetFound => "target_found",
    MaxFixations => "max_fixations",
    Aborted => "aborted",
});

text_enum!(Source {
    Experimental => "experimental",
    Model => "model",
    Null => "null",
    Ablated => "ablated",
});

#[derive(Debug, Clone, PartialEq)]
pub struct Scanpath {
    pub subject_id: String,
    pub trial_id: String,
    pub fixations: Vec<Fixation>,
    pub stop_reason: StopReason,
    pub source: Source,
}

impl Scanpath {
    pub fn new(subject_id: impl Into<String>, trial_id: impl Into<String>, source: Source) -> Self {
        Self {
            subject_id: subject_id.into(),
            trial_id: trial_id.into(),
            fixations: Vec::new(),
            stop_reason: StopReason::MaxFixations,
            source,
        }
    }

    /// Builds a scanpath from bare points, indexing them 0..n.
    pub fn from_points(
        subject_id: impl Into<String>,
        trial_id: impl Into<String>,
        points: &[(f64, f64)],
        source: Source,
    ) -> Self {
        let mut s = Self::new(subject_id, trial_id, source);
        s.fixations = points
            .iter()
            .enumerate()
            .map(|(i, (x, y))| Fixation::at(i, *x, *y))
            .collect();
        s
    }

    pub fn len(&self) -> usize {
        self.fixations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fixations.is_empty()
    }

    pub fn push(&mut self, x_dva: f64, y_dva: f64) {
        let index = self.fixations.len();
        self.fixations.push(Fixation::at(index, x_dva, y_dva));
    }

    /// The first `k` fixations, keeping identifiers.
    pub fn truncated(&self, k: usize) -> Scanpath {
        let mut s = self.clone();
        s.fixations.truncate(k);
        s
    }

    pub fn has_contiguous_indices(&self) -> bool {
        self.fixations.iter().enumerate().all(|(i, f)| f.index == i)
    }
}
