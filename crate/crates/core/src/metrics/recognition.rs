use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scanpath::{Scanpath, StopReason};

/// Axis-aligned target rectangle in dva, edges inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetBox {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl TargetBox {
    pub fn contains(&self, point: (f64, f64)) -> bool {
        point.0 >= self.x
            && point.0 <= self.x + self.width
            && point.1 >= self.y
            && point.1 <= self.y + self.height
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecognitionErrorRates {
    /// In-box fixations that did not end the trial, over all fixations.
    pub false_negative: f64,
    /// Trials that stopped on a fixation outside the box, over all trials.
    pub false_positive: f64,
    pub fixations: usize,
    pub trials: usize,
}

/// `None` when there are no trials. Boxes are looked up by trial id.
pub fn recognition_error_rates(
    scanpaths: &[Scanpath],
    boxes: &HashMap<String, TargetBox>,
) -> Result<Option<RecognitionErrorRates>> {
    let (mut fixations, mut misses, mut false_stops) = (0usize, 0usize, 0usize);
    for s in scanpaths {
        let target = boxes
            .get(&s.trial_id)
            .ok_or_else(|| Error::Unsupported(format!("no target box for trial {}", s.trial_id)))?;
        let found = s.stop_reason == StopReason::TargetFound;
        fixations += s.len();
        for (k, f) in s.fixations.iter().enumerate() {
            let decided_here = found && k + 1 == s.len();
            if target.contains(f.point()) && !decided_here {
                misses += 1;
            }
        }
        if found
            && s.fixations
                .last()
                .is_some_and(|f| !target.contains(f.point()))
        {
            false_stops += 1;
        }
    }
    if scanpaths.is_empty() {
        return Ok(None);
    }
    Ok(Some(RecognitionErrorRates {
        false_negative: if fixations == 0 {
            0.0
        } else {
            misses as f64 / fixations as f64
        },
        false_positive: false_stops as f64 / scanpaths.len() as f64,
        fixations,
        trials: scanpaths.len(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scanpath::Source;

    fn boxes() -> HashMap<String, TargetBox> {
        HashMap::from([(
            "t".to_string(),
            TargetBox {
                x: 4.0,
                y: 4.0,
                width: 2.0,
                height: 2.0,
            },
        )])
    }

    #[test]
    fn passes_through_box_twice_before_stopping() {
        let mut s = Scanpath::from_points(
            "m",
            "t",
            &[
                (0.0, 0.0),
                (5.0, 5.0),
                (9.0, 9.0),
                (4.5, 5.5),
                (1.0, 1.0),
                (5.0, 4.5),
            ],
            Source::Model,
        );
        s.stop_reason = StopReason::TargetFound;
        let r = recognition_error_rates(&[s], &boxes()).unwrap().unwrap();
        assert!((r.false_negative - 2.0 / 6.0).abs() < 1e-12);
        assert_eq!(r.false_positive, 0.0);
    }

    #[test]
    fn stop_outside_box_is_false_positive() {
        let mut s = Scanpath::from_points("m", "t", &[(0.0, 0.0), (1.0, 1.0)], Source::Model);
        s.stop_reason = StopReason::TargetFound;
        let r = recognition_error_rates(&[s], &boxes()).unwrap().unwrap();
        assert_eq!(r.false_positive, 1.0);
    }

    #[test]
    fn missing_box_and_no_trials() {
        let s = Scanpath::from_points("m", "other", &[(0.0, 0.0)], Source::Model);
        assert!(matches!(
            recognition_error_rates(&[s], &boxes()),
            Err(Error::Unsupported(_))
        ));
        assert_eq!(recognition_error_rates(&[], &boxes()).unwrap(), None);
    }
}
