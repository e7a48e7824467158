//! Turning angles, saccade sizes and fixation durations.

use super::histogram::Histogram;
use super::returns::{FixationClass, PerClass, ReturnAnnotation};
use super::stats::{pearson, summarize, Summary};
use crate::error::{Error, Result};
use crate::scanpath::{Fixation, Scanpath};

pub const DEFAULT_ANGLE_BIN_DEG: f64 = 12.0;

/// Angle in degrees between saccades `a->b` and `b->c`: 0 for straight-on
/// motion, 180 for an exact reversal. `None` if either saccade has zero length.
pub fn turning_angle(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Option<f64> {
    let v1 = (b.0 - a.0, b.1 - a.1);
    let v2 = (c.0 - b.0, c.1 - b.1);
    let n1 = v1.0.hypot(v1.1);
    let n2 = v2.0.hypot(v2.1);
    if n1 == 0.0 || n2 == 0.0 {
        return None;
    }
    let cross = v1.0 * v2.1 - v1.1 * v2.0;
    let dot = v1.0 * v2.0 + v1.1 * v2.1;
    Some(cross.atan2(dot).abs().to_degrees().min(180.0))
}

fn angle_histogram(bin_deg: f64) -> Result<Histogram> {
    if !(bin_deg > 0.0 && bin_deg <= 180.0) {
        return Err(Error::domain(format!(
            "angle bin must lie in (0, 180], got {bin_deg}"
        )));
    }
    Histogram::uniform(0.0, 180.0, (180.0 / bin_deg).ceil() as usize)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TurningAngles {
    /// Angles at triples whose last fixation is a return.
    pub returns: Histogram,
    pub non_returns: Histogram,
}

/// Triples `(t-2, t-1, t)` binned by whether fixation `t` is a return.
pub fn turning_angles(
    scanpath: &Scanpath,
    annotation: &ReturnAnnotation,
    bin_deg: f64,
) -> Result<TurningAngles> {
    check_annotation(scanpath, annotation)?;
    let mut out = TurningAngles {
        returns: angle_histogram(bin_deg)?,
        non_returns: angle_histogram(bin_deg)?,
    };
    let fx = &scanpath.fixations;
    for t in 2..fx.len() {
        let Some(angle) = turning_angle(fx[t - 2].point(), fx[t - 1].point(), fx[t].point()) else {
            continue;
        };
        if annotation.classes[t] == FixationClass::Return {
            out.returns.add(angle, 1.0);
        } else {
            out.non_returns.add(angle, 1.0);
        }
    }
    Ok(out)
}

impl TurningAngles {
    pub fn merge(&mut self, other: &TurningAngles) -> Result<()> {
        self.returns.merge(&other.returns)?;
        self.non_returns.merge(&other.non_returns)
    }
}

fn check_annotation(scanpath: &Scanpath, annotation: &ReturnAnnotation) -> Result<()> {
    if scanpath.len() != annotation.len() {
        return Err(Error::dimension(format!(
            "annotation covers {} fixations, scanpath has {}",
            annotation.len(),
            scanpath.len()
        )));
    }
    Ok(())
}

pub fn saccade_size(from: &Fixation, to: &Fixation) -> f64 {
    from.distance(to)
}

/// Saccade sizes keyed by the class of the landing fixation.
pub fn saccade_sizes_by_class(
    scanpath: &Scanpath,
    annotation: &ReturnAnnotation,
) -> Result<PerClass<Vec<f64>>> {
    check_annotation(scanpath, annotation)?;
    let mut sizes: PerClass<Vec<f64>> = PerClass::default();
    for (t, pair) in scanpath.fixations.windows(2).enumerate() {
        sizes
            .get_mut(annotation.classes[t + 1])
            .push(saccade_size(&pair[0], &pair[1]));
    }
    Ok(sizes)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaccadeSizeStats {
    pub by_class: PerClass<Summary>,
    pub pooled: Summary,
    /// 1-dva bins over all sizes.
    pub histogram: Histogram,
}

pub fn saccade_size_stats(
    scanpath: &Scanpath,
    annotation: &ReturnAnnotation,
) -> Result<SaccadeSizeStats> {
    let sizes = saccade_sizes_by_class(scanpath, annotation)?;
    let all: Vec<f64> = FixationClass::ALL
        .iter()
        .flat_map(|c| sizes.get(*c).iter().copied())
        .collect();
    let top = all.iter().copied().fold(0.0, f64::max).floor() as usize + 1;
    let mut histogram = Histogram::integer(top);
    for s in &all {
        histogram.add(*s, 1.0);
    }
    Ok(SaccadeSizeStats {
        by_class: sizes.map(|v| summarize(v)),
        pooled: summarize(&all),
        histogram,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DurationStats {
    pub by_class: PerClass<Summary>,
    /// Present when split by target: fixations on and off the target.
    pub on_target: Option<PerClass<Summary>>,
    pub off_target: Option<PerClass<Summary>>,
}

pub fn fixation_durations_by_class(
    scanpath: &Scanpath,
    annotation: &ReturnAnnotation,
    filter: impl Fn(&Fixation) -> bool,
) -> Result<PerClass<Vec<f64>>> {
    check_annotation(scanpath, annotation)?;
    let mut out: PerClass<Vec<f64>> = PerClass::default();
    for (f, class) in scanpath.fixations.iter().zip(&annotation.classes) {
        let Some(d) = f.duration_ms else {
            return Err(Error::Unsupported(format!(
                "trial {} fixation {} has no duration",
                scanpath.trial_id, f.index
            )));
        };
        if filter(f) {
            out.get_mut(*class).push(d);
        }
    }
    Ok(out)
}

pub fn fixation_duration_stats(
    scanpath: &Scanpath,
    annotation: &ReturnAnnotation,
    split_by_target: bool,
) -> Result<DurationStats> {
    let summarize_all = |v: &PerClass<Vec<f64>>| v.map(|x| summarize(x));
    let by_class = summarize_all(&fixation_durations_by_class(scanpath, annotation, |_| {
        true
    })?);
    let (on_target, off_target) = if split_by_target {
        if scanpath.fixations.iter().any(|f| f.on_target.is_none()) {
            return Err(Error::Unsupported(format!(
                "trial {} lacks on-target flags",
                scanpath.trial_id
            )));
        }
        let on = fixation_durations_by_class(scanpath, annotation, |f| f.on_target == Some(true))?;
        let off =
            fixation_durations_by_class(scanpath, annotation, |f| f.on_target == Some(false))?;
        (Some(summarize_all(&on)), Some(summarize_all(&off)))
    } else {
        (None, None)
    };
    Ok(DurationStats {
        by_class,
        on_target,
        off_target,
    })
}

/// `(turning angle at t-1, size of saccade t-1 -> t)` for every valid triple.
pub fn angle_size_pairs(scanpath: &Scanpath) -> Vec<(f64, f64)> {
    scanpath
        .fixations
        .windows(3)
        .filter_map(|w| {
            turning_angle(w[0].point(), w[1].point(), w[2].point())
                .map(|a| (a, saccade_size(&w[1], &w[2])))
        })
        .collect()
}

/// Pearson r between turning angle and the size of the saccade that follows
/// the turn, pooled over scanpaths.
pub fn angle_size_correlation(scanpaths: &[Scanpath]) -> Option<f64> {
    let (angles, sizes): (Vec<f64>, Vec<f64>) = scanpaths.iter().flat_map(angle_size_pairs).unzip();
    pearson(&angles, &sizes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::returns::detect_return_fixations;
    use crate::scanpath::Source;

    fn path(points: &[(f64, f64)]) -> Scanpath {
        Scanpath::from_points("s", "t", points, Source::Experimental)
    }

    #[test]
    fn angle_examples() {
        assert_eq!(turning_angle((0.0, 0.0), (1.0, 0.0), (2.0, 0.0)), Some(0.0));
        assert_eq!(
            turning_angle((0.0, 0.0), (1.0, 0.0), (0.0, 0.0)),
            Some(180.0)
        );
        assert!((turning_angle((0.0, 0.0), (1.0, 0.0), (1.0, 1.0)).unwrap() - 90.0).abs() < 1e-12);
        assert!((turning_angle((0.0, 0.0), (1.0, 0.0), (1.0, -1.0)).unwrap() - 90.0).abs() < 1e-12);
        assert_eq!(turning_angle((0.0, 0.0), (0.0, 0.0), (1.0, 0.0)), None);
    }

    #[test]
    fn reversal_lands_in_last_bin() {
        let p = path(&[(0.0, 0.0), (4.0, 0.0), (0.0, 0.0)]);
        let a = detect_return_fixations(&p, 1.0).unwrap();
        let h = turning_angles(&p, &a, 12.0).unwrap();
        assert_eq!(h.returns.len(), 15);
        assert_eq!(h.returns.counts()[14], 1.0);
        assert!(h.non_returns.is_empty());
    }

    #[test]
    fn zero_length_saccade_is_skipped() {
        let p = path(&[(0.0, 0.0), (3.0, 0.0), (3.0, 0.0), (6.0, 0.0)]);
        let a = detect_return_fixations(&p, 1.0).unwrap();
        let h = turning_angles(&p, &a, 12.0).unwrap();
        assert_eq!(h.returns.total() + h.non_returns.total(), 0.0);
    }

    #[test]
    fn sizes_by_class() {
        let p = path(&[(0.0, 0.0), (3.0, 4.0), (0.5, 0.0), (6.0, 0.0)]);
        let a = detect_return_fixations(&p, 1.0).unwrap();
        let s = saccade_size_stats(&p, &a).unwrap();
        assert_eq!(s.by_class.non_return.mean, Some((5.0 + 5.5) / 2.0));
        let back = (2.5f64 * 2.5 + 16.0).sqrt();
        assert!((s.by_class.returns.mean.unwrap() - back).abs() < 1e-12);
        assert_eq!(s.by_class.to_be_revisited.mean, None);
        assert_eq!(s.pooled.n, 3);
        assert_eq!(s.histogram.total(), 3.0);
    }

    #[test]
    fn durations() {
        let mut p = path(&[(0.0, 0.0), (5.0, 0.0), (0.2, 0.0)]);
        for f in &mut p.fixations {
            f.duration_ms = Some(250.0);
            f.on_target = Some(f.x_dva > 1.0);
        }
        let a = detect_return_fixations(&p, 1.0).unwrap();
        let d = fixation_duration_stats(&p, &a, true).unwrap();
        for c in FixationClass::ALL {
            assert_eq!(d.by_class.get(c).mean, Some(250.0));
        }
        assert_eq!(d.on_target.unwrap().non_return.mean, Some(250.0));
        assert_eq!(d.off_target.unwrap().non_return.mean, None);
        p.fixations[1].duration_ms = None;
        assert!(matches!(
            fixation_duration_stats(&p, &a, false),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn correlation_needs_variance() {
        let zigzag = path(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]);
        assert_eq!(angle_size_correlation(&[zigzag]), None);
    }
}
