use std::path::{Path, PathBuf};

use log::warn;

use super::image_io::load_image;
use super::kv::{parse_blocks, Entry};
use crate::engine::Mode;
use crate::error::{Error, Result};
use crate::image::ImageGrid;
use crate::metrics::TargetBox;

pub const DEFAULT_RETURN_THRESHOLD_DVA: f64 = 1.0;
pub const EGOCENTRIC_RETURN_THRESHOLD_DVA: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DatasetKind {
    #[default]
    Standard,
    Egocentric,
}

impl DatasetKind {
    pub fn default_return_threshold_dva(self) -> f64 {
        match self {
            DatasetKind::Standard => DEFAULT_RETURN_THRESHOLD_DVA,
            DatasetKind::Egocentric => EGOCENTRIC_RETURN_THRESHOLD_DVA,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialManifest {
    pub trial_id: String,
    pub search_image: PathBuf,
    pub target_image: Option<PathBuf>,
    pub target_box_dva: Option<TargetBox>,
    pub image_width_dva: f64,
    pub image_height_dva: f64,
    pub task: Mode,
    pub dataset: DatasetKind,
}

impl TrialManifest {
    /// Loads the search image with its angular scale taken from `image_width_dva`.
    pub fn load_search(&self) -> Result<ImageGrid> {
        self.load(&self.search_image)
    }

    pub fn load_target(&self) -> Result<Option<ImageGrid>> {
        let Some(path) = &self.target_image else {
            return Ok(None);
        };
        // the target shares the search image's angular scale
        let search = image::image_dimensions(&self.search_image)
            .map_err(|e| Error::ImageFormat(format!("{}: {e}", self.search_image.display())))?;
        let dva_per_px = self.image_width_dva / search.0 as f64;
        load_image(path, dva_per_px).map(Some)
    }

    fn load(&self, path: &Path) -> Result<ImageGrid> {
        let (w, h) = image::image_dimensions(path)
            .map_err(|e| Error::ImageFormat(format!("{}: {e}", path.display())))?;
        let dva_per_px = self.image_width_dva / w as f64;
        let implied = h as f64 * dva_per_px;
        if (implied - self.image_height_dva).abs() > 0.01 * self.image_height_dva {
            warn!(
                "trial {}: image is {implied:.3} dva tall at its width scale, manifest says {}",
                self.trial_id, self.image_height_dva
            );
        }
        load_image(path, dva_per_px)
    }
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Vec<TrialManifest>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    parse_manifest(&text, base)
}

/// One record per blank-line separated block; relative image paths are
/// resolved against `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<TrialManifest>> {
    let mut trials: Vec<TrialManifest> = Vec::new();
    for block in parse_blocks(text)? {
        let record = parse_record(&block, base)?;
        if trials.iter().any(|t| t.trial_id == record.trial_id) {
            return Err(Error::Validation(format!(
                "trial {} appears twice in the manifest",
                record.trial_id
            )));
        }
        trials.push(record);
    }
    Ok(trials)
}

fn parse_record(block: &[Entry], base: &Path) -> Result<TrialManifest> {
    let first_line = block[0].line;
    let (mut trial_id, mut search, mut target, mut target_box) = (None, None, None, None);
    let (mut width, mut height, mut task, mut dataset) = (None, None, None, DatasetKind::Standard);
    let resolve = |v: &str| {
        let p = PathBuf::from(v);
        if p.is_relative() {
            base.join(p)
        } else {
            p
        }
    };
    for e in block {
        match e.key.as_str() {
            "trial_id" => trial_id = Some(e.value.clone()),
            "search_image" => search = Some(resolve(&e.value)),
            "target_image" => target = Some(resolve(&e.value)),
            "target_box_dva" => target_box = Some(parse_box(e)?),
            "image_width_dva" => width = Some(e.positive()?),
            "image_height_dva" => height = Some(e.positive()?),
            "task" => task = Some(e.parsed::<Mode>()?),
            "dataset" => {
                dataset = match e.value.as_str() {
                    "standard" => DatasetKind::Standard,
                    "egocentric" => DatasetKind::Egocentric,
                    other => return Err(e.error(format!("unknown dataset kind '{other}'"))),
                }
            }
            other => return Err(e.error(format!("unknown key '{other}'"))),
        }
    }
    let missing = |what: &str| Error::Parse {
        line: first_line,
        message: format!("record is missing '{what}'"),
    };
    let trial_id = trial_id
        .filter(|t| !t.is_empty())
        .ok_or_else(|| missing("trial_id"))?;
    let task = task.ok_or_else(|| missing("task"))?;
    if task == Mode::VisualSearch && target.is_none() {
        return Err(Error::Validation(format!(
            "trial {trial_id}: visual_search needs a target_image"
        )));
    }
    Ok(TrialManifest {
        search_image: search.ok_or_else(|| missing("search_image"))?,
        target_image: target,
        target_box_dva: target_box,
        image_width_dva: width.ok_or_else(|| missing("image_width_dva"))?,
        image_height_dva: height.ok_or_else(|| missing("image_height_dva"))?,
        task,
        dataset,
        trial_id,
    })
}

/// `x, y, width, height` in dva.
fn parse_box(e: &Entry) -> Result<TargetBox> {
    let parts: Vec<f64> = e
        .value
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| e.error("expected four numbers 'x, y, width, height'"))?;
    match parts[..] {
        [x, y, width, height] if width > 0.0 && height > 0.0 && x.is_finite() && y.is_finite() => {
            Ok(TargetBox {
                x,
                y,
                width,
                height,
            })
        }
        _ => Err(e.error("expected four numbers 'x, y, width, height' with positive size")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = "\
trial_id = t1
search_image = img/a.png
image_width_dva = 16
image_height_dva = 12
task = free_viewing

trial_id = t2
search_image = /abs/b.png
target_image = tgt/b.png
target_box_dva = 1, 2, 3.5, 4
image_width_dva = 16
image_height_dva = 16
task = visual_search
dataset = egocentric
";

    #[test]
    fn parses_records() {
        let m = parse_manifest(TEXT, Path::new("/data")).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].search_image, PathBuf::from("/data/img/a.png"));
        assert_eq!(m[0].target_image, None);
        assert_eq!(m[1].search_image, PathBuf::from("/abs/b.png"));
        assert_eq!(m[1].target_box_dva.unwrap().width, 3.5);
        assert_eq!(m[1].dataset, DatasetKind::Egocentric);
        assert_eq!(m[1].dataset.default_return_threshold_dva(), 1.5);
    }

    #[test]
    fn search_without_target_is_invalid() {
        let text = "trial_id = x\nsearch_image = a.png\nimage_width_dva = 1\nimage_height_dva = 1\ntask = visual_search\n";
        assert!(matches!(
            parse_manifest(text, Path::new("")),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn missing_field_and_duplicates() {
        let text = "trial_id = x\nsearch_image = a.png\ntask = free_viewing\n";
        assert!(matches!(
            parse_manifest(text, Path::new("")),
            Err(Error::Parse { line: 1, .. })
        ));
        let one = "trial_id = x\nsearch_image = a.png\nimage_width_dva = 1\nimage_height_dva = 1\ntask = free_viewing\n";
        let twice = format!("{one}\n{one}");
        assert!(matches!(
            parse_manifest(&twice, Path::new("")),
            Err(Error::Validation(_))
        ));
    }
}
