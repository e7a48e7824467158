use crate::features::SEARCH_STRIDE_PX;
use crate::image::ImageGrid;

/// The working resolution shared by all maps, with its extent in dva.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapGrid {
    pub rows: usize,
    pub cols: usize,
    pub width_dva: f64,
    pub height_dva: f64,
}

impl MapGrid {
    pub fn new(rows: usize, cols: usize, width_dva: f64, height_dva: f64) -> Self {
        assert!(rows > 0 && cols > 0, "grid must be non-empty");
        Self {
            rows,
            cols,
            width_dva,
            height_dva,
        }
    }

    /// One cell per 8x8 pixel block of the image.
    pub fn for_image(image: &ImageGrid) -> Self {
        Self::new(
            image.height().div_ceil(SEARCH_STRIDE_PX),
            image.width().div_ceil(SEARCH_STRIDE_PX),
            image.width_dva(),
            image.height_dva(),
        )
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_width_dva(&self) -> f64 {
        self.width_dva / self.cols as f64
    }

    pub fn cell_height_dva(&self) -> f64 {
        self.height_dva / self.rows as f64
    }

    pub fn cell_center(&self, index: usize) -> (f64, f64) {
        let (r, c) = (index / self.cols, index % self.cols);
        (
            (c as f64 + 0.5) * self.cell_width_dva(),
            (r as f64 + 0.5) * self.cell_height_dva(),
        )
    }

    /// Cell containing a point, clamped to the grid.
    pub fn cell_of(&self, x_dva: f64, y_dva: f64) -> usize {
        let c = ((x_dva / self.cell_width_dva()).floor().max(0.0) as usize).min(self.cols - 1);
        let r = ((y_dva / self.cell_height_dva()).floor().max(0.0) as usize).min(self.rows - 1);
        r * self.cols + c
    }

    pub fn center(&self) -> (f64, f64) {
        (self.width_dva / 2.0, self.height_dva / 2.0)
    }

    pub fn centers(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.len()).map(|i| self.cell_center(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centers_and_lookup_agree() {
        let g = MapGrid::new(4, 5, 10.0, 8.0);
        for i in 0..g.len() {
            let (x, y) = g.cell_center(i);
            assert_eq!(g.cell_of(x, y), i);
        }
        assert_eq!(g.cell_center(0), (1.0, 1.0));
        assert_eq!(g.cell_of(-3.0, 100.0), 15);
    }
}
