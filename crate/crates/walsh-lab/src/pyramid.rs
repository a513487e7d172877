//! Cell-sum pyramids: every dyadic conditional expectation in O(1) lookups.
//!
//! Level n of a pyramid stores the sum of the input over each level-n cell.
//! Averages divide by the cell size. The square pyramid feeds the dyadic
//! maximal function and S_{2^n, 2^n}; the rectangle pyramids (one axis
//! coarsened, the other kept at full resolution) feed the hybrid operators.

use crate::error::{Error, Result};
use crate::grid::Grid2;

/// Prefix-cell sums of a 1D array at every level 0 ..= N.
#[derive(Clone, Debug)]
pub struct CellPyramid1 {
    resolution: u8,
    /// levels[n] has 2^n entries; entry c sums inputs with code >> (N-n) == c.
    levels: Vec<Vec<f64>>,
}

impl CellPyramid1 {
    pub fn new(values: &[f64]) -> Result<Self> {
        if !values.len().is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "pyramid input length {} is not a power of two",
                values.len()
            )));
        }
        let resolution = values.len().trailing_zeros() as u8;
        let mut levels = vec![Vec::new(); resolution as usize + 1];
        levels[resolution as usize] = values.to_vec();
        for n in (0..resolution as usize).rev() {
            let finer = &levels[n + 1];
            let mut coarse = Vec::with_capacity(finer.len() / 2);
            for pair in finer.chunks_exact(2) {
                coarse.push(pair[0] + pair[1]);
            }
            levels[n] = coarse;
        }
        Ok(Self { resolution, levels })
    }

    pub fn resolution(&self) -> u8 {
        self.resolution
    }

    pub fn cell_sum(&self, level: u32, cell: u32) -> f64 {
        self.levels[level as usize][cell as usize]
    }

    pub fn level_sums(&self, level: u32) -> &[f64] {
        &self.levels[level as usize]
    }

    /// Average over the level-n cell: sum / 2^(N-n).
    pub fn cell_average(&self, level: u32, cell: u32) -> f64 {
        let width = 1u64 << (self.resolution as u32 - level);
        self.cell_sum(level, cell) / width as f64
    }

    /// Average over the level-n cell containing `code`; this is S_{2^n} f at
    /// the point when the input is a function grid.
    pub fn point_average(&self, level: u32, code: u32) -> f64 {
        self.cell_average(level, code >> (self.resolution as u32 - level))
    }

    /// All 2^n level-n averages.
    pub fn averages_at_level(&self, level: u32) -> Vec<f64> {
        let width = (1u64 << (self.resolution as u32 - level)) as f64;
        self.levels[level as usize].iter().map(|s| s / width).collect()
    }
}

/// Cell sums of a 2D grid over squares and both kinds of dyadic rectangles.
#[derive(Clone, Debug)]
pub struct CellPyramid2 {
    resolution: u8,
    /// square[n] has 4^n entries, index a * 2^n + b for the level-n square cell.
    square: Vec<Vec<f64>>,
    /// x_rect[n] has 2^n * 2^N entries, index a * 2^N + y: x coarsened to
    /// level n, y exact.
    x_rect: Vec<Vec<f64>>,
    /// y_rect[n] has 2^N * 2^n entries, index x * 2^n + b: y coarsened.
    y_rect: Vec<Vec<f64>>,
}

impl CellPyramid2 {
    pub fn new(f: &Grid2) -> Self {
        let resolution = f.resolution();
        let n_levels = resolution as usize + 1;
        let side = f.side();

        let mut y_rect = vec![Vec::new(); n_levels];
        y_rect[resolution as usize] = f.values().to_vec();
        for n in (0..resolution as usize).rev() {
            let finer = &y_rect[n + 1];
            let half = 1usize << n;
            let mut coarse = Vec::with_capacity(side * half);
            for row in finer.chunks_exact(2 * half) {
                for pair in row.chunks_exact(2) {
                    coarse.push(pair[0] + pair[1]);
                }
            }
            y_rect[n] = coarse;
        }

        let mut x_rect = vec![Vec::new(); n_levels];
        x_rect[resolution as usize] = f.values().to_vec();
        for n in (0..resolution as usize).rev() {
            let finer = &x_rect[n + 1];
            let rows = 1usize << n;
            let mut coarse = Vec::with_capacity(rows * side);
            for a in 0..rows {
                let top = &finer[(2 * a) * side..(2 * a + 1) * side];
                let bot = &finer[(2 * a + 1) * side..(2 * a + 2) * side];
                coarse.extend(top.iter().zip(bot).map(|(t, b)| t + b));
            }
            x_rect[n] = coarse;
        }

        // Squares coarsen the x-rectangles one axis further.
        let mut square = vec![Vec::new(); n_levels];
        for n in 0..n_levels {
            let rows = 1usize << n;
            let shift = resolution as usize - n;
            let src = &x_rect[n];
            let mut sums = vec![0.0; rows << n];
            for a in 0..rows {
                let row = &src[a * side..(a + 1) * side];
                let dst = &mut sums[a << n..(a + 1) << n];
                for (y, v) in row.iter().enumerate() {
                    dst[y >> shift] += v;
                }
            }
            square[n] = sums;
        }

        Self {
            resolution,
            square,
            x_rect,
            y_rect,
        }
    }

    pub fn resolution(&self) -> u8 {
        self.resolution
    }

    pub fn square_sum(&self, level: u32, a: u32, b: u32) -> f64 {
        self.square[level as usize][((a as usize) << level) | b as usize]
    }

    pub fn square_sums(&self, level: u32) -> &[f64] {
        &self.square[level as usize]
    }

    /// Average over the level-n square cell containing (x, y): the value of
    /// S_{2^n, 2^n} f there.
    pub fn square_average_at(&self, level: u32, x: u32, y: u32) -> f64 {
        let shift = self.resolution as u32 - level;
        let cells = 1u64 << (2 * shift);
        self.square_sum(level, x >> shift, y >> shift) / cells as f64
    }

    pub fn x_rect_sums(&self, level: u32) -> &[f64] {
        &self.x_rect[level as usize]
    }

    pub fn y_rect_sums(&self, level: u32) -> &[f64] {
        &self.y_rect[level as usize]
    }

    /// Average over the level-n x-cell times the exact y-cell: S^(1)_{2^n} f.
    pub fn x_rect_average_at(&self, level: u32, x: u32, y: u32) -> f64 {
        let shift = self.resolution as u32 - level;
        let a = (x >> shift) as usize;
        let width = (1u64 << shift) as f64;
        self.x_rect[level as usize][(a << self.resolution) | y as usize] / width
    }

    /// Average over the exact x-cell times the level-n y-cell: S^(2)_{2^n} f.
    pub fn y_rect_average_at(&self, level: u32, x: u32, y: u32) -> f64 {
        let shift = self.resolution as u32 - level;
        let b = (y >> shift) as usize;
        let width = (1u64 << shift) as f64;
        self.y_rect[level as usize][((x as usize) << level) | b] / width
    }
}
