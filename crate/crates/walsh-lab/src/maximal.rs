//! Dyadic maximal operators: square, hybrid (one-axis), and diagonal.
//!
//! Conventions matter here and are deliberate. The square operator M takes
//! the absolute value outside the average, so it sees signed cancellation:
//! M f = sup_n |S_{2^n,2^n} f|. The hybrid operators M_1, M_2 average |f|
//! along one axis, absolute value inside. `dyadic_maximal_abs` is the
//! square operator applied to |f|, the form that appears as a bound on the
//! right-hand side of the strong-mean estimate.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Axis, Grid2};
use crate::numeric::transpose;
use crate::pyramid::{CellPyramid1, CellPyramid2};

const PAR_MIN: usize = 1 << 15;

fn per_row_map(values: &[f64], side: usize, f: impl Fn(&[f64], &mut [f64]) + Sync) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    if values.len() >= PAR_MIN {
        out.par_chunks_mut(side)
            .zip(values.par_chunks(side))
            .for_each(|(o, i)| f(i, o));
    } else {
        out.chunks_mut(side)
            .zip(values.chunks(side))
            .for_each(|(o, i)| f(i, o));
    }
    out
}

/// sup over n of |level-n square cell average|, absolute value outside.
pub fn dyadic_maximal(f: &Grid2) -> Grid2 {
    let p = CellPyramid2::new(f);
    square_maximal_from_pyramid(&p, f.resolution())
}

/// The square maximal operator applied to |f|; since averages of |f| are
/// nonnegative this dominates `dyadic_maximal` pointwise.
pub fn dyadic_maximal_abs(f: &Grid2) -> Grid2 {
    let p = CellPyramid2::new(&f.map(f64::abs));
    square_maximal_from_pyramid(&p, f.resolution())
}

fn square_maximal_from_pyramid(p: &CellPyramid2, resolution: u8) -> Grid2 {
    let res = resolution as u32;
    let side = 1usize << res;
    let mut values = vec![0.0; side * side];
    for n in 0..=res {
        let shift = res - n;
        let cells = (1u64 << (2 * shift)) as f64;
        let sums = p.square_sums(n);
        for x in 0..side {
            let a = x >> shift;
            let row = &mut values[x * side..(x + 1) * side];
            let srow = &sums[(a << n)..((a + 1) << n)];
            for (y, slot) in row.iter_mut().enumerate() {
                let avg = srow[y >> shift] / cells;
                let cand = avg.abs();
                if cand > *slot {
                    *slot = cand;
                }
            }
        }
    }
    Grid2::from_raw(resolution, values)
}

/// 1D dyadic maximal function of |values|, one output per input cell.
fn maximal_1d_abs(values: &[f64], out: &mut [f64]) {
    let p = CellPyramid1::new(&values.iter().map(|v| v.abs()).collect::<Vec<_>>())
        .expect("row length is a power of two");
    let res = p.resolution() as u32;
    for (code, slot) in out.iter_mut().enumerate() {
        let mut best = 0.0f64;
        for n in 0..=res {
            let avg = p.point_average(n, code as u32);
            if avg > best {
                best = avg;
            }
        }
        *slot = best;
    }
}

/// Hybrid maximal operator: sup over n of the level-n average of |f| along
/// the given axis, the other variable held fixed. Axis X is M_1, axis Y is M_2.
pub fn hybrid_maximal(f: &Grid2, axis: Axis) -> Grid2 {
    let side = f.side();
    match axis {
        Axis::Y => {
            let values = per_row_map(f.values(), side, maximal_1d_abs);
            Grid2::from_raw(f.resolution(), values)
        }
        Axis::X => {
            let t = transpose(f.values(), side);
            let values = per_row_map(&t, side, maximal_1d_abs);
            Grid2::from_raw(f.resolution(), transpose(&values, side))
        }
    }
}

/// Diagonal average A_j f(x, y) = 2^j * integral over I_j of |f(x+s, y+s)|.
///
/// Along each anti-diagonal d = x + y the integrand is a 1D slice
/// g_d(u) = f(u, u + d), and A_j at (x, x + d) is the level-j cell average
/// of |g_d| at x.
pub fn diagonal_average(f: &Grid2, j: u32) -> Result<Grid2> {
    let res = f.resolution() as u32;
    if j > res {
        return Err(Error::IndexOutOfRange {
            what: "diagonal level",
            value: j as u64,
            max: res as u64,
        });
    }
    let side = f.side();
    let width = 1usize << (res - j);
    let mut values = vec![0.0; side * side];
    let mut slice = vec![0.0; side];
    for d in 0..side {
        for u in 0..side {
            slice[u] = f.values()[u * side + (u ^ d)].abs();
        }
        for cell in 0..(1usize << j) {
            let lo = cell * width;
            let avg: f64 = slice[lo..lo + width].iter().sum::<f64>() / width as f64;
            for u in lo..lo + width {
                values[u * side + (u ^ d)] = avg;
            }
        }
    }
    Ok(Grid2::from_raw(f.resolution(), values))
}

/// A f = sup over j <= N of A_j f.
pub fn diagonal_maximal(f: &Grid2) -> Grid2 {
    let res = f.resolution() as u32;
    let side = f.side();
    let mut values = vec![0.0; side * side];
    let mut slice = vec![0.0; side];
    let mut best = vec![0.0; side];
    for d in 0..side {
        for u in 0..side {
            slice[u] = f.values()[u * side + (u ^ d)].abs();
        }
        let p = CellPyramid1::new(&slice).expect("side is a power of two");
        for u in 0..side {
            let mut m = 0.0f64;
            for j in 0..=res {
                let avg = p.point_average(j, u as u32);
                if avg > m {
                    m = avg;
                }
            }
            best[u] = m;
        }
        for u in 0..side {
            values[u * side + (u ^ d)] = best[u];
        }
    }
    Grid2::from_raw(f.resolution(), values)
}

/// The shear (x, y) -> (x, x + y): shear(f)(x, y) = f(x, x + y). An
/// involution that permutes level-N cells, so it preserves every rearrangement
/// invariant quantity, and it straightens diagonals into rows:
/// A f (x, y) = M_1(shear f)(x, x + y).
pub fn shear(f: &Grid2) -> Grid2 {
    let side = f.side();
    let values = f.values();
    let mut out = vec![0.0; values.len()];
    for x in 0..side {
        let row = &values[x * side..(x + 1) * side];
        let orow = &mut out[x * side..(x + 1) * side];
        for y in 0..side {
            orow[y] = row[y ^ x];
        }
    }
    Grid2::from_raw(f.resolution(), out)
}
