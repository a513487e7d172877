//! Fast Walsh-Hadamard transforms and the partial-sum operators built on them.
//!
//! The coefficient of w_n is 2^-N sum over codes of f(code) * w_n(code), and
//! w_n evaluates through the bit-reversed code (see `point`). The standard
//! in-place butterfly computes the Hadamard pairing against plain binary
//! indices, so the transform is: permute the point side by bit reversal, run
//! the butterfly, scale. The inverse runs the butterfly first and permutes
//! after, which makes the round trip exact up to float rounding.
//!
//! The 2D transform runs the same flat butterfly over all 2N stages of the
//! 4^N array: stages below 2^N mix the y digits, the rest mix x, so one pass
//! equals a transform along each axis. Only the index permutation is applied
//! per axis.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Axis, Grid1, Grid2};
use crate::numeric::{bit_reverse, transpose};
use crate::point::walsh_sign;
use crate::spectrum::{Spectrum1, Spectrum2};

/// Below this length the stage loop stays sequential; parallel splits are
/// always on segment boundaries, so results are identical either way.
const PAR_MIN: usize = 1 << 15;

fn butterfly_stage(chunk: &mut [f64], h: usize) {
    let (lo, hi) = chunk.split_at_mut(h);
    for j in 0..h {
        let a = lo[j];
        let b = hi[j];
        lo[j] = a + b;
        hi[j] = a - b;
    }
}

/// In-place Hadamard butterfly: out[i] = sum_u in[u] * (-1)^popcount(i & u).
pub(crate) fn butterfly_in_place(data: &mut [f64]) {
    let len = data.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        let seg = 2 * h;
        if len >= PAR_MIN && len / seg >= 2 {
            data.par_chunks_mut(seg)
                .for_each(|chunk| butterfly_stage(chunk, h));
        } else {
            for chunk in data.chunks_mut(seg) {
                butterfly_stage(chunk, h);
            }
        }
        h = seg;
    }
}

/// Permutes data[i] <-> data[bit_reverse(i)]; an involution.
pub(crate) fn bit_reverse_permute(data: &mut [f64], width: u8) {
    debug_assert_eq!(data.len(), 1usize << width);
    for i in 0..data.len() {
        let r = bit_reverse(i as u32, width) as usize;
        if r > i {
            data.swap(i, r);
        }
    }
}

/// Applies the bit reversal to both axis indices of a flat 4^N array.
fn bit_reverse_permute_axes(data: &mut [f64], resolution: u8) {
    let side = 1usize << resolution;
    debug_assert_eq!(data.len(), side * side);
    for x in 0..side {
        let rx = bit_reverse(x as u32, resolution) as usize;
        for y in 0..side {
            let ry = bit_reverse(y as u32, resolution) as usize;
            let i = x * side + y;
            let j = rx * side + ry;
            if j > i {
                data.swap(i, j);
            }
        }
    }
}

fn scale_in_place(data: &mut [f64], s: f64) {
    if data.len() >= PAR_MIN {
        data.par_chunks_mut(4096)
            .for_each(|chunk| chunk.iter_mut().for_each(|v| *v *= s));
    } else {
        data.iter_mut().for_each(|v| *v *= s);
    }
}

pub fn fwht_forward(g: &Grid1) -> Spectrum1 {
    let mut data = g.values().to_vec();
    bit_reverse_permute(&mut data, g.resolution());
    butterfly_in_place(&mut data);
    scale_in_place(&mut data, g.cell_measure());
    Spectrum1::from_raw(g.resolution(), data)
}

pub fn fwht_inverse(s: &Spectrum1) -> Grid1 {
    let mut data = s.coeffs().to_vec();
    butterfly_in_place(&mut data);
    bit_reverse_permute(&mut data, s.resolution());
    Grid1::from_raw(s.resolution(), data)
}

pub fn fwht_forward_2d(g: &Grid2) -> Spectrum2 {
    let mut data = g.values().to_vec();
    bit_reverse_permute_axes(&mut data, g.resolution());
    butterfly_in_place(&mut data);
    scale_in_place(&mut data, g.cell_measure());
    Spectrum2::from_raw(g.resolution(), data)
}

pub fn fwht_inverse_2d(s: &Spectrum2) -> Grid2 {
    let mut data = s.coeffs().to_vec();
    butterfly_in_place(&mut data);
    bit_reverse_permute_axes(&mut data, s.resolution());
    Grid2::from_raw(s.resolution(), data)
}

/// 1D partial sum S_m f = sum_{k < m} coeff(k) w_k. Requires m <= 2^N;
/// m = 0 gives the zero function, m = 2^N reconstructs f.
pub fn partial_sum_1d(f: &Grid1, m: usize) -> Result<Grid1> {
    let side = f.side();
    if m > side {
        return Err(Error::IndexOutOfRange {
            what: "partial sum order",
            value: m as u64,
            max: side as u64,
        });
    }
    let mut s = fwht_forward(f);
    s.coeffs_mut()[m..].iter_mut().for_each(|c| *c = 0.0);
    Ok(fwht_inverse(&s))
}

/// Rectangular partial sum S_{m,k} f: frequencies i < m in x and j < k in y.
pub fn partial_sum_rect(f: &Grid2, m: usize, k: usize) -> Result<Grid2> {
    let side = f.side();
    for (what, v) in [("x frequency bound", m), ("y frequency bound", k)] {
        if v > side {
            return Err(Error::IndexOutOfRange {
                what,
                value: v as u64,
                max: side as u64,
            });
        }
    }
    let mut s = fwht_forward_2d(f);
    {
        let coeffs = s.coeffs_mut();
        for i in 0..side {
            let row = &mut coeffs[i * side..(i + 1) * side];
            if i < m {
                row[k..].iter_mut().for_each(|c| *c = 0.0);
            } else {
                row.fill(0.0);
            }
        }
    }
    Ok(fwht_inverse_2d(&s))
}

fn truncate_rows_in_place(values: &mut [f64], side: usize, n: usize, resolution: u8) {
    let scale = 1.0 / side as f64;
    let apply = |row: &mut [f64]| {
        bit_reverse_permute(row, resolution);
        butterfly_in_place(row);
        row.iter_mut().for_each(|c| *c *= scale);
        row[n..].iter_mut().for_each(|c| *c = 0.0);
        butterfly_in_place(row);
        bit_reverse_permute(row, resolution);
    };
    if values.len() >= PAR_MIN {
        values.par_chunks_mut(side).for_each(apply);
    } else {
        values.chunks_mut(side).for_each(apply);
    }
}

/// Marginal partial sum: S_n applied in one variable only, the other held
/// fixed. Axis X truncates x frequencies, axis Y truncates y frequencies.
pub fn marginal_partial_sum(f: &Grid2, n: usize, axis: Axis) -> Result<Grid2> {
    let side = f.side();
    if n > side {
        return Err(Error::IndexOutOfRange {
            what: "marginal sum order",
            value: n as u64,
            max: side as u64,
        });
    }
    let resolution = f.resolution();
    match axis {
        Axis::Y => {
            let mut values = f.values().to_vec();
            truncate_rows_in_place(&mut values, side, n, resolution);
            Ok(Grid2::from_raw(resolution, values))
        }
        Axis::X => {
            let mut values = transpose(f.values(), side);
            truncate_rows_in_place(&mut values, side, n, resolution);
            Ok(Grid2::from_raw(resolution, transpose(&values, side)))
        }
    }
}

/// Dirichlet kernel D_m = sum_{k < m} w_k, evaluated by direct summation of
/// character signs. Values are integers; they are returned as floats since
/// |D_m| <= m < 2^31 is exactly representable.
pub fn dirichlet_kernel(m: usize, resolution: u8) -> Result<Grid1> {
    let side = 1usize << resolution;
    if m > side {
        return Err(Error::FrequencyOutOfRange {
            frequency: m as u64,
            resolution,
        });
    }
    let mut acc = vec![0i64; side];
    for k in 0..m as u32 {
        for (code, slot) in acc.iter_mut().enumerate() {
            *slot += walsh_sign(k, code as u32, resolution) as i64;
        }
    }
    Ok(Grid1::from_raw(
        resolution,
        acc.into_iter().map(|v| v as f64).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid1_from(vals: &[f64]) -> Grid1 {
        let n = vals.len().trailing_zeros() as u8;
        Grid1::new(n, vals.to_vec()).unwrap()
    }

    #[test]
    fn constant_transforms_to_delta_at_zero() {
        let g = Grid2::constant(3, 5.0).unwrap();
        let s = fwht_forward_2d(&g);
        assert_eq!(s.coeff(0, 0), 5.0);
        let rest: f64 = s.coeffs()[1..].iter().map(|c| c.abs()).sum();
        assert_eq!(rest, 0.0);
    }

    #[test]
    fn sampled_character_has_unit_coefficient() {
        let g = Grid1::from_fn(3, |code| walsh_sign(5, code, 3) as f64).unwrap();
        let s = fwht_forward(&g);
        for n in 0..8u32 {
            let expected = if n == 5 { 1.0 } else { 0.0 };
            assert!((s.coeff(n) - expected).abs() < 1e-15, "n = {n}");
        }
    }

    #[test]
    fn round_trip_small() {
        let g = grid1_from(&[0.5, -1.25, 3.0, 2.0, -0.75, 0.0, 1.0, 9.0]);
        let back = fwht_inverse(&fwht_forward(&g));
        for (a, b) in g.values().iter().zip(back.values()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn dirichlet_low_orders() {
        // D_1 = w_0 is identically one.
        let d1 = dirichlet_kernel(1, 3).unwrap();
        assert!(d1.values().iter().all(|&v| v == 1.0));
        // D_3 at resolution 2: w_0 + w_1 + w_2 = [3, 1, 1, -1].
        let d3 = dirichlet_kernel(3, 2).unwrap();
        assert_eq!(d3.values(), &[3.0, 1.0, 1.0, -1.0]);
        // D_4 at resolution 3 concentrates on I_2 = {0, 1} with value 4.
        let d4 = dirichlet_kernel(4, 3).unwrap();
        assert_eq!(d4.values(), &[4.0, 4.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn dirichlet_integrates_to_indicator_mass() {
        // Integral of D_m is 1 for m >= 1 (only w_0 survives), 0 for m = 0.
        for m in 0..=8usize {
            let d = dirichlet_kernel(m, 3).unwrap();
            let expected = if m >= 1 { 1.0 } else { 0.0 };
            assert!((d.integral() - expected).abs() < 1e-15, "m = {m}");
        }
    }

    #[test]
    fn rect_partial_sum_selects_rectangle() {
        // f = w_2(x) w_1(y): kept by S_{3,2}, killed by S_{2,2}.
        let f = Grid2::from_fn(3, |x, y| {
            (walsh_sign(2, x, 3) * walsh_sign(1, y, 3)) as f64
        })
        .unwrap();
        let kept = partial_sum_rect(&f, 3, 2).unwrap();
        let killed = partial_sum_rect(&f, 2, 2).unwrap();
        for i in 0..f.len() {
            assert!((kept.values()[i] - f.values()[i]).abs() < 1e-14);
            assert!(killed.values()[i].abs() < 1e-14);
        }
    }

    #[test]
    fn zero_order_partial_sum_vanishes() {
        let f = Grid2::from_fn(2, |x, y| (x * 4 + y) as f64).unwrap();
        let z = partial_sum_rect(&f, 0, 4).unwrap();
        assert!(z.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn full_order_partial_sum_reconstructs() {
        let f = Grid2::from_fn(3, |x, y| ((x * 13 + y * 5) as f64).cos()).unwrap();
        let s = partial_sum_rect(&f, 8, 8).unwrap();
        for i in 0..f.len() {
            assert!((s.values()[i] - f.values()[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn marginal_sum_on_x_independent_function() {
        // f depends only on y, so the first marginal at order 1 returns f.
        let f = Grid2::from_fn(3, |_x, y| (y as f64).sqrt()).unwrap();
        let s = marginal_partial_sum(&f, 1, Axis::X).unwrap();
        for i in 0..f.len() {
            assert!((s.values()[i] - f.values()[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn marginal_sum_dyadic_order_is_cell_average() {
        // S^(2) at order 2^k averages f(x, .) over level-k y-cells.
        let f = Grid2::from_fn(3, |x, y| ((x + 2 * y) as f64).tanh()).unwrap();
        let s = marginal_partial_sum(&f, 4, Axis::Y).unwrap();
        for x in 0..8u32 {
            for y in 0..8u32 {
                let cell = (y >> 1) << 1;
                let avg = (f.value(x, cell) + f.value(x, cell + 1)) / 2.0;
                assert!((s.value(x, y) - avg).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn marginal_rejects_large_order() {
        let f = Grid2::zeros(2).unwrap();
        assert!(marginal_partial_sum(&f, 5, Axis::Y).is_err());
    }
}
