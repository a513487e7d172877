//! The square-function operators behind the strong-mean estimate.
//!
//! For a 1D function f and level n,
//!
//!   V_n f(x) = ( 2^-n * integral over t of
//!                ( sum_{j<n} 2^(j-1) 1_{I_j}(t) S_{2^n}f(x + t + e_j) )^2 )^(1/2)
//!
//! S_{2^n} f is the level-n cell average, so the integrand only depends on
//! the top n bits of t and x. Writing tau for the top bits of t, the inner
//! sum keeps exactly the terms j <= z(tau) (the number of leading zero
//! coordinates of tau) and j <= n-1, and flipping e_j toggles bit n-1-j of
//! the cell index. The integral collapses to a finite average over tau,
//! which is what the kernel below evaluates: cost about 2 * 4^n per level.
//!
//! The hybrid forms V_1, V_2 apply the same construction in one variable of
//! a 2D function with the marginal partial sum S^(i)_{2^n}; since that
//! marginal is the cell average of the 1D slice, the hybrid equals the 1D
//! operator applied slice by slice (exactly, not approximately).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Axis, Grid1, Grid2};
use crate::numeric::transpose;
use crate::pyramid::CellPyramid1;

/// V_n on level-n cells, one value per cell, from the level-n averages.
fn v_level_kernel(avg: &[f64], n: usize) -> Vec<f64> {
    let size = 1usize << n;
    debug_assert_eq!(avg.len(), size);
    if n == 0 {
        // Empty j-sum: V_0 = 0.
        return vec![0.0];
    }
    let scale = 0.25f64.powi(n as i32);
    let mut out = vec![0.0; size];
    for cell in 0..size {
        let mut acc = 0.0;
        for tau in 0..size {
            let z = if tau == 0 {
                n
            } else {
                n - 1 - tau.ilog2() as usize
            };
            let jmax = z.min(n - 1);
            let mut phi = 0.0;
            let mut weight = 0.5; // 2^(j-1) starting at j = 0
            for j in 0..=jmax {
                let e = size >> (j + 1); // bit n-1-j of the cell index
                phi += weight * avg[cell ^ tau ^ e];
                weight *= 2.0;
            }
            acc += phi * phi;
        }
        out[cell] = (scale * acc).sqrt();
    }
    out
}

fn upsample_max_into(level_values: &[f64], n: u32, resolution: u32, out: &mut [f64]) {
    let shift = resolution - n;
    for (code, slot) in out.iter_mut().enumerate() {
        let v = level_values[code >> shift];
        if v > *slot {
            *slot = v;
        }
    }
}

/// V_n f as a full-resolution grid (constant on level-n cells).
pub fn v_n(f: &Grid1, n: u32) -> Result<Grid1> {
    let res = f.resolution() as u32;
    if n > res {
        return Err(Error::IndexOutOfRange {
            what: "square-function level",
            value: n as u64,
            max: res as u64,
        });
    }
    let p = CellPyramid1::new(f.values()).expect("grid length is a power of two");
    let lv = v_level_kernel(&p.averages_at_level(n), n as usize);
    let shift = res - n;
    Ok(Grid1::from_raw(
        f.resolution(),
        (0..f.len()).map(|code| lv[code >> shift]).collect(),
    ))
}

fn v_sup_into(values: &[f64], out: &mut [f64]) {
    let p = CellPyramid1::new(values).expect("row length is a power of two");
    let res = p.resolution() as u32;
    out.fill(0.0);
    for n in 0..=res {
        let lv = v_level_kernel(&p.averages_at_level(n), n as usize);
        upsample_max_into(&lv, n, res, out);
    }
}

/// sup over n <= N of V_n f.
pub fn v_sup(f: &Grid1) -> Grid1 {
    let mut out = vec![0.0; f.len()];
    v_sup_into(f.values(), &mut out);
    Grid1::from_raw(f.resolution(), out)
}

/// All levels of V together with their running sup.
#[derive(Clone, Debug)]
pub struct VProfile {
    pub levels: Vec<Grid1>,
    pub sup: Grid1,
}

pub fn v_profile(f: &Grid1) -> VProfile {
    let res = f.resolution() as u32;
    let p = CellPyramid1::new(f.values()).expect("grid length is a power of two");
    let mut sup = vec![0.0; f.len()];
    let mut levels = Vec::with_capacity(res as usize + 1);
    for n in 0..=res {
        let lv = v_level_kernel(&p.averages_at_level(n), n as usize);
        upsample_max_into(&lv, n, res, &mut sup);
        let shift = res - n;
        levels.push(Grid1::from_raw(
            f.resolution(),
            (0..f.len()).map(|code| lv[code >> shift]).collect(),
        ));
    }
    VProfile {
        levels,
        sup: Grid1::from_raw(f.resolution(), sup),
    }
}

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

fn hybrid_apply(f: &Grid2, axis: Axis, op: impl Fn(&[f64], &mut [f64]) + Sync) -> Grid2 {
    let side = f.side();
    match axis {
        Axis::Y => Grid2::from_raw(f.resolution(), per_row_map(f.values(), side, op)),
        Axis::X => {
            let t = transpose(f.values(), side);
            let values = per_row_map(&t, side, op);
            Grid2::from_raw(f.resolution(), transpose(&values, side))
        }
    }
}

/// Level-n hybrid square function: the 1D V_n applied along one axis, the
/// other variable fixed. Axis X is the operator V_1 written V(x, y, .) with
/// the first-variable marginal; axis Y is V_2.
pub fn v_hybrid(f: &Grid2, n: u32, axis: Axis) -> Result<Grid2> {
    let res = f.resolution() as u32;
    if n > res {
        return Err(Error::IndexOutOfRange {
            what: "square-function level",
            value: n as u64,
            max: res as u64,
        });
    }
    Ok(hybrid_apply(f, axis, |row, out| {
        let p = CellPyramid1::new(row).expect("row length is a power of two");
        let lv = v_level_kernel(&p.averages_at_level(n), n as usize);
        let shift = res - n;
        for (code, slot) in out.iter_mut().enumerate() {
            *slot = lv[code >> shift];
        }
    }))
}

/// sup over n of the hybrid square function along the given axis.
pub fn v_hybrid_sup(f: &Grid2, axis: Axis) -> Grid2 {
    hybrid_apply(f, axis, v_sup_into)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed form on constants: V_n(c)^2 = c^2 (3 - (2n+3) 2^-n) / 4.
    fn v_const_squared(c: f64, n: u32) -> f64 {
        c * c * (3.0 - (2.0 * n as f64 + 3.0) / (1u64 << n) as f64) / 4.0
    }

    #[test]
    fn level_zero_vanishes() {
        let f = Grid1::new(3, (0..8).map(|i| i as f64).collect()).unwrap();
        let v0 = v_n(&f, 0).unwrap();
        assert!(v0.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn constant_levels_match_closed_form() {
        let c = -1.75;
        let f = Grid1::constant(8, c).unwrap();
        for n in 0..=8u32 {
            let v = v_n(&f, n).unwrap();
            let expected = v_const_squared(c, n).sqrt();
            for &got in v.values() {
                assert!(
                    (got - expected).abs() < 1e-13,
                    "n = {n}: got {got}, want {expected}"
                );
            }
        }
        // V_1(c) = |c| / sqrt(8).
        let v1 = v_n(&f, 1).unwrap();
        assert!((v1.values()[0] - c.abs() / 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn constant_sup_is_top_level() {
        // The closed form increases in n, so the sup sits at n = N.
        let f = Grid1::constant(6, 1.0).unwrap();
        let sup = v_sup(&f);
        let expected = v_const_squared(1.0, 6).sqrt();
        for &got in sup.values() {
            assert!((got - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn positive_homogeneity() {
        let f = Grid1::new(4, (0..16).map(|i| ((i * 7 % 5) as f64) - 2.0).collect()).unwrap();
        let g = f.map(|v| -3.0 * v);
        for n in 0..=4u32 {
            let vf = v_n(&f, n).unwrap();
            let vg = v_n(&g, n).unwrap();
            for (a, b) in vf.values().iter().zip(vg.values()) {
                assert!((3.0 * a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pointwise_triangle_inequality() {
        let f = Grid1::new(4, (0..16).map(|i| (i as f64 * 0.7).sin()).collect()).unwrap();
        let g = Grid1::new(4, (0..16).map(|i| (i as f64 * 1.3).cos()).collect()).unwrap();
        let sum = f.zip_with(&g, |a, b| a + b).unwrap();
        for n in 0..=4u32 {
            let vs = v_n(&sum, n).unwrap();
            let vf = v_n(&f, n).unwrap();
            let vg = v_n(&g, n).unwrap();
            for i in 0..16 {
                assert!(vs.values()[i] <= vf.values()[i] + vg.values()[i] + 1e-12);
            }
        }
    }

    #[test]
    fn profile_collects_levels_and_sup() {
        let f = Grid1::new(5, (0..32).map(|i| ((i % 5) as f64) - 2.0).collect()).unwrap();
        let prof = v_profile(&f);
        assert_eq!(prof.levels.len(), 6);
        let sup = v_sup(&f);
        assert_eq!(prof.sup, sup);
        for i in 0..32 {
            let m = prof
                .levels
                .iter()
                .map(|l| l.values()[i])
                .fold(0.0f64, f64::max);
            assert_eq!(m, prof.sup.values()[i]);
        }
    }

    #[test]
    fn hybrid_on_x_product_is_one_dimensional() {
        let g = Grid1::new(3, (0..8).map(|i| ((i * 3) % 7) as f64 - 3.0).collect()).unwrap();
        let f = Grid2::from_fn(3, |x, _y| g.value(x)).unwrap();
        for n in 0..=3u32 {
            let hv = v_hybrid(&f, n, Axis::X).unwrap();
            let v1 = v_n(&g, n).unwrap();
            for x in 0..8u32 {
                for y in 0..8u32 {
                    assert_eq!(hv.value(x, y), v1.value(x), "n = {n}");
                }
            }
        }
        let hs = v_hybrid_sup(&f, Axis::X);
        let vs = v_sup(&g);
        for x in 0..8u32 {
            for y in 0..8u32 {
                assert_eq!(hs.value(x, y), vs.value(x));
            }
        }
    }

    #[test]
    fn hybrid_axes_are_transposes_of_each_other() {
        let f = Grid2::from_fn(3, |x, y| ((x * 13 + y * 5) % 9) as f64 - 4.0).unwrap();
        let ft = Grid2::from_fn(3, |x, y| f.value(y, x)).unwrap();
        let vx = v_hybrid_sup(&f, Axis::X);
        let vy = v_hybrid_sup(&ft, Axis::Y);
        for x in 0..8u32 {
            for y in 0..8u32 {
                assert_eq!(vx.value(x, y), vy.value(y, x));
            }
        }
    }

    #[test]
    fn rejects_level_beyond_resolution() {
        let f = Grid1::zeros(3).unwrap();
        assert!(v_n(&f, 4).is_err());
        let g = Grid2::zeros(2).unwrap();
        assert!(v_hybrid(&g, 3, Axis::Y).is_err());
    }
}
