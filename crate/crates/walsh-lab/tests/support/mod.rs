//! Brute-force oracles, written straight from the definitions and sharing no
//! code with the library: Walsh values as coordinate products, averages as
//! explicit loops over cells, the square function as the full integral over
//! t. Slow on purpose; used only at small resolutions.

// Each test binary pulls in the subset it needs.
#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use walsh_lab::{Grid1, Grid2};

/// w_n(u) as the product of Rademacher signs: coordinate k of u is bit
/// (res-1-k) of the code, and bit k of n selects it.
pub fn naive_walsh(n: u64, code: u32, res: u8) -> f64 {
    let mut sign = 1.0;
    for k in 0..res as u32 {
        if (n >> k) & 1 == 1 && (code >> (res as u32 - 1 - k)) & 1 == 1 {
            sign = -sign;
        }
    }
    sign
}

pub fn naive_coeff_1d(f: &Grid1, n: u64) -> f64 {
    let res = f.resolution();
    let side = f.side();
    let mut acc = 0.0;
    for (u, &v) in f.values().iter().enumerate() {
        acc += v * naive_walsh(n, u as u32, res);
    }
    acc / side as f64
}

pub fn naive_coeff_2d(f: &Grid2, i: u64, j: u64) -> f64 {
    let res = f.resolution();
    let side = f.side();
    let mut acc = 0.0;
    for x in 0..side as u32 {
        for y in 0..side as u32 {
            acc += f.value(x, y) * naive_walsh(i, x, res) * naive_walsh(j, y, res);
        }
    }
    acc / (side * side) as f64
}

/// S_{m,k} f at one point, summed from naive coefficients.
pub fn naive_partial_sum_at(f: &Grid2, m: usize, k: usize, x: u32, y: u32) -> f64 {
    let res = f.resolution();
    let mut acc = 0.0;
    for i in 0..m as u64 {
        for j in 0..k as u64 {
            acc += naive_coeff_2d(f, i, j) * naive_walsh(i, x, res) * naive_walsh(j, y, res);
        }
    }
    acc
}

/// Average of |f| over the level-n square cell containing (x, y), by loop.
fn naive_square_avg(f: &Grid2, n: u32, x: u32, y: u32, absolute: bool) -> f64 {
    let res = f.resolution() as u32;
    let width = 1u32 << (res - n);
    let x0 = (x >> (res - n)) << (res - n);
    let y0 = (y >> (res - n)) << (res - n);
    let mut acc = 0.0;
    for u in x0..x0 + width {
        for v in y0..y0 + width {
            let val = f.value(u, v);
            acc += if absolute { val.abs() } else { val };
        }
    }
    acc / (width as f64 * width as f64)
}

/// Square maximal with the absolute value outside the average.
pub fn naive_square_maximal(f: &Grid2) -> Grid2 {
    let res = f.resolution() as u32;
    Grid2::from_fn(f.resolution(), |x, y| {
        let mut best = 0.0f64;
        for n in 0..=res {
            best = best.max(naive_square_avg(f, n, x, y, false).abs());
        }
        best
    })
    .unwrap()
}

/// Hybrid maximal along x: sup over n of the level-n x-cell average of |f|.
pub fn naive_hybrid_x(f: &Grid2) -> Grid2 {
    let res = f.resolution() as u32;
    Grid2::from_fn(f.resolution(), |x, y| {
        let mut best = 0.0f64;
        for n in 0..=res {
            let width = 1u32 << (res - n);
            let x0 = (x >> (res - n)) << (res - n);
            let mut acc = 0.0;
            for u in x0..x0 + width {
                acc += f.value(u, y).abs();
            }
            best = best.max(acc / width as f64);
        }
        best
    })
    .unwrap()
}

pub fn naive_hybrid_y(f: &Grid2) -> Grid2 {
    let res = f.resolution() as u32;
    Grid2::from_fn(f.resolution(), |x, y| {
        let mut best = 0.0f64;
        for n in 0..=res {
            let width = 1u32 << (res - n);
            let y0 = (y >> (res - n)) << (res - n);
            let mut acc = 0.0;
            for v in y0..y0 + width {
                acc += f.value(x, v).abs();
            }
            best = best.max(acc / width as f64);
        }
        best
    })
    .unwrap()
}

/// A_j f(x, y) = 2^j * integral over I_j of |f(x+s, y+s)|; I_j is the set of
/// codes whose first j coordinates vanish, i.e. codes below 2^(N-j).
pub fn naive_diagonal_average(f: &Grid2, j: u32) -> Grid2 {
    let res = f.resolution() as u32;
    Grid2::from_fn(f.resolution(), |x, y| {
        let count = 1u32 << (res - j);
        let mut acc = 0.0;
        for s in 0..count {
            acc += f.value(x ^ s, y ^ s).abs();
        }
        acc / count as f64
    })
    .unwrap()
}

pub fn naive_diagonal_maximal(f: &Grid2) -> Grid2 {
    let res = f.resolution() as u32;
    let mut best = Grid2::zeros(f.resolution()).unwrap();
    for j in 0..=res {
        let a = naive_diagonal_average(f, j);
        best = best.zip_with(&a, f64::max).unwrap();
    }
    best
}

/// V_n straight from the display: the full integral over t at resolution N,
/// gates 1_{I_j}(t), translated level-n cell averages, no collapsing of t to
/// its level-n prefix.
pub fn naive_v_n_1d(f: &Grid1, n: u32) -> Grid1 {
    let res = f.resolution() as u32;
    let side = f.side() as u32;
    let values = f.values();
    let cell_avg = |w: u32| -> f64 {
        let width = 1u32 << (res - n);
        let lo = ((w >> (res - n)) << (res - n)) as usize;
        values[lo..lo + width as usize].iter().sum::<f64>() / width as f64
    };
    Grid1::from_fn(f.resolution(), |x| {
        let mut acc = 0.0;
        for t in 0..side {
            let mut inner = 0.0;
            for j in 0..n {
                // t in I_j: first j coordinates zero.
                if t < (1u32 << (res - j)) {
                    let e_j = 1u32 << (res - 1 - j);
                    inner += 0.5 * (1u64 << j) as f64 * cell_avg(x ^ t ^ e_j);
                }
            }
            acc += inner * inner;
        }
        (acc / side as f64 / (1u64 << n) as f64).sqrt()
    })
    .unwrap()
}

pub fn naive_v_sup_1d(f: &Grid1) -> Grid1 {
    let res = f.resolution() as u32;
    let mut best = Grid1::zeros(f.resolution()).unwrap();
    for n in 0..=res {
        let v = naive_v_n_1d(f, n);
        best = best.zip_with(&v, f64::max).unwrap();
    }
    best
}

/// V_1 at level n: the 1D construction on each column slice f(., y).
pub fn naive_v1_level(f: &Grid2, n: u32) -> Grid2 {
    let res = f.resolution();
    let side = f.side() as u32;
    let mut columns = Vec::with_capacity(side as usize);
    for y in 0..side {
        let slice = Grid1::new(res, (0..side).map(|x| f.value(x, y)).collect()).unwrap();
        columns.push(naive_v_n_1d(&slice, n));
    }
    Grid2::from_fn(res, |x, y| columns[y as usize].value(x)).unwrap()
}

pub fn naive_v1_sup(f: &Grid2) -> Grid2 {
    let res = f.resolution() as u32;
    let mut best = Grid2::zeros(f.resolution()).unwrap();
    for n in 0..=res {
        let v = naive_v1_level(f, n);
        best = best.zip_with(&v, f64::max).unwrap();
    }
    best
}

pub fn naive_v2_sup(f: &Grid2) -> Grid2 {
    let res = f.resolution();
    let side = f.side() as u32;
    let mut rows = Vec::with_capacity(side as usize);
    for x in 0..side {
        let slice = Grid1::new(res, f.row(x).to_vec()).unwrap();
        rows.push(naive_v_sup_1d(&slice));
    }
    Grid2::from_fn(res, |x, y| rows[x as usize].value(y)).unwrap()
}

/// Bilinear form by direct summation: kernels from naive Walsh values,
/// level-n averages by explicit loops. Independent of every library route.
pub fn naive_bilinear(f: &Grid2, alpha: &[f64], n: u32, x: u32, y: u32) -> f64 {
    let res = f.resolution();
    let side = f.side() as u32;
    let dirichlet = |m: usize, u: u32| -> f64 {
        (0..m as u64).map(|k| naive_walsh(k, u, res)).sum()
    };
    let mut acc = 0.0;
    for s in 0..side {
        for t in 0..side {
            let avg = naive_square_avg(f, n, x ^ s, y ^ t, false);
            let mut kernel = 0.0;
            for (m, &a) in alpha.iter().enumerate() {
                kernel += a * dirichlet(m, s) * dirichlet(m, t);
            }
            acc += avg * kernel;
        }
    }
    acc / (side as f64 * side as f64)
}

pub fn random_grid_1d(res: u8, seed: u64) -> Grid1 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    Grid1::new(
        res,
        (0..1usize << res).map(|_| rng.gen_range(-1.0..=1.0)).collect(),
    )
    .unwrap()
}

pub fn random_grid_2d(res: u8, seed: u64) -> Grid2 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    Grid2::new(
        res,
        (0..1usize << (2 * res))
            .map(|_| rng.gen_range(-1.0..=1.0))
            .collect(),
    )
    .unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
