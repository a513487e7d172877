//! Fast transforms against naive summation, round trips, and Parseval.

mod support;

use support::*;
use walsh_lab::{
    dirichlet_kernel, fwht_forward, fwht_forward_2d, fwht_inverse, fwht_inverse_2d,
    partial_sum_rect, Grid1, Grid2,
};

#[test]
fn forward_1d_matches_naive_summation() {
    for seed in 0..3u64 {
        for res in 1..=4u8 {
            let f = random_grid_1d(res, 100 + seed);
            let spec = fwht_forward(&f);
            for n in 0..f.side() as u64 {
                let naive = naive_coeff_1d(&f, n);
                assert!(
                    (spec.coeffs()[n as usize] - naive).abs() <= 1e-12,
                    "res {res} seed {seed} n {n}"
                );
            }
        }
    }
}

#[test]
fn forward_2d_matches_naive_summation() {
    for seed in 0..3u64 {
        for res in 1..=4u8 {
            let f = random_grid_2d(res, 200 + seed);
            let spec = fwht_forward_2d(&f);
            for i in 0..f.side() as u32 {
                for j in 0..f.side() as u32 {
                    let naive = naive_coeff_2d(&f, i as u64, j as u64);
                    assert!(
                        (spec.coeff(i, j) - naive).abs() <= 1e-12,
                        "res {res} seed {seed} ({i},{j})"
                    );
                }
            }
        }
    }
}

#[test]
fn round_trip_1d_at_full_depth() {
    for seed in 0..20u64 {
        let f = random_grid_1d(12, 300 + seed);
        let back = fwht_inverse(&fwht_forward(&f));
        let scale = f.sup_norm().max(1e-300);
        assert!(
            max_abs_diff(f.values(), back.values()) / scale <= 1e-12,
            "seed {seed}"
        );
    }
}

#[test]
fn round_trip_2d() {
    for seed in 0..20u64 {
        let f = random_grid_2d(6, 400 + seed);
        let back = fwht_inverse_2d(&fwht_forward_2d(&f));
        let scale = f.sup_norm().max(1e-300);
        assert!(
            max_abs_diff(f.values(), back.values()) / scale <= 1e-12,
            "seed {seed}"
        );
    }
}

#[test]
fn parseval_1d_and_2d() {
    for seed in 0..20u64 {
        let f = random_grid_1d(10, 500 + seed);
        let lhs = f.values().iter().map(|v| v * v).sum::<f64>() / f.len() as f64;
        let rhs = fwht_forward(&f).energy();
        assert!((lhs - rhs).abs() / lhs.max(1e-300) <= 1e-12, "1d seed {seed}");

        let g = random_grid_2d(5, 600 + seed);
        let lhs = g.values().iter().map(|v| v * v).sum::<f64>() / g.len() as f64;
        let rhs = fwht_forward_2d(&g).energy();
        assert!((lhs - rhs).abs() / lhs.max(1e-300) <= 1e-12, "2d seed {seed}");
    }
}

#[test]
fn rectangular_partial_sums_match_naive_coefficient_route() {
    let f = random_grid_2d(3, 7);
    for (m, k) in [(1usize, 1usize), (3, 2), (5, 8), (8, 8), (2, 7)] {
        let s = partial_sum_rect(&f, m, k).unwrap();
        for x in 0..8u32 {
            for y in 0..8u32 {
                let naive = naive_partial_sum_at(&f, m, k, x, y);
                assert!(
                    (s.value(x, y) - naive).abs() <= 1e-12,
                    "({m},{k}) at ({x},{y})"
                );
            }
        }
    }
}

#[test]
fn dyadic_order_partial_sum_is_conditional_expectation() {
    // S_{2^a, 2^b} averages f over level-(a, b) rectangles: exhaustive N = 4.
    let f = random_grid_2d(4, 11);
    let res = 4u32;
    for a in 0..=res {
        for b in 0..=res {
            let s = partial_sum_rect(&f, 1usize << a, 1usize << b).unwrap();
            for x in 0..16u32 {
                for y in 0..16u32 {
                    let x0 = (x >> (res - a)) << (res - a);
                    let y0 = (y >> (res - b)) << (res - b);
                    let mut acc = 0.0;
                    for u in x0..x0 + (1 << (res - a)) {
                        for v in y0..y0 + (1 << (res - b)) {
                            acc += f.value(u, v);
                        }
                    }
                    let avg = acc / (1u64 << (2 * res - a - b)) as f64;
                    assert!(
                        (s.value(x, y) - avg).abs() <= 1e-12,
                        "levels ({a},{b}) at ({x},{y})"
                    );
                }
            }
        }
    }
}

#[test]
fn dirichlet_kernels_match_naive_sums() {
    let res = 4u8;
    for m in 0..=16usize {
        let d = dirichlet_kernel(m, res).unwrap();
        for u in 0..16u32 {
            let naive: f64 = (0..m as u64).map(|k| naive_walsh(k, u, res)).sum();
            assert_eq!(d.value(u), naive, "m {m} u {u}");
        }
    }
}

#[test]
fn csv_round_trip_is_bit_exact() {
    let f = random_grid_2d(3, 13);
    let text = f.to_csv_string();
    let back = Grid2::from_csv_str(&text).unwrap();
    assert_eq!(f.values(), back.values());
    let g = random_grid_1d(5, 17);
    let text = g.to_csv_string();
    let back = Grid1::from_csv_str(&text).unwrap();
    assert_eq!(g.values(), back.values());
}
