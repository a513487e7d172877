//! Maximal operators and square functions against brute-force evaluation.

mod support;

use support::*;
use walsh_lab::{
    diagonal_average, diagonal_maximal, dyadic_maximal, dyadic_maximal_abs, hybrid_maximal, shear,
    v_hybrid, v_hybrid_sup, v_n, v_sup, Axis, Grid2,
};

const TOL: f64 = 1e-12;

fn check(actual: &[f64], oracle: &[f64], what: &str, seed: u64) {
    let d = max_abs_diff(actual, oracle);
    assert!(d <= TOL, "{what} differs from oracle by {d} (seed {seed})");
}

#[test]
fn square_maximal_matches_oracle() {
    for seed in 0..5u64 {
        let f = random_grid_2d(4, 1000 + seed);
        check(
            dyadic_maximal(&f).values(),
            naive_square_maximal(&f).values(),
            "M",
            seed,
        );
        let abs_oracle = naive_square_maximal(&f.map(f64::abs));
        check(
            dyadic_maximal_abs(&f).values(),
            abs_oracle.values(),
            "M on |f|",
            seed,
        );
    }
}

#[test]
fn hybrid_maximals_match_oracle() {
    for seed in 0..5u64 {
        let f = random_grid_2d(4, 2000 + seed);
        check(
            hybrid_maximal(&f, Axis::X).values(),
            naive_hybrid_x(&f).values(),
            "M1",
            seed,
        );
        check(
            hybrid_maximal(&f, Axis::Y).values(),
            naive_hybrid_y(&f).values(),
            "M2",
            seed,
        );
    }
}

#[test]
fn diagonal_averages_match_oracle() {
    for seed in 0..5u64 {
        let f = random_grid_2d(4, 3000 + seed);
        for j in 0..=4u32 {
            check(
                diagonal_average(&f, j).unwrap().values(),
                naive_diagonal_average(&f, j).values(),
                "A_j",
                seed,
            );
        }
        check(
            diagonal_maximal(&f).values(),
            naive_diagonal_maximal(&f).values(),
            "A",
            seed,
        );
    }
}

#[test]
fn square_function_levels_match_oracle() {
    for seed in 0..5u64 {
        let f = random_grid_1d(4, 4000 + seed);
        for n in 0..=4u32 {
            check(
                v_n(&f, n).unwrap().values(),
                naive_v_n_1d(&f, n).values(),
                "V_n",
                seed,
            );
        }
        check(v_sup(&f).values(), naive_v_sup_1d(&f).values(), "V", seed);
    }
}

#[test]
fn hybrid_square_functions_match_oracle() {
    for seed in 0..5u64 {
        let f = random_grid_2d(4, 5000 + seed);
        for n in 0..=4u32 {
            check(
                v_hybrid(&f, n, Axis::X).unwrap().values(),
                naive_v1_level(&f, n).values(),
                "V1 level",
                seed,
            );
        }
        check(
            v_hybrid_sup(&f, Axis::X).values(),
            naive_v1_sup(&f).values(),
            "V1",
            seed,
        );
        check(
            v_hybrid_sup(&f, Axis::Y).values(),
            naive_v2_sup(&f).values(),
            "V2",
            seed,
        );
    }
}

#[test]
fn maximal_operators_are_sublinear_and_homogeneous() {
    // Exhaustive small case plus random pairs at N = 6 (spot resolution).
    type Op = fn(&Grid2) -> Grid2;
    let ops: [(Op, &str); 4] = [
        (|f| dyadic_maximal(f), "M"),
        (|f| hybrid_maximal(f, Axis::X), "M1"),
        (|f| hybrid_maximal(f, Axis::Y), "M2"),
        (|f| diagonal_maximal(f), "A"),
    ];
    for seed in 0..4u64 {
        for res in [3u8, 6] {
            let f = random_grid_2d(res, 6000 + seed);
            let g = random_grid_2d(res, 7000 + seed);
            let sum = f.zip_with(&g, |a, b| a + b).unwrap();
            for (op, name) in &ops {
                let tf = op(&f);
                let tg = op(&g);
                let tsum = op(&sum);
                for i in 0..tf.len() {
                    assert!(
                        tsum.values()[i] <= tf.values()[i] + tg.values()[i] + 1e-12,
                        "{name} not sublinear at {i} (res {res}, seed {seed})"
                    );
                }
                let scaled = op(&f.map(|v| -3.0 * v));
                for i in 0..tf.len() {
                    assert!(
                        (scaled.values()[i] - 3.0 * tf.values()[i]).abs() <= 1e-12,
                        "{name} not homogeneous at {i}"
                    );
                }
            }
        }
    }
}

#[test]
fn diagonal_dominated_by_hybrid_of_shear() {
    // sup_j A_j(x, x+y) <= M1 of the sheared function at (x, y); equality in
    // this discrete model since both average the same cells.
    for seed in 0..3u64 {
        let f = random_grid_2d(5, 8000 + seed);
        let a = diagonal_maximal(&f);
        let m1s = hybrid_maximal(&shear(&f), Axis::X);
        for x in 0..32u32 {
            for y in 0..32u32 {
                assert!(
                    a.value(x, x ^ y) <= m1s.value(x, y),
                    "violation at ({x},{y}) seed {seed}"
                );
            }
        }
    }
}
