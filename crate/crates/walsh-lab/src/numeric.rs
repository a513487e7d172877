//! Small numeric helpers shared across the crate.

/// Reverses the low `width` bits of `code`.
///
/// Width 0 is the empty word; the only valid code is 0 and it maps to itself.
pub fn bit_reverse(code: u32, width: u8) -> u32 {
    debug_assert!(width <= 32);
    debug_assert!(width == 32 || code < (1u64 << width) as u32);
    if width == 0 {
        return 0;
    }
    code.reverse_bits() >> (32 - width as u32)
}

/// Index of the most significant set bit: the unique k with 2^k <= n < 2^(k+1).
pub fn msb_index(n: u64) -> u32 {
    assert!(n > 0, "msb_index is undefined at 0");
    63 - n.leading_zeros()
}

/// Deterministic pairwise summation. The split tree depends only on the
/// slice length, so the result is independent of thread count and identical
/// across runs.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Out-of-place transpose of a side x side row-major square matrix.
pub fn transpose(values: &[f64], side: usize) -> Vec<f64> {
    debug_assert_eq!(values.len(), side * side);
    let mut out = vec![0.0; values.len()];
    const BLOCK: usize = 32;
    let mut i0 = 0;
    while i0 < side {
        let i1 = (i0 + BLOCK).min(side);
        let mut j0 = 0;
        while j0 < side {
            let j1 = (j0 + BLOCK).min(side);
            for i in i0..i1 {
                for j in j0..j1 {
                    out[j * side + i] = values[i * side + j];
                }
            }
            j0 = j1;
        }
        i0 = i1;
    }
    out
}

/// Least-squares slope of y against x. Returns None with fewer than two points.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(x, y) in points {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}
