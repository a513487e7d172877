//! Diagonal partial sums S_{m,m} and the strong means built from them.
//!
//! The sweep visits S_{0,0}, S_{1,1}, ... without recomputing a transform
//! per step: with spectral coefficients h(i,j),
//!
//!   S_{m+1,m+1} - S_{m,m} = w_m(x) R_m(y) + C_m(x) w_m(y) + h(m,m) w_m(x) w_m(y)
//!
//! where R_m(y) sums row m of the spectrum below the diagonal and C_m(x)
//! column m. Both are single truncated inverse transforms, so one step costs
//! O(4^N) and the full sweep O(2^N * 4^N). Beyond m = 2^N every diagonal sum
//! equals the grid itself (a grid is a level-N polynomial), and the
//! mean-type operators below use that identity for their tails instead of
//! letting rounding drift accumulate.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Grid1, Grid2};
use crate::numeric::{least_squares_slope, pairwise_sum};
use crate::point::walsh_sign;
use crate::report::{Cell, ExperimentReport};
use crate::spectrum::Spectrum2;
use crate::transform::{bit_reverse_permute, butterfly_in_place, fwht_forward, fwht_forward_2d};

const PAR_MIN: usize = 1 << 15;

fn elementwise(acc: &mut [f64], s: &[f64], f: impl Fn(&mut f64, f64) + Sync + Send) {
    if acc.len() >= PAR_MIN {
        acc.par_chunks_mut(4096)
            .zip(s.par_chunks(4096))
            .for_each(|(a, b)| a.iter_mut().zip(b).for_each(|(x, &y)| f(x, y)));
    } else {
        acc.iter_mut().zip(s).for_each(|(x, &y)| f(x, y));
    }
}

/// acc += |v|^p, with the p = 2 and p = 1 cases monomorphized: the sweep
/// calls this once per cell per step, and powf there dominates everything.
fn accumulate_abs_pow(acc: &mut [f64], s: &[f64], p: f64) {
    if p == 2.0 {
        elementwise(acc, s, |a, v| *a += v * v);
    } else if p == 1.0 {
        elementwise(acc, s, |a, v| *a += v.abs());
    } else {
        elementwise(acc, s, |a, v| *a += v.abs().powf(p));
    }
}

struct SweepState {
    spectrum: Spectrum2,
    s: Grid2,
    wm: Vec<f64>,
    r: Vec<f64>,
    c: Vec<f64>,
}

impl SweepState {
    fn new(f: &Grid2) -> Self {
        let side = f.side();
        Self {
            spectrum: fwht_forward_2d(f),
            s: Grid2::from_raw(f.resolution(), vec![0.0; side * side]),
            wm: vec![0.0; side],
            r: vec![0.0; side],
            c: vec![0.0; side],
        }
    }

    /// Advances S_{m,m} to S_{m+1,m+1}.
    fn step(&mut self, m: usize) {
        let side = self.wm.len();
        let res = self.s.resolution();
        for code in 0..side {
            self.wm[code] = walsh_sign(m as u32, code as u32, res) as f64;
        }

        // R_m(y) = sum_{j < m} h(m, j) w_j(y): truncated inverse transform
        // of spectrum row m. Same for C_m from column m.
        self.r.fill(0.0);
        self.r[..m].copy_from_slice(&self.spectrum.row(m as u32)[..m]);
        butterfly_in_place(&mut self.r);
        bit_reverse_permute(&mut self.r, res);

        self.c.fill(0.0);
        for i in 0..m {
            self.c[i] = self.spectrum.coeffs()[i * side + m];
        }
        butterfly_in_place(&mut self.c);
        bit_reverse_permute(&mut self.c, res);

        let h_mm = self.spectrum.coeffs()[m * side + m];
        let wm = &self.wm;
        let r = &self.r;
        let c = &self.c;
        let update = |(x, row): (usize, &mut [f64])| {
            let a = wm[x];
            let b = c[x] + h_mm * a;
            for (slot, (&ry, &wy)) in row.iter_mut().zip(r.iter().zip(wm.iter())) {
                *slot += a * ry + b * wy;
            }
        };
        let values = self.s.values_mut();
        if values.len() >= PAR_MIN {
            values.par_chunks_mut(side).enumerate().for_each(update);
        } else {
            values.chunks_mut(side).enumerate().for_each(update);
        }
    }
}

/// Streams S_{m,m} f for m = 0 .. m_max-1 through the visitor, in order,
/// starting from S_{0,0} = 0. Requires m_max <= 2^N.
pub fn for_each_diagonal_partial_sum(
    f: &Grid2,
    m_max: usize,
    mut visit: impl FnMut(usize, &Grid2),
) -> Result<()> {
    let side = f.side();
    if m_max > side {
        return Err(Error::IndexOutOfRange {
            what: "diagonal sweep length",
            value: m_max as u64,
            max: side as u64,
        });
    }
    let mut state = SweepState::new(f);
    for m in 0..m_max {
        visit(m, &state.s);
        if m + 1 < m_max {
            state.step(m);
        }
    }
    Ok(())
}

/// All diagonal partial sums S_{0,0} .. S_{m_max-1,m_max-1}, stored.
/// Memory is m_max * 4^N values; intended for small resolutions.
#[derive(Clone, Debug)]
pub struct DiagonalSweep {
    grids: Vec<Grid2>,
}

impl DiagonalSweep {
    pub fn new(f: &Grid2, m_max: usize) -> Result<Self> {
        let mut grids = Vec::with_capacity(m_max);
        for_each_diagonal_partial_sum(f, m_max, |_, s| grids.push(s.clone()))?;
        Ok(Self { grids })
    }

    pub fn len(&self) -> usize {
        self.grids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grids.is_empty()
    }

    pub fn grid(&self, m: usize) -> &Grid2 {
        &self.grids[m]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Grid2> {
        self.grids.iter()
    }
}

pub fn diagonal_sweep(f: &Grid2, m_max: usize) -> Result<DiagonalSweep> {
    DiagonalSweep::new(f, m_max)
}

fn check_strong_exponent(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "strong-mean exponent must satisfy 0 < p <= 2, got {p}"
        )));
    }
    Ok(())
}

fn check_positive_exponent(p: f64) -> Result<()> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "exponent must be a finite positive number, got {p}"
        )));
    }
    Ok(())
}

/// Strong mean over the dyadic block: H_n f = (2^-n sum_{m < 2^n} |S_{m,m} f|^p)^(1/p).
pub fn strong_mean(f: &Grid2, n_block: u32, p: f64) -> Result<Grid2> {
    check_strong_exponent(p)?;
    if n_block > f.resolution() as u32 {
        return Err(Error::IndexOutOfRange {
            what: "strong-mean block",
            value: n_block as u64,
            max: f.resolution() as u64,
        });
    }
    let terms = 1usize << n_block;
    let mut acc = vec![0.0f64; f.len()];
    for_each_diagonal_partial_sum(f, terms, |_, s| {
        accumulate_abs_pow(&mut acc, s.values(), p);
    })?;
    let inv = 1.0 / terms as f64;
    let q = 1.0 / p;
    Ok(Grid2::from_raw(
        f.resolution(),
        acc.into_iter().map(|a| (a * inv).powf(q)).collect(),
    ))
}

/// Maximal strong mean H_* f = max over blocks n <= N of H_n f.
pub fn maximal_strong(f: &Grid2, p: f64) -> Result<Grid2> {
    check_strong_exponent(p)?;
    let side = f.side();
    let mut acc = vec![0.0f64; f.len()];
    let mut out = vec![0.0f64; f.len()];
    let q = 1.0 / p;
    for_each_diagonal_partial_sum(f, side, |m, s| {
        accumulate_abs_pow(&mut acc, s.values(), p);
        let count = m + 1;
        if count.is_power_of_two() {
            let inv = 1.0 / count as f64;
            if p == 2.0 {
                elementwise(&mut out, &acc, |o, a| {
                    let cand = (a * inv).sqrt();
                    if cand > *o {
                        *o = cand;
                    }
                });
            } else {
                elementwise(&mut out, &acc, |o, a| {
                    let cand = (a * inv).powf(q);
                    if cand > *o {
                        *o = cand;
                    }
                });
            }
        }
    })?;
    Ok(Grid2::from_raw(f.resolution(), out))
}

/// Centered strong mean with a plain term count:
/// ((1/n) sum_{m < n} |S_{m,m} f - f|^p)^(1/p).
///
/// Terms with m >= 2^N vanish identically (S_{m,m} f = f there), so counts
/// beyond the full block only change the denominator.
pub fn centered_strong_mean(f: &Grid2, n_terms: u64, p: f64) -> Result<Grid2> {
    check_positive_exponent(p)?;
    if n_terms == 0 {
        return Err(Error::InvalidParameter(
            "centered strong mean needs at least one term".into(),
        ));
    }
    let acc = centered_power_sum(f, n_terms, |t| t.powf(p))?;
    let inv = 1.0 / n_terms as f64;
    let q = 1.0 / p;
    Ok(Grid2::from_raw(
        f.resolution(),
        acc.into_iter().map(|a| (a * inv).powf(q)).collect(),
    ))
}

fn centered_power_sum(
    f: &Grid2,
    n_terms: u64,
    phi: impl Fn(f64) -> f64 + Sync + Send,
) -> Result<Vec<f64>> {
    let side = f.side();
    let m_lim = n_terms.min(side as u64) as usize;
    let mut acc = vec![0.0f64; f.len()];
    let fv = f.values();
    for_each_diagonal_partial_sum(f, m_lim, |_, s| {
        if acc.len() >= PAR_MIN {
            acc.par_chunks_mut(4096)
                .zip(s.values().par_chunks(4096))
                .zip(fv.par_chunks(4096))
                .for_each(|((a, sv), fvv)| {
                    for ((slot, &x), &y) in a.iter_mut().zip(sv).zip(fvv) {
                        *slot += phi((x - y).abs());
                    }
                });
        } else {
            for ((slot, &x), &y) in acc.iter_mut().zip(s.values()).zip(fv) {
                *slot += phi((x - y).abs());
            }
        }
    })?;
    Ok(acc)
}

/// Orlicz-type weight applied to the centered deviations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhiSpec {
    /// Phi(t) = t^p with p > 0.
    Pow(f64),
    /// Phi(t) = exp(a t) - 1 with a > 0.
    Exp(f64),
}

impl PhiSpec {
    pub fn validate(self) -> Result<()> {
        match self {
            PhiSpec::Pow(p) if p > 0.0 && p.is_finite() => Ok(()),
            PhiSpec::Exp(a) if a > 0.0 && a.is_finite() => Ok(()),
            PhiSpec::Pow(p) => Err(Error::InvalidParameter(format!(
                "Pow weight needs p > 0, got {p}"
            ))),
            PhiSpec::Exp(a) => Err(Error::InvalidParameter(format!(
                "Exp weight needs a > 0, got {a}"
            ))),
        }
    }

    pub fn apply(self, t: f64) -> f64 {
        match self {
            PhiSpec::Pow(p) => t.powf(p),
            PhiSpec::Exp(a) => (a * t).exp_m1(),
        }
    }

    pub fn describe(self) -> String {
        match self {
            PhiSpec::Pow(p) => format!("pow:{p}"),
            PhiSpec::Exp(a) => format!("exp:{a}"),
        }
    }
}

/// Phi-weighted centered mean (1/n) sum_{m < n} Phi(|S_{m,m} f - f|);
/// no outer root, matching the Orlicz-space formulation.
pub fn phi_strong_mean(f: &Grid2, n_terms: u64, phi: PhiSpec) -> Result<Grid2> {
    phi.validate()?;
    if n_terms == 0 {
        return Err(Error::InvalidParameter(
            "phi mean needs at least one term".into(),
        ));
    }
    let acc = centered_power_sum(f, n_terms, |t| phi.apply(t))?;
    let inv = 1.0 / n_terms as f64;
    Ok(Grid2::from_raw(
        f.resolution(),
        acc.into_iter().map(|a| a * inv).collect(),
    ))
}

/// 1D analogue, with S_m built incrementally from the 1D spectrum.
pub fn phi_strong_mean_1d(f: &Grid1, n_terms: u64, phi: PhiSpec) -> Result<Grid1> {
    phi.validate()?;
    if n_terms == 0 {
        return Err(Error::InvalidParameter(
            "phi mean needs at least one term".into(),
        ));
    }
    let side = f.side();
    let res = f.resolution();
    let spectrum = fwht_forward(f);
    let m_lim = n_terms.min(side as u64) as usize;
    let mut s = vec![0.0f64; side];
    let mut acc = vec![0.0f64; side];
    for m in 0..m_lim {
        for (slot, (&sm, &fv)) in acc.iter_mut().zip(s.iter().zip(f.values())) {
            *slot += phi.apply((sm - fv).abs());
        }
        let h = spectrum.coeff(m as u32);
        for (code, slot) in s.iter_mut().enumerate() {
            *slot += h * walsh_sign(m as u32, code as u32, res) as f64;
        }
    }
    let inv = 1.0 / n_terms as f64;
    Ok(Grid1::from_raw(
        res,
        acc.into_iter().map(|a| a * inv).collect(),
    ))
}

/// Marcinkiewicz mean (1/n) sum_{m < n} S_{m,m} f. Terms beyond the full
/// block contribute f exactly.
pub fn marcinkiewicz_mean(f: &Grid2, n_terms: u64) -> Result<Grid2> {
    if n_terms == 0 {
        return Err(Error::InvalidParameter(
            "Marcinkiewicz mean needs at least one term".into(),
        ));
    }
    let side = f.side();
    let m_lim = n_terms.min(side as u64) as usize;
    let mut acc = vec![0.0f64; f.len()];
    for_each_diagonal_partial_sum(f, m_lim, |_, s| {
        elementwise(&mut acc, s.values(), |a, v| *a += v);
    })?;
    let tail = n_terms.saturating_sub(side as u64) as f64;
    if tail > 0.0 {
        elementwise(&mut acc, f.values(), |a, v| *a += tail * v);
    }
    let inv = 1.0 / n_terms as f64;
    Ok(Grid2::from_raw(
        f.resolution(),
        acc.into_iter().map(|a| a * inv).collect(),
    ))
}

/// Tabulates the decay of the centered strong mean over a list of term
/// counts: columns n, sup_error, l1_error, slope. The slope column repeats
/// the fitted log-log slope of sup_error against n (rows with zero error are
/// left out of the fit); config records the l1 slope as well.
pub fn convergence_report(f: &Grid2, p: f64, n_list: &[u64]) -> Result<ExperimentReport> {
    check_positive_exponent(p)?;
    if n_list.is_empty() {
        return Err(Error::InvalidParameter("empty n list".into()));
    }
    if n_list.contains(&0) {
        return Err(Error::InvalidParameter("term counts must be positive".into()));
    }
    let mut checkpoints: Vec<u64> = n_list.to_vec();
    checkpoints.sort_unstable();
    checkpoints.dedup();

    let side = f.side() as u64;
    let fv = f.values();
    let mut acc = vec![0.0f64; f.len()];
    let mut results: Vec<(u64, f64, f64)> = Vec::with_capacity(checkpoints.len());
    let q = 1.0 / p;

    let norms = |acc: &[f64], n: u64| -> (f64, f64) {
        let inv = 1.0 / n as f64;
        let powered: Vec<f64> = acc.iter().map(|&a| (a * inv).powf(q)).collect();
        let sup = powered.iter().fold(0.0f64, |m, &v| m.max(v));
        let l1 = pairwise_sum(&powered) / f.len() as f64;
        (sup, l1)
    };

    let m_lim = (*checkpoints.last().unwrap()).min(side) as usize;
    let mut next = 0usize;
    for_each_diagonal_partial_sum(f, m_lim.max(1), |m, s| {
        for ((slot, &x), &y) in acc.iter_mut().zip(s.values()).zip(fv) {
            *slot += ((x - y).abs()).powf(p);
        }
        while next < checkpoints.len() && checkpoints[next] == (m + 1) as u64 {
            let (sup, l1) = norms(&acc, checkpoints[next]);
            results.push((checkpoints[next], sup, l1));
            next += 1;
        }
    })?;
    // Checkpoints past the full block reuse the final accumulator: the
    // remaining terms are exactly zero.
    while next < checkpoints.len() {
        let n = checkpoints[next];
        let (sup, l1) = norms(&acc, n);
        results.push((n, sup, l1));
        next += 1;
    }

    let fit = |select: fn(&(u64, f64, f64)) -> f64| -> Option<f64> {
        let pts: Vec<(f64, f64)> = results
            .iter()
            .filter(|r| select(r) > 0.0)
            .map(|r| ((r.0 as f64).ln(), select(r).ln()))
            .collect();
        least_squares_slope(&pts)
    };
    let slope_sup = fit(|r| r.1);
    let slope_l1 = fit(|r| r.2);
    let slope_cell = match slope_sup {
        Some(s) => Cell::float(s),
        None => Cell::Text("nan".into()),
    };

    let mut report = ExperimentReport::new(
        "strong-mean-convergence",
        vec![
            "n".into(),
            "sup_error".into(),
            "l1_error".into(),
            "slope".into(),
        ],
        Some(f.resolution() as u32),
    )
    .with_config("p", format!("{p}"))
    .with_config(
        "n_list",
        checkpoints
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(" "),
    )
    .with_config(
        "slope_sup",
        slope_sup.map_or("nan".into(), |s| format!("{s:.17e}")),
    )
    .with_config(
        "slope_l1",
        slope_l1.map_or("nan".into(), |s| format!("{s:.17e}")),
    );
    for (n, sup, l1) in &results {
        report.push_row(vec![
            Cell::Int(*n as i64),
            Cell::float(*sup),
            Cell::float(*l1),
            slope_cell.clone(),
        ]);
    }
    Ok(report)
}
