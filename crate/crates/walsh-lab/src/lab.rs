//! Duality pairings, the nine-term kernel decomposition, the main pointwise
//! estimate, and weak-type constant measurement.
//!
//! The bilinear form pairs a function with a coefficient vector alpha through
//! the diagonal Dirichlet kernels:
//!
//!   B(f, alpha)(x, y) = double integral of
//!       S_{2^n,2^n} f(x+s, y+t) * sum_m alpha_m D_m(s) D_m(t)
//!
//! evaluated as an exact finite sum over level-N cells. Substituting the
//! three-term kernel split D_m = T1 + T2 + T3 (see `identities`) in both
//! variables expands B into nine integrals J_1 .. J_9, indexed
//! J_{3(a-1)+b} for the pair (Ta in s, Tb in t). Their sum must reproduce B:
//! to rounding in f64, exactly in the rational mode.
//!
//! Everything here is generic over a scalar so the f64 and BigRational paths
//! run the same formulas; only the arithmetic differs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::corpus::FunctionSpec;
use crate::error::{Error, Result};
use crate::grid::{Axis, Grid2};
use crate::maximal::{diagonal_maximal, dyadic_maximal_abs, hybrid_maximal};
use crate::numeric::pairwise_sum;
use crate::point::{walsh_sign, DyadicPoint};
use crate::report::{Cell, ExperimentReport};
use crate::strong::{for_each_diagonal_partial_sum, maximal_strong};
use crate::vop::v_hybrid_sup;

/// Scalar abstraction shared by the float and exact evaluation paths.
trait LabScalar: Clone {
    fn zero() -> Self;
    fn add_assign(&mut self, o: &Self);
    fn mul(&self, o: &Self) -> Self;
    fn from_f64(v: f64) -> Self;
    fn from_i64(v: i64) -> Self;
    /// 2^e, exact in both scalars (powers of two are exact floats).
    fn pow2(e: i32) -> Self;
}

impl LabScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn pow2(e: i32) -> Self {
        2f64.powi(e)
    }
}

impl LabScalar for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("grid values are finite")
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn pow2(e: i32) -> Self {
        if e >= 0 {
            BigRational::from_integer(BigInt::one() << e as usize)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
        }
    }
}

/// Coefficients alpha_0 .. alpha_{2^n - 1} paired with the diagonal kernels.
#[derive(Clone, Debug, PartialEq)]
pub struct DualCoefficients {
    n: u32,
    alpha: Vec<f64>,
}

impl DualCoefficients {
    pub fn new(n: u32, alpha: Vec<f64>) -> Result<Self> {
        if n > 30 {
            return Err(Error::ResolutionTooLarge(n));
        }
        let expected = 1usize << n;
        if alpha.len() != expected {
            return Err(Error::LengthMismatch {
                got: alpha.len(),
                expected,
                resolution: n as u8,
            });
        }
        if let Some(i) = alpha.iter().position(|a| !a.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { n, alpha })
    }

    /// The unit vector picking out a single kernel index.
    pub fn unit(n: u32, m: usize) -> Result<Self> {
        let mut alpha = vec![0.0; 1usize << n];
        if m >= alpha.len() {
            return Err(Error::IndexOutOfRange {
                what: "kernel index",
                value: m as u64,
                max: alpha.len() as u64 - 1,
            });
        }
        alpha[m] = 1.0;
        Self::new(n, alpha)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn l2_norm(&self) -> f64 {
        let sq: Vec<f64> = self.alpha.iter().map(|a| a * a).collect();
        pairwise_sum(&sq).sqrt()
    }

    /// Rescaled to unit l2 norm, the extremal direction in the duality bound.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.l2_norm();
        if norm == 0.0 {
            return Err(Error::InvalidParameter(
                "cannot normalize the zero coefficient vector".into(),
            ));
        }
        Self::new(self.n, self.alpha.iter().map(|a| a / norm).collect())
    }
}

fn check_pairing(f: &Grid2, alpha: &DualCoefficients, x: DyadicPoint, y: DyadicPoint) -> Result<()> {
    let res = f.resolution();
    if x.resolution() != res {
        return Err(Error::ResolutionMismatch(x.resolution(), res));
    }
    if y.resolution() != res {
        return Err(Error::ResolutionMismatch(y.resolution(), res));
    }
    if alpha.n() > res as u32 {
        return Err(Error::IndexOutOfRange {
            what: "kernel block level",
            value: alpha.n() as u64,
            max: res as u64,
        });
    }
    Ok(())
}

/// Level-n square cell averages of f in the target scalar: the exact values
/// of S_{2^n,2^n} f. Index (a << n) | b.
fn cell_averages<T: LabScalar>(f: &Grid2, n: u32) -> Vec<T> {
    let res = f.resolution() as u32;
    let side = f.side();
    let shift = res - n;
    let cells = 1usize << n;
    let mut sums: Vec<T> = vec![T::zero(); cells * cells];
    for x in 0..side {
        let row = &f.values()[x * side..(x + 1) * side];
        for (y, &v) in row.iter().enumerate() {
            let idx = ((x >> shift) << n) | (y >> shift);
            sums[idx].add_assign(&T::from_f64(v));
        }
    }
    let scale = T::pow2(2 * (n as i32 - res as i32));
    sums.iter().map(|s| s.mul(&scale)).collect()
}

/// Number of leading zero coordinates of a code at the given resolution.
fn leading_zero_coords(code: u32, resolution: u8) -> u32 {
    if code == 0 {
        resolution as u32
    } else {
        resolution as u32 - (32 - code.leading_zeros())
    }
}

/// Fills the three kernel factors at frequency m over all level-N codes:
/// T1 carries the shell sums of translated characters, T2 = -w_m / 2,
/// T3 = (m + 1/2) on I_n.
fn schipp_factors<T: LabScalar>(m: u32, n: u32, resolution: u8, out: &mut [Vec<T>; 3]) {
    let side = 1usize << resolution;
    let res_bits = resolution as u32;
    let half = T::pow2(-1);
    for s in 0..side as u32 {
        let z = leading_zero_coords(s, resolution);
        out[0][s as usize] = if z < n {
            let mut acc = T::zero();
            for j in 0..=z {
                let flipped = s ^ (1 << (res_bits - 1 - j));
                let w = walsh_sign(m, flipped, resolution) as i64;
                let eps = if j == z { 1 } else { -1 };
                acc.add_assign(&T::from_i64(eps * w).mul(&T::pow2(j as i32 - 1)));
            }
            acc
        } else {
            T::zero()
        };
        out[1][s as usize] = T::from_i64(-(walsh_sign(m, s, resolution) as i64)).mul(&half);
        out[2][s as usize] = if z >= n {
            T::from_i64(2 * m as i64 + 1).mul(&half)
        } else {
            T::zero()
        };
    }
}

/// sum over s and t of fac_s[s] * fac_t[t] * avg(x + s, y + t), contracted
/// t-first. `avg` is the level-n cell average table.
fn pair_contraction<T: LabScalar>(
    fac_s: &[T],
    fac_t: &[T],
    avg: &[T],
    n: u32,
    shift: u32,
    xc: u32,
    yc: u32,
) -> T {
    let side = fac_s.len();
    // c[s'] = sum_t fac_t[t] * avg(s', y + t)
    let mut c: Vec<T> = vec![T::zero(); side];
    for (sp, slot) in c.iter_mut().enumerate() {
        let a = (sp as u32 >> shift) << n;
        let mut acc = T::zero();
        for (t, ft) in fac_t.iter().enumerate() {
            let b = (yc ^ t as u32) >> shift;
            acc.add_assign(&ft.mul(&avg[(a | b) as usize]));
        }
        *slot = acc;
    }
    let mut dot = T::zero();
    for (s, fs) in fac_s.iter().enumerate() {
        dot.add_assign(&fs.mul(&c[(xc ^ s as u32) as usize]));
    }
    dot
}

/// Direct-summation Dirichlet tables D_0 .. D_{2^n - 1} over level-N codes,
/// independent of the factor route.
fn dirichlet_tables(n: u32, resolution: u8) -> Vec<Vec<i64>> {
    let side = 1usize << resolution;
    let count = 1usize << n;
    let mut tables = Vec::with_capacity(count);
    let mut acc = vec![0i64; side];
    for m in 0..count as u32 {
        tables.push(acc.clone());
        for (code, slot) in acc.iter_mut().enumerate() {
            *slot += walsh_sign(m, code as u32, resolution) as i64;
        }
    }
    tables
}

fn bilinear_core<T: LabScalar>(f: &Grid2, alpha: &DualCoefficients, xc: u32, yc: u32) -> T {
    let res = f.resolution();
    let n = alpha.n();
    let shift = res as u32 - n;
    let avg = cell_averages::<T>(f, n);
    let tables = dirichlet_tables(n, res);
    let mut total = T::zero();
    for (m, table) in tables.iter().enumerate() {
        let d: Vec<T> = table.iter().map(|&v| T::from_i64(v)).collect();
        let dot = pair_contraction(&d, &d, &avg, n, shift, xc, yc);
        total.add_assign(&T::from_f64(alpha.alpha()[m]).mul(&dot));
    }
    total.mul(&T::pow2(-2 * res as i32))
}

fn decomposition_core<T: LabScalar>(
    f: &Grid2,
    alpha: &DualCoefficients,
    xc: u32,
    yc: u32,
) -> [T; 9] {
    let res = f.resolution();
    let side = f.side();
    let n = alpha.n();
    let shift = res as u32 - n;
    let avg = cell_averages::<T>(f, n);
    let mut factors: [Vec<T>; 3] = [
        vec![T::zero(); side],
        vec![T::zero(); side],
        vec![T::zero(); side],
    ];
    let mut terms: [T; 9] = std::array::from_fn(|_| T::zero());
    for m in 0..(1u32 << n) {
        let am = T::from_f64(alpha.alpha()[m as usize]);
        schipp_factors(m, n, res, &mut factors);
        for a in 0..3 {
            for b in 0..3 {
                let dot = pair_contraction(&factors[a], &factors[b], &avg, n, shift, xc, yc);
                terms[3 * a + b].add_assign(&am.mul(&dot));
            }
        }
    }
    let measure = T::pow2(-2 * res as i32);
    std::array::from_fn(|k| terms[k].mul(&measure))
}

/// The duality pairing B(f, alpha)(x, y), evaluated exactly as a finite sum
/// over level-N cells with direct-summation kernels.
pub fn bilinear_form(
    f: &Grid2,
    alpha: &DualCoefficients,
    x: DyadicPoint,
    y: DyadicPoint,
) -> Result<f64> {
    check_pairing(f, alpha, x, y)?;
    Ok(bilinear_core::<f64>(f, alpha, x.code(), y.code()))
}

/// The nine decomposition integrals, their sum, and the bilinear form they
/// must reproduce.
#[derive(Clone, Debug)]
pub struct JBreakdown {
    pub terms: [f64; 9],
    pub sum: f64,
    pub bilinear: f64,
}

pub fn j_terms(
    f: &Grid2,
    alpha: &DualCoefficients,
    x: DyadicPoint,
    y: DyadicPoint,
) -> Result<JBreakdown> {
    check_pairing(f, alpha, x, y)?;
    let terms = decomposition_core::<f64>(f, alpha, x.code(), y.code());
    let sum = pairwise_sum(&terms);
    let bilinear = bilinear_core::<f64>(f, alpha, x.code(), y.code());
    Ok(JBreakdown {
        terms,
        sum,
        bilinear,
    })
}

/// Exact rational replay of the decomposition. The identity J_1 + .. + J_9 =
/// B holds as an equality of rationals whenever the kernel split is correct.
#[derive(Clone, Debug)]
pub struct JBreakdownExact {
    pub terms: [BigRational; 9],
    pub sum: BigRational,
    pub bilinear: BigRational,
}

impl JBreakdownExact {
    pub fn identity_holds(&self) -> bool {
        self.sum == self.bilinear
    }
}

pub fn j_terms_exact(
    f: &Grid2,
    alpha: &DualCoefficients,
    x: DyadicPoint,
    y: DyadicPoint,
) -> Result<JBreakdownExact> {
    check_pairing(f, alpha, x, y)?;
    let terms = decomposition_core::<BigRational>(f, alpha, x.code(), y.code());
    let mut sum = <BigRational as Zero>::zero();
    for t in &terms {
        sum += t;
    }
    let bilinear = bilinear_core::<BigRational>(f, alpha, x.code(), y.code());
    Ok(JBreakdownExact {
        terms,
        sum,
        bilinear,
    })
}

/// Outcome of the Cauchy-Schwarz sharpness check at one point.
#[derive(Clone, Debug)]
pub struct DualityCheck {
    /// (sum over m < 2^n of S_{m,m} f(x,y)^2)^(1/2).
    pub lhs: f64,
    /// B(f, alpha*) at the extremal alpha* = S / |S|_2.
    pub bilinear: f64,
    pub rel_err: f64,
}

/// Verifies that the bilinear form at the extremal unit coefficient vector
/// attains the l2 norm of the diagonal partial sums at (x, y).
pub fn duality_check(f: &Grid2, n: u32, x: DyadicPoint, y: DyadicPoint) -> Result<DualityCheck> {
    if n > f.resolution() as u32 {
        return Err(Error::IndexOutOfRange {
            what: "kernel block level",
            value: n as u64,
            max: f.resolution() as u64,
        });
    }
    let count = 1usize << n;
    let mut s_values = Vec::with_capacity(count);
    for_each_diagonal_partial_sum(f, count, |_, s| {
        s_values.push(s.value(x.code(), y.code()));
    })?;
    let sq: Vec<f64> = s_values.iter().map(|v| v * v).collect();
    let lhs = pairwise_sum(&sq).sqrt();
    if lhs == 0.0 {
        return Ok(DualityCheck {
            lhs: 0.0,
            bilinear: 0.0,
            rel_err: 0.0,
        });
    }
    let alpha = DualCoefficients::new(n, s_values.iter().map(|v| v / lhs).collect())?;
    let bilinear = bilinear_form(f, &alpha, x, y)?;
    Ok(DualityCheck {
        lhs,
        bilinear,
        rel_err: (bilinear - lhs).abs() / lhs,
    })
}

/// Ratio table for the pointwise main estimate. For each block n <= N the
/// left side is the strong mean H_n with p = 2; the right side is the fixed
/// majorant
///
///   V_2(M_1 f) + V_1(M_2 f) + M|f| + V_2(A f) + V_1(A f) + |f|_1
///
/// independent of n. Rows report the largest and mean ratio over all points;
/// config carries the overall maximum.
pub fn mainest_ratio(f: &Grid2) -> Result<ExperimentReport> {
    let res = f.resolution() as u32;
    let side = f.side();

    let m1 = hybrid_maximal(f, Axis::X);
    let m2 = hybrid_maximal(f, Axis::Y);
    let m_abs = dyadic_maximal_abs(f);
    let a = diagonal_maximal(f);
    let v2_m1 = v_hybrid_sup(&m1, Axis::Y);
    let v1_m2 = v_hybrid_sup(&m2, Axis::X);
    let v2_a = v_hybrid_sup(&a, Axis::Y);
    let v1_a = v_hybrid_sup(&a, Axis::X);
    let l1 = f.norm_p(1.0)?;

    let mut rhs = vec![0.0f64; f.len()];
    for i in 0..rhs.len() {
        rhs[i] = v2_m1.values()[i]
            + v1_m2.values()[i]
            + m_abs.values()[i]
            + v2_a.values()[i]
            + v1_a.values()[i]
            + l1;
    }

    let mut report = ExperimentReport::new(
        "main-estimate-ratio",
        vec!["n".into(), "max_ratio".into(), "mean_ratio".into()],
        Some(res),
    );

    let mut acc = vec![0.0f64; f.len()];
    let mut overall: f64 = 0.0;
    for_each_diagonal_partial_sum(f, side, |m, s| {
        for (slot, &v) in acc.iter_mut().zip(s.values()) {
            *slot += v * v;
        }
        let count = m + 1;
        if count.is_power_of_two() {
            let n = count.trailing_zeros();
            let inv = 1.0 / count as f64;
            let mut ratios = Vec::with_capacity(acc.len());
            for (a_v, &r_v) in acc.iter().zip(&rhs) {
                let lhs = (a_v * inv).sqrt();
                ratios.push(if lhs == 0.0 { 0.0 } else { lhs / r_v });
            }
            let max = ratios.iter().fold(0.0f64, |m, &v| m.max(v));
            let mean = pairwise_sum(&ratios) / ratios.len() as f64;
            overall = overall.max(max);
            report.push_row(vec![
                Cell::Int(n as i64),
                Cell::float(max),
                Cell::float(mean),
            ]);
        }
    })?;
    report.set_config("overall_max", format!("{overall:.17e}"));
    Ok(report)
}

/// Operators measured by the weak-type scan. The maximal operators act on
/// |f| (the forms the estimates bound); H_* uses exponent p.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeakTypeOperator {
    /// Maximal strong mean H_* with exponent p; denominator 1 + LlogL.
    StrongMaximal { p: f64 },
    /// Hybrid square function along x (V_1); denominator |f|_1.
    V1,
    /// Hybrid square function along y (V_2); denominator |f|_1.
    V2,
    /// Square maximal operator on |f|; denominator |f|_1.
    SquareMaximal,
    /// Hybrid maximal along x (M_1); denominator |f|_1.
    HybridX,
    /// Hybrid maximal along y (M_2); denominator |f|_1.
    HybridY,
}

impl WeakTypeOperator {
    pub fn apply(self, f: &Grid2) -> Result<Grid2> {
        match self {
            WeakTypeOperator::StrongMaximal { p } => maximal_strong(f, p),
            WeakTypeOperator::V1 => Ok(v_hybrid_sup(f, Axis::X)),
            WeakTypeOperator::V2 => Ok(v_hybrid_sup(f, Axis::Y)),
            WeakTypeOperator::SquareMaximal => Ok(dyadic_maximal_abs(f)),
            WeakTypeOperator::HybridX => Ok(hybrid_maximal(f, Axis::X)),
            WeakTypeOperator::HybridY => Ok(hybrid_maximal(f, Axis::Y)),
        }
    }

    /// The normalization the weak-type constant divides by.
    pub fn denominator(self, f: &Grid2) -> Result<f64> {
        match self {
            WeakTypeOperator::StrongMaximal { .. } => Ok(1.0 + f.llogl()),
            _ => f.norm_p(1.0),
        }
    }

    pub fn name(self) -> String {
        match self {
            WeakTypeOperator::StrongMaximal { p } => format!("Hstar:{p}"),
            WeakTypeOperator::V1 => "V1".into(),
            WeakTypeOperator::V2 => "V2".into(),
            WeakTypeOperator::SquareMaximal => "M".into(),
            WeakTypeOperator::HybridX => "M1".into(),
            WeakTypeOperator::HybridY => "M2".into(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "V1" | "v1" => Ok(WeakTypeOperator::V1),
            "V2" | "v2" => Ok(WeakTypeOperator::V2),
            "M" | "m" => Ok(WeakTypeOperator::SquareMaximal),
            "M1" | "m1" => Ok(WeakTypeOperator::HybridX),
            "M2" | "m2" => Ok(WeakTypeOperator::HybridY),
            other => {
                if let Some(p_text) = other
                    .strip_prefix("Hstar:")
                    .or_else(|| other.strip_prefix("hstar:"))
                {
                    let p: f64 = p_text.parse().map_err(|_| {
                        Error::InvalidParameter(format!("bad H* exponent {p_text:?}"))
                    })?;
                    Ok(WeakTypeOperator::StrongMaximal { p })
                } else {
                    Err(Error::InvalidParameter(format!(
                        "unknown operator {other:?} (expected Hstar:<p>, V1, V2, M, M1, M2)"
                    )))
                }
            }
        }
    }
}

/// 32 logarithmically spaced thresholds spanning [0.01, 100] times the
/// median of the operator output (falling back to its sup, then to 1).
pub fn default_lambda_grid(t: &Grid2) -> Vec<f64> {
    let mut vals = t.values().to_vec();
    let mid = vals.len() / 2;
    let (_, med, _) = vals.select_nth_unstable_by(mid, |a, b| f64::total_cmp(a, b));
    let mut base = *med;
    if !(base > 0.0) {
        base = t.sup_norm();
    }
    if !(base > 0.0) {
        base = 1.0;
    }
    (0..32)
        .map(|i| base * 10f64.powf(-2.0 + 4.0 * i as f64 / 31.0))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakTypeEntry {
    pub spec: String,
    pub sup_constant: f64,
    pub argmax_lambda: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakTypeReport {
    pub operator: String,
    pub resolution: u32,
    pub per_function: Vec<WeakTypeEntry>,
    pub corpus_max: f64,
}

impl WeakTypeReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn to_experiment_report(&self) -> ExperimentReport {
        let mut r = ExperimentReport::new(
            "weak-type",
            vec![
                "spec".into(),
                "sup_constant".into(),
                "argmax_lambda".into(),
            ],
            Some(self.resolution),
        )
        .with_config("operator", self.operator.clone())
        .with_config("corpus_max", format!("{:.17e}", self.corpus_max));
        for e in &self.per_function {
            r.push_row(vec![
                Cell::Text(e.spec.clone()),
                Cell::float(e.sup_constant),
                Cell::float(e.argmax_lambda),
            ]);
        }
        r
    }
}

/// Scans sup over lambda of lambda * mu{T f > lambda} / denom(f) for every
/// corpus member. `lambdas` overrides the per-function default grid.
pub fn weak_type_constant(
    op: WeakTypeOperator,
    corpus: &[(FunctionSpec, Grid2)],
    lambdas: Option<&[f64]>,
) -> Result<WeakTypeReport> {
    if let Some(grid) = lambdas {
        let ascending = grid.windows(2).all(|w| w[0] < w[1]);
        if grid.is_empty() || !(grid[0] > 0.0) || !ascending || !grid.iter().all(|l| l.is_finite())
        {
            return Err(Error::InvalidParameter(
                "lambda grid must be positive, finite, and strictly ascending".into(),
            ));
        }
    }
    let first = corpus.first().ok_or(Error::EmptyCorpus)?;
    let resolution = first.1.resolution();
    let mut per_function = Vec::with_capacity(corpus.len());
    let mut corpus_max: f64 = 0.0;

    for (spec, f) in corpus {
        if f.resolution() != resolution {
            return Err(Error::ResolutionMismatch(f.resolution(), resolution));
        }
        let t = op.apply(f)?;
        let denom = op.denominator(f)?;
        if !(denom > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "weak-type denominator vanishes for {spec}"
            )));
        }
        let grid_storage;
        let grid: &[f64] = match lambdas {
            Some(l) => l,
            None => {
                grid_storage = default_lambda_grid(&t);
                &grid_storage
            }
        };
        let cell = t.cell_measure();
        let mut best = 0.0f64;
        let mut best_lambda = grid.first().copied().unwrap_or(1.0);
        for &lambda in grid {
            let count = t.values().iter().filter(|&&v| v > lambda).count();
            let constant = lambda * (count as f64 * cell) / denom;
            if constant > best {
                best = constant;
                best_lambda = lambda;
            }
        }
        corpus_max = corpus_max.max(best);
        per_function.push(WeakTypeEntry {
            spec: spec.format(),
            sup_constant: best,
            argmax_lambda: best_lambda,
        });
    }

    Ok(WeakTypeReport {
        operator: op.name(),
        resolution: resolution as u32,
        per_function,
        corpus_max,
    })
}
