//! Step functions on the dyadic group, stored as level-N cell values.
//!
//! A Grid1 holds 2^N values, one per dyadic cell of length 2^-N; a Grid2
//! holds 4^N values in x-major order (flat index x * 2^N + y). Haar measure
//! gives every 1D cell mass 2^-N and every 2D cell mass 4^-N, which is where
//! the normalization of every integral and norm below comes from.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;
use crate::point::MAX_RESOLUTION;

/// Which variable a one-dimensional operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// The first variable (x).
    X,
    /// The second variable (y).
    Y,
}

fn check_resolution(resolution: u8) -> Result<()> {
    if resolution > MAX_RESOLUTION {
        return Err(Error::ResolutionTooLarge(resolution as u32));
    }
    Ok(())
}

fn check_finite(values: &[f64]) -> Result<()> {
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite(i));
        }
    }
    Ok(())
}

/// log^+ t = max(ln t, 0), the convention used by the L log L functional.
fn log_plus(t: f64) -> f64 {
    if t > 1.0 {
        t.ln()
    } else {
        0.0
    }
}

macro_rules! common_grid_impl {
    ($ty:ident, $cells:expr) => {
        impl $ty {
            pub fn resolution(&self) -> u8 {
                self.resolution
            }

            pub fn len(&self) -> usize {
                self.values.len()
            }

            pub fn is_empty(&self) -> bool {
                false
            }

            pub fn values(&self) -> &[f64] {
                &self.values
            }

            // Not every grid type mutates in place; keep the accessor uniform.
            #[allow(dead_code)]
            pub(crate) fn values_mut(&mut self) -> &mut [f64] {
                &mut self.values
            }

            pub fn into_values(self) -> Vec<f64> {
                self.values
            }

            /// Side length 2^N.
            pub fn side(&self) -> usize {
                1usize << self.resolution
            }

            /// Haar measure of a single cell.
            pub fn cell_measure(&self) -> f64 {
                1.0 / ($cells(self.resolution) as f64)
            }

            /// Integral with respect to Haar measure.
            pub fn integral(&self) -> f64 {
                pairwise_sum(&self.values) * self.cell_measure()
            }

            /// L^p norm for finite p > 0 (a quasi-norm when p < 1).
            pub fn norm_p(&self, p: f64) -> Result<f64> {
                if !(p > 0.0) || !p.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "norm exponent must be a finite positive number, got {p}"
                    )));
                }
                let powered: Vec<f64> = self.values.iter().map(|v| v.abs().powf(p)).collect();
                Ok((pairwise_sum(&powered) * self.cell_measure()).powf(1.0 / p))
            }

            /// Essential sup norm; a max over cells.
            pub fn sup_norm(&self) -> f64 {
                self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
            }

            /// Integral of |f| log^+ |f|, the L log L functional.
            pub fn llogl(&self) -> f64 {
                let terms: Vec<f64> = self
                    .values
                    .iter()
                    .map(|v| v.abs() * log_plus(v.abs()))
                    .collect();
                pairwise_sum(&terms) * self.cell_measure()
            }

            pub fn map(&self, f: impl Fn(f64) -> f64) -> $ty {
                $ty {
                    resolution: self.resolution,
                    values: self.values.iter().map(|&v| f(v)).collect(),
                }
            }

            pub fn zip_with(&self, other: &$ty, f: impl Fn(f64, f64) -> f64) -> Result<$ty> {
                if self.resolution != other.resolution {
                    return Err(Error::ResolutionMismatch(self.resolution, other.resolution));
                }
                Ok($ty {
                    resolution: self.resolution,
                    values: self
                        .values
                        .iter()
                        .zip(&other.values)
                        .map(|(&a, &b)| f(a, b))
                        .collect(),
                })
            }

            /// Writes the CSV form: a `resolution,N` header, then one value
            /// per line in code order. Floats carry 17 significant digits, so
            /// reading the file back reproduces the exact bits.
            pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
                writeln!(w, "resolution,{}", self.resolution)?;
                for v in &self.values {
                    writeln!(w, "{:.16e}", v)?;
                }
                Ok(())
            }

            pub fn to_csv_string(&self) -> String {
                let mut buf = Vec::new();
                self.write_csv(&mut buf).expect("write to Vec cannot fail");
                String::from_utf8(buf).expect("CSV output is ASCII")
            }

            pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
                let mut lines = r.lines();
                let header = lines
                    .next()
                    .ok_or_else(|| Error::MalformedData("empty input".into()))??;
                let resolution = header
                    .strip_prefix("resolution,")
                    .and_then(|s| s.trim().parse::<u8>().ok())
                    .ok_or_else(|| {
                        Error::MalformedData(format!("bad header line {header:?}"))
                    })?;
                let mut values = Vec::new();
                for line in lines {
                    let line = line?;
                    let t = line.trim();
                    if t.is_empty() {
                        continue;
                    }
                    values.push(t.parse::<f64>().map_err(|e| {
                        Error::MalformedData(format!("bad value {t:?}: {e}"))
                    })?);
                }
                $ty::new(resolution, values)
            }

            pub fn from_csv_str(s: &str) -> Result<Self> {
                Self::read_csv(s.as_bytes())
            }
        }
    };
}

/// A function on the dyadic group at resolution N: 2^N cell values.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid1 {
    resolution: u8,
    values: Vec<f64>,
}

fn cells_1d(resolution: u8) -> u64 {
    1u64 << resolution
}

fn cells_2d(resolution: u8) -> u64 {
    1u64 << (2 * resolution as u32)
}

common_grid_impl!(Grid1, cells_1d);
common_grid_impl!(Grid2, cells_2d);

impl Grid1 {
    pub fn new(resolution: u8, values: Vec<f64>) -> Result<Self> {
        check_resolution(resolution)?;
        let expected = 1usize << resolution;
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                got: values.len(),
                expected,
                resolution,
            });
        }
        check_finite(&values)?;
        Ok(Self { resolution, values })
    }

    /// Internal constructor for values produced by our own arithmetic.
    pub(crate) fn from_raw(resolution: u8, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), 1usize << resolution);
        Self { resolution, values }
    }

    pub fn constant(resolution: u8, c: f64) -> Result<Self> {
        check_resolution(resolution)?;
        if !c.is_finite() {
            return Err(Error::NonFinite(0));
        }
        Ok(Self {
            resolution,
            values: vec![c; 1usize << resolution],
        })
    }

    pub fn zeros(resolution: u8) -> Result<Self> {
        Self::constant(resolution, 0.0)
    }

    pub fn from_fn(resolution: u8, f: impl Fn(u32) -> f64) -> Result<Self> {
        check_resolution(resolution)?;
        let values: Vec<f64> = (0..1u32 << resolution).map(f).collect();
        check_finite(&values)?;
        Ok(Self { resolution, values })
    }

    pub fn value(&self, code: u32) -> f64 {
        self.values[code as usize]
    }
}

/// A function on the square of the dyadic group: 4^N cell values, x-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid2 {
    resolution: u8,
    values: Vec<f64>,
}

impl Grid2 {
    pub fn new(resolution: u8, values: Vec<f64>) -> Result<Self> {
        check_resolution(resolution)?;
        let side = 1usize << resolution;
        let expected = side * side;
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                got: values.len(),
                expected,
                resolution,
            });
        }
        check_finite(&values)?;
        Ok(Self { resolution, values })
    }

    pub(crate) fn from_raw(resolution: u8, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), 1usize << (2 * resolution as u32));
        Self { resolution, values }
    }

    pub fn constant(resolution: u8, c: f64) -> Result<Self> {
        check_resolution(resolution)?;
        if !c.is_finite() {
            return Err(Error::NonFinite(0));
        }
        let side = 1usize << resolution;
        Ok(Self {
            resolution,
            values: vec![c; side * side],
        })
    }

    pub fn zeros(resolution: u8) -> Result<Self> {
        Self::constant(resolution, 0.0)
    }

    pub fn from_fn(resolution: u8, f: impl Fn(u32, u32) -> f64) -> Result<Self> {
        check_resolution(resolution)?;
        let side = 1u32 << resolution;
        let mut values = Vec::with_capacity((side as usize) * (side as usize));
        for x in 0..side {
            for y in 0..side {
                values.push(f(x, y));
            }
        }
        check_finite(&values)?;
        Ok(Self { resolution, values })
    }

    #[inline]
    pub fn index(&self, x: u32, y: u32) -> usize {
        ((x as usize) << self.resolution) | y as usize
    }

    pub fn value(&self, x: u32, y: u32) -> f64 {
        self.values[self.index(x, y)]
    }

    /// The slice f(x, .) as a borrowed row; contiguous thanks to x-major order.
    pub fn row(&self, x: u32) -> &[f64] {
        let side = self.side();
        &self.values[(x as usize) * side..(x as usize + 1) * side]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_validate() {
        assert!(Grid1::new(2, vec![0.0; 4]).is_ok());
        assert!(Grid1::new(2, vec![0.0; 3]).is_err());
        assert!(Grid1::new(2, vec![0.0, f64::NAN, 0.0, 0.0]).is_err());
        assert!(Grid2::new(2, vec![0.0; 16]).is_ok());
        assert!(Grid2::new(2, vec![0.0; 4]).is_err());
    }

    #[test]
    fn integral_and_norms_of_constants() {
        let g = Grid2::constant(3, -2.0).unwrap();
        assert_eq!(g.integral(), -2.0);
        assert_eq!(g.norm_p(1.0).unwrap(), 2.0);
        assert_eq!(g.sup_norm(), 2.0);
    }

    #[test]
    fn walsh_product_has_unit_norms() {
        // w_3(x) w_1(y) takes values +-1, so every L^p norm is 1.
        let g = Grid2::from_fn(2, |x, y| {
            let wx = crate::point::walsh_sign(3, x, 2) as f64;
            let wy = crate::point::walsh_sign(1, y, 2) as f64;
            wx * wy
        })
        .unwrap();
        assert!((g.norm_p(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((g.norm_p(2.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(g.sup_norm(), 1.0);
        assert!(g.integral().abs() < 1e-15);
    }

    #[test]
    fn llogl_examples() {
        // |f| <= 1 contributes nothing; a constant e contributes e.
        let ones = Grid2::constant(3, 1.0).unwrap();
        assert_eq!(ones.llogl(), 0.0);
        let e = Grid2::constant(3, std::f64::consts::E).unwrap();
        assert!((e.llogl() - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn quasi_norm_accepts_small_p() {
        let g = Grid1::new(1, vec![1.0, 0.0]).unwrap();
        // (1/2 * 1^p)^(1/p) = 2^(-1/p)
        let q = g.norm_p(0.5).unwrap();
        assert!((q - 0.25).abs() < 1e-15);
        assert!(g.norm_p(0.0).is_err());
        assert!(g.norm_p(f64::NAN).is_err());
    }

    #[test]
    fn row_is_second_variable_slice() {
        let g = Grid2::from_fn(2, |x, y| (10 * x + y) as f64).unwrap();
        assert_eq!(g.row(2), &[20.0, 21.0, 22.0, 23.0]);
        assert_eq!(g.value(1, 3), 13.0);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let g = Grid1::new(
            2,
            vec![std::f64::consts::PI, -1.0 / 3.0, 1e-300, 7.5e17],
        )
        .unwrap();
        let s = g.to_csv_string();
        assert!(s.starts_with("resolution,2\n"));
        let back = Grid1::from_csv_str(&s).unwrap();
        assert_eq!(g, back);

        let h = Grid2::from_fn(3, |x, y| ((x * 13 + y * 7) as f64).sin()).unwrap();
        let back2 = Grid2::from_csv_str(&h.to_csv_string()).unwrap();
        assert_eq!(h, back2);
    }
}
