//! Walsh coefficient tables produced by the fast transforms.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

macro_rules! common_spectrum_impl {
    ($ty:ident) => {
        impl $ty {
            pub fn resolution(&self) -> u8 {
                self.resolution
            }

            pub fn len(&self) -> usize {
                self.coeffs.len()
            }

            pub fn is_empty(&self) -> bool {
                false
            }

            pub fn coeffs(&self) -> &[f64] {
                &self.coeffs
            }

            pub(crate) fn coeffs_mut(&mut self) -> &mut [f64] {
                &mut self.coeffs
            }

            pub fn side(&self) -> usize {
                1usize << self.resolution
            }

            /// Sum of squared coefficients; Parseval pairs this with the
            /// squared L^2 norm of the function.
            pub fn energy(&self) -> f64 {
                let sq: Vec<f64> = self.coeffs.iter().map(|c| c * c).collect();
                pairwise_sum(&sq)
            }

            pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
                writeln!(w, "resolution,{}", self.resolution)?;
                for c in &self.coeffs {
                    writeln!(w, "{:.16e}", c)?;
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
                let mut coeffs = Vec::new();
                for line in lines {
                    let line = line?;
                    let t = line.trim();
                    if t.is_empty() {
                        continue;
                    }
                    coeffs.push(t.parse::<f64>().map_err(|e| {
                        Error::MalformedData(format!("bad value {t:?}: {e}"))
                    })?);
                }
                $ty::new(resolution, coeffs)
            }
        }
    };
}

/// Coefficients of a 1D function against w_0 .. w_(2^N - 1).
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum1 {
    resolution: u8,
    coeffs: Vec<f64>,
}

/// Coefficients of a 2D function against w_i(x) w_j(y), flat index i * 2^N + j.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum2 {
    resolution: u8,
    coeffs: Vec<f64>,
}

common_spectrum_impl!(Spectrum1);
common_spectrum_impl!(Spectrum2);

impl Spectrum1 {
    pub fn new(resolution: u8, coeffs: Vec<f64>) -> Result<Self> {
        let expected = 1usize << resolution;
        if coeffs.len() != expected {
            return Err(Error::LengthMismatch {
                got: coeffs.len(),
                expected,
                resolution,
            });
        }
        Ok(Self { resolution, coeffs })
    }

    pub(crate) fn from_raw(resolution: u8, coeffs: Vec<f64>) -> Self {
        debug_assert_eq!(coeffs.len(), 1usize << resolution);
        Self { resolution, coeffs }
    }

    pub fn coeff(&self, n: u32) -> f64 {
        self.coeffs[n as usize]
    }
}

impl Spectrum2 {
    pub fn new(resolution: u8, coeffs: Vec<f64>) -> Result<Self> {
        let side = 1usize << resolution;
        if coeffs.len() != side * side {
            return Err(Error::LengthMismatch {
                got: coeffs.len(),
                expected: side * side,
                resolution,
            });
        }
        Ok(Self { resolution, coeffs })
    }

    pub(crate) fn from_raw(resolution: u8, coeffs: Vec<f64>) -> Self {
        debug_assert_eq!(coeffs.len(), 1usize << (2 * resolution as u32));
        Self { resolution, coeffs }
    }

    pub fn coeff(&self, i: u32, j: u32) -> f64 {
        self.coeffs[((i as usize) << self.resolution) | j as usize]
    }

    /// Row i: coefficients paired with w_i(x), contiguous in j.
    pub fn row(&self, i: u32) -> &[f64] {
        let side = self.side();
        &self.coeffs[(i as usize) * side..(i as usize + 1) * side]
    }
}
