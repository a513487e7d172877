//! Points of the dyadic group at finite resolution and the Walsh characters.

use crate::error::{Error, Result};
use crate::numeric::bit_reverse;

/// Largest supported resolution. Grids hold 4^N cells, so anything beyond
/// this is out of reach anyway; the cap keeps every index inside u32/usize.
pub const MAX_RESOLUTION: u8 = 30;

/// A point of the dyadic group truncated to its first `resolution` coordinates.
///
/// Coordinate x_k (k = 0 .. N-1) is bit N-1-k of `code`, i.e. the code reads
/// the binary digits of the point left to right. Consequences used throughout:
/// `code / 2^N` is the standard embedding into [0,1), group addition is XOR
/// of codes, and the dyadic interval I_n(x) is the contiguous code range that
/// shares the top n bits with x.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DyadicPoint {
    code: u32,
    resolution: u8,
}

impl DyadicPoint {
    pub fn new(code: u32, resolution: u8) -> Result<Self> {
        if resolution > MAX_RESOLUTION {
            return Err(Error::ResolutionTooLarge(resolution as u32));
        }
        if resolution < 32 && (code as u64) >= (1u64 << resolution) {
            return Err(Error::CodeOutOfRange { code, resolution });
        }
        Ok(Self { code, resolution })
    }

    pub fn zero(resolution: u8) -> Result<Self> {
        Self::new(0, resolution)
    }

    /// The group generator e_j: coordinate j is 1, all others 0.
    pub fn unit(j: u32, resolution: u8) -> Result<Self> {
        if j >= resolution as u32 {
            return Err(Error::CoordinateOutOfRange {
                index: j,
                resolution,
            });
        }
        Self::new(1 << (resolution as u32 - 1 - j), resolution)
    }

    pub fn code(self) -> u32 {
        self.code
    }

    pub fn resolution(self) -> u8 {
        self.resolution
    }

    /// Coordinate x_k, either 0 or 1.
    pub fn coordinate(self, k: u32) -> Result<u32> {
        if k >= self.resolution as u32 {
            return Err(Error::CoordinateOutOfRange {
                index: k,
                resolution: self.resolution,
            });
        }
        Ok((self.code >> (self.resolution as u32 - 1 - k)) & 1)
    }

    /// Group addition (coordinatewise mod 2), i.e. XOR of codes.
    pub fn translate(self, other: DyadicPoint) -> Result<Self> {
        if self.resolution != other.resolution {
            return Err(Error::ResolutionMismatch(self.resolution, other.resolution));
        }
        Ok(Self {
            code: self.code ^ other.code,
            resolution: self.resolution,
        })
    }

    /// Whether the point lies in I_n, the interval of points whose first n
    /// coordinates vanish. Requires n <= resolution.
    pub fn in_interval(self, n: u32) -> Result<bool> {
        let res = self.resolution as u32;
        if n > res {
            return Err(Error::IndexOutOfRange {
                what: "interval level",
                value: n as u64,
                max: res as u64,
            });
        }
        Ok(self.code >> (res - n) == 0)
    }

    /// The largest n with the point in I_n: the number of leading zero
    /// coordinates. Equals the resolution exactly at the origin.
    pub fn interval_level(self) -> u32 {
        let res = self.resolution as u32;
        if self.code == 0 {
            res
        } else {
            res - (32 - self.code.leading_zeros())
        }
    }

    /// Left endpoint of the containing dyadic interval under code/2^N.
    pub fn to_unit_interval(self) -> f64 {
        self.code as f64 / (1u64 << self.resolution) as f64
    }
}

impl std::ops::Add for DyadicPoint {
    type Output = DyadicPoint;

    fn add(self, other: DyadicPoint) -> DyadicPoint {
        self.translate(other)
            .expect("dyadic addition requires equal resolutions")
    }
}

/// Sign of the Walsh-Paley character w_n at a point, +1 or -1.
///
/// w_n(x) = (-1)^(sum over k of n_k x_k) where n_k are the binary digits of n
/// from the least significant end and x_k the coordinates of x. In code form
/// the digit pairing reverses bit order once: n_k is bit k of `n` while x_k is
/// bit N-1-k of the code, hence the popcount of n AND bit-reversed code.
pub fn walsh_value(n: u32, u: DyadicPoint) -> Result<i32> {
    let res = u.resolution();
    if res < 32 && (n as u64) >= (1u64 << res) {
        return Err(Error::FrequencyOutOfRange {
            frequency: n as u64,
            resolution: res,
        });
    }
    Ok(walsh_sign(n, u.code(), res))
}

/// Sign of the Rademacher function r_k(x) = (-1)^(x_k).
pub fn rademacher(k: u32, u: DyadicPoint) -> Result<i32> {
    let bit = u.coordinate(k)?;
    Ok(if bit == 0 { 1 } else { -1 })
}

/// Unchecked core of `walsh_value` for hot loops: the caller guarantees
/// n < 2^resolution and code < 2^resolution.
#[inline]
pub(crate) fn walsh_sign(n: u32, code: u32, resolution: u8) -> i32 {
    let rev = bit_reverse(code, resolution);
    if (n & rev).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}
