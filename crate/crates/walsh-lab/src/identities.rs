//! Exact verification of the Dirichlet kernel identities.
//!
//! Two facts get checked by brute force, in integer arithmetic so that a
//! pass means equality, not small error. First, D_{2^n} = 2^n on I_n and 0
//! elsewhere. Second, for m < 2^n the kernel splits pointwise into a
//! weighted sum of translated characters:
//!
//!   D_m(u) = sum_{k<n} 1_{I_k \ I_{k+1}}(u) sum_{j<=k} eps(k,j) 2^(j-1) w_m(u + e_j)
//!            - w_m(u) / 2  +  (m + 1/2) 1_{I_n}(u)
//!
//! with eps(k,k) = +1 and eps(k,j) = -1 for j < k. Every term is a
//! half-integer, so the whole computation lives in doubled integers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::{walsh_sign, DyadicPoint};

/// An integer multiple of 1/2, stored as the doubled value. Addition and
/// doubling stay exact; general products are deliberately absent since the
/// class is not closed under them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInteger {
    doubled: i64,
}

impl HalfInteger {
    pub fn from_doubled(doubled: i64) -> Self {
        Self { doubled }
    }

    pub fn from_int(v: i64) -> Self {
        Self { doubled: 2 * v }
    }

    pub fn doubled(self) -> i64 {
        self.doubled
    }

    pub fn is_integer(self) -> bool {
        self.doubled % 2 == 0
    }

    pub fn equals_int(self, v: i64) -> bool {
        self.doubled == 2 * v
    }

    pub fn as_f64(self) -> f64 {
        self.doubled as f64 / 2.0
    }
}

impl std::ops::Add for HalfInteger {
    type Output = HalfInteger;
    fn add(self, rhs: HalfInteger) -> HalfInteger {
        HalfInteger::from_doubled(self.doubled + rhs.doubled)
    }
}

impl std::ops::Sub for HalfInteger {
    type Output = HalfInteger;
    fn sub(self, rhs: HalfInteger) -> HalfInteger {
        HalfInteger::from_doubled(self.doubled - rhs.doubled)
    }
}

impl std::ops::Neg for HalfInteger {
    type Output = HalfInteger;
    fn neg(self) -> HalfInteger {
        HalfInteger::from_doubled(-self.doubled)
    }
}

impl std::fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.doubled % 2 == 0 {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

/// Sign pattern of the kernel decomposition: +1 on the diagonal j = k,
/// -1 strictly below it. Requires j <= k.
pub fn epsilon(k: u32, j: u32) -> Result<i32> {
    if j > k {
        return Err(Error::IndexOutOfRange {
            what: "epsilon column",
            value: j as u64,
            max: k as u64,
        });
    }
    Ok(if j == k { 1 } else { -1 })
}

/// Right-hand side of the decomposition at a single point, exactly.
///
/// Requires m < 2^n and n <= u.resolution(). The interval indicators only
/// look at the first n coordinates, so any resolution at least n gives the
/// same value; e_j flips coordinate j at the point's own resolution.
pub fn schipp_rhs(m: u32, n: u32, u: DyadicPoint) -> Result<HalfInteger> {
    schipp_rhs_with(&|k, j| epsilon(k, j).expect("j <= k by construction"), m, n, u)
}

/// Implementation seam: the sign pattern is injectable so tests can verify
/// that corrupting any single eps(k,j) breaks the identity.
pub(crate) fn schipp_rhs_with(
    eps: &dyn Fn(u32, u32) -> i32,
    m: u32,
    n: u32,
    u: DyadicPoint,
) -> Result<HalfInteger> {
    let res = u.resolution();
    if n > res as u32 {
        return Err(Error::IndexOutOfRange {
            what: "decomposition level",
            value: n as u64,
            max: res as u64,
        });
    }
    if n < 32 && (m as u64) >= (1u64 << n) {
        return Err(Error::FrequencyOutOfRange {
            frequency: m as u64,
            resolution: n as u8,
        });
    }

    let code = u.code();
    let z = u.interval_level();
    let mut doubled: i64 = 0;

    // u lies in exactly one shell I_k \ I_{k+1}, namely k = z; the shell
    // contributes only when k < n. Each summand eps * 2^(j-1) * w_m(u + e_j)
    // has doubled value eps * 2^j * sign.
    if z < n {
        for j in 0..=z {
            let flipped = code ^ (1u32 << (res as u32 - 1 - j));
            let w = walsh_sign(m, flipped, res) as i64;
            doubled += eps(z, j) as i64 * (1i64 << j) * w;
        }
    }

    // -(1/2) w_m(u) doubles to -w_m(u).
    doubled -= walsh_sign(m, code, res) as i64;

    // (m + 1/2) 1_{I_n}(u) doubles to 2m + 1 on I_n.
    if z >= n {
        doubled += 2 * m as i64 + 1;
    }

    Ok(HalfInteger::from_doubled(doubled))
}

/// Location and values of the first mismatch found by a verifier.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityFailure {
    pub n: u32,
    pub m: u64,
    pub code: u32,
    pub expected: String,
    pub actual: String,
}

/// Outcome of a brute-force identity check.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub checked: u64,
    pub passed: u64,
    pub first_failure: Option<IdentityFailure>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checked == self.passed && self.first_failure.is_none()
    }
}

/// Tabulates D_m over all codes at `resolution` by direct summation of
/// integer character signs; the independent side of both verifiers.
fn dirichlet_table(m: u64, resolution: u8) -> Vec<i64> {
    let side = 1usize << resolution;
    let mut acc = vec![0i64; side];
    for k in 0..m as u32 {
        for (code, slot) in acc.iter_mut().enumerate() {
            *slot += walsh_sign(k, code as u32, resolution) as i64;
        }
    }
    acc
}

/// Checks D_{2^n}(u) = 2^n 1_{I_n}(u) for every n <= n_max and every point
/// at resolution n. Work grows as 4^n per level; n_max <= 20 is accepted but
/// levels beyond ~16 take minutes.
pub fn verify_dyadic_dirichlet(n_max: u32) -> Result<IdentityReport> {
    if n_max > 20 {
        return Err(Error::IndexOutOfRange {
            what: "n_max",
            value: n_max as u64,
            max: 20,
        });
    }
    let mut checked = 0u64;
    let mut passed = 0u64;
    let mut first_failure = None;

    for n in 0..=n_max {
        let table = dirichlet_table(1u64 << n, n as u8);
        for (code, &got) in table.iter().enumerate() {
            // At resolution n the interval I_n is the single code 0.
            let expected = if code == 0 { 1i64 << n } else { 0 };
            checked += 1;
            if got == expected {
                passed += 1;
            } else if first_failure.is_none() {
                first_failure = Some(IdentityFailure {
                    n,
                    m: 1u64 << n,
                    code: code as u32,
                    expected: expected.to_string(),
                    actual: got.to_string(),
                });
            }
        }
    }

    Ok(IdentityReport {
        identity: "dyadic-dirichlet".into(),
        checked,
        passed,
        first_failure,
    })
}

/// Checks the pointwise decomposition of D_m against direct summation for
/// every n <= n_max, m < 2^n, and point at resolution n. Work grows as 4^n
/// per level; n_max <= 12 keeps the total around 2 * 10^7 point checks.
pub fn verify_schipp_identity(n_max: u32) -> Result<IdentityReport> {
    verify_schipp_identity_with(&|k, j| epsilon(k, j).expect("j <= k"), n_max)
}

pub(crate) fn verify_schipp_identity_with(
    eps: &dyn Fn(u32, u32) -> i32,
    n_max: u32,
) -> Result<IdentityReport> {
    if n_max > 12 {
        return Err(Error::IndexOutOfRange {
            what: "n_max",
            value: n_max as u64,
            max: 12,
        });
    }
    let mut checked = 0u64;
    let mut passed = 0u64;
    let mut first_failure = None;

    for n in 0..=n_max {
        let res = n as u8;
        let side = 1usize << n;
        // Direct-summation table, updated incrementally in m.
        let mut direct = vec![0i64; side];
        for m in 0..side as u32 {
            for code in 0..side as u32 {
                let u = DyadicPoint::new(code, res)?;
                let rhs = schipp_rhs_with(eps, m, n, u)?;
                checked += 1;
                if rhs.equals_int(direct[code as usize]) {
                    passed += 1;
                } else if first_failure.is_none() {
                    first_failure = Some(IdentityFailure {
                        n,
                        m: m as u64,
                        code,
                        expected: direct[code as usize].to_string(),
                        actual: rhs.to_string(),
                    });
                }
            }
            // D_{m+1} = D_m + w_m.
            for code in 0..side as u32 {
                direct[code as usize] += walsh_sign(m, code, res) as i64;
            }
        }
    }

    Ok(IdentityReport {
        identity: "kernel-decomposition".into(),
        checked,
        passed,
        first_failure,
    })
}
