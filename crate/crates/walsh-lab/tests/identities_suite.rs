//! Exact kernel identity verification at the depths the gate requires,
//! plus structural properties of the representation.

use walsh_lab::identities::{epsilon, schipp_rhs};
use walsh_lab::{dirichlet_kernel, verify_dyadic_dirichlet, verify_schipp_identity, DyadicPoint};

#[test]
fn dirichlet_identity_holds_to_depth_twelve() {
    let report = verify_dyadic_dirichlet(12).unwrap();
    assert!(report.all_passed(), "{:?}", report.first_failure);
    assert_eq!(report.checked, report.passed);
    // One point per code per level: sum over n <= 12 of 2^n evaluations.
    assert_eq!(report.checked, (1u64 << 13) - 1);
}

#[test]
fn kernel_representation_holds_to_depth_six() {
    let report = verify_schipp_identity(6).unwrap();
    assert!(report.all_passed(), "{:?}", report.first_failure);
    // Sum over n <= 6 of 2^n * 2^n pairs (m, u).
    let expected: u64 = (0..=6u32).map(|n| 1u64 << (2 * n)).sum();
    assert_eq!(report.checked, expected);
}

#[test]
fn representation_is_constant_on_fine_cells() {
    // The right-hand side only reads the first n coordinates of u, so at any
    // deeper resolution it is constant on level-n cells.
    for n in 1..=4u32 {
        let res = (n + 2) as u8;
        for m in 0..(1u32 << n) {
            for cell in 0..(1u32 << n) {
                let base = cell << 2;
                let reference = schipp_rhs(m, n, DyadicPoint::new(base, res).unwrap()).unwrap();
                for offset in 1..4u32 {
                    let u = DyadicPoint::new(base | offset, res).unwrap();
                    let v = schipp_rhs(m, n, u).unwrap();
                    assert_eq!(
                        v.doubled(),
                        reference.doubled(),
                        "n {n} m {m} cell {cell} offset {offset}"
                    );
                }
            }
        }
    }
}

#[test]
fn representation_tracks_kernel_at_deeper_resolution() {
    // Evaluated at resolution 5 the representation still reproduces the
    // kernel: both sides are level-n measurable.
    let res = 5u8;
    for n in 1..=3u32 {
        for m in 0..(1u32 << n) {
            let d = dirichlet_kernel(m as usize, res).unwrap();
            for code in 0..(1u32 << res) {
                let u = DyadicPoint::new(code, res).unwrap();
                let rhs = schipp_rhs(m, n, u).unwrap();
                assert!(rhs.is_integer(), "n {n} m {m} code {code}");
                assert!(
                    rhs.equals_int(d.value(code) as i64),
                    "n {n} m {m} code {code}: rhs {rhs} vs kernel {}",
                    d.value(code)
                );
            }
        }
    }
}

#[test]
fn sign_table_matches_the_displayed_cases() {
    assert_eq!(epsilon(0, 0).unwrap(), 1);
    assert_eq!(epsilon(2, 0).unwrap(), -1);
    assert_eq!(epsilon(2, 1).unwrap(), -1);
    assert_eq!(epsilon(3, 3).unwrap(), 1);
    assert!(epsilon(1, 2).is_err());
}

#[test]
fn verification_reports_serialize() {
    let report = verify_dyadic_dirichlet(3).unwrap();
    let json = serde_json::to_string(&report).unwrap();
    assert!(json.contains("\"checked\""));
    assert!(json.contains("\"passed\""));
    assert!(json.contains("\"first_failure\""));
}
