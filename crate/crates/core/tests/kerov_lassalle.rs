use jackfac::algebra::rat;
use jackfac::free::{kl_of_character, kl_of_cumulant, scan_kerov_lassalle_positivity, KLPolynomial};
use jackfac::Partition;

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn kl(terms: &[(u32, &[u32], i64)]) -> KLPolynomial {
    KLPolynomial::from_terms(terms.iter().map(|(g, idx, c)| (*g, idx.to_vec(), rat(*c))))
}

#[test]
fn ch4() {
    let expected = kl(&[
        (0, &[5], 1),
        (1, &[4], 6),
        (1, &[2, 2], 1),
        (2, &[3], 11),
        (3, &[2], 6),
        (0, &[3], 5),
        (1, &[2], 7),
    ]);
    let got = kl_of_character(&p("[4]")).unwrap();
    assert_eq!(got, expected);
    assert_eq!(
        got.to_string(),
        "R5 + 6*R4*g + R2^2*g + 11*R3*g^2 + 6*R2*g^3 + 5*R3 + 7*R2*g"
    );
}

#[test]
fn ch22_has_mixed_signs() {
    let expected = kl(&[
        (0, &[3, 3], 1),
        (1, &[3, 2], 2),
        (2, &[2, 2], 1),
        (0, &[4], -4),
        (0, &[2, 2], -2),
        (1, &[3], -10),
        (2, &[2], -6),
        (0, &[2], -2),
    ]);
    let got = kl_of_character(&p("[2,2]")).unwrap();
    assert_eq!(got, expected);
    assert!(!got.has_nonnegative_integer_coefficients());
}

#[test]
fn cumulant_222() {
    let expected = kl(&[
        (0, &[5], 40),
        (0, &[3, 2], 64),
        (1, &[4], 176),
        (1, &[2, 2], 96),
        (2, &[3], 256),
        (0, &[3], 80),
        (3, &[2], 120),
        (1, &[2], 104),
    ]);
    let got = kl_of_cumulant(&[p("[2]"), p("[2]"), p("[2]")]).unwrap();
    assert_eq!(got, expected);
    assert!(got.has_nonnegative_integer_coefficients());
}

#[test]
fn ch222() {
    let expected = kl(&[
        (0, &[3, 3, 3], 1),
        (1, &[3, 3, 2], 3),
        (0, &[4, 3], -12),
        (2, &[3, 2, 2], 3),
        (0, &[3, 2, 2], -6),
        (1, &[3, 3], -30),
        (1, &[4, 2], -12),
        (3, &[2, 2, 2], 1),
        (1, &[2, 2, 2], -6),
        (0, &[5], 40),
        (2, &[3, 2], -48),
        (0, &[3, 2], 58),
        (1, &[4], 176),
        (3, &[2, 2], -18),
        (1, &[2, 2], 90),
        (2, &[3], 256),
        (0, &[3], 80),
        (3, &[2], 120),
        (1, &[2], 104),
    ]);
    assert_eq!(kl_of_character(&p("[2,2,2]")).unwrap(), expected);
}

#[test]
fn positivity_scan_small() {
    let r = scan_kerov_lassalle_positivity(4).unwrap();
    assert!(r.is_clean(), "{:?}", r.violations);
    assert_eq!(r.probes, 1 + 2 + 3 + 5);
}
