//! Checks every record of the builtin elliptic fixture against its tags.

use gfe_core::arith::{parse_factored, primes_below};
use gfe_core::twists::{catalog, elliptic_fixture, supported_on, x_e7_minus_quartic, x_e7_quartic};
use gfe_core::zeta::{count_points, singular_point_mod_p};
use gfe_core::{Fq, TernaryForm};

fn good_counts(f: &TernaryForm, g: &TernaryForm) -> Vec<(u64, u64, u64)> {
    primes_below(38)
        .into_iter()
        .filter(|&p| p >= 5)
        .filter(|&p| {
            [f, g].iter().all(|h| h.denominator_lcm() % p != 0.into() && matches!(singular_point_mod_p(h, p), Ok(None)))
        })
        .map(|p| {
            let field = Fq::new(p, 1).unwrap();
            (p, count_points(f, &field).unwrap(), count_points(g, &field).unwrap())
        })
        .collect()
}

#[test]
fn records_match_their_tags() {
    let records = elliptic_fixture();
    assert_eq!(records.len(), 15);
    let mut verified = 0;
    for r in records {
        assert!(supported_on(&r.coeffs.discriminant(), &[2, 3]), "{}", r.label);
        for tag in &r.checks {
            if let Some(label) = tag.strip_prefix("verified:").or_else(|| tag.strip_prefix("verified-:")) {
                let quartic =
                    if tag.starts_with("verified-") { x_e7_minus_quartic(&r.coeffs) } else { x_e7_quartic(&r.coeffs) };
                let target = &catalog().get(label).unwrap().form;
                let rows = good_counts(&quartic, target);
                assert!(rows.len() >= 5, "{}: too few good primes", r.label);
                for (p, a, b) in rows {
                    assert_eq!(a, b, "{} vs {label} at p = {p}", r.label);
                }
                verified += 1;
            } else if let Some(j) = tag.strip_prefix("j:") {
                assert_eq!(r.coeffs.j_invariant(), Some(parse_factored(j).unwrap()), "{}", r.label);
            } else {
                assert_eq!(tag, "support", "{}: unknown tag", r.label);
            }
        }
    }
    assert!(verified >= 5);
}
