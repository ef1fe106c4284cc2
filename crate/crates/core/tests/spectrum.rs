use pzero::curves::{genus, CurveSpec};
use pzero::lingrp::{expected_order, fpf_cyclic_divisors, Family, FamilyId};
use pzero::ramify::hurwitz_genus;
use pzero::spectrum::{
    bound_checks, crosscheck_gqfpf, entry_profile, enumerate_spectrum, quotient_consistency,
    to_csv, CaseTag, Route, Witness,
};

fn fam(name: Family, n: u64) -> FamilyId {
    FamilyId::new(name, n).unwrap()
}

fn grid() -> Vec<FamilyId> {
    let mut v = Vec::new();
    for n in [4u64, 8, 16, 32, 64] {
        v.push(fam(Family::PSL2, n));
        v.push(fam(Family::PSU3, n));
    }
    for n in [8u64, 32, 128] {
        v.push(fam(Family::SZ, n));
    }
    for n in [8u64, 32] {
        v.push(fam(Family::SU3, n));
    }
    v
}

fn sorted(mut v: Vec<i128>) -> Vec<i128> {
    v.sort();
    v
}

#[test]
fn paper_examples() {
    let sz = enumerate_spectrum(&fam(Family::SZ, 8)).unwrap();
    assert_eq!(sorted(sz.genera()), vec![14, 196, 196]);
    let dls = sz
        .entries
        .iter()
        .find(|e| e.witness == Some(Witness::Dls))
        .unwrap();
    assert_eq!((dls.case_tag, dls.t, dls.genus), (CaseTag::SzB, 1, 14));
    assert_eq!(sz.filtered.len(), 1);
    assert_eq!(sz.filtered[0].genus, -14);

    let psu = enumerate_spectrum(&fam(Family::PSU3, 4)).unwrap();
    assert_eq!(sorted(psu.genera()), vec![6, 66, 456, 456]);
    let herm = psu
        .entries
        .iter()
        .find(|e| e.witness == Some(Witness::Hermitian))
        .unwrap();
    assert_eq!(
        (herm.case_tag, herm.t, herm.genus),
        (CaseTag::Psu3First, 1, 6)
    );
}

#[test]
fn every_entry_passes_crosscheck() {
    for f in grid() {
        let s = enumerate_spectrum(&f).unwrap();
        for e in &s.entries {
            assert!(crosscheck_gqfpf(e), "{f} {e:?}");
            assert_eq!(
                hurwitz_genus(&entry_profile(e).unwrap()).unwrap() as i128,
                e.genus
            );
            assert_eq!(e.s_order, expected_order(&f));
            assert!(fpf_cyclic_divisors(&f)
                .unwrap()
                .contains(&(e.sq_order as u64)));
        }
    }
}

#[test]
fn divisor_enumeration_is_exhaustive() {
    for f in grid() {
        let s = enumerate_spectrum(&f).unwrap();
        let total = s.entries.len() + s.filtered.len();
        let n = f.n;
        let trial = |m: u64| (1..=m).filter(|d| m.is_multiple_of(*d)).count();
        let expected = match f.name {
            Family::PSL2 => trial(n + 1),
            Family::PSU3 => trial((n * n - n + 1) / f.mu()) + trial(n + 1),
            Family::SU3 => trial((n * n - n + 1) / 3) + trial(n + 1),
            Family::SZ => {
                let n0 = f.n0().unwrap();
                trial(n + 2 * n0 + 1) + trial(n - 2 * n0 + 1)
            }
            Family::PGU3 => unreachable!(),
        };
        assert_eq!(total, expected, "{f}");
    }
}

#[test]
fn hermitian_and_curve_iv_identities() {
    for n in [4u64, 8, 16, 32, 64] {
        let s = enumerate_spectrum(&fam(Family::PSU3, n)).unwrap();
        let e = s
            .entries
            .iter()
            .find(|e| e.case_tag == CaseTag::Psu3First && e.t == 1)
            .unwrap();
        assert_eq!(e.genus, (n * (n - 1) / 2) as i128);
    }
    for n in [8u64, 32] {
        let s = enumerate_spectrum(&fam(Family::SU3, n)).unwrap();
        let e = s
            .entries
            .iter()
            .find(|e| e.case_tag == CaseTag::Su3Second && e.t == n + 1)
            .unwrap();
        let iv = (n * n * n + 1) * (n * n - 2) / 2 + 1;
        assert_eq!(e.genus, iv as i128);
        assert_eq!(e.witness, Some(Witness::CurveIV));
        assert_eq!(iv, genus(&CurveSpec::curve_iv(n).unwrap()));
    }
    let e = enumerate_spectrum(&fam(Family::SU3, 32)).unwrap();
    assert!(e.entries.iter().any(|e| e.genus == 16_744_960));
}

#[test]
fn psl2_entries_match_stich_curves() {
    // Y^(2^r) + Y + X^t has genus (t-1)(2^r-1)/2
    for r in [3u64, 5] {
        let s = enumerate_spectrum(&fam(Family::PSL2, 1 << r)).unwrap();
        for e in s.entries.iter().filter(|e| e.t < 1 << r) {
            assert_eq!(e.witness, Some(Witness::Stich));
            let c = CurveSpec::stich(r, e.t).unwrap();
            assert_eq!(genus(&c) as i128, e.genus);
        }
    }
}

#[test]
fn quotient_cross_validation() {
    let q = quotient_consistency(4).unwrap();
    assert_eq!(q.iv_genus, 456);
    let got: Vec<(u64, Option<u64>)> = q.rows.iter().map(|r| (r.h, r.genus)).collect();
    assert_eq!(
        got,
        vec![(1, Some(456)), (5, Some(66)), (13, Some(6)), (65, None)]
    );
    assert!(q.rows[3].error.is_some());
    assert!(q.matches);
    let q = quotient_consistency(8).unwrap();
    assert!(q.matches, "{q:?}");
    assert_eq!(q.quotient_genera, vec![28, 343, 595, 1540, 5131, 15904]);
}

#[test]
fn bound_examples() {
    for (order, g, fixes) in [
        (62400u128, 6u64, false),
        (29120, 14, false),
        (1152, 4, true),
    ] {
        let r = bound_checks(order, g, false, false, fixes).unwrap();
        assert!(r.trigger);
    }
    assert_eq!(
        bound_checks(1152, 4, false, true, true).unwrap().route,
        Route::FixedPoint
    );
    assert_eq!(
        bound_checks(62400, 6, false, false, false).unwrap().route,
        Route::TwoTransitive
    );
    let r = bound_checks(504, 7, false, false, false).unwrap();
    assert!(!r.trigger);
    assert_eq!(r.route, Route::BelowThreshold);
}

#[test]
fn csv_rows() {
    let csv = to_csv(&enumerate_spectrum(&fam(Family::PSU3, 4)).unwrap().entries);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "family,n,case,t,genus,s_order,sq_order,witness,flags"
    );
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("PSU3,4,PSU3-first,1,6,62400,13,II,"));
}
