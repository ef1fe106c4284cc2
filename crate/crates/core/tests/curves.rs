use pzero::curves::{
    affine_points, build_section7_curve, genus, rational_points, two_rank, verify_automorphisms,
    CurveFamily, CurveSpec, Section7Kind,
};
use pzero::field::FieldSpec;
use pzero::poly::Poly;
use pzero::ramify::{as_cover_analyze, hurwitz_genus, ASCover, RamificationProfile, ShortOrbit};

#[test]
fn hermitian_point_totals_are_maximal() {
    for (n, total) in [(4u64, 65u64), (8, 513)] {
        let c = CurveSpec::hermitian(n).unwrap();
        let p = rational_points(&c, c.base_field().degree()).unwrap();
        assert_eq!(p.total, total);
        assert_eq!(p.total, n * n + 1 + 2 * genus(&c) * n);
    }
}

#[test]
fn hermitian_over_base_subfield() {
    // over F_n the curve y^n + y = x^(n+1) has y^n + y = 0 and x^(n+1) = x^2
    let c = CurveSpec::hermitian(4).unwrap();
    assert_eq!(rational_points(&c, 2).unwrap().total, 4 + 1);
}

#[test]
fn dls_and_family_i_totals() {
    let c = CurveSpec::dls(8).unwrap();
    assert_eq!(rational_points(&c, 3).unwrap().total, 65);
    let c = CurveSpec::dls(32).unwrap();
    assert_eq!(rational_points(&c, 5).unwrap().total, 1025);
    let c = CurveSpec::family_i(2).unwrap();
    assert_eq!(rational_points(&c, 2).unwrap().total, 5);
}

#[test]
fn family_i_brute_force_oracle() {
    // direct search over all pairs in a small field
    let c = CurveSpec::family_i(2).unwrap();
    for e in 1..=6 {
        let f = FieldSpec::new(e).unwrap();
        let mut count = 1u64;
        for x in f.elements() {
            for y in f.elements() {
                if f.square(y) ^ y == f.pow(x, 5) {
                    count += 1;
                }
            }
        }
        assert_eq!(rational_points(&c, e).unwrap().total, count, "e = {e}");
    }
}

#[test]
fn hermitian_genus_matches_as_profile() {
    for n in [4u64, 8, 16] {
        let p = RamificationProfile {
            group_order: n as u128,
            quotient_genus: 0,
            orbits: vec![ShortOrbit {
                size: 1,
                filtration: [vec![n as u128; n as usize + 2], vec![1]].concat(),
            }],
        };
        assert_eq!(
            hurwitz_genus(&p).unwrap(),
            genus(&CurveSpec::hermitian(n).unwrap())
        );
    }
}

#[test]
fn automorphism_checks() {
    let r = verify_automorphisms(&CurveSpec::hermitian(4).unwrap()).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.group_order, 62400);
    let r = verify_automorphisms(&CurveSpec::dls(8).unwrap()).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.group_order, 29120);
    for k in [2u64, 3] {
        let r = verify_automorphisms(&CurveSpec::family_i(k).unwrap()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.group_order, (1u128 << (2 * k + 1)) * ((1u128 << k) + 1));
    }
    assert!(verify_automorphisms(&CurveSpec::curve_iv(4).unwrap()).is_err());
}

#[test]
fn two_rank_zero_across_grid() {
    let mut specs = Vec::new();
    for k in 2..=5 {
        specs.push(CurveSpec::family_i(k).unwrap());
    }
    for n in [4u64, 8, 16, 32] {
        specs.push(CurveSpec::hermitian(n).unwrap());
    }
    for n in [8u64, 32] {
        specs.push(CurveSpec::dls(n).unwrap());
    }
    specs.push(CurveSpec::stich(3, 3).unwrap());
    specs.push(CurveSpec::stich(5, 3).unwrap());
    specs.push(CurveSpec::stich(5, 11).unwrap());
    for c in &specs {
        assert_eq!(two_rank(c).unwrap().two_rank, 0, "{c:?}");
    }
    assert!(two_rank(&CurveSpec::curve_iv(4).unwrap()).is_err());
}

#[test]
fn family_i_as_cover_analysis() {
    let f = FieldSpec::new(1).unwrap();
    for k in 2..=5u32 {
        let num = Poly::monomial(f, 1, (1usize << k) + 1);
        let a = as_cover_analyze(&ASCover::new(num, Poly::one(f)).unwrap()).unwrap();
        assert_eq!(a.genus, 1 << (k - 1));
        assert_eq!(a.two_rank, 0);
    }
}

#[test]
fn stich_points_lie_on_curve() {
    let c = CurveSpec::stich(3, 3).unwrap();
    let f = FieldSpec::new(6).unwrap();
    for (x, y) in affine_points(&c, 6).unwrap() {
        assert_eq!(f.pow(y, 8) ^ y, f.pow(x, 3));
    }
}

#[test]
fn curve_iv_counts_flag_singular_points() {
    let c = CurveSpec::curve_iv(4).unwrap();
    assert_eq!(c.family, CurveFamily::IV);
    let p = rational_points(&c, 4).unwrap();
    // the n points of F_n give smooth points (x, 0)
    assert!(p.affine_smooth >= 4);
    assert_eq!(p.total, p.affine_smooth + 1);
    assert!(rational_points(&c, 13).is_err());
}

#[test]
fn section7_reports_both_genera() {
    let s = build_section7_curve(Section7Kind::Stich, 5, 11).unwrap();
    assert_eq!(s.stated_genus, 5 * 31);
    assert!(!s.mismatch);
    let q = build_section7_curve(Section7Kind::Psu3Quotient, 8, 1).unwrap();
    assert_eq!(
        (q.stated_genus, q.derived_genus, q.quotient_order),
        (28, Some(343), Some(27))
    );
    let q = build_section7_curve(Section7Kind::Psu3QuotientCongruentOne, 4, 1).unwrap();
    assert_eq!((q.stated_genus, q.derived_genus), (81, Some(66)));
    let q = build_section7_curve(Section7Kind::Psu3QuotientCongruentOne, 4, 13).unwrap();
    assert!(q.derived_genus.is_none() && q.mismatch);
    assert!(build_section7_curve(Section7Kind::Su3Quotient, 4, 1).is_err());
}

#[test]
fn sextic_has_two_rank_four() {
    use pzero::curves::sextic_two_rank;
    let r = sextic_two_rank().unwrap();
    assert_eq!(r.genus, 7);
    assert_eq!(r.two_rank, 4);
    assert_eq!(r.involution_fixed_points, 1);
    // plane model oracle: affine points with y^2 + y != 0 and Phi_7(y) != 0 are smooth
    // and match the unramified fibres of the cubic model
    for e in 1..=7u32 {
        let f = FieldSpec::new(e).unwrap();
        let mut plane = 0u64;
        let mut branch = 3u64;
        for y in f.elements() {
            let phi = (0..7).fold(0, |acc, i| acc ^ f.pow(y, i));
            let den = f.square(y) ^ y;
            if den == 0 {
                continue;
            }
            if phi == 0 {
                branch += 1;
                continue;
            }
            for x in f.elements() {
                if phi ^ f.mul(f.pow(x, 3), den) == 0 {
                    plane += 1;
                }
            }
        }
        assert_eq!(plane + branch, r.counts[e as usize - 1], "e = {e}");
    }
}
