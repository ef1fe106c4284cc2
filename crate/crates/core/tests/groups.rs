use std::collections::HashSet;

use pzero::lingrp::{
    build_pgu3, build_psl2, build_psu3, build_su3_matrix, build_sz, expected_order,
    fpf_cyclic_divisors, fpf_witness, stabilizer_constants, Family, FamilyId, NaturalAction,
    PointLabel, Unital,
};
use pzero::perm::{
    is_ti_subgroup, normal_closure, sample_involutions, Action, PermGroup, Permutation,
};

fn check_action(a: &NaturalAction) {
    let g = &a.group;
    let c = stabilizer_constants(&a.family);
    assert_eq!(g.degree() as u128, c.degree);
    assert_eq!(
        g.order().unwrap(),
        expected_order(&a.family),
        "{}",
        a.family
    );
    assert!(g.is_two_transitive().unwrap(), "{}", a.family);
    let stab = g.stabilizer(a.infinity).unwrap();
    assert_eq!(stab.order().unwrap(), c.sp, "{}", a.family);
    let s2 = a.sylow2_group().unwrap();
    assert_eq!(s2.order().unwrap(), c.sp1);
    assert!(s2.is_subgroup_of(g).unwrap());
    assert!(is_ti_subgroup(g, &s2).unwrap(), "{}", a.family);
    let h = PermGroup::new(g.degree(), a.complement.clone()).unwrap();
    assert_eq!(h.order().unwrap(), c.h);
    for t in sample_involutions(g, 1000, 0x5A5A).unwrap() {
        assert_eq!(t.fixed_points().len(), 1, "{}", a.family);
    }
}

#[test]
fn psl2_small() {
    for n in [4, 8, 16] {
        check_action(&build_psl2(n).unwrap());
    }
    let a = build_psl2(4).unwrap();
    assert_eq!(a.group.order().unwrap(), 60);
    assert_eq!(a.group.orbit(2).unwrap().len(), 5);
}

#[test]
fn psl2_8_translation_and_stabilizer() {
    let a = build_psl2(8).unwrap();
    let t = &a.group.generators()[0];
    assert_eq!(t.fixed_points(), vec![a.infinity]);
    let stab = a.group.stabilizer(a.infinity).unwrap();
    assert_eq!(stab.order().unwrap(), 56);
    // H is cyclic of order 7
    assert_eq!(a.complement[0].order(), 7);
}

#[test]
fn sz_8() {
    let a = build_sz(8).unwrap();
    check_action(&a);
    assert_eq!(a.group.stabilizer(0).unwrap().order().unwrap(), 448);
    // the whole Sylow subgroup: every involution fixes only infinity
    for x in a.sylow2_group().unwrap().elements(64).unwrap() {
        if !x.is_identity() {
            assert_eq!(x.fixed_points(), vec![a.infinity]);
        }
    }
}

#[test]
fn sz_32() {
    let a = build_sz(32).unwrap();
    assert_eq!(a.degree(), 1025);
    assert_eq!(a.group.order().unwrap(), 32_537_600);
}

#[test]
fn unitary_4() {
    let pgu = build_pgu3(4).unwrap();
    check_action(&pgu);
    let psu = build_psu3(4).unwrap();
    assert_eq!(psu.group.order().unwrap(), 62400);
    // faithful on the unital
    let pts: Vec<usize> = (0..65).collect();
    assert_eq!(
        pgu.group.pointwise_kernel(&pts).unwrap().order().unwrap(),
        1
    );
    // phi is an involution
    let u = Unital::new(4).unwrap();
    let phi = u.matrix_perm(&u.phi()).unwrap();
    assert!(phi.then(&phi).is_identity());
    assert!(!phi.is_identity());
}

#[test]
fn unitary_8() {
    let pgu = build_pgu3(8).unwrap();
    let psu = build_psu3(8).unwrap();
    assert_eq!(pgu.group.order().unwrap(), 16_547_328);
    assert_eq!(psu.group.order().unwrap(), 5_515_776);
    assert!(psu.group.is_subgroup_of(&pgu.group).unwrap());
    check_action(&psu);
}

#[test]
fn unital_point_sets() {
    for n in [4u64, 8] {
        let u = Unital::new(n).unwrap();
        assert_eq!(u.degree() as u64, n * n * n + 1);
        let labels = u.labels();
        let mut sorted = labels[..labels.len() - 1].to_vec();
        sorted.sort();
        assert_eq!(sorted, labels[..labels.len() - 1]);
        assert_eq!(*labels.last().unwrap(), PointLabel::Infinity);
    }
}

#[test]
fn su3_vector_action_4() {
    let g = build_su3_matrix(4).unwrap();
    assert_eq!(g.order(), 62400);
    assert_eq!(g.center_order, 1);
}

#[test]
fn su3_vector_action_8() {
    let g = build_su3_matrix(8).unwrap();
    assert_eq!(g.order(), 16_547_328);
    assert_eq!(g.center_order, 3);
    let proj = g.projective_action().unwrap();
    assert_eq!(proj.order().unwrap() * 3, g.order());
    assert_eq!(
        proj.order().unwrap(),
        expected_order(&FamilyId::new(Family::PSU3, 8).unwrap())
    );
}

#[test]
fn simple_families_are_normal_closures_of_sylow() {
    for a in [
        build_psl2(4).unwrap(),
        build_psl2(8).unwrap(),
        build_sz(8).unwrap(),
    ] {
        let s = normal_closure(&a.group, &a.sylow2_group().unwrap()).unwrap();
        assert_eq!(s.order().unwrap(), a.group.order().unwrap());
    }
}

#[test]
fn fpf_witnesses_exist() {
    for a in [
        build_psl2(8).unwrap(),
        build_sz(8).unwrap(),
        build_psu3(4).unwrap(),
    ] {
        for c in fpf_cyclic_divisors(&a.family).unwrap() {
            let w = fpf_witness(&a.group, c, 0x5A5A, 20_000).unwrap();
            let w = w.unwrap_or_else(|| panic!("{} no fpf element of order {c}", a.family));
            assert_eq!(w.order(), c as u128);
        }
    }
}

#[test]
fn chain_matches_closure_for_small_groups() {
    // exhaustive closure oracle for every built group of order <= 10^4
    for a in [
        build_psl2(4).unwrap(),
        build_psl2(8).unwrap(),
        build_psl2(16).unwrap(),
    ] {
        let g = &a.group;
        let mut seen: HashSet<Permutation> = HashSet::new();
        let id = Permutation::identity(g.degree());
        let mut frontier = vec![id.clone()];
        seen.insert(id);
        while let Some(x) = frontier.pop() {
            for s in g.generators() {
                let y = x.then(s);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        assert_eq!(seen.len() as u128, g.order().unwrap());
        for x in seen.iter().take(200) {
            assert!(g.contains(x).unwrap());
        }
    }
}
