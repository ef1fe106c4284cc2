use std::collections::HashSet;

use proptest::prelude::*;

use pzero::field::FieldSpec;
use pzero::lingrp::{Family, FamilyId};
use pzero::perm::{Action, PermGroup, Permutation};
use pzero::poly::Poly;
use pzero::ramify::{as_reduce, hurwitz_genus_tame, quotient_genus_tame, ASCover};
use pzero::spectrum::{crosscheck_gqfpf, enumerate_spectrum};

fn poly(f: FieldSpec, coeffs: Vec<u32>) -> Poly {
    let mask = f.order() - 1;
    Poly::new(f, coeffs.into_iter().map(|c| c & mask).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms(r in 1u32..=16, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = FieldSpec::new(r).unwrap();
        let m = f.order() - 1;
        let (a, b, c) = (a & m, b & m, c & m);
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
        prop_assert_eq!(f.frobenius(a, r), a);
        prop_assert_eq!(f.sqrt(f.square(a)), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn poly_division(a in prop::collection::vec(any::<u32>(), 1..12), b in prop::collection::vec(any::<u32>(), 1..6)) {
        let f = FieldSpec::new(2).unwrap();
        let (a, b) = (poly(f, a), poly(f, b));
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(q.mul(&b).add(&r), a.clone());
        prop_assert!(r.is_zero() || r.degree() < b.degree());
        let g = a.gcd(&b);
        prop_assert!(a.rem(&g).unwrap().is_zero());
        prop_assert!(b.rem(&g).unwrap().is_zero());
    }

    #[test]
    fn factorization_reconstructs(coeffs in prop::collection::vec(any::<u32>(), 2..10)) {
        let f = FieldSpec::new(2).unwrap();
        let p = poly(f, coeffs);
        prop_assume!(p.degree().unwrap_or(0) >= 1);
        let mut prod = Poly::constant(f, p.lead());
        for (q, e) in p.factor().unwrap() {
            prop_assert_eq!(q.lead(), 1);
            prop_assert_eq!(q.factor().unwrap(), vec![(q.clone(), 1)]);
            prod = prod.mul(&q.pow(e as u64));
        }
        prop_assert_eq!(prod, p);
    }

    #[test]
    fn as_reduce_keeps_the_extension(num in prop::collection::vec(any::<u32>(), 1..8), den in prop::collection::vec(any::<u32>(), 1..5)) {
        // y^2 + y = f and y^2 + y = f' agree iff f - f' = h^2 + h, so traces agree wherever both are defined
        let f = FieldSpec::new(3).unwrap();
        let (n, d) = (poly(f, num), poly(f, den));
        prop_assume!(!n.is_zero() && !d.is_zero());
        let c = ASCover::new(n, d).unwrap();
        let r = as_reduce(&c).unwrap();
        prop_assert!(r.reduced);
        for p in r.poles().unwrap() {
            prop_assert!(p.order % 2 == 1);
        }
        for x in f.elements() {
            let (d0, d1) = (c.den.eval(x), r.den.eval(x));
            if d0 != 0 && d1 != 0 {
                prop_assert_eq!(f.trace(f.div(c.num.eval(x), d0)), f.trace(f.div(r.num.eval(x), d1)));
            }
        }
    }

    #[test]
    fn tame_quotient_inverts_hurwitz(gq in 0u64..40, h_half in 1u64..20, fixed in 0u64..30) {
        let h = 2 * h_half + 1;
        let Ok(g) = hurwitz_genus_tame(h as u128, gq, &vec![1; fixed as usize]) else { return Ok(()); };
        prop_assert_eq!(quotient_genus_tame(g, h, fixed).unwrap(), gq);
    }

    #[test]
    fn chain_order_matches_closure(images in prop::collection::vec(Just(()).prop_perturb(|_, mut rng| {
        let mut v: Vec<u32> = (0..7).collect();
        for i in (1..7).rev() {
            let j = (rng.next_u32() as usize) % (i + 1);
            v.swap(i, j);
        }
        v
    }), 1..4)) {
        let gens: Vec<Permutation> = images.into_iter().map(|v| Permutation::new(v).unwrap()).collect();
        let g = PermGroup::new(7, gens.clone()).unwrap();
        let mut seen: HashSet<Permutation> = HashSet::new();
        let id = Permutation::identity(7);
        let mut stack = vec![id.clone()];
        seen.insert(id);
        while let Some(x) = stack.pop() {
            for s in &gens {
                let y = x.then(s);
                if seen.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        prop_assert_eq!(g.order().unwrap(), seen.len() as u128);
        for x in seen.iter().take(50) {
            prop_assert!(g.contains(x).unwrap());
        }
    }

    #[test]
    fn spectrum_entries_cross_check(r in 2u32..=10) {
        let n = 1u64 << r;
        let mut fams = vec![FamilyId::new(Family::PSL2, n).unwrap(), FamilyId::new(Family::PSU3, n).unwrap()];
        if r % 2 == 1 {
            fams.push(FamilyId::new(Family::SZ, n).unwrap());
            fams.push(FamilyId::new(Family::SU3, n).unwrap());
        }
        for f in fams {
            let s = enumerate_spectrum(&f).unwrap();
            for e in &s.entries {
                prop_assert!(crosscheck_gqfpf(e), "{} {:?}", f, e);
            }
            for e in &s.filtered {
                prop_assert!(e.genus < 2);
            }
        }
    }
}
