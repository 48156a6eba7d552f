mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::*;
use multinorm::grouptable::{CayleyGroup, GroupMap};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn random_perm_group(seed: u64) -> Arc<CayleyGroup> {
    let mut r = rng(seed);
    let degree = r.gen_range(2..=5);
    let k = r.gen_range(1..=3);
    let gens: Vec<Vec<usize>> = (0..k)
        .map(|_| {
            let mut p: Vec<usize> = (0..degree).collect();
            p.shuffle(&mut r);
            p
        })
        .collect();
    Arc::new(CayleyGroup::from_generators(120, &gens).unwrap())
}

/// Closure of `set` under multiplication, by repeated products.
fn brute_closure(g: &CayleyGroup, set: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut out = set.clone();
    out.insert(g.identity());
    loop {
        let cur: Vec<usize> = out.iter().copied().collect();
        let before = out.len();
        for &a in &cur {
            for &b in &cur {
                out.insert(g.mul(a, b));
            }
        }
        if out.len() == before {
            return out;
        }
    }
}

fn brute_derived(g: &CayleyGroup) -> BTreeSet<usize> {
    let n = g.order();
    let comms = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))))
        .collect();
    brute_closure(g, &comms)
}

fn normal_closure(g: &CayleyGroup, x: usize) -> Vec<usize> {
    let conj = (0..g.order())
        .map(|h| g.mul(g.mul(g.inv(h), x), h))
        .collect();
    brute_closure(g, &conj).into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derived_subgroup_and_abelianization(seed in arb_seed()) {
        let g = random_perm_group(seed);
        let derived = g.commutator_subgroup();
        let brute: Vec<usize> = brute_derived(&g).into_iter().collect();
        prop_assert_eq!(&derived, &brute);
        prop_assert!(g.is_normal(&derived));
        let ab = g.abelianization();
        prop_assert_eq!(
            ab.group.order(),
            ((g.order() / derived.len()) as u64).into()
        );
        let n = g.order();
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(
                    ab.coords[g.mul(a, b)].clone(),
                    ab.group.add(&ab.coords[a], &ab.coords[b])
                );
            }
            prop_assert_eq!(ab.group.is_zero_elem(&ab.coords[a]), derived.contains(&a));
        }
        prop_assert_eq!(g.is_abelian(), derived.len() == 1);
    }

    #[test]
    fn induced_maps_are_functorial(seed in arb_seed()) {
        let g = random_perm_group(seed);
        let mut r = rng(seed ^ 0x5eed);
        let n = g.order();
        let picks: Vec<usize> = (0..2).map(|_| r.gen_range(0..n)).collect();
        let h_set = g.closure(&picks);
        let (_h, incl) = g.subgroup(&h_set).unwrap();
        let normal = normal_closure(&g, r.gen_range(0..n));
        let (_q, proj) = g.quotient(&normal).unwrap();
        let composite = proj.compose(&incl).unwrap();
        let left = composite.induced_ab_map();
        let right = proj.induced_ab_map().compose(&incl.induced_ab_map()).unwrap();
        prop_assert_eq!(&left, &right);
        let ident = GroupMap::identity(&g).induced_ab_map();
        prop_assert!(ident.is_isomorphism());
        prop_assert!(proj.induced_ab_map().is_surjective());
        // elementwise: the class of f(x) is the image of the class of x
        let src = incl.source().abelianization();
        let tgt = g.abelianization();
        let f = incl.induced_ab_map();
        for x in 0..incl.source().order() {
            prop_assert_eq!(f.apply(&src.coords[x]), tgt.coords[incl.apply(x)].clone());
        }
    }

    #[test]
    fn abelian_tables_abelianize_to_themselves(g in arb_group(64)) {
        let t = CayleyGroup::from_abelian(&g, 64).unwrap();
        prop_assert!(t.is_abelian());
        prop_assert_eq!(&t.abelianization().group, &g);
        prop_assert_eq!(t.commutator_subgroup(), vec![t.identity()]);
    }
}

#[test]
fn classical_abelianizations() {
    let s = |gens: &[Vec<usize>]| CayleyGroup::from_generators(120, gens).unwrap();
    let factors = |g: &CayleyGroup| g.abelianization().group.invariant_factors().to_vec();
    // S3, S4, S5
    for d in 3..=5 {
        let mut cycle: Vec<usize> = (1..d).collect();
        cycle.push(0);
        let mut swap: Vec<usize> = (0..d).collect();
        swap.swap(0, 1);
        assert_eq!(factors(&s(&[cycle, swap])), vec![2]);
    }
    // A4 = ⟨(0 1 2), (0 1)(2 3)⟩
    let a4 = s(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]);
    assert_eq!(a4.order(), 12);
    assert_eq!(factors(&a4), vec![3]);
    // D4 on the square's vertices
    let d4 = s(&[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]);
    assert_eq!(d4.order(), 8);
    assert_eq!(factors(&d4), vec![2, 2]);
    // Q8 as its regular representation: i, j acting on ±1, ±i, ±j, ±k
    let q8 = s(&[
        vec![2, 3, 1, 0, 6, 7, 5, 4],
        vec![4, 5, 7, 6, 1, 0, 2, 3],
    ]);
    assert_eq!(q8.order(), 8);
    assert!(!q8.is_abelian());
    assert_eq!(factors(&q8), vec![2, 2]);
}
