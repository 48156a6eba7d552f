#![allow(dead_code)]

use multinorm::abgroup::smith_normal_form;
use multinorm::{AbHom, Elem, FinAbGroup, IntMatrix};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Invariant factors of `Z^cols / ⟨rows⟩`, after checking the Smith form
/// against its transforms. Panics on a free part.
pub fn presented_factors(rows: &[Vec<i64>], cols: usize) -> Vec<u64> {
    if rows.is_empty() {
        assert_eq!(cols, 0, "free part in presentation");
        return Vec::new();
    }
    let a = IntMatrix::from_rows(rows);
    let s = smith_normal_form(&a);
    assert_eq!(s.u.mul(&a).mul(&s.v), s.d, "smith form contract");
    let diag = s.d.diagonal();
    assert!(diag.len() >= cols, "free part in presentation");
    let mut out: Vec<u64> = diag
        .iter()
        .take(cols)
        .map(|x| {
            assert!(!x.is_zero(), "free part in presentation");
            x.abs().to_u64().unwrap()
        })
        .filter(|&x| x != 1)
        .collect();
    out.sort_unstable();
    out
}

/// `|G[k]| = #{x : kx = 0}` for every `k` dividing the exponent. Two finite
/// abelian groups with the same counts are isomorphic.
pub fn torsion_profile(cyclic_orders: &[u64]) -> Vec<u64> {
    let e = cyclic_orders.iter().fold(1u64, |a, &d| a.lcm(&d));
    (1..=e)
        .filter(|k| e % k == 0)
        .map(|k| cyclic_orders.iter().map(|&d| k.gcd(&d)).product())
        .collect()
}

pub fn same_type(a: &[u64], b: &[u64]) -> bool {
    let ea = a.iter().fold(1u64, |x, &d| x.lcm(&d));
    let eb = b.iter().fold(1u64, |x, &d| x.lcm(&d));
    ea == eb && torsion_profile(a) == torsion_profile(b)
}

/// `G ⊗ G` (or `G ∧ G` when `alternating`) from its universal property:
/// free on symbols `[x, y]` for all elements, modulo bilinearity and, in the
/// alternating case, `[x, x]`.
pub fn universal_square(g: &FinAbGroup, alternating: bool) -> Vec<u64> {
    let elems: Vec<Elem> = g.elements().collect();
    let n = elems.len();
    let idx = |x: &Elem| g.element_index(x);
    let sym = |i: usize, j: usize| i * n + j;
    let mut rows = Vec::new();
    for (i, x) in elems.iter().enumerate() {
        for (j, y) in elems.iter().enumerate() {
            let s = idx(&g.add(x, y));
            for k in 0..n {
                // [x+y, z] = [x, z] + [y, z] and [z, x+y] = [z, x] + [z, y]
                for (l, a, b) in [
                    (sym(s, k), sym(i, k), sym(j, k)),
                    (sym(k, s), sym(k, i), sym(k, j)),
                ] {
                    let mut row = vec![0i64; n * n];
                    row[l] += 1;
                    row[a] -= 1;
                    row[b] -= 1;
                    if row.iter().any(|&c| c != 0) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    if alternating {
        for i in 0..n {
            let mut row = vec![0i64; n * n];
            row[sym(i, i)] = 1;
            rows.push(row);
        }
    }
    rows.sort();
    rows.dedup();
    presented_factors(&rows, n * n)
}

/// A homomorphism with random columns: the image of a generator of order `d`
/// in a factor `Z/e` must be a multiple of `e / gcd(e, d)`.
pub fn random_hom(source: &FinAbGroup, target: &FinAbGroup, rng: &mut impl Rng) -> AbHom {
    let cols = source
        .invariant_factors()
        .iter()
        .map(|&d| {
            target
                .invariant_factors()
                .iter()
                .map(|&e| (e / e.gcd(&d)) * rng.gen_range(0..e) % e)
                .collect()
        })
        .collect();
    AbHom::from_columns(source.clone(), target.clone(), cols).unwrap()
}

pub fn random_elem(g: &FinAbGroup, rng: &mut impl Rng) -> Elem {
    g.invariant_factors()
        .iter()
        .map(|&d| rng.gen_range(0..d))
        .collect()
}

pub fn groups_up_to(n: u64) -> Vec<FinAbGroup> {
    FinAbGroup::all_up_to_order(n)
}

pub fn arb_group(max_order: u64) -> impl Strategy<Value = FinAbGroup> {
    let all = groups_up_to(max_order);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

pub fn arb_seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
