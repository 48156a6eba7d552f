mod common;

use common::*;
use multinorm::abgroup::cokernel_of_elements;
use multinorm::wedge::{exterior_square, tensor_square, wedge_hom};
use num_integer::Integer;
use proptest::prelude::*;

#[test]
fn squares_match_universal_property() {
    for g in groups_up_to(8) {
        let t = tensor_square(&g);
        assert!(
            same_type(t.group().invariant_factors(), &universal_square(&g, false)),
            "tensor square of {g}"
        );
        let w = exterior_square(&g);
        assert!(
            same_type(w.group().invariant_factors(), &universal_square(&g, true)),
            "exterior square of {g}"
        );
    }
}

#[test]
fn exterior_square_is_tensor_quotient() {
    for g in groups_up_to(64) {
        let t = tensor_square(&g);
        let diagonal: Vec<_> = g.elements().map(|x| t.tensor(&x, &x)).collect();
        let q = cokernel_of_elements(t.group(), &diagonal);
        let w = exterior_square(&g);
        assert_eq!(q.group.invariant_factors(), w.group().invariant_factors(), "{g}");
        let d = g.invariant_factors();
        let expected: u64 = (0..d.len())
            .flat_map(|i| (i + 1..d.len()).map(move |j| (i, j)))
            .map(|(i, j)| d[i].gcd(&d[j]))
            .product();
        assert_eq!(w.group().order(), expected.into(), "{g}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn wedge_is_alternating_and_bilinear(g in arb_group(64), seed in arb_seed()) {
        let w = exterior_square(&g);
        let m = w.group();
        let mut r = rng(seed);
        for _ in 0..8 {
            let a = random_elem(&g, &mut r);
            let b = random_elem(&g, &mut r);
            let c = random_elem(&g, &mut r);
            prop_assert!(m.is_zero_elem(&w.wedge(&a, &a)));
            prop_assert_eq!(w.wedge(&a, &b), m.neg(&w.wedge(&b, &a)));
            prop_assert_eq!(
                w.wedge(&g.add(&a, &b), &c),
                m.add(&w.wedge(&a, &c), &w.wedge(&b, &c))
            );
            prop_assert_eq!(
                w.wedge(&a, &g.add(&b, &c)),
                m.add(&w.wedge(&a, &b), &w.wedge(&a, &c))
            );
        }
    }

    #[test]
    fn wedges_generate(g in arb_group(32)) {
        let w = exterior_square(&g);
        let gens: Vec<_> = (0..g.rank())
            .flat_map(|i| (i + 1..g.rank()).map(move |j| (i, j)))
            .map(|(i, j)| w.wedge(&g.generator(i), &g.generator(j)))
            .collect();
        prop_assert!(cokernel_of_elements(w.group(), &gens).group.is_trivial());
    }

    #[test]
    fn wedge_hom_is_functorial(
        a in arb_group(32), b in arb_group(32), c in arb_group(32), seed in arb_seed()
    ) {
        let mut r = rng(seed);
        let f = random_hom(&a, &b, &mut r);
        let g = random_hom(&b, &c, &mut r);
        let wf = wedge_hom(&f);
        let wa = exterior_square(&a);
        let wb = exterior_square(&b);
        for _ in 0..6 {
            let x = random_elem(&a, &mut r);
            let y = random_elem(&a, &mut r);
            prop_assert_eq!(wf.apply(&wa.wedge(&x, &y)), wb.wedge(&f.apply(&x), &f.apply(&y)));
        }
        let left = wedge_hom(&g.compose(&f).unwrap());
        let right = wedge_hom(&g).compose(&wf).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(wedge_hom(&multinorm::AbHom::identity(&a)).is_isomorphism());
    }

    #[test]
    fn surjections_stay_surjective(a in arb_group(64), seed in arb_seed()) {
        // project onto a random quotient
        let mut r = rng(seed);
        let gens: Vec<_> = (0..2).map(|_| random_elem(&a, &mut r)).collect();
        let q = cokernel_of_elements(&a, &gens);
        prop_assert!(wedge_hom(&q.proj).is_surjective());
    }
}
