use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use s4_core::finring::{
    ideal_from_gens, ideal_product, quotient, structure_mod, Elem, HowellForm, StructuredRing,
    Valuation,
};
use s4_core::numberfield::integral_basis;
use s4_core::{factor_two, make_field};

fn ring(m: i64, n: i64, a: u32) -> Arc<StructuredRing> {
    let b = integral_basis(&make_field(m, n).unwrap()).unwrap();
    Arc::new(structure_mod(&b.structure, a))
}

/// Additive subgroup of `(Z/2^a)^4` generated by `gens`, by closure.
fn span(a: u32, gens: &[Elem]) -> BTreeSet<[u32; 4]> {
    let mask = (1u32 << a) - 1;
    let mut seen = BTreeSet::from([[0u32; 4]]);
    let mut frontier = vec![[0u32; 4]];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = std::array::from_fn(|i| x[i].wrapping_add(g.0[i]) & mask);
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen
}

fn elems(a: u32, max: usize) -> impl Strategy<Value = Vec<Elem>> {
    let top = 1u32 << a;
    prop::collection::vec(prop::array::uniform4(0..top).prop_map(Elem), 0..max)
}

proptest! {
    #[test]
    fn howell_membership_matches_span(a in 1u32..=2, gens in elems(2, 5)) {
        let mask = (1u32 << a) - 1;
        let gens: Vec<Elem> = gens.into_iter().map(|g| Elem(g.0.map(|c| c & mask))).collect();
        let h = HowellForm::new(a, gens.iter().copied());
        let s = span(a, &gens);
        prop_assert_eq!(1usize << h.log2_size(), s.len());
        for idx in 0..(1u64 << (4 * a)) {
            let x = Elem(std::array::from_fn(|i| ((idx >> (a as usize * i)) as u32) & mask));
            prop_assert_eq!(h.contains(&x), s.contains(&x.0));
        }
    }

    #[test]
    fn howell_form_is_canonical(a in 1u32..=2, gens in elems(2, 5), seed in any::<u64>()) {
        let mask = (1u32 << a) - 1;
        let gens: Vec<Elem> = gens.into_iter().map(|g| Elem(g.0.map(|c| c & mask))).collect();
        // another generating set of the same subgroup: random elements of
        // the span together with the original generators, shuffled
        let s: Vec<[u32; 4]> = span(a, &gens).into_iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut other: Vec<Elem> = (0..6).map(|_| Elem(s[rng.gen_range(0..s.len())])).collect();
        other.extend(gens.iter().copied());
        for i in (1..other.len()).rev() {
            other.swap(i, rng.gen_range(0..=i));
        }
        prop_assert_eq!(HowellForm::new(a, gens), HowellForm::new(a, other));
    }

    #[test]
    fn ideal_product_lies_in_both_factors(gx in elems(2, 3), gy in elems(2, 3)) {
        let r = ring(-2, -6, 2);
        let x = ideal_from_gens(&r, &gx);
        let y = ideal_from_gens(&r, &gy);
        let xy = ideal_product(&x, &y);
        prop_assert!(xy.is_subset_of(&x));
        prop_assert!(xy.is_subset_of(&y));
        prop_assert!(xy.log2_size() <= x.log2_size().min(y.log2_size()));
        for g in xy.canonical_basis().generators() {
            for i in 0..4 {
                prop_assert!(xy.contains(&r.mul(&g, &r.basis(i))));
            }
        }
    }
}

#[test]
fn quotient_reduce_is_a_homomorphism_at_a4() {
    let fact = factor_two(&make_field(-2, -6).unwrap()).unwrap();
    let prime = &fact.primes[0];
    let r = prime.ring();
    let q = quotient(r, prime.chain().power(13).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let size = 1u64 << r.log2_size();
    for _ in 0..2000 {
        let x = r.element_at(rng.gen_range(0..size));
        let y = r.element_at(rng.gen_range(0..size));
        let (rx, ry) = (q.reduce(&x), q.reduce(&y));
        assert_eq!(q.reduce(&rx), rx);
        assert_eq!(q.reduce(&r.add(&x, &y)), q.add(&rx, &ry));
        assert_eq!(q.reduce(&r.mul(&x, &y)), q.mul(&rx, &ry));
        assert_eq!(q.unrank(q.rank(&rx)), rx);
    }
}

#[test]
fn valuation_is_ultrametric() {
    for (m, n) in [(-2, -6), (5, 3), (17, 3), (17, 2)] {
        let fact = factor_two(&make_field(m, n).unwrap()).unwrap();
        let prime = &fact.primes[0];
        let r = prime.ring();
        let cap = prime.chain().len();
        let size = 1u64 << r.log2_size();
        let mut rng = ChaCha8Rng::seed_from_u64(m.unsigned_abs() * 1000 + n.unsigned_abs());
        for _ in 0..1000 {
            let x = r.element_at(rng.gen_range(0..size));
            let y = r.element_at(rng.gen_range(0..size));
            let (vx, vy) = (prime.valuation(&x), prime.valuation(&y));
            let vs = prime.valuation(&r.add(&x, &y));
            assert!(
                vs.floor() >= vx.floor().min(vy.floor()),
                "({m},{n}) {x} {y}"
            );
            let vp = prime.valuation(&r.mul(&x, &y));
            match (vx, vy) {
                (Valuation::Exact(a), Valuation::Exact(b)) if a + b < cap => {
                    assert_eq!(vp, Valuation::Exact(a + b), "({m},{n}) {x} {y}");
                }
                _ => assert!(vp.floor() >= (vx.floor() + vy.floor()).min(cap)),
            }
        }
    }
}

#[test]
fn two_has_valuation_e() {
    for (m, n, e) in [(-2, -6, 4), (5, 3, 2), (17, 33, 1), (17, 2, 2)] {
        let fact = factor_two(&make_field(m, n).unwrap()).unwrap();
        for prime in &fact.primes {
            let two = prime.ring().from_int(2);
            assert_eq!(prime.valuation(&two), Valuation::Exact(e), "({m},{n})");
        }
    }
}
