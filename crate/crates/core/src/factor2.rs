//! Factorization of `(2)` by enumerating the maximal ideals of the
//! 16-element ring `O/(2)`.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::finring::{
    ideal_from_gens, ideal_product, quotient, structure_mod, Elem, HowellForm, PowerChain,
    RingIdeal, StructuredRing, Valuation,
};
use crate::numberfield::{integral_basis, BiquadraticField, FieldError, Structure};

/// Exponent of the ring `O/(2^a)` the prime chains live in.  `p^(4e+1)`
/// contains `(2^5)` for every `e`, so one modulus serves all levels.
pub const LIFT_EXP: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("ring has no maximal ideal")]
    NoMaximalIdeal,
    #[error("expected the 16-element ring O/(2), got modulus 2^{0}")]
    NotModTwo(u32),
    #[error("inconsistent factorization: {0}")]
    InconsistentFactorization(String),
    #[error("{0} is not a uniformizer (valuation {1})")]
    NotUniformizer(Elem, Valuation),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// One prime `p | (2)`, with its powers precomputed in `O/(2^LIFT_EXP)`.
#[derive(Clone, Debug)]
pub struct PrimeAboveTwo {
    pub ideal_mod2: RingIdeal,
    pub e: u32,
    pub f: u32,
    ring: Arc<StructuredRing>,
    chain: PowerChain,
    uniformizer: Elem,
}

impl PrimeAboveTwo {
    pub fn gens_mod2(&self) -> Vec<Elem> {
        self.ideal_mod2.canonical_basis().generators().collect()
    }

    /// The ring `O/(2^LIFT_EXP)`.
    pub fn ring(&self) -> &Arc<StructuredRing> {
        &self.ring
    }

    /// `p^1, …, p^(LIFT_EXP·e)`; the last power contains `(2^LIFT_EXP)`.
    pub fn chain(&self) -> &PowerChain {
        &self.chain
    }

    pub fn uniformizer(&self) -> Elem {
        self.uniformizer
    }

    pub fn valuation(&self, x: &Elem) -> Valuation {
        self.chain.valuation(x)
    }

    /// The same prime with another element of `p∖p²` as uniformizer.
    pub fn with_uniformizer(&self, tau: Elem) -> Result<PrimeAboveTwo, FactorError> {
        let tau = self.ring.lift(&tau);
        let v = self.valuation(&tau);
        if v != Valuation::Exact(1) {
            return Err(FactorError::NotUniformizer(tau, v));
        }
        Ok(PrimeAboveTwo {
            uniformizer: tau,
            ..self.clone()
        })
    }

    /// `log2 |O/p^j|`.
    pub fn log2_norm(&self, j: u32) -> u32 {
        j * self.f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    pub e: u32,
    pub f: u32,
    pub g: u32,
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub primes: Vec<PrimeAboveTwo>,
    /// Smallest `t` with `(∏ P_i)^t = 0` in `O/(2)`.
    pub nilpotency: u32,
}

impl Factorization {
    /// `(e, f, g)` when all primes share `e` and `f`.
    pub fn shape(&self) -> Option<Shape> {
        let first = self.primes.first()?;
        self.primes
            .iter()
            .all(|p| p.e == first.e && p.f == first.f)
            .then_some(Shape {
                e: first.e,
                f: first.f,
                g: self.primes.len() as u32,
            })
    }
}

/// All 67 subspaces of `F_2^4`, as Howell forms over `Z/2`.
fn subspaces_mod2() -> BTreeSet<HowellForm> {
    let zero = HowellForm::new(1, []);
    let mut found = BTreeSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(s) = frontier.pop() {
        for v in 1u32..16 {
            let vec = Elem([v & 1, (v >> 1) & 1, (v >> 2) & 1, (v >> 3) & 1]);
            if s.contains(&vec) {
                continue;
            }
            let bigger = HowellForm::new(1, s.generators().chain([vec]));
            if found.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    found
}

/// Ideals `I` of `O/(2)` with `O/(2)/I` a field.
pub fn maximal_ideals(ring_mod2: &Arc<StructuredRing>) -> Result<Vec<RingIdeal>, FactorError> {
    if ring_mod2.a_exp() != 1 {
        return Err(FactorError::NotModTwo(ring_mod2.a_exp()));
    }
    let subspaces = subspaces_mod2();
    debug_assert_eq!(subspaces.len(), 67);
    let mut out = Vec::new();
    for s in subspaces {
        let gens: Vec<Elem> = s.generators().collect();
        let ideal = ideal_from_gens(ring_mod2, &gens);
        if ideal.canonical_basis() != &s || ideal.is_whole_ring() {
            continue;
        }
        if quotient(ring_mod2, &ideal).is_field() {
            out.push(ideal);
        }
    }
    if out.is_empty() {
        return Err(FactorError::NoMaximalIdeal);
    }
    Ok(out)
}

/// Preimage in `O/(2^a)` of an ideal of `O/(2)`: the 0/1 generators read as
/// integers, together with `2·(ring basis)`.
fn lift_ideal(ideal_mod2: &RingIdeal, ring: &Arc<StructuredRing>) -> RingIdeal {
    let mut gens: Vec<Elem> = ideal_mod2
        .canonical_basis()
        .generators()
        .map(|g| ring.lift(&g))
        .collect();
    gens.extend((0..4).map(|i| ring.scale(&ring.basis(i), 2)));
    ideal_from_gens(ring, &gens)
}

fn first_uniformizer(ring: &StructuredRing, chain: &PowerChain) -> Result<Elem, FactorError> {
    let p = chain.power(1).expect("chain has p^1");
    let p2 = chain
        .power(2)
        .map_err(|e| FactorError::InconsistentFactorization(e.to_string()))?;
    ring.elements()
        .find(|x| p.contains(x) && !p2.contains(x))
        .ok_or_else(|| FactorError::InconsistentFactorization("p = p^2".into()))
}

/// Factors `(2)` in a rank-4 order given by exact structure constants.
/// The order only needs to be maximal at 2.
pub fn factor_order(structure: &Structure) -> Result<Factorization, FactorError> {
    let ring2 = Arc::new(structure_mod(structure, 1));
    let ring = Arc::new(structure_mod(structure, LIFT_EXP));
    let maximal = maximal_ideals(&ring2)?;

    let mut prod = RingIdeal::whole(&ring2);
    for m in &maximal {
        prod = ideal_product(&prod, m);
    }
    let mut nilpotency = 1;
    let mut acc = prod.clone();
    while !acc.is_zero() {
        nilpotency += 1;
        if nilpotency > 4 {
            return Err(FactorError::InconsistentFactorization(
                "product of maximal ideals is not nilpotent of index <= 4".into(),
            ));
        }
        acc = ideal_product(&acc, &prod);
    }

    let mut primes = Vec::with_capacity(maximal.len());
    for ideal_mod2 in maximal {
        let f = ideal_mod2.log2_index();
        let lifted = lift_ideal(&ideal_mod2, &ring);
        let chain = PowerChain::until_stable(&lifted);
        if !chain.len().is_multiple_of(LIFT_EXP) {
            return Err(FactorError::InconsistentFactorization(format!(
                "chain stabilizes at p^{}, not a multiple of {LIFT_EXP}",
                chain.len()
            )));
        }
        let e = chain.len() / LIFT_EXP;
        let uniformizer = first_uniformizer(&ring, &chain)?;
        primes.push(PrimeAboveTwo {
            ideal_mod2,
            e,
            f,
            ring: Arc::clone(&ring),
            chain,
            uniformizer,
        });
    }
    let degree: u32 = primes.iter().map(|p| p.e * p.f).sum();
    if degree != 4 {
        return Err(FactorError::InconsistentFactorization(format!(
            "sum of e*f is {degree}, expected 4"
        )));
    }
    let max_e = primes.iter().map(|p| p.e).max().unwrap_or(0);
    if max_e != nilpotency {
        return Err(FactorError::InconsistentFactorization(format!(
            "nilpotency {nilpotency} disagrees with largest ramification index {max_e}"
        )));
    }
    Ok(Factorization { primes, nilpotency })
}

/// `(2) = (p_1 ⋯ p_g)^e` in the ring of integers of a biquadratic field.
pub fn factor_two(field: &BiquadraticField) -> Result<Factorization, FactorError> {
    let basis = integral_basis(field)?;
    let fact = factor_order(&basis.structure)?;
    match fact.shape() {
        Some(s) if s.e * s.f * s.g == 4 => Ok(fact),
        _ => Err(FactorError::InconsistentFactorization(format!(
            "primes above 2 of {field} do not share (e, f)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::{make_field, IntegralBasis};

    fn ring2(m: i64, n: i64) -> Arc<StructuredRing> {
        let b = integral_basis(&make_field(m, n).unwrap()).unwrap();
        Arc::new(structure_mod(&b.structure, 1))
    }

    fn ideal(r: &Arc<StructuredRing>, gens: &[[u32; 4]]) -> RingIdeal {
        let gens: Vec<Elem> = gens.iter().map(|g| Elem(*g)).collect();
        ideal_from_gens(r, &gens)
    }

    #[test]
    fn sixty_seven_subspaces() {
        assert_eq!(subspaces_mod2().len(), 67);
    }

    #[test]
    fn four_split_maximal_ideals() {
        let r = ring2(17, 33);
        let found = maximal_ideals(&r).unwrap();
        // A = (z,y,x), B = (z,y,x+1), C = (z,y+1,x), D = (z+1,y+1,x+1)
        let expected = [
            ideal(&r, &[[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]]),
            ideal(&r, &[[0, 0, 0, 1], [0, 0, 1, 0], [1, 1, 0, 0]]),
            ideal(&r, &[[0, 0, 0, 1], [1, 0, 1, 0], [0, 1, 0, 0]]),
            ideal(&r, &[[1, 0, 0, 1], [1, 0, 1, 0], [1, 1, 0, 0]]),
        ];
        assert_eq!(found.len(), 4);
        for e in &expected {
            assert!(found.contains(e));
        }
        let mut prod = RingIdeal::whole(&r);
        for m in &found {
            prod = ideal_product(&prod, m);
        }
        assert!(prod.is_zero());
    }

    #[test]
    fn totally_ramified_single_prime() {
        let r = ring2(-2, -6);
        let found = maximal_ideals(&r).unwrap();
        assert_eq!(
            found,
            vec![ideal(&r, &[[1, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 1]])]
        );
        assert_eq!(quotient(&r, &found[0]).size(), 2);
    }

    #[test]
    fn ramified_with_inertia_two() {
        // Q(√5, √3): m = 5, n ≡ k ≡ 3 (mod 4), J = (y+1, x+z)
        let f = make_field(5, 3).unwrap();
        assert_eq!(f.roles.m, 5);
        let r = ring2(5, 3);
        let found = maximal_ideals(&r).unwrap();
        assert_eq!(found, vec![ideal(&r, &[[1, 0, 1, 0], [0, 1, 0, 1]])]);
        let q = quotient(&r, &found[0]);
        assert_eq!(q.size(), 4);
        assert!(q.is_field());
    }

    #[test]
    fn shapes() {
        let shape = |m, n| {
            factor_two(&make_field(m, n).unwrap())
                .unwrap()
                .shape()
                .unwrap()
        };
        assert_eq!(shape(17, 33), Shape { e: 1, f: 1, g: 4 });
        assert_eq!(shape(-2, -6), Shape { e: 4, f: 1, g: 1 });
        assert_eq!(shape(5, 3), Shape { e: 2, f: 2, g: 1 });
        assert_eq!(shape(17, 2), Shape { e: 2, f: 1, g: 2 });
    }

    #[test]
    fn uniformizers_have_valuation_one() {
        let fact = factor_two(&make_field(-2, -6).unwrap()).unwrap();
        let p = &fact.primes[0];
        assert_eq!(p.valuation(&p.uniformizer()), Valuation::Exact(1));
        assert_eq!(p.chain().len(), 4 * LIFT_EXP);
        let alt = p.ring().add(&p.uniformizer(), &p.ring().from_int(2));
        let q = p.with_uniformizer(alt).unwrap();
        assert_eq!(q.valuation(&q.uniformizer()), Valuation::Exact(1));
        assert!(p.with_uniformizer(p.ring().from_int(2)).is_err());
    }

    #[test]
    fn non_galois_orders() {
        // x⁴ + x³ + 2 ≡ x³(x+1): (2) = p³q
        let fact = factor_order(&IntegralBasis::monogenic([2, 0, 0, 1]).structure).unwrap();
        let mut ef: Vec<(u32, u32)> = fact.primes.iter().map(|p| (p.e, p.f)).collect();
        ef.sort();
        assert_eq!(ef, vec![(1, 1), (3, 1)]);
        assert!(fact.shape().is_none());
        // x⁴ + x³ + x² + 1 ≡ (x+1)(x³+x+1)
        let fact = factor_order(&IntegralBasis::monogenic([1, 0, 1, 1]).structure).unwrap();
        let mut ef: Vec<(u32, u32)> = fact.primes.iter().map(|p| (p.e, p.f)).collect();
        ef.sort();
        assert_eq!(ef, vec![(1, 1), (1, 3)]);
    }

    #[test]
    fn rejects_wrong_modulus() {
        let b = integral_basis(&make_field(5, 3).unwrap()).unwrap();
        let r = Arc::new(structure_mod(&b.structure, 2));
        assert_eq!(maximal_ideals(&r), Err(FactorError::NotModTwo(2)));
    }
}
