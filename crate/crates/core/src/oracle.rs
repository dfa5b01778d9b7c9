//! Brute-force fourth levels of the finite rings `O/p^N`.
//!
//! Fourth powers are enumerated over every class of `O/p^N`; sums of `g`
//! fourth powers are grown breadth-first in a bitset indexed by the coset
//! rank until `-1` is reached.

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::factor2::{factor_two, FactorError, PrimeAboveTwo};
use crate::finring::{quotient, Elem, QuotientRing};
use crate::level::TauPoly;
use crate::numberfield::{integral_basis, make_field, FieldError, Structure};

/// Upper bound for finite fourth levels of number fields.
pub const SUM_CAP: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("-1 is not a sum of {SUM_CAP} fourth powers modulo p^{0}")]
    CapExceeded(u32),
    #[error("p^{requested} is beyond the precomputed chain (length {len})")]
    ChainTooShort { requested: u32, len: u32 },
    #[error("representation check failed: {0}")]
    BadRepresentation(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

/// The set `{x⁴ mod p^N}`.
#[derive(Clone, Debug)]
pub struct PowerResidueSet {
    pub modulus_exponent: u32,
    quotient: QuotientRing,
    /// Membership by coset rank.
    residues: FixedBitSet,
    /// Distinct residues in rank order, each with one fourth root.
    listed: Vec<(u64, Elem)>,
    /// Ranks of residues of units (`x ∉ p`).
    unit_residues: FixedBitSet,
}

impl PowerResidueSet {
    pub fn quotient(&self) -> &QuotientRing {
        &self.quotient
    }

    pub fn len(&self) -> usize {
        self.listed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.listed.is_empty()
    }

    pub fn contains(&self, x: &Elem) -> bool {
        self.residues.contains(self.quotient.rank_of(x) as usize)
    }

    pub fn contains_unit_residue(&self, x: &Elem) -> bool {
        self.unit_residues
            .contains(self.quotient.rank_of(x) as usize)
    }

    /// Canonical residues, rank order.
    pub fn residues(&self) -> impl Iterator<Item = Elem> + '_ {
        self.listed.iter().map(|(r, _)| self.quotient.unrank(*r))
    }

    /// A fourth root of the residue with the given rank.
    pub fn root_of(&self, rank: u64) -> Option<Elem> {
        self.listed
            .binary_search_by_key(&rank, |(r, _)| *r)
            .ok()
            .map(|i| self.listed[i].1)
    }
}

pub fn fourth_powers(prime: &PrimeAboveTwo, n_exp: u32) -> Result<PowerResidueSet, OracleError> {
    let len = prime.chain().len();
    if n_exp == 0 || n_exp > len {
        return Err(OracleError::ChainTooShort {
            requested: n_exp,
            len,
        });
    }
    let ring = prime.ring();
    let modulus = prime.chain().power(n_exp).expect("checked above");
    let q = quotient(ring, modulus);
    let p = prime.chain().power(1).expect("chain has p^1");
    let size = q.size() as usize;
    let mut residues = FixedBitSet::with_capacity(size);
    let mut unit_residues = FixedBitSet::with_capacity(size);
    let mut roots: Vec<Option<Elem>> = vec![None; size];
    for x in q.elements() {
        let r = q.rank_of(&ring.fourth_power(&x)) as usize;
        residues.insert(r);
        if !p.contains(&x) {
            unit_residues.insert(r);
        }
        roots[r].get_or_insert(x);
    }
    let listed = roots
        .into_iter()
        .enumerate()
        .filter_map(|(r, x)| x.map(|x| (r as u64, x)))
        .collect();
    Ok(PowerResidueSet {
        modulus_exponent: n_exp,
        quotient: q,
        residues,
        listed,
        unit_residues,
    })
}

/// Sums of fourth powers, grown one summand at a time.  `level[r]` is the
/// least `g` with class `r ∈ S_g`, `via[r]` the residue added last.
pub struct SumsetLadder<'a> {
    powers: &'a PowerResidueSet,
    level: Vec<u8>,
    via: Vec<u32>,
    sizes: Vec<usize>,
}

impl<'a> SumsetLadder<'a> {
    pub fn new(powers: &'a PowerResidueSet) -> SumsetLadder<'a> {
        let size = powers.quotient.size() as usize;
        let mut level = vec![0u8; size];
        let mut via = vec![0u32; size];
        for (i, (r, _)) in powers.listed.iter().enumerate() {
            level[*r as usize] = 1;
            via[*r as usize] = i as u32;
        }
        SumsetLadder {
            powers,
            level,
            via,
            sizes: vec![powers.len()],
        }
    }

    /// Number of completed levels `S_1 … S_g`.
    pub fn depth(&self) -> u32 {
        self.sizes.len() as u32
    }

    /// `|S_1|, |S_2|, …`
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn contains(&self, g: u32, x: &Elem) -> bool {
        let l = self.level[self.powers.quotient.rank_of(x) as usize];
        l != 0 && l as u32 <= g
    }

    /// `S_(g+1) = S_g + residues`, extending only the newest frontier.
    pub fn grow(&mut self) {
        let q = &self.powers.quotient;
        let g = self.depth() as u8;
        let frontier: Vec<usize> = (0..self.level.len())
            .filter(|&r| self.level[r] == g)
            .collect();
        let mut added = 0;
        for r in frontier {
            let x = q.unrank(r as u64);
            for (i, (_, _)) in self.powers.listed.iter().enumerate() {
                let y = q.add(&x, &q.unrank(self.powers.listed[i].0));
                let ry = q.rank(&y) as usize;
                if self.level[ry] == 0 {
                    self.level[ry] = g + 1;
                    self.via[ry] = i as u32;
                    added += 1;
                }
            }
        }
        let last = *self.sizes.last().expect("nonempty");
        self.sizes.push(last + added);
    }

    /// Summands `x_1, …, x_g` (as fourth roots) whose fourth powers sum to
    /// the class of `x`, with `g` the ladder level of `x`.
    pub fn representation(&self, x: &Elem) -> Option<Vec<Elem>> {
        let q = &self.powers.quotient;
        let mut rank = q.rank_of(x) as usize;
        if self.level[rank] == 0 {
            return None;
        }
        let mut out = Vec::new();
        loop {
            let l = self.level[rank];
            let (res_rank, root) = self.powers.listed[self.via[rank] as usize];
            out.push(root);
            if l == 1 {
                break;
            }
            let rest = q.sub(&q.unrank(rank as u64), &q.unrank(res_rank));
            rank = q.rank(&rest) as usize;
        }
        Some(out)
    }
}

/// Minimal representation of `-1` as a sum of fourth powers in `O/p^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinusOneRepresentation {
    pub modulus_exponent: u32,
    pub summands: Vec<Elem>,
}

impl MinusOneRepresentation {
    pub fn level(&self) -> u32 {
        self.summands.len() as u32
    }
}

pub fn minimal_representation(
    powers: &PowerResidueSet,
) -> Result<MinusOneRepresentation, OracleError> {
    let q = &powers.quotient;
    let ring = q.parent();
    let target = q.reduce(&ring.neg(&ring.one()));
    let mut ladder = SumsetLadder::new(powers);
    loop {
        let g = ladder.depth();
        if ladder.contains(g, &target) {
            let summands = ladder.representation(&target).expect("reached");
            return Ok(MinusOneRepresentation {
                modulus_exponent: powers.modulus_exponent,
                summands,
            });
        }
        // -1 ∈ S_(g+1) iff -1 - r ∈ S_g for some residue r
        for (_, root) in &powers.listed {
            let rest = q.sub(&target, &ring.fourth_power(root));
            if ladder.contains(g, &rest) {
                let mut summands = ladder.representation(&rest).expect("reached");
                summands.push(*root);
                return Ok(MinusOneRepresentation {
                    modulus_exponent: powers.modulus_exponent,
                    summands,
                });
            }
        }
        if g + 1 >= SUM_CAP {
            return Err(OracleError::CapExceeded(powers.modulus_exponent));
        }
        ladder.grow();
    }
}

pub fn min_sum_to_minus_one(powers: &PowerResidueSet) -> Result<u32, OracleError> {
    minimal_representation(powers).map(|r| r.level())
}

/// `s₄(O/p^N)` with a checked certificate: the summands' fourth powers
/// sum to `-1` mod `p^N` and at least one summand is a unit.
pub fn level_at(prime: &PrimeAboveTwo, n_exp: u32) -> Result<MinusOneRepresentation, OracleError> {
    let powers = fourth_powers(prime, n_exp)?;
    let rep = minimal_representation(&powers)?;
    verify_representation(prime, &rep)?;
    Ok(rep)
}

pub fn verify_representation(
    prime: &PrimeAboveTwo,
    rep: &MinusOneRepresentation,
) -> Result<(), OracleError> {
    let ring = prime.ring();
    let modulus = prime
        .chain()
        .power(rep.modulus_exponent)
        .map_err(|e| OracleError::BadRepresentation(e.to_string()))?;
    let total = rep
        .summands
        .iter()
        .fold(ring.one(), |acc, x| ring.add(&acc, &ring.fourth_power(x)));
    if !modulus.contains(&total) {
        return Err(OracleError::BadRepresentation(
            "fourth powers do not sum to -1".into(),
        ));
    }
    let p = prime.chain().power(1).expect("chain has p^1");
    if rep.summands.iter().all(|x| p.contains(x)) {
        return Err(OracleError::BadRepresentation("no unit summand".into()));
    }
    Ok(())
}

/// Levels modulo `p^(3e+1)` and `p^(4e+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HenselComparison {
    pub short: u32,
    pub full: u32,
}

impl HenselComparison {
    pub fn agree(&self) -> bool {
        self.short == self.full
    }
}

pub fn hensel_comparison(prime: &PrimeAboveTwo) -> Result<HenselComparison, OracleError> {
    let e = prime.e;
    Ok(HenselComparison {
        short: level_at(prime, 3 * e + 1)?.level(),
        full: level_at(prime, 4 * e + 1)?.level(),
    })
}

pub fn hensel_modulus_equivalence(prime: &PrimeAboveTwo) -> Result<bool, OracleError> {
    hensel_comparison(prime).map(|c| c.agree())
}

/// Checks `x ≡ y (mod p^e) ⟹ x⁴ ≡ y⁴ (mod p^(3e+1))` over all pairs of
/// classes mod `p^(3e+1)`.
pub fn fourth_power_congruence_check(prime: &PrimeAboveTwo) -> Result<bool, OracleError> {
    let e = prime.e;
    let top = 3 * e + 1;
    let len = prime.chain().len();
    if top > len {
        return Err(OracleError::ChainTooShort {
            requested: top,
            len,
        });
    }
    let ring = prime.ring();
    let q = quotient(ring, prime.chain().power(top).expect("checked"));
    let pe = prime.chain().power(e).expect("e <= chain");
    let steps: Vec<Elem> = q.elements().filter(|t| pe.contains(t)).collect();
    let fourth: Vec<Elem> = q
        .elements()
        .map(|x| q.reduce(&ring.fourth_power(&x)))
        .collect();
    for x in q.elements() {
        let x4 = fourth[q.rank(&x) as usize];
        for step in &steps {
            let y = q.add(&x, step);
            if fourth[q.rank(&y) as usize] != x4 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The four terms of the identity
/// `((√-2+√-6)/2)⁴ + ((√-2-√-6)/2)⁴ + (√-2+1)⁴ + (√-2-1)⁴ = 0`
/// in integral-basis coordinates of `Q(√-2, √-6)`.
pub fn witness_terms() -> Result<(Structure, [[i128; 4]; 4]), OracleError> {
    use num_rational::Ratio;
    let field = make_field(-2, -6)?;
    let basis = integral_basis(&field)?;
    let slot = |value: i64| -> usize {
        let r = field.roles;
        [r.m, r.n, r.k]
            .iter()
            .position(|&v| v == value)
            .expect("radicand present")
            + 1
    };
    let (s2, s6) = (slot(-2), slot(-6));
    let make = |c0: i128, c2: Ratio<i128>, c6: Ratio<i128>| {
        let mut q = [Ratio::from(0); 4];
        q[0] = Ratio::from(c0);
        q[s2] = c2;
        q[s6] = c6;
        let coords = basis.coordinates_of(&q).expect("integral element");
        coords.map(|c| c as i128)
    };
    let half = Ratio::new(1, 2);
    let one = Ratio::from(1);
    let zero = Ratio::from(0);
    Ok((
        basis.structure,
        [
            make(0, half, half),
            make(0, half, -half),
            make(1, one, zero),
            make(-1, one, zero),
        ],
    ))
}

/// Exact sum of fourth powers of `terms` in the order.
pub fn fourth_power_sum(structure: &Structure, terms: &[[i128; 4]]) -> [i128; 4] {
    terms.iter().fold([0; 4], |acc, t| {
        let p = structure.pow(t, 4);
        [acc[0] + p[0], acc[1] + p[1], acc[2] + p[2], acc[3] + p[3]]
    })
}

/// Whether the identity above sums to the zero vector exactly.
pub fn witness_identity() -> Result<bool, OracleError> {
    let (structure, terms) = witness_terms()?;
    Ok(fourth_power_sum(&structure, &terms) == [0; 4])
}

/// The exact witness sum reduced modulo `p^13` at the prime above 2 of
/// `Q(√-2, √-6)`.
pub fn witness_sum_mod_p13() -> Result<bool, OracleError> {
    let (structure, terms) = witness_terms()?;
    let sum = fourth_power_sum(&structure, &terms);
    let fact = factor_two(&make_field(-2, -6)?)?;
    let prime = &fact.primes[0];
    let x = prime.ring().from_coords_i128(sum);
    let p13 = prime
        .chain()
        .power(13)
        .map_err(|e| OracleError::BadRepresentation(e.to_string()))?;
    Ok(p13.contains(&x))
}

/// `Σ c·τ^e` as `(c, e)` pairs.
type Terms = &'static [(i64, usize)];

/// Class representatives mod `p⁴` (e = 4, f = 1) in the order units,
/// `p ∥ x`, `p² ∥ x`, `p³ ∥ x`.
const BASES: [Terms; 15] = [
    &[(1, 0)],
    &[(1, 1), (1, 0)],
    &[(1, 2), (1, 0)],
    &[(1, 3), (1, 0)],
    &[(1, 1), (1, 2), (1, 0)],
    &[(1, 1), (1, 3), (1, 0)],
    &[(1, 2), (1, 3), (1, 0)],
    &[(1, 1), (1, 2), (1, 3), (1, 0)],
    &[(1, 1)],
    &[(1, 1), (1, 2)],
    &[(1, 1), (1, 3)],
    &[(1, 1), (1, 2), (1, 3)],
    &[(1, 2)],
    &[(1, 2), (1, 3)],
    &[(1, 3)],
];

/// Expected fourth powers of `BASES[..12]` modulo `p⁸`.
const MOD_P8: [Terms; 12] = [
    &[(1, 0)],
    &[(1, 4), (2, 2), (1, 0)],
    &[(1, 0)],
    &[(1, 0)],
    &[(1, 4), (2, 2), (1, 0)],
    &[(1, 4), (2, 2), (1, 0)],
    &[(1, 0)],
    &[(1, 4), (2, 2), (1, 0)],
    &[(1, 4)],
    &[(1, 4)],
    &[(1, 4)],
    &[(1, 4)],
];

/// Expected fourth powers of `BASES` modulo `p¹³`.
const MOD_P13: [Terms; 15] = [
    &[(1, 0)],
    &[(1, 4), (4, 3), (6, 2), (4, 1), (1, 0)],
    &[(1, 8), (6, 4), (4, 2), (1, 0)],
    &[(1, 12), (2, 6), (4, 3), (1, 0)],
    &[(1, 8), (2, 6), (3, 4), (2, 2), (4, 1), (1, 0)],
    &[(1, 12), (2, 6), (1, 4), (6, 2), (4, 1), (1, 0)],
    &[(1, 8), (2, 6), (2, 4), (4, 3), (4, 2), (1, 0)],
    &[(1, 12), (1, 8), (3, 4), (4, 3), (2, 2), (4, 1), (1, 0)],
    &[(1, 4)],
    &[(1, 8), (2, 6), (1, 4)],
    &[(1, 4)],
    &[(1, 8), (2, 6), (1, 4)],
    &[(1, 8)],
    &[(1, 12), (1, 8)],
    &[(1, 12)],
];

/// One line `base⁴ ≡ expected (mod p^N)` of a symbolic fourth-power table.
#[derive(Debug, Clone)]
pub struct PowerTableLine {
    pub base: TauPoly,
    pub expected: TauPoly,
    pub modulus_exponent: u32,
    pub holds: bool,
}

/// Checks the symbolic fourth-power table modulo `p⁸` (`n_exp = 8`) or
/// `p¹³` (`n_exp = 13`) at the prime's uniformizer.  Requires `e = 4, f = 1`.
pub fn fourth_power_table(
    prime: &PrimeAboveTwo,
    n_exp: u32,
) -> Result<Vec<PowerTableLine>, OracleError> {
    let expected: &[Terms] = match n_exp {
        8 => &MOD_P8,
        13 => &MOD_P13,
        _ => {
            return Err(OracleError::BadRepresentation(format!(
                "no fourth-power table modulo p^{n_exp}"
            )))
        }
    };
    let modulus = prime
        .chain()
        .power(n_exp)
        .map_err(|e| OracleError::ChainTooShort {
            requested: e.requested,
            len: e.len,
        })?;
    let ring = prime.ring();
    let tau = prime.uniformizer();
    Ok(BASES
        .iter()
        .zip(expected)
        .map(|(base, exp)| {
            let base = TauPoly::from_terms(base);
            let expected = TauPoly::from_terms(exp);
            let lhs = ring.fourth_power(&base.eval(ring, &tau));
            let rhs = expected.eval(ring, &tau);
            PowerTableLine {
                holds: modulus.contains(&ring.sub(&lhs, &rhs)),
                base,
                expected,
                modulus_exponent: n_exp,
            }
        })
        .collect())
}

/// The nonzero fourth-power classes mod `p⁸` compared with
/// `{1, τ⁴, τ⁴ + 2τ² + 1}`: `(computed, expected)` as sorted coset ranks.
pub fn nonzero_residues_mod_p8(prime: &PrimeAboveTwo) -> Result<(Vec<u64>, Vec<u64>), OracleError> {
    let powers = fourth_powers(prime, 8)?;
    let q = powers.quotient();
    let ring = prime.ring();
    let tau = prime.uniformizer();
    let computed: Vec<u64> = powers
        .residues()
        .filter(|x| !q.is_zero(x))
        .map(|x| q.rank(&x))
        .collect();
    let mut expected: Vec<u64> = [&[(1, 0)][..], &[(1, 4)], &[(1, 4), (2, 2), (1, 0)]]
        .iter()
        .map(|t| q.rank_of(&TauPoly::from_terms(t).eval(ring, &tau)))
        .collect();
    expected.sort_unstable();
    expected.dedup();
    Ok((computed, expected))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prime(m: i64, n: i64) -> PrimeAboveTwo {
        factor_two(&make_field(m, n).unwrap()).unwrap().primes[0].clone()
    }

    #[test]
    fn residues_mod_two_to_the_fifth() {
        // e = f = 1: O/p^5 ≅ Z/32
        let p = prime(17, 33);
        let pw = fourth_powers(&p, 5).unwrap();
        assert_eq!(pw.quotient().size(), 32);
        let ring = p.ring();
        let mut ints: Vec<i64> = (0..32)
            .filter(|&c| pw.contains(&ring.from_int(c)))
            .collect();
        ints.sort();
        assert_eq!(ints, vec![0, 1, 16, 17]);
        assert_eq!(pw.len(), 4);
        assert_eq!(min_sum_to_minus_one(&pw).unwrap(), 15);
    }

    #[test]
    fn residue_field_only() {
        let p = prime(-2, -6);
        let pw = fourth_powers(&p, 1).unwrap();
        assert_eq!(pw.len(), 2);
    }

    #[test]
    fn minus_one_already_a_fourth_power() {
        // e = f = 1, N = 1: -1 ≡ 1
        let p = prime(17, 33);
        let pw = fourth_powers(&p, 1).unwrap();
        assert_eq!(min_sum_to_minus_one(&pw).unwrap(), 1);
    }

    #[test]
    fn minus_two_minus_six_level_three() {
        let p = prime(-2, -6);
        let rep = level_at(&p, 13).unwrap();
        assert_eq!(rep.level(), 3);
        let cmp = hensel_comparison(&p).unwrap();
        assert_eq!(cmp, HenselComparison { short: 3, full: 3 });
    }

    #[test]
    fn hensel_small_cases() {
        assert_eq!(
            hensel_comparison(&prime(17, 33)).unwrap(),
            HenselComparison {
                short: 15,
                full: 15
            }
        );
        assert_eq!(
            hensel_comparison(&prime(5, 3)).unwrap(),
            HenselComparison { short: 2, full: 2 }
        );
    }

    #[test]
    fn ladder_is_monotone() {
        let p = prime(17, 2);
        let pw = fourth_powers(&p, 9).unwrap();
        let mut ladder = SumsetLadder::new(&pw);
        for _ in 0..6 {
            ladder.grow();
        }
        let sizes = ladder.sizes();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        assert!(*sizes.last().unwrap() as u64 <= pw.quotient().size());
    }

    #[test]
    fn congruence_lifts_small() {
        assert!(fourth_power_congruence_check(&prime(17, 2)).unwrap());
    }

    #[test]
    fn witness() {
        assert!(witness_identity().unwrap());
        let (s, mut terms) = witness_terms().unwrap();
        // (√-2 + 1) → (√-2 + 3)
        terms[2][0] = 3;
        assert_ne!(fourth_power_sum(&s, &terms), [0; 4]);
        assert!(witness_sum_mod_p13().unwrap());
    }

    #[test]
    fn chain_bounds() {
        let p = prime(-2, -6);
        assert!(matches!(
            fourth_powers(&p, 21),
            Err(OracleError::ChainTooShort { .. })
        ));
    }
}
