use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::{Elem, HowellForm, StructuredRing};

/// An ideal, stored as the Howell form of its additive group.  Equality
/// compares canonical bases only.
#[derive(Clone)]
pub struct RingIdeal {
    ring: Arc<StructuredRing>,
    gens: Vec<Elem>,
    basis: HowellForm,
}

impl PartialEq for RingIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl Eq for RingIdeal {}

impl fmt::Debug for RingIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingIdeal")
            .field("gens", &self.gens)
            .field("log2_size", &self.basis.log2_size())
            .finish()
    }
}

impl RingIdeal {
    pub fn ring(&self) -> &Arc<StructuredRing> {
        &self.ring
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    pub fn canonical_basis(&self) -> &HowellForm {
        &self.basis
    }

    pub fn contains(&self, x: &Elem) -> bool {
        self.basis.contains(x)
    }

    pub fn log2_size(&self) -> u32 {
        self.basis.log2_size()
    }

    /// `log2` of the index in the ambient ring.
    pub fn log2_index(&self) -> u32 {
        self.ring.log2_size() - self.basis.log2_size()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_zero()
    }

    pub fn is_whole_ring(&self) -> bool {
        self.log2_index() == 0
    }

    pub fn is_subset_of(&self, other: &RingIdeal) -> bool {
        self.basis.generators().all(|g| other.contains(&g))
    }

    pub fn whole(ring: &Arc<StructuredRing>) -> RingIdeal {
        ideal_from_gens(ring, &[ring.one()])
    }

    pub fn zero(ring: &Arc<StructuredRing>) -> RingIdeal {
        ideal_from_gens(ring, &[])
    }
}

/// Smallest ideal containing `gens`: close the additive span under
/// multiplication by the ring basis until the Howell form stops changing.
pub fn ideal_from_gens(ring: &Arc<StructuredRing>, gens: &[Elem]) -> RingIdeal {
    let a = ring.a_exp();
    let mut basis = HowellForm::new(a, gens.iter().copied());
    loop {
        let mut all: Vec<Elem> = basis.generators().collect();
        for g in basis.generators() {
            for i in 1..4 {
                all.push(ring.mul(&g, &ring.basis(i)));
            }
        }
        let next = HowellForm::new(a, all);
        if next == basis {
            break;
        }
        basis = next;
    }
    RingIdeal {
        ring: Arc::clone(ring),
        gens: gens.to_vec(),
        basis,
    }
}

pub fn ideal_product(x: &RingIdeal, y: &RingIdeal) -> RingIdeal {
    assert!(
        Arc::ptr_eq(&x.ring, &y.ring) || x.ring == y.ring,
        "ideals must live in the same ring"
    );
    let ring = &x.ring;
    let mut prods = Vec::new();
    for g in x.basis.generators() {
        for h in y.basis.generators() {
            let p = ring.mul(&g, &h);
            if !p.is_zero() {
                prods.push(p);
            }
        }
    }
    ideal_from_gens(ring, &prods)
}

/// `I^t`, with `I^0` the whole ring.
pub fn ideal_power(ideal: &RingIdeal, t: u32) -> RingIdeal {
    let mut acc = RingIdeal::whole(&ideal.ring);
    for _ in 0..t {
        acc = ideal_product(&acc, ideal);
    }
    acc
}

/// A valuation read off a finite chain of ideal powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Exact(u32),
    /// The element lies in the deepest power of the chain.
    AtLeast(u32),
}

impl Valuation {
    /// Whether the valuation is known to be `≥ j`.
    pub fn at_least(self, j: u32) -> bool {
        match self {
            Valuation::Exact(v) => v >= j,
            Valuation::AtLeast(v) => v >= j,
        }
    }

    /// Whether the valuation is exactly `j` (false if only a lower bound
    /// is known).
    pub fn is_exactly(self, j: u32) -> bool {
        self == Valuation::Exact(j)
    }

    /// Lower bound carried by the value.
    pub fn floor(self) -> u32 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("power p^{requested} requested but the chain stops at p^{len}")]
pub struct ChainTooShort {
    pub requested: u32,
    pub len: u32,
}

/// Precomputed powers `p^1, …, p^N` of one ideal.
#[derive(Clone, Debug)]
pub struct PowerChain {
    powers: Vec<RingIdeal>,
}

impl PowerChain {
    /// Powers `p^1..p^len`.
    pub fn new(p: &RingIdeal, len: u32) -> PowerChain {
        let mut powers = Vec::with_capacity(len as usize);
        let mut acc = p.clone();
        for _ in 0..len {
            let next = ideal_product(&acc, p);
            powers.push(acc);
            acc = next;
        }
        PowerChain { powers }
    }

    /// Powers `p^1..p^L` where `p^L = p^(L+1)` is the first repeat.
    pub fn until_stable(p: &RingIdeal) -> PowerChain {
        let mut powers = vec![p.clone()];
        loop {
            let last = powers.last().expect("nonempty");
            let next = ideal_product(last, p);
            if &next == last {
                return PowerChain { powers };
            }
            powers.push(next);
        }
    }

    pub fn len(&self) -> u32 {
        self.powers.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }

    /// `p^j` for `1 ≤ j ≤ len`.
    pub fn power(&self, j: u32) -> Result<&RingIdeal, ChainTooShort> {
        if j == 0 || j > self.len() {
            return Err(ChainTooShort {
                requested: j,
                len: self.len(),
            });
        }
        Ok(&self.powers[j as usize - 1])
    }

    pub fn in_power(&self, x: &Elem, j: u32) -> Result<bool, ChainTooShort> {
        if j == 0 {
            return Ok(true);
        }
        Ok(self.power(j)?.contains(x))
    }

    pub fn valuation(&self, x: &Elem) -> Valuation {
        // the chain is descending, so membership is monotone in j
        let n = self.len();
        let (mut lo, mut hi) = (0u32, n); // x ∈ p^lo, answer in [lo, hi]
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if self.powers[mid as usize - 1].contains(x) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        if lo == n {
            Valuation::AtLeast(n)
        } else {
            Valuation::Exact(lo)
        }
    }
}
