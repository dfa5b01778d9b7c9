use std::sync::Arc;

use super::{Elem, RingIdeal, StructuredRing};

/// `R/I` with canonical coset representatives.  Representatives are the
/// vectors reduced against the Howell form of `I`; they are ranked in
/// mixed radix so sets of residues can live in bitsets.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    parent: Arc<StructuredRing>,
    modulus_ideal: RingIdeal,
    bits: [u32; 4],
}

pub fn quotient(ring: &Arc<StructuredRing>, ideal: &RingIdeal) -> QuotientRing {
    QuotientRing {
        parent: Arc::clone(ring),
        modulus_ideal: ideal.clone(),
        bits: ideal.canonical_basis().residue_bits(),
    }
}

impl QuotientRing {
    pub fn parent(&self) -> &Arc<StructuredRing> {
        &self.parent
    }

    pub fn modulus_ideal(&self) -> &RingIdeal {
        &self.modulus_ideal
    }

    pub fn log2_size(&self) -> u32 {
        self.bits.iter().sum()
    }

    pub fn size(&self) -> u64 {
        1u64 << self.log2_size()
    }

    pub fn reduce(&self, x: &Elem) -> Elem {
        self.modulus_ideal.canonical_basis().reduce(x)
    }

    pub fn is_zero(&self, x: &Elem) -> bool {
        self.modulus_ideal.contains(x)
    }

    pub fn add(&self, x: &Elem, y: &Elem) -> Elem {
        self.reduce(&self.parent.add(x, y))
    }

    pub fn sub(&self, x: &Elem, y: &Elem) -> Elem {
        self.reduce(&self.parent.sub(x, y))
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        self.reduce(&self.parent.mul(x, y))
    }

    /// Rank of a reduced representative.
    pub fn rank(&self, x: &Elem) -> u64 {
        let mut r = 0u64;
        for i in (0..4).rev() {
            r = (r << self.bits[i]) | x.0[i] as u64;
        }
        r
    }

    pub fn unrank(&self, mut r: u64) -> Elem {
        let mut out = [0u32; 4];
        for (o, &b) in out.iter_mut().zip(self.bits.iter()) {
            *o = (r & ((1u64 << b) - 1)) as u32;
            r >>= b;
        }
        Elem(out)
    }

    pub fn rank_of(&self, x: &Elem) -> u64 {
        self.rank(&self.reduce(x))
    }

    /// All coset representatives in rank order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.size()).map(move |r| self.unrank(r))
    }

    /// Whether every nonzero class has a multiplicative inverse (and the
    /// quotient is nonzero).
    pub fn is_field(&self) -> bool {
        if self.size() < 2 {
            return false;
        }
        let one = self.reduce(&self.parent.one());
        self.elements()
            .filter(|x| !x.is_zero())
            .all(|x| self.elements().any(|y| self.mul(&x, &y) == one))
    }
}
