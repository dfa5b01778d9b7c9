//! Rank-4 commutative algebras over `Z/2^a`, their ideals and quotients.

mod howell;
mod ideal;
mod quotient;

use std::fmt;

pub use howell::{HowellForm, PivotRow};
pub use ideal::{ideal_from_gens, ideal_power, ideal_product, PowerChain, RingIdeal, Valuation};
pub use quotient::{quotient, QuotientRing};

use crate::numberfield::Structure;

/// A ring element: coordinates over the ring basis, each masked to
/// `a_exp` bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(pub [u32; 4]);

impl Elem {
    pub const ZERO: Elem = Elem([0; 4]);

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// `O/(2^a)` for a rank-4 order `O`, presented by structure constants
/// reduced mod `2^a`.  Arithmetic wraps in `u32` and is masked, so
/// `a_exp ≤ 16` keeps every intermediate exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredRing {
    a_exp: u32,
    mask: u32,
    table: [[[u32; 4]; 4]; 4],
}

/// Reduction of exact structure constants modulo `2^a_exp`.
pub fn structure_mod(structure: &Structure, a_exp: u32) -> StructuredRing {
    assert!((1..=16).contains(&a_exp), "a_exp must be in 1..=16");
    let modulus = 1i64 << a_exp;
    let mut table = [[[0u32; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for h in 0..4 {
                table[i][j][h] = structure.0[i][j][h].rem_euclid(modulus) as u32;
            }
        }
    }
    StructuredRing {
        a_exp,
        mask: (1u32 << a_exp) - 1,
        table,
    }
}

impl StructuredRing {
    pub fn a_exp(&self) -> u32 {
        self.a_exp
    }

    pub fn modulus(&self) -> u64 {
        1u64 << self.a_exp
    }

    /// `log2` of the number of elements.
    pub fn log2_size(&self) -> u32 {
        4 * self.a_exp
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem([1, 0, 0, 0])
    }

    pub fn basis(&self, i: usize) -> Elem {
        let mut e = [0; 4];
        e[i] = 1;
        Elem(e)
    }

    pub fn from_int(&self, c: i64) -> Elem {
        Elem([(c.rem_euclid(self.modulus() as i64)) as u32, 0, 0, 0])
    }

    pub fn from_coords(&self, c: [i64; 4]) -> Elem {
        let m = self.modulus() as i64;
        Elem(c.map(|x| x.rem_euclid(m) as u32))
    }

    pub fn from_coords_i128(&self, c: [i128; 4]) -> Elem {
        let m = self.modulus() as i128;
        Elem(c.map(|x| x.rem_euclid(m) as u32))
    }

    pub fn add(&self, x: &Elem, y: &Elem) -> Elem {
        let mut out = [0; 4];
        for i in 0..4 {
            out[i] = x.0[i].wrapping_add(y.0[i]) & self.mask;
        }
        Elem(out)
    }

    pub fn sub(&self, x: &Elem, y: &Elem) -> Elem {
        let mut out = [0; 4];
        for i in 0..4 {
            out[i] = x.0[i].wrapping_sub(y.0[i]) & self.mask;
        }
        Elem(out)
    }

    pub fn neg(&self, x: &Elem) -> Elem {
        Elem(x.0.map(|c| c.wrapping_neg() & self.mask))
    }

    pub fn scale(&self, x: &Elem, c: i64) -> Elem {
        let c = c.rem_euclid(self.modulus() as i64) as u32;
        Elem(x.0.map(|v| v.wrapping_mul(c) & self.mask))
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        let mut out = [0u32; 4];
        for i in 0..4 {
            if x.0[i] == 0 {
                continue;
            }
            for j in 0..4 {
                if y.0[j] == 0 {
                    continue;
                }
                let c = x.0[i].wrapping_mul(y.0[j]);
                let t = &self.table[i][j];
                for h in 0..4 {
                    out[h] = out[h].wrapping_add(c.wrapping_mul(t[h]));
                }
            }
        }
        Elem(out.map(|v| v & self.mask))
    }

    pub fn square(&self, x: &Elem) -> Elem {
        self.mul(x, x)
    }

    pub fn fourth_power(&self, x: &Elem) -> Elem {
        let sq = self.square(x);
        self.square(&sq)
    }

    pub fn pow(&self, x: &Elem, mut e: u32) -> Elem {
        let mut base = *x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.square(&base);
            e >>= 1;
        }
        acc
    }

    /// Element with index `idx` in the lexicographic enumeration, first
    /// coordinate varying fastest.
    pub fn element_at(&self, idx: u64) -> Elem {
        let a = self.a_exp;
        let m = self.mask as u64;
        Elem([
            (idx & m) as u32,
            ((idx >> a) & m) as u32,
            ((idx >> (2 * a)) & m) as u32,
            ((idx >> (3 * a)) & m) as u32,
        ])
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..(1u64 << (4 * self.a_exp))).map(move |i| self.element_at(i))
    }

    /// Reinterpret an element of a ring with smaller modulus (coordinates
    /// taken as nonnegative integers).
    pub fn lift(&self, x: &Elem) -> Elem {
        Elem(x.0.map(|c| c & self.mask))
    }

    pub fn is_commutative(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| self.table[i][j] == self.table[j][i]))
    }

    pub fn is_associative(&self) -> bool {
        (0..4).all(|i| {
            (0..4).all(|j| {
                (0..4).all(|l| {
                    let (bi, bj, bl) = (self.basis(i), self.basis(j), self.basis(l));
                    self.mul(&self.mul(&bi, &bj), &bl) == self.mul(&bi, &self.mul(&bj, &bl))
                })
            })
        })
    }

    pub fn is_unital(&self) -> bool {
        (0..4).all(|i| self.mul(&self.one(), &self.basis(i)) == self.basis(i))
    }
}
