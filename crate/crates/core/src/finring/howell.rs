//! Howell normal form for subgroups of `(Z/2^a)^4`.
//!
//! Rows are kept in echelon order with pivots `2^v`, entries above a pivot
//! reduced into `[0, 2^v)`, and the annihilator `2^(a-v)·row` of every
//! pivot row folded back into the remaining columns.  The last step is
//! what makes the form canonical over a ring with zero divisors: the rows
//! with pivot column `≥ j` span exactly the subgroup elements vanishing in
//! the first `j` coordinates.

use super::Elem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PivotRow {
    pub col: usize,
    /// `log2` of the pivot entry.
    pub shift: u32,
    pub row: Elem,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HowellForm {
    a_exp: u32,
    rows: Vec<PivotRow>,
}

fn mask(a_exp: u32) -> u32 {
    if a_exp >= 32 {
        u32::MAX
    } else {
        (1u32 << a_exp) - 1
    }
}

/// Inverse of an odd number modulo `2^32` by Newton iteration.
fn inverse_odd(u: u32) -> u32 {
    debug_assert!(u & 1 == 1);
    let mut x = u; // correct to 3 bits
    for _ in 0..5 {
        x = x.wrapping_mul(2u32.wrapping_sub(u.wrapping_mul(x)));
    }
    x
}

fn scale(row: &Elem, c: u32, m: u32) -> Elem {
    Elem(row.0.map(|x| x.wrapping_mul(c) & m))
}

fn sub_scaled(target: &mut Elem, row: &Elem, c: u32, m: u32) {
    for (t, r) in target.0.iter_mut().zip(row.0.iter()) {
        *t = t.wrapping_sub(r.wrapping_mul(c)) & m;
    }
}

impl HowellForm {
    pub fn new<I: IntoIterator<Item = Elem>>(a_exp: u32, gens: I) -> HowellForm {
        let m = mask(a_exp);
        let mut pending: Vec<Elem> = gens
            .into_iter()
            .map(|g| Elem(g.0.map(|x| x & m)))
            .filter(|g| !g.is_zero())
            .collect();
        let mut rows: Vec<PivotRow> = Vec::new();
        for col in 0..4 {
            let best = pending
                .iter()
                .enumerate()
                .filter(|(_, r)| r.0[col] != 0)
                .min_by_key(|(_, r)| r.0[col].trailing_zeros())
                .map(|(i, _)| i);
            let Some(idx) = best else { continue };
            let mut pivot = pending.swap_remove(idx);
            let shift = pivot.0[col].trailing_zeros();
            let unit = pivot.0[col] >> shift;
            pivot = scale(&pivot, inverse_odd(unit), m);
            debug_assert_eq!(pivot.0[col], 1 << shift);

            for r in pending.iter_mut() {
                let q = r.0[col] >> shift;
                if q != 0 {
                    sub_scaled(r, &pivot, q, m);
                }
            }
            for p in rows.iter_mut() {
                let q = p.row.0[col] >> shift;
                if q != 0 {
                    sub_scaled(&mut p.row, &pivot, q, m);
                }
            }
            if shift > 0 {
                let ann = scale(&pivot, 1u32.wrapping_shl(a_exp - shift), m);
                pending.push(ann);
            }
            pending.retain(|r| !r.is_zero());
            rows.push(PivotRow {
                col,
                shift,
                row: pivot,
            });
        }
        HowellForm { a_exp, rows }
    }

    pub fn a_exp(&self) -> u32 {
        self.a_exp
    }

    pub fn rows(&self) -> &[PivotRow] {
        &self.rows
    }

    pub fn generators(&self) -> impl Iterator<Item = Elem> + '_ {
        self.rows.iter().map(|r| r.row)
    }

    /// `log2` of the subgroup order.
    pub fn log2_size(&self) -> u32 {
        self.rows.iter().map(|r| self.a_exp - r.shift).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Canonical coset representative of `x` modulo the subgroup.
    pub fn reduce(&self, x: &Elem) -> Elem {
        let m = mask(self.a_exp);
        let mut v = Elem(x.0.map(|c| c & m));
        for p in &self.rows {
            let q = v.0[p.col] >> p.shift;
            if q != 0 {
                sub_scaled(&mut v, &p.row, q, m);
            }
        }
        v
    }

    pub fn contains(&self, x: &Elem) -> bool {
        self.reduce(x).is_zero()
    }

    /// `log2` of the number of representatives per coordinate of reduced
    /// vectors: `shift` for a pivot column, `a` otherwise.
    pub fn residue_bits(&self) -> [u32; 4] {
        let mut bits = [self.a_exp; 4];
        for p in &self.rows {
            bits[p.col] = p.shift;
        }
        bits
    }
}
