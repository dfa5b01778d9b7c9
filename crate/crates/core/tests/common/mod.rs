#![allow(dead_code)]

use std::collections::BTreeSet;

use s4_core::numberfield::is_square_free;
use s4_core::{make_field, BiquadraticField};

pub fn square_free_in(bound: i64) -> Vec<i64> {
    (-bound..=bound)
        .filter(|&x| x != 0 && x != 1 && is_square_free(x))
        .collect()
}

/// One field per `{m, n, k}` triple, generated by pairs `m < n`.
pub fn fields_up_to(bound: i64) -> Vec<BiquadraticField> {
    let sf = square_free_in(bound);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &m in &sf {
        for &n in &sf {
            if m >= n {
                continue;
            }
            if let Ok(field) = make_field(m, n) {
                if seen.insert(field.key()) {
                    out.push(field);
                }
            }
        }
    }
    out
}
