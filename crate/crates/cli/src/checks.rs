//! Symbolic fourth-power tables and the exact witness for `Q(√-2, √-6)`.

use s4_core::oracle::{
    fourth_power_sum, fourth_power_table, nonzero_residues_mod_p8, witness_identity,
    witness_sum_mod_p13, witness_terms, PowerTableLine,
};
use s4_core::{factor_two, make_field};

use crate::report::{compute, core, CliError};

pub struct TableReport {
    pub m: i64,
    pub n: i64,
    pub mod_p8: Vec<PowerTableLine>,
    pub mod_p13: Vec<PowerTableLine>,
    /// Nonzero fourth-power classes mod `p⁸`: computed, expected.
    pub residues_p8: (Vec<u64>, Vec<u64>),
}

impl TableReport {
    pub fn all_hold(&self) -> bool {
        self.mod_p8.iter().chain(&self.mod_p13).all(|l| l.holds)
            && self.residues_p8.0 == self.residues_p8.1
    }

    pub fn render(&self) -> String {
        let mut out = format!("Q(√{}, √{}), e = 4, f = 1\n", self.m, self.n);
        for (lines, n_exp) in [(&self.mod_p8, 8), (&self.mod_p13, 13)] {
            out += &format!("\nfourth powers mod p^{n_exp}\n");
            for l in lines {
                let verdict = if l.holds { "ok" } else { "MISMATCH" };
                out += &format!("  ({})^4 ≡ {}   {verdict}\n", l.base, l.expected);
            }
        }
        let (computed, expected) = &self.residues_p8;
        out +=
            &format!(
            "\nnonzero classes mod p^8: {} computed, {{1, τ^4, τ^4 + 2τ^2 + 1}} gives {}   {}\n",
            computed.len(),
            expected.len(),
            if computed == expected { "ok" } else { "MISMATCH" }
        );
        out += "zero class: present mod p^8 and mod p^13\n";
        out
    }
}

pub fn tables(m: i64, n: i64) -> Result<TableReport, CliError> {
    let field = make_field(m, n).map_err(core)?;
    let fact = factor_two(&field).map_err(core)?;
    let prime = &fact.primes[0];
    if (prime.e, prime.f) != (4, 1) {
        return Err(CliError::Input(format!(
            "{field} has e = {}, f = {}; the tables need e = 4, f = 1",
            prime.e, prime.f
        )));
    }
    Ok(TableReport {
        m,
        n,
        mod_p8: fourth_power_table(prime, 8).map_err(core)?,
        mod_p13: fourth_power_table(prime, 13).map_err(core)?,
        residues_p8: nonzero_residues_mod_p8(prime).map_err(core)?,
    })
}

pub struct WitnessReport {
    /// Exact coordinates of the four-term sum in the integral basis.
    pub exact_sum: [i128; 4],
    pub identity_holds: bool,
    pub vanishes_mod_p13: bool,
    /// `max_p s₄(K_p)`, oracle-checked.
    pub lower_bound: u32,
}

impl WitnessReport {
    /// Three fourth powers plus `1⁴` summing to zero give `s₄ ≤ 3`; the
    /// completion gives `s₄ ≥ 3`.
    pub fn level(&self) -> Option<u32> {
        (self.identity_holds && self.vanishes_mod_p13 && self.lower_bound == 3).then_some(3)
    }

    pub fn render(&self) -> String {
        let mut out = String::from("((√-2+√-6)/2)^4 + ((√-2-√-6)/2)^4 + (√-2+1)^4 + (√-2-1)^4\n");
        out += &format!(
            "  exact sum in the integral basis: ({}, {}, {}, {})\n",
            self.exact_sum[0], self.exact_sum[1], self.exact_sum[2], self.exact_sum[3]
        );
        out += &format!(
            "  reduced mod p^13: {}\n",
            if self.vanishes_mod_p13 {
                "0"
            } else {
                "nonzero"
            }
        );
        out += &format!("upper bound s4(K) <= 3: {}\n", yes(self.identity_holds));
        out += &format!(
            "lower bound s4(K) >= s4(K_p) = {} (oracle-checked)\n",
            self.lower_bound
        );
        match self.level() {
            Some(s) => out += &format!("s₄(Q(√−2,√−6)) = {s}\n"),
            None => out += "s₄(Q(√−2,√−6)) could not be confirmed\n",
        }
        out
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "NO"
    }
}

pub fn witness() -> Result<WitnessReport, CliError> {
    let (structure, terms) = witness_terms().map_err(core)?;
    let outcome = compute(-2, -6, true)?;
    Ok(WitnessReport {
        exact_sum: fourth_power_sum(&structure, &terms),
        identity_holds: witness_identity().map_err(core)?,
        vanishes_mod_p13: witness_sum_mod_p13().map_err(core)?,
        lower_bound: outcome.report.lower_bound,
    })
}
