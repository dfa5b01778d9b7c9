//! One line per acceptance criterion, then a single assertion over all.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use s4_cli::{compute, sweep, witness};
use s4_core::finring::Valuation;
use s4_core::oracle::{
    fourth_powers, fourth_power_congruence_check, min_sum_to_minus_one, nonzero_residues_mod_p8,
};
use s4_core::{factor_two, level_from_ef, make_field, PrimeAboveTwo, Shape};

struct Gate {
    results: Vec<(u32, String, bool, String)>,
}

impl Gate {
    fn check(&mut self, id: u32, name: &str, f: impl FnOnce() -> Result<(), String>) {
        let (ok, detail) = match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
            Ok(Ok(())) => (true, String::new()),
            Ok(Err(msg)) => (false, msg),
            Err(_) => (false, "panicked".into()),
        };
        let verdict = if ok { "PASS" } else { "FAIL" };
        if detail.is_empty() {
            println!("{verdict} [{id:>2}] {name}");
        } else {
            println!("{verdict} [{id:>2}] {name}: {detail}");
        }
        self.results.push((id, name.to_string(), ok, detail));
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn prime(m: i64, n: i64) -> PrimeAboveTwo {
    factor_two(&make_field(m, n).unwrap()).unwrap().primes[0].clone()
}

#[test]
fn acceptance() {
    let mut gate = Gate {
        results: Vec::new(),
    };
    let run = sweep(50, true, 0).expect("sweep runs");

    gate.check(
        1,
        "theorem tables agree with the oracle for |m|,|n| <= 50",
        || {
            ensure(run.summary.mismatches.is_empty(), || {
                format!(
                    "{:?}",
                    &run.summary.mismatches[..run.summary.mismatches.len().min(3)]
                )
            })?;
            ensure(run.summary.fields > 1000, || {
                format!("only {} fields", run.summary.fields)
            })?;
            for ((m, n), res) in &run.results {
                let out = res.as_ref().map_err(|e| format!("({m}, {n}): {e}"))?;
                for p in &out.report.primes {
                    ensure(p.oracle_s == Some(p.s), || format!("({m}, {n}): {p:?}"))?;
                }
            }
            Ok(())
        },
    );

    gate.check(
        2,
        "spot values (-2,-6)=3 (17,2)=6 (5,3)=2 (17,33)=15x4 (2,-34)=1",
        || {
            for (m, n, s, g) in [
                (-2, -6, 3, 1),
                (17, 2, 6, 2),
                (5, 3, 2, 1),
                (17, 33, 15, 4),
                (2, -34, 1, 1),
            ] {
                let out = compute(m, n, true).map_err(|e| e.to_string())?;
                let got: Vec<u32> = out.report.primes.iter().map(|p| p.s).collect();
                ensure(got == vec![s; g], || format!("({m}, {n}): {got:?}"))?;
            }
            Ok(())
        },
    );

    gate.check(3, "factorization shapes (17,33) (-2,-6) (5,3)", || {
        for (m, n, e, f, g) in [(17, 33, 1, 1, 4), (-2, -6, 4, 1, 1), (5, 3, 2, 2, 1)] {
            let shape = factor_two(&make_field(m, n).unwrap())
                .map_err(|e| e.to_string())?
                .shape();
            ensure(shape == Some(Shape { e, f, g }) && e * f * g == 4, || {
                format!("({m}, {n}): {shape:?}")
            })?;
        }
        Ok(())
    });

    gate.check(
        4,
        "nonzero fourth powers mod p^8 are {1, τ^4, τ^4+2τ^2+1}",
        || {
            let (computed, expected) =
                nonzero_residues_mod_p8(&prime(-2, -6)).map_err(|e| e.to_string())?;
            ensure(computed.len() == 3 && computed == expected, || {
                format!("computed {computed:?}, expected {expected:?}")
            })
        },
    );

    gate.check(
        5,
        "x ≡ y mod p^e implies x^4 ≡ y^4 mod p^(3e+1), e = 2 and e = 4",
        || {
            for (m, n, e) in [(17, 2, 2), (-2, -6, 4)] {
                let p = prime(m, n);
                ensure(p.e == e && p.f == 1, || {
                    format!("({m}, {n}) has e = {}", p.e)
                })?;
                ensure(fourth_power_congruence_check(&p).map_err(|e| e.to_string())?, || {
                    format!("counterexample in ({m}, {n})")
                })?;
            }
            Ok(())
        },
    );

    gate.check(
        6,
        "witness identity is exactly zero and s4(Q(√-2,√-6)) = 3",
        || {
            let w = witness().map_err(|e| e.to_string())?;
            ensure(w.exact_sum == [0; 4], || format!("sum {:?}", w.exact_sum))?;
            ensure(w.level() == Some(3), || "level not confirmed".into())?;
            ensure(w.render().contains("s₄(Q(√−2,√−6)) = 3"), || {
                "verdict line missing".into()
            })
        },
    );

    gate.check(
        7,
        "levels mod p^(3e+1) and p^(4e+1) agree for |m|,|n| <= 50",
        || {
            let mut checked = 0;
            for ((m, n), res) in &run.results {
                let out = res.as_ref().map_err(|e| format!("({m}, {n}): {e}"))?;
                for c in out
                    .verification
                    .as_ref()
                    .ok_or("sweep ran without oracle")?
                {
                    ensure(c.short.level() == c.full.level(), || {
                        format!("({m}, {n}): {} vs {}", c.short.level(), c.full.level())
                    })?;
                    ensure(
                        c.short.modulus_exponent + out.report.e == c.full.modulus_exponent,
                        || {
                            format!(
                                "({m}, {n}): moduli {} {}",
                                c.short.modulus_exponent, c.full.modulus_exponent
                            )
                        },
                    )?;
                    checked += 1;
                }
            }
            ensure(checked > 1000, || format!("only {checked} primes checked"))
        },
    );

    gate.check(
        8,
        "α and s are the same for 60 random uniformizers of (-2,-6)",
        || {
            let p = prime(-2, -6);
            let base = level_from_ef(&p).map_err(|e| e.to_string())?;
            let ring = p.ring();
            let size = 1u64 << ring.log2_size();
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            let mut seen = BTreeSet::new();
            while seen.len() < 60 {
                let tau = ring.element_at(rng.gen_range(0..size));
                if p.valuation(&tau) != Valuation::Exact(1) || !seen.insert(tau) {
                    continue;
                }
                let other = level_from_ef(&p.with_uniformizer(tau).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                ensure((other.s, other.alpha) == (base.s, base.alpha), || {
                    format!("τ = {tau}: {:?} vs {:?}", other, base)
                })?;
            }
            Ok(())
        },
    );

    gate.check(
        9,
        "fourth powers mod 32 are {0,1,16,17}; -1 needs 15 of them",
        || {
            let p = prime(17, 33);
            ensure((p.e, p.f) == (1, 1), || "(17, 33) is not split".into())?;
            let powers = fourth_powers(&p, 5).map_err(|e| e.to_string())?;
            let ring = p.ring();
            let ints: Vec<i64> = (0..32)
                .filter(|&c| powers.contains(&ring.from_int(c)))
                .collect();
            ensure(powers.quotient().size() == 32, || {
                "quotient is not Z/32".into()
            })?;
            ensure(ints == vec![0, 1, 16, 17] && powers.len() == 4, || {
                format!("{ints:?}")
            })?;
            let s = min_sum_to_minus_one(&powers).map_err(|e| e.to_string())?;
            let theorem = level_from_ef(&p).map_err(|e| e.to_string())?.s;
            ensure(s == 15 && theorem == 15, || {
                format!("oracle {s}, theorem {theorem}")
            })
        },
    );

    gate.check(
        10,
        "case inventory for e = 4, f = 1 is generated and consistent",
        || {
            let text = run.summary.render();
            ensure(run.summary.is_consistent(), || {
                "counts do not add up".into()
            })?;
            for alpha in ["5", "6", "7", "8", "9", "10", "11", "12", "13+"] {
                ensure(text.contains(&format!("alpha {alpha:>3}")), || {
                    format!("no row for α = {alpha}")
                })?;
            }
            let e4 = run.summary.shapes.get(&(4, 1, 1)).copied().unwrap_or(0);
            ensure(run.summary.e4f1.values().sum::<usize>() == e4, || {
                "inventory total".into()
            })
        },
    );

    let failed: Vec<_> = gate.results.iter().filter(|r| !r.2).map(|r| r.0).collect();
    println!(
        "{}/{} criteria pass",
        gate.results.len() - failed.len(),
        gate.results.len()
    );
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
