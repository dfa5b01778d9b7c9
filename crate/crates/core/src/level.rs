//! Fourth level `s₄(K_p)` of a completion at a prime above 2, from the
//! ramification data `(e, f)` and, where needed, valuations of explicit
//! polynomial expressions in a uniformizer.

use std::fmt;

use thiserror::Error;

use crate::factor2::PrimeAboveTwo;
use crate::finring::{Elem, StructuredRing, Valuation};
use crate::numberfield::{BiquadraticField, Pattern};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LevelError {
    #[error("no level formula for e = {e}, f = {f} (e*f must be at most 4)")]
    UnsupportedEF { e: u32, f: u32 },
    #[error("v_p(τ⁴+2) = {0} is below 5")]
    AlphaTooSmall(Valuation),
    #[error("α = {alpha}: subcases {fired:?} all hold")]
    AmbiguousSubcase { alpha: u32, fired: Vec<u32> },
    #[error("α = {alpha}: no subcase holds")]
    NoSubcase { alpha: u32 },
    #[error("power chain too short for p^{0}")]
    ChainTooShort(u32),
    #[error("({m}, {n}, {k}) falls outside the congruence table of pattern {pattern}")]
    TableGap {
        pattern: Pattern,
        m: i64,
        n: i64,
        k: i64,
    },
}

/// Polynomial in the uniformizer with integer coefficients; index is the
/// exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauPoly(Vec<i64>);

impl TauPoly {
    pub fn from_terms(terms: &[(i64, usize)]) -> TauPoly {
        let deg = terms.iter().map(|&(_, e)| e).max().unwrap_or(0);
        let mut c = vec![0; deg + 1];
        for &(coef, e) in terms {
            c[e] += coef;
        }
        TauPoly(c)
    }

    pub fn add(&self, other: &TauPoly) -> TauPoly {
        let n = self.0.len().max(other.0.len());
        TauPoly(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&0) + other.0.get(i).unwrap_or(&0))
                .collect(),
        )
    }

    pub fn mul(&self, other: &TauPoly) -> TauPoly {
        let mut c = vec![0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        TauPoly(c)
    }

    /// Horner evaluation with ring operations only.
    pub fn eval(&self, ring: &StructuredRing, tau: &Elem) -> Elem {
        self.0.iter().rev().fold(ring.zero(), |acc, &c| {
            ring.add(&ring.mul(&acc, tau), &ring.from_int(c))
        })
    }
}

impl fmt::Display for TauPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            } else if c < 0 {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match (a, e) {
                (_, 0) => write!(f, "{a}")?,
                (1, 1) => f.write_str("τ")?,
                (1, _) => write!(f, "τ^{e}")?,
                (_, 1) => write!(f, "{a}τ")?,
                _ => write!(f, "{a}τ^{e}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Shorthand: `t(&[(c, e), …])` is `Σ c·τ^e`.
fn t(terms: &[(i64, usize)]) -> TauPoly {
    TauPoly::from_terms(terms)
}

/// A named polynomial condition expression.
#[derive(Debug, Clone)]
pub struct ConditionExpr {
    pub name: &'static str,
    pub poly: TauPoly,
}

impl ConditionExpr {
    fn new(name: &'static str, poly: TauPoly) -> ConditionExpr {
        ConditionExpr { name, poly }
    }

    pub fn evaluate(&self, ring: &StructuredRing, tau: &Elem) -> Elem {
        self.poly.eval(ring, tau)
    }
}

/// `A₁ … A₄` of the `α = 6` row.
pub fn a_expressions() -> [ConditionExpr; 4] {
    let base = t(&[(1, 4), (2, 2), (2, 0)]); // τ⁴ + 2τ² + 2
    let lifted = t(&[(1, 4), (1, 0)]).mul(&base); // (τ⁴+1)(τ⁴+2τ²+2)
    let cubic = t(&[(4, 3), (4, 2), (4, 1)]);
    let linear = t(&[(4, 1)]);
    [
        ConditionExpr::new("A1", cubic.add(&base)),
        ConditionExpr::new("A2", linear.add(&lifted)),
        ConditionExpr::new("A3", linear.add(&base)),
        ConditionExpr::new("A4", cubic.add(&lifted)),
    ]
}

/// `τ⁸ + τ⁴ + 2`, the core of the `α = 8` row.
fn alpha8_core() -> TauPoly {
    t(&[(1, 8), (1, 4), (2, 0)])
}

/// Valuation of a named expression, recorded as evidence for the subcase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionWitness {
    pub name: String,
    pub valuation: Valuation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Main2Branch {
    /// `32 | n+k`, `nk/4 ≡ 15 (mod 16)`
    Div32Q15,
    /// `16 ∥ n+k`, `nk/4 ≡ 7 (mod 16)`
    Exact16Q7,
    /// `32 | n+k`, `nk/4 ≡ 7 (mod 16)`
    Div32Q7,
    /// `16 ∥ n+k`, `nk/4 ≡ 15 (mod 16)`
    Exact16Q15,
    /// `8 ∥ n+k`
    Exact8,
    MOneMod8,
    MFiveMod8,
    AllOneMod8,
    NotAllOneMod8,
}

impl Main2Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Main2Branch::Div32Q15 => "nk32_q15",
            Main2Branch::Exact16Q7 => "nk16x_q7",
            Main2Branch::Div32Q7 => "nk32_q7",
            Main2Branch::Exact16Q15 => "nk16x_q15",
            Main2Branch::Exact8 => "nk8x",
            Main2Branch::MOneMod8 => "m1mod8",
            Main2Branch::MFiveMod8 => "m5mod8",
            Main2Branch::AllOneMod8 => "all1mod8",
            Main2Branch::NotAllOneMod8 => "not_all1mod8",
        }
    }
}

/// Which formula produced the level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Route {
    /// `e = f = 1`.
    UnramifiedDegreeOne,
    /// `f` even.
    EvenInertia,
    /// `e = 2, f = 1`; whether `π² ≡ 2 (mod p⁴)`.
    E2F1 {
        pi_squared_is_two: bool,
    },
    E3F1,
    E1F3,
    /// `e = 4, f = 1`; `alpha` is `v_p(τ⁴+2)` capped at 13.
    E4F1 {
        alpha: u32,
        s: u32,
    },
    /// Congruence table on the role-assigned `(m, n, k)`.
    Main2 {
        row: Pattern,
        branch: Main2Branch,
    },
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Route::UnramifiedDegreeOne => f.write_str("e1f1"),
            Route::EvenInertia => f.write_str("f_even"),
            Route::E2F1 {
                pi_squared_is_two: true,
            } => f.write_str("e2f1_pi2_eq_2"),
            Route::E2F1 {
                pi_squared_is_two: false,
            } => f.write_str("e2f1_pi2_ne_2"),
            Route::E3F1 => f.write_str("e3f1"),
            Route::E1F3 => f.write_str("e1f3"),
            Route::E4F1 { alpha: 13, s } => write!(f, "e4f1_a13plus_s{s}"),
            Route::E4F1 { alpha, s } => write!(f, "e4f1_a{alpha}_s{s}"),
            Route::Main2 { row, branch } => write!(f, "main2_{}_{}", row, branch.as_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelResult {
    pub s: u32,
    pub route: Route,
    /// `v_p(τ⁴+2)` for `e = 4, f = 1`.
    pub alpha: Option<Valuation>,
    pub witnesses: Vec<ConditionWitness>,
}

impl LevelResult {
    fn plain(s: u32, route: Route) -> LevelResult {
        LevelResult {
            s,
            route,
            alpha: None,
            witnesses: Vec::new(),
        }
    }
}

/// Every `(α, s)` the e = 4, f = 1 tree can return, `α = 13` standing for
/// `α ≥ 13`.
pub const E4F1_SUBCASES: [(u32, &[u32]); 9] = [
    (5, &[3, 4, 5, 6]),
    (6, &[1, 2, 3]),
    (7, &[3, 4]),
    (8, &[2, 3, 4]),
    (9, &[4]),
    (10, &[2, 3]),
    (11, &[2, 3]),
    (12, &[3]),
    (13, &[2]),
];

/// Dispatch on `(e, f)`.
pub fn level_from_ef(prime: &PrimeAboveTwo) -> Result<LevelResult, LevelError> {
    match (prime.e, prime.f) {
        (1, 1) => Ok(LevelResult::plain(15, Route::UnramifiedDegreeOne)),
        // s = 1 would force 4 | e
        (1, 2) | (2, 2) | (1, 4) => Ok(LevelResult::plain(2, Route::EvenInertia)),
        (2, 1) => {
            let ring = prime.ring();
            let pi = prime.uniformizer();
            let diff = ring.sub(&ring.square(&pi), &ring.from_int(2));
            let v = prime.valuation(&diff);
            let is_two = v.at_least(4);
            Ok(LevelResult {
                s: if is_two { 6 } else { 4 },
                route: Route::E2F1 {
                    pi_squared_is_two: is_two,
                },
                alpha: None,
                witnesses: vec![ConditionWitness {
                    name: "π²-2".into(),
                    valuation: v,
                }],
            })
        }
        (3, 1) => Ok(LevelResult::plain(9, Route::E3F1)),
        (1, 3) => Ok(LevelResult::plain(5, Route::E1F3)),
        (4, 1) => level_e4_f1(prime),
        (e, f) => Err(LevelError::UnsupportedEF { e, f }),
    }
}

/// Evaluates condition expressions at the uniformizer of a prime.
struct Evaluator<'a> {
    prime: &'a PrimeAboveTwo,
    tau: Elem,
    witnesses: Vec<ConditionWitness>,
}

impl<'a> Evaluator<'a> {
    fn valuation(&mut self, name: &str, poly: &TauPoly) -> Valuation {
        let v = self
            .prime
            .valuation(&poly.eval(self.prime.ring(), &self.tau));
        self.witnesses.push(ConditionWitness {
            name: name.to_string(),
            valuation: v,
        });
        v
    }

    fn in_p(&mut self, name: &str, poly: &TauPoly, j: u32) -> Result<bool, LevelError> {
        if j > self.prime.chain().len() {
            return Err(LevelError::ChainTooShort(j));
        }
        Ok(self.valuation(name, poly).at_least(j))
    }

    fn any_in_p(&mut self, exprs: &[(&str, TauPoly)], j: u32) -> Result<bool, LevelError> {
        let mut hit = false;
        for (name, poly) in exprs {
            // evaluate all so every valuation lands in the witness list
            hit |= self.in_p(name, poly, j)?;
        }
        Ok(hit)
    }
}

/// Exactly one of the `(s, holds)` subcases may fire.
fn pick(alpha: u32, cases: &[(u32, bool)]) -> Result<u32, LevelError> {
    let fired: Vec<u32> = cases.iter().filter(|c| c.1).map(|c| c.0).collect();
    match fired.as_slice() {
        [s] => Ok(*s),
        [] => Err(LevelError::NoSubcase { alpha }),
        _ => Err(LevelError::AmbiguousSubcase { alpha, fired }),
    }
}

/// The case tree for `e = 4, f = 1`, keyed by `α = v_p(τ⁴+2) ≥ 5`.
pub fn level_e4_f1(prime: &PrimeAboveTwo) -> Result<LevelResult, LevelError> {
    if (prime.e, prime.f) != (4, 1) {
        return Err(LevelError::UnsupportedEF {
            e: prime.e,
            f: prime.f,
        });
    }
    let mut ev = Evaluator {
        prime,
        tau: prime.uniformizer(),
        witnesses: Vec::new(),
    };
    let alpha_val = ev.valuation("τ⁴+2", &t(&[(1, 4), (2, 0)]));
    let alpha = match alpha_val {
        Valuation::Exact(a) if a < 5 => return Err(LevelError::AlphaTooSmall(alpha_val)),
        Valuation::Exact(a) => a.min(13),
        Valuation::AtLeast(a) if a >= 13 => 13,
        Valuation::AtLeast(_) => return Err(LevelError::ChainTooShort(13)),
    };
    const P13: u32 = 13;

    let s = match alpha {
        5 => {
            let c3 = ev.in_p(
                "τ¹²+τ⁸+2τ⁶+4τ³+4",
                &t(&[(1, 12), (1, 8), (2, 6), (4, 3), (4, 0)]),
                P13,
            )?;
            let c4 = ev.in_p("τ⁸+2τ⁶+4τ³+4", &t(&[(1, 8), (2, 6), (4, 3), (4, 0)]), P13)?;
            let c5 = ev.in_p("τ⁸+4τ³+4τ²+4", &t(&[(1, 8), (4, 3), (4, 2), (4, 0)]), P13)?;
            let c6 = ev.in_p(
                "τ¹²+τ⁸+4τ³+4τ²+4",
                &t(&[(1, 12), (1, 8), (4, 3), (4, 2), (4, 0)]),
                P13,
            )?;
            pick(alpha, &[(3, c3), (4, c4), (5, c5), (6, c6)])?
        }
        6 => {
            let a = a_expressions();
            let tau8 = t(&[(1, 8)]);
            let mut one = false;
            let mut two = false;
            for expr in &a {
                let v = ev.valuation(expr.name, &expr.poly);
                one |= v.at_least(13);
                two |= v.is_exactly(12);
            }
            for expr in &a {
                let name = format!("{}+τ⁸", expr.name);
                two |= ev.valuation(&name, &expr.poly.add(&tau8)).at_least(12);
            }
            pick(alpha, &[(1, one), (2, two), (3, !one && !two)])?
        }
        7 => {
            let c = ev.in_p(
                "τ¹²+4τ³+2(τ⁴+2)",
                &t(&[(1, 12), (4, 3), (2, 4), (4, 0)]),
                P13,
            )?;
            pick(alpha, &[(3, c), (4, !c)])?
        }
        8 => {
            let core = alpha8_core();
            let two = ev.any_in_p(
                &[
                    ("τ⁸+τ⁴+2", core.clone()),
                    ("4τ²+(τ⁸+τ⁴+2)", t(&[(4, 2)]).add(&core)),
                    ("τ¹²+4τ³+(τ⁸+τ⁴+2)", t(&[(1, 12), (4, 3)]).add(&core)),
                    (
                        "τ¹²+4τ³+4τ²+(τ⁸+τ⁴+2)",
                        t(&[(1, 12), (4, 3), (4, 2)]).add(&core),
                    ),
                ],
                P13,
            )?;
            let three = ev.any_in_p(
                &[
                    ("τ¹²+(τ⁸+τ⁴+2)", t(&[(1, 12)]).add(&core)),
                    ("τ¹²+4τ²+(τ⁸+τ⁴+2)", t(&[(1, 12), (4, 2)]).add(&core)),
                    ("4τ³+(τ⁸+τ⁴+2)", t(&[(4, 3)]).add(&core)),
                    ("4τ³+4τ²+(τ⁸+τ⁴+2)", t(&[(4, 3), (4, 2)]).add(&core)),
                ],
                P13,
            )?;
            let four = ev.valuation("τ⁸+τ⁴+2 (exact)", &core).is_exactly(9);
            pick(alpha, &[(2, two), (3, three), (4, four)])?
        }
        9 => 4,
        10 => {
            let two = ev.any_in_p(
                &[
                    (
                        "τ¹²+4τ³+4τ²+τ⁴+2",
                        t(&[(1, 12), (4, 3), (4, 2), (1, 4), (2, 0)]),
                    ),
                    ("τ¹²+4τ²+τ⁴+2", t(&[(1, 12), (4, 2), (1, 4), (2, 0)])),
                ],
                P13,
            )?;
            pick(alpha, &[(2, two), (3, !two)])?
        }
        11 => {
            let two = ev.in_p("4τ³+τ⁴+2", &t(&[(4, 3), (1, 4), (2, 0)]), P13)?;
            pick(alpha, &[(2, two), (3, !two)])?
        }
        12 => 3,
        _ => 2,
    };
    Ok(LevelResult {
        s,
        route: Route::E4F1 { alpha, s },
        alpha: Some(alpha_val),
        witnesses: ev.witnesses,
    })
}

fn two_adic(x: i64) -> u32 {
    if x == 0 {
        u32::MAX
    } else {
        x.trailing_zeros()
    }
}

/// Closed-form table for biquadratic fields, read on the role-assigned
/// `(m, n, k)`.
pub fn level_main2(field: &BiquadraticField) -> Result<LevelResult, LevelError> {
    let r = field.roles;
    let gap = || LevelError::TableGap {
        pattern: field.pattern,
        m: r.m,
        n: r.n,
        k: r.k,
    };
    let (s, branch) = match field.pattern {
        Pattern::M3N2K2 => {
            let sum = r.n + r.k;
            let q = ((r.n / 2) * (r.k / 2)).rem_euclid(16);
            match (two_adic(sum), q) {
                (v, 15) if v >= 5 => (1, Main2Branch::Div32Q15),
                (4, 7) => (1, Main2Branch::Exact16Q7),
                (v, 7) if v >= 5 => (2, Main2Branch::Div32Q7),
                (4, 15) => (2, Main2Branch::Exact16Q15),
                (3, _) => (3, Main2Branch::Exact8),
                _ => return Err(gap()),
            }
        }
        Pattern::M1N3K3 | Pattern::M1N2K2 => {
            let high = if field.pattern == Pattern::M1N3K3 {
                4
            } else {
                6
            };
            match r.m.rem_euclid(8) {
                1 => (high, Main2Branch::MOneMod8),
                5 => (2, Main2Branch::MFiveMod8),
                _ => return Err(gap()),
            }
        }
        Pattern::M1N1K1 => {
            if [r.m, r.n, r.k].iter().all(|x| x.rem_euclid(8) == 1) {
                (15, Main2Branch::AllOneMod8)
            } else {
                (2, Main2Branch::NotAllOneMod8)
            }
        }
    };
    Ok(LevelResult::plain(
        s,
        Route::Main2 {
            row: field.pattern,
            branch,
        },
    ))
}
