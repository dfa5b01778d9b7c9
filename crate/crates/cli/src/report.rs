use serde::Serialize;
use thiserror::Error;

use s4_core::numberfield::FieldError;
use s4_core::oracle::{level_at, MinusOneRepresentation};
use s4_core::{factor_two, level_from_ef, level_main2, make_field, Route};

/// Failure classes of the command line; each maps to one exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad user input (exit 2).
    #[error("{0}")]
    Input(String),
    /// Internal inconsistency or failed verification (exit 3).
    #[error("{0}")]
    Consistency(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            _ => 3,
        }
    }
}

impl From<s4_core::Error> for CliError {
    fn from(err: s4_core::Error) -> CliError {
        match err {
            s4_core::Error::Field(FieldError::NotSquareFree(_))
            | s4_core::Error::Field(FieldError::DegenerateField { .. }) => {
                CliError::Input(err.to_string())
            }
            other => CliError::Consistency(other.to_string()),
        }
    }
}

pub(crate) fn core<E: Into<s4_core::Error>>(err: E) -> CliError {
    CliError::from(err.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeReport {
    /// `v_p(τ⁴+2)` for e = 4, f = 1; 13 means "at least 13".
    pub alpha: Option<u32>,
    pub route: String,
    pub s: u32,
    pub oracle_s: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldReport {
    pub m: i64,
    pub n: i64,
    pub d: i64,
    pub k: i64,
    pub pattern: String,
    pub e: u32,
    pub f: u32,
    pub g: u32,
    pub primes: Vec<PrimeReport>,
    /// `max_p s₄(K_p)`, a lower bound for `s₄(K)`.
    pub lower_bound: u32,
}

/// Oracle levels at `p^(3e+1)` and `p^(4e+1)` with a certificate at the
/// larger modulus.
#[derive(Debug, Clone)]
pub struct OracleCheck {
    pub short: MinusOneRepresentation,
    pub full: MinusOneRepresentation,
}

/// Everything computed for one field, including data not serialized.
#[derive(Debug, Clone)]
pub struct FieldOutcome {
    pub report: FieldReport,
    /// Route of the congruence table on `(m, n, k)`.
    pub table_route: Route,
    /// Routes of the `(e, f)` dispatcher, one per prime.
    pub routes: Vec<Route>,
    /// One oracle check per prime, when requested.
    pub verification: Option<Vec<OracleCheck>>,
}

/// Computes every level of `Q(√m, √n)` at the primes above 2, cross-checks
/// the two theorem routes, and with `verify` also the oracle at both moduli.
pub fn compute(m: i64, n: i64, verify: bool) -> Result<FieldOutcome, CliError> {
    let field = make_field(m, n).map_err(core)?;
    let fact = factor_two(&field).map_err(core)?;
    let shape = fact
        .shape()
        .ok_or_else(|| CliError::Consistency(format!("{field}: primes differ in (e, f)")))?;
    let table = level_main2(&field).map_err(core)?;

    let mut primes = Vec::with_capacity(fact.primes.len());
    let mut routes = Vec::with_capacity(fact.primes.len());
    let mut verification = verify.then(Vec::new);
    for prime in &fact.primes {
        let r = level_from_ef(prime).map_err(core)?;
        if r.s != table.s {
            return Err(CliError::Consistency(format!(
                "{field}: congruence table gives {} ({}) but the (e, f) dispatcher gives {} ({})",
                table.s, table.route, r.s, r.route
            )));
        }
        let oracle_s = match verification.as_mut() {
            Some(checks) => {
                let short = level_at(prime, 3 * prime.e + 1).map_err(core)?;
                let full = level_at(prime, 4 * prime.e + 1).map_err(core)?;
                if short.level() != r.s || full.level() != r.s {
                    return Err(CliError::Consistency(format!(
                        "{field}: theorem gives {} but the oracle gives {} mod p^{} and {} mod p^{}",
                        r.s,
                        short.level(),
                        short.modulus_exponent,
                        full.level(),
                        full.modulus_exponent
                    )));
                }
                let s = full.level();
                checks.push(OracleCheck { short, full });
                Some(s)
            }
            None => None,
        };
        let alpha = match r.route {
            Route::E4F1 { alpha, .. } => Some(alpha),
            _ => None,
        };
        primes.push(PrimeReport {
            alpha,
            route: r.route.to_string(),
            s: r.s,
            oracle_s,
        });
        routes.push(r.route);
    }

    let lower_bound = primes.iter().map(|p| p.s).max().unwrap_or(0);
    Ok(FieldOutcome {
        report: FieldReport {
            m,
            n,
            d: field.d,
            k: field.k,
            pattern: field.pattern.to_string(),
            e: shape.e,
            f: shape.f,
            g: shape.g,
            primes,
            lower_bound,
        },
        table_route: table.route,
        routes,
        verification,
    })
}

/// Plain-text rendering of a computed field.
pub fn render(outcome: &FieldOutcome) -> String {
    let r = &outcome.report;
    let primes = match r.g {
        1 => "p".to_string(),
        g => format!("(p_1 ⋯ p_{g})"),
    };
    let power = if r.e == 1 {
        String::new()
    } else {
        format!("^{}", r.e)
    };
    let mut out = format!(
        "K = Q(√{}, √{})  d = {}  k = {}  pattern {}\n(2) = {primes}{power}  f = {}\n",
        r.m, r.n, r.d, r.k, r.pattern, r.f
    );
    out += &format!("table route: {}\n", outcome.table_route);
    for (i, p) in r.primes.iter().enumerate() {
        out += &format!("p_{}: s4(K_p) = {}  via {}", i + 1, p.s, p.route);
        if let Some(a) = p.alpha {
            out += &format!("  alpha = {}{}", a, if a == 13 { "+" } else { "" });
        }
        if let Some(o) = p.oracle_s {
            out += &format!("  oracle = {o}");
        }
        out.push('\n');
    }
    if let Some(checks) = &outcome.verification {
        for (i, c) in checks.iter().enumerate() {
            let terms: Vec<String> = c.full.summands.iter().map(|x| format!("{x}^4")).collect();
            out += &format!(
                "p_{}: oracle {} mod p^{}, {} mod p^{}; -1 ≡ {} (integral-basis coordinates)\n",
                i + 1,
                c.short.level(),
                c.short.modulus_exponent,
                c.full.level(),
                c.full.modulus_exponent,
                terms.join(" + ")
            );
        }
    }
    out += &format!("s4(K) >= {}\n", r.lower_bound);
    out
}
