use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use s4_core::numberfield::is_square_free;
use s4_core::{make_field, Route, E4F1_SUBCASES};

use crate::report::{compute, CliError, FieldOutcome};

/// Generator pairs `m < n` with `|m|, |n| ≤ max_abs`, one per field, in
/// lexicographic order.
pub fn canonical_pairs(max_abs: i64) -> Vec<(i64, i64)> {
    let sf: Vec<i64> = (-max_abs..=max_abs)
        .filter(|&x| x != 0 && x != 1 && is_square_free(x))
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, &m) in sf.iter().enumerate() {
        for &n in &sf[i + 1..] {
            if let Ok(field) = make_field(m, n) {
                if seen.insert(field.key()) {
                    out.push((m, n));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub m: i64,
    pub n: i64,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct SweepSummary {
    pub max_abs: i64,
    pub fields: usize,
    /// Fields per `(e, f, g)`.
    pub shapes: BTreeMap<(u32, u32, u32), usize>,
    /// Fields per congruence-table route.
    pub table_routes: BTreeMap<String, usize>,
    /// e = 4, f = 1 primes per `(α, s)`, α = 13 meaning α ≥ 13.
    pub e4f1: BTreeMap<(u32, u32), usize>,
    pub mismatches: Vec<Mismatch>,
}

impl SweepSummary {
    /// Counts add up: every scanned field is either tabulated or a mismatch,
    /// and every e = 4, f = 1 field has one inventory entry.
    pub fn is_consistent(&self) -> bool {
        let tabulated: usize = self.table_routes.values().sum();
        let shaped: usize = self.shapes.values().sum();
        let e4 = self
            .shapes
            .iter()
            .filter(|((e, f, _), _)| (*e, *f) == (4, 1))
            .map(|(_, c)| c)
            .sum::<usize>();
        let inventory: usize = self.e4f1.values().sum();
        let known = self.e4f1.keys().all(|(a, s)| {
            E4F1_SUBCASES
                .iter()
                .any(|(alpha, ss)| alpha == a && ss.contains(s))
        });
        tabulated + self.mismatches.len() == self.fields
            && shaped == tabulated
            && inventory == e4
            && known
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "sweep |m|, |n| <= {}: {} fields, {} mismatches\n",
            self.max_abs,
            self.fields,
            self.mismatches.len()
        );
        out += "\n(e, f, g)   fields\n";
        for ((e, f, g), c) in &self.shapes {
            out += &format!("({e}, {f}, {g})   {c:>6}\n");
        }
        out += "\ntable route                     fields\n";
        for (route, c) in &self.table_routes {
            out += &format!("{route:<30} {c:>7}\n");
        }
        out += "\ne = 4, f = 1 cases (alpha, s): realized count\n";
        for (alpha, ss) in E4F1_SUBCASES {
            for &s in ss {
                let c = self.e4f1.get(&(alpha, s)).copied().unwrap_or(0);
                let a = if alpha == 13 {
                    "13+".to_string()
                } else {
                    alpha.to_string()
                };
                let mark = if c > 0 { "realized" } else { "not seen" };
                out += &format!("alpha {a:>3}  s = {s}   {c:>6}  {mark}\n");
            }
        }
        for mm in &self.mismatches {
            out += &format!("MISMATCH ({}, {}): {}\n", mm.m, mm.n, mm.detail);
        }
        out += &format!(
            "counts consistent: {}\n",
            if self.is_consistent() { "yes" } else { "no" }
        );
        out
    }
}

/// Per-field results of a sweep, in canonical order.
pub struct SweepRun {
    pub results: Vec<((i64, i64), Result<FieldOutcome, CliError>)>,
    pub summary: SweepSummary,
}

/// Computes all fields with `|m|, |n| ≤ max_abs` on `jobs` worker threads
/// (0 = one per core).  Output order does not depend on `jobs`.
pub fn sweep(max_abs: i64, verify: bool, jobs: usize) -> Result<SweepRun, CliError> {
    if max_abs < 2 {
        return Err(CliError::Input(format!(
            "sweep bound must be at least 2, got {max_abs}"
        )));
    }
    let pairs = canonical_pairs(max_abs);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Consistency(format!("cannot start worker pool: {e}")))?;
    let results: Vec<_> = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(m, n)| ((m, n), compute(m, n, verify)))
            .collect()
    });

    let mut summary = SweepSummary {
        max_abs,
        fields: results.len(),
        ..SweepSummary::default()
    };
    for ((m, n), res) in &results {
        match res {
            Ok(out) => {
                let r = &out.report;
                *summary.shapes.entry((r.e, r.f, r.g)).or_default() += 1;
                *summary
                    .table_routes
                    .entry(out.table_route.to_string())
                    .or_default() += 1;
                if let Some(Route::E4F1 { alpha, s }) = out.routes.first() {
                    *summary.e4f1.entry((*alpha, *s)).or_default() += 1;
                }
            }
            Err(err) => summary.mismatches.push(Mismatch {
                m: *m,
                n: *n,
                detail: err.to_string(),
            }),
        }
    }
    Ok(SweepRun { results, summary })
}

#[derive(Serialize)]
struct CsvRow<'a> {
    m: i64,
    n: i64,
    d: i64,
    k: i64,
    pattern: &'a str,
    e: u32,
    f: u32,
    g: u32,
    alpha: Option<u32>,
    route: &'a str,
    s: u32,
    oracle_s: Option<u32>,
}

/// One row per field (the primes above 2 are conjugate); failed fields are
/// skipped.
pub fn write_csv<W: Write>(run: &SweepRun, out: W) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for (_, res) in &run.results {
        let Ok(outcome) = res else { continue };
        let r = &outcome.report;
        let p = &r.primes[0];
        w.serialize(CsvRow {
            m: r.m,
            n: r.n,
            d: r.d,
            k: r.k,
            pattern: &r.pattern,
            e: r.e,
            f: r.f,
            g: r.g,
            alpha: p.alpha,
            route: &p.route,
            s: p.s,
            oracle_s: p.oracle_s,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Line-delimited JSON, one field report per line.
pub fn write_json_lines<W: Write>(run: &SweepRun, mut out: W) -> Result<(), CliError> {
    for (_, res) in &run.results {
        if let Ok(outcome) = res {
            serde_json::to_writer(&mut out, &outcome.report)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}
