//! Cross-engine verification of a single spec.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use crate::condensation::{
    case_recurrence, pick_corners, stats_deltas, verify_kuo, CondensationError, Condenser,
    IdentityForm,
};
use crate::matchgraph::{
    count_matchings_with_limit, dual_graph, matching_generating_function, CountError,
};
use crate::region::{
    build_region, formula_count, lemma_identities, IdentityCheck, RegionSpec, RegionStats,
};
use crate::shuffle::{
    binary_reduction_step, characteristic_matrix, exponent_s, reduction_trace, AztecGraph,
};

/// Largest order at which the binary reduction step is checked numerically.
const NUMERIC_STEP_MAX_ORDER: usize = 4;

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Profile-width limit for the transfer-matrix engine; wider duals are
    /// skipped with a note.
    pub brute_limit: usize,
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            brute_limit: 24,
            timings: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub tool: String,
    pub version: String,
    pub spec: RegionSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invalid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<RegionStats>,
    /// Decimal counts by engine name.
    pub counts: BTreeMap<String, String>,
    /// Engines that did not run, with the reason.
    pub skipped: BTreeMap<String, String>,
    pub checks: Vec<IdentityCheck>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl VerifyReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Timer {
    enabled: bool,
    laps: BTreeMap<String, f64>,
}

impl Timer {
    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.laps
                .insert(name.to_string(), start.elapsed().as_secs_f64() * 1e3);
        }
        out
    }
}

/// Runs every engine and identity check that applies to `spec`.
pub fn verify(spec: &RegionSpec, engine: &Condenser, opts: VerifyOptions) -> VerifyReport {
    let mut report = VerifyReport {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        spec: spec.clone(),
        invalid: None,
        stats: None,
        counts: BTreeMap::new(),
        skipped: BTreeMap::new(),
        checks: Vec::new(),
        passed: false,
        timings_ms: None,
    };
    let mut timer = Timer {
        enabled: opts.timings,
        laps: BTreeMap::new(),
    };
    let region = match timer.time("build", || build_region(spec)) {
        Ok(r) => r,
        Err(e) => {
            report.invalid = Some(e.reason.code().to_string());
            return report;
        }
    };
    let stats = region.stats();
    report.stats = Some(stats);
    report.checks.extend(lemma_identities(spec, &stats));

    let mut checks = Vec::new();
    let formula = formula_count(&region);
    checks.push(IdentityCheck::new("exponent nonnegative", formula.is_ok()));
    let formula = formula.ok();
    if let Some(f) = &formula {
        report.counts.insert("formula".into(), f.to_string());
    }

    let agree =
        |name: &str, v: BigUint, checks: &mut Vec<IdentityCheck>, report: &mut VerifyReport| {
            checks.push(IdentityCheck::new(
                format!("{name} = formula"),
                Some(&v) == formula.as_ref(),
            ));
            report.counts.insert(name.into(), v.to_string());
        };

    let dual = dual_graph(&region);
    let brute = timer.time("brute", || {
        count_matchings_with_limit(&dual, opts.brute_limit)
    });
    let brute_ok = match brute {
        Ok(m) => {
            agree("brute", m, &mut checks, &mut report);
            true
        }
        Err(e) => {
            report.skipped.insert("brute".into(), e.to_string());
            false
        }
    };

    match timer.time("condense", || engine.count(spec)) {
        Ok(m) => agree("condense", m, &mut checks, &mut report),
        Err(e) => {
            checks.push(IdentityCheck::new(format!("condense runs ({e})"), false));
        }
    }

    match timer.time("shuffle", || exponent_s(spec)) {
        Ok(s) => {
            agree("shuffle", BigUint::from(1u8) << s, &mut checks, &mut report);
            checks.push(IdentityCheck::new(
                "S = C - w(w+1)/2",
                i64::try_from(s).ok() == Some(stats.exponent()),
            ));
            if let Ok(trace) = reduction_trace(spec) {
                let chain: u64 = trace.iter().map(|t| t.factor_log2).sum();
                checks.push(IdentityCheck::new(
                    "reduction chain exponent = S",
                    chain == s,
                ));
            }
        }
        Err(e) => {
            checks.push(IdentityCheck::new(format!("shuffle runs ({e})"), false));
        }
    }

    // the first binary step, checked on actual weighted graphs
    if let Ok(pattern) = characteristic_matrix(spec) {
        let q = pattern.rows / 2;
        if q <= NUMERIC_STEP_MAX_ORDER {
            let holds = timer.time("reduction step", || -> Option<bool> {
                let (next, t) = binary_reduction_step(&pattern, q).ok()?;
                let lhs = matching_generating_function(
                    &AztecGraph::from_pattern(&pattern, q).to_match_graph(),
                )
                .ok()?;
                let rhs = matching_generating_function(
                    &AztecGraph::from_pattern(&next, q - 1).to_match_graph(),
                )
                .ok()?;
                Some(lhs == rhs * BigRational::from_integer((BigUint::from(1u8) << t).into()))
            });
            checks.push(IdentityCheck::new(
                "binary reduction step",
                holds == Some(true),
            ));
        }
    }

    if brute_ok {
        let kuo = timer.time("kuo", || {
            pick_corners(&dual)
                .ok()
                .and_then(|q| verify_kuo(&dual, &q).ok())
        });
        checks.push(IdentityCheck::new(
            "Kuo identity on the dual",
            kuo.is_some_and(|k| k.holds),
        ));
    }

    match case_recurrence(spec) {
        Ok(rec) => {
            let subs: Result<Vec<BigUint>, _> =
                rec.sub_specs.iter().map(|s| engine.count(s)).collect();
            let whole = formula.clone();
            let holds = match (subs, whole) {
                (Ok(m), Some(total)) => match rec.form {
                    IdentityForm::Condensation => {
                        &total * &m[2] == BigUint::from(2u8) * &m[0] * &m[1]
                    }
                    IdentityForm::Multiple { factor } => total == &m[0] * factor,
                },
                _ => false,
            };
            checks.push(IdentityCheck::new(
                format!("case {} identity", rec.case_id),
                holds,
            ));
            if rec.case_id.is_case_one() {
                let balance = stats_deltas(spec).map(|d| d.balance_holds);
                checks.push(IdentityCheck::new(
                    "case delta balance",
                    matches!(balance, Ok(true)),
                ));
            }
        }
        Err(CondensationError::BaseCase(_)) => {}
        Err(e) => checks.push(IdentityCheck::new(format!("case dispatch ({e})"), false)),
    }

    report.checks.extend(checks);
    report.passed = report.checks.iter().all(|c| c.passed);
    if opts.timings {
        report.timings_ms = Some(timer.laps);
    }
    report
}

/// Whether a count failure was only a size limit.
pub fn is_size_limit(e: &CountError) -> bool {
    matches!(e, CountError::SizeLimit { .. })
}
