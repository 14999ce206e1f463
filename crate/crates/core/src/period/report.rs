//! Running every applicable method and flagging disagreements.

use serde::{Deserialize, Serialize};

use super::{
    period_analytic, period_bruteforce, period_spectral, Method, PeriodResult, PeriodStatus,
};
use crate::coins::CoinDocument;
use crate::error::{Error, Result};
use crate::walk::{WalkSpec, DENSE_GUARD};

#[derive(Clone, Debug, PartialEq)]
pub struct CrossReport {
    pub results: Vec<PeriodResult>,
    pub agreement: bool,
}

/// Two results contradict each other when both are finite and differ, when a
/// finite period lies inside the other's search bound, or when one is finite
/// and the other proven infinite.
fn contradicts(a: &PeriodStatus, b: &PeriodStatus) -> bool {
    use PeriodStatus::*;
    match (a, b) {
        (Finite(s), Finite(t)) => s != t,
        (Finite(t), NoPeriodUpTo(bound)) | (NoPeriodUpTo(bound), Finite(t)) => t <= bound,
        (Finite(_), ProvenInfinite) | (ProvenInfinite, Finite(_)) => true,
        _ => false,
    }
}

fn not_applicable(method: Method, why: String) -> PeriodResult {
    PeriodResult {
        method,
        status: PeriodStatus::NotApplicable(why),
        theorem: None,
    }
}

/// Runs the selected methods in the fixed order analytic, spectral, brute
/// force; `tol` is the identity tolerance for brute-force powering.
pub fn cross_validate(
    spec: &WalkSpec,
    tmax: u64,
    qmax: u64,
    methods: &[Method],
    tol: f64,
) -> Result<CrossReport> {
    let mut results = Vec::new();
    for method in [Method::Analytic, Method::Spectral, Method::BruteForce] {
        if !methods.contains(&method) {
            continue;
        }
        let res = match method {
            Method::Analytic => match period_analytic(spec, qmax) {
                Err(Error::NotApplicable(why)) => not_applicable(method, why),
                other => other?,
            },
            Method::Spectral => period_spectral(spec, qmax)?,
            Method::BruteForce if spec.n() > DENSE_GUARD => {
                not_applicable(method, format!("n = {} exceeds the dense guard", spec.n()))
            }
            Method::BruteForce => period_bruteforce(spec, tmax, tol)?,
        };
        results.push(res);
    }
    let agreement = results
        .iter()
        .enumerate()
        .all(|(i, a)| results[i + 1..].iter().all(|b| !contradicts(&a.status, &b.status)));
    Ok(CrossReport { results, agreement })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub method: String,
    pub status: String,
    pub period: Option<u64>,
    pub bound: Option<u64>,
    pub theorem: Option<String>,
}

impl From<&PeriodResult> for ResultDocument {
    fn from(r: &PeriodResult) -> Self {
        let (period, bound) = match r.status {
            PeriodStatus::Finite(t) => (Some(t), None),
            PeriodStatus::NoPeriodUpTo(b) => (None, Some(b)),
            _ => (None, None),
        };
        ResultDocument {
            method: r.method.tag().to_string(),
            status: r.status.tag().to_string(),
            period,
            bound,
            theorem: r.theorem.map(|t| t.tag().to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub n: usize,
    pub a: usize,
    pub coin: CoinDocument,
    pub results: Vec<ResultDocument>,
    pub agreement: bool,
}

impl PeriodReport {
    pub fn new(spec: &WalkSpec, report: &CrossReport) -> Self {
        PeriodReport {
            n: spec.n(),
            a: spec.a(),
            coin: CoinDocument::from_coin(spec.coin()),
            results: report.results.iter().map(ResultDocument::from).collect(),
            agreement: report.agreement,
        }
    }
}
