//! Seeded randomized searches for violations.

use std::cmp::Ordering;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::polytope::{check_dim_cap, VPolytope};
use crate::rational::{serde_string, Rational};
use crate::report::VerificationReport;
use crate::sample::{random_antiblocking, random_axis_simplex, random_general, trial_rng};
use crate::verify::Verifier;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchTarget {
    Godbersen,
    Conj1,
    Conj2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyClass {
    /// Staircase bodies, with axis simplices mixed in.
    Antiblocking,
    /// Hulls of random grid points in `[−1, 1]ⁿ`.
    General,
    /// Axis simplices only.
    Simplex,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchConfig {
    pub target: SearchTarget,
    pub body_class: BodyClass,
    pub n: usize,
    pub p: usize,
    /// `[k]` for `godbersen` and `conj1`, `[k₁, …, k_p]` for `conj2`.
    pub k_spec: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub grid_q: u32,
    /// Generator count per body.
    pub points: usize,
    #[serde(skip)]
    pub force: bool,
}

impl SearchConfig {
    pub fn new(target: SearchTarget, body_class: BodyClass, n: usize, p: usize, k_spec: Vec<usize>) -> Self {
        Self { target, body_class, n, p, k_spec, trials: 100, seed: 0, grid_q: 4, points: 4, force: false }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 {
            return Err(invalid("n and p must be positive"));
        }
        if self.trials == 0 {
            return Err(invalid("at least one trial is required"));
        }
        if self.grid_q == 0 {
            return Err(invalid("grid resolution must be positive"));
        }
        let dim = match self.target {
            SearchTarget::Godbersen => self.n,
            _ => self.p * self.n,
        };
        check_dim_cap(dim, self.force)?;
        let want = match self.target {
            SearchTarget::Conj2 => self.p,
            _ => 1,
        };
        if self.k_spec.len() != want {
            return Err(invalid(format!("k-spec needs {want} entries, got {}", self.k_spec.len())));
        }
        let total: usize = self.k_spec.iter().sum();
        if self.k_spec.iter().any(|&k| k > self.n) || total > self.n {
            return Err(invalid(format!("k-spec {:?} is out of range for n = {}", self.k_spec, self.n)));
        }
        Ok(())
    }

    /// The body used by trial `trial`.
    pub fn body(&self, trial: u64) -> Result<VPolytope> {
        let mut rng = trial_rng(self.seed, trial);
        match self.body_class {
            BodyClass::Antiblocking => random_antiblocking(&mut rng, self.n, self.grid_q, self.points),
            BodyClass::General => random_general(&mut rng, self.n, self.grid_q, self.points),
            BodyClass::Simplex => random_axis_simplex(&mut rng, self.n, self.grid_q),
        }
    }

    fn run_trial(&self, trial: u64) -> Result<VerificationReport> {
        let body = self.body(trial)?;
        let v = Verifier::new().with_force(self.force);
        let mut report = match self.target {
            SearchTarget::Godbersen => v.godbersen(&body, self.k_spec[0])?,
            SearchTarget::Conj1 => v.conjecture1(&body, self.p, self.k_spec[0])?,
            SearchTarget::Conj2 => v.conjecture2(&body, self.p, &self.k_spec)?,
        };
        report.params.trial = Some(trial);
        Ok(report)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchSummary {
    pub trials: u64,
    pub violations: usize,
    /// Violations on inputs where the statement is a theorem.
    pub proven_violations: usize,
    pub equalities: usize,
    pub equality_mismatches: usize,
    #[serde(with = "serde_string")]
    pub min_gap: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub config: SearchConfig,
    pub summary: SearchSummary,
    pub reports: Vec<VerificationReport>,
}

fn by_gap(a: &VerificationReport, b: &VerificationReport) -> Ordering {
    a.gap.cmp(&b.gap).then(a.params.trial.cmp(&b.params.trial))
}

/// Runs every trial and returns the reports sorted by gap, ties broken by
/// trial index.
pub fn search_counterexamples(config: &SearchConfig) -> Result<Vec<VerificationReport>> {
    config.validate()?;
    let mut reports = (0..config.trials).into_par_iter().map(|t| config.run_trial(t)).collect::<Result<Vec<_>>>()?;
    reports.sort_by(by_gap);
    Ok(reports)
}

pub fn run_search(config: &SearchConfig) -> Result<SearchOutcome> {
    let reports = search_counterexamples(config)?;
    let summary = SearchSummary {
        trials: config.trials,
        violations: reports.iter().filter(|r| r.any_violation()).count(),
        proven_violations: reports.iter().filter(|r| r.any_violation() && r.proven).count(),
        equalities: reports.iter().filter(|r| r.equality).count(),
        equality_mismatches: reports.iter().filter(|r| r.equality_mismatch()).count(),
        min_gap: reports.first().map(|r| r.gap.clone()).unwrap_or_else(Rational::zero),
    };
    Ok(SearchOutcome { config: config.clone(), summary, reports })
}
