//! Built-in identity suite behind `polydiff selftest`.

use std::time::Instant;

use serde::Serialize;

use crate::constructions::{axis_simplex, factor_embed};
use crate::covers::{compositions, factorial, vandermonde_check_1, vandermonde_check_2};
use crate::error::Result;
use crate::mixed::{mixed_volume, mixed_volume_interpolation, MixedVolumeQuery};
use crate::polytope::VPolytope;
use crate::rational::{format_rational, int, point, Rational};
use crate::sample::{random_antiblocking, random_general, random_staircase, trial_rng};
use crate::verify::Verifier;

const SEED: u64 = 0x5e1f_7e57;

#[derive(Clone, Debug, Default)]
pub struct SelftestOptions {
    /// Skip the 6-dimensional cases.
    pub quick: bool,
    /// Perturb one expected coefficient so the suite must fail.
    pub inject_fault: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestRow {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub millis: u128,
}

fn row(name: &str, f: impl FnOnce() -> Result<std::result::Result<String, String>>) -> SelftestRow {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(e) => (false, format!("error: {e}")),
    };
    SelftestRow { name: name.to_string(), passed, detail, millis: start.elapsed().as_millis() }
}

/// `V(ι₁K[n], …, ι_pK[n])`.
pub fn factor_mixed_volume(body: &VPolytope, p: usize) -> Result<Rational> {
    let mut q = MixedVolumeQuery::new(body.dim() * p);
    for i in 0..p {
        q.push(&factor_embed(body, i, p)?, body.dim())?;
    }
    mixed_volume(&q)
}

/// `(n!)ᵖ/(pn)! · vol(K)ᵖ`.
pub fn factor_mixed_volume_expected(body: &VPolytope, p: usize) -> Rational {
    let n = body.dim();
    Rational::new(num_traits::pow(factorial(n), p), factorial(p * n)) * num_traits::pow(body.volume(), p)
}

fn vandermonde() -> std::result::Result<String, String> {
    let mut checked = 0;
    for n in 1..=6 {
        for p in 1..=3 {
            if !vandermonde_check_1(n, p) {
                return Err(format!("first identity fails at n={n}, p={p}"));
            }
            for k in 0..=n {
                if !vandermonde_check_2(n, p, k) {
                    return Err(format!("second identity fails at n={n}, p={p}, k={k}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} instances"))
}

fn factor_product(opts: &SelftestOptions) -> Result<std::result::Result<String, String>> {
    let mut cases = vec![(1, 2), (1, 3), (2, 2)];
    let mut checked = 0;
    for &(n, p) in &cases {
        for t in 0..5 {
            let body = random_staircase(&mut trial_rng(SEED, t), n, 4, 3)?;
            let mut expected = factor_mixed_volume_expected(&body, p);
            if opts.inject_fault && checked == 0 {
                expected *= Rational::new(1001.into(), 1000.into());
            }
            let got = factor_mixed_volume(&body, p)?;
            if got != expected {
                return Ok(Err(format!(
                    "(n,p)=({n},{p}) trial {t}: got {} expected {}",
                    format_rational(&got),
                    format_rational(&expected)
                )));
            }
            checked += 1;
        }
    }
    if !opts.quick {
        let simplex = axis_simplex(&[int(1), int(1), int(1)])?;
        let got = factor_mixed_volume(&simplex, 2)?;
        let expected = factor_mixed_volume_expected(&simplex, 2);
        if got != expected {
            return Ok(Err(format!("(3,2) simplex: got {} expected {}", format_rational(&got), format_rational(&expected))));
        }
        checked += 1;
        cases.push((3, 2));
    }
    Ok(Ok(format!("{checked} bodies over (n,p) in {cases:?}")))
}

fn oracle() -> Result<std::result::Result<String, String>> {
    let mut checked = 0;
    for t in 0..10u64 {
        let dim = 2 + (t % 2) as usize;
        let mut rng = trial_rng(SEED ^ 0x0_a11e, t);
        let a = random_general(&mut rng, dim, 2, 4)?;
        let b = random_general(&mut rng, dim, 2, 4)?;
        let q = MixedVolumeQuery::new(dim).with(&a, 1)?.with(&b, dim - 1)?;
        let (x, y) = (mixed_volume(&q)?, mixed_volume_interpolation(&q)?);
        if x != y {
            return Ok(Err(format!("query {t}: polarization {} vs interpolation {}", format_rational(&x), format_rational(&y))));
        }
        checked += 1;
    }
    Ok(Ok(format!("{checked} queries")))
}

fn cover_sum() -> Result<std::result::Result<String, String>> {
    let mut checked = 0;
    for t in 0..5 {
        let body = random_antiblocking(&mut trial_rng(SEED ^ 0xc0, t), 2, 3, 3)?;
        let v = Verifier::new();
        for k in 0..=2 {
            for kvec in compositions(k, 2, 2) {
                let r = v.conjecture2(&body, 2, &kvec)?;
                if r.any_violation() {
                    return Ok(Err(format!("trial {t}, kvec {kvec:?}: {}", r.summary_line())));
                }
                checked += 1;
            }
        }
    }
    Ok(Ok(format!("{checked} instances, per-cover and summed")))
}

fn simplex_battery() -> Result<std::result::Result<String, String>> {
    let mut checked = 0;
    let fail = |what: String| Ok(Err(what));
    for c in [vec![int(1), int(1)], vec![int(1), int(2), int(3)]] {
        let body = axis_simplex(&c)?;
        let v = Verifier::new().with_cross_checks(false);
        let n = body.dim();
        for k in 0..=n {
            let r = v.godbersen(&body, k)?;
            if !r.equality {
                return fail(r.summary_line());
            }
            checked += 1;
        }
        if n == 2 {
            for k in 0..=n {
                let r = v.conjecture1(&body, 2, k)?;
                if !r.equality {
                    return fail(r.summary_line());
                }
                for kvec in compositions(k, 2, n) {
                    let r = v.conjecture2(&body, 2, &kvec)?;
                    if !r.equality {
                        return fail(r.summary_line());
                    }
                    checked += 1;
                }
                checked += 1;
            }
        }
    }
    Ok(Ok(format!("{checked} equality cases")))
}

fn schneider_6d() -> Result<std::result::Result<String, String>> {
    let square = VPolytope::hull([[0, 0], [1, 0], [0, 1], [1, 1]].map(|r| point(&r)))?;
    let r = Verifier::new().with_cross_checks(false).schneider(&square, 3)?;
    if r.any_violation() || r.lhs != int(16) {
        return Ok(Err(r.summary_line()));
    }
    Ok(Ok(format!("vol D_3[0,1]^2 = {}", format_rational(&r.lhs))))
}

/// Runs the suite. The order of rows is fixed.
pub fn run_selftest(opts: &SelftestOptions) -> Vec<SelftestRow> {
    let mut rows = vec![
        row("vandermonde", || Ok(vandermonde())),
        row("factor-product", || factor_product(opts)),
        row("oracle-equivalence", oracle),
        row("cover-sum", cover_sum),
        row("simplex-equality", simplex_battery),
    ];
    if !opts.quick {
        rows.push(row("schneider-6d", schneider_6d));
    }
    rows
}

pub fn all_passed(rows: &[SelftestRow]) -> bool {
    !rows.is_empty() && rows.iter().all(|r| r.passed)
}

pub fn format_table(rows: &[SelftestRow]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        let status = if r.passed { "pass" } else { "FAIL" };
        out.push_str(&format!("{status}  {:<width$}  {:>6} ms  {}\n", r.name, r.millis, r.detail));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes_and_fault_is_caught() {
        let rows = run_selftest(&SelftestOptions { quick: true, inject_fault: false });
        assert!(all_passed(&rows), "{}", format_table(&rows));
        let rows = run_selftest(&SelftestOptions { quick: true, inject_fault: true });
        assert!(!all_passed(&rows));
        assert!(!rows.iter().find(|r| r.name == "factor-product").unwrap().passed);
        assert!(rows.iter().filter(|r| r.name != "factor-product").all(|r| r.passed));
    }
}
