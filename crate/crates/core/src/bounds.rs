//! Every explicit bound expression the verification harness checks, the
//! per-modulus report, and the primorial trend study.
//!
//! Asymptotic statements are not checkable at desk scale; the study reports
//! raw finite-q ratios against their limiting reference constants and leaves
//! extrapolation to the reader.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{coprime_harmonic, factorize, sieve_primes, Factorization, EULER_GAMMA};
use crate::chargroup::{CharacterGroup, DirichletCharacter};
use crate::error::{Error, Result};
use crate::lfun::{all_l1_digamma};
use crate::specfun::DigammaRow;

/// Refusal threshold for the primorial study: q * phi(q) elementary
/// character evaluations per modulus.
pub const WORK_BUDGET: f64 = 2.0e9;

/// e^{-gamma}, the Mertens-product constant.
pub fn e_neg_gamma() -> f64 {
    (-EULER_GAMMA).exp()
}

/// e^{-gamma}/2, the limiting reference for the refined ratio.
pub fn half_e_neg_gamma() -> f64 {
    0.5 * e_neg_gamma()
}

/// Main term of the coprime harmonic sum:
/// (phi(q)/q) (log x + sum_{p|q} log p/(p-1) + gamma).
pub fn harmonic_main_term(f: &Factorization, x: f64) -> f64 {
    assert!(x >= 1.0, "harmonic main term requires x >= 1");
    let q = f.n() as f64;
    let phi_ratio = f.euler_phi() as f64 / q;
    phi_ratio * (x.ln() + f.prime_log_sum() + EULER_GAMMA)
}

/// Exact coprime harmonic sum minus its main term. Callers compare the
/// result against tau(q)/x. Requires x >= q so that every divisor d of q
/// satisfies x/d >= 1, which is what makes the constant-1 harmonic tail
/// bound applicable.
pub fn harmonic_residual(f: &Factorization, x: f64) -> Result<f64> {
    if x < f.n() as f64 {
        return Err(Error::Precondition(format!(
            "harmonic residual needs x >= q, got x = {x}, q = {}",
            f.n()
        )));
    }
    Ok(coprime_harmonic(x, f) - harmonic_main_term(f, x))
}

/// Diagnostic gap sum_{p|q} log p/(p-1) - log log rad(q), expected bounded
/// above by a small constant. Requires rad(q) >= 3 so the double log is
/// defined and positive.
pub fn radical_log_gap(f: &Factorization) -> Result<f64> {
    let rad = f.radical();
    if rad < 3 {
        return Err(Error::Precondition(format!(
            "radical log gap needs rad(q) >= 3, got {rad}"
        )));
    }
    Ok(f.prime_log_sum() - (rad as f64).ln().ln())
}

/// The strict per-modulus bound (phi(q)/q)(log q + sum_{p|q} log p/(p-1)):
/// |L(1, chi)| stays strictly below it for every non-principal chi mod q.
pub fn strict_l1_bound(f: &Factorization) -> f64 {
    let q = f.n();
    assert!(q >= 3, "strict bound is stated for q >= 3");
    let phi_ratio = f.euler_phi() as f64 / q as f64;
    phi_ratio * ((q as f64).ln() + f.prime_log_sum())
}

/// The refined leading term (1/2)(phi(q)/q) log q.
pub fn refined_main_term(f: &Factorization) -> f64 {
    0.5 * f.euler_phi() as f64 / f.n() as f64 * (f.n() as f64).ln()
}

/// Truncation point for the per-character explicit bound: the classical
/// choice sqrt(q) log q, floored at q so the explicit residual bound stays
/// valid. Enlarging x only shrinks the tail term at these sizes.
pub fn truncation_point(q: u64) -> f64 {
    let qf = q as f64;
    qf.max(qf.sqrt() * qf.ln())
}

/// Fully explicit, rigorous upper bound for |L(1, chi)|:
/// main term at x = max(q, sqrt(q) log q), plus tau(q)/x for the harmonic
/// residual, plus sup/x for the character tail.
pub fn truncation_l1_bound(chi: &DirichletCharacter<'_>) -> Result<f64> {
    let f = factorize(chi.modulus())?;
    let sup = chi.sup_partial_sum()?;
    Ok(truncation_l1_bound_parts(&f, sup))
}

fn truncation_l1_bound_parts(f: &Factorization, sup: f64) -> f64 {
    let x = truncation_point(f.n());
    harmonic_main_term(f, x) + f.tau() as f64 / x + sup / x
}

/// Per-modulus record of bound values, maxima over characters, and margins.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub q: u64,
    /// phi(q)/q.
    pub phi_ratio: f64,
    /// max over x in {q, 10q, 100q} of |harmonic residual|; each individual
    /// residual is bounded by tau(q)/x.
    pub harmonic_residual_max: f64,
    /// (phi/q)(log q + sum log p/(p-1)).
    pub strict_bound: f64,
    /// (1/2)(phi/q) log q.
    pub refined_main: f64,
    /// max over non-principal chi of |L(1, chi)| (digamma route).
    pub max_abs_l1: f64,
    /// (max_abs_l1 - refined_main) / (phi_ratio * log log q); only reported
    /// for q >= 16 where the scaled denominator is comfortably positive.
    pub refined_residual_ratio: Option<f64>,
    /// min over chi of strict_bound - |L| - abs_error; positive on every
    /// verified modulus.
    pub strict_margin_min: f64,
    /// min over chi of truncation bound - (|L| - abs_error); nonnegative on
    /// every verified modulus.
    pub truncation_margin_min: f64,
    /// max over chi of sup / (sqrt(q) log q).
    pub pv_ratio_max: f64,
}

/// Evaluate every non-principal character mod q and fill a [`BoundReport`].
pub fn verify_modulus(q: u64) -> Result<BoundReport> {
    if q < 3 {
        return Err(Error::NoNonprincipalCharacter { q });
    }
    let f = factorize(q)?;
    let group = CharacterGroup::new(q)?;
    let estimates = all_l1_digamma(&group)?;
    let chars: Vec<DirichletCharacter> =
        group.characters().filter(|c| !c.is_principal()).collect();
    let sups: Vec<f64> = chars
        .par_iter()
        .map(|c| c.sup_partial_sum())
        .collect::<Result<_>>()?;

    let qf = q as f64;
    let phi_ratio = f.euler_phi() as f64 / qf;
    let strict_bound = strict_l1_bound(&f);
    let refined_main = refined_main_term(&f);
    let pv_denominator = qf.sqrt() * qf.ln();

    let mut max_abs_l1 = 0.0f64;
    let mut strict_margin_min = f64::INFINITY;
    let mut truncation_margin_min = f64::INFINITY;
    let mut pv_ratio_max = 0.0f64;
    for (est, &sup) in estimates.iter().zip(&sups) {
        let norm = est.value.norm();
        max_abs_l1 = max_abs_l1.max(norm);
        strict_margin_min = strict_margin_min.min(strict_bound - norm - est.abs_error);
        let bound = truncation_l1_bound_parts(&f, sup);
        truncation_margin_min = truncation_margin_min.min(bound - (norm - est.abs_error));
        pv_ratio_max = pv_ratio_max.max(sup / pv_denominator);
    }

    let mut harmonic_residual_max = 0.0f64;
    for mult in [1.0, 10.0, 100.0] {
        harmonic_residual_max = harmonic_residual_max.max(harmonic_residual(&f, qf * mult)?.abs());
    }

    let refined_residual_ratio = if q >= 16 {
        Some((max_abs_l1 - refined_main) / (phi_ratio * qf.ln().ln()))
    } else {
        None
    };

    Ok(BoundReport {
        q,
        phi_ratio,
        harmonic_residual_max,
        strict_bound,
        refined_main,
        max_abs_l1,
        refined_residual_ratio,
        strict_margin_min,
        truncation_margin_min,
        pv_ratio_max,
    })
}

/// One row of the primorial study.
#[derive(Debug, Clone, Serialize)]
pub struct PrimorialRow {
    /// Largest prime in the modulus; q is the product of all primes up to it.
    pub prime_cutoff: u64,
    pub q: u64,
    pub phi: u64,
    pub loglog_q: f64,
    pub max_abs_l1: f64,
    /// max_abs_l1 / (log q / log log q); the refined reference is its
    /// limiting ceiling.
    pub ratio: f64,
    /// e^{-gamma}/2.
    pub refined_reference: f64,
    /// strict_l1_bound(q) / (log q / log log q), approaching the full
    /// Mertens constant from the strict bound side.
    pub strict_ratio: f64,
    /// e^{-gamma}.
    pub strict_reference: f64,
    /// phi(q)/q, exactly the Mertens product over the primes in q.
    pub phi_ratio: f64,
    /// e^{-gamma} / log(prime_cutoff), the Mertens asymptote for phi_ratio.
    pub mertens_reference: f64,
}

/// Evaluate all primorial moduli prod_{p <= x} p for x <= x_max.
///
/// The modulus q = 2 carries no non-principal character and is skipped.
/// Refuses cleanly (work budget) when any listed modulus would need more
/// than [`WORK_BUDGET`] character evaluations.
pub fn primorial_study(x_max: f64) -> Result<Vec<PrimorialRow>> {
    let primes = sieve_primes(x_max.max(0.0).floor() as u64);
    let mut moduli = Vec::new();
    let mut product = 1u64;
    for &p in &primes {
        product = product
            .checked_mul(p)
            .ok_or(Error::Overflow { context: "computing a primorial" })?;
        if product < 3 {
            continue;
        }
        let f = factorize(product)?;
        let cost = product as f64 * f.euler_phi() as f64;
        if cost > WORK_BUDGET {
            return Err(Error::WorkBudget { q: product, cost, budget: WORK_BUDGET });
        }
        moduli.push((p, f));
    }
    moduli
        .into_par_iter()
        .map(|(prime_cutoff, f)| {
            let q = f.n();
            let group = CharacterGroup::new(q)?;
            let row = DigammaRow::new(q);
            let chars: Vec<DirichletCharacter> =
                group.characters().filter(|c| !c.is_principal()).collect();
            let max_abs_l1 = chars
                .par_iter()
                .map(|chi| {
                    crate::lfun::l1_digamma_with_row(chi, &row).map(|est| est.value.norm())
                })
                .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;
            let qf = q as f64;
            let scale = qf.ln().ln() / qf.ln();
            Ok(PrimorialRow {
                prime_cutoff,
                q,
                phi: f.euler_phi(),
                loglog_q: qf.ln().ln(),
                max_abs_l1,
                ratio: max_abs_l1 * scale,
                refined_reference: half_e_neg_gamma(),
                strict_ratio: strict_l1_bound(&f) * scale,
                strict_reference: e_neg_gamma(),
                phi_ratio: f.euler_phi() as f64 / qf,
                mertens_reference: e_neg_gamma() / (prime_cutoff as f64).ln(),
            })
        })
        .collect()
}
