//! Digamma on the positive reals, tuned for rational arguments k/q.
//!
//! Evaluation is upward recurrence into w = z + N >= 16 followed by the
//! Bernoulli asymptotic series truncated after the w^{-14} term. The per-value
//! error bound is carried along so downstream L-value radii stay rigorous.

use rayon::prelude::*;

use crate::arith::KahanSum;
use crate::error::{Error, Result};

/// Recurrence target: the asymptotic series is only used for w >= 16.
const SHIFT_TARGET: f64 = 16.0;

/// B_{2k}/(2k) for k = 1..=7, the coefficients of the asymptotic tail.
const ASYMPTOTIC_COEFFS: [f64; 7] = [
    1.0 / 12.0,
    1.0 / 120.0,
    1.0 / 252.0,
    1.0 / 240.0,
    1.0 / 132.0,
    691.0 / 32760.0,
    1.0 / 12.0,
];

/// |B_16|/16, the magnitude coefficient of the first omitted term.
const REMAINDER_COEFF: f64 = 3617.0 / 8160.0;

/// Unit roundoff of f64.
const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// A digamma evaluation together with its a priori error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DigammaValue {
    pub argument: f64,
    pub value: f64,
    /// Analytic remainder of the truncated asymptotic series plus N units of
    /// roundoff for the N-step recurrence.
    pub abs_error: f64,
}

/// psi(z) for z > 0. Rejects z <= 0 (and NaN).
pub fn digamma(z: f64) -> Result<DigammaValue> {
    if z.is_nan() || z <= 0.0 {
        return Err(Error::NonpositiveArgument { z });
    }
    let shift = if z >= SHIFT_TARGET {
        0u32
    } else {
        (SHIFT_TARGET - z).ceil() as u32
    };
    let mut recurrence = KahanSum::new();
    for j in 0..shift {
        recurrence.add(1.0 / (z + f64::from(j)));
    }
    let w = z + f64::from(shift);
    let r = 1.0 / (w * w);
    let [c1, c2, c3, c4, c5, c6, c7] = ASYMPTOTIC_COEFFS;
    let tail = r * (c1 - r * (c2 - r * (c3 - r * (c4 - r * (c5 - r * (c6 - r * c7))))));
    let value = w.ln() - 0.5 / w - tail - recurrence.value();
    let abs_error = REMAINDER_COEFF * r.powi(8) + f64::from(shift) * UNIT_ROUNDOFF;
    Ok(DigammaValue { argument: z, value, abs_error })
}

/// The row psi(k/q) for k = 1..q, with the worst per-entry error bound.
#[derive(Debug, Clone)]
pub struct DigammaRow {
    q: u64,
    values: Vec<f64>,
    max_abs_error: f64,
}

impl DigammaRow {
    pub fn new(q: u64) -> Self {
        assert!(q >= 1, "digamma row requires q >= 1");
        let qf = q as f64;
        let eval = |k: u64| digamma(k as f64 / qf).expect("k/q is positive");
        let entries: Vec<DigammaValue> = if q >= 4096 {
            (1..=q).into_par_iter().map(eval).collect()
        } else {
            (1..=q).map(eval).collect()
        };
        let max_abs_error = entries.iter().map(|v| v.abs_error).fold(0.0, f64::max);
        DigammaRow {
            q,
            values: entries.into_iter().map(|v| v.value).collect(),
            max_abs_error,
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// psi(k/q) at index k - 1.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_abs_error(&self) -> f64 {
        self.max_abs_error
    }
}
