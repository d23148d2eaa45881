//! Exact integer arithmetic, multiplicative functions, and the compensated
//! harmonic/Mertens sums everything else consumes.
//!
//! All integer work is 64-bit with checked multiplication; overflow is
//! reported, never wrapped. Floating sums of harmonic type go through
//! [`KahanSum`] so the residual checks downstream are not polluted by
//! accumulation error.

use crate::error::{Error, Result};

/// Euler–Mascheroni constant, 20 significant digits.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.57721566490153286061;

/// Kahan–Babuška (Neumaier) compensated accumulator.
///
/// Keeps the running error term separate, so sums of n terms carry an error
/// of a few ulps instead of O(n) ulps.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for u64. The base set below is a proven
/// witness set for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard rho with Floyd cycle detection. Caller guarantees n is odd,
/// composite, and has no prime factor below the trial-division cutoff.
fn pollard_rho(n: u64) -> u64 {
    let step = |x: u64, c: u64| ((mod_mul(x, x, n) as u128 + c as u128) % n as u128) as u64;
    for c in 1..n {
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = step(x, c);
            y = step(step(y, c), c);
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!("pollard rho exhausted all polynomial offsets");
}

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

fn factor_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_large(d, out);
    factor_large(n / d, out);
}

/// A positive integer with its ordered prime-power decomposition.
///
/// Invariants: primes strictly increasing, every exponent >= 1, and the
/// product of the prime powers reconstructs `n`. `n == 1` has no factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Ordered `(prime, exponent)` pairs.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// phi(n) = prod p^(e-1) (p-1); phi(1) = 1.
    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e - 1) * (p - 1))
            .product()
    }

    /// 0 if any exponent exceeds 1, otherwise (-1)^(number of primes).
    pub fn mobius(&self) -> i32 {
        if self.factors.iter().any(|&(_, e)| e >= 2) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Number of divisors, prod (e + 1).
    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| u64::from(e) + 1).product()
    }

    /// Product of the distinct primes dividing n; radical(1) = 1.
    pub fn radical(&self) -> u64 {
        self.factors.iter().map(|&(p, _)| p).product()
    }

    /// Sum over distinct primes p | n of log p / (p - 1); empty sum is 0.
    pub fn prime_log_sum(&self) -> f64 {
        let mut acc = KahanSum::new();
        for &(p, _) in &self.factors {
            acc.add((p as f64).ln() / (p - 1) as f64);
        }
        acc.value()
    }

    /// All divisors of n, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let prev = out.len();
            let mut pw = 1u64;
            for _ in 0..e {
                pw *= p;
                for i in 0..prev {
                    out.push(out[i] * pw);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Squarefree divisors with their Moebius values, ascending by divisor.
    /// These are exactly the divisors that survive in Moebius-weighted sums.
    pub fn squarefree_divisors(&self) -> Vec<(u64, i32)> {
        let mut out = vec![(1u64, 1i32)];
        for &(p, _) in &self.factors {
            let prev = out.len();
            for i in 0..prev {
                let (d, mu) = out[i];
                out.push((d * p, -mu));
            }
        }
        out.sort_unstable_by_key(|&(d, _)| d);
        out
    }
}

/// Factor a positive integer: trial division up to 10^6, Pollard rho for
/// whatever survives. Rejects n = 0.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut factors = Vec::new();
    let mut m = n;
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_LIMIT && d * d <= m {
        if m % d == 0 {
            let mut e = 0u32;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        if d * d > m || is_prime(m) {
            factors.push((m, 1));
        } else {
            let mut large = Vec::new();
            factor_large(m, &mut large);
            large.sort_unstable();
            let mut i = 0;
            while i < large.len() {
                let p = large[i];
                let mut e = 0u32;
                while i < large.len() && large[i] == p {
                    e += 1;
                    i += 1;
                }
                factors.push((p, e));
            }
        }
    }
    factors.sort_unstable_by_key(|&(p, _)| p);
    debug_assert_eq!(
        factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product::<u64>(),
        n
    );
    Ok(Factorization { n, factors })
}

/// Exact sum of 1/n over 1 <= n <= x with gcd(n, q) = 1, by direct
/// summation with compensated accumulation.
pub fn coprime_harmonic(x: f64, f: &Factorization) -> f64 {
    assert!(x >= 1.0, "coprime_harmonic requires x >= 1");
    let q = f.n();
    let cutoff = x.floor() as u64;
    let mut acc = KahanSum::new();
    for n in 1..=cutoff {
        if q == 1 || gcd(n % q, q) == 1 {
            acc.add(1.0 / n as f64);
        }
    }
    acc.value()
}

/// All primes up to and including `limit`.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Product over primes p <= x of (1 - 1/p).
pub fn mertens_product(x: f64) -> f64 {
    assert!(x >= 2.0, "mertens_product requires x >= 2");
    sieve_primes(x.floor() as u64)
        .iter()
        .map(|&p| 1.0 - 1.0 / p as f64)
        .product()
}

/// The squarefree integer with prime set {p <= x}, as a factorization.
/// Overflow of u64 is reported, not wrapped.
pub fn primorial(x: f64) -> Result<Factorization> {
    assert!(x >= 2.0, "primorial requires x >= 2");
    let primes = sieve_primes(x.floor() as u64);
    let mut n = 1u64;
    for &p in &primes {
        n = n
            .checked_mul(p)
            .ok_or(Error::Overflow { context: "computing a primorial" })?;
    }
    Ok(Factorization {
        n,
        factors: primes.into_iter().map(|p| (p, 1)).collect(),
    })
}
