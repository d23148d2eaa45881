//! The unit group (Z/qZ)^* as a product of cyclic components, Dirichlet
//! characters as exponent vectors against those components, and the partial
//! character sums feeding the truncation bounds.
//!
//! Character values are held as exact angle fractions (numerator over the lcm
//! of the component orders) and only converted to complex floats at the last
//! moment; character equality never touches floats.

use num_complex::Complex64;

use crate::arith::{self, factorize, gcd, lcm, mod_pow};
use crate::error::{Error, Result};

/// Hard cap on group construction; above this we refuse rather than degrade.
pub const MODULUS_CAP: u64 = 10_000_000;

const NO_DLOG: u32 = u32::MAX;

/// One cyclic factor of (Z/qZ)^*.
#[derive(Debug, Clone)]
struct Component {
    /// Generator lifted to a residue mod q (1 on every other prime power).
    generator: u64,
    order: u64,
    /// The prime power this component lives in.
    chunk: u64,
    /// Discrete log of r mod chunk within this component, NO_DLOG when r is
    /// not invertible mod chunk.
    dlog: Vec<u32>,
}

/// The character group modulo q, with eager discrete-log tables.
///
/// Construction is single-threaded; the finished group is immutable and safe
/// to share across threads.
#[derive(Debug, Clone)]
pub struct CharacterGroup {
    modulus: u64,
    phi: u64,
    /// Set when 2 divides q exactly once: the 2-part contributes no cyclic
    /// component but still knocks out even residues.
    needs_odd: bool,
    components: Vec<Component>,
    /// lcm of the component orders; common denominator of all angles.
    angle_denominator: u64,
}

fn mod_inv(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    debug_assert_eq!(old_r, 1, "inverse requires coprime arguments");
    old_s.rem_euclid(m as i128) as u64
}

/// Lift `residue` mod `chunk` to the residue mod q that is 1 modulo q/chunk.
fn crt_lift(residue: u64, chunk: u64, q: u64) -> u64 {
    if chunk == q {
        return residue % q;
    }
    let rest = q / chunk;
    // x = residue + chunk * t with t = (1 - residue) * chunk^{-1} mod rest
    let inv = mod_inv(chunk % rest, rest);
    let delta = (1 + rest - residue % rest) % rest;
    let t = arith::mod_mul(delta, inv, rest);
    (residue as u128 + chunk as u128 * t as u128) as u64 % q
}

/// Smallest positive primitive root modulo an odd prime power, by exhaustive
/// order check against the factored group order.
fn primitive_root(chunk: u64, p: u64, order: u64) -> u64 {
    let order_primes: Vec<u64> = factorize(order)
        .expect("order is positive")
        .factors()
        .iter()
        .map(|&(r, _)| r)
        .collect();
    for g in 2..chunk {
        if g % p == 0 {
            continue;
        }
        if order_primes.iter().all(|&r| mod_pow(g, order / r, chunk) != 1) {
            return g;
        }
    }
    unreachable!("every odd prime power has a primitive root");
}

fn power_table(generator: u64, order: u64, chunk: u64) -> Vec<u32> {
    let mut table = vec![NO_DLOG; chunk as usize];
    let mut x = 1u64;
    for j in 0..order {
        debug_assert_eq!(table[x as usize], NO_DLOG);
        table[x as usize] = j as u32;
        x = arith::mod_mul(x, generator, chunk);
    }
    debug_assert_eq!(x, 1, "generator order mismatch");
    table
}

impl CharacterGroup {
    /// Build the group for modulus q >= 1 via the CRT decomposition over
    /// prime powers. Rejects q = 0 and q above [`MODULUS_CAP`].
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::ZeroModulus);
        }
        if q > MODULUS_CAP {
            return Err(Error::ModulusTooLarge { q, cap: MODULUS_CAP });
        }
        let f = factorize(q)?;
        let mut needs_odd = false;
        let mut components = Vec::new();
        for &(p, e) in f.factors() {
            let chunk = p.pow(e);
            if p == 2 {
                match e {
                    1 => needs_odd = true,
                    2 => components.push(Component {
                        generator: 3,
                        order: 2,
                        chunk: 4,
                        dlog: power_table(3, 2, 4),
                    }),
                    _ => {
                        // (Z/2^e)^* = {+-1} x <5>
                        let half = chunk / 4;
                        let mut sign_dlog = vec![NO_DLOG; chunk as usize];
                        let mut five_dlog = vec![NO_DLOG; chunk as usize];
                        for s in 0..2u64 {
                            let mut x = if s == 0 { 1 } else { chunk - 1 };
                            for t in 0..half {
                                debug_assert_eq!(sign_dlog[x as usize], NO_DLOG);
                                sign_dlog[x as usize] = s as u32;
                                five_dlog[x as usize] = t as u32;
                                x = arith::mod_mul(x, 5, chunk);
                            }
                        }
                        components.push(Component {
                            generator: chunk - 1,
                            order: 2,
                            chunk,
                            dlog: sign_dlog,
                        });
                        components.push(Component {
                            generator: 5,
                            order: half,
                            chunk,
                            dlog: five_dlog,
                        });
                    }
                }
            } else {
                let order = (p - 1) * p.pow(e - 1);
                let g = primitive_root(chunk, p, order);
                components.push(Component {
                    generator: g,
                    order,
                    chunk,
                    dlog: power_table(g, order, chunk),
                });
            }
        }
        for c in &mut components {
            c.generator = crt_lift(c.generator, c.chunk, q);
        }
        let phi = components.iter().map(|c| c.order).product();
        let angle_denominator = components.iter().fold(1, |acc, c| lcm(acc, c.order));
        Ok(CharacterGroup {
            modulus: q,
            phi,
            needs_odd,
            components,
            angle_denominator,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// phi(q), the number of characters.
    pub fn phi(&self) -> u64 {
        self.phi
    }

    /// Orders of the cyclic components, in component order.
    pub fn component_orders(&self) -> Vec<u64> {
        self.components.iter().map(|c| c.order).collect()
    }

    /// CRT-lifted generators, in component order.
    pub fn component_generators(&self) -> Vec<u64> {
        self.components.iter().map(|c| c.generator).collect()
    }

    fn reduce(&self, n: i64) -> u64 {
        n.rem_euclid(self.modulus as i64) as u64
    }

    pub fn is_coprime(&self, n: i64) -> bool {
        let r = self.reduce(n);
        if self.needs_odd && r % 2 == 0 {
            return false;
        }
        self.components
            .iter()
            .all(|c| c.dlog[(r % c.chunk) as usize] != NO_DLOG)
    }

    /// Exponent vector of n against the component generators, None when
    /// gcd(n, q) > 1.
    pub fn dlog(&self, n: i64) -> Option<Vec<u64>> {
        let r = self.reduce(n);
        if self.needs_odd && r % 2 == 0 {
            return None;
        }
        let mut out = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let v = c.dlog[(r % c.chunk) as usize];
            if v == NO_DLOG {
                return None;
            }
            out.push(u64::from(v));
        }
        Some(out)
    }

    /// The principal character.
    pub fn principal(&self) -> DirichletCharacter<'_> {
        DirichletCharacter::from_exponents(self, vec![0; self.components.len()])
    }

    /// The character at `index` in enumeration order (lexicographic on
    /// exponent vectors; the principal character is index 0).
    pub fn character(&self, index: u64) -> Result<DirichletCharacter<'_>> {
        if index >= self.phi {
            return Err(Error::Precondition(format!(
                "character index {index} out of range, phi({}) = {}",
                self.modulus, self.phi
            )));
        }
        let mut exps = vec![0u64; self.components.len()];
        let mut rem = index;
        for (i, c) in self.components.iter().enumerate().rev() {
            exps[i] = rem % c.order;
            rem /= c.order;
        }
        Ok(DirichletCharacter::from_exponents(self, exps))
    }

    /// All phi(q) characters in deterministic lexicographic order,
    /// principal first.
    pub fn characters(&self) -> impl Iterator<Item = DirichletCharacter<'_>> {
        let orders = self.component_orders();
        let mut next: Option<Vec<u64>> = Some(vec![0; orders.len()]);
        std::iter::from_fn(move || {
            let current = next.take()?;
            let mut bumped = current.clone();
            for i in (0..orders.len()).rev() {
                bumped[i] += 1;
                if bumped[i] < orders[i] {
                    next = Some(bumped);
                    break;
                }
                bumped[i] = 0;
            }
            Some(DirichletCharacter::from_exponents(self, current))
        })
    }
}

/// A Dirichlet character mod q, stored as an exponent vector against the
/// group's cyclic components. Equality is exact (exponents, never floats).
#[derive(Debug, Clone)]
pub struct DirichletCharacter<'g> {
    group: &'g CharacterGroup,
    exponents: Vec<u64>,
    /// e_i * (den / order_i): per-component angle weights.
    weights: Vec<u64>,
}

impl PartialEq for DirichletCharacter<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.group.modulus == other.group.modulus && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter<'_> {}

impl<'g> DirichletCharacter<'g> {
    fn from_exponents(group: &'g CharacterGroup, exponents: Vec<u64>) -> Self {
        debug_assert_eq!(exponents.len(), group.components.len());
        let den = group.angle_denominator;
        let weights = group
            .components
            .iter()
            .zip(&exponents)
            .map(|(c, &e)| {
                debug_assert!(e < c.order);
                e * (den / c.order)
            })
            .collect();
        DirichletCharacter { group, exponents, weights }
    }

    pub fn group(&self) -> &'g CharacterGroup {
        self.group
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Position in the group's enumeration order.
    pub fn index(&self) -> u64 {
        self.group
            .components
            .iter()
            .zip(&self.exponents)
            .fold(0, |acc, (c, &e)| acc * c.order + e)
    }

    pub fn conjugate(&self) -> DirichletCharacter<'g> {
        let exps = self
            .group
            .components
            .iter()
            .zip(&self.exponents)
            .map(|(c, &e)| if e == 0 { 0 } else { c.order - e })
            .collect();
        DirichletCharacter::from_exponents(self.group, exps)
    }

    /// Multiplicative order of the character.
    pub fn order(&self) -> u64 {
        self.group
            .components
            .iter()
            .zip(&self.exponents)
            .fold(1, |acc, (c, &e)| lcm(acc, c.order / gcd(e, c.order)))
    }

    /// True for characters taking only real values (order divides 2).
    pub fn is_real(&self) -> bool {
        self.order() <= 2
    }

    /// The exact angle of chi(n) as a reduced fraction of a full turn;
    /// None when chi(n) = 0.
    pub fn angle_fraction(&self, n: i64) -> Option<(u64, u64)> {
        let num = self.angle_numerator(n)?;
        let den = self.group.angle_denominator;
        if num == 0 {
            return Some((0, 1));
        }
        let g = gcd(num, den);
        Some((num / g, den / g))
    }

    fn angle_numerator(&self, n: i64) -> Option<u64> {
        let r = self.group.reduce(n);
        if self.group.needs_odd && r % 2 == 0 {
            return None;
        }
        let mut num = 0u64;
        for (c, &w) in self.group.components.iter().zip(&self.weights) {
            let v = c.dlog[(r % c.chunk) as usize];
            if v == NO_DLOG {
                return None;
            }
            num += w * u64::from(v);
        }
        Some(num % self.group.angle_denominator)
    }

    /// chi(n) on the unit circle, None when gcd(n, q) > 1. Quarter-turn
    /// angles are returned exactly.
    pub fn unit_value(&self, n: i64) -> Option<Complex64> {
        let num = self.angle_numerator(n)?;
        let den = self.group.angle_denominator;
        Some(if num == 0 {
            Complex64::new(1.0, 0.0)
        } else if 2 * num == den {
            Complex64::new(-1.0, 0.0)
        } else if 4 * num == den {
            Complex64::new(0.0, 1.0)
        } else if 4 * num == 3 * den {
            Complex64::new(0.0, -1.0)
        } else {
            let theta = std::f64::consts::TAU * (num as f64 / den as f64);
            Complex64::new(theta.cos(), theta.sin())
        })
    }

    /// chi(n), zero exactly when gcd(n, q) > 1.
    pub fn eval(&self, n: i64) -> Complex64 {
        self.unit_value(n).unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Sum of chi(k) over a < k <= b, in O(min(b - a, q)) using the period-q
    /// structure; a full period sums to zero for non-principal characters.
    pub fn partial_sum(&self, a: i64, b: i64) -> Complex64 {
        assert!(a <= b, "partial_sum requires a <= b");
        let q = self.group.modulus;
        let len = (b as i128 - a as i128) as u128;
        let periods = (len / q as u128) as f64;
        let rem = (len % q as u128) as i64;
        let mut sum = if self.is_principal() {
            Complex64::new(self.group.phi as f64 * periods, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
        for k in (a + 1)..=(a + rem) {
            sum += self.eval(k);
        }
        sum
    }

    /// Supremum over all real x >= 0 and integers n > x of
    /// |sum_{x < k <= n} chi(k)|: the diameter of the set of prefix sums
    /// S(0), ..., S(q), finite by periodicity. Rejects the principal
    /// character, whose partial sums are unbounded.
    pub fn sup_partial_sum(&self) -> Result<f64> {
        if self.is_principal() {
            return Err(Error::PrincipalCharacter);
        }
        let q = self.group.modulus;
        let mut re = arith::KahanSum::new();
        let mut im = arith::KahanSum::new();
        let mut points = Vec::with_capacity(q as usize + 1);
        points.push((0.0, 0.0));
        for k in 1..=q {
            if let Some(z) = self.unit_value(k as i64) {
                re.add(z.re);
                im.add(z.im);
            }
            points.push((re.value(), im.value()));
        }
        Ok(point_set_diameter(&mut points))
    }

    /// Empirical Polya-Vinogradov ratio sup / (sqrt(q) log q).
    pub fn polya_vinogradov_ratio(&self) -> Result<f64> {
        let sup = self.sup_partial_sum()?;
        let q = self.group.modulus as f64;
        debug_assert!(q >= 3.0);
        Ok(sup / (q.sqrt() * q.ln()))
    }
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Max pairwise distance of a point set: convex hull (monotone chain), then
/// a pairwise scan over the hull vertices. Dropping interior or collinear
/// points cannot change the diameter.
fn point_set_diameter(points: &mut Vec<(f64, f64)>) -> f64 {
    points.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    points.dedup();
    let n = points.len();
    if n <= 1 {
        return 0.0;
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * n.min(1024));
    for &p in points.iter() {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in points.iter().rev() {
        while hull.len() >= lower_len
            && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    let mut best = 0.0f64;
    for i in 0..hull.len() {
        for j in (i + 1)..hull.len() {
            let dx = hull[i].0 - hull[j].0;
            let dy = hull[i].1 - hull[j].1;
            best = best.max(dx * dx + dy * dy);
        }
    }
    best.sqrt()
}
