//! The cyclotomic fields ℚ(ζ_N), with ζ_N = exp(2πi/N).
//!
//! An element is a rational-coefficient vector on the power basis
//! 1, ζ, ζ², …, ζ^(φ(N)−1), reduced modulo the N-th cyclotomic polynomial Φ_N.
//! Mixed-conductor arithmetic lifts both operands to the lcm of their conductors
//! (ζ_m = ζ_N^{N/m} when m | N). [`Cyclotomic::normalize`] additionally rewrites an
//! element over the smallest cyclotomic subfield containing it, which makes the
//! (conductor, coefficients) pair a canonical form: two inputs denote the same
//! algebraic number iff normalization returns identical data.

use crate::ExactError;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

/// Rational scalars. Always stored reduced with positive denominator (the `num`
/// crate maintains that invariant).
pub type Rat = BigRational;

/// Hard cap on conductors; see the crate docs.
pub const CONDUCTOR_CAP: u32 = 1024;

fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Euler's totient, by trial-division factorization.
pub fn phi(n: u32) -> usize {
    assert!(n > 0, "phi(0) is undefined");
    let mut n = n as u64;
    let mut result = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn prime_factors(n: u32) -> Vec<u32> {
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2u32;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Monic integer coefficients of Φ_N, ascending degree, memoized globally.
///
/// Computed by the classical recursion Φ_N = (x^N − 1) / ∏_{d|N, d<N} Φ_d with exact
/// integer long division (every divisor is monic).
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let result = if n == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        // x^n - 1
        let mut num = vec![BigInt::zero(); n as usize + 1];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::one();
        for d in 1..n {
            if n % d == 0 {
                num = int_poly_div_exact(&num, &cyclotomic_polynomial(d));
            }
        }
        num
    };
    cache.lock().unwrap().insert(n, result.clone());
    result
}

/// Exact long division of integer polynomials with monic divisor; panics on a
/// nonzero remainder (callers only divide known multiples).
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for i in (dd..=nd).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for (j, dc) in den.iter().enumerate() {
            let t = &c * dc;
            rem[i - dd + j] -= t;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact division");
    quot
}

/// An element of ℚ(ζ_N). See the module docs for the representation.
#[derive(Clone)]
pub struct Cyclotomic {
    conductor: u32,
    coeffs: Vec<Rat>, // length phi(conductor), reduced mod Phi_N
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![Rat::zero()],
        }
    }

    pub fn one() -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![Rat::one()],
        }
    }

    pub fn from_rational(r: Rat) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    /// ζ_n^k, stored at its minimal conductor (e.g. `root_of_unity(12, 6)` is −1 at
    /// conductor 2... which descends further to the rational −1 at conductor 1).
    pub fn root_of_unity(n: u32, k: i64) -> Result<Self, ExactError> {
        if n == 0 {
            return Err(ExactError::ZeroConductor);
        }
        if n > CONDUCTOR_CAP {
            return Err(ExactError::ConductorCap(n as u64));
        }
        let k = k.rem_euclid(n as i64) as usize;
        let mut raw = vec![Rat::zero(); k + 1];
        raw[k] = Rat::one();
        Self::normalize(n, raw)
    }

    /// Canonicalize a raw power-basis vector (any length) at conductor `n`: reduce
    /// modulo Φ_n, then rewrite over the smallest cyclotomic subfield. Two inputs
    /// denote the same algebraic number iff the outputs are identical.
    pub fn normalize(n: u32, raw: Vec<Rat>) -> Result<Self, ExactError> {
        if n == 0 {
            return Err(ExactError::ZeroConductor);
        }
        if n > CONDUCTOR_CAP {
            return Err(ExactError::ConductorCap(n as u64));
        }
        let coeffs = reduce_mod_phi(raw, n);
        let mut out = Cyclotomic {
            conductor: n,
            coeffs,
        };
        out.minimize_conductor();
        Ok(out)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Power-basis coefficients at the stored conductor (length φ(conductor)).
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Some(r) when the element is the rational number r.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Lift to a larger conductor `to` (requires conductor | to).
    fn lift(&self, to: u32) -> Cyclotomic {
        if to == self.conductor {
            return self.clone();
        }
        assert!(
            to % self.conductor == 0,
            "lift target {to} not a multiple of {}",
            self.conductor
        );
        let d = (to / self.conductor) as usize;
        let mut raw = vec![Rat::zero(); (self.coeffs.len() - 1) * d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[i * d] = c.clone();
            }
        }
        Cyclotomic {
            conductor: to,
            coeffs: reduce_mod_phi(raw, to),
        }
    }

    /// Cheap canonicalization applied after every arithmetic op: a vector supported
    /// on ζ⁰ alone is the rational coeffs[0] and drops to conductor 1.
    fn descend_cheap(&mut self) {
        if self.conductor > 1 && self.coeffs[1..].iter().all(|c| c.is_zero()) {
            let c0 = std::mem::take(&mut self.coeffs[0]);
            *self = Cyclotomic {
                conductor: 1,
                coeffs: vec![c0],
            };
        }
    }

    /// Full conductor minimization: repeatedly rewrite over ℚ(ζ_{N/p}) whenever the
    /// element lies in that subfield (decided by an exact linear solve against the
    /// subfield's power basis).
    pub fn minimize_conductor(&mut self) {
        'outer: loop {
            if self.conductor == 1 {
                return;
            }
            self.descend_cheap();
            for p in prime_factors(self.conductor) {
                let m = self.conductor / p;
                if m == 0 {
                    continue;
                }
                if let Some(sub) = self.try_rewrite_at(m) {
                    *self = sub;
                    continue 'outer;
                }
            }
            return;
        }
    }

    /// Attempt to rewrite the element on the power basis of ζ_m, m | conductor.
    fn try_rewrite_at(&self, m: u32) -> Option<Cyclotomic> {
        if m == 0 || self.conductor % m != 0 {
            return None;
        }
        let n = self.conductor;
        let big_dim = self.coeffs.len();
        let small_dim = phi(m);
        // Columns: zeta_m^j = zeta_n^{j * n/m} reduced mod Phi_n.
        let step = (n / m) as usize;
        let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(small_dim);
        for j in 0..small_dim {
            let mut raw = vec![Rat::zero(); j * step + 1];
            raw[j * step] = Rat::one();
            cols.push(reduce_mod_phi(raw, n));
        }
        let x = solve_exact(big_dim, &cols, &self.coeffs)?;
        Some(Cyclotomic {
            conductor: m,
            coeffs: x,
        })
    }

    pub fn checked_add(&self, other: &Cyclotomic) -> Result<Cyclotomic, ExactError> {
        let l = lcm_u32(self.conductor, other.conductor)?;
        let a = self.lift(l);
        let b = other.lift(l);
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| x + y)
            .collect();
        let mut out = Cyclotomic {
            conductor: l,
            coeffs,
        };
        out.descend_cheap();
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Cyclotomic) -> Result<Cyclotomic, ExactError> {
        self.checked_add(&(-other.clone()))
    }

    pub fn checked_mul(&self, other: &Cyclotomic) -> Result<Cyclotomic, ExactError> {
        let l = lcm_u32(self.conductor, other.conductor)?;
        let a = self.lift(l);
        let b = other.lift(l);
        let mut raw = vec![Rat::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        let mut out = Cyclotomic {
            conductor: l,
            coeffs: reduce_mod_phi(raw, l),
        };
        out.descend_cheap();
        Ok(out)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_N
    /// (which is irreducible, so any nonzero element is a unit).
    pub fn checked_inv(&self) -> Result<Cyclotomic, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Cyclotomic::from_rational(r.recip()));
        }
        let n = self.conductor;
        let phi_poly: Vec<Rat> = cyclotomic_polynomial(n)
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        let s = poly_modular_inverse(&self.coeffs, &phi_poly);
        let mut out = Cyclotomic {
            conductor: n,
            coeffs: reduce_mod_phi(s, n),
        };
        out.descend_cheap();
        Ok(out)
    }

    pub fn checked_div(&self, other: &Cyclotomic) -> Result<Cyclotomic, ExactError> {
        self.checked_mul(&other.checked_inv()?)
    }

    /// Integer power (negative exponents via the inverse).
    pub fn pow(&self, e: i64) -> Result<Cyclotomic, ExactError> {
        if e == 0 {
            return Ok(Cyclotomic::one());
        }
        let base = if e < 0 {
            self.checked_inv()?
        } else {
            self.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = Cyclotomic::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.checked_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// The Galois automorphism σ_k : ζ_N ↦ ζ_N^k (requires gcd(k, N) = 1).
    pub fn galois(&self, k: u32) -> Cyclotomic {
        let n = self.conductor;
        if n == 1 {
            return self.clone();
        }
        let k = (k % n) as usize;
        assert!(
            num::integer::gcd(k as u32, n) == 1,
            "galois exponent must be coprime to the conductor"
        );
        let mut raw = vec![Rat::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[(i * k) % n as usize] += c;
            }
        }
        let mut out = Cyclotomic {
            conductor: n,
            coeffs: reduce_mod_phi(raw, n),
        };
        out.descend_cheap();
        out
    }

    /// Complex conjugation (ζ ↦ ζ^{−1}).
    pub fn conj(&self) -> Cyclotomic {
        if self.conductor <= 2 {
            return self.clone();
        }
        self.galois(self.conductor - 1)
    }

    /// True when the element is fixed by complex conjugation.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// The multiplicative order when the element is a root of unity, else `None`.
    ///
    /// Complete because the roots of unity inside ℚ(ζ_N) are exactly ±ζ_N^k; the
    /// scan compares against each candidate at the stored conductor (no lifting).
    pub fn char_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let n = self.conductor as u64;
        if n == 1 {
            let r = self.as_rational().unwrap();
            if r.is_one() {
                return Some(1);
            }
            if (-r).is_one() {
                return Some(2);
            }
            return None;
        }
        let zeta = Cyclotomic {
            conductor: self.conductor,
            coeffs: reduce_mod_phi(
                {
                    let mut raw = vec![Rat::zero(); 2];
                    raw[1] = Rat::one();
                    raw
                },
                self.conductor,
            ),
        };
        let mut cur = Cyclotomic::one();
        for k in 0..n {
            if *self == cur {
                return Some(n / num::integer::gcd(n, k));
            }
            if n % 2 == 1 {
                // For odd N the roots of unity also include −ζ^k = ζ_{2N}^{N+2k}.
                if *self == -cur.clone() {
                    let two_n = 2 * n;
                    return Some(two_n / num::integer::gcd(two_n, n + 2 * k));
                }
            }
            cur = cur.checked_mul(&zeta).expect("same conductor");
        }
        None
    }
}

fn lcm_u32(a: u32, b: u32) -> Result<u32, ExactError> {
    let l = num::integer::lcm(a as u64, b as u64);
    if l > CONDUCTOR_CAP as u64 {
        return Err(ExactError::ConductorCap(l));
    }
    Ok(l as u32)
}

/// Reduce a raw power-basis vector modulo Φ_n and trim/pad to length φ(n).
fn reduce_mod_phi(mut raw: Vec<Rat>, n: u32) -> Vec<Rat> {
    let dim = phi(n);
    if raw.len() > dim {
        let phi_poly = cyclotomic_polynomial(n);
        for i in (dim..raw.len()).rev() {
            if raw[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut raw[i], Rat::zero());
            // raw -= c * x^(i-dim) * Phi_n  (leading term cancels by construction)
            for (j, pc) in phi_poly.iter().enumerate().take(dim) {
                if !pc.is_zero() {
                    raw[i - dim + j] -= &c * Rat::from_integer(pc.clone());
                }
            }
        }
        raw.truncate(dim);
    }
    raw.resize(dim, Rat::zero());
    raw
}

/// Inverse of `a` modulo the irreducible monic polynomial `m`, by extended Euclid
/// over ℚ[x]. Both inputs as ascending coefficient vectors; `a` nonzero mod `m`.
fn poly_modular_inverse(a: &[Rat], m: &[Rat]) -> Vec<Rat> {
    // Invariants: r0 = s0*a mod m-multiples, r1 = s1*a ...
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    let (mut s0, mut s1) = (vec![], vec![Rat::one()]);
    trim(&mut r1);
    loop {
        let (q, rem) = poly_divmod(&r0, &r1);
        if rem.iter().all(|c| c.is_zero()) {
            // r1 is the gcd (a nonzero constant, since m is irreducible).
            let lead = r1.last().expect("nonzero gcd").clone();
            assert!(r1.len() == 1, "gcd with an irreducible modulus must be constant");
            return s1.iter().map(|c| c / &lead).collect();
        }
        let s_next = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s_next;
    }
}

fn trim(p: &mut Vec<Rat>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_divmod(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let mut den = den.to_vec();
    trim(&mut den);
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let lead = den[dd].clone();
    let mut quot = vec![Rat::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let c = &rem[i] / &lead;
        quot[i - dd] = c.clone();
        for (j, dc) in den.iter().enumerate() {
            let t = &c * dc;
            rem[i - dd + j] -= t;
        }
    }
    trim(&mut rem);
    (quot, rem)
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), Rat::zero());
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

/// Solve the column system `cols * x = rhs` exactly over ℚ; `None` if inconsistent.
fn solve_exact(rows: usize, cols: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let ncols = cols.len();
    // Augmented row-major matrix.
    let mut m: Vec<Vec<Rat>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rat> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivot_col_of_row = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].clone().recip();
        for v in m[r][c..].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=ncols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivot_col_of_row.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    // Inconsistent if any zero row has nonzero rhs.
    for i in r..rows {
        if !m[i][ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &c) in pivot_col_of_row.iter().enumerate() {
        x[c] = m[row][ncols].clone();
    }
    // A consistent system may still be underdetermined; for subfield bases the
    // columns are linearly independent, so the solution is unique when it exists.
    Some(x)
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let Ok(l) = lcm_u32(self.conductor, other.conductor) else {
            // Conductor cap exceeded while comparing: fall back to comparing the
            // minimized forms, which is always possible.
            let mut a = self.clone();
            let mut b = other.clone();
            a.minimize_conductor();
            b.minimize_conductor();
            return a.conductor == b.conductor && a.coeffs == b.coeffs;
        };
        self.lift(l).coeffs == other.lift(l).coeffs
    }
}

impl Eq for Cyclotomic {}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        self.checked_add(&rhs).expect("conductor cap exceeded")
    }
}

impl<'a> Add<&'a Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self.checked_add(rhs).expect("conductor cap exceeded")
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        self.checked_sub(&rhs).expect("conductor cap exceeded")
    }
}

impl<'a> Sub<&'a Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self.checked_sub(rhs).expect("conductor cap exceeded")
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        self.checked_mul(&rhs).expect("conductor cap exceeded")
    }
}

impl<'a> Mul<&'a Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self.checked_mul(rhs).expect("conductor cap exceeded")
    }
}

impl Div for Cyclotomic {
    type Output = Cyclotomic;
    fn div(self, rhs: Cyclotomic) -> Cyclotomic {
        self.checked_div(&rhs).expect("division by zero or conductor cap")
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if i == 0 {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write!(f, "z{}", self.conductor)?;
                if i > 1 {
                    write!(f, "^{i}")?;
                }
            }
        }
        Ok(())
    }
}

/// Canonical "p/q" form (q > 0, reduced), e.g. "3/1", "-2/5", "0/1".
pub fn rational_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse "p/q" or a bare integer "p".
pub fn parse_rational(s: &str) -> Result<Rat, ExactError> {
    let bad = || ExactError::BadRational(s.to_string());
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        Ok(Rat::new(p, q))
    } else {
        let p: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rat::from_integer(p))
    }
}

#[derive(Serialize, Deserialize)]
struct CycloWire {
    conductor: u32,
    coeffs: Vec<String>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CycloWire {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(rational_to_string).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = CycloWire::deserialize(deserializer)?;
        if wire.conductor == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        if wire.conductor > CONDUCTOR_CAP {
            return Err(D::Error::custom(format!(
                "conductor {} exceeds the cap of {CONDUCTOR_CAP}",
                wire.conductor
            )));
        }
        let expected = phi(wire.conductor);
        if wire.coeffs.len() != expected {
            return Err(D::Error::custom(format!(
                "coefficient vector has length {}, expected phi({}) = {}",
                wire.coeffs.len(),
                wire.conductor,
                expected
            )));
        }
        let coeffs = wire
            .coeffs
            .iter()
            .map(|s| parse_rational(s).map_err(|e| D::Error::custom(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Cyclotomic {
            conductor: wire.conductor,
            coeffs,
        })
    }
}
