//! Exact arithmetic in the cyclotomic field Q(zeta_N).
//!
//! Elements are polynomials in `zeta_N` of degree below `phi(N)`, reduced
//! modulo the N-th cyclotomic polynomial. This is the coefficient field for
//! twisted-crossed-product elements: sums of roots of unity compare exactly
//! here, which plain phases cannot do.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::qz::Qz;

type Q = Ratio<i64>;

/// Euler totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
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
    result
}

/// Exact division of integer polynomials, assuming the divisor is monic and
/// divides exactly. Coefficients low-to-high.
fn divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    assert_eq!(*den.last().unwrap(), 1, "divisor must be monic");
    let mut rem: Vec<i64> = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![0i64; qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "division was not exact");
    quot
}

/// The N-th cyclotomic polynomial, coefficients low-to-high (degree phi(N)).
///
/// Computed as (x^N - 1) divided by the product of Phi_d over proper
/// divisors d of N. No table, correct for every N >= 1.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    if n == 1 {
        return vec![-1, 1]; // x - 1
    }
    // x^n - 1
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    let mut acc = num;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            acc = divide_exact(&acc, &phi_d);
        }
    }
    acc
}

/// An element of Q(zeta_N), stored reduced mod Phi_N.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    level: u64,
    /// Length phi(N); coefficient of zeta_N^i at index i.
    coeffs: Vec<Q>,
}

impl Cyclotomic {
    pub fn zero(level: u64) -> Self {
        let phi = euler_phi(level) as usize;
        Cyclotomic { level, coeffs: vec![Q::zero(); phi] }
    }

    pub fn one(level: u64) -> Self {
        let mut z = Cyclotomic::zero(level);
        z.coeffs[0] = Q::one();
        z
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn from_rational(level: u64, q: Q) -> Self {
        let mut z = Cyclotomic::zero(level);
        z.coeffs[0] = q;
        z
    }

    /// zeta_N^k, for any integer exponent.
    pub fn root_power(level: u64, k: i64) -> Self {
        let k = k.rem_euclid(level as i64) as usize;
        let mut raw = vec![Q::zero(); k + 1];
        raw[k] = Q::one();
        Cyclotomic::reduce(level, raw)
    }

    /// Embed a phase `p` in Q/Z as the root of unity `zeta_N^(num*N/den)`.
    /// Fails unless `den(p)` divides `N`.
    pub fn from_phase(p: Qz, level: u64) -> Result<Self> {
        let num = p
            .numerator_at_level(level)
            .ok_or(Error::LevelMismatch { den: p.den(), level })?;
        Ok(Cyclotomic::root_power(level, num as i64))
    }

    /// Complex conjugate: zeta to zeta^{-1}.
    pub fn conj(&self) -> Self {
        let n = self.level as i64;
        let mut raw = vec![Q::zero(); self.level as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let e = (-(i as i64)).rem_euclid(n) as usize;
                raw[e] += *c;
            }
        }
        Cyclotomic::reduce(self.level, raw)
    }

    /// Multiplicative inverse, via the extended Euclidean algorithm in Q[x]
    /// against Phi_N (which is irreducible, so every nonzero element is a
    /// unit). Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let phi: Vec<Q> = cyclotomic_polynomial(self.level)
            .iter()
            .map(|&c| Q::from_integer(c))
            .collect();
        // Extended gcd of (self, Phi): find s with s*self + t*Phi = gcd.
        let (mut r0, mut r1) = (trim(self.coeffs.clone()), trim(phi));
        let (mut s0, mut s1) = (vec![Q::one()], vec![Q::zero()]);
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 is a nonzero constant times the gcd; scale s0 by its inverse.
        assert_eq!(r0.len(), 1, "Phi_N must be coprime to a nonzero element");
        let scale = r0[0].recip();
        let inv: Vec<Q> = s0.iter().map(|c| c * scale).collect();
        Cyclotomic::reduce(self.level, inv)
    }

    fn reduce(level: u64, mut raw: Vec<Q>) -> Self {
        let phi_poly = cyclotomic_polynomial(level);
        let deg = phi_poly.len() - 1;
        if raw.len() < deg {
            raw.resize(deg, Q::zero());
            return Cyclotomic { level, coeffs: raw };
        }
        // Long division by the monic Phi_N.
        for k in (deg..raw.len()).rev() {
            let c = raw[k];
            if !c.is_zero() {
                for (i, &d) in phi_poly.iter().enumerate() {
                    let t = c * Q::from_integer(d);
                    raw[k - deg + i] -= t;
                }
            }
        }
        raw.truncate(deg);
        raw.resize(deg, Q::zero());
        Cyclotomic { level, coeffs: raw }
    }
}

fn trim(mut v: Vec<Q>) -> Vec<Q> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn poly_divmod(num: &[Q], den: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let lead = *den.last().unwrap();
    if rem.len() <= dn {
        return (vec![], trim(rem));
    }
    let mut quot = vec![Q::zero(); rem.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn] / lead;
        quot[k] = c;
        if !c.is_zero() {
            for (i, d) in den.iter().enumerate() {
                let t = c * *d;
                rem[k + i] -= t;
            }
        }
    }
    (trim(quot), trim(rem))
}

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += *x * *y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = a.to_vec();
    out.resize(out.len().max(b.len()), Q::zero());
    for (i, y) in b.iter().enumerate() {
        out[i] -= *y;
    }
    trim(out)
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.level, rhs.level, "cyclotomic level mismatch");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        Cyclotomic { level: self.level, coeffs }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.level, rhs.level, "cyclotomic level mismatch");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        Cyclotomic { level: self.level, coeffs }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { level: self.level, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.level, rhs.level, "cyclotomic level mismatch");
        Cyclotomic::reduce(self.level, poly_mul(&self.coeffs, &rhs.coeffs))
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    write!(f, "z{}^{}", self.level, i)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // degree = phi(n)
        for n in 1..=30u64 {
            assert_eq!(cyclotomic_polynomial(n).len() as u64 - 1, euler_phi(n));
        }
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = Cyclotomic::from_phase(Qz::new(1, 4), 4).unwrap();
        let m1 = Cyclotomic::from_rational(4, Ratio::from_integer(-1));
        assert_eq!(&(&i * &i), &m1);
    }

    #[test]
    fn half_phase_is_minus_one() {
        let z = Cyclotomic::from_phase(Qz::new(1, 2), 4).unwrap();
        assert_eq!(z, Cyclotomic::from_rational(4, Ratio::from_integer(-1)));
    }

    #[test]
    fn primitive_cube_roots_sum_to_minus_one() {
        let w = Cyclotomic::from_phase(Qz::new(1, 3), 3).unwrap();
        let w2 = &w * &w;
        let sum = &w + &w2;
        assert_eq!(sum, Cyclotomic::from_rational(3, Ratio::from_integer(-1)));
    }

    #[test]
    fn embedding_rejects_wrong_level() {
        assert!(Cyclotomic::from_phase(Qz::new(1, 3), 4).is_err());
    }

    #[test]
    fn embedding_is_homomorphic_exhaustively() {
        // embed(a+b) = embed(a)*embed(b) for all phases at every level <= 24.
        for n in 1..=24u64 {
            for a in 0..n {
                for b in 0..n {
                    let pa = Qz::new(a as i64, n as i64);
                    let pb = Qz::new(b as i64, n as i64);
                    let ea = Cyclotomic::from_phase(pa, n).unwrap();
                    let eb = Cyclotomic::from_phase(pb, n).unwrap();
                    let eab = Cyclotomic::from_phase(pa + pb, n).unwrap();
                    assert_eq!(&ea * &eb, eab, "level {n}, {a}+{b}");
                }
            }
        }
    }

    #[test]
    fn embedding_is_injective() {
        for n in [4u64, 6, 12] {
            let mut seen = Vec::new();
            for a in 0..n {
                let e = Cyclotomic::from_phase(Qz::new(a as i64, n as i64), n).unwrap();
                assert!(!seen.contains(&e), "duplicate root at exponent {a}/{n}");
                seen.push(e);
            }
        }
    }

    #[test]
    fn field_inverse() {
        let w = Cyclotomic::from_phase(Qz::new(1, 12), 12).unwrap();
        let s = &(&w + &Cyclotomic::one(12)) * &Cyclotomic::from_rational(12, Ratio::new(3, 7));
        let prod = &s * &s.inv();
        assert_eq!(prod, Cyclotomic::one(12));
    }

    #[test]
    fn conjugate_of_root_is_inverse_root() {
        for n in [3u64, 4, 5, 12] {
            for k in 0..n {
                let z = Cyclotomic::root_power(n, k as i64);
                assert_eq!(z.conj(), Cyclotomic::root_power(n, -(k as i64)));
                assert_eq!(&z * &z.conj(), Cyclotomic::one(n));
            }
        }
    }
}
