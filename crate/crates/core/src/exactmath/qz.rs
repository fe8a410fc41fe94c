//! Exact phases: the group Q/Z in lowest terms.
//!
//! A phase `t = num/den` stands for the unitary `exp(2*pi*i*t)`; addition in
//! Q/Z is multiplication of the corresponding roots of unity. Keeping phases
//! additive makes every identity an exact fraction comparison.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// A reduced fraction `num/den` with `0 <= num < den`, representing an
/// element of Q/Z. Zero is `0/1`. The additive order equals `den`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Qz {
    num: u64,
    den: u64,
}

impl Qz {
    pub const ZERO: Qz = Qz { num: 0, den: 1 };

    /// Canonical representative of `num/den` mod 1. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Qz {
        assert!(den != 0, "zero denominator");
        let den = i128::from(den);
        let num = i128::from(num);
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let num = num.rem_euclid(den);
        let g = num.gcd(&den);
        Qz { num: (num / g) as u64, den: (den / g) as u64 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// Additive order of the phase, i.e. the reduced denominator.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn scale(&self, k: i64) -> Qz {
        let prod = i128::from(k) * i128::from(self.num);
        let den = i128::from(self.den);
        let num = prod.rem_euclid(den);
        let g = num.gcd(&den);
        Qz { num: (num / g) as u64, den: (den / g) as u64 }
    }

    /// Numerator after rescaling to denominator `level`; `None` if the
    /// reduced denominator does not divide `level`.
    pub fn numerator_at_level(&self, level: u64) -> Option<u64> {
        if level == 0 || level % self.den != 0 {
            return None;
        }
        Some(self.num * (level / self.den))
    }

    /// Phase `num/level` (canonicalized).
    pub fn at_level(num: i64, level: u64) -> Qz {
        Qz::new(num, level as i64)
    }
}

impl Add for Qz {
    type Output = Qz;
    fn add(self, rhs: Qz) -> Qz {
        // a/b + c/d mod 1, reduced. Intermediate products fit in i128.
        let b = i128::from(self.den);
        let d = i128::from(rhs.den);
        let g = b.gcd(&d);
        let den = b / g * d;
        let num = (i128::from(self.num) * (d / g) + i128::from(rhs.num) * (b / g)).rem_euclid(den);
        let g2 = num.gcd(&den);
        Qz { num: (num / g2) as u64, den: (den / g2) as u64 }
    }
}

impl Neg for Qz {
    type Output = Qz;
    fn neg(self) -> Qz {
        if self.num == 0 {
            self
        } else {
            Qz { num: self.den - self.num, den: self.den }
        }
    }
}

impl Sub for Qz {
    type Output = Qz;
    fn sub(self, rhs: Qz) -> Qz {
        self + (-rhs)
    }
}

impl fmt::Display for Qz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Qz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl std::str::FromStr for Qz {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Qz, String> {
        let (n, d) = s.split_once('/').ok_or_else(|| format!("expected num/den, got {s:?}"))?;
        let n: i64 = n.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
        let d: i64 = d.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
        if d == 0 {
            return Err("zero denominator".into());
        }
        Ok(Qz::new(n, d))
    }
}

impl Serialize for Qz {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Qz {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Qz, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halves_cancel() {
        assert_eq!(Qz::new(1, 2) + Qz::new(1, 2), Qz::ZERO);
    }

    #[test]
    fn mixed_denominators() {
        assert_eq!(Qz::new(1, 3) + Qz::new(1, 2), Qz::new(5, 6));
        assert_eq!(Qz::new(3, 4) + Qz::new(3, 4), Qz::new(1, 2));
    }

    #[test]
    fn canonicalization() {
        assert_eq!(Qz::new(-1, 4), Qz::new(3, 4));
        assert_eq!(Qz::new(6, 4), Qz::new(1, 2));
        assert_eq!(Qz::new(4, -8), Qz::new(1, 2));
        assert_eq!(Qz::new(8, 4), Qz::ZERO);
    }

    #[test]
    fn order_is_denominator() {
        let p = Qz::new(5, 12);
        assert_eq!(p.order(), 12);
        let mut acc = Qz::ZERO;
        for _ in 0..12 {
            acc = acc + p;
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn level_rescaling() {
        assert_eq!(Qz::new(1, 2).numerator_at_level(4), Some(2));
        assert_eq!(Qz::new(1, 3).numerator_at_level(4), None);
        assert_eq!(Qz::ZERO.numerator_at_level(7), Some(0));
    }

    #[test]
    fn roundtrip_string() {
        let p = Qz::new(7, 12);
        let s = p.to_string();
        assert_eq!(s.parse::<Qz>().unwrap(), p);
    }
}
