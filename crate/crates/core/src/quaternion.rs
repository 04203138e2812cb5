//! Hurwitz integers stored in doubled coordinates.
//!
//! A Hurwitz integer has four components that are either all integers or all
//! halves of odd integers. Storing `2 * c` for every component turns both cases
//! into plain integers that share a parity, so every operation stays exact.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::RationalQuaternion;

/// Which half of the Hurwitz order a value lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityClass {
    /// All components are integers (Lipschitz point).
    Integer,
    /// All components lie in Z + 1/2.
    HalfInteger,
}

impl fmt::Display for ParityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParityClass::Integer => "integer",
            ParityClass::HalfInteger => "half-integer",
        })
    }
}

/// Returns true when the doubled coordinates describe a Hurwitz integer.
pub fn is_hurwitz(doubled: [i64; 4]) -> bool {
    let p = doubled[0].rem_euclid(2);
    doubled.iter().all(|d| d.rem_euclid(2) == p)
}

/// An exact Hurwitz integer `d1/2 + d2/2 i + d3/2 j + d4/2 k`.
///
/// The derived ordering is lexicographic on the doubled coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HurwitzInt {
    d: [i64; 4],
}

impl HurwitzInt {
    pub const ZERO: HurwitzInt = HurwitzInt { d: [0, 0, 0, 0] };
    pub const ONE: HurwitzInt = HurwitzInt { d: [2, 0, 0, 0] };
    pub const I: HurwitzInt = HurwitzInt { d: [0, 2, 0, 0] };
    pub const J: HurwitzInt = HurwitzInt { d: [0, 0, 2, 0] };
    pub const K: HurwitzInt = HurwitzInt { d: [0, 0, 0, 2] };

    /// Builds a value from doubled coordinates, rejecting mixed parity.
    pub fn from_doubled(d: [i64; 4]) -> Result<Self> {
        if is_hurwitz(d) {
            Ok(HurwitzInt { d })
        } else {
            Err(Error::MixedParity(d))
        }
    }

    /// Builds a Lipschitz point `a + bi + cj + dk`.
    pub fn from_integers(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let dbl = |x: i64| x.checked_mul(2).ok_or(Error::Overflow);
        Ok(HurwitzInt {
            d: [dbl(a)?, dbl(b)?, dbl(c)?, dbl(d)?],
        })
    }

    pub fn from_integer(n: i64) -> Result<Self> {
        Self::from_integers(n, 0, 0, 0)
    }

    pub fn doubled(&self) -> [i64; 4] {
        self.d
    }

    /// Components as exact rationals.
    pub fn components(&self) -> [Ratio<i64>; 4] {
        self.d.map(|x| Ratio::new(x, 2))
    }

    pub fn parity_class(&self) -> ParityClass {
        if self.d[0].rem_euclid(2) == 0 {
            ParityClass::Integer
        } else {
            ParityClass::HalfInteger
        }
    }

    pub fn is_zero(&self) -> bool {
        self.d == [0; 4]
    }

    /// Number of nonzero components.
    pub fn support(&self) -> usize {
        self.d.iter().filter(|&&x| x != 0).count()
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        let mut d = [0i64; 4];
        for (i, slot) in d.iter_mut().enumerate() {
            *slot = self.d[i].checked_add(rhs.d[i]).ok_or(Error::Overflow)?;
        }
        Ok(HurwitzInt { d })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        let mut d = [0i64; 4];
        for (i, slot) in d.iter_mut().enumerate() {
            *slot = self.d[i].checked_sub(rhs.d[i]).ok_or(Error::Overflow)?;
        }
        Ok(HurwitzInt { d })
    }

    pub fn checked_neg(&self) -> Result<Self> {
        let mut d = [0i64; 4];
        for (i, slot) in d.iter_mut().enumerate() {
            *slot = self.d[i].checked_neg().ok_or(Error::Overflow)?;
        }
        Ok(HurwitzInt { d })
    }

    /// Hamilton product. The product of doubled coordinates is the quadrupled
    /// result, which is halved exactly.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        let q = hamilton_wide(self.d, rhs.d);
        let mut d = [0i64; 4];
        for (slot, x) in d.iter_mut().zip(q) {
            assert!(x % 2 == 0, "Hurwitz product not divisible by 2");
            *slot = i64::try_from(x / 2).map_err(|_| Error::Overflow)?;
        }
        debug_assert!(is_hurwitz(d));
        Ok(HurwitzInt { d })
    }

    pub fn conj(&self) -> Self {
        HurwitzInt {
            d: [self.d[0], -self.d[1], -self.d[2], -self.d[3]],
        }
    }

    pub fn checked_norm(&self) -> Result<u64> {
        let s: i128 = self.d.iter().map(|&x| (x as i128) * (x as i128)).sum();
        debug_assert!(s % 4 == 0);
        u64::try_from(s / 4).map_err(|_| Error::Overflow)
    }

    /// Norm; panics on overflow. See [`checked_norm`](Self::checked_norm).
    pub fn norm(&self) -> u64 {
        self.checked_norm().expect("norm overflow")
    }

    /// `conj(a) / N(a)`.
    pub fn inverse(&self) -> Result<RationalQuaternion> {
        let n = self.checked_norm()?;
        if n == 0 {
            return Err(Error::ZeroNorm);
        }
        let n = i64::try_from(n).map_err(|_| Error::Overflow)?;
        let den = n.checked_mul(2).ok_or(Error::Overflow)?;
        RationalQuaternion::new(self.conj().d, den)
    }

    /// Lipschitz points: gcd of the components is 1 (doubled gcd is 2).
    /// Half-integer points: gcd of the odd numerators `2c` is 1.
    pub fn is_primitive(&self) -> bool {
        let g = self.d.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        match self.parity_class() {
            ParityClass::Integer => g == 2,
            ParityClass::HalfInteger => g == 1,
        }
    }

    pub fn is_prime(&self) -> bool {
        self.checked_norm()
            .map(crate::primes::is_prime)
            .unwrap_or(false)
    }

    /// Parses `"d1,d2,d3,d4"` doubled coordinates.
    pub fn parse_doubled(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(err("expected four comma-separated doubled coordinates"));
        }
        let mut d = [0i64; 4];
        for (slot, p) in d.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| err("coordinate is not an integer"))?;
        }
        Self::from_doubled(d).map_err(|_| err("coordinates mix parities"))
    }
}

/// Hamilton product on raw coordinates in 128-bit precision.
pub(crate) fn hamilton_wide(a: [i64; 4], b: [i64; 4]) -> [i128; 4] {
    let [a1, a2, a3, a4] = a.map(i128::from);
    let [b1, b2, b3, b4] = b.map(i128::from);
    [
        a1 * b1 - a2 * b2 - a3 * b3 - a4 * b4,
        a1 * b2 + a2 * b1 + a3 * b4 - a4 * b3,
        a1 * b3 - a2 * b4 + a3 * b1 + a4 * b2,
        a1 * b4 + a2 * b3 - a3 * b2 + a4 * b1,
    ]
}

macro_rules! impl_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl std::ops::$tr for HurwitzInt {
            type Output = HurwitzInt;
            /// Panics on overflow; use the `checked_*` form to get an error.
            fn $m(self, rhs: HurwitzInt) -> HurwitzInt {
                self.$checked(&rhs).expect("Hurwitz arithmetic overflow")
            }
        }
    };
}
impl_op!(Add, add, checked_add);
impl_op!(Sub, sub, checked_sub);
impl_op!(Mul, mul, checked_mul);

impl std::ops::Neg for HurwitzInt {
    type Output = HurwitzInt;
    fn neg(self) -> HurwitzInt {
        self.checked_neg().expect("Hurwitz arithmetic overflow")
    }
}

fn fmt_coefficient(d: i64) -> String {
    if d % 2 == 0 {
        (d / 2).to_string()
    } else {
        format!("{}/2", d)
    }
}

impl fmt::Display for HurwitzInt {
    /// Canonical text form, e.g. `5/2+3/2i+3/2j+3/2k`, `3-2i`, `-i`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (idx, (&d, unit)) in self.d.iter().zip(["", "i", "j", "k"]).enumerate() {
            if d == 0 {
                continue;
            }
            let neg = d < 0;
            let mag = d.unsigned_abs() as i64;
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if idx == 0 || mag != 2 {
                out.push_str(&fmt_coefficient(mag));
            }
            out.push_str(unit);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl FromStr for HurwitzInt {
    type Err = Error;

    /// Accepts the canonical grammar with arbitrary whitespace. Coefficients
    /// may be integers or fractions with denominator 1 or 2; an optional `*`
    /// may separate coefficient and unit. Repeated units are summed.
    fn from_str(input: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty input"));
        }

        // split into signed terms
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (pos, ch) in s.chars().enumerate() {
            if ch == '+' || ch == '-' {
                if pos != 0 {
                    if cur.is_empty() {
                        return Err(err("dangling sign"));
                    }
                    terms.push((neg, std::mem::take(&mut cur)));
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(err("dangling sign"));
        }
        terms.push((neg, cur));

        let mut acc = [0i128; 4];
        for (neg, term) in terms {
            let (coef, slot) = match term.chars().last() {
                Some('i') => (&term[..term.len() - 1], 1),
                Some('j') => (&term[..term.len() - 1], 2),
                Some('k') => (&term[..term.len() - 1], 3),
                _ => (term.as_str(), 0),
            };
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let doubled: i128 = if coef.is_empty() {
                if slot == 0 {
                    return Err(err("empty term"));
                }
                2
            } else if let Some((p, q)) = coef.split_once('/') {
                let p: i128 = p.parse().map_err(|_| err("bad numerator"))?;
                let q: i128 = q.parse().map_err(|_| err("bad denominator"))?;
                if q <= 0 {
                    return Err(err("denominator must be positive"));
                }
                if (2 * p) % q != 0 {
                    return Err(err("component is not a multiple of 1/2"));
                }
                2 * p / q
            } else {
                let v: i128 = coef.parse().map_err(|_| err("bad coefficient"))?;
                2 * v
            };
            acc[slot] += if neg { -doubled } else { doubled };
        }
        let mut d = [0i64; 4];
        for (slot, v) in d.iter_mut().zip(acc) {
            *slot = i64::try_from(v).map_err(|_| Error::Overflow)?;
        }
        HurwitzInt::from_doubled(d).map_err(|_| err("components mix integers and half-integers"))
    }
}

impl Serialize for HurwitzInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HurwitzInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
