//! Quaternions with rational components over one shared denominator.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::quaternion::{hamilton_wide, HurwitzInt};

/// `(n1 + n2 i + n3 j + n4 k) / den`, kept in lowest shared terms with
/// `den >= 1`, so derived equality is value equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RationalQuaternion {
    num: [i64; 4],
    den: i64,
}

impl RationalQuaternion {
    pub fn new(num: [i64; 4], den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::ZeroNorm);
        }
        Self::normalize(num.map(i128::from), i128::from(den))
    }

    fn normalize(num: [i128; 4], den: i128) -> Result<Self> {
        let g = num.iter().fold(den, |acc, x| acc.gcd(x));
        let g = if den < 0 { -g } else { g };
        let mut out = [0i64; 4];
        for (slot, x) in out.iter_mut().zip(num) {
            *slot = i64::try_from(x / g).map_err(|_| Error::Overflow)?;
        }
        let den = i64::try_from(den / g).map_err(|_| Error::Overflow)?;
        Ok(RationalQuaternion { num: out, den })
    }

    pub fn numerators(&self) -> [i64; 4] {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn components(&self) -> [Ratio<i64>; 4] {
        self.num.map(|n| Ratio::new(n, self.den))
    }

    /// Multiplies every component by an integer.
    pub fn scale(&self, k: i64) -> Result<Self> {
        Self::normalize(
            self.num.map(|n| i128::from(n) * i128::from(k)),
            i128::from(self.den),
        )
    }

    /// Divides every component by a nonzero integer.
    pub fn div_int(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroNorm);
        }
        Self::normalize(
            self.num.map(i128::from),
            i128::from(self.den) * i128::from(k),
        )
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        let (a, b) = (i128::from(self.den), i128::from(rhs.den));
        let mut num = [0i128; 4];
        for (i, slot) in num.iter_mut().enumerate() {
            *slot = i128::from(self.num[i]) * b + i128::from(rhs.num[i]) * a;
        }
        Self::normalize(num, a * b)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        RationalQuaternion {
            num: self.num.map(|n| -n),
            den: self.den,
        }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        let prod = hamilton_wide(self.num, rhs.num);
        Self::normalize(prod, i128::from(self.den) * i128::from(rhs.den))
    }

    /// Returns the value as a Hurwitz integer when it is one.
    pub fn to_hurwitz(&self) -> Option<HurwitzInt> {
        match self.den {
            1 => {
                let [a, b, c, d] = self.num;
                HurwitzInt::from_integers(a, b, c, d).ok()
            }
            2 => HurwitzInt::from_doubled(self.num).ok(),
            _ => None,
        }
    }

    pub fn is_hurwitz(&self) -> bool {
        self.to_hurwitz().is_some()
    }
}

impl From<HurwitzInt> for RationalQuaternion {
    fn from(h: HurwitzInt) -> Self {
        Self::new(h.doubled(), 2).expect("halving never overflows")
    }
}

impl fmt::Display for RationalQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (c, unit) in self.components().iter().zip(["", "i", "j", "k"]) {
            if c.numer() == &0 {
                continue;
            }
            if *c.numer() < 0 {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let a = Ratio::new(c.numer().abs(), *c.denom());
            if unit.is_empty() || a != Ratio::from_integer(1) {
                out.push_str(&a.to_string());
            }
            out.push_str(unit);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_to_lowest_terms() {
        let a = RationalQuaternion::new([2, 4, 6, 8], 4).unwrap();
        let b = RationalQuaternion::new([1, 2, 3, 4], 2).unwrap();
        assert_eq!(a, b);
        let c = RationalQuaternion::new([-1, 0, 0, 0], -3).unwrap();
        assert_eq!(c.denominator(), 3);
        assert_eq!(c.numerators(), [1, 0, 0, 0]);
        assert_eq!(RationalQuaternion::new([0; 4], 7).unwrap().denominator(), 1);
    }

    #[test]
    fn hurwitz_membership() {
        let h: HurwitzInt = "1/2-1/2i+1/2j+1/2k".parse().unwrap();
        assert_eq!(RationalQuaternion::from(h).to_hurwitz(), Some(h));
        assert!(RationalQuaternion::new([1, 2, 0, 0], 2)
            .unwrap()
            .to_hurwitz()
            .is_none());
        assert!(RationalQuaternion::new([1, 0, 0, 0], 3)
            .unwrap()
            .to_hurwitz()
            .is_none());
        assert!(RationalQuaternion::new([3, -2, 0, 0], 1)
            .unwrap()
            .is_hurwitz());
    }

    #[test]
    fn display() {
        let inv = "3+2i".parse::<HurwitzInt>().unwrap().inverse().unwrap();
        assert_eq!(inv.to_string(), "3/13-2/13i");
        assert_eq!(
            RationalQuaternion::new([0, 1, 0, -1], 1)
                .unwrap()
                .to_string(),
            "i-k"
        );
    }

    #[test]
    fn add_and_mul() {
        let a = RationalQuaternion::new([1, 0, 0, 0], 3).unwrap();
        let b = RationalQuaternion::new([0, 1, 0, 0], 6).unwrap();
        assert_eq!(
            a.checked_add(&b).unwrap(),
            RationalQuaternion::new([2, 1, 0, 0], 6).unwrap()
        );
        let i = RationalQuaternion::from(HurwitzInt::I);
        let j = RationalQuaternion::from(HurwitzInt::J);
        assert_eq!(
            i.checked_mul(&j).unwrap(),
            RationalQuaternion::from(HurwitzInt::K)
        );
        assert_eq!(
            a.checked_sub(&a).unwrap(),
            RationalQuaternion::new([0; 4], 1).unwrap()
        );
    }
}
