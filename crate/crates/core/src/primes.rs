//! Rational primality, the unit group, and brute-force enumeration of Hurwitz
//! integers of a given prime norm.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::{HurwitzInt, ParityClass};

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// The 24 units of the Hurwitz order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitSet {
    units: Vec<HurwitzInt>,
}

impl UnitSet {
    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn contains(&self, q: &HurwitzInt) -> bool {
        self.units.binary_search(q).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, HurwitzInt> {
        self.units.iter()
    }
}

impl<'a> IntoIterator for &'a UnitSet {
    type Item = &'a HurwitzInt;
    type IntoIter = std::slice::Iter<'a, HurwitzInt>;
    fn into_iter(self) -> Self::IntoIter {
        self.units.iter()
    }
}

/// `±1, ±i, ±j, ±k` and the sixteen `±1/2 ± 1/2 i ± 1/2 j ± 1/2 k`, sorted.
pub fn units() -> UnitSet {
    let mut units = Vec::with_capacity(24);
    for axis in 0..4 {
        for sign in [-2, 2] {
            let mut d = [0i64; 4];
            d[axis] = sign;
            units.push(HurwitzInt::from_doubled(d).expect("valid unit"));
        }
    }
    for mask in 0..16u32 {
        let d: [i64; 4] = std::array::from_fn(|b| if mask >> b & 1 == 1 { -1 } else { 1 });
        units.push(HurwitzInt::from_doubled(d).expect("valid unit"));
    }
    units.sort();
    UnitSet { units }
}

/// Which parity classes an enumeration should return.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassFilter {
    Integer,
    HalfInteger,
    Both,
}

impl ClassFilter {
    fn admits(self, class: ParityClass) -> bool {
        match self {
            ClassFilter::Both => true,
            ClassFilter::Integer => class == ParityClass::Integer,
            ClassFilter::HalfInteger => class == ParityClass::HalfInteger,
        }
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All Hurwitz integers of norm `n` (any `n`) in the requested classes,
/// ascending in doubled-coordinate lexicographic order.
pub(crate) fn hurwitz_with_norm(n: u64, filter: ClassFilter) -> Vec<HurwitzInt> {
    let target = 4 * n as i64;
    // |d_i| <= 2 * ceil(sqrt(n))
    let root = isqrt(n);
    let ceil = if root * root == n { root } else { root + 1 } as i64;
    let bound = 2 * ceil;
    let mut out = Vec::new();
    for d1 in -bound..=bound {
        let r1 = target - d1 * d1;
        if r1 < 0 {
            continue;
        }
        for d2 in -bound..=bound {
            let r2 = r1 - d2 * d2;
            if r2 < 0 {
                continue;
            }
            for d3 in -bound..=bound {
                let r3 = r2 - d3 * d3;
                if r3 < 0 {
                    continue;
                }
                let s = isqrt(r3 as u64) as i64;
                if s * s != r3 {
                    continue;
                }
                let d4s: &[i64] = if s == 0 { &[0] } else { &[-s, s] };
                for &d4 in d4s {
                    if let Ok(h) = HurwitzInt::from_doubled([d1, d2, d3, d4]) {
                        if filter.admits(h.parity_class()) {
                            out.push(h);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Every Hurwitz integer of prime norm `p` in the requested class.
pub fn find_primes_with_norm(p: u64, filter: ClassFilter) -> Result<Vec<HurwitzInt>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(hurwitz_with_norm(p, filter))
}

/// Every prime Hurwitz integer with norm at most `bound`, ordered by norm and
/// then lexicographically.
pub fn primes_up_to(bound: u64, filter: ClassFilter) -> Vec<HurwitzInt> {
    (2..=bound)
        .filter(|&p| is_prime(p))
        .flat_map(|p| hurwitz_with_norm(p, filter))
        .collect()
}
