//! The two modulo branches, the min-rule selector that combines them, and the
//! residue table of a prime Hurwitz modulus.
//!
//! For a prime `alpha` with `N = N(alpha)` and an integer `z`:
//!
//! ```text
//! branch one:  z - alpha * round_int(conj(alpha) * z / N)
//! branch two:  z - alpha * round_half(conj(alpha) * z / N)
//! ```
//!
//! The selector keeps branch one when its norm is strictly smaller, or when
//! the norms tie and `z` is even; otherwise it keeps branch two.
//!
//! Both branches subtract `alpha * lambda` for a Hurwitz `lambda`, so every
//! residue differs from `z` by an element of the ideal `alpha H`. Congruence
//! modulo `alpha` throughout this crate means exactly that:
//! `q1 ≡ q2` iff `q1 - q2 = alpha * lambda` for some Hurwitz `lambda`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::primes::is_prime;
use crate::quaternion::{hamilton_wide, HurwitzInt};
use crate::rational::RationalQuaternion;
use crate::rounding::{round_doubled, RoundingMode};

/// A Hurwitz integer of prime norm, together with that norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeModulus {
    alpha: HurwitzInt,
    norm: u64,
}

impl PrimeModulus {
    pub fn new(alpha: HurwitzInt) -> Result<Self> {
        let norm = alpha.checked_norm()?;
        if !is_prime(norm) {
            return Err(Error::NonPrimeModulus {
                alpha: alpha.to_string(),
                norm,
            });
        }
        // keeps every intermediate product comfortably inside i64
        if norm > (1 << 40) {
            return Err(Error::Overflow);
        }
        Ok(PrimeModulus { alpha, norm })
    }

    pub fn alpha(&self) -> HurwitzInt {
        self.alpha
    }

    pub fn norm(&self) -> u64 {
        self.norm
    }

    /// A canonical label of the class of `q` modulo `alpha H`.
    ///
    /// `q` lies in `alpha H` iff `conj(alpha) q = N * lambda` with `lambda`
    /// Hurwitz. In doubled coordinates `D` of `conj(alpha) q` that means every
    /// `D_i` is a multiple of `N` and the quotients share a parity, i.e.
    /// `D mod 2N` is `(0,0,0,0)` or `(N,N,N,N)`. Subtracting `N` from all four
    /// coordinates when the first one is at least `N` picks one label per class.
    pub fn coset_key(&self, q: &HurwitzInt) -> [i64; 4] {
        let wide = hamilton_wide(self.alpha.conj().doubled(), q.doubled());
        self.key_from_doubled(wide.map(|x| x / 2))
    }

    pub(crate) fn key_from_doubled(&self, d: [i128; 4]) -> [i64; 4] {
        let n = i128::from(self.norm);
        let m = 2 * n;
        let mut k = d.map(|x| x.rem_euclid(m));
        if k[0] >= n {
            k = k.map(|x| (x - n).rem_euclid(m));
        }
        k.map(|x| x as i64)
    }

    pub fn is_zero_class(&self, q: &HurwitzInt) -> bool {
        self.coset_key(q) == [0; 4]
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (N = {})", self.alpha, self.norm)
    }
}

/// Which modulo branch produced a residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// Nearest-integer rounding.
    One,
    /// Nearest-half-integer rounding.
    Two,
}

impl Branch {
    pub fn mode(self) -> RoundingMode {
        match self {
            Branch::One => RoundingMode::NearestInteger,
            Branch::Two => RoundingMode::NearestHalfInteger,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Branch::One => 1,
            Branch::Two => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Branch::One),
            2 => Some(Branch::Two),
            _ => None,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl Serialize for Branch {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

impl<'de> Deserialize<'de> for Branch {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let n = u8::deserialize(d)?;
        Branch::from_number(n)
            .ok_or_else(|| serde::de::Error::custom(format!("branch must be 1 or 2, got {n}")))
    }
}

/// One row of a residue table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueEntry {
    pub z: i64,
    pub branch: Branch,
    pub residue: HurwitzInt,
    /// Norm of the branch-one value.
    pub norm1: u64,
    /// Norm of the branch-two value.
    pub norm2: u64,
}

/// `z - alpha * round(conj(alpha) * z / N)` for the given branch.
pub fn branch_value(m: &PrimeModulus, z: i64, branch: Branch) -> Result<HurwitzInt> {
    // conj(alpha) z / N has components z c_i / 2N, c = doubled conj(alpha)
    let den = 2 * i128::from(m.norm);
    let c = m.alpha.conj().doubled();
    let mut lambda = [0i64; 4];
    for (l, ci) in lambda.iter_mut().zip(c) {
        let r = round_doubled(i128::from(z) * i128::from(ci), den, branch.mode());
        *l = i64::try_from(r).map_err(|_| Error::Overflow)?;
    }
    let prod = hamilton_wide(m.alpha.doubled(), lambda);
    let zd = 2 * i128::from(z);
    let mut d = [0i64; 4];
    for (i, slot) in d.iter_mut().enumerate() {
        let v = if i == 0 { zd } else { 0 } - prod[i] / 2;
        *slot = i64::try_from(v).map_err(|_| Error::Overflow)?;
    }
    HurwitzInt::from_doubled(d)
}

pub fn mu1(m: &PrimeModulus, z: i64) -> Result<HurwitzInt> {
    branch_value(m, z, Branch::One)
}

pub fn mu2(m: &PrimeModulus, z: i64) -> Result<HurwitzInt> {
    branch_value(m, z, Branch::Two)
}

/// Evaluates both branches and applies the min rule.
pub fn mu(m: &PrimeModulus, z: i64) -> Result<ResidueEntry> {
    let one = mu1(m, z)?;
    let two = mu2(m, z)?;
    let (norm1, norm2) = (one.checked_norm()?, two.checked_norm()?);
    let branch = if norm1 < norm2 || (norm1 == norm2 && z % 2 == 0) {
        Branch::One
    } else {
        Branch::Two
    };
    let residue = if branch == Branch::One { one } else { two };
    Ok(ResidueEntry {
        z,
        branch,
        residue,
        norm1,
        norm2,
    })
}

/// `mu(z)` for `z = 0..N` with no consistency checks.
pub fn raw_entries(m: &PrimeModulus) -> Result<Vec<ResidueEntry>> {
    (0..m.norm as i64).map(|z| mu(m, z)).collect()
}

/// Branch values `z = 0..N` for a single branch.
pub fn branch_table(m: &PrimeModulus, branch: Branch) -> Result<Vec<HurwitzInt>> {
    (0..m.norm as i64)
        .map(|z| branch_value(m, z, branch))
        .collect()
}

/// True iff `q1 - q2 = alpha * lambda` for a Hurwitz `lambda`, tested as
/// `alpha^-1 (q1 - q2)` being a Hurwitz integer in exact rationals.
pub fn left_congruent(q1: &HurwitzInt, q2: &HurwitzInt, m: &PrimeModulus) -> bool {
    let diff = match q1.checked_sub(q2) {
        Ok(d) => RationalQuaternion::from(d),
        Err(_) => return false,
    };
    m.alpha
        .inverse()
        .and_then(|inv| inv.checked_mul(&diff))
        .map(|x| x.is_hurwitz())
        .unwrap_or(false)
}

/// True iff `q1 - q2 = lambda * alpha` for a Hurwitz `lambda`. This is the
/// other one-sided ideal; the residue construction is not compatible with it.
pub fn right_congruent(q1: &HurwitzInt, q2: &HurwitzInt, m: &PrimeModulus) -> bool {
    let diff = match q1.checked_sub(q2) {
        Ok(d) => RationalQuaternion::from(d),
        Err(_) => return false,
    };
    m.alpha
        .inverse()
        .and_then(|inv| diff.checked_mul(&inv))
        .map(|x| x.is_hurwitz())
        .unwrap_or(false)
}

/// The `N(alpha)` residues of a prime modulus, `z` ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueTable {
    modulus: PrimeModulus,
    entries: Vec<ResidueEntry>,
}

/// Builds the table and checks that every residue is congruent to its `z` and
/// that no two residues are congruent to each other.
pub fn residue_table(m: &PrimeModulus) -> Result<ResidueTable> {
    let entries = raw_entries(m)?;
    ResidueTable::from_entries(*m, entries)
}

impl ResidueTable {
    fn from_entries(modulus: PrimeModulus, entries: Vec<ResidueEntry>) -> Result<Self> {
        let alpha = || modulus.alpha.to_string();
        if entries.len() as u64 != modulus.norm {
            return Err(Error::Format {
                format: "residue table",
                reason: format!("expected {} entries, found {}", modulus.norm, entries.len()),
            });
        }
        let mut seen: HashMap<[i64; 4], u64> = HashMap::with_capacity(entries.len());
        for (idx, e) in entries.iter().enumerate() {
            if e.z != idx as i64 {
                return Err(Error::Format {
                    format: "residue table",
                    reason: format!("entry {idx} has z = {}", e.z),
                });
            }
            let z = HurwitzInt::from_integer(e.z)?;
            if !modulus.is_zero_class(&e.residue.checked_sub(&z)?) {
                return Err(Error::Congruence {
                    alpha: alpha(),
                    z: e.z as u64,
                });
            }
            if let Some(prev) = seen.insert(modulus.coset_key(&e.residue), e.z as u64) {
                return Err(Error::Bijectivity {
                    alpha: alpha(),
                    z1: prev,
                    z2: e.z as u64,
                });
            }
        }
        Ok(ResidueTable { modulus, entries })
    }

    pub fn modulus(&self) -> &PrimeModulus {
        &self.modulus
    }

    pub fn entries(&self) -> &[ResidueEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn residues(&self) -> impl Iterator<Item = HurwitzInt> + '_ {
        self.entries.iter().map(|e| e.residue)
    }

    pub fn to_json(&self) -> String {
        let doc = TableDoc {
            alpha: self.modulus.alpha,
            norm: self.modulus.norm,
            entries: self.entries.clone(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
        s.push('\n');
        s
    }

    /// Parses and re-validates a table written by [`to_json`](Self::to_json).
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: TableDoc = serde_json::from_str(s).map_err(|e| Error::Format {
            format: "JSON",
            reason: e.to_string(),
        })?;
        let modulus = PrimeModulus::new(doc.alpha)?;
        if modulus.norm != doc.norm {
            return Err(Error::Format {
                format: "JSON",
                reason: format!(
                    "norm field {} disagrees with N(alpha) = {}",
                    doc.norm, modulus.norm
                ),
            });
        }
        Self::from_entries(modulus, doc.entries)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for e in &self.entries {
            w.serialize(CsvRow {
                alpha: self.modulus.alpha,
                norm: self.modulus.norm,
                z: e.z,
                branch: e.branch,
                residue: e.residue,
                norm1: e.norm1,
                norm2: e.norm2,
            })
            .expect("csv row serializes");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("csv is utf-8")
    }

    pub fn from_csv(s: &str) -> Result<Self> {
        let fmt_err = |e: csv::Error| Error::Format {
            format: "CSV",
            reason: e.to_string(),
        };
        let mut r = csv::Reader::from_reader(s.as_bytes());
        let mut alpha = None;
        let mut entries = Vec::new();
        for row in r.deserialize::<CsvRow>() {
            let row = row.map_err(fmt_err)?;
            match alpha {
                None => alpha = Some(row.alpha),
                Some(a) if a != row.alpha => {
                    return Err(Error::Format {
                        format: "CSV",
                        reason: "rows name different moduli".into(),
                    })
                }
                _ => {}
            }
            entries.push(ResidueEntry {
                z: row.z,
                branch: row.branch,
                residue: row.residue,
                norm1: row.norm1,
                norm2: row.norm2,
            });
        }
        let alpha = alpha.ok_or(Error::Format {
            format: "CSV",
            reason: "no rows".into(),
        })?;
        Self::from_entries(PrimeModulus::new(alpha)?, entries)
    }
}

#[derive(Serialize, Deserialize)]
struct TableDoc {
    alpha: HurwitzInt,
    norm: u64,
    entries: Vec<ResidueEntry>,
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    alpha: HurwitzInt,
    norm: u64,
    z: i64,
    branch: Branch,
    residue: HurwitzInt,
    norm1: u64,
    norm2: u64,
}
