//! Exhaustive checks of the residue construction.
//!
//! Every check returns a [`VerificationReport`]; a counterexample is data, not
//! an error. Checks over many moduli fan out with rayon and are merged back in
//! modulus order, so output never depends on scheduling.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::modulo::{mu1, mu2, raw_entries, Branch, PrimeModulus, ResidueEntry};
use crate::primes::{primes_up_to, ClassFilter};
use crate::quaternion::{hamilton_wide, HurwitzInt, ParityClass};

/// Counterexamples kept per report; the failure count is always exact.
pub const MAX_WITNESSES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// `mu` respects addition and multiplication modulo `alpha`.
    Homomorphism,
    /// Residues are distinct, pairwise incongruent, and congruent to `z`.
    Bijection,
    /// `mu(z) + mu(N - z)` is congruent to zero.
    Symmetry,
    /// Values at `z = 0` and `z = N`.
    Anchors,
    /// Two-component integer moduli never need branch two.
    TwoComponentCollapse,
}

impl Check {
    pub const ALL: [Check; 5] = [
        Check::Bijection,
        Check::Homomorphism,
        Check::Symmetry,
        Check::Anchors,
        Check::TwoComponentCollapse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Homomorphism => "homomorphism",
            Check::Bijection => "bijection",
            Check::Symmetry => "symmetry",
            Check::Anchors => "anchors",
            Check::TwoComponentCollapse => "two-component-collapse",
        }
    }

    fn applies_to(self, alpha: &HurwitzInt) -> bool {
        match self {
            // at norm 2 the odd-z tie picks branch two
            Check::TwoComponentCollapse => is_two_component(alpha) && alpha.norm() > 2,
            _ => true,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub alpha: HurwitzInt,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub check: Check,
    pub moduli: u64,
    pub cases: u64,
    pub failures: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl VerificationReport {
    fn new(check: Check) -> Self {
        VerificationReport {
            check,
            moduli: 0,
            cases: 0,
            failures: 0,
            counterexamples: Vec::new(),
        }
    }

    fn single(check: Check) -> Self {
        VerificationReport {
            moduli: 1,
            ..Self::new(check)
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, ok: bool, alpha: HurwitzInt, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.counterexamples.len() < MAX_WITNESSES {
                self.counterexamples.push(Counterexample {
                    alpha,
                    witness: witness(),
                });
            }
        }
    }

    fn merge(&mut self, other: VerificationReport) {
        self.moduli += other.moduli;
        self.cases += other.cases;
        self.failures += other.failures;
        let room = MAX_WITNESSES.saturating_sub(self.counterexamples.len());
        self.counterexamples
            .extend(other.counterexamples.into_iter().take(room));
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<24} {} moduli={} cases={} failures={}",
            self.check.name(),
            if self.passed() { "PASS" } else { "FAIL" },
            self.moduli,
            self.cases,
            self.failures
        )?;
        for c in &self.counterexamples {
            write!(f, "\n    alpha={}: {}", c.alpha, c.witness)?;
        }
        Ok(())
    }
}

/// Residues of one modulus with their class labels, shared by the checks.
///
/// `keys[z]` is the coset key of `mu(z)`: the doubled coordinates of
/// `conj(alpha) mu(z)` reduced mod `2N` and normalized. It is itself the
/// doubled form of `conj(alpha) mu(z) - N lambda` for a Hurwitz `lambda`, so
/// it can stand in for `conj(alpha) mu(z)` in sums and right products.
struct Prepared {
    m: PrimeModulus,
    entries: Vec<ResidueEntry>,
    keys: Vec<[i64; 4]>,
    /// Keys as four 16-bit lanes, when `N < 8192`.
    packed: Option<Vec<u64>>,
    doubled: Vec<[i64; 4]>,
    n: i64,
    /// `(magic, offset)` when every right product fits the 32-bit fast
    /// reduction; `offset` is a multiple of `2N` that makes products positive.
    fast: Option<(u64, i64)>,
    /// Inverse of `N` modulo `2^64` (odd `N` only) and `u64::MAX / N`.
    inv: u64,
    lim: u64,
    lanes: Option<Lanes>,
}

/// Column-major 32-bit copies for the vectorized row pass. Present when the
/// packed and fast paths both apply and `N` is odd.
struct Lanes {
    doubled: [Vec<i32>; 4],
    keys: [Vec<i32>; 4],
    off: i32,
    inv: u32,
    lim: u32,
}

impl Prepared {
    fn new(m: &PrimeModulus) -> Result<Self> {
        Ok(Self::from_entries(m, raw_entries(m)?))
    }

    fn from_entries(m: &PrimeModulus, entries: Vec<ResidueEntry>) -> Self {
        let keys: Vec<[i64; 4]> = entries.iter().map(|e| m.coset_key(&e.residue)).collect();
        let doubled: Vec<[i64; 4]> = entries.iter().map(|e| e.residue.doubled()).collect();
        let n = m.norm() as i64;
        let max_d = doubled
            .iter()
            .flatten()
            .map(|x| x.unsigned_abs())
            .max()
            .unwrap_or(0);
        // products are bounded by 4 * 2N * max_d / 2; offset adds as much again
        let bound = 8u128 * u128::from(m.norm()) * u128::from(max_d) + 4 * u128::from(m.norm());
        let fast = (bound < 1 << 32).then(|| {
            let m = 2 * n;
            (u64::MAX / m as u64 + 1, (4 * n * max_d as i64 / m + 1) * m)
        });
        let packed = (n < 8192).then(|| keys.iter().map(pack).collect());
        let nu = n as u64;
        // Newton's iteration doubles the correct low bits each step
        let inv = (0..6).fold(nu, |x, _| {
            x.wrapping_mul(2u64.wrapping_sub(nu.wrapping_mul(x)))
        });
        let lanes = match (fast, n % 2, &packed) {
            // products and offsets all stay well inside i32
            (Some((_, off)), 1, Some(_)) if 2 * bound < 1 << 31 => Some(Lanes {
                doubled: std::array::from_fn(|i| doubled.iter().map(|d| d[i] as i32).collect()),
                keys: std::array::from_fn(|i| keys.iter().map(|k| k[i] as i32).collect()),
                off: off as i32,
                inv: inv as u32,
                lim: u32::MAX / n as u32,
            }),
            _ => None,
        };
        Prepared {
            m: *m,
            entries,
            keys,
            packed,
            doubled,
            n,
            fast,
            inv,
            lim: u64::MAX / nu,
            lanes,
        }
    }

    fn len(&self) -> usize {
        self.entries.len()
    }

    fn res(&self, z: usize) -> HurwitzInt {
        self.entries[z].residue
    }

    /// Key of the sum of two keyed elements, without division.
    fn add_keys(&self, a: &[i64; 4], b: &[i64; 4]) -> [i64; 4] {
        let (n, m) = (self.n, 2 * self.n);
        let mut t: [i64; 4] = std::array::from_fn(|i| {
            let x = a[i] + b[i];
            if x >= m {
                x - m
            } else {
                x
            }
        });
        if t[0] >= n {
            t = t.map(|x| if x >= n { x - n } else { x + n });
        }
        t
    }

    /// Whether `key(mu(z1)) + key(mu(z2))` normalizes to `key(mu(sum))`.
    fn sum_matches(&self, z1: usize, z2: usize, sum: usize) -> bool {
        match &self.packed {
            Some(k) => add_packed(k[z1], k[z2], self.n as u64) == k[sum],
            None => self.add_keys(&self.keys[z1], &self.keys[z2]) == self.keys[sum],
        }
    }

    /// Whether `key(mu(z1)) mu(z2)` lies in the class keyed by `key(mu(prod))`.
    ///
    /// For odd `N` the difference `D` of doubled coordinates is in the zero
    /// class iff every `D_i` is divisible by `N` and all share a parity.
    /// Divisibility uses the multiply-by-inverse test.
    fn product_matches(&self, z1: usize, z2: usize, prod: usize) -> bool {
        match (self.fast, self.n % 2) {
            (Some((_, off)), 1) => {
                let p = hamilton_small(&self.keys[z1], &self.doubled[z2]);
                let t = &self.keys[prod];
                let d: [u64; 4] = std::array::from_fn(|i| (p[i] - t[i] + off) as u64);
                let same_parity = ((d[0] ^ d[1]) | (d[0] ^ d[2]) | (d[0] ^ d[3])) & 1 == 0;
                same_parity && d.iter().all(|&x| x.wrapping_mul(self.inv) <= self.lim)
            }
            _ => self.mul_key(&self.keys[z1], z2) == self.keys[prod],
        }
    }

    /// Key of `q mu(z2)` where `a` is the key of `q`.
    fn mul_key(&self, a: &[i64; 4], z2: usize) -> [i64; 4] {
        let b = &self.doubled[z2];
        match self.fast {
            Some((magic, off)) => {
                let m = 2 * self.n;
                let prod = hamilton_small(a, b);
                // shift into [0, 2^32) by a multiple of 2N, then Lemire's fastmod
                let reduce = |x: i64| -> i64 {
                    let x = (x + off) as u64;
                    let low = magic.wrapping_mul(x);
                    ((u128::from(low) * m as u128) >> 64) as i64
                };
                let mut k = prod.map(reduce);
                if k[0] >= self.n {
                    k = k.map(|x| if x >= self.n { x - self.n } else { x + self.n });
                }
                k
            }
            None => {
                let wide = hamilton_wide(*a, *b);
                self.m.key_from_doubled(wide.map(|x| x / 2))
            }
        }
    }
}

const LANES: u64 = 0x0001_0001_0001_0001;

fn pack(k: &[i64; 4]) -> u64 {
    k.iter().rev().fold(0, |acc, &x| (acc << 16) | x as u64)
}

/// Lane-wise `(a + b) mod 2N` followed by the key normalization. Lanes stay
/// below `4N < 2^15`, so adding `2^15 - 2N` sets bit 15 exactly when a lane
/// needs reducing.
fn add_packed(a: u64, b: u64, n: u64) -> u64 {
    let m = 2 * n;
    let bias = ((1 << 15) - m) * LANES;
    let reduce = |s: u64| s - (((s + bias) >> 15) & LANES) * m;
    let s = reduce(a + b);
    if s & 0xffff >= n {
        reduce(s + n * LANES)
    } else {
        s
    }
}

/// Halved Hamilton product of two doubled-coordinate vectors. The full
/// products are even, so the shift is exact.
fn hamilton_small(a: &[i64; 4], b: &[i64; 4]) -> [i64; 4] {
    let [a1, a2, a3, a4] = *a;
    let [b1, b2, b3, b4] = *b;
    [
        (a1 * b1 - a2 * b2 - a3 * b3 - a4 * b4) >> 1,
        (a1 * b2 + a2 * b1 + a3 * b4 - a4 * b3) >> 1,
        (a1 * b3 - a2 * b4 + a3 * b1 + a4 * b2) >> 1,
        (a1 * b4 + a2 * b3 - a3 * b2 + a4 * b1) >> 1,
    ]
}

/// For all `z1, z2` in `[0, N)`:
/// `mu((z1 + z2) mod N) ≡ mu(z1) + mu(z2)` and
/// `mu((z1 z2) mod N) ≡ mu(z1) mu(z2)`.
pub fn verify_homomorphism(m: &PrimeModulus) -> Result<VerificationReport> {
    Ok(homomorphism(&Prepared::new(m)?))
}

fn homomorphism(p: &Prepared) -> VerificationReport {
    let mut rep = VerificationReport::single(Check::Homomorphism);
    let mut scratch: [Vec<i32>; 4] = std::array::from_fn(|_| vec![0; p.len()]);
    for z1 in 0..p.len() {
        if !homomorphism_row_clean(p, z1, &mut scratch) {
            homomorphism_row(p, z1, &mut rep);
        } else {
            rep.cases += 2 * p.len() as u64;
        }
    }
    rep
}

/// Fast pass over one row; `false` means it needs the witness-recording pass.
fn homomorphism_row_clean(p: &Prepared, z1: usize, scratch: &mut [Vec<i32>; 4]) -> bool {
    let (Some(packed), Some(l)) = (&p.packed, &p.lanes) else {
        return false;
    };
    let n = p.len();
    let nu = p.n as u64;

    // sums: mu(z1 + z2) walks the packed keys rotated by z1
    let ka = packed[z1];
    let (head, tail) = packed.split_at(z1);
    let mut bad = 0u64;
    for (b, t) in packed.iter().zip(tail.iter().chain(head)) {
        bad |= add_packed(ka, *b, nu) ^ t;
    }

    // products: gather the keys of mu(z1 z2), then a branch-free pass
    for (dst, src) in scratch.iter_mut().zip(&l.keys) {
        let mut prod = 0;
        for d in dst.iter_mut() {
            *d = src[prod];
            let t = prod + z1;
            prod = if t >= n { t - n } else { t };
        }
    }
    let a: [i32; 4] = std::array::from_fn(|i| l.keys[i][z1]);
    let [b1, b2, b3, b4] = &l.doubled;
    let [t1, t2, t3, t4] = &*scratch;
    let mut acc = 0u32;
    for z2 in 0..n {
        let (x1, x2, x3, x4) = (b1[z2], b2[z2], b3[z2], b4[z2]);
        let q = [
            (a[0] * x1 - a[1] * x2 - a[2] * x3 - a[3] * x4) >> 1,
            (a[0] * x2 + a[1] * x1 + a[2] * x4 - a[3] * x3) >> 1,
            (a[0] * x3 - a[1] * x4 + a[2] * x1 + a[3] * x2) >> 1,
            (a[0] * x4 + a[1] * x3 - a[2] * x2 + a[3] * x1) >> 1,
        ];
        // the true differences lie in [0, 2^32)
        let d = [
            q[0].wrapping_sub(t1[z2]).wrapping_add(l.off) as u32,
            q[1].wrapping_sub(t2[z2]).wrapping_add(l.off) as u32,
            q[2].wrapping_sub(t3[z2]).wrapping_add(l.off) as u32,
            q[3].wrapping_sub(t4[z2]).wrapping_add(l.off) as u32,
        ];
        let parity = (d[0] ^ d[1]) | (d[0] ^ d[2]) | (d[0] ^ d[3]);
        let over = d.map(|x| u32::from(x.wrapping_mul(l.inv) > l.lim));
        acc |= (parity & 1) | over[0] | over[1] | over[2] | over[3];
    }
    bad == 0 && acc == 0
}

fn homomorphism_row(p: &Prepared, z1: usize, rep: &mut VerificationReport) {
    let n = p.len();
    let alpha = p.m.alpha();
    let mut sum = z1;
    let mut prod = 0;
    for z2 in 0..n {
        rep.record(p.sum_matches(z1, z2, sum), alpha, || {
            format!(
                "addition z1={z1} z2={z2}: mu({sum})={} but mu(z1)+mu(z2)={}",
                p.res(sum),
                p.res(z1) + p.res(z2)
            )
        });
        rep.record(p.product_matches(z1, z2, prod), alpha, || {
            format!(
                "multiplication z1={z1} z2={z2}: mu({prod})={} but mu(z1)mu(z2)={}",
                p.res(prod),
                p.res(z1) * p.res(z2)
            )
        });
        sum = if sum + 1 == n { 0 } else { sum + 1 };
        prod += z1;
        if prod >= n {
            prod -= n;
        }
    }
}

/// Residues are pairwise distinct, pairwise incongruent, and `mu(z) ≡ z`.
pub fn verify_bijection(m: &PrimeModulus) -> Result<VerificationReport> {
    bijection(&Prepared::new(m)?)
}

fn bijection(p: &Prepared) -> Result<VerificationReport> {
    let m = &p.m;
    let alpha = m.alpha();
    let mut rep = VerificationReport::single(Check::Bijection);

    for (z, e) in p.entries.iter().enumerate() {
        let z_q = HurwitzInt::from_integer(z as i64)?;
        let ok = m.is_zero_class(&e.residue.checked_sub(&z_q)?);
        rep.record(ok, alpha, || {
            format!("mu({z})={} is not congruent to {z}", e.residue)
        });
    }

    let mut by_value: Vec<(HurwitzInt, usize)> =
        p.entries.iter().map(|e| e.residue).zip(0..).collect();
    by_value.sort();
    let mut by_class: Vec<([i64; 4], usize)> = p.keys.iter().copied().zip(0..).collect();
    by_class.sort();
    // one case per adjacent pair after sorting covers every pair
    for w in by_value.windows(2) {
        rep.record(w[0].0 != w[1].0, alpha, || {
            format!("mu({})=mu({})={}", w[0].1, w[1].1, w[0].0)
        });
    }
    for w in by_class.windows(2) {
        rep.record(w[0].0 != w[1].0, alpha, || {
            format!(
                "mu({})={} and mu({})={} are congruent",
                w[0].1,
                p.res(w[0].1),
                w[1].1,
                p.res(w[1].1)
            )
        });
    }
    Ok(rep)
}

/// `mu(z) + mu(N - z) ≡ 0` for `z` in `[1, N)`.
pub fn verify_symmetry(m: &PrimeModulus) -> Result<VerificationReport> {
    Ok(symmetry(&Prepared::new(m)?))
}

fn symmetry(p: &Prepared) -> VerificationReport {
    let n = p.len();
    let mut rep = VerificationReport::single(Check::Symmetry);
    for z in 1..n {
        let k = p.add_keys(&p.keys[z], &p.keys[n - z]);
        rep.record(k == [0; 4], p.m.alpha(), || {
            format!("mu({z})+mu({})={}", n - z, p.res(z) + p.res(n - z))
        });
    }
    rep
}

/// Values at `z = 0` and `z = N`:
/// branch one at 0 is 0; branch two at 0 is congruent to 0 with norm `N`;
/// the min rule gives 0 at 0; at `z = N` the branch matching `alpha`'s parity
/// class is exactly 0 and the other is congruent to 0.
pub fn verify_anchors(m: &PrimeModulus) -> Result<VerificationReport> {
    let alpha = m.alpha();
    let n = m.norm() as i64;
    let mut rep = VerificationReport::single(Check::Anchors);

    let one0 = mu1(m, 0)?;
    rep.record(one0.is_zero(), alpha, || format!("mu1(0)={one0}"));
    let two0 = mu2(m, 0)?;
    rep.record(m.is_zero_class(&two0), alpha, || {
        format!("mu2(0)={two0} is not congruent to 0")
    });
    rep.record(two0.checked_norm()? == m.norm(), alpha, || {
        format!("N(mu2(0))={} but N(alpha)={}", two0.norm(), m.norm())
    });
    let min0 = crate::modulo::mu(m, 0)?;
    rep.record(
        min0.residue.is_zero() && min0.branch == Branch::One,
        alpha,
        || format!("mu(0)={} via branch {}", min0.residue, min0.branch),
    );

    let one_n = mu1(m, n)?;
    let two_n = mu2(m, n)?;
    let (exact, other) = match alpha.parity_class() {
        ParityClass::Integer => ((1, one_n), (2, two_n)),
        ParityClass::HalfInteger => ((2, two_n), (1, one_n)),
    };
    rep.record(exact.1.is_zero(), alpha, || {
        format!("mu{}(N)={} is not 0", exact.0, exact.1)
    });
    rep.record(m.is_zero_class(&other.1), alpha, || {
        format!("mu{}(N)={} is not congruent to 0", other.0, other.1)
    });
    Ok(rep)
}

/// Exactly two nonzero components, both integers.
pub fn is_two_component(alpha: &HurwitzInt) -> bool {
    alpha.parity_class() == ParityClass::Integer && alpha.support() == 2
}

/// The min-rule residues coincide with branch one for every `z`.
pub fn verify_collapse(m: &PrimeModulus) -> Result<VerificationReport> {
    collapse(&Prepared::new(m)?)
}

fn collapse(p: &Prepared) -> Result<VerificationReport> {
    let mut rep = VerificationReport::single(Check::TwoComponentCollapse);
    for e in &p.entries {
        let one = if e.branch == Branch::One {
            e.residue
        } else {
            mu1(&p.m, e.z)?
        };
        rep.record(e.residue == one, p.m.alpha(), || {
            format!(
                "z={}: mu={} (branch {}) but mu1={}",
                e.z, e.residue, e.branch, one
            )
        });
    }
    Ok(rep)
}

/// Runs the collapse check for every two-component prime of norm at most `norm_bound`.
pub fn verify_two_component_collapse(norm_bound: u64) -> Result<VerificationReport> {
    let mut reports = run_suite(norm_bound, &[Check::TwoComponentCollapse])?;
    Ok(reports.remove(0))
}

/// Runs the applicable checks on one modulus, building its residues once.
fn run_checks(m: &PrimeModulus, checks: &[Check]) -> Result<Vec<Option<VerificationReport>>> {
    let alpha = m.alpha();
    let needs_table = checks
        .iter()
        .any(|c| *c != Check::Anchors && c.applies_to(&alpha));
    let p = if needs_table {
        Some(Prepared::new(m)?)
    } else {
        None
    };
    checks
        .iter()
        .map(|&c| {
            if !c.applies_to(&alpha) {
                return Ok(None);
            }
            let p = p.as_ref();
            Ok(Some(match c {
                Check::Anchors => verify_anchors(m)?,
                Check::Homomorphism => homomorphism(p.expect("table built")),
                Check::Bijection => bijection(p.expect("table built"))?,
                Check::Symmetry => symmetry(p.expect("table built")),
                Check::TwoComponentCollapse => collapse(p.expect("table built"))?,
            }))
        })
        .collect()
}

/// Runs each check on every prime Hurwitz integer with norm at most
/// `norm_bound`, in both parity classes. One merged report per check, in the
/// order given.
pub fn run_suite(norm_bound: u64, checks: &[Check]) -> Result<Vec<VerificationReport>> {
    let moduli: Vec<PrimeModulus> = primes_up_to(norm_bound, ClassFilter::Both)
        .into_iter()
        .map(PrimeModulus::new)
        .collect::<Result<_>>()?;
    let per: Vec<Vec<Option<VerificationReport>>> = moduli
        .par_iter()
        .map(|m| run_checks(m, checks))
        .collect::<Result<_>>()?;
    let mut totals: Vec<VerificationReport> =
        checks.iter().map(|&c| VerificationReport::new(c)).collect();
    for row in per {
        for (total, r) in totals.iter_mut().zip(row) {
            if let Some(r) = r {
                total.merge(r);
            }
        }
    }
    Ok(totals)
}

/// Runs every check on a single modulus.
pub fn verify_modulus(m: &PrimeModulus) -> Result<Vec<VerificationReport>> {
    Ok(run_checks(m, &Check::ALL)?.into_iter().flatten().collect())
}
