//! Average energy of a residue set, the energy table for primes `N = 6k + 1`,
//! and code rates for `p ≡ 1 (mod 24)`.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::modulo::{residue_table, PrimeModulus, ResidueTable};
use crate::primes::{find_primes_with_norm, is_prime, ClassFilter};
use crate::quaternion::{HurwitzInt, ParityClass};

fn ratio_str<T: fmt::Display + Clone + num_integer::Integer, S: Serializer>(
    r: &Ratio<T>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

/// How a fraction is cut to a fixed number of decimals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecimalRounding {
    /// Round half up at the last kept digit.
    HalfUp,
    /// Round half up to one extra digit first, then half up again.
    /// `28/13 = 2.153846...` becomes `2.15385` and then `2.1539`.
    Cascade,
}

fn scaled_half_up(num: u128, den: u128, places: u32) -> u128 {
    let scaled = num * 10u128.pow(places);
    let (q, r) = (scaled / den, scaled % den);
    if 2 * r >= den {
        q + 1
    } else {
        q
    }
}

/// Renders `r` with exactly `places` decimals.
pub fn render_decimal(r: Ratio<u64>, places: u32, rounding: DecimalRounding) -> String {
    let (num, den) = (u128::from(*r.numer()), u128::from(*r.denom()));
    let digits = match rounding {
        DecimalRounding::HalfUp => scaled_half_up(num, den, places),
        DecimalRounding::Cascade => (scaled_half_up(num, den, places + 1) + 5) / 10,
    };
    let unit = 10u128.pow(places);
    if places == 0 {
        return digits.to_string();
    }
    format!(
        "{}.{:0width$}",
        digits / unit,
        digits % unit,
        width = places as usize
    )
}

/// Rendering used for every energy figure.
pub const ENERGY_ROUNDING: DecimalRounding = DecimalRounding::Cascade;
pub const ENERGY_PLACES: u32 = 4;

/// Mean residue norm of a residue table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnergyReport {
    pub alpha: HurwitzInt,
    pub norm: u64,
    pub total_norm: u64,
    #[serde(serialize_with = "ratio_str")]
    pub average_energy: Ratio<u64>,
    pub decimal: String,
    /// residue norm -> how many residues have it
    pub histogram: BTreeMap<u64, u64>,
}

impl fmt::Display for EnergyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ≈ {}", self.average_energy, self.decimal)
    }
}

pub fn energy_of_table(table: &ResidueTable) -> EnergyReport {
    let m = table.modulus();
    let mut histogram = BTreeMap::new();
    let mut total = 0u64;
    for r in table.residues() {
        let n = r.norm();
        total += n;
        *histogram.entry(n).or_insert(0) += 1;
    }
    let average_energy = Ratio::new(total, m.norm());
    EnergyReport {
        alpha: m.alpha(),
        norm: m.norm(),
        total_norm: total,
        average_energy,
        decimal: render_decimal(average_energy, ENERGY_PLACES, ENERGY_ROUNDING),
        histogram,
    }
}

/// `(1/N) * sum of N(mu(z))` over the canonical residue table.
pub fn average_energy(m: &PrimeModulus) -> Result<EnergyReport> {
    Ok(energy_of_table(&residue_table(m)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepresentativeEnergy {
    pub alpha: HurwitzInt,
    #[serde(serialize_with = "ratio_str")]
    pub energy: Ratio<u64>,
    pub decimal: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table1Row {
    pub norm: u64,
    /// Integer-class representatives with three equal components.
    pub integer_representatives: Vec<RepresentativeEnergy>,
    /// Half-integer-class representatives with three equal components.
    pub half_representatives: Vec<RepresentativeEnergy>,
    /// Energy of the first half-integer representative.
    #[serde(serialize_with = "ratio_str")]
    pub energy: Ratio<u64>,
    pub decimal: String,
    /// Whether every representative above has the same energy.
    pub representatives_agree: bool,
    /// The remaining canonical representatives of both classes.
    pub others: Vec<RepresentativeEnergy>,
}

/// Representatives with components sorted non-increasing and all
/// non-negative (integer class) or all positive (half-integer class),
/// ascending in doubled coordinates.
pub fn canonical_representatives(p: u64, class: ParityClass) -> Result<Vec<HurwitzInt>> {
    let filter = match class {
        ParityClass::Integer => ClassFilter::Integer,
        ParityClass::HalfInteger => ClassFilter::HalfInteger,
    };
    Ok(find_primes_with_norm(p, filter)?
        .into_iter()
        .filter(|h| {
            let d = h.doubled();
            d.windows(2).all(|w| w[0] >= w[1]) && d[3] >= 0
        })
        .collect())
}

/// Three of the four components are equal, as in `a + b(i + j + k)`.
pub fn has_three_equal_components(q: &HurwitzInt) -> bool {
    let mut d = q.doubled();
    d.sort_unstable();
    d[0] == d[2] || d[1] == d[3]
}

fn energies(reps: &[HurwitzInt]) -> Result<Vec<RepresentativeEnergy>> {
    reps.iter()
        .map(|&alpha| {
            let e = average_energy(&PrimeModulus::new(alpha)?)?;
            Ok(RepresentativeEnergy {
                alpha,
                energy: e.average_energy,
                decimal: e.decimal,
            })
        })
        .collect()
}

fn table1_row(p: u64) -> Result<Table1Row> {
    let mut listed = Vec::new();
    let mut others = Vec::new();
    for class in [ParityClass::Integer, ParityClass::HalfInteger] {
        let (three, rest): (Vec<HurwitzInt>, Vec<HurwitzInt>) =
            canonical_representatives(p, class)?
                .into_iter()
                .partition(has_three_equal_components);
        if three.is_empty() {
            return Err(Error::NoRepresentative {
                norm: p,
                class: class.to_string(),
            });
        }
        listed.push(energies(&three)?);
        others.extend(energies(&rest)?);
    }
    let half = listed.pop().expect("two classes");
    let int = listed.pop().expect("two classes");
    let energy = half[0].energy;
    Ok(Table1Row {
        norm: p,
        representatives_agree: int.iter().chain(&half).all(|r| r.energy == energy),
        decimal: half[0].decimal.clone(),
        energy,
        integer_representatives: int,
        half_representatives: half,
        others,
    })
}

/// One row per prime `N = 6k + 1 <= norm_bound`.
pub fn table1(norm_bound: u64) -> Result<Vec<Table1Row>> {
    if norm_bound < 7 {
        return Err(Error::InvalidArgument(format!(
            "table bound must be at least 7, got {norm_bound}"
        )));
    }
    let primes: Vec<u64> = (7..=norm_bound)
        .filter(|&n| n % 6 == 1 && is_prime(n))
        .collect();
    primes.par_iter().map(|&p| table1_row(p)).collect()
}

fn join_reps(reps: &[RepresentativeEnergy]) -> String {
    reps.iter()
        .map(|r| r.alpha.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn table1_markdown(rows: &[Table1Row]) -> String {
    let mut s = String::new();
    s.push_str("| N | Hurwitz integers (Z) | Hurwitz integers (Z+1/2) | Average energy | Other representatives |\n");
    s.push_str("|---|---|---|---|---|\n");
    for r in rows {
        let others: Vec<String> = r
            .others
            .iter()
            .map(|e| format!("{} ({})", e.alpha, e.decimal))
            .collect();
        let _ = writeln!(
            s,
            "| {} | {} | {} | {}{} | {} |",
            r.norm,
            join_reps(&r.integer_representatives),
            join_reps(&r.half_representatives),
            r.decimal,
            if r.representatives_agree {
                ""
            } else {
                " (mixed)"
            },
            others.join(", ")
        );
    }
    s
}

/// One row per representative: `norm,class,representative,listed,energy,decimal`.
/// `listed` marks the three-equal-component representatives.
pub fn table1_csv(rows: &[Table1Row]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "norm",
        "class",
        "representative",
        "listed",
        "energy",
        "decimal",
    ])
    .expect("csv header");
    for r in rows {
        let all = r
            .integer_representatives
            .iter()
            .chain(&r.half_representatives)
            .map(|e| (true, e))
            .chain(r.others.iter().map(|e| (false, e)));
        for (listed, e) in all {
            w.write_record([
                r.norm.to_string(),
                e.alpha.parity_class().to_string(),
                e.alpha.to_string(),
                listed.to_string(),
                e.energy.to_string(),
                e.decimal.clone(),
            ])
            .expect("csv row");
        }
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv is utf-8")
}

/// Length, dimension and rate of a code over `H` with `|C| = p^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RateReport {
    pub p: u64,
    pub k: u32,
    pub n: u128,
    #[serde(serialize_with = "ratio_str")]
    pub rate: Ratio<u128>,
}

impl fmt::Display for RateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})-code, R = {}", self.n, self.k, self.rate)
    }
}

/// `n = (p^k - 1) / 24`, `R = k / n`. Requires `p` prime with `p ≡ 1 (mod 24)`.
pub fn code_rate(p: u64, k: u32) -> Result<RateReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 24 != 1 {
        return Err(Error::RateModulus { p, residue: p % 24 });
    }
    if k == 0 {
        return Err(Error::ZeroDimension);
    }
    let pk = u128::from(p).checked_pow(k).ok_or(Error::Overflow)?;
    debug_assert_eq!((pk - 1) % 24, 0);
    let n = (pk - 1) / 24;
    Ok(RateReport {
        p,
        k,
        n,
        rate: Ratio::new(u128::from(k), n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> PrimeModulus {
        PrimeModulus::new(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn decimal_rendering() {
        let r = |a, b| Ratio::new(a, b);
        assert_eq!(
            render_decimal(r(24, 13), 4, DecimalRounding::HalfUp),
            "1.8462"
        );
        assert_eq!(
            render_decimal(r(28, 13), 4, DecimalRounding::HalfUp),
            "2.1538"
        );
        assert_eq!(
            render_decimal(r(28, 13), 4, DecimalRounding::Cascade),
            "2.1539"
        );
        assert_eq!(
            render_decimal(r(24, 11), 4, DecimalRounding::Cascade),
            "2.1818"
        );
        assert_eq!(
            render_decimal(r(6, 1), 4, DecimalRounding::Cascade),
            "6.0000"
        );
        assert_eq!(render_decimal(r(1, 8), 2, DecimalRounding::HalfUp), "0.13");
        assert_eq!(render_decimal(r(7, 2), 0, DecimalRounding::HalfUp), "4");
        assert_eq!(
            render_decimal(r(0, 5), 4, DecimalRounding::HalfUp),
            "0.0000"
        );
    }

    #[test]
    fn energies_of_worked_examples() {
        let e = average_energy(&m("5/2+3/2i+3/2j+3/2k")).unwrap();
        assert_eq!(
            (e.average_energy, e.decimal.as_str()),
            (Ratio::new(24, 13), "1.8462")
        );
        let e = average_energy(&m("3+2i")).unwrap();
        assert_eq!(
            (e.average_energy, e.decimal.as_str()),
            (Ratio::new(28, 13), "2.1539")
        );
        let e = average_energy(&m("3+i+j")).unwrap();
        assert_eq!(
            (e.average_energy, e.decimal.as_str()),
            (Ratio::new(24, 11), "2.1818")
        );
        assert_eq!(e.histogram.values().sum::<u64>(), 11);
        assert_eq!(e.to_string(), "24/11 ≈ 2.1818");
    }

    #[test]
    fn half_class_beats_integer_class_at_thirteen() {
        let half = average_energy(&m("5/2+3/2i+3/2j+3/2k"))
            .unwrap()
            .average_energy;
        let int = average_energy(&m("3+2i")).unwrap().average_energy;
        assert!(half < int);
    }

    #[test]
    fn energy_is_strictly_between_zero_and_norm() {
        for a in crate::primes::primes_up_to(50, ClassFilter::Both)
            .into_iter()
            .step_by(5)
        {
            let pm = PrimeModulus::new(a).unwrap();
            let e = average_energy(&pm).unwrap().average_energy;
            assert!(
                e > Ratio::from_integer(0) && e < Ratio::from_integer(pm.norm()),
                "{a}"
            );
        }
    }

    #[test]
    fn rates() {
        let r = code_rate(73, 1).unwrap();
        assert_eq!((r.n, r.rate), (3, Ratio::new(1, 3)));
        assert_eq!(r.to_string(), "(3,1)-code, R = 1/3");
        let r = code_rate(97, 1).unwrap();
        assert_eq!((r.n, r.rate), (4, Ratio::new(1, 4)));
        let r = code_rate(73, 2).unwrap();
        assert_eq!((r.n, r.rate), (222, Ratio::new(1, 111)));
        assert_eq!(
            code_rate(71, 1),
            Err(Error::RateModulus { p: 71, residue: 23 })
        );
        assert_eq!(code_rate(25, 1), Err(Error::NotPrime(25)));
        assert_eq!(code_rate(73, 0), Err(Error::ZeroDimension));
        assert_eq!(code_rate(73, 40), Err(Error::Overflow));
    }

    #[test]
    fn rate_arithmetic_identity() {
        for p in (2..2000u64).filter(|&p| is_prime(p) && p % 24 == 1) {
            for k in 1..=4 {
                let r = code_rate(p, k).unwrap();
                assert_eq!(24 * r.n + 1, u128::from(p).pow(k));
            }
        }
    }

    #[test]
    fn table1_rows() {
        let rows = table1(43).unwrap();
        let got: Vec<(u64, &str)> = rows.iter().map(|r| (r.norm, r.decimal.as_str())).collect();
        assert_eq!(
            got,
            [
                (7, "0.8571"),
                (13, "1.8462"),
                (19, "2.5263"),
                (31, "4.2581"),
                (37, "5.0270"),
                (43, "6.0000")
            ]
        );
        assert!(rows.iter().all(|r| r.representatives_agree));
        let r19 = &rows[2];
        assert_eq!(r19.integer_representatives[0].alpha.to_string(), "4+i+j+k");
        assert!(r19.others.iter().any(|e| e.energy != r19.energy));
        let csv = table1_csv(&rows);
        assert!(csv.starts_with(
            "norm,class,representative,listed,energy,decimal\n7,integer,2+i+j+k,true,6/7,0.8571\n"
        ));
    }

    #[test]
    fn three_equal_shape() {
        for (s, want) in [
            ("2+2i+2j+k", true),
            ("5/2+1/2i+1/2j+1/2k", true),
            ("3+2i", false),
            ("1", true),
        ] {
            assert_eq!(has_three_equal_components(&s.parse().unwrap()), want, "{s}");
        }
    }

    #[test]
    fn table1_rejects_small_bound() {
        assert!(table1(6).is_err());
    }

    #[test]
    fn canonical_reps_of_seven() {
        let halves = canonical_representatives(7, ParityClass::HalfInteger).unwrap();
        let want: Vec<HurwitzInt> = ["3/2+3/2i+3/2j+1/2k", "5/2+1/2i+1/2j+1/2k"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(halves, want);
        let ints = canonical_representatives(7, ParityClass::Integer).unwrap();
        assert_eq!(ints, vec!["2+i+j+k".parse::<HurwitzInt>().unwrap()]);
    }
}
