//! Rounding to the nearest integer and to the nearest half-integer.
//!
//! Ties go up (toward +inf) when the value being rounded is zero or negative,
//! and down otherwise. The rule is applied per component.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::HurwitzInt;
use crate::rational::RationalQuaternion;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoundingMode {
    /// Grid `Z`.
    NearestInteger,
    /// Grid `Z + 1/2`.
    NearestHalfInteger,
}

/// Nearest integer to `num / den` (`den > 0`), ties up when `tie_up`.
fn nearest(num: i128, den: i128, tie_up: bool) -> i128 {
    let fl = num.div_euclid(den);
    let twice_rem = 2 * num.rem_euclid(den);
    match twice_rem.cmp(&den) {
        std::cmp::Ordering::Less => fl,
        std::cmp::Ordering::Greater => fl + 1,
        std::cmp::Ordering::Equal if tie_up => fl + 1,
        std::cmp::Ordering::Equal => fl,
    }
}

/// Rounds `num / den` and returns the result in doubled coordinates.
pub(crate) fn round_doubled(num: i128, den: i128, mode: RoundingMode) -> i128 {
    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
    let tie_up = num <= 0;
    match mode {
        RoundingMode::NearestInteger => 2 * nearest(num, den, tie_up),
        // x - 1/2 to the nearest integer, then shift back
        RoundingMode::NearestHalfInteger => 2 * nearest(2 * num - den, 2 * den, tie_up) + 1,
    }
}

/// Rounds a rational to the mode's grid.
pub fn round_scalar(x: Ratio<i64>, mode: RoundingMode) -> Ratio<i64> {
    let d = round_doubled(i128::from(*x.numer()), i128::from(*x.denom()), mode);
    Ratio::new(i64::try_from(d).expect("rounded value fits"), 2)
}

/// Componentwise rounding. Integer mode lands on a Lipschitz point and
/// half-integer mode on an all-odd point; both are Hurwitz integers.
pub fn round_quaternion(q: &RationalQuaternion, mode: RoundingMode) -> Result<HurwitzInt> {
    let den = i128::from(q.denominator());
    let mut d = [0i64; 4];
    for (slot, n) in d.iter_mut().zip(q.numerators()) {
        let r = round_doubled(i128::from(n), den, mode);
        *slot = i64::try_from(r).map_err(|_| Error::Overflow)?;
    }
    HurwitzInt::from_doubled(d)
}
