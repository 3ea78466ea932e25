use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::SymmetricWeightFunction;
use crate::numeric::ln_rational;

/// Working precision, in bits, of the certified exponential bounds.
pub const DECAY_PRECISION_BITS: u32 = 200;

/// Outcome of one `|omega(t)| <= alpha e^(-beta t) / t^2` comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    Holds,
    Fails,
    /// The interval around `e^(-beta t)` straddles the value.
    Undecided,
}

/// Certified enclosure `lo <= e^x <= hi` for rational `x >= 0`, both ends
/// exact rationals.
pub fn exp_bounds(x: &BigRational) -> (BigRational, BigRational) {
    assert!(!x.is_negative(), "exp_bounds expects x >= 0");
    let p = DECAY_PRECISION_BITS + 32;
    // Halve until y = x / 2^s <= 1/2.
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut s = 0u32;
    let mut y = x.clone();
    while y > half {
        y /= BigInt::from(2);
        s += 1;
    }
    // Taylor terms are positive; the tail after term M is at most twice
    // term M+1 because y <= 1/2.
    let mut term = BigRational::one();
    let mut lo = BigRational::one();
    let eps = BigRational::new(BigInt::one(), BigInt::one() << p);
    let mut i = 1u32;
    loop {
        term = term * &y / BigInt::from(i);
        if term < eps {
            break;
        }
        lo += &term;
        i += 1;
    }
    let hi = &lo + &term * BigInt::from(2);
    let mut lo = Dyadic::floor(&lo, p);
    let mut hi = Dyadic::ceil(&hi, p);
    for _ in 0..s {
        lo = lo.square_floor();
        hi = hi.square_ceil();
    }
    (lo.to_rational(), hi.to_rational())
}

/// `mantissa / 2^bits`.
struct Dyadic {
    mantissa: BigInt,
    bits: u32,
}

impl Dyadic {
    fn floor(x: &BigRational, bits: u32) -> Self {
        let scaled = x.numer() << bits;
        Self {
            mantissa: scaled.div_floor(x.denom()),
            bits,
        }
    }

    fn ceil(x: &BigRational, bits: u32) -> Self {
        let scaled = x.numer() << bits;
        Self {
            mantissa: -((-scaled).div_floor(x.denom())),
            bits,
        }
    }

    fn square_floor(&self) -> Self {
        let sq = &self.mantissa * &self.mantissa;
        Self {
            mantissa: sq >> self.bits,
            bits: self.bits,
        }
    }

    fn square_ceil(&self) -> Self {
        let sq = &self.mantissa * &self.mantissa;
        let unit = BigInt::one() << self.bits;
        Self {
            mantissa: -((-sq).div_floor(&unit)),
            bits: self.bits,
        }
    }

    fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), BigInt::one() << self.bits)
    }
}

/// Compares `v <= e^(-x)` using the certified enclosure of `e^x`.
pub fn le_exp_neg(v: &BigRational, x: &BigRational) -> Certainty {
    let (lo, hi) = exp_bounds(x);
    let one = BigRational::one();
    if v * &hi <= one {
        Certainty::Holds
    } else if v * &lo > one {
        Certainty::Fails
    } else {
        Certainty::Undecided
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub sum_zero: bool,
    pub l1_one: bool,
    /// Per-level outcome for every `t >= 1` with non-zero mass.
    pub levels: Vec<(usize, Certainty)>,
    pub holds: bool,
}

/// Checks the `(alpha, beta)`-decay condition: zero sum, unit ℓ1 and
/// `|omega(t)| <= alpha e^(-beta t) / t^2` for `t >= 1`. An undecided
/// comparison counts as a failure.
pub fn decay_check(omega: &SymmetricWeightFunction, alpha: &BigRational, beta: &BigRational) -> DecayReport {
    let sum_zero = omega.sum().is_zero();
    let l1_one = omega.l1().is_one();
    let mut levels = Vec::new();
    for t in 1..=omega.n() {
        let m = omega.level_mass(t);
        if m.is_zero() {
            continue;
        }
        let v = m.abs() * BigInt::from(t * t) / alpha;
        let x = beta * BigInt::from(t);
        let outcome = if x.is_negative() {
            // beta < 0 never arises in practice; compare directly.
            Certainty::Undecided
        } else {
            le_exp_neg(&v, &x)
        };
        levels.push((t, outcome));
    }
    let holds = sum_zero && l1_one && levels.iter().all(|&(_, c)| c == Certainty::Holds);
    DecayReport {
        sum_zero,
        l1_one,
        levels,
        holds,
    }
}

/// Largest `beta` for which the pointwise bound holds with the given
/// `alpha`, i.e. `min_t ln(alpha / (|omega(t)| t^2)) / t` over non-zero
/// levels `t >= 1`. Floating point; `None` when no level constrains it.
pub fn decay_max_beta(omega: &SymmetricWeightFunction, alpha: &BigRational) -> Option<f64> {
    (1..=omega.n())
        .filter(|&t| !omega.level_mass(t).is_zero())
        .map(|t| {
            let ratio = alpha / (omega.level_mass(t).abs() * BigInt::from(t * t));
            ln_rational(&ratio) / t as f64
        })
        .min_by(|a, b| a.total_cmp(b))
}
