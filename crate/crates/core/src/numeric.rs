//! Small exact-arithmetic helpers shared across modules.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Smallest integer `z >= 1` with `z^q >= n^p`.
pub fn ceil_rational_power(n: u64, p: u32, q: u32) -> u64 {
    let target = BigUint::from(n).pow(p);
    let holds = |z: u64| BigUint::from(z).pow(q) >= target;
    let mut z = (n as f64).powf(p as f64 / q as f64).ceil().max(1.0) as u64;
    while z > 1 && holds(z - 1) {
        z -= 1;
    }
    while !holds(z) {
        z += 1;
    }
    z
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Row `C(n, 0..=n)`.
pub fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n + 1);
    let mut acc = BigInt::one();
    row.push(acc.clone());
    for i in 0..n {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        row.push(acc.clone());
    }
    row
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Natural log of a positive rational, accurate to f64 precision even when
/// numerator and denominator overflow f64.
pub fn ln_rational(x: &BigRational) -> f64 {
    assert!(x.is_positive(), "log of a non-positive rational");
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

fn ln_bigint(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("fits").ln();
    }
    let shift = bits - 60;
    let top = (v.abs() >> shift).to_f64().expect("60 bits fit");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    // Keep the top 64 bits of each side, then rescale by the exponent gap.
    let (num, den) = (x.numer().abs(), x.denom().clone());
    let sn = num.bits().saturating_sub(64);
    let sd = den.bits().saturating_sub(64);
    let top_n = (num >> sn).to_f64().expect("64 bits fit");
    let top_d = (den >> sd).to_f64().expect("64 bits fit");
    let exp = sn as i64 - sd as i64;
    let clamped = exp.clamp(-2000, 2000) as i32;
    sign * (top_n / top_d) * 2f64.powi(clamped / 2) * 2f64.powi(clamped - clamped / 2)
}
