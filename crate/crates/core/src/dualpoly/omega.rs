use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::numeric::{binomial, binomial_row, ceil_rational_power, factorial};

/// Parameters fixed by [`build_omega`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaParams {
    pub k: usize,
    pub t_cap: usize,
    /// `2k ceil(n^(1/k))`.
    pub c: u64,
    /// `floor(sqrt(T / c))`.
    pub m: u64,
    /// Levels where the level mass may be non-zero.
    pub support: Vec<usize>,
}

/// A symmetric function on `{-1,1}^n`, stored by level (Hamming weight =
/// number of `-1` entries). `mass[t]` is the total over the level; the
/// value at a single point is `mass[t] / C(n, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricWeightFunction {
    n: usize,
    mass: Vec<BigRational>,
    params: Option<OmegaParams>,
}

impl SymmetricWeightFunction {
    pub fn from_level_masses(mass: Vec<BigRational>) -> Result<Self> {
        if mass.is_empty() {
            return invalid("need at least one level");
        }
        Ok(Self {
            n: mass.len() - 1,
            mass,
            params: None,
        })
    }

    /// Builds the level masses from per-point values.
    pub fn from_point_values(values: Vec<BigRational>) -> Result<Self> {
        if values.is_empty() {
            return invalid("need at least one level");
        }
        let n = values.len() - 1;
        let row = binomial_row(n);
        let mass = values
            .into_iter()
            .zip(row)
            .map(|(v, c)| v * BigRational::from_integer(c))
            .collect();
        Self::from_level_masses(mass)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> Option<&OmegaParams> {
        self.params.as_ref()
    }

    pub fn level_mass(&self, t: usize) -> &BigRational {
        &self.mass[t]
    }

    pub fn level_masses(&self) -> &[BigRational] {
        &self.mass
    }

    pub fn point_value(&self, t: usize) -> BigRational {
        &self.mass[t] / BigRational::from_integer(binomial(self.n, t))
    }

    pub fn l1(&self) -> BigRational {
        self.mass.iter().map(|m| m.abs()).sum()
    }

    pub fn sum(&self) -> BigRational {
        self.mass.iter().sum()
    }

    pub fn positive_mass(&self) -> BigRational {
        self.mass.iter().filter(|m| m.is_positive()).sum()
    }

    pub fn negative_mass(&self) -> BigRational {
        self.mass
            .iter()
            .filter(|m| m.is_negative())
            .map(|m| -m)
            .sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..=self.n).filter(|&t| !self.mass[t].is_zero()).collect()
    }

    pub fn scaled(&self, factor: &BigRational) -> Self {
        Self {
            n: self.n,
            mass: self.mass.iter().map(|m| m * factor).collect(),
            params: self.params.clone(),
        }
    }
}

/// The level-mass function
/// `omega(t) = (-1)^(t+T-m+1) / T! * C(T,t) * prod_{r in [T]_0 \ S} (t - r)`
/// with `c = 2k ceil(n^(1/k))`, `m = floor(sqrt(T/c))` and
/// `S = {1..k} ∪ {c i^2 : 0 <= i <= m}`, zero above `T`, rescaled to unit
/// ℓ1 norm.
pub fn build_omega(n: usize, k: usize, t_cap: usize) -> Result<SymmetricWeightFunction> {
    if k == 0 || k > t_cap || t_cap > n {
        return invalid(format!("need 1 <= k <= T <= n, got k={k} T={t_cap} n={n}"));
    }
    let c = 2 * k as u64 * ceil_rational_power(n as u64, 1, k as u32);
    let m = (t_cap as u64 / c).sqrt();
    let mut support: Vec<usize> = (1..=k).collect();
    support.extend((0..=m).map(|i| (c * i * i) as usize));
    support.sort_unstable();
    support.dedup();

    let t_fact = BigRational::from_integer(factorial(t_cap));
    let mut mass = vec![BigRational::zero(); n + 1];
    for &t in &support {
        let mut prod = BigInt::one();
        for r in (0..=t_cap).filter(|r| support.binary_search(r).is_err()) {
            prod *= BigInt::from(t as i64 - r as i64);
        }
        // (-1)^(t+T-m+1) has the parity of t+T+m+1.
        let negative = (t as u64 + t_cap as u64 + m + 1) % 2 == 1;
        let mut v = BigRational::from_integer(binomial(t_cap, t) * prod) / &t_fact;
        if negative {
            v = -v;
        }
        mass[t] = v;
    }
    let norm: BigRational = mass.iter().map(|v| v.abs()).sum();
    if norm.is_zero() {
        return invalid("construction vanished identically");
    }
    for v in &mut mass {
        *v /= &norm;
    }
    Ok(SymmetricWeightFunction {
        n,
        mass,
        params: Some(OmegaParams {
            k,
            t_cap,
            c,
            m,
            support,
        }),
    })
}

/// Per-point view of a level-mass function: `psi(x) = omega(|x|) / C(n, |x|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Psi {
    omega: SymmetricWeightFunction,
    values: Vec<BigRational>,
}

pub fn build_psi(omega: &SymmetricWeightFunction) -> Psi {
    let values = (0..=omega.n()).map(|t| omega.point_value(t)).collect();
    Psi {
        omega: omega.clone(),
        values,
    }
}

impl Psi {
    pub fn n(&self) -> usize {
        self.omega.n()
    }

    pub fn omega(&self) -> &SymmetricWeightFunction {
        &self.omega
    }

    /// Value at any point of Hamming weight `t`.
    pub fn value(&self, t: usize) -> &BigRational {
        &self.values[t]
    }

    /// Value at a point given as a bit mask (set bit = `-1`).
    pub fn value_at(&self, x: u64) -> &BigRational {
        &self.values[x.count_ones() as usize]
    }

    pub fn l1(&self) -> BigRational {
        self.omega.l1()
    }

    pub fn sum(&self) -> BigRational {
        self.omega.sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn normalized_and_balanced() {
        for (n, k) in [(8, 2), (16, 2), (27, 3), (64, 3)] {
            let w = build_omega(n, k, n).unwrap();
            assert_eq!(w.l1(), BigRational::one());
            assert_eq!(w.sum(), BigRational::zero());
            assert_eq!(w.positive_mass(), rat(1, 2));
        }
    }

    #[test]
    fn support_is_s() {
        let w = build_omega(16, 2, 16).unwrap();
        let p = w.params().unwrap();
        // c = 4 * ceil(4) = 16, m = 1
        assert_eq!((p.c, p.m), (16, 1));
        assert_eq!(p.support, vec![0, 1, 2, 16]);
        assert_eq!(w.support(), vec![0, 1, 2, 16]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_omega(8, 3, 2).is_err());
        assert!(build_omega(8, 2, 9).is_err());
        assert!(build_omega(8, 0, 8).is_err());
    }
}
