use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{pow, One, Signed, Zero};
use serde::Serialize;

use super::{BlockClassTable, PointMassDual, Psi};
use crate::error::{invalid, Result};
use crate::numeric::to_f64;

/// Where a point of `{-1,1}^(NR)` falls relative to the promise domain of
/// the gapped composed function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    InD,
    OutD,
    OverCap,
}

/// `j >= gamma R` with exact rational `gamma`.
fn meets_gap(j: usize, r: usize, gamma: &BigRational) -> bool {
    BigRational::from_integer(BigInt::from(j)) >= gamma * BigInt::from(r)
}

/// Classifies a point by its per-block Hamming weights. Total weight above
/// `cap` is over the cap; otherwise the point is in the domain iff the
/// number of blocks with weight `>= k` is `0` or at least `gamma R`.
pub fn domain_membership(block_weights: &[usize], k: usize, gamma: &BigRational, cap: usize) -> Domain {
    if block_weights.iter().sum::<usize>() > cap {
        return Domain::OverCap;
    }
    let j = block_weights.iter().filter(|&&w| w >= k).count();
    if j == 0 || meets_gap(j, block_weights.len(), gamma) {
        Domain::InD
    } else {
        Domain::OutD
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    #[serde(serialize_with = "super::report::ser_rat")]
    pub gamma: BigRational,
    pub cap: Option<usize>,
    /// `sum_{x in D} (phi ⋆ psi) f - sum_{x not in D} |phi ⋆ psi|`.
    #[serde(serialize_with = "super::report::ser_rat")]
    pub exact: BigRational,
    /// `|phi ⋆ psi|` mass on in-cap points violating the gap.
    #[serde(serialize_with = "super::report::ser_rat")]
    pub gap_mass: BigRational,
    /// `|phi ⋆ psi|` mass above the Hamming cap.
    #[serde(serialize_with = "super::report::ser_rat")]
    pub over_cap_mass: BigRational,
    pub exact_f64: f64,
    /// `1 - R/(16N) - e^(-R/4^(k-1)) - e^(-2R(1/4^(k-1) - gamma)^2)`.
    pub bound: f64,
    /// Same with `R/(48N)` in place of `R/(16N)`.
    pub bound_48: f64,
}

/// Exact correlation of `phi ⋆ psi` with `GapOR ∘ THR^k` on `{-1,1}^(NR)`
/// restricted to Hamming weight at most `N`.
pub fn correlation(phi: &PointMassDual, psi: &Psi, k: usize, gamma: &BigRational) -> Result<CorrelationReport> {
    correlation_with_cap(phi, psi, k, gamma, Some(psi.n()))
}

/// As [`correlation`], with an explicit Hamming cap (`None` for no cap).
///
/// Only the constant sign patterns `z` carry mass, each block independently
/// drawn from `lambda = |psi|` conditioned on sign `z`. A dynamic program
/// over (blocks with `THR = -1`, total weight) gives the joint law; then
/// `j = 0` scores `phi(z) f(+1)`, `j >= gamma R` scores `phi(z) f(-1)` and
/// everything else, including over-cap mass, is charged `|phi(z)|`.
pub fn correlation_with_cap(
    phi: &PointMassDual,
    psi: &Psi,
    k: usize,
    gamma: &BigRational,
    cap: Option<usize>,
) -> Result<CorrelationReport> {
    let limit = BigRational::new(BigInt::one(), BigInt::one() << (2 * (k.max(1) - 1)));
    if !gamma.is_positive() || *gamma >= limit {
        return invalid(format!("gamma must lie in (0, 1/4^(k-1)), got {gamma}"));
    }
    let n = psi.n();
    let r = phi.r();
    let table = BlockClassTable::new(psi.omega(), k);

    // Integer level weights over a common denominator.
    let denom = table
        .levels
        .iter()
        .fold(BigInt::one(), |acc, &(t, _, _)| acc.lcm(psi.omega().level_mass(t).denom()));

    let mut exact = BigRational::zero();
    let mut gap_mass = BigRational::zero();
    let mut over_cap_mass = BigRational::zero();
    for z in [false, true] {
        let weight_of_phi = phi.at(z);
        if weight_of_phi.is_zero() {
            continue;
        }
        let levels: Vec<(usize, bool, BigInt)> = table
            .levels
            .iter()
            .filter(|&&(_, neg, _)| neg == z)
            .map(|&(t, _, thr)| {
                let m = psi.omega().level_mass(t).abs() * &denom;
                (t, thr, m.to_integer())
            })
            .collect();
        let block_total: BigInt = levels.iter().map(|(_, _, w)| w.clone()).sum();
        if block_total.is_zero() {
            continue;
        }
        let mut states: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        states.insert((0, 0), BigInt::one());
        for _ in 0..r {
            let mut next: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
            for ((j, w), count) in &states {
                for (t, thr, lw) in &levels {
                    let nw = match cap {
                        Some(c) => {
                            let nw = w + t;
                            if nw > c {
                                continue;
                            }
                            nw
                        }
                        None => 0,
                    };
                    *next.entry((j + usize::from(*thr), nw)).or_default() += count * lw;
                }
            }
            states = next;
        }
        let total = pow(block_total, r);
        let mut by_j = vec![BigInt::zero(); r + 1];
        for ((j, _), c) in states {
            by_j[j] += c;
        }
        let in_cap: BigInt = by_j.iter().sum();
        let p = |c: &BigInt| BigRational::new(c.clone(), total.clone());
        let f_plus = BigRational::one();
        let f_minus = -BigRational::one();
        let mut score = weight_of_phi * &f_plus * p(&by_j[0]);
        let mut penalty_gap = BigRational::zero();
        for (j, c) in by_j.iter().enumerate().skip(1) {
            if meets_gap(j, r, gamma) {
                score += weight_of_phi * &f_minus * p(c);
            } else {
                penalty_gap += p(c);
            }
        }
        let over = p(&(&total - &in_cap));
        let abs_phi = weight_of_phi.abs();
        exact += score - &abs_phi * (&penalty_gap + &over);
        gap_mass += &abs_phi * penalty_gap;
        over_cap_mass += abs_phi * over;
    }
    let exact_f64 = to_f64(&exact);
    Ok(CorrelationReport {
        n,
        r,
        k,
        gamma: gamma.clone(),
        cap,
        exact,
        gap_mass,
        over_cap_mass,
        exact_f64,
        bound: bound_formula(n, r, k, to_f64(gamma)),
        bound_48: bound_formula_with(n, r, k, to_f64(gamma), 48.0),
    })
}

/// `1 - R/(16N) - e^(-R/4^(k-1)) - e^(-2R(1/4^(k-1) - gamma)^2)`.
pub fn bound_formula(n: usize, r: usize, k: usize, gamma: f64) -> f64 {
    bound_formula_with(n, r, k, gamma, 16.0)
}

fn bound_formula_with(n: usize, r: usize, k: usize, gamma: f64, div: f64) -> f64 {
    let (n, r) = (n as f64, r as f64);
    let q = 4f64.powi(k as i32 - 1);
    1.0 - r / (div * n) - (-r / q).exp() - (-2.0 * r * (1.0 / q - gamma).powi(2)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualpoly::{build_omega, build_psi, SymmetricWeightFunction};
    use crate::numeric::rat;

    #[test]
    fn membership_examples() {
        let g = rat(1, 5);
        assert_eq!(domain_membership(&[0, 0, 0, 0, 0, 0, 0, 0, 0, 0], 2, &g, 10), Domain::InD);
        let mut one = vec![0; 10];
        one[3] = 2;
        assert_eq!(domain_membership(&one, 2, &g, 10), Domain::OutD);
        let mut two = vec![0; 10];
        two[0] = 2;
        two[7] = 2;
        assert_eq!(domain_membership(&two, 2, &g, 10), Domain::InD);
        assert_eq!(domain_membership(&two, 2, &g, 3), Domain::OverCap);
    }

    #[test]
    fn perfect_predictor_scores_one() {
        let mut mass = vec![BigRational::zero(); 5];
        mass[0] = rat(1, 2);
        mass[2] = rat(-1, 2);
        let psi = build_psi(&SymmetricWeightFunction::from_level_masses(mass).unwrap());
        let phi = PointMassDual::standard(2).unwrap();
        let c = correlation(&phi, &psi, 2, &rat(1, 8)).unwrap();
        assert_eq!(c.exact, BigRational::one());
    }

    #[test]
    fn gamma_range_enforced() {
        let psi = build_psi(&build_omega(8, 2, 8).unwrap());
        let phi = PointMassDual::standard(2).unwrap();
        assert!(correlation(&phi, &psi, 2, &rat(1, 4)).is_err());
        assert!(correlation(&phi, &psi, 2, &rat(0, 1)).is_err());
    }

    #[test]
    fn uncapped_matches_binomial_form() {
        let psi = build_psi(&build_omega(40, 2, 40).unwrap());
        let phi = PointMassDual::standard(3).unwrap();
        let c = correlation_with_cap(&phi, &psi, 2, &rat(1, 8), None).unwrap();
        let (mp, mm) = crate::dualpoly::false_mass(&psi, 2);
        let pp = mp * BigInt::from(2);
        let pm = mm * BigInt::from(2);
        // gamma R = 3/8: every j >= 1 meets the gap.
        let plus = pow(BigRational::one() - &pp, 3);
        let minus_j0 = pow(pm, 3);
        let expect = (plus.clone() - (BigRational::one() - plus)
            + (BigRational::one() - &minus_j0)
            - minus_j0)
            / BigInt::from(2);
        assert_eq!(c.exact, expect);
    }
}
