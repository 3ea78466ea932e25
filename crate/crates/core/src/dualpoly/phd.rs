use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::SymmetricWeightFunction;
use crate::numeric::binomial;

/// Krawtchouk polynomial `K_s(w; n) = sum_j (-1)^j C(w,j) C(n-w, s-j)`:
/// the sum of all degree-`s` parities at a point of weight `w`.
pub fn krawtchouk(s: usize, w: usize, n: usize) -> BigInt {
    assert!(s <= n && w <= n, "krawtchouk needs s, w <= n");
    (0..=s.min(w))
        .map(|j| {
            let term = binomial(w, j) * binomial(n - w, s - j);
            if j % 2 == 1 {
                -term
            } else {
                term
            }
        })
        .sum()
}

/// Correlation of `f` with the sum of all degree-`s` parities:
/// `sum_t mass(t) K_s(t; n)`. A symmetric `f` is orthogonal to every
/// degree-`s` parity iff this vanishes.
pub fn parity_correlation(f: &SymmetricWeightFunction, s: usize) -> BigRational {
    let n = f.n();
    f.level_masses()
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(t, m)| m * BigRational::from_integer(krawtchouk(s, t, n)))
        .sum()
}

/// Whether `f` is orthogonal to every polynomial of degree below `delta`.
pub fn phd_check(f: &SymmetricWeightFunction, delta: usize) -> bool {
    (0..delta.min(f.n() + 1))
        .into_par_iter()
        .all(|s| parity_correlation(f, s).is_zero())
}

/// Largest `delta` with `phd_check(f, delta)`; `n + 1` for the zero
/// function.
pub fn phd_measure(f: &SymmetricWeightFunction) -> usize {
    (0..=f.n())
        .find(|&s| !parity_correlation(f, s).is_zero())
        .unwrap_or(f.n() + 1)
}
