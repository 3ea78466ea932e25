//! Exact dual-polynomial routines against direct enumeration over the cube.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use qptest::dualpoly::{
    block_l1, build_omega, build_psi, correlation_with_cap, decay_check, decay_max_beta,
    false_mass, phd_measure, PointMassDual,
};
use qptest::numeric::rat;

fn fact(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * i)
}

fn choose(n: u64, k: u64) -> BigInt {
    fact(n) / (fact(k) * fact(n - k))
}

/// Unnormalized level masses straight from the product formula, with the
/// support recomputed by brute force.
fn omega_oracle(n: usize, k: usize, t_cap: usize) -> Vec<BigRational> {
    let root = (1..).find(|r: &u64| r.pow(k as u32) >= n as u64).unwrap();
    let c = 2 * k as u64 * root;
    let m = (0..).take_while(|i: &u64| c * i * i <= t_cap as u64).last().unwrap();
    let in_s = |r: u64| (1..=k as u64).contains(&r) || (0..=m).any(|i| c * i * i == r);
    let mut out = vec![BigRational::zero(); n + 1];
    for t in 0..=t_cap as u64 {
        if !in_s(t) {
            continue;
        }
        let mut v = BigRational::from_integer(choose(t_cap as u64, t)) / fact(t_cap as u64);
        for r in 0..=t_cap as u64 {
            if !in_s(r) {
                v *= BigInt::from(t as i64 - r as i64);
            }
        }
        if (t + t_cap as u64 - m + 1) % 2 == 1 {
            v = -v;
        }
        out[t as usize] = v;
    }
    let norm: BigRational = out.iter().map(|v| v.abs()).sum();
    out.iter().map(|v| v / &norm).collect()
}

/// Point values on `{-1,1}^n`, indexed by mask.
fn cube_values(masses: &[BigRational]) -> Vec<BigRational> {
    let n = masses.len() - 1;
    (0u64..1 << n)
        .map(|x| {
            let t = x.count_ones() as u64;
            &masses[t as usize] / choose(n as u64, t)
        })
        .collect()
}

/// Smallest `|S|` whose parity correlates with `f`; `bits + 1` if none.
fn min_correlated_degree(f: &[BigRational], bits: usize, max_deg: usize) -> usize {
    let mut best = bits + 1;
    for s in 0u64..1 << bits {
        let d = s.count_ones() as usize;
        if d >= best || d > max_deg {
            continue;
        }
        let corr: BigRational = f
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(x, v)| {
                if (x as u64 & s).count_ones() % 2 == 1 {
                    -v.clone()
                } else {
                    v.clone()
                }
            })
            .sum();
        if !corr.is_zero() {
            best = d;
        }
    }
    best
}

/// `phi ⋆ psi` at every point, from the definition.
fn composed(psi: &[BigRational], n: usize, r: usize, phi_minus: &BigRational) -> Vec<BigRational> {
    let phi_plus = -phi_minus.clone();
    let mask = (1u64 << n) - 1;
    (0u64..1 << (n * r))
        .map(|x| {
            let blocks: Vec<&BigRational> = (0..r).map(|i| &psi[((x >> (i * n)) & mask) as usize]).collect();
            if blocks.iter().any(|v| v.is_zero()) {
                return BigRational::zero();
            }
            let neg = blocks[0].is_negative();
            if blocks.iter().any(|v| v.is_negative() != neg) {
                return BigRational::zero();
            }
            let prod = blocks.iter().fold(BigRational::one(), |a, v| a * v.abs());
            let phi = if neg { phi_minus } else { &phi_plus };
            phi * prod * BigInt::from(1u64 << r)
        })
        .collect()
}

#[test]
fn omega_n8_frozen_values() {
    let w = build_omega(8, 2, 8).unwrap();
    let expect = [rat(-1, 4), rat(1, 2), rat(-1, 4)];
    assert_eq!(&w.level_masses()[..3], &expect);
    assert!(w.level_masses()[3..].iter().all(Zero::is_zero));
    assert_eq!(w.level_masses(), &omega_oracle(8, 2, 8)[..]);
}

#[test]
fn omega_matches_factorial_evaluator() {
    for k in 1..=3 {
        for n in k.max(2)..=40 {
            for t_cap in [k, n / 2, n].into_iter().filter(|&t| t >= k && t <= n) {
                let w = build_omega(n, k, t_cap).unwrap();
                assert_eq!(w.level_masses(), &omega_oracle(n, k, t_cap)[..], "n={n} k={k} T={t_cap}");
            }
        }
    }
}

#[test]
fn psi_cube_enumeration_n8() {
    let w = build_omega(8, 2, 8).unwrap();
    let psi = build_psi(&w);
    let cube = cube_values(&omega_oracle(8, 2, 8));
    assert_eq!(cube.len(), 256);
    for (x, v) in cube.iter().enumerate() {
        assert_eq!(psi.value_at(x as u64), v);
    }
    let sum: BigRational = cube.iter().sum();
    let l1: BigRational = cube.iter().map(|v| v.abs()).sum();
    assert!(sum.is_zero());
    assert!(l1.is_one());
}

#[test]
fn phd_matches_exhaustive_parities() {
    // (n, k, frozen phd)
    let cases = [(4, 1, 1), (6, 2, 2), (8, 2, 2), (9, 3, 3), (10, 2, 2), (12, 2, 2), (12, 3, 3)];
    for (n, k, frozen) in cases {
        let w = build_omega(n, k, n).unwrap();
        let cube = cube_values(&omega_oracle(n, k, n));
        let brute = min_correlated_degree(&cube, n, n);
        assert_eq!(phd_measure(&w), brute, "n={n} k={k}");
        assert_eq!(brute, frozen, "n={n} k={k}");
        assert_eq!(frozen, w.support().len() - 1);
    }
}

#[test]
fn composition_keeps_inner_pure_degree() {
    for (n, r) in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3)] {
        let masses = omega_oracle(n, 2, n);
        let psi = cube_values(&masses);
        let inner = min_correlated_degree(&psi, n, n);
        let f = composed(&psi, n, r, &rat(-1, 2));
        let outer = min_correlated_degree(&f, n * r, inner);
        assert!(outer >= inner, "N={n} R={r}: {outer} < {inner}");
    }
    // Full value for the smallest case.
    let psi = cube_values(&omega_oracle(3, 2, 3));
    let f = composed(&psi, 3, 2, &rat(-1, 2));
    assert_eq!(min_correlated_degree(&f, 6, 6), 2);
}

#[test]
fn composed_l1_matches_enumeration() {
    for (n, r) in [(3, 2), (3, 3), (4, 2), (2, 5)] {
        let psi_lib = build_psi(&build_omega(n, 2, n).unwrap());
        let phi = PointMassDual::standard(r).unwrap();
        let f = composed(&cube_values(&omega_oracle(n, 2, n)), n, r, &rat(-1, 2));
        let l1: BigRational = f.iter().map(|v| v.abs()).sum();
        assert_eq!(block_l1(&phi, &psi_lib).unwrap(), l1, "N={n} R={r}");
        assert!(f.iter().sum::<BigRational>().is_zero());
    }
    // N=3, R=2: only levels 0..=2 carry mass, so each sign class has mass 1/2.
    let psi = build_psi(&build_omega(3, 2, 3).unwrap());
    assert!(block_l1(&PointMassDual::standard(2).unwrap(), &psi).unwrap().is_one());
}

fn correlation_oracle(n: usize, r: usize, k: usize, gamma: &BigRational, cap: Option<usize>) -> BigRational {
    let psi = cube_values(&omega_oracle(n, k, n));
    let f = composed(&psi, n, r, &rat(-1, 2));
    let mask = (1u64 << n) - 1;
    let mut total = BigRational::zero();
    for (x, v) in f.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let x = x as u64;
        let j = (0..r)
            .filter(|i| ((x >> (i * n)) & mask).count_ones() as usize >= k)
            .count();
        let in_cap = cap.is_none_or(|c| x.count_ones() as usize <= c);
        let gap_ok = j == 0 || BigRational::from_integer(BigInt::from(j)) >= gamma * BigInt::from(r);
        if in_cap && gap_ok {
            total += if j == 0 { v.clone() } else { -v.clone() };
        } else {
            total -= v.abs();
        }
    }
    total
}

#[test]
fn correlation_matches_enumeration() {
    let cases = [
        (3, 2, rat(1, 8)),
        (3, 6, rat(1, 5)),
        (2, 8, rat(1, 5)),
        (2, 8, rat(1, 100)),
        (4, 4, rat(1, 5)),
    ];
    for (n, r, gamma) in cases {
        let psi = build_psi(&build_omega(n, 2, n).unwrap());
        let phi = PointMassDual::standard(r).unwrap();
        for cap in [Some(n), Some(n * r / 2), None] {
            let lib = correlation_with_cap(&phi, &psi, 2, &gamma, cap).unwrap();
            let brute = correlation_oracle(n, r, 2, &gamma, cap);
            assert_eq!(lib.exact, brute, "N={n} R={r} gamma={gamma} cap={cap:?}");
        }
    }
    // Frozen: N=4, R=4, gamma=1/5, with and without the cap N.
    let psi = build_psi(&build_omega(4, 2, 4).unwrap());
    let phi = PointMassDual::standard(4).unwrap();
    let capped = correlation_with_cap(&phi, &psi, 2, &rat(1, 5), Some(4)).unwrap();
    let free = correlation_with_cap(&phi, &psi, 2, &rat(1, 5), None).unwrap();
    assert_eq!((capped.exact, free.exact), (rat(5, 8), rat(15, 16)));
}

#[test]
fn false_mass_matches_enumeration_n8() {
    for k in 1..=3 {
        let masses = omega_oracle(8, k, 8);
        let cube = cube_values(&masses);
        let (mut plus, mut minus) = (BigRational::zero(), BigRational::zero());
        for (x, v) in cube.iter().enumerate() {
            let thr = (x as u64).count_ones() as usize >= k;
            if v.is_positive() && thr {
                plus += v;
            }
            if v.is_negative() && !thr {
                minus -= v;
            }
        }
        let psi = build_psi(&build_omega(8, k, 8).unwrap());
        assert_eq!(false_mass(&psi, k), (plus, minus), "k={k}");
    }
}

#[test]
fn decay_agrees_with_float_evaluation_n16() {
    for k in 2..=3 {
        let w = build_omega(16, k, 16).unwrap();
        let alpha_int = (2 * k).pow(k as u32) as f64;
        let alpha = BigRational::from_integer(BigInt::from(alpha_int as i64));
        let levels: Vec<(f64, f64)> = (1..=16)
            .filter(|&t| !w.level_mass(t).is_zero())
            .map(|t| (t as f64, qptest::numeric::to_f64(&w.level_mass(t).abs())))
            .collect();
        let float_max = levels
            .iter()
            .map(|&(t, m)| (alpha_int / (m * t * t)).ln() / t)
            .fold(f64::INFINITY, f64::min);
        let lib_max = decay_max_beta(&w, &alpha).unwrap();
        assert!((float_max - lib_max).abs() < 1e-9, "k={k}");
        for scale in [0.0, 0.25, 0.5, 0.9, 0.99, 1.01, 1.1, 2.0] {
            let beta = float_max * scale;
            let float_holds = levels.iter().all(|&(t, m)| m * t * t <= alpha_int * (-beta * t).exp());
            let beta_q = BigRational::from_float(beta).unwrap();
            assert_eq!(decay_check(&w, &alpha, &beta_q).holds, float_holds, "k={k} scale={scale}");
        }
    }
}
