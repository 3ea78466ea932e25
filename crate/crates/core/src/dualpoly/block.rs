//! Dual block composition of a two-point outer dual with a symmetric inner
//! dual, plus the class table that lets every aggregate over
//! `{-1,1}^(NR)` be computed from per-level masses.
//!
//! Points are bit masks: bit `i*N + j` set means coordinate `j` of block
//! `i` is `-1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{pow, One, Signed, Zero};
use serde::Serialize;

use super::{Psi, SymmetricWeightFunction};
use crate::error::{invalid, Result};

/// Largest `N * R` accepted by the enumerating routines.
pub const MAX_ENUM_BITS: usize = 20;

/// A dual on `{-1,1}^R` supported on `-1^R` and `1^R`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMassDual {
    r: usize,
    at_minus: BigRational,
    at_plus: BigRational,
}

impl PointMassDual {
    /// `phi(-1^R) = -1/2`, `phi(1^R) = 1/2`.
    pub fn standard(r: usize) -> Result<Self> {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        Self::new(r, -half.clone(), half)
    }

    pub fn new(r: usize, at_minus: BigRational, at_plus: BigRational) -> Result<Self> {
        if r == 0 || r > 63 {
            return invalid(format!("R must be in 1..=63, got {r}"));
        }
        if !(&at_minus + &at_plus).is_zero() {
            return invalid("two-point dual must sum to zero");
        }
        if !(at_minus.abs() + at_plus.abs()).is_one() {
            return invalid("two-point dual must have unit l1 norm");
        }
        Ok(Self { r, at_minus, at_plus })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Value at the all-`z` point, `z = -1` when `negative`.
    pub fn at(&self, negative: bool) -> &BigRational {
        if negative {
            &self.at_minus
        } else {
            &self.at_plus
        }
    }

    /// Value at an arbitrary point of `{-1,1}^R` (bit set = `-1`).
    pub fn value_at(&self, z: u64) -> BigRational {
        let full = (1u64 << self.r) - 1;
        if z == full {
            self.at_minus.clone()
        } else if z == 0 {
            self.at_plus.clone()
        } else {
            BigRational::zero()
        }
    }
}

/// Sign of `psi` at weight `t`: `Some(true)` negative, `Some(false)`
/// positive, `None` zero.
fn level_sign(psi: &Psi, t: usize) -> Option<bool> {
    let v = psi.value(t);
    if v.is_zero() {
        None
    } else {
        Some(v.is_negative())
    }
}

/// `2^R phi(sgn psi(x_1), ..., sgn psi(x_R)) prod |psi(x_i)|`.
pub fn block_compose_eval(phi: &PointMassDual, psi: &Psi, x: u64) -> BigRational {
    let n = psi.n();
    let r = phi.r();
    assert!(n * r <= 64, "point does not fit in 64 bits");
    let block_mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut sign = None;
    let mut prod = BigRational::one();
    for i in 0..r {
        let t = ((x >> (i * n)) & block_mask).count_ones() as usize;
        let Some(s) = level_sign(psi, t) else {
            return BigRational::zero();
        };
        match sign {
            None => sign = Some(s),
            Some(prev) if prev != s => return BigRational::zero(),
            _ => {}
        }
        prod *= psi.value(t).abs();
    }
    let sign = sign.expect("R >= 1");
    phi.at(sign) * prod * BigRational::from_integer(BigInt::one() << r)
}

/// Every value of `phi ⋆ psi`, indexed by point mask.
pub fn block_compose_table(phi: &PointMassDual, psi: &Psi) -> Result<Vec<BigRational>> {
    let bits = psi.n() * phi.r();
    if bits > MAX_ENUM_BITS {
        return invalid(format!("N*R = {bits} exceeds {MAX_ENUM_BITS}"));
    }
    Ok((0..1u64 << bits)
        .map(|x| block_compose_eval(phi, psi, x))
        .collect())
}

/// Per-level classification of `psi` against `THR^k` (`-1` iff weight
/// `>= k`) and the aggregated masses `a[sign][thr]`, index `1` meaning
/// `-1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockClassTable {
    pub k: usize,
    /// `(level, psi negative, thr negative)` for every level with non-zero
    /// mass.
    pub levels: Vec<(usize, bool, bool)>,
    #[serde(skip)]
    pub mass: [[BigRational; 2]; 2],
}

impl BlockClassTable {
    pub fn new(omega: &SymmetricWeightFunction, k: usize) -> Self {
        let mut mass: [[BigRational; 2]; 2] = Default::default();
        let mut levels = Vec::new();
        for t in 0..=omega.n() {
            let m = omega.level_mass(t);
            if m.is_zero() {
                continue;
            }
            let neg = m.is_negative();
            let thr = t >= k;
            mass[neg as usize][thr as usize] += m.abs();
            levels.push((t, neg, thr));
        }
        Self { k, levels, mass }
    }

    /// `lambda`-probability that a block has sign `z` and `THR` value
    /// `thr`.
    pub fn joint(&self, z_negative: bool, thr_negative: bool) -> &BigRational {
        &self.mass[z_negative as usize][thr_negative as usize]
    }

    pub fn sign_mass(&self, z_negative: bool) -> BigRational {
        &self.mass[z_negative as usize][0] + &self.mass[z_negative as usize][1]
    }

    /// `mu^z(-1)`: conditional probability that `THR` disagrees with the
    /// block sign `z`.
    pub fn mu_flip(&self, z_negative: bool) -> BigRational {
        let disagree = self.joint(z_negative, !z_negative);
        let total = self.sign_mass(z_negative);
        if total.is_zero() {
            BigRational::zero()
        } else {
            disagree / total
        }
    }

    /// `(mass_plus, mass_minus)`: positive mass on `THR = -1` levels and
    /// negative mass on `THR = +1` levels.
    pub fn false_mass(&self) -> (BigRational, BigRational) {
        (self.joint(false, true).clone(), self.joint(true, false).clone())
    }
}

/// `(mass_plus, mass_minus)` of `psi` against `THR^k`.
pub fn false_mass(psi: &Psi, k: usize) -> (BigRational, BigRational) {
    BlockClassTable::new(psi.omega(), k).false_mass()
}

/// `‖phi ⋆ psi‖_1` from the class table. Only the two constant sign
/// patterns carry mass, and on pattern `z` the sum of `prod |psi(x_i)|`
/// factorizes into `(sum_{sgn psi = z} |psi|)^R`, so the total is
/// `sum_z |phi(z)| (2 a_z)^R` with `a_z` the sign-`z` mass of `psi`.
pub fn block_l1(phi: &PointMassDual, psi: &Psi) -> Result<BigRational> {
    check_duals(phi, psi)?;
    let table = BlockClassTable::new(psi.omega(), 0);
    let two = BigRational::from_integer(BigInt::from(2));
    let r = phi.r();
    Ok([false, true]
        .iter()
        .map(|&z| phi.at(z).abs() * pow(&two * table.sign_mass(z), r))
        .sum())
}

fn check_duals(phi: &PointMassDual, psi: &Psi) -> Result<()> {
    if !psi.l1().is_one() {
        return invalid("psi must have unit l1 norm");
    }
    if !psi.sum().is_zero() {
        return invalid("psi must sum to zero");
    }
    if !(phi.at(true).abs() + phi.at(false).abs()).is_one() {
        return invalid("phi must have unit l1 norm");
    }
    Ok(())
}

/// Both sides of the two block identities.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockIdentity {
    /// `sum_{x in S} |phi ⋆ psi|` by enumeration.
    pub item1_lhs: BigRational,
    /// `sum_z |phi(z)| Pr_{lambda^R}[x in S | signs = z]`.
    pub item1_rhs: BigRational,
    /// `sum_x (phi ⋆ psi)(x) g(h(x_1), ..., h(x_R))` by enumeration.
    pub item2_lhs: BigRational,
    /// `sum_z phi(z) E_{y ~ mu^z}[g(y_1 z_1, ..., y_R z_R)]`.
    pub item2_rhs: BigRational,
}

impl BlockIdentity {
    pub fn holds(&self) -> bool {
        self.item1_lhs == self.item1_rhs && self.item2_lhs == self.item2_rhs
    }
}

/// Evaluates both identities. `in_s` selects points of `{-1,1}^(NR)`;
/// `h` maps a block mask to `true` for `-1`; `g` does the same on
/// `{-1,1}^R`.
pub fn block_identity_check(
    phi: &PointMassDual,
    psi: &Psi,
    in_s: impl Fn(u64) -> bool,
    g: impl Fn(u64) -> bool,
    h: impl Fn(u64) -> bool,
) -> Result<BlockIdentity> {
    let n = psi.n();
    let r = phi.r();
    if n * r > MAX_ENUM_BITS {
        return invalid(format!("N*R = {} exceeds {MAX_ENUM_BITS}", n * r));
    }
    let block_mask = (1u64 << n) - 1;
    let pm = |b: bool| if b { -BigRational::one() } else { BigRational::one() };

    let mut item1_lhs = BigRational::zero();
    let mut item2_lhs = BigRational::zero();
    for x in 0..1u64 << (n * r) {
        let v = block_compose_eval(phi, psi, x);
        if v.is_zero() {
            continue;
        }
        if in_s(x) {
            item1_lhs += v.abs();
        }
        let hx = (0..r).fold(0u64, |acc, i| {
            acc | (u64::from(h((x >> (i * n)) & block_mask)) << i)
        });
        item2_lhs += v * pm(g(hx));
    }

    // Per-block points split by the sign of psi, with lambda = |psi|.
    let mut by_sign: [Vec<(u64, BigRational)>; 2] = Default::default();
    for u in 0..1u64 << n {
        let t = u.count_ones() as usize;
        if let Some(neg) = level_sign(psi, t) {
            by_sign[neg as usize].push((u, psi.value(t).abs()));
        }
    }
    let mut item1_rhs = BigRational::zero();
    let mut item2_rhs = BigRational::zero();
    for z in [false, true] {
        let points = &by_sign[z as usize];
        let sign_mass: BigRational = points.iter().map(|(_, l)| l.clone()).sum();
        if sign_mass.is_zero() || phi.at(z).is_zero() {
            continue;
        }
        // Pr[x in S | signs = z] over the product of conditioned blocks.
        let mut hit = BigRational::zero();
        let mut idx = vec![0usize; r];
        'outer: loop {
            let mut x = 0u64;
            let mut w = BigRational::one();
            for (i, &j) in idx.iter().enumerate() {
                x |= points[j].0 << (i * n);
                w *= &points[j].1;
            }
            if in_s(x) {
                hit += w;
            }
            for slot in idx.iter_mut() {
                *slot += 1;
                if *slot < points.len() {
                    continue 'outer;
                }
                *slot = 0;
            }
            break;
        }
        let cond = hit / pow(sign_mass.clone(), r);
        item1_rhs += phi.at(z).abs() * cond;

        // mu^z(-1) = 2 * |psi| mass where h disagrees with z.
        let flip: BigRational = points
            .iter()
            .filter(|(u, _)| h(*u) != z)
            .map(|(_, l)| l.clone())
            .sum::<BigRational>()
            / &sign_mass;
        let keep = BigRational::one() - &flip;
        let mut expect = BigRational::zero();
        for y in 0..1u64 << r {
            let flips = y.count_ones() as usize;
            let p = pow(flip.clone(), flips)
                * pow(keep.clone(), r - flips);
            // y_i = -1 flips the block value away from z.
            let arg = if z { !y & ((1u64 << r) - 1) } else { y };
            expect += p * pm(g(arg));
        }
        item2_rhs += phi.at(z) * expect;
    }
    Ok(BlockIdentity {
        item1_lhs,
        item1_rhs,
        item2_lhs,
        item2_rhs,
    })
}

/// `OR` on `{-1,1}^R`: `-1` iff some coordinate is `-1`.
pub fn or_fn(y: u64) -> bool {
    y != 0
}

/// `THR^k`: `-1` iff at least `k` coordinates are `-1`.
pub fn thr_fn(k: usize) -> impl Fn(u64) -> bool {
    move |u: u64| u.count_ones() as usize >= k
}
