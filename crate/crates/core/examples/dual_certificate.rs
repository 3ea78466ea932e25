//! Exact checks on the symmetric dual weight and its block composition.

use num_bigint::BigInt;
use num_rational::BigRational;
use qptest::dualpoly::{
    block_l1, build_omega, build_psi, correlation, decay_check, decay_max_beta, false_mass,
    phd_check, phd_measure, PointMassDual,
};
use qptest::numeric::{rat, to_f64};

fn main() -> qptest::Result<()> {
    let (n, k) = (64, 2);
    let omega = build_omega(n, k, n)?;
    let psi = build_psi(&omega);
    println!("support {:?}", omega.support());
    println!("l1 {} sum {} pure degree {}", psi.l1(), psi.sum(), phd_measure(&omega));
    println!("orthogonal to degree <= 2 parities: {}", phd_check(&omega, 2));

    let alpha = BigRational::from_integer(BigInt::from((2 * k).pow(k as u32)));
    if let Some(beta) = decay_max_beta(&omega, &alpha) {
        let below = rat((beta * 1e6) as i64 - 1, 1_000_000);
        println!("largest beta ~ {beta:.6}, certified below: {}", decay_check(&omega, &alpha, &below).holds);
    }

    let r = 4;
    let big_n = 80 * r;
    let psi = build_psi(&build_omega(big_n, k, big_n)?);
    let phi = PointMassDual::standard(r)?;
    let (plus, minus) = false_mass(&psi, k);
    println!("false mass: + {:.3e}, - {:.4}", to_f64(&plus), to_f64(&minus));
    println!("composed l1: {}", block_l1(&phi, &psi)?);
    let c = correlation(&phi, &psi, k, &rat(1, 640))?;
    println!("correlation {:.6}, bound {:.6}", c.exact_f64, c.bound);
    Ok(())
}
