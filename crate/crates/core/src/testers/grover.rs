use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::graph::QueryLedger;

/// Idealized amplitude-amplification search. Stands in for a quantum
/// search routine: it sees the marked set directly and charges a fixed
/// query cost per call.
#[derive(Debug, Clone, PartialEq)]
pub struct GroverModel {
    c_g: Ratio<u64>,
    p_succ: f64,
    seed: u64,
}

impl Default for GroverModel {
    fn default() -> Self {
        Self {
            c_g: Ratio::from_integer(3),
            p_succ: 0.9,
            seed: 0,
        }
    }
}

impl GroverModel {
    pub fn new(c_g: Ratio<u64>, p_succ: f64, seed: u64) -> Result<Self> {
        if c_g < Ratio::from_integer(1) {
            return invalid("c_g must be at least 1");
        }
        if !(p_succ > 0.0 && p_succ <= 1.0) {
            return invalid("p_succ must lie in (0, 1]");
        }
        Ok(Self { c_g, p_succ, seed })
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn c_g(&self) -> Ratio<u64> {
        self.c_g
    }

    pub fn p_succ(&self) -> f64 {
        self.p_succ
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// `ceil(c_g * cost * sqrt(n / t0))`, computed exactly.
    pub fn charge(&self, n: usize, t0: usize, cost: u64) -> Result<u64> {
        if t0 == 0 || t0 > n {
            return invalid(format!("promise t0={t0} outside [1, {n}]"));
        }
        Ok(ceil_scaled_sqrt(
            *self.c_g.numer() as u128 * cost as u128,
            *self.c_g.denom() as u128,
            n as u128,
            t0 as u128,
        ))
    }
}

/// Smallest `z` with `z >= (a / b) * sqrt(n / t)`, i.e. `z^2 b^2 t >= a^2 n`.
fn ceil_scaled_sqrt(a: u128, b: u128, n: u128, t: u128) -> u64 {
    let rhs = a * a * n;
    let unit = b * b * t;
    let holds = |z: u128| z * z * unit >= rhs;
    let mut z = ((a as f64 / b as f64) * (n as f64 / t as f64).sqrt()).ceil() as u128;
    while z > 0 && holds(z - 1) {
        z -= 1;
    }
    while !holds(z) {
        z += 1;
    }
    z as u64
}

/// Searches `domain` for an element satisfying `predicate`.
///
/// The predicate is evaluated on every element outside the ledger; the
/// ledger is charged the modeled cost instead, whatever the outcome.
pub fn grover_sample<T: Clone, R: Rng>(
    model: &GroverModel,
    rng: &mut R,
    ledger: &mut QueryLedger,
    domain: &[T],
    t0: usize,
    cost: u64,
    mut predicate: impl FnMut(&T) -> bool,
) -> Result<Option<T>> {
    let marked: Vec<T> = domain.iter().filter(|x| predicate(x)).cloned().collect();
    grover_sample_marked(model, rng, ledger, domain.len(), t0, cost, &marked)
}

/// [`grover_sample`] with the marked elements already known.
///
/// Returns a uniform marked element with probability `p_succ` when at
/// least `t0` are marked, `p_succ * |marked| / t0` below that.
pub fn grover_sample_marked<T: Clone, R: Rng>(
    model: &GroverModel,
    rng: &mut R,
    ledger: &mut QueryLedger,
    domain_size: usize,
    t0: usize,
    cost: u64,
    marked: &[T],
) -> Result<Option<T>> {
    if marked.len() > domain_size {
        return invalid("more marked elements than the domain holds");
    }
    ledger.charge(model.charge(domain_size, t0, cost)?);
    if marked.is_empty() {
        return Ok(None);
    }
    let p = if marked.len() >= t0 {
        model.p_succ
    } else {
        model.p_succ * marked.len() as f64 / t0 as f64
    };
    if rng.random::<f64>() < p {
        Ok(Some(marked[rng.random_range(0..marked.len())].clone()))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charge_formula() {
        let m = GroverModel::default();
        assert_eq!(m.charge(16, 4, 1).unwrap(), 6);
        assert_eq!(m.charge(10, 10, 1).unwrap(), 3);
        // 3 * sqrt(2) = 4.24...
        assert_eq!(m.charge(2, 1, 1).unwrap(), 5);
        let half = GroverModel::new(Ratio::new(5, 2), 0.9, 0).unwrap();
        assert_eq!(half.charge(16, 4, 1).unwrap(), 5);
        assert!(m.charge(4, 0, 1).is_err());
        assert!(m.charge(4, 5, 1).is_err());
    }

    #[test]
    fn no_marked_never_found() {
        let m = GroverModel::default();
        let mut rng = m.rng();
        let mut ledger = QueryLedger::default();
        let domain: Vec<u32> = (0..10).collect();
        for _ in 0..50 {
            let got = grover_sample(&m, &mut rng, &mut ledger, &domain, 2, 1, |_| false).unwrap();
            assert!(got.is_none());
        }
        assert_eq!(ledger.charged, 50 * 7);
    }

    #[test]
    fn rejects_bad_models() {
        assert!(GroverModel::new(Ratio::new(1, 2), 0.9, 0).is_err());
        assert!(GroverModel::new(Ratio::from_integer(3), 0.0, 0).is_err());
        assert!(GroverModel::new(Ratio::from_integer(3), 1.5, 0).is_err());
    }
}
