use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numeric::ceil_rational_power;

/// Sample targets `t_1 >= ... >= t_{k-1}` (and `t_k = 1`) that balance
/// the cost of every stage of the quantum tester.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuerySchedule {
    pub k: usize,
    pub n: usize,
    /// `t[0] = t_1`, ..., `t[k-2] = t_{k-1}`.
    pub t: Vec<u64>,
}

impl QuerySchedule {
    /// `t_i` for `1 <= i <= k`.
    pub fn t(&self, i: usize) -> u64 {
        assert!(
            (1..=self.k).contains(&i),
            "stage {i} outside 1..={}",
            self.k
        );
        if i == self.k {
            1
        } else {
            self.t[i - 1]
        }
    }

    /// The stage costs `t_1` and `t_{i+1} sqrt(n / t_i)` for `i < k`.
    pub fn stage_costs(&self) -> Vec<f64> {
        let n = self.n as f64;
        let mut out = vec![self.t(1) as f64];
        for i in 1..self.k {
            out.push(self.t(i + 1) as f64 * (n / self.t(i) as f64).sqrt());
        }
        out
    }
}

/// `t_i = ceil(n^((2^(k-i) - 1) / (2^k - 1)))`.
pub fn make_schedule(k: usize, n: usize) -> Result<QuerySchedule> {
    if k < 2 {
        return invalid("schedule needs k >= 2");
    }
    if n < 2 {
        return invalid("schedule needs n >= 2");
    }
    if k > 12 {
        return invalid("k above 12 is not supported");
    }
    let denom = (1u32 << k) - 1;
    let t = (1..k)
        .map(|i| ceil_rational_power(n as u64, (1u32 << (k - i)) - 1, denom))
        .collect();
    Ok(QuerySchedule { k, n, t })
}
