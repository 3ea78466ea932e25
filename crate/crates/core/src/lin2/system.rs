use std::fmt::Write as _;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::GF2Matrix;
use crate::error::{invalid, Error, Result};

/// Largest variable count accepted by [`min_unsat_fraction`].
pub const MIN_UNSAT_MAX_N: usize = 24;

/// A system of equations `x_i + x_j + x_l = y` over GF(2), variables
/// indexed from 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lin2System {
    n: usize,
    c: usize,
    rows: Vec<[usize; 3]>,
    y: Vec<bool>,
    witness: Option<Vec<bool>>,
}

impl Lin2System {
    pub fn new(n: usize, c: usize, rows: Vec<[usize; 3]>, y: Vec<bool>) -> Result<Self> {
        if rows.len() != y.len() {
            return invalid("one right-hand side per row");
        }
        for r in &rows {
            if r.iter().any(|&v| v >= n) {
                return invalid(format!("row {r:?} indexes past n = {n}"));
            }
            if r[0] == r[1] || r[1] == r[2] || r[0] == r[2] {
                return invalid(format!("row {r:?} repeats a variable"));
            }
        }
        Ok(Self {
            n,
            c,
            rows,
            y,
            witness: None,
        })
    }

    /// The system `A x = y` for a three-sparse `A`.
    pub fn from_matrix(a: &GF2Matrix, c: usize, y: Vec<bool>) -> Result<Self> {
        let rows = (0..a.rows())
            .map(|i| {
                let s = a.support(i);
                if s.len() != 3 {
                    return invalid(format!("row {i} has {} ones, expected 3", s.len()));
                }
                Ok([s[0], s[1], s[2]])
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(a.cols(), c, rows, y)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn rows(&self) -> &[[usize; 3]] {
        &self.rows
    }

    pub fn rhs(&self) -> &[bool] {
        &self.y
    }

    /// Satisfying assignment planted by [`sample_yes`].
    pub fn witness(&self) -> Option<&[bool]> {
        self.witness.as_deref()
    }

    pub fn unsatisfied(&self, x: &[bool]) -> usize {
        self.rows
            .iter()
            .zip(&self.y)
            .filter(|(r, &b)| (x[r[0]] ^ x[r[1]] ^ x[r[2]]) != b)
            .count()
    }

    pub fn is_satisfied_by(&self, x: &[bool]) -> bool {
        self.unsatisfied(x) == 0
    }

    /// Header `n c`, then one `i j l rhs` line per equation.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.c);
        for (r, &b) in self.rows.iter().zip(&self.y) {
            writeln!(s, "{} {} {} {}", r[0], r[1], r[2], u8::from(b)).expect("string write");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let head = parse_fields(1, header, 2)?;
        let (n, c) = (head[0], head[1]);
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for (i, line) in lines {
            let f = parse_fields(i + 1, line, 4)?;
            if f[3] > 1 {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("right-hand side must be 0 or 1, got {}", f[3]),
                });
            }
            rows.push([f[0], f[1], f[2]]);
            y.push(f[3] == 1);
        }
        Self::new(n, c, rows, y)
    }
}

fn parse_fields(line: usize, text: &str, want: usize) -> Result<Vec<usize>> {
    let f = text
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|e| Error::Parse {
                line,
                msg: format!("{t:?}: {e}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if f.len() != want {
        return Err(Error::Parse {
            line,
            msg: format!("expected {want} fields, got {}", f.len()),
        });
    }
    Ok(f)
}

fn random_bits(len: usize, rng: &mut ChaCha8Rng) -> Vec<bool> {
    (0..len).map(|_| rng.random()).collect()
}

/// `y = A z` for a uniform `z`; `z` is kept as the witness.
pub fn sample_yes(a: &GF2Matrix, c: usize, seed: u64) -> Result<Lin2System> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = random_bits(a.cols(), &mut rng);
    let mut sys = Lin2System::from_matrix(a, c, a.mul_vec(&z))?;
    sys.witness = Some(z);
    Ok(sys)
}

/// Uniform right-hand side.
pub fn sample_no(a: &GF2Matrix, c: usize, seed: u64) -> Result<Lin2System> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y = random_bits(a.rows(), &mut rng);
    Lin2System::from_matrix(a, c, y)
}

/// Minimum fraction of unsatisfied equations over all `2^n` assignments.
pub fn min_unsat_fraction(sys: &Lin2System) -> Result<Ratio<usize>> {
    let n = sys.n();
    if n > MIN_UNSAT_MAX_N {
        return invalid(format!(
            "n = {n} exceeds {MIN_UNSAT_MAX_N}; estimate by sampling assignments instead"
        ));
    }
    if sys.rows().is_empty() {
        return Ok(Ratio::from_integer(0));
    }
    let masks: Vec<u32> = sys
        .rows()
        .iter()
        .map(|r| (1 << r[0]) | (1 << r[1]) | (1 << r[2]))
        .collect();
    let rhs: Vec<u32> = sys.rhs().iter().map(|&b| u32::from(b)).collect();
    let best = (0u32..1 << n)
        .into_par_iter()
        .map(|x| {
            masks
                .iter()
                .zip(&rhs)
                .filter(|(&m, &b)| (m & x).count_ones() & 1 != b)
                .count()
        })
        .min()
        .expect("non-empty range");
    Ok(Ratio::new(best, sys.rows().len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lin2::search_hard_matrix;

    #[test]
    fn yes_instances_are_satisfiable() {
        let h = search_hard_matrix(10, 2, 0.3, 1, 100).unwrap();
        for seed in 0..5 {
            let s = sample_yes(&h.matrix, 2, seed).unwrap();
            assert!(s.is_satisfied_by(s.witness().unwrap()));
            assert_eq!(min_unsat_fraction(&s).unwrap(), Ratio::from_integer(0));
        }
    }

    #[test]
    fn contradiction_forces_half() {
        let s = Lin2System::new(3, 1, vec![[0, 1, 2], [0, 1, 2]], vec![false, true]).unwrap();
        assert_eq!(min_unsat_fraction(&s).unwrap(), Ratio::new(1, 2));
    }

    #[test]
    fn text_roundtrip_and_errors() {
        let h = search_hard_matrix(8, 1, 0.25, 2, 100).unwrap();
        let s = sample_no(&h.matrix, 1, 9).unwrap();
        let back = Lin2System::from_text(&s.to_text()).unwrap();
        assert_eq!(back, s);
        assert!(Lin2System::from_text("4 1\n0 0 1 1\n").is_err());
        assert!(Lin2System::from_text("4 1\n0 1 2 3\n").is_err());
        assert!(Lin2System::from_text("4 1\n0 1\n").is_err());
    }

    #[test]
    fn large_n_rejected() {
        let s = Lin2System::new(25, 1, vec![], vec![]).unwrap();
        assert!(min_unsat_fraction(&s).is_err());
    }
}
