use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{parse_usizes, QueryLedger};

/// A sequence over `[1..r]`, or over `[0..r]` when zeros (dummy symbols)
/// are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerSequence {
    r: usize,
    values: Vec<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    dummies: bool,
}

impl IntegerSequence {
    pub fn new(r: usize, values: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|&&v| v == 0 || v > r) {
            return invalid(format!("value {bad} outside [1..{r}]"));
        }
        Ok(Self {
            r,
            values,
            dummies: false,
        })
    }

    /// Sequence over `[0..r]`; `0` is a dummy symbol that never collides.
    pub fn with_dummies(r: usize, values: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|&&v| v > r) {
            return invalid(format!("value {bad} outside [0..{r}]"));
        }
        Ok(Self {
            r,
            values,
            dummies: true,
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn allows_dummies(&self) -> bool {
        self.dummies
    }

    /// Occurrence count of every non-dummy value that appears.
    pub fn occurrences(&self) -> BTreeMap<usize, usize> {
        let mut occ = BTreeMap::new();
        for &v in self.values.iter().filter(|&&v| v != 0) {
            *occ.entry(v).or_insert(0) += 1;
        }
        occ
    }

    pub fn max_occurrence(&self) -> usize {
        self.occurrences().values().copied().max().unwrap_or(0)
    }

    pub fn has_k_collision(&self, k: usize) -> bool {
        self.max_occurrence() >= k
    }

    /// Values occurring at least `k` times.
    pub fn k_collision_values(&self, k: usize) -> Vec<usize> {
        self.occurrences()
            .into_iter()
            .filter_map(|(v, c)| (c >= k).then_some(v))
            .collect()
    }

    /// Fewest entry changes that make the sequence `k`-collision-free:
    /// every value keeps at most `k - 1` copies. Needs `r (k - 1) >= n` so
    /// the moved entries have somewhere to go.
    pub fn distance_to_k_collision_free(&self, k: usize) -> Result<usize> {
        if k < 2 {
            return invalid("k must be at least 2");
        }
        if self.r * (k - 1) < self.n() {
            return invalid("no k-collision-free sequence of this length exists");
        }
        Ok(self
            .occurrences()
            .values()
            .map(|&c| c.saturating_sub(k - 1))
            .sum())
    }

    /// `n r` header followed by one value per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.r);
        for v in &self.values {
            let _ = writeln!(out, "{v}");
        }
        out
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
        let [n, r] = parse_usizes(header, 1)?[..] else {
            return Err(Error::Parse {
                line: 1,
                msg: "header must be `n r`".into(),
            });
        };
        let mut values = Vec::with_capacity(n);
        for (idx, line) in lines {
            let [v] = parse_usizes(line, idx + 1)?[..] else {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: "expected one integer per line".into(),
                });
            };
            values.push(v);
        }
        if values.len() != n {
            return Err(Error::Parse {
                line: values.len() + 2,
                msg: format!("expected {n} values, found {}", values.len()),
            });
        }
        if values.contains(&0) {
            Self::with_dummies(r, values)
        } else {
            Self::new(r, values)
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let raw: Self = serde_json::from_str(json)?;
        if raw.dummies {
            Self::with_dummies(raw.r, raw.values)
        } else {
            Self::new(raw.r, raw.values)
        }
    }
}

/// Metered access to a sequence.
#[derive(Debug)]
pub struct SequenceView<'a> {
    seq: &'a IntegerSequence,
    ledger: QueryLedger,
}

impl<'a> SequenceView<'a> {
    pub fn new(seq: &'a IntegerSequence) -> Self {
        Self {
            seq,
            ledger: QueryLedger::default(),
        }
    }

    /// Reads position `i` (zero-based).
    pub fn query(&mut self, i: usize) -> Result<usize> {
        match self.seq.values.get(i) {
            Some(&v) => {
                self.ledger.record_classical();
                Ok(v)
            }
            None => invalid(format!("position {i} out of range (n={})", self.seq.n())),
        }
    }

    pub fn sequence(&self) -> &'a IntegerSequence {
        self.seq
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn ledger_mut(&mut self) -> &mut QueryLedger {
        &mut self.ledger
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_checks() {
        assert!(IntegerSequence::new(3, vec![1, 4]).is_err());
        assert!(IntegerSequence::new(3, vec![0]).is_err());
        assert!(IntegerSequence::with_dummies(3, vec![0, 3]).is_ok());
    }

    #[test]
    fn collisions_ignore_dummies() {
        let s = IntegerSequence::with_dummies(2, vec![0, 0, 0, 1, 1]).unwrap();
        assert_eq!(s.max_occurrence(), 2);
        assert!(!s.has_k_collision(3));
        assert_eq!(s.k_collision_values(2), vec![1]);
    }

    #[test]
    fn text_and_json_round_trip() {
        let s = IntegerSequence::new(5, vec![5, 1, 1]).unwrap();
        assert_eq!(s.to_text(), "3 5\n5\n1\n1\n");
        assert_eq!(IntegerSequence::from_text(&s.to_text()).unwrap(), s);
        assert_eq!(
            IntegerSequence::from_json(&s.to_json().unwrap()).unwrap(),
            s
        );
        assert!(IntegerSequence::from_text("2 5\n1\n").is_err());
        assert!(IntegerSequence::from_text("1 5\n1 2\n").is_err());
    }

    #[test]
    fn view_counts_reads() {
        let s = IntegerSequence::new(2, vec![2, 1]).unwrap();
        let mut view = SequenceView::new(&s);
        assert_eq!(view.query(1).unwrap(), 1);
        assert!(view.query(2).is_err());
        assert_eq!(view.ledger().classical, 1);
    }

    #[test]
    fn distance_counts_excess_copies() {
        let s = IntegerSequence::new(6, vec![1, 1, 1, 2, 2, 3]).unwrap();
        assert_eq!(s.distance_to_k_collision_free(2).unwrap(), 3);
        assert_eq!(s.distance_to_k_collision_free(3).unwrap(), 1);
    }
}
