use serde::{Deserialize, Serialize};

use crate::graph::QueryLedger;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject,
}

/// Evidence attached to a reject.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Image of every pattern vertex, indexed by pattern vertex.
    Embedding(Vec<usize>),
    /// Positions sharing one value.
    Collision(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TesterVerdict {
    pub verdict: Verdict,
    pub queries_classical: u64,
    pub queries_charged: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub seed: u64,
}

impl TesterVerdict {
    pub(crate) fn new(witness: Option<Witness>, ledger: &QueryLedger, seed: u64) -> Self {
        Self {
            verdict: if witness.is_some() {
                Verdict::Reject
            } else {
                Verdict::Accept
            },
            queries_classical: ledger.classical,
            queries_charged: ledger.charged,
            witness,
            seed,
        }
    }

    pub fn rejected(&self) -> bool {
        self.verdict == Verdict::Reject
    }

    pub fn total_queries(&self) -> u64 {
        self.queries_classical + self.queries_charged
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let v = TesterVerdict::new(None, &QueryLedger::default(), 9);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"verdict":"accept","queries_classical":0,"queries_charged":0,"seed":9}"#
        );
        let r = TesterVerdict::new(
            Some(Witness::Collision(vec![1, 4])),
            &QueryLedger::default(),
            1,
        );
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains(r#""witness":{"collision":[1,4]}"#));
        assert_eq!(serde_json::from_str::<TesterVerdict>(&json).unwrap(), r);
    }
}
