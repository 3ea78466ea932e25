use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::PatternGraph;
use crate::instances::{
    gen_collision_sequence, gen_far_h_instance, gen_h_free_instance, CollisionMode, FillerOptions,
};
use crate::lin2::{sample_no, sample_yes, search_hard_matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    FarGraph,
    FreeGraph,
    CollisionFar,
    CollisionFree,
    Lin2Yes,
    Lin2No,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenRequest {
    pub kind: GenKind,
    pub n: usize,
    /// Star size for graphs, collision order for sequences.
    pub k: usize,
    pub eps: f64,
    pub d_out: usize,
    /// Value range for sequences; `0` means `n`.
    pub r: usize,
    /// Row multiplier for systems.
    pub c: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedInstance {
    /// Text serialization of the instance.
    pub text: String,
    /// Farness certificate as JSON, where one exists.
    pub certificate: Option<String>,
}

pub fn generate(req: &GenRequest) -> Result<GeneratedInstance> {
    let pattern = PatternGraph::k_star(req.k);
    let r = if req.r == 0 { req.n } else { req.r };
    Ok(match req.kind {
        GenKind::FarGraph => {
            let (g, cert) = gen_far_h_instance(req.n, req.d_out, &pattern, req.eps, req.seed)?;
            GeneratedInstance {
                text: g.to_text(),
                certificate: Some(serde_json::to_string_pretty(&cert)?),
            }
        }
        GenKind::FreeGraph => {
            let g = gen_h_free_instance(req.n, req.d_out, &pattern, req.seed, FillerOptions::default())?;
            GeneratedInstance {
                text: g.to_text(),
                certificate: None,
            }
        }
        GenKind::CollisionFar | GenKind::CollisionFree => {
            let mode = if req.kind == GenKind::CollisionFar {
                CollisionMode::Far { epsilon: req.eps }
            } else {
                CollisionMode::Free
            };
            let (seq, cert) = gen_collision_sequence(req.n, r, req.k, mode, req.seed)?;
            GeneratedInstance {
                text: seq.to_text(),
                certificate: cert.map(|c| serde_json::to_string_pretty(&c)).transpose()?,
            }
        }
        GenKind::Lin2Yes | GenKind::Lin2No => {
            let hm = search_hard_matrix(req.n, req.c, 1.0 / req.n as f64, req.seed, 100)?;
            let sys = if req.kind == GenKind::Lin2Yes {
                sample_yes(&hm.matrix, req.c, req.seed)?
            } else {
                sample_no(&hm.matrix, req.c, req.seed)?
            };
            GeneratedInstance {
                text: sys.to_text(),
                certificate: None,
            }
        }
    })
}
