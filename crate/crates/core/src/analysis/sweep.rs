//! Worst-case error over convex combinations of dephasing channels.
//!
//! The error is convex in the mixing weights, so on any polytope of channels
//! its maximum sits at a vertex. [`convex_sweep`] checks this on a grid along
//! every edge plus the barycenter, each point evaluated by brute force.

use alloc::vec;
use alloc::vec::Vec;

use super::oracle::{error_brute_force, BruteForceBudget};
use super::{AnalysisError, ChannelId};
use crate::encoding::CstarEncoding;
use crate::quantum::{minimal_channel, mix, pair_channel, PhaseDampingChannel};
use crate::tol;

/// Vertex set of the polytope.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelFamily {
    /// All `ℰ_n`, `1 ≤ n ≤ m`.
    Minimal,
    /// All `ℰ_K` with `|K| = 2`.
    Pairwise,
}

impl ChannelFamily {
    fn vertices(self, m: usize, l: usize) -> Result<Vec<(ChannelId, PhaseDampingChannel)>, AnalysisError> {
        let mut out = Vec::new();
        match self {
            ChannelFamily::Minimal => {
                for n in 1..=m {
                    out.push((ChannelId::Minimal { n }, minimal_channel(m, l, n)?));
                }
            }
            ChannelFamily::Pairwise => {
                for i in 1..=m {
                    for j in i + 1..=m {
                        out.push((ChannelId::Pair { k: [i, j] }, pair_channel(m, l, [i, j])?));
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    /// Convex weights over the vertices.
    pub weights: Vec<f64>,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub vertices: Vec<ChannelId>,
    pub vertex_errors: Vec<f64>,
    /// Interior edge points and the barycenter.
    pub points: Vec<SweepPoint>,
    pub vertex_max: f64,
    pub grid_max: f64,
    /// `grid_max ≤ vertex_max + 1e-8`.
    pub attained_at_vertex: bool,
}

impl SweepReport {
    /// Spread of the vertex errors.
    pub fn vertex_spread(&self) -> f64 {
        let min = self.vertex_errors.iter().copied().fold(f64::INFINITY, f64::min);
        self.vertex_max - min
    }
}

/// Sweeps `grid_points` evenly spaced weights (endpoints included) along
/// every edge between two vertices.
pub fn convex_sweep(
    enc: &CstarEncoding,
    family: ChannelFamily,
    grid_points: usize,
    budget: &BruteForceBudget,
) -> Result<SweepReport, AnalysisError> {
    if grid_points < 2 {
        return Err(AnalysisError::Parameters("sweep grid needs at least two points per edge"));
    }
    let vertices = family.vertices(enc.m(), enc.l())?;
    if vertices.is_empty() {
        return Err(AnalysisError::Parameters("channel family has no vertices"));
    }
    let vertex_errors = vertices
        .iter()
        .map(|(_, ch)| error_brute_force(enc, ch, budget))
        .collect::<Result<Vec<_>, _>>()?;
    let vertex_max = vertex_errors.iter().copied().fold(0.0, f64::max);

    let nv = vertices.len();
    let channels: Vec<PhaseDampingChannel> = vertices.iter().map(|v| v.1.clone()).collect();
    let mut points = Vec::new();
    let mut eval = |weights: Vec<f64>| -> Result<(), AnalysisError> {
        let ch = mix(&channels, &weights)?;
        let error = error_brute_force(enc, &ch, budget)?;
        points.push(SweepPoint { weights, error });
        Ok(())
    };
    for a in 0..nv {
        for b in a + 1..nv {
            for s in 1..grid_points - 1 {
                let t = s as f64 / (grid_points - 1) as f64;
                let mut w = vec![0.0; nv];
                w[a] = 1.0 - t;
                w[b] = t;
                eval(w)?;
            }
        }
    }
    if nv > 2 {
        eval(vec![1.0 / nv as f64; nv])?;
    }

    let grid_max = points.iter().map(|p| p.error).fold(0.0, f64::max);
    Ok(SweepReport {
        vertices: vertices.into_iter().map(|v| v.0).collect(),
        vertex_errors,
        points,
        vertex_max,
        grid_max,
        attained_at_vertex: grid_max <= vertex_max + tol::VERTEX,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::pairwise_error;
    use crate::constructions::{harmonic_rank_one, rotation_family};
    use crate::encoding::encoding_from_family;

    #[test]
    fn uniform_minimal_sweep() {
        let enc = encoding_from_family(&harmonic_rank_one(2, 3).unwrap(), 1).unwrap();
        let r = convex_sweep(&enc, ChannelFamily::Minimal, 5, &BruteForceBudget::default()).unwrap();
        assert_eq!(r.vertices.len(), 3);
        assert_eq!(r.points.len(), 3 * 3 + 1);
        assert!(r.vertex_spread() < 1e-9);
        assert!(r.attained_at_vertex, "{} > {}", r.grid_max, r.vertex_max);
    }

    #[test]
    fn rotation_pairwise_sweep() {
        let enc = encoding_from_family(&rotation_family(2, 3).unwrap(), 2).unwrap();
        let r = convex_sweep(&enc, ChannelFamily::Pairwise, 5, &BruteForceBudget::default()).unwrap();
        assert_eq!(r.vertices.len(), 3);
        assert!(r.attained_at_vertex);
    }

    #[test]
    fn single_vertex_degenerates() {
        let enc = encoding_from_family(&harmonic_rank_one(2, 2).unwrap(), 1).unwrap();
        let budget = BruteForceBudget::default();
        let r = convex_sweep(&enc, ChannelFamily::Pairwise, 5, &budget).unwrap();
        assert!(r.points.is_empty());
        let single = pairwise_error(&enc, [1, 2], Some(&budget)).unwrap();
        assert_eq!(Some(r.vertex_max), single.brute_force);
        assert!(r.vertex_max < 1e-12);
    }
}
