//! Direct limits of finite sequences of linear maps.

use super::matrix::Matrix;
use super::scalar::Field;
use super::subspace::Subspace;
use crate::error::{Error, Result};

/// `V_0 -> V_1 -> ... -> V_N`, with `maps[j]` of shape `dims[j+1] x dims[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapSequence {
    pub field: Field,
    pub dims: Vec<usize>,
    pub maps: Vec<Matrix>,
}

impl MapSequence {
    pub fn new(field: Field, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<MapSequence> {
        if dims.is_empty() || maps.len() + 1 != dims.len() {
            return Err(Error::Format("a sequence needs one map between consecutive terms".into()));
        }
        for (j, m) in maps.iter().enumerate() {
            if m.shape() != (dims[j + 1], dims[j]) {
                return Err(Error::Format(format!("map {j} has shape {:?}", m.shape())));
            }
        }
        Ok(MapSequence { field, dims, maps })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colimit {
    pub limit_dim: usize,
    pub stab_index: usize,
    /// `projections[j]` maps `V_j` onto the limit, for every `j` up to the end
    /// of the stable run.
    pub projections: Vec<Matrix>,
}

/// Direct limit of a sequence whose tail has settled.
///
/// With `rho(s)` the rank of the composite `V_s -> V_N`, the sequence
/// `rho` is nondecreasing. The last run of at least two equal values marks the
/// stable range: its start is the stabilization index and its value the limit
/// dimension. Isomorphic tails give a run reaching `N`; eventually nilpotent
/// tails give a run of zeros followed by a short unsettled stretch.
pub fn colimit_sequence(s: &MapSequence) -> Result<Colimit> {
    let last = s.dims.len() - 1;
    let mut composites = vec![Matrix::identity(s.field, s.dims[last])];
    for j in (0..last).rev() {
        let next = composites.last().unwrap().mul(&s.maps[j]);
        composites.push(next);
    }
    composites.reverse();
    let ranks: Vec<usize> = composites.iter().map(Matrix::rank).collect();

    let mut end = last;
    loop {
        let mut start = end;
        while start > 0 && ranks[start - 1] == ranks[end] {
            start -= 1;
        }
        if start < end {
            let image = Subspace::span(&composites[end]);
            let rows = image.pivot_rows().to_vec();
            let projections = composites[..=end].iter().map(|c| c.select_rows(&rows)).collect();
            return Ok(Colimit {
                limit_dim: ranks[end],
                stab_index: start,
                projections,
            });
        }
        if start == 0 {
            return Err(Error::NoStabilization);
        }
        end = start - 1;
    }
}
