use std::collections::BTreeSet;

use crate::{Fan, FanError};

/// Abstract simplicial complex on ray indices whose facets are the maximal
/// cones of a simplicial fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceComplex {
    pub vertices: Vec<usize>,
    pub facets: Vec<Vec<usize>>,
}

impl IncidenceComplex {
    pub fn from_fan(f: &Fan) -> Result<IncidenceComplex, FanError> {
        if let Some(k) = f.max_cones().iter().position(|c| f.cone_dim(c) != c.len()) {
            return Err(FanError::NotSimplicial(k));
        }
        Ok(IncidenceComplex {
            vertices: (0..f.rays().len()).collect(),
            facets: f.max_cones().iter().filter(|c| !c.is_empty()).cloned().collect(),
        })
    }

    /// All faces including the empty one, sorted by size then lexicographically.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut all: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
        all.insert((0, Vec::new()));
        for facet in &self.facets {
            for mask in 1u64..(1u64 << facet.len()) {
                let face: Vec<usize> =
                    facet.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
                all.insert((face.len(), face));
            }
        }
        all.into_iter().map(|(_, f)| f).collect()
    }

    /// `faces_by_size()[k]` lists the faces with `k` vertices.
    pub fn faces_by_size(&self) -> Vec<Vec<Vec<usize>>> {
        let faces = self.faces();
        let top = faces.last().map_or(0, |f| f.len());
        let mut out = vec![Vec::new(); top + 1];
        for f in faces {
            out[f.len()].push(f);
        }
        out
    }

    /// The full subcomplex on `vertices`.
    pub fn induced(&self, vertices: &[usize]) -> IncidenceComplex {
        let keep: BTreeSet<usize> = vertices.iter().copied().collect();
        let mut cut: Vec<Vec<usize>> = self
            .facets
            .iter()
            .map(|f| f.iter().copied().filter(|v| keep.contains(v)).collect::<Vec<_>>())
            .filter(|f| !f.is_empty())
            .collect();
        cut.sort();
        cut.dedup();
        let maximal: Vec<Vec<usize>> = cut
            .iter()
            .filter(|f| !cut.iter().any(|g| g.len() > f.len() && f.iter().all(|v| g.contains(v))))
            .cloned()
            .collect();
        IncidenceComplex { vertices: keep.into_iter().collect(), facets: maximal }
    }
}

pub fn incidence_complex(f: &Fan) -> Result<IncidenceComplex, FanError> {
    IncidenceComplex::from_fan(f)
}
