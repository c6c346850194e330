use std::collections::HashMap;

use exact_core::{int, invariant_factors, rank_fp, rank_q, Int, IntMat};
use fan::{Fan, IncidenceComplex};

use crate::{CohomologyError, Field, SignPattern};

/// Full subcomplex of the incidence complex on the rays of `pattern`.
pub fn neg_complex(x: &Fan, pattern: &SignPattern) -> Result<IncidenceComplex, CohomologyError> {
    let full = IncidenceComplex::from_fan(x).map_err(|_| not_simplicial(x))?;
    Ok(full.induced(&pattern.neg))
}

pub(crate) fn not_simplicial(x: &Fan) -> CohomologyError {
    CohomologyError::NotSimplicial(x.max_cones().iter().position(|c| x.cone_dim(c) != c.len()).unwrap_or(0))
}

/// Invariant factors of the augmented boundary maps of a complex. Ranks over
/// any field follow from these, so one factorisation serves every field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryFactors {
    /// Number of faces with `k` vertices, `k = 0..=top`.
    sizes: Vec<usize>,
    /// `factors[k]`: the map from faces with `k + 1` vertices to faces with `k`.
    factors: Vec<Vec<Int>>,
}

impl BoundaryFactors {
    pub fn of(k: &IncidenceComplex) -> BoundaryFactors {
        let by_size = k.faces_by_size();
        let sizes = by_size.iter().map(Vec::len).collect();
        let mut factors = Vec::new();
        for s in 0..by_size.len().saturating_sub(1) {
            let index: HashMap<&Vec<usize>, usize> = by_size[s].iter().enumerate().map(|(i, f)| (f, i)).collect();
            let mut m = IntMat::zeros(by_size[s].len(), by_size[s + 1].len());
            for (col, face) in by_size[s + 1].iter().enumerate() {
                for j in 0..face.len() {
                    let mut sub = face.clone();
                    sub.remove(j);
                    m.set(index[&sub], col, int(if j % 2 == 0 { 1 } else { -1 }));
                }
            }
            factors.push(invariant_factors(&m));
        }
        BoundaryFactors { sizes, factors }
    }

    fn rank(&self, k: usize, field: Field) -> usize {
        match self.factors.get(k) {
            None => 0,
            Some(f) => match field {
                Field::Q => rank_q(f),
                Field::Fp(p) => rank_fp(f, p),
            },
        }
    }

    /// `out[i] = dim H̃_{i−1}` for degrees `−1` up to the dimension of the complex.
    pub fn dims(&self, field: Field) -> Vec<usize> {
        (0..self.sizes.len())
            .map(|k| {
                let into = if k == 0 { 0 } else { self.rank(k - 1, field) };
                self.sizes[k] - into - self.rank(k, field)
            })
            .collect()
    }
}

/// Reduced homology dimensions over `field`, degrees `−1..=dim K`.
pub fn reduced_homology(k: &IncidenceComplex, field: Field) -> Vec<usize> {
    BoundaryFactors::of(k).dims(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fan::zoo;

    fn complex(facets: &[&[usize]]) -> IncidenceComplex {
        let mut vertices: Vec<usize> = facets.iter().flat_map(|f| f.iter().copied()).collect();
        vertices.sort_unstable();
        vertices.dedup();
        IncidenceComplex { vertices, facets: facets.iter().map(|f| f.to_vec()).collect() }
    }

    #[test]
    fn small_complexes() {
        let circle = complex(&[&[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!(reduced_homology(&circle, Field::Q), vec![0, 0, 1]);
        assert_eq!(reduced_homology(&complex(&[]), Field::Q), vec![1]);
        assert_eq!(reduced_homology(&complex(&[&[0, 1, 2]]), Field::Q), vec![0, 0, 0, 0]);
        assert_eq!(reduced_homology(&complex(&[&[0], &[1]]), Field::Fp(2)), vec![0, 1]);
    }

    #[test]
    fn projective_plane_has_torsion() {
        // six-vertex triangulation of RP²: H̃_1 = Z/2
        let rp2 = complex(&[
            &[0, 1, 2],
            &[0, 2, 3],
            &[0, 3, 4],
            &[0, 4, 5],
            &[0, 1, 5],
            &[1, 2, 4],
            &[2, 3, 5],
            &[1, 3, 4],
            &[1, 3, 5],
            &[2, 4, 5],
        ]);
        assert_eq!(reduced_homology(&rp2, Field::Q), vec![0, 0, 0, 0]);
        assert_eq!(reduced_homology(&rp2, Field::Fp(2)), vec![0, 0, 1, 1]);
        assert_eq!(reduced_homology(&rp2, Field::Fp(3)), vec![0, 0, 0, 0]);
    }

    #[test]
    fn negative_subcomplexes_of_fans() {
        let p2 = zoo::projective_space(2);
        let all = neg_complex(&p2, &SignPattern { neg: vec![0, 1, 2] }).unwrap();
        assert_eq!(reduced_homology(&all, Field::Q), vec![0, 0, 1]);
        let none = neg_complex(&p2, &SignPattern { neg: vec![] }).unwrap();
        assert_eq!(reduced_homology(&none, Field::Q), vec![1]);
        // F1: (1,0) and (0,1) share no cone
        let f1 = zoo::blown_up_plane();
        let a = f1.ray_index(&exact_core::ivec(&[1, 0])).unwrap();
        let b = f1.ray_index(&exact_core::ivec(&[0, 1])).unwrap();
        let two = neg_complex(&f1, &SignPattern { neg: vec![a, b] }).unwrap();
        assert_eq!(reduced_homology(&two, Field::Q), vec![0, 1]);
        assert!(neg_complex(&zoo::cube_faces(), &SignPattern { neg: vec![] }).is_err());
    }
}
