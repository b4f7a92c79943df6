//! Vertex representation: a bounded polytope as the convex hull of a
//! nonempty list of points.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum VPolyError {
    #[error("a vertex representation needs at least one vertex")]
    Empty,
    #[error("vertex {vertex} has length {got}, expected dimension {expected}")]
    VertexLength { vertex: usize, expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

impl VPolytope {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self, VPolyError> {
        let dim = vertices.first().ok_or(VPolyError::Empty)?.len();
        for (i, v) in vertices.iter().enumerate() {
            if v.len() != dim {
                return Err(VPolyError::VertexLength {
                    vertex: i + 1,
                    expected: dim,
                    got: v.len(),
                });
            }
        }
        Ok(VPolytope { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_ragged_input() {
        assert!(matches!(VPolytope::new(vec![]), Err(VPolyError::Empty)));
        assert!(matches!(
            VPolytope::new(vec![vec![0.0, 1.0], vec![2.0]]),
            Err(VPolyError::VertexLength { vertex: 2, expected: 2, got: 1 })
        ));
    }

    #[test]
    fn single_vertex_is_fine() {
        let p = VPolytope::new(vec![vec![1.0, 2.0, 3.0]]).unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.num_vertices(), 1);
    }
}
