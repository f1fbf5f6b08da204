use crate::linalg::CsrMatrix;
use crate::mesh::SubspaceSplit;
use crate::scalar::Real;

/// Principal blocks of `A` for the interior dofs `0..n0` and the boundary
/// dofs `n0..n`.
#[derive(Clone, Debug)]
pub struct BlockPartition<T> {
    pub n0: usize,
    pub n1: usize,
    pub a0: CsrMatrix<T>,
    pub a1: CsrMatrix<T>,
}

impl<T: Real> BlockPartition<T> {
    pub fn n(&self) -> usize {
        self.n0 + self.n1
    }
}

pub fn extract_blocks<T: Real>(a: &CsrMatrix<T>, split: &SubspaceSplit) -> BlockPartition<T> {
    let n0 = split.n_interior;
    let n = a.nrows();
    BlockPartition {
        n0,
        n1: n - n0,
        a0: a.principal_submatrix(0..n0),
        a1: a.principal_submatrix(n0..n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn split_with(n0: usize, n1: usize) -> SubspaceSplit {
        SubspaceSplit {
            vertex_to_dof: HashMap::new(),
            dof_vertex: Vec::new(),
            n_interior: n0,
            n_boundary: n1,
            cell_dofs: Vec::new(),
        }
    }

    #[test]
    fn arrow_matrix_blocks_match_slicing() {
        let d = vec![
            vec![4.0, 0.0, 0.0, 1.0],
            vec![0.0, 5.0, 0.0, 2.0],
            vec![0.0, 0.0, 6.0, 3.0],
            vec![1.0, 2.0, 3.0, 7.0],
        ];
        let a = CsrMatrix::from_dense(&d);
        let p = extract_blocks(&a, &split_with(2, 2));
        assert_eq!(p.a0.to_dense(), vec![vec![4.0, 0.0], vec![0.0, 5.0]]);
        assert_eq!(p.a1.to_dense(), vec![vec![6.0, 3.0], vec![3.0, 7.0]]);
    }

    #[test]
    fn empty_interior_gives_whole_matrix() {
        let a = CsrMatrix::from_dense(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let p = extract_blocks(&a, &split_with(0, 2));
        assert_eq!(p.a1, a);
        assert_eq!(p.a0.nrows(), 0);
    }
}
