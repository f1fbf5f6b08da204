//! Kuhn (Freudenthal) triangulation of a uniformly subdivided cube.
//!
//! Each lattice cube with lower corner `c` is split into six tetrahedra, one
//! per permutation `p` of the axes: the vertex chain `c`, `c + e_p0`,
//! `c + e_p0 + e_p1`, `c + (1,1,1)`. The same construction on the lattice of
//! half the spacing refines every tetrahedron into eight children.

use crate::error::{Error, Result};
use crate::geometry::Tet;
use crate::scalar::Real;

pub type Vertex = [u32; 3];

pub const KUHN_PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Cell of the level-`level` lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellIndex {
    pub level: u8,
    pub cube: [u32; 3],
    pub tet: u8,
}

impl CellIndex {
    pub fn new(level: u8, cube: [u32; 3], tet: u8) -> Self {
        Self { level, cube, tet }
    }

    /// Lattice vertices of the Kuhn chain.
    pub fn vertices(&self) -> [Vertex; 4] {
        let p = KUHN_PERMUTATIONS[self.tet as usize];
        let mut v = [self.cube; 4];
        for k in 0..3 {
            v[k + 1] = v[k];
            v[k + 1][p[k]] += 1;
        }
        v
    }

    /// Whether lattice vertex `v` is a vertex of this cell.
    pub fn contains_vertex(&self, v: &Vertex) -> bool {
        let mut bits = [false; 3];
        for d in 0..3 {
            match v[d].checked_sub(self.cube[d]) {
                Some(0) => {}
                Some(1) => bits[d] = true,
                _ => return false,
            }
        }
        // the offset must be a prefix of the permutation chain
        let p = KUHN_PERMUTATIONS[self.tet as usize];
        let k = bits.iter().filter(|&&b| b).count();
        (0..k).all(|m| bits[p[m]])
    }

    /// The eight cells of the next finer lattice that tile this cell.
    pub fn children(&self) -> [CellIndex; 8] {
        let parent_perm = KUHN_PERMUTATIONS[self.tet as usize];
        let mut out = [*self; 8];
        let mut n = 0;
        for o in 0..8u32 {
            let off = [o & 1, (o >> 1) & 1, (o >> 2) & 1];
            for (s, perm) in KUHN_PERMUTATIONS.iter().enumerate() {
                // centroid of the fine tet in coarse local coordinates (x4 scale)
                let mut y = [0u32; 3];
                for d in 0..3 {
                    y[d] = 4 * off[d];
                }
                y[perm[0]] += 3;
                y[perm[1]] += 2;
                y[perm[2]] += 1;
                if y[parent_perm[0]] > y[parent_perm[1]] && y[parent_perm[1]] > y[parent_perm[2]] {
                    out[n] = CellIndex {
                        level: self.level + 1,
                        cube: [
                            2 * self.cube[0] + off[0],
                            2 * self.cube[1] + off[1],
                            2 * self.cube[2] + off[2],
                        ],
                        tet: s as u8,
                    };
                    n += 1;
                }
            }
        }
        debug_assert_eq!(n, 8);
        out
    }

    /// The cell of the next coarser lattice containing this one.
    pub fn parent(&self) -> Option<CellIndex> {
        if self.level == 0 {
            return None;
        }
        let perm = KUHN_PERMUTATIONS[self.tet as usize];
        let mut y = [0u32; 3];
        for d in 0..3 {
            y[d] = 4 * (self.cube[d] & 1);
        }
        y[perm[0]] += 3;
        y[perm[1]] += 2;
        y[perm[2]] += 1;
        let tet = KUHN_PERMUTATIONS
            .iter()
            .position(|p| y[p[0]] > y[p[1]] && y[p[1]] > y[p[2]])
            .expect("centroid lies in exactly one Kuhn tetrahedron") as u8;
        Some(CellIndex {
            level: self.level - 1,
            cube: [self.cube[0] / 2, self.cube[1] / 2, self.cube[2] / 2],
            tet,
        })
    }
}

/// Uniform Kuhn lattice on `[-half_width, half_width]^3` with
/// `base_cubes * 2^level` cubes per axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice<T> {
    pub level: u8,
    pub base_cubes: u32,
    pub half_width: T,
}

impl<T: Real> Lattice<T> {
    pub fn new(level: u8, base_cubes: u32, half_width: T) -> Result<Self> {
        if base_cubes == 0 || !(half_width > T::zero()) {
            return Err(Error::InvalidInput(
                "lattice needs at least one cube and a positive half width".into(),
            ));
        }
        if level > 12 {
            return Err(Error::InvalidInput(format!("refinement level {level} too large")));
        }
        Ok(Self {
            level,
            base_cubes,
            half_width,
        })
    }

    /// Lattice of the default background box `[-1.5, 1.5]^3` split into
    /// `4 x 4 x 4` cubes at level 0.
    pub fn standard(level: u8) -> Self {
        Self::new(level, 4, T::lit(1.5)).expect("valid default lattice")
    }

    pub fn coarser(&self) -> Option<Self> {
        (self.level > 0).then(|| Self {
            level: self.level - 1,
            ..*self
        })
    }

    /// Cubes per axis.
    pub fn cubes_per_axis(&self) -> u32 {
        self.base_cubes << self.level
    }

    /// Cube side length.
    pub fn spacing(&self) -> T {
        T::lit(2.0) * self.half_width / T::from_u32(self.cubes_per_axis()).unwrap()
    }

    pub fn coords(&self, v: &Vertex) -> [T; 3] {
        let s = self.spacing();
        v.map(|i| -self.half_width + s * T::from_u32(i).unwrap())
    }

    pub fn cell_coords(&self, cell: &CellIndex) -> Tet<T> {
        cell.vertices().map(|v| self.coords(&v))
    }

    /// Diameter of every Kuhn tetrahedron (the cube diagonal).
    pub fn cell_diameter(&self) -> T {
        self.spacing() * T::lit(3.0).sqrt()
    }

    pub fn contains_cube(&self, cube: &[u32; 3]) -> bool {
        let n = self.cubes_per_axis();
        cube.iter().all(|&c| c < n)
    }

    /// The other lattice cell sharing the face spanned by `face`, if any.
    pub fn face_neighbor(&self, cell: &CellIndex, face: &[Vertex; 3]) -> Option<CellIndex> {
        let mut lo = [0u32; 3];
        let mut hi = [0u32; 3];
        for d in 0..3 {
            let mx = face.iter().map(|v| v[d]).max().unwrap();
            let mn = face.iter().map(|v| v[d]).min().unwrap();
            lo[d] = mx.saturating_sub(1);
            hi[d] = mn;
        }
        for i in lo[0]..=hi[0] {
            for j in lo[1]..=hi[1] {
                for k in lo[2]..=hi[2] {
                    let cube = [i, j, k];
                    if !self.contains_cube(&cube) {
                        continue;
                    }
                    for tet in 0..6u8 {
                        let cand = CellIndex::new(cell.level, cube, tet);
                        if cand != *cell && face.iter().all(|v| cand.contains_vertex(v)) {
                            return Some(cand);
                        }
                    }
                }
            }
        }
        None
    }

    /// All lattice cells having `v` as a vertex (24 for vertices away from
    /// the box boundary).
    pub fn vertex_star(&self, v: &Vertex) -> Vec<CellIndex> {
        let mut out = Vec::with_capacity(24);
        for o in 0..8u32 {
            let off = [o & 1, (o >> 1) & 1, (o >> 2) & 1];
            let mut cube = [0u32; 3];
            let mut ok = true;
            for d in 0..3 {
                match v[d].checked_sub(off[d]) {
                    Some(c) => cube[d] = c,
                    None => ok = false,
                }
            }
            if !ok || !self.contains_cube(&cube) {
                continue;
            }
            for tet in 0..6u8 {
                let c = CellIndex::new(self.level, cube, tet);
                if c.contains_vertex(v) {
                    out.push(c);
                }
            }
        }
        out
    }
}

/// The three faces (by local vertex triples) of a tetrahedron, paired with
/// the opposite local vertex.
pub(crate) const FACES: [([usize; 3], usize); 4] = [
    ([1, 2, 3], 0),
    ([0, 2, 3], 1),
    ([0, 1, 3], 2),
    ([0, 1, 2], 3),
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::signed_volume;
    use std::collections::HashSet;

    #[test]
    fn six_tets_tile_the_cube() {
        let lat = Lattice::<f64>::standard(0);
        let s = lat.spacing();
        let total: f64 = (0..6u8)
            .map(|t| signed_volume(&lat.cell_coords(&CellIndex::new(0, [1, 2, 3], t))).abs())
            .sum();
        assert!((total - s * s * s).abs() < 1e-14);
    }

    #[test]
    fn cell_diameter_is_cube_diagonal() {
        for level in 0..4 {
            let lat = Lattice::<f64>::standard(level);
            for t in 0..6u8 {
                let v = lat.cell_coords(&CellIndex::new(level, [0, 0, 0], t));
                let mut diam: f64 = 0.0;
                for a in 0..4 {
                    for b in 0..4 {
                        diam = diam.max(crate::scalar::vec3::dist(&v[a], &v[b]));
                    }
                }
                assert_eq!(diam, lat.cell_diameter());
                assert!((diam - 3f64.sqrt() * 0.75 * 0.5f64.powi(level as i32)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn children_tile_parent_and_point_back() {
        let lat0 = Lattice::<f64>::standard(0);
        let lat1 = Lattice::<f64>::standard(1);
        for tet in 0..6u8 {
            let parent = CellIndex::new(0, [1, 1, 2], tet);
            let children = parent.children();
            let distinct: HashSet<_> = children.iter().collect();
            assert_eq!(distinct.len(), 8);
            let vol: f64 = children
                .iter()
                .map(|c| signed_volume(&lat1.cell_coords(c)).abs())
                .sum();
            let pv = signed_volume(&lat0.cell_coords(&parent)).abs();
            assert!((vol - pv).abs() < 1e-14);
            for c in &children {
                assert_eq!(c.parent(), Some(parent));
            }
        }
    }

    #[test]
    fn vertex_star_has_24_cells() {
        let lat = Lattice::<f64>::standard(1);
        assert_eq!(lat.vertex_star(&[3, 4, 5]).len(), 24);
        assert_eq!(lat.vertex_star(&[0, 0, 0]).len(), 6);
    }

    #[test]
    fn interior_faces_have_exactly_one_neighbor() {
        let lat = Lattice::<f64>::standard(0);
        let cell = CellIndex::new(0, [1, 1, 1], 3);
        let v = cell.vertices();
        for (f, _) in FACES {
            let face = f.map(|i| v[i]);
            let n = lat.face_neighbor(&cell, &face).expect("interior face");
            assert_ne!(n, cell);
            assert!(face.iter().all(|x| n.contains_vertex(x)));
        }
        // a face on the box boundary has no neighbor
        let corner = CellIndex::new(0, [0, 0, 0], 0);
        let v = corner.vertices();
        let on_boundary = FACES
            .iter()
            .filter(|(f, _)| lat.face_neighbor(&corner, &f.map(|i| v[i])).is_none())
            .count();
        assert!(on_boundary >= 1);
    }
}
