//! Cell complexes over the two-element field: boundary operators, homology
//! dimensions, systoles, subdivision, duality, and pullbacks.
//!
//! Boundary incidence is stored sparsely (per-cell face lists) because
//! subdivided complexes reach millions of cells; dense packed matrices are
//! materialized on demand for rank work, which only ever runs on small
//! complexes. Everything is mod 2 — no orientations or signs anywhere.
//!
//! A complex is immutable after construction, and construction validates the
//! chain condition ∂∂ = 0 plus the simplicial cell-shape rules, so downstream
//! code can rely on both without re-checking.

mod dual;
mod generators;
mod pullback;
mod subdivide;

pub use dual::{
    dual_boundary, dual_chain, is_closed_manifold, project_to_triangulation, DualChain,
};
pub use pullback::{subdivide_pullback, PullbackSubdivision, SimplicialMap};
pub use generators::{
    cubical_torus, cubical_torus_cells, cycle_complex, octahedron, random_triangle_soup,
    relabel_vertices, simplicial_from_cells, triangulated_torus, wedge_circles,
};
pub use subdivide::{
    barycentric_subdivide, compose_subdivisions, edgewise_subdivide, Subdivision, CROWDING,
};

use serde::{Deserialize, Serialize};

use crate::f2::{min_coset_weight, BitMatrix, BitVec, CosetSearch, SearchBudget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Simplicial,
    Cubical,
}

#[derive(Debug, thiserror::Error)]
pub enum ComplexError {
    #[error("invalid complex: {0}")]
    Invalid(String),
    #[error("dimension {k} out of range for a {dims}-complex")]
    DimensionOutOfRange { k: usize, dims: usize },
    #[error("operation requires a simplicial complex")]
    NotSimplicial,
    #[error("operation not supported in this dimension")]
    UnsupportedDimension,
    #[error("complex is not a closed manifold: {0}")]
    NotClosedManifold(String),
    #[error("map is not simplicial: {0}")]
    NotSimplicialMap(String),
}

/// A finite cell complex with mod-2 boundary incidence.
#[derive(Clone, Debug, PartialEq)]
pub struct CellComplex {
    kind: CellKind,
    n_vertices: usize,
    /// faces[k-1][i] = sorted (k−1)-cell indices in the boundary of k-cell i.
    /// This is the mod-2 boundary support; for every complex built here it
    /// coincides with the geometric face list (no face repeats).
    faces: Vec<Vec<Vec<usize>>>,
    /// vertex_sets[k-1][i] = sorted vertices of k-cell i.
    vertex_sets: Vec<Vec<Vec<usize>>>,
    coords: Option<Vec<Vec<f64>>>,
}

impl CellComplex {
    /// Builds and validates a complex from its sparse face lists.
    /// `faces[k-1][i]` lists the (k−1)-cells bounding k-cell i; dimension-1
    /// faces are vertex indices.
    pub fn from_faces(
        kind: CellKind,
        n_vertices: usize,
        faces: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, ComplexError> {
        let bad = |msg: String| Err(ComplexError::Invalid(msg));
        // Index-range and sortedness sweep.
        for (ki, level) in faces.iter().enumerate() {
            let k = ki + 1;
            let below = if ki == 0 { n_vertices } else { faces[ki - 1].len() };
            for (i, f) in level.iter().enumerate() {
                if f.is_empty() {
                    return bad(format!("{k}-cell {i} has no faces"));
                }
                if f.windows(2).any(|w| w[0] >= w[1]) {
                    return bad(format!("{k}-cell {i}: face list not strictly sorted"));
                }
                if *f.last().unwrap() >= below {
                    return bad(format!("{k}-cell {i}: face index out of range"));
                }
            }
        }
        // Chain condition: every (k−2)-cell appears an even number of times
        // among the faces of the faces of each k-cell.
        for ki in 1..faces.len() {
            for (i, f) in faces[ki].iter().enumerate() {
                let mut seen = std::collections::BTreeMap::new();
                for &face in f {
                    for &sub in &faces[ki - 1][face] {
                        *seen.entry(sub).or_insert(0u32) += 1;
                    }
                }
                if seen.values().any(|&c| c % 2 != 0) {
                    return bad(format!("boundary of boundary nonzero at {}-cell {i}", ki + 1));
                }
            }
        }

        // Vertex sets by upward union; dimension-1 face lists already are
        // vertex pairs.
        let mut vertex_sets: Vec<Vec<Vec<usize>>> = Vec::with_capacity(faces.len());
        for (ki, level) in faces.iter().enumerate() {
            let sets: Vec<Vec<usize>> = level
                .iter()
                .map(|f| {
                    if ki == 0 {
                        f.clone()
                    } else {
                        let mut vs: Vec<usize> = f
                            .iter()
                            .flat_map(|&face| vertex_sets[ki - 1][face].iter().copied())
                            .collect();
                        vs.sort_unstable();
                        vs.dedup();
                        vs
                    }
                })
                .collect();
            vertex_sets.push(sets);
        }

        if kind == CellKind::Simplicial {
            for (ki, level) in faces.iter().enumerate() {
                let k = ki + 1;
                for (i, f) in level.iter().enumerate() {
                    if f.len() != k + 1 {
                        return bad(format!("{k}-simplex {i} has {} facets, wants {}", f.len(), k + 1));
                    }
                    if vertex_sets[ki][i].len() != k + 1 {
                        return bad(format!("{k}-simplex {i} spans {} vertices", vertex_sets[ki][i].len()));
                    }
                }
                // No two cells of one dimension share a vertex set.
                let mut sorted: Vec<&Vec<usize>> = vertex_sets[ki].iter().collect();
                sorted.sort();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return bad(format!("duplicate {k}-cells"));
                }
            }
        }

        Ok(CellComplex {
            kind,
            n_vertices,
            faces,
            vertex_sets,
            coords: None,
        })
    }

    /// Attaches a geometric realization: one coordinate vector per vertex,
    /// all of equal dimension.
    pub fn with_coords(mut self, coords: Vec<Vec<f64>>) -> Result<Self, ComplexError> {
        if coords.len() != self.n_vertices {
            return Err(ComplexError::Invalid(format!(
                "{} coordinate rows for {} vertices",
                coords.len(),
                self.n_vertices
            )));
        }
        let dim = coords.first().map_or(0, Vec::len);
        if coords.iter().any(|c| c.len() != dim) {
            return Err(ComplexError::Invalid("ragged coordinates".into()));
        }
        self.coords = Some(coords);
        Ok(self)
    }

    pub fn kind(&self) -> CellKind {
        self.kind
    }

    pub fn is_simplicial(&self) -> bool {
        self.kind == CellKind::Simplicial
    }

    /// Top dimension.
    pub fn dims(&self) -> usize {
        self.faces.len()
    }

    /// Number of k-cells.
    pub fn cells(&self, k: usize) -> usize {
        if k == 0 {
            self.n_vertices
        } else {
            self.faces.get(k - 1).map_or(0, Vec::len)
        }
    }

    /// Total cell count across dimensions.
    pub fn total_cells(&self) -> usize {
        (0..=self.dims()).map(|k| self.cells(k)).sum()
    }

    /// Number of top-dimensional cells.
    pub fn volume(&self) -> usize {
        self.cells(self.dims())
    }

    /// Sorted faces of a k-cell, k ≥ 1.
    pub fn faces_of(&self, k: usize, i: usize) -> &[usize] {
        &self.faces[k - 1][i]
    }

    /// Sorted vertices of a k-cell. For k = 0 this is the vertex itself.
    pub fn vertices_of(&self, k: usize, i: usize) -> std::borrow::Cow<'_, [usize]> {
        if k == 0 {
            std::borrow::Cow::Owned(vec![i])
        } else {
            std::borrow::Cow::Borrowed(&self.vertex_sets[k - 1][i])
        }
    }

    /// All vertex sets of one dimension, k ≥ 1.
    pub fn vertex_sets(&self, k: usize) -> &[Vec<usize>] {
        &self.vertex_sets[k - 1]
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }

    /// Maximum number of cells (of any dimension ≥ 1) meeting one vertex.
    pub fn degree(&self) -> usize {
        let mut count = vec![0usize; self.n_vertices];
        for level in &self.vertex_sets {
            for vs in level {
                for &v in vs {
                    count[v] += 1;
                }
            }
        }
        count.into_iter().max().unwrap_or(0)
    }

    /// Cells of dimension `k` containing each vertex.
    pub fn vertex_cofaces(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_vertices];
        if k == 0 {
            for (v, list) in out.iter_mut().enumerate() {
                list.push(v);
            }
            return out;
        }
        for (i, vs) in self.vertex_sets[k - 1].iter().enumerate() {
            for &v in vs {
                out[v].push(i);
            }
        }
        out
    }

    /// Cells of dimension `k` having each (k−1)-cell as a face.
    pub fn cofaces(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cells(k - 1)];
        for (i, f) in self.faces[k - 1].iter().enumerate() {
            for &face in f {
                out[face].push(i);
            }
        }
        out
    }

    /// Dense boundary matrix ∂_k mapping k-chains to (k−1)-chains,
    /// 1 ≤ k ≤ dims. Only sensible for small complexes.
    pub fn boundary_matrix(&self, k: usize) -> BitMatrix {
        let rows = self.cells(k - 1);
        let cols = self.cells(k);
        let mut support = vec![Vec::new(); rows];
        for (i, f) in self.faces[k - 1].iter().enumerate() {
            for &face in f {
                support[face].push(i);
            }
        }
        BitMatrix::from_support(rows, cols, &support).expect("validated at construction")
    }

    fn boundary_or_zero(&self, k: usize) -> BitMatrix {
        if k == 0 || k > self.dims() {
            // Zero map with the right column count.
            BitMatrix::zeros(0, self.cells(k))
        } else {
            self.boundary_matrix(k)
        }
    }

    /// dim H_k = dim ker ∂_k − rank ∂_{k+1}.
    pub fn homology_dim(&self, k: usize) -> usize {
        let cycles = self.cells(k) - self.boundary_or_zero(k).rank();
        cycles - self.boundary_or_zero(k + 1).rank()
    }

    /// Lightest k-cycle that is not a boundary: weight infinite when H_k = 0.
    pub fn systole(&self, k: usize, budget: &SearchBudget) -> Result<CosetSearch, ComplexError> {
        self.check_dim(k)?;
        let cycles = self.boundary_or_zero(k).nullspace();
        let boundaries = self.boundary_or_zero(k + 1).transpose();
        let kernel: Vec<BitVec> = cycles.row_iter().cloned().collect();
        let image: Vec<BitVec> = boundaries.row_iter().cloned().collect();
        Ok(min_coset_weight(&kernel, &image, budget).expect("boundaries are cycles"))
    }

    /// Lightest k-cocycle that is not a coboundary.
    pub fn cosystole(&self, k: usize, budget: &SearchBudget) -> Result<CosetSearch, ComplexError> {
        self.check_dim(k)?;
        let cocycles = self.boundary_or_zero(k + 1).transpose().nullspace();
        let coboundaries = self.boundary_or_zero(k);
        let kernel: Vec<BitVec> = cocycles.row_iter().cloned().collect();
        let image: Vec<BitVec> = coboundaries.row_iter().cloned().collect();
        Ok(min_coset_weight(&kernel, &image, budget).expect("coboundaries are cocycles"))
    }

    fn check_dim(&self, k: usize) -> Result<(), ComplexError> {
        if k > self.dims() {
            return Err(ComplexError::DimensionOutOfRange { k, dims: self.dims() });
        }
        Ok(())
    }
}

/// A mod-2 chain (or cochain) in one dimension of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainVector {
    pub dim: usize,
    pub vector: BitVec,
}

impl ChainVector {
    pub fn new(x: &CellComplex, dim: usize, vector: BitVec) -> Result<Self, ComplexError> {
        if vector.len() != x.cells(dim) {
            return Err(ComplexError::Invalid(format!(
                "chain length {} over {} cells",
                vector.len(),
                x.cells(dim)
            )));
        }
        Ok(ChainVector { dim, vector })
    }

    pub fn zero(x: &CellComplex, dim: usize) -> Self {
        ChainVector { dim, vector: BitVec::zeros(x.cells(dim)) }
    }

    pub fn volume(&self) -> u64 {
        self.vector.weight()
    }
}

/// The CSS code whose qubits are the k-cells: checks on one side from the
/// boundary into dimension k−1, generator rows from the coboundary out of
/// dimension k+1.
pub fn code_from_complex(
    x: &CellComplex,
    k: usize,
) -> Result<crate::code::CssCode, ComplexError> {
    if k == 0 || k >= x.dims() {
        return Err(ComplexError::DimensionOutOfRange { k, dims: x.dims() });
    }
    let h1 = x.boundary_matrix(k);
    let h2 = x.boundary_matrix(k + 1).transpose();
    Ok(crate::code::CssCode::new(h1, h2).expect("chain condition holds by construction"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_broken_chain_condition() {
        // A "triangle" whose three edges do not close up: vertex 3 appears
        // once among the faces of faces.
        let err = CellComplex::from_faces(
            CellKind::Simplicial,
            4,
            vec![
                vec![vec![0, 1], vec![1, 2], vec![2, 3]],
                vec![vec![0, 1, 2]],
            ],
        );
        assert!(err.is_err());
    }

    #[test]
    fn triangle_closure_is_valid() {
        let x = CellComplex::from_faces(
            CellKind::Simplicial,
            3,
            vec![
                vec![vec![0, 1], vec![0, 2], vec![1, 2]],
                vec![vec![0, 1, 2]],
            ],
        )
        .unwrap();
        assert_eq!(x.dims(), 2);
        assert_eq!((x.cells(0), x.cells(1), x.cells(2)), (3, 3, 1));
        assert_eq!(x.vertices_of(2, 0).as_ref(), &[0, 1, 2]);
        assert_eq!(x.homology_dim(0), 1);
        assert_eq!(x.homology_dim(1), 0);
        assert_eq!(x.degree(), 3); // two edges and the triangle at each vertex
    }

    #[test]
    fn homology_of_a_bare_cycle() {
        let x = cycle_complex(5).unwrap();
        assert_eq!(x.homology_dim(0), 1);
        assert_eq!(x.homology_dim(1), 1);
        let sys = x.systole(1, &SearchBudget::default()).unwrap();
        assert_eq!(sys.weight.finite(), Some(5));
        let sys0 = x.systole(0, &SearchBudget::default()).unwrap();
        // Connected: every vertex class is the same, lightest nontrivial
        // 0-cycle is a single vertex.
        assert_eq!(sys0.weight.finite(), Some(1));
    }

    #[test]
    fn dimension_bounds_are_enforced() {
        let x = cycle_complex(4).unwrap();
        assert!(x.systole(2, &SearchBudget::default()).is_err());
        assert!(code_from_complex(&x, 1).is_err()); // needs k < dims
    }
}
