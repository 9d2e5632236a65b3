//! Dual chains on closed manifolds. On a closed d-manifold every primal
//! k-cell meets exactly one dual (d−k)-cell, so dual chains are stored on the
//! primal index set; what changes is the boundary operator, which runs
//! through cofaces instead of faces. Projection pushes a dual 1-chain back
//! into the primal 1-skeleton along short anchor paths.

use std::collections::BTreeMap;

use crate::f2::BitVec;
use crate::graph::Graph;

use super::{CellComplex, ComplexError};

/// Verifies the closed-manifold conditions: purity (every cell under some
/// top cell), every ridge in exactly two top cells, and connected links at
/// codimension ≥ 2 cells. Works for the cell dimensions used here (≤ 3).
pub fn is_closed_manifold(x: &CellComplex) -> Result<(), ComplexError> {
    let d = x.dims();
    if d == 0 {
        return Err(ComplexError::NotClosedManifold(
            "zero-dimensional complex".into(),
        ));
    }
    // co[k][i] = (k+1)-cells over k-cell i.
    let co: Vec<Vec<Vec<usize>>> = (1..=d).map(|k| x.cofaces(k)).collect();
    for k in 0..d - 1 {
        if let Some(i) = co[k].iter().position(Vec::is_empty) {
            return Err(ComplexError::NotClosedManifold(format!(
                "{k}-cell {i} is not a face of any {}-cell",
                k + 1
            )));
        }
    }
    for (i, tops) in co[d - 1].iter().enumerate() {
        if tops.len() != 2 {
            return Err(ComplexError::NotClosedManifold(format!(
                "{}-cell {i} lies in {} top cells instead of 2",
                d - 1,
                tops.len()
            )));
        }
    }
    for c in 0..d.saturating_sub(1) {
        for i in 0..x.cells(c) {
            // Ridges over (c, i), walking the face lattice upward.
            let mut level = vec![i];
            for k in c..d - 1 {
                let mut next: Vec<usize> =
                    level.iter().flat_map(|&j| co[k][j].iter().copied()).collect();
                next.sort_unstable();
                next.dedup();
                level = next;
            }
            let mut tops: Vec<usize> = level
                .iter()
                .flat_map(|&r| co[d - 1][r].iter().copied())
                .collect();
            tops.sort_unstable();
            tops.dedup();
            let mut link = Graph::new(tops.len());
            for &r in &level {
                let pair = &co[d - 1][r];
                let a = tops.binary_search(&pair[0]).expect("top recorded");
                let b = tops.binary_search(&pair[1]).expect("top recorded");
                link.add_edge(a, b);
            }
            if !link.is_connected() {
                return Err(ComplexError::NotClosedManifold(format!(
                    "link of {c}-cell {i} is disconnected"
                )));
            }
        }
    }
    Ok(())
}

/// A chain on the dual cell structure, indexed by the primal cells it
/// crosses: dual dimension d − primal_dim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualChain {
    pub primal_dim: usize,
    pub dual_dim: usize,
    pub vector: BitVec,
}

impl DualChain {
    pub fn volume(&self) -> u64 {
        self.vector.weight()
    }
}

/// Dualizes a k-cochain on a closed manifold into the (d−k)-chain crossing
/// the same cells. Volume is preserved on the nose.
pub fn dual_chain(x: &CellComplex, k: usize, z: &BitVec) -> Result<DualChain, ComplexError> {
    is_closed_manifold(x)?;
    let d = x.dims();
    if k == 0 || k >= d {
        return Err(ComplexError::DimensionOutOfRange { k, dims: d });
    }
    if z.len() != x.cells(k) {
        return Err(ComplexError::Invalid(format!(
            "cochain length {} does not match {} {k}-cells",
            z.len(),
            x.cells(k)
        )));
    }
    Ok(DualChain { primal_dim: k, dual_dim: d - k, vector: z.clone() })
}

/// Boundary in the dual complex: one dual dimension down, one primal
/// dimension up, accumulated by walking cofaces of each crossed cell.
pub fn dual_boundary(x: &CellComplex, c: &DualChain) -> Result<DualChain, ComplexError> {
    let k = c.primal_dim;
    if k >= x.dims() || c.dual_dim == 0 {
        return Err(ComplexError::DimensionOutOfRange { k: k + 1, dims: x.dims() });
    }
    let co = x.cofaces(k + 1);
    let mut out = BitVec::zeros(x.cells(k + 1));
    for i in c.vector.support() {
        for &j in &co[i] {
            out.flip(j);
        }
    }
    Ok(DualChain { primal_dim: k + 1, dual_dim: c.dual_dim - 1, vector: out })
}

/// Edges in the closure of top cell f, collected down the face lattice.
fn closure_edges(x: &CellComplex, f: usize) -> Vec<usize> {
    let mut level = vec![f];
    for k in (2..=x.dims()).rev() {
        let mut next: Vec<usize> = level
            .iter()
            .flat_map(|&c| x.faces_of(k, c).iter().copied())
            .collect();
        next.sort_unstable();
        next.dedup();
        level = next;
    }
    level
}

/// XORs the breadth-first edge path from `a` to `b` inside the given edge
/// set into `out`. Deterministic: edges are scanned in index order.
fn toggle_path(x: &CellComplex, edges: &[usize], a: usize, b: usize, out: &mut BitVec) {
    if a == b {
        return;
    }
    let mut adjacency: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for &e in edges {
        let vs = x.faces_of(1, e);
        adjacency.entry(vs[0]).or_default().push((vs[1], e));
        adjacency.entry(vs[1]).or_default().push((vs[0], e));
    }
    let mut pred: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::from([a]);
    'search: while let Some(v) = queue.pop_front() {
        for &(w, e) in adjacency.get(&v).into_iter().flatten() {
            if w != a && !pred.contains_key(&w) {
                pred.insert(w, (v, e));
                if w == b {
                    break 'search;
                }
                queue.push_back(w);
            }
        }
    }
    let mut at = b;
    while at != a {
        let (prev, e) = pred[&at];
        out.flip(e);
        at = prev;
    }
}

/// Projects a dual 1-chain into the primal 1-skeleton: each crossed ridge
/// contributes the path anchor(f₁) → center(ridge) → anchor(f₂) through the
/// closures of its two top cells, with anchors and centers the
/// lowest-indexed vertices. The result is homologous to the input under the
/// dual↔primal identification and at most a constant factor longer.
pub fn project_to_triangulation(x: &CellComplex, w: &DualChain) -> Result<BitVec, ComplexError> {
    is_closed_manifold(x)?;
    let d = x.dims();
    if d < 2 || w.primal_dim != d - 1 || w.dual_dim != 1 {
        return Err(ComplexError::UnsupportedDimension);
    }
    let tops_over = x.cofaces(d);
    let mut out = BitVec::zeros(x.cells(1));
    for e in w.vector.support() {
        let pair = &tops_over[e];
        let center = x.vertices_of(d - 1, e)[0];
        for (f, from, to) in [
            (pair[0], x.vertices_of(d, pair[0])[0], center),
            (pair[1], center, x.vertices_of(d, pair[1])[0]),
        ] {
            let edges = closure_edges(x, f);
            toggle_path(x, &edges, from, to, &mut out);
        }
    }
    Ok(out)
}
