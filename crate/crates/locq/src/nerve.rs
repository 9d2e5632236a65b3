//! Good covers of geometric simplicial complexes, partitions of unity, and
//! the nerve complex with its barycentric nerve map.
//!
//! A cover set is a list of cells (realized as the union of their closures,
//! with a margin scalar kept for the depth bookkeeping), so membership and
//! intersections are decided exactly on cells, never on floating-point point
//! sets. Distances to set boundaries use the piecewise-linear metric in which
//! every simplex is a unit equilateral one; they are approximated by shortest
//! paths on the edge graph of a 4-fold edgewise subdivision and extended to
//! arbitrary points by linear interpolation over the subdivided pieces, which
//! keeps the resulting weight functions continuous.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::complex::{
    edgewise_subdivide, simplicial_from_cells, CellComplex, CellKind, ComplexError, Subdivision,
};
use crate::graph::Graph;

/// Margin by which star-cover sets are enlarged beyond their closed cells.
pub const STAR_MARGIN: f64 = 0.25;

/// Depth constant: the sets shrunk by this much still cover the complex.
pub const STAR_DEPTH: f64 = 0.125;

/// Upper bound asserted on the sampled Lipschitz constant of the nerve map
/// for every shipped example cover. Measured values are far below; the slack
/// absorbs the interpolation of the approximate distance functions.
pub const LIPSCHITZ_BOUND: f64 = 32.0;

/// Mesh of the subdivision used for the approximate distance functions, and
/// so also the recorded approximation error bound.
const DISTANCE_ERROR: f64 = 0.25;

/// Distances are capped here; only sets with empty boundary ever reach it.
const DISTANCE_CAP: f64 = 2.0;

#[derive(Debug, Error)]
pub enum NerveError {
    #[error("complex has no vertex coordinates")]
    NoCoordinates,
    #[error("point outside the complex: {0}")]
    PointOutsideComplex(String),
    #[error("weight support does not span a nerve simplex: {0}")]
    SupportNotSimplex(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// One cover set: cells as (dimension, index) pairs, sorted, realized as the
/// union of their closures; the margin records how far beyond that union the
/// set notionally extends (used only for the radius/depth bookkeeping).
#[derive(Clone, Debug)]
pub struct CoverSet {
    pub cells: Vec<(usize, usize)>,
    pub inner_margin: f64,
}

impl CoverSet {
    fn contains(&self, cell: (usize, usize)) -> bool {
        self.cells.binary_search(&cell).is_ok()
    }
}

/// Measured constants of a cover: every set fits in a metric ball of radius
/// `radius_bound`, the sets shrunk by `depth` still cover, and evaluated
/// distances carry an approximation error of at most `distance_error`.
#[derive(Clone, Copy, Debug)]
pub struct CoverMargins {
    pub radius_bound: f64,
    pub depth: f64,
    pub distance_error: f64,
}

/// A cover of a geometric simplicial complex by cell-supported sets.
#[derive(Clone, Debug)]
pub struct Cover {
    pub base: CellComplex,
    pub sets: Vec<CoverSet>,
    /// Max over cells of the number of sets containing the cell.
    pub multiplicity: usize,
    pub margins: CoverMargins,
}

impl Cover {
    /// Validates that every cell lies in at least one set and measures the
    /// multiplicity. The base must be simplicial with coordinates.
    pub fn new(
        base: CellComplex,
        sets: Vec<CoverSet>,
        radius_bound: f64,
        depth: f64,
    ) -> Result<Cover, NerveError> {
        if base.kind() != CellKind::Simplicial {
            return Err(ComplexError::NotSimplicial.into());
        }
        if base.coords().is_none() {
            return Err(NerveError::NoCoordinates);
        }
        let mut count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for s in &sets {
            for &(k, i) in &s.cells {
                if k > base.dims() || i >= base.cells(k) {
                    return Err(ComplexError::Invalid(format!(
                        "cover set references missing cell ({k}, {i})"
                    ))
                    .into());
                }
                *count.entry((k, i)).or_insert(0) += 1;
            }
        }
        for k in 0..=base.dims() {
            for i in 0..base.cells(k) {
                if !count.contains_key(&(k, i)) {
                    return Err(ComplexError::Invalid(format!(
                        "cell ({k}, {i}) is covered by no set"
                    ))
                    .into());
                }
            }
        }
        let multiplicity = count.values().copied().max().unwrap_or(0);
        Ok(Cover {
            base,
            sets,
            multiplicity,
            margins: CoverMargins {
                radius_bound,
                depth,
                distance_error: DISTANCE_ERROR,
            },
        })
    }
}

/// A point of the base complex: a cell and barycentric weights over that
/// cell's vertex list in ascending vertex order.
#[derive(Clone, Debug)]
pub struct BasePoint {
    pub cell: (usize, usize),
    pub weights: Vec<f64>,
}

impl BasePoint {
    pub fn at_vertex(v: usize) -> BasePoint {
        BasePoint {
            cell: (0, v),
            weights: vec![1.0],
        }
    }
}

/// A point of the nerve: sparse convex weights over the cover sets.
#[derive(Clone, Debug, PartialEq)]
pub struct NerveMapPoint {
    /// (set index, weight) pairs, ascending by index, weights positive.
    pub weights: Vec<(usize, f64)>,
}

impl NerveMapPoint {
    pub fn support(&self) -> Vec<usize> {
        self.weights.iter().map(|&(i, _)| i).collect()
    }
}

/// One set per vertex consisting of the cells containing that vertex (the
/// open star, realized as the closed star), with margin 1/4. Multiplicity is
/// the largest vertex count of a cell, each set sits inside a metric ball of
/// radius 1 + margin ≤ 2 around its vertex, and the sets shrunk to depth 1/8
/// still cover: every point of an m-simplex has a barycentric coordinate at
/// least 1/(m+1), hence distance ≥ height/(m+1) > 1/8 to some link for m ≤ 3.
pub fn star_cover(x: &CellComplex) -> Result<Cover, NerveError> {
    if x.kind() != CellKind::Simplicial {
        return Err(ComplexError::NotSimplicial.into());
    }
    if x.coords().is_none() {
        return Err(NerveError::NoCoordinates);
    }
    assert!(x.dims() <= 3, "depth constant argued for dimension <= 3");
    let nv = x.cells(0);
    let mut sets: Vec<CoverSet> = (0..nv)
        .map(|v| CoverSet {
            cells: vec![(0, v)],
            inner_margin: STAR_MARGIN,
        })
        .collect();
    for k in 1..=x.dims() {
        for (v, list) in x.vertex_cofaces(k).into_iter().enumerate() {
            for i in list {
                sets[v].cells.push((k, i));
            }
        }
    }
    for s in &mut sets {
        s.cells.sort_unstable();
    }
    let cover = Cover::new(x.clone(), sets, 1.0 + STAR_MARGIN, STAR_DEPTH)?;
    // Multiplicity of a star cover is the largest cell arity, which can
    // never exceed the largest open star.
    let star_degree = (0..nv)
        .map(|v| {
            (0..=x.dims())
                .map(|k| x.vertex_cofaces(k)[v].len())
                .sum::<usize>()
        })
        .max()
        .unwrap_or(0);
    assert!(cover.multiplicity <= star_degree);
    Ok(cover)
}

/// The Čech nerve: one vertex per cover set, and a simplex on every family
/// of sets sharing a cell. Its dimension is strictly below the multiplicity.
pub fn nerve_complex(c: &Cover) -> Result<CellComplex, ComplexError> {
    let mut member: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, s) in c.sets.iter().enumerate() {
        for &cell in &s.cells {
            member.entry(cell).or_default().push(i);
        }
    }
    let mut cells: Vec<Vec<usize>> = member.into_values().collect();
    cells.sort();
    cells.dedup();
    simplicial_from_cells(c.sets.len(), &cells)
}

/// Shared evaluation machinery for a fixed cover: the 4-fold subdivision,
/// per-set boundary distances at its vertices, and piece lookup tables.
/// Build once, evaluate many points.
pub struct NerveEvaluator {
    sub: Subdivision,
    /// Per subdivision vertex: (set, boundary distance) for the sets whose
    /// region contains the vertex, ascending by set.
    vertex_psi: Vec<Vec<(usize, f64)>>,
    /// Dim-k pieces carried by base cell (k, i).
    pieces: BTreeMap<(usize, usize), Vec<usize>>,
    /// Sets containing each base cell, ascending.
    member: BTreeMap<(usize, usize), Vec<usize>>,
    n_sets: usize,
}

/// Distance between two barycentric points of one unit equilateral simplex,
/// coordinates given as sparse (vertex, numerator) supports.
fn support_distance(a: &[(usize, u64)], b: &[(usize, u64)]) -> f64 {
    let da: u64 = a.iter().map(|&(_, n)| n).sum();
    let db: u64 = b.iter().map(|&(_, n)| n).sum();
    let mut verts: Vec<usize> = a.iter().chain(b).map(|&(v, _)| v).collect();
    verts.sort_unstable();
    verts.dedup();
    let coord = |s: &[(usize, u64)], d: u64, v: usize| -> f64 {
        s.iter()
            .find(|&&(w, _)| w == v)
            .map_or(0.0, |&(_, n)| n as f64 / d as f64)
    };
    let mut q = 0.0;
    for v in verts {
        let diff = coord(a, da, v) - coord(b, db, v);
        q += diff * diff;
    }
    (q / 2.0).sqrt()
}

impl NerveEvaluator {
    pub fn new(c: &Cover) -> Result<NerveEvaluator, NerveError> {
        let sub = edgewise_subdivide(&c.base, 4)?;
        let nv = sub.complex.cells(0);
        let mut graph = Graph::new(nv);
        for e in 0..sub.complex.cells(1) {
            let f = sub.complex.faces_of(1, e);
            graph.add_edge(f[0], f[1]);
        }
        let supports = &sub.vertex_support;
        // Per set: Dijkstra from the vertices on the set's boundary (cells
        // in the closure of the set but not the set itself).
        let mut vertex_psi: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nv];
        for (i, s) in c.sets.iter().enumerate() {
            let mut closure: BTreeSet<(usize, usize)> = BTreeSet::new();
            let mut stack: Vec<(usize, usize)> = s.cells.clone();
            while let Some((k, j)) = stack.pop() {
                if !closure.insert((k, j)) {
                    continue;
                }
                if k > 0 {
                    for &f in c.base.faces_of(k, j) {
                        stack.push((k - 1, f));
                    }
                }
            }
            let sources: Vec<usize> = (0..nv)
                .filter(|&q| {
                    let carrier = sub.cell_carrier[0][q];
                    closure.contains(&carrier) && !s.contains(carrier)
                })
                .collect();
            let dist = graph.dijkstra(&sources, |u, v| {
                let l = support_distance(&supports[u], &supports[v]);
                debug_assert!((l - 0.25).abs() < 1e-9, "subdivided edges have uniform length");
                l
            });
            for q in 0..nv {
                if s.contains(sub.cell_carrier[0][q]) {
                    let d = dist[q].min(DISTANCE_CAP);
                    debug_assert!(d > 0.0);
                    vertex_psi[q].push((i, d));
                }
            }
        }
        let mut pieces: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for k in 0..=sub.complex.dims() {
            for (j, &carrier) in sub.cell_carrier[k].iter().enumerate() {
                if carrier.0 == k {
                    pieces.entry(carrier).or_default().push(j);
                }
            }
        }
        let mut member: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, s) in c.sets.iter().enumerate() {
            for &cell in &s.cells {
                member.entry(cell).or_default().push(i);
            }
        }
        Ok(NerveEvaluator {
            sub,
            vertex_psi,
            pieces,
            member,
            n_sets: c.sets.len(),
        })
    }

    /// Raw interpolated weights ψ̃ at p, before normalization: the piece of
    /// the subdivision containing p is located, p is expressed in its
    /// barycentric coordinates, and the per-vertex boundary distances are
    /// blended with them.
    fn raw_weights(&self, p: &BasePoint) -> Result<Vec<(usize, f64)>, NerveError> {
        let (k, i) = p.cell;
        let outside = |why: String| NerveError::PointOutsideComplex(why);
        if k > self.max_dim() || i >= self.base_cells(k) {
            return Err(outside(format!("no cell ({k}, {i})")));
        }
        if p.weights.len() != k + 1 {
            return Err(outside(format!(
                "cell of dimension {k} needs {} weights, got {}",
                k + 1,
                p.weights.len()
            )));
        }
        let sum: f64 = p.weights.iter().sum();
        if p.weights.iter().any(|&w| w < -1e-9) || (sum - 1.0).abs() > 1e-9 {
            return Err(outside("barycentric weights must be convex".into()));
        }
        // Locate p among the pieces carried by its cell and solve for its
        // coordinates in that piece.
        let empty = Vec::new();
        let candidates = self.pieces.get(&(k, i)).unwrap_or(&empty);
        for &piece in candidates {
            let corners: Vec<usize> = if k == 0 {
                vec![piece]
            } else {
                self.sub.complex.vertex_sets(k)[piece].clone()
            };
            if let Some(lambda) = self.solve_in_piece(k, i, &corners, &p.weights) {
                let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
                for (corner, &l) in corners.iter().zip(&lambda) {
                    if l <= 0.0 {
                        continue;
                    }
                    for &(set, d) in &self.vertex_psi[*corner] {
                        *acc.entry(set).or_insert(0.0) += l * d;
                    }
                }
                return Ok(acc.into_iter().filter(|&(_, v)| v > 0.0).collect());
            }
        }
        Err(outside(format!("no piece of cell ({k}, {i}) contains the point")))
    }

    fn max_dim(&self) -> usize {
        self.sub.cell_carrier.len() - 1
    }

    fn base_cells(&self, k: usize) -> usize {
        // The carrier table is indexed by subdivision cells; base cell
        // counts are recovered from the carried originals.
        self.sub.cell_carrier[k]
            .iter()
            .filter(|c| c.0 == k)
            .map(|c| c.1 + 1)
            .max()
            .unwrap_or(0)
            .max(if k == 0 { self.sub.vertex_of_original.len() } else { 0 })
    }

    /// Barycentric coordinates of `w` (over cell (k, i)) inside the piece
    /// with the given corners, or None if the point is outside the piece.
    fn solve_in_piece(
        &self,
        k: usize,
        i: usize,
        corners: &[usize],
        w: &[f64],
    ) -> Option<Vec<f64>> {
        let n = k + 1;
        // Cell vertex list in ascending order; corner supports live on a
        // subset of it because corners are carried by faces of the cell.
        let verts: Vec<usize> = if k == 0 {
            vec![i]
        } else {
            self.base_vertex_list(k, i)
        };
        let mut a = vec![vec![0.0f64; n]; n];
        for (col, &corner) in corners.iter().enumerate() {
            let support = &self.sub.vertex_support[corner];
            let denom: u64 = support.iter().map(|&(_, nu)| nu).sum();
            for &(v, nu) in support {
                let row = verts.binary_search(&v).expect("corner support inside the cell");
                a[row][col] = nu as f64 / denom as f64;
            }
        }
        let mut rhs = w.to_vec();
        // Gaussian elimination with partial pivoting, n <= 4.
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
                .unwrap();
            if a[pivot][col].abs() < 1e-12 {
                return None;
            }
            a.swap(col, pivot);
            rhs.swap(col, pivot);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r][col] / a[col][col];
                for c2 in col..n {
                    a[r][c2] -= f * a[col][c2];
                }
                rhs[r] -= f * rhs[col];
            }
        }
        let mut lambda: Vec<f64> = (0..n).map(|r| rhs[r] / a[r][r]).collect();
        if lambda.iter().any(|&l| l < -1e-9) {
            return None;
        }
        for l in &mut lambda {
            *l = l.max(0.0);
        }
        let s: f64 = lambda.iter().sum();
        for l in &mut lambda {
            *l /= s;
        }
        Some(lambda)
    }

    fn base_vertex_list(&self, k: usize, i: usize) -> Vec<usize> {
        // Vertex list of base cell (k, i), recovered through the original
        // vertices embedded in the subdivision: the piece corners carried by
        // faces include the originals, whose supports are singletons.
        // Simpler and safe: take any piece carried by (k, i) and read the
        // union of its corner supports.
        let piece = self.pieces[&(k, i)][0];
        let corners = &self.sub.complex.vertex_sets(k)[piece];
        let mut verts: Vec<usize> = corners
            .iter()
            .flat_map(|&c| self.sub.vertex_support[c].iter().map(|&(v, _)| v))
            .collect();
        verts.sort_unstable();
        verts.dedup();
        verts
    }

    /// The partition-of-unity weights at p: normalized, exact unit sum,
    /// supported on sets whose region contains p.
    pub fn evaluate(&self, p: &BasePoint) -> Result<NerveMapPoint, NerveError> {
        let raw = self.raw_weights(p)?;
        let total: f64 = raw.iter().map(|&(_, v)| v).sum();
        assert!(total > 0.0, "every point is interior to some set");
        let mut weights: Vec<(usize, f64)> =
            raw.into_iter().map(|(i, v)| (i, v / total)).collect();
        // Force the left-to-right sum to exactly 1.0. Adjusting the final
        // addend tunes the last rounding directly — intermediate partial
        // sums never re-round the correction — so it converges where
        // adjusting an earlier entry can be parity-blocked; earlier entries
        // remain as fallback when the last one would go nonpositive.
        'fix: for j in (0..weights.len()).rev() {
            for _ in 0..16 {
                let cur: f64 = weights.iter().map(|&(_, v)| v).sum();
                if cur == 1.0 {
                    break 'fix;
                }
                let w = weights[j].1;
                let bulk = w + (1.0 - cur);
                let next = if bulk != w && bulk > 0.0 {
                    bulk
                } else if cur < 1.0 {
                    w.next_up()
                } else {
                    w.next_down()
                };
                if next <= 0.0 {
                    break;
                }
                weights[j].1 = next;
            }
        }
        debug_assert_eq!(
            weights.iter().map(|&(_, v)| v).sum::<f64>(),
            1.0,
            "sum fix-up stuck on {weights:?}"
        );
        Ok(NerveMapPoint { weights })
    }

    /// As `evaluate`, but also checks that the support spans a simplex of
    /// the nerve (some base cell lies in all supporting sets).
    pub fn map(&self, p: &BasePoint) -> Result<NerveMapPoint, NerveError> {
        let point = self.evaluate(p)?;
        let support = point.support();
        let spans = self
            .member
            .values()
            .any(|sets| support.iter().all(|s| sets.binary_search(s).is_ok()));
        if !spans {
            return Err(NerveError::SupportNotSimplex(format!("support {support:?}")));
        }
        Ok(point)
    }

    pub fn n_sets(&self) -> usize {
        self.n_sets
    }
}

/// Partition-of-unity weights at a single point. Builds the evaluation
/// tables on every call; use [`NerveEvaluator`] directly for many points.
pub fn partition_of_unity(c: &Cover, p: &BasePoint) -> Result<NerveMapPoint, NerveError> {
    NerveEvaluator::new(c)?.evaluate(p)
}

/// The nerve map at a single point: partition-of-unity weights read as a
/// point of the nerve, with the support checked to span a nerve simplex.
pub fn nerve_map(c: &Cover, p: &BasePoint) -> Result<NerveMapPoint, NerveError> {
    NerveEvaluator::new(c)?.map(p)
}

/// Simplices of the intersection nerve never realized as the support of any
/// of the given sampled map images — the nerve may be larger than the
/// smallest complex containing the image, and this measures the gap.
/// Returned as sorted vertex lists.
pub fn unhit_simplices(
    c: &Cover,
    images: &[NerveMapPoint],
) -> Result<Vec<Vec<usize>>, ComplexError> {
    let nerve = nerve_complex(c)?;
    let mut hit: BTreeSet<Vec<usize>> = BTreeSet::new();
    for im in images {
        hit.insert(im.support());
    }
    let mut out = Vec::new();
    for k in 0..=nerve.dims() {
        for i in 0..nerve.cells(k) {
            let vs: Vec<usize> = if k == 0 {
                vec![i]
            } else {
                nerve.vertex_sets(k)[i].clone()
            };
            if !hit.contains(&vs) {
                out.push(vs);
            }
        }
    }
    Ok(out)
}
