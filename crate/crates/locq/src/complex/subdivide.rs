//! Subdivision operators with provenance: every produced vertex remembers its
//! barycentric position over the original vertices, and every produced cell
//! remembers the minimal original cell carrying it. That record is what lets
//! later passes pull metric data through a subdivision or count children per
//! original simplex.

use std::collections::BTreeMap;

use super::{CellComplex, ComplexError};

/// Crowding bound for subdivided complexes: a connected subcomplex of an
/// r-fold subdivision touching N distinct original simplices has at least
/// N·r/CROWDING edges. Traversal is what's expensive — entering a new
/// original simplex costs a positive fraction of r once outside a shared
/// vertex star.
pub const CROWDING: u64 = 24;

/// A subdivision of some original complex, bundled with the data tying it
/// back: rational vertex positions and per-cell carriers.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: CellComplex,
    /// Per new vertex: sorted (original vertex, numerator) pairs; the
    /// denominator is the numerator sum and the gcd of the numerators is 1.
    pub vertex_support: Vec<Vec<(usize, u64)>>,
    /// Index of each original vertex among the new vertices.
    pub vertex_of_original: Vec<usize>,
    /// cell_carrier[k][i] = (dim, index) of the minimal original cell whose
    /// closure contains new k-cell i.
    pub cell_carrier: Vec<Vec<(usize, usize)>>,
}

impl Subdivision {
    /// The trivial subdivision: the complex itself, every cell its own
    /// carrier.
    pub fn identity(x: &CellComplex) -> Subdivision {
        let n = x.cells(0);
        Subdivision {
            complex: x.clone(),
            vertex_support: (0..n).map(|v| vec![(v, 1)]).collect(),
            vertex_of_original: (0..n).collect(),
            cell_carrier: (0..=x.dims())
                .map(|k| (0..x.cells(k)).map(|i| (k, i)).collect())
                .collect(),
        }
    }

    /// Positions of the new vertices given coordinates for the original ones.
    pub fn interpolate(&self, original: &[Vec<f64>]) -> Vec<Vec<f64>> {
        interpolate_supports(&self.vertex_support, original)
    }

    /// Number of k-dimensional pieces carried by original cell (k, i) — its
    /// children under the subdivision.
    pub fn children(&self, k: usize, i: usize) -> usize {
        self.cell_carrier[k].iter().filter(|&&c| c == (k, i)).count()
    }
}

fn interpolate_supports(supports: &[Vec<(usize, u64)>], original: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let dim = original.first().map_or(0, Vec::len);
    supports
        .iter()
        .map(|support| {
            let denom: u64 = support.iter().map(|&(_, a)| a).sum();
            let mut acc = vec![0.0; dim];
            for &(v, a) in support {
                for (t, c) in acc.iter_mut().zip(&original[v]) {
                    *t += a as f64 / denom as f64 * c;
                }
            }
            acc
        })
        .collect()
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Sorted support with numerator gcd 1 — the canonical form used as a
/// vertex identity across cells and subdivision passes.
pub(super) fn normalize(mut support: Vec<(usize, u64)>) -> Vec<(usize, u64)> {
    support.retain(|&(_, a)| a > 0);
    support.sort_unstable();
    let g = support.iter().fold(0u128, |g, &(_, a)| gcd(g, a as u128)) as u64;
    if g > 1 {
        for (_, a) in &mut support {
            *a /= g;
        }
    }
    support
}

/// Interns barycentric points as vertex indices, original vertices first.
pub(super) struct VertexRegistry {
    pub(super) ids: BTreeMap<Vec<(usize, u64)>, usize>,
    pub(super) supports: Vec<Vec<(usize, u64)>>,
}

impl VertexRegistry {
    pub(super) fn with_originals(n: usize) -> Self {
        let mut reg = VertexRegistry { ids: BTreeMap::new(), supports: Vec::new() };
        for v in 0..n {
            reg.intern(vec![(v, 1)]);
        }
        reg
    }

    pub(super) fn intern(&mut self, support: Vec<(usize, u64)>) -> usize {
        let support = normalize(support);
        if let Some(&id) = self.ids.get(&support) {
            return id;
        }
        let id = self.supports.len();
        self.ids.insert(support.clone(), id);
        self.supports.push(support);
        id
    }
}

/// Carrier of every cell of `sub`: the original cell spanned by the union of
/// its vertices' supports. Relies on the original complex being closed under
/// faces, which all constructions here are.
pub(super) fn carriers(x: &CellComplex, sub: &CellComplex, supports: &[Vec<(usize, u64)>]) -> Vec<Vec<(usize, usize)>> {
    let mut lookup: BTreeMap<Vec<usize>, (usize, usize)> = BTreeMap::new();
    for v in 0..x.cells(0) {
        lookup.insert(vec![v], (0, v));
    }
    for k in 1..=x.dims() {
        for (i, vs) in x.vertex_sets(k).iter().enumerate() {
            lookup.insert(vs.clone(), (k, i));
        }
    }
    (0..=sub.dims())
        .map(|k| {
            (0..sub.cells(k))
                .map(|i| {
                    let mut u: Vec<usize> = sub
                        .vertices_of(k, i)
                        .iter()
                        .flat_map(|&nv| supports[nv].iter().map(|&(ov, _)| ov))
                        .collect();
                    u.sort_unstable();
                    u.dedup();
                    *lookup.get(&u).expect("piece spans a face of the original")
                })
                .collect()
        })
        .collect()
}

pub(super) fn finish(
    x: &CellComplex,
    registry: VertexRegistry,
    cells: &[Vec<usize>],
) -> Result<Subdivision, ComplexError> {
    let supports = registry.supports;
    let mut complex = super::simplicial_from_cells(supports.len(), cells)?;
    if let Some(c) = x.coords() {
        complex = complex.with_coords(interpolate_supports(&supports, c))?;
    }
    let cell_carrier = carriers(x, &complex, &supports);
    Ok(Subdivision {
        cell_carrier,
        vertex_of_original: (0..x.cells(0)).collect(),
        vertex_support: supports,
        complex,
    })
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(m - 1) {
        for slot in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(slot, m - 1);
            out.push(p);
        }
    }
    out
}

/// Staircase pieces of the scaled m-simplex {r ≥ y_1 ≥ … ≥ y_m ≥ 0}: unit
/// lattice simplices (cube corner plus a permutation path) whose vertices all
/// satisfy the chain. Exactly r^m survive and they tile the simplex.
pub(super) fn staircase_pieces(r: u64, m: usize) -> Vec<Vec<Vec<u64>>> {
    if m == 0 {
        return vec![vec![vec![]]];
    }
    let perms = permutations(m);
    let mut pieces = Vec::new();
    let mut cube = vec![0u64; m];
    loop {
        for perm in &perms {
            let mut vertex = cube.clone();
            let mut piece = vec![vertex.clone()];
            for &axis in perm {
                vertex[axis] += 1;
                piece.push(vertex.clone());
            }
            let chain_ok = piece.iter().all(|v| {
                v[0] <= r && v.windows(2).all(|w| w[0] >= w[1])
            });
            if chain_ok {
                pieces.push(piece);
            }
        }
        // Next monotone cube corner (c_1 ≥ … ≥ c_m, entries < r).
        let mut d = m;
        loop {
            if d == 0 {
                debug_assert_eq!(pieces.len() as u64, r.pow(m as u32));
                return pieces;
            }
            d -= 1;
            let cap = if d == 0 { r - 1 } else { cube[d - 1] };
            if cube[d] < cap {
                cube[d] += 1;
                for t in d + 1..m {
                    cube[t] = 0;
                }
                break;
            }
        }
    }
}

/// Barycentric numerators of the staircase lattice point y over the m+1
/// simplex vertices: differences of the chain, denominator r.
pub(super) fn lattice_support(gs: &[usize], y: &[u64], r: u64) -> Vec<(usize, u64)> {
    let m = y.len();
    let mut support = Vec::with_capacity(m + 1);
    for (j, &g) in gs.iter().enumerate() {
        let hi = if j == 0 { r } else { y[j - 1] };
        let lo = if j == m { 0 } else { y[j] };
        if hi > lo {
            support.push((g, hi - lo));
        }
    }
    support
}

/// Edgewise (standard/staircase) subdivision by factor r: every m-simplex
/// becomes exactly r^m simplices on the 1/r lattice, compatibly across
/// shared faces via the global vertex order. Dimensions up to 3.
pub fn edgewise_subdivide(x: &CellComplex, r: u64) -> Result<Subdivision, ComplexError> {
    if !x.is_simplicial() {
        return Err(ComplexError::NotSimplicial);
    }
    if x.dims() > 3 {
        return Err(ComplexError::UnsupportedDimension);
    }
    if r == 0 {
        return Err(ComplexError::Invalid("subdivision factor must be positive".into()));
    }
    if r == 1 {
        return Ok(Subdivision::identity(x));
    }
    let mut registry = VertexRegistry::with_originals(x.cells(0));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for m in 1..=x.dims() {
        let pieces = staircase_pieces(r, m);
        for gs in x.vertex_sets(m) {
            for piece in &pieces {
                cells.push(
                    piece
                        .iter()
                        .map(|y| registry.intern(lattice_support(gs, y, r)))
                        .collect(),
                );
            }
        }
    }
    finish(x, registry, &cells)
}

/// Barycentric subdivision: one vertex per cell, one d-simplex per full flag
/// of faces, so every d-simplex becomes (d+1)! pieces.
pub fn barycentric_subdivide(x: &CellComplex) -> Result<Subdivision, ComplexError> {
    if !x.is_simplicial() {
        return Err(ComplexError::NotSimplicial);
    }
    let mut registry = VertexRegistry::with_originals(x.cells(0));
    // Barycenter ids per (dim, index); dim 0 barycenters are the vertices.
    let mut center: Vec<Vec<usize>> = vec![(0..x.cells(0)).collect()];
    for k in 1..=x.dims() {
        center.push(
            x.vertex_sets(k)
                .iter()
                .map(|vs| registry.intern(vs.iter().map(|&v| (v, 1)).collect()))
                .collect(),
        );
    }
    // Full flags under each cell: chains with one face per dimension.
    let mut cells: Vec<Vec<usize>> = Vec::new();
    fn flags(
        x: &CellComplex,
        center: &[Vec<usize>],
        k: usize,
        i: usize,
        chain: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        chain.push(center[k][i]);
        if k == 0 {
            out.push(chain.iter().rev().copied().collect());
        } else {
            for &f in x.faces_of(k, i) {
                flags(x, center, k - 1, f, chain, out);
            }
        }
        chain.pop();
    }
    for k in 1..=x.dims() {
        for i in 0..x.cells(k) {
            flags(x, &center, k, i, &mut Vec::new(), &mut cells);
        }
    }
    finish(x, registry, &cells)
}

/// Composes two subdivision records: `inner` must subdivide `outer.complex`;
/// the result ties `inner.complex` directly to `outer`'s original.
pub fn compose_subdivisions(outer: &Subdivision, inner: Subdivision) -> Subdivision {
    let vertex_support: Vec<Vec<(usize, u64)>> = inner
        .vertex_support
        .iter()
        .map(|sup| {
            let d_in: u128 = sup.iter().map(|&(_, a)| a as u128).sum();
            // Accumulate exact fractions per original vertex.
            let mut acc: BTreeMap<usize, (u128, u128)> = BTreeMap::new();
            for &(u, a) in sup {
                let mid = &outer.vertex_support[u];
                let d_mid: u128 = mid.iter().map(|&(_, b)| b as u128).sum();
                for &(v, b) in mid {
                    let (num, den) = (a as u128 * b as u128, d_in * d_mid);
                    let e = acc.entry(v).or_insert((0, 1));
                    let l = e.1 / gcd(e.1, den) * den;
                    *e = (e.0 * (l / e.1) + num * (l / den), l);
                }
            }
            let l = acc.values().fold(1u128, |l, &(_, d)| l / gcd(l, d) * d);
            let support: Vec<(usize, u64)> = acc
                .into_iter()
                .map(|(v, (n, d))| (v, u64::try_from(n * (l / d)).expect("small denominators")))
                .collect();
            normalize(support)
        })
        .collect();
    let vertex_of_original = outer
        .vertex_of_original
        .iter()
        .map(|&u| inner.vertex_of_original[u])
        .collect();
    let cell_carrier = inner
        .cell_carrier
        .iter()
        .map(|level| level.iter().map(|&(k, i)| outer.cell_carrier[k][i]).collect())
        .collect();
    Subdivision {
        complex: inner.complex,
        vertex_support,
        vertex_of_original,
        cell_carrier,
    }
}
