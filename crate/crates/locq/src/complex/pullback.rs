//! Pulling a subdivision back through a simplicial map. When the target is
//! subdivided edgewise, the source must be re-cut so the map stays simplicial
//! cell-by-cell: non-degenerate simplices receive an affine copy of the
//! target's cutting, collapsed simplices stay whole, and a triangle mapping
//! onto an edge is sliced along the level sets of the collapsed coordinate.

use std::collections::BTreeMap;

use super::subdivide::{
    edgewise_subdivide, finish, lattice_support, staircase_pieces, normalize, Subdivision,
    VertexRegistry,
};
use super::{CellComplex, ComplexError};

/// A map between simplicial complexes given by vertex images; every cell's
/// image vertex set must itself span a cell of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    pub vertex_map: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(
        source: &CellComplex,
        target: &CellComplex,
        vertex_map: Vec<usize>,
    ) -> Result<SimplicialMap, ComplexError> {
        if !source.is_simplicial() || !target.is_simplicial() {
            return Err(ComplexError::NotSimplicial);
        }
        if vertex_map.len() != source.cells(0) {
            return Err(ComplexError::NotSimplicialMap(format!(
                "vertex map covers {} of {} vertices",
                vertex_map.len(),
                source.cells(0)
            )));
        }
        if let Some(&v) = vertex_map.iter().find(|&&v| v >= target.cells(0)) {
            return Err(ComplexError::NotSimplicialMap(format!(
                "image vertex {v} outside the target"
            )));
        }
        let mut target_cells: Vec<std::collections::BTreeSet<&[usize]>> = Vec::new();
        for k in 1..=target.dims() {
            target_cells.push(target.vertex_sets(k).iter().map(Vec::as_slice).collect());
        }
        for k in 1..=source.dims() {
            for (i, vs) in source.vertex_sets(k).iter().enumerate() {
                let mut image: Vec<usize> = vs.iter().map(|&v| vertex_map[v]).collect();
                image.sort_unstable();
                image.dedup();
                let spans_cell = image.len() == 1
                    || target_cells
                        .get(image.len() - 2)
                        .is_some_and(|cells| cells.contains(image.as_slice()));
                if !spans_cell {
                    return Err(ComplexError::NotSimplicialMap(format!(
                        "{k}-cell {i} lands on {image:?}, not a cell of the target"
                    )));
                }
            }
        }
        Ok(SimplicialMap { vertex_map })
    }
}

/// A target subdivision pulled back through a simplicial map: the source is
/// re-cut so `map` is simplicial from `source.complex` to `base.complex`.
#[derive(Clone, Debug)]
pub struct PullbackSubdivision {
    pub base: Subdivision,
    pub source: Subdivision,
    pub map: SimplicialMap,
}

/// Pushes a rational point of the source forward through the vertex map.
fn push_support(support: &[(usize, u64)], vertex_map: &[usize]) -> Vec<(usize, u64)> {
    let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
    for &(v, a) in support {
        *acc.entry(vertex_map[v]).or_insert(0) += a;
    }
    normalize(acc.into_iter().collect())
}

/// Subdivides the target edgewise by `r` and re-cuts the source compatibly.
/// Source dimension up to 2; each source m-simplex becomes at most r^m
/// pieces, exactly r^m when the map is injective on it.
pub fn subdivide_pullback(
    source: &CellComplex,
    map: &SimplicialMap,
    target: &CellComplex,
    r: u64,
) -> Result<PullbackSubdivision, ComplexError> {
    if source.dims() > 2 {
        return Err(ComplexError::UnsupportedDimension);
    }
    // Re-validate so stale maps fail loudly rather than corrupt the cutting.
    let map = SimplicialMap::new(source, target, map.vertex_map.clone())?;
    let base = edgewise_subdivide(target, r)?;
    let f = &map.vertex_map;

    let mut registry = VertexRegistry::with_originals(source.cells(0));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    // Side point at parameter t/r from `from` toward `to`.
    let side = |reg: &mut VertexRegistry, from: usize, to: usize, t: u64| {
        reg.intern(vec![(from, r - t), (to, t)])
    };
    for vs in source.vertex_sets(1) {
        let (u, w) = (vs[0], vs[1]);
        if f[u] == f[w] {
            cells.push(vec![u, w]);
        } else {
            for t in 0..r {
                cells.push(vec![side(&mut registry, u, w, t), side(&mut registry, u, w, t + 1)]);
            }
        }
    }
    if source.dims() >= 2 {
        let pieces = staircase_pieces(r, 2);
        for vs in source.vertex_sets(2) {
            let mut images: Vec<usize> = vs.iter().map(|&v| f[v]).collect();
            images.sort_unstable();
            images.dedup();
            match images.len() {
                1 => cells.push(vs.clone()),
                3 => {
                    // Affine copy of the target triangle's cutting, source
                    // vertices ordered by their image indices.
                    let mut order = vs.clone();
                    order.sort_by_key(|&v| f[v]);
                    for piece in &pieces {
                        cells.push(
                            piece
                                .iter()
                                .map(|y| registry.intern(lattice_support(&order, y, r)))
                                .collect(),
                        );
                    }
                }
                _ => {
                    // Triangle onto an edge: slice along level sets of the
                    // coordinate that survives, then split each band from its
                    // lowest-numbered corner.
                    let apex_image = images
                        .iter()
                        .copied()
                        .find(|&y| vs.iter().filter(|&&v| f[v] == y).count() == 1)
                        .expect("one image vertex is hit once");
                    let apex = vs.iter().copied().find(|&v| f[v] == apex_image).unwrap();
                    let base_pair: Vec<usize> =
                        vs.iter().copied().filter(|&v| v != apex).collect();
                    let (a0, a1) = (base_pair[0], base_pair[1]);
                    for t in 0..r - 1 {
                        let quad = [
                            side(&mut registry, a0, apex, t),
                            side(&mut registry, a1, apex, t),
                            side(&mut registry, a1, apex, t + 1),
                            side(&mut registry, a0, apex, t + 1),
                        ];
                        let min = (0..4).min_by_key(|&c| quad[c]).unwrap();
                        let (d0, d1) = if min % 2 == 0 { (0, 2) } else { (1, 3) };
                        cells.push(vec![quad[d0], quad[(d0 + 1) % 4], quad[d1]]);
                        cells.push(vec![quad[d0], quad[d1], quad[(d1 + 1) % 4]]);
                    }
                    cells.push(vec![
                        side(&mut registry, a0, apex, r - 1),
                        side(&mut registry, a1, apex, r - 1),
                        apex,
                    ]);
                }
            }
        }
    }
    let cut = finish(source, registry, &cells)?;

    // The pushed-forward position of every new source vertex is a lattice
    // point of the subdivided target; that correspondence is the new map.
    let target_ids: BTreeMap<&[(usize, u64)], usize> = base
        .vertex_support
        .iter()
        .enumerate()
        .map(|(id, s)| (s.as_slice(), id))
        .collect();
    let pushed: Vec<usize> = cut
        .vertex_support
        .iter()
        .map(|s| {
            let image = push_support(s, f);
            *target_ids
                .get(image.as_slice())
                .expect("pushed point lands on the target lattice")
        })
        .collect();
    let map = SimplicialMap::new(&cut.complex, &base.complex, pushed)?;
    Ok(PullbackSubdivision { base, source: cut, map })
}
