//! The staged embedding pipeline and the general-position perturbation.
//!
//! Stages of [`gg_embed`], in order: color the 1-skeleton, place one cap
//! per color on a sphere, drop every vertex into its cap (resampling while
//! any unit ball sees too many same-color cells), rescale so subdivided
//! pieces come out unit-sized, subdivide, perturb the subdivision vertices
//! (resampling while any unit ball sees too many distinct original cells),
//! subdivide once more, certify. Every random draw comes from a stream
//! keyed by (seed, stage, round), so a run is a pure function of its input
//! and seed.

use super::caps::place_caps;
use super::{
    certify_with_groups, maximal_cells, EmbedError, EmbedParams, EmbedTrace, EmbeddedComplex,
};
use crate::complex::{compose_subdivisions, edgewise_subdivide, CellComplex, ComplexError};
use crate::geometry::{cells_meeting, dilate_block, point_distance, simplex_distance};
use crate::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::{FxHashMap, FxHashSet};

/// Cap on the number of top-dimensional pieces after all subdivision. The
/// radius formula can ask for far more than any machine should build; when
/// it does, the subdivision is clamped and the trace says so.
const MAX_PIECES: usize = 1_000_000;

/// Minimum cap-center separation demanded of the layout, as a fraction of
/// the sphere radius.
const CAP_SEPARATION: f64 = 0.5;

/// Crowding coefficient for the cap stage: no unit ball may meet more than
/// c1·max(ln V, log_floor) cells of one color class.
const C1: f64 = 8.0;

/// One independent random stream per (stage, round).
fn stream(seed: u64, stage: u64, round: u64) -> ChaCha8Rng {
    let mut z = seed
        ^ stage.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ round.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

/// Uniform point of the `dim`-ball of the given radius.
fn ball_offset(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> Vec<f64> {
    loop {
        let p: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0f64)).collect();
        if p.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return p.into_iter().map(|x| x * radius).collect();
        }
    }
}

/// Floor cell of a point, padded to the grid's three axes.
fn floor_cell(p: &[f64]) -> [i64; 3] {
    let mut c = [0i64; 3];
    for (t, x) in c.iter_mut().zip(p) {
        *t = x.floor() as i64;
    }
    c
}

/// Embed `x` into R^n on the unit grid. See the module docs for the stage
/// structure. Sources must be simplicial of dimension 1 or 2, strictly
/// below `params.n` ≤ 3.
pub fn gg_embed(x: &CellComplex, params: &EmbedParams) -> Result<EmbeddedComplex, EmbedError> {
    let m = x.dims();
    let n = params.n;
    if m == 0 || m >= n || n > 3 {
        return Err(EmbedError::DimensionError { m, n });
    }
    if !x.is_simplicial() {
        return Err(EmbedError::Complex(ComplexError::NotSimplicial));
    }
    assert!(
        params.delta > 0.0 && params.delta < 0.5,
        "perturbation radius must sit in (0, 1/2)"
    );
    assert!(params.log_floor >= 2.0, "log floor below 2");
    let v = x.volume();
    if v == 1 {
        // A single top cell has nothing to be spread away from: place it
        // at unit scale as-is.
        return clamp_single(x, params);
    }
    let vf = v as f64;
    let l = vf.ln().max(params.log_floor);
    let r_formula = vf.powf(1.0 / (n - m) as f64) * l.powi(n as i32 + 1);

    let skel = Graph::from_edges(x.cells(0), x.vertex_sets(1).iter().map(|e| (e[0], e[1])));
    let colors = skel.greedy_color();
    let n_colors = colors.iter().copied().max().unwrap_or(0) + 1;
    let r0 = vf.powf(1.0 / (n - m) as f64);
    let caps = place_caps(n, r0, n_colors, CAP_SEPARATION)?;

    // The cells every counting stage talks about: maximal cells of the
    // input, each classed by its sorted set of vertex colors.
    let maximal = maximal_cells(x);
    let mut class_ids: FxHashMap<Vec<usize>, u32> = FxHashMap::default();
    let mut class_of: Vec<u32> = Vec::with_capacity(maximal.len());
    for &(k, i) in &maximal {
        let mut cs: Vec<usize> = x.vertices_of(k, i).iter().map(|&w| colors[w]).collect();
        cs.sort_unstable();
        cs.dedup();
        let next = class_ids.len() as u32;
        class_of.push(*class_ids.entry(cs).or_insert(next));
    }
    let n_classes = class_ids.len();

    // Stage 1: vertices into caps. The acceptance event is that no unit
    // ball meets more than c1·max(ln V, log_floor) same-class cells. The
    // check counts exactly, but on a grid coarsened by a factor g ≥ 1 so
    // sphere-scale images stay cheap to rasterize; a unit ball fits inside
    // the 3^n block of g-cells around it, so an accepted draw satisfies
    // the unit-ball event a fortiori.
    let threshold1 = (C1 * l).floor() as usize;
    let coarse = (r0 / 32.0).ceil().max(1.0);
    let mut coords0: Vec<Vec<f64>> = vec![Vec::new(); x.cells(0)];
    let mut redraw: Vec<usize> = (0..x.cells(0)).collect();
    let mut cap_rounds = 0usize;
    loop {
        let mut rng = stream(params.seed, 1, cap_rounds as u64);
        for &w in &redraw {
            coords0[w] = caps[colors[w]].sample(&mut rng);
        }
        let (worst, worst_cell, crowded) = stage1_crowding(
            x, &maximal, &class_of, n_classes, &coords0, coarse, n, threshold1,
        );
        if worst <= threshold1 {
            break;
        }
        cap_rounds += 1;
        if cap_rounds > params.max_resamples {
            return Err(EmbedError::ResampleBudgetExhausted {
                stage: 1,
                worst_ball: worst_cell,
                count: worst,
            });
        }
        let mut verts: Vec<usize> = crowded
            .iter()
            .flat_map(|&ci| x.vertices_of(maximal[ci].0, maximal[ci].1).into_owned())
            .collect();
        verts.sort_unstable();
        verts.dedup();
        redraw = verts;
    }

    // Subdivision factor: what the radius formula asks for, clamped by the
    // piece budget; split so the final factor-2 pass happens after the
    // perturbation. The scale makes the longest piece edge 1 - 2·perturb,
    // so perturbed pieces still fit inside unit balls.
    let r_window = r_formula.round().max(1.0);
    let budget = ((MAX_PIECES / v) as f64).powf(1.0 / m as f64).floor().max(1.0);
    let r_goal = r_window.min(budget) as u64;
    let (r_pre, r_post) = if r_goal >= 2 {
        ((r_goal / 2).max(1), 2)
    } else {
        (1, 1)
    };
    let r_actual = r_pre * r_post;
    let capped = (r_actual as f64) < r_window;
    let max_edge = x
        .vertex_sets(1)
        .iter()
        .map(|e| point_distance(&coords0[e[0]], &coords0[e[1]]))
        .fold(0.0f64, f64::max);
    assert!(max_edge > 0.0, "cap layout collapsed an edge");
    let scale = (1.0 - 2.0 * params.delta) * r_actual as f64 / max_edge;
    let coords1: Vec<Vec<f64>> = coords0
        .iter()
        .map(|p| p.iter().map(|c| c * scale).collect())
        .collect();
    let sub_pre = edgewise_subdivide(x, r_pre)?;
    let coords2 = sub_pre.interpolate(&coords1);

    // Stage 3: perturb every subdivision vertex inside a small ball and
    // resample while some grid cell's 3^n neighborhood meets more than
    // (n+1)·n_colors distinct original cells. Counting matches the final
    // certificate's backward count exactly — the later subdivision refines
    // pieces without moving the image.
    let threshold3 = (n + 1) * n_colors;
    let mut st = Stage3::build(&sub_pre, &maximal, &class_of, n_classes, n);
    let mut offsets: Vec<Vec<f64>> = vec![Vec::new(); coords2.len()];
    let mut coords3 = coords2.clone();
    let mut redraw: Vec<usize> = (0..coords2.len()).collect();
    let mut perturb_rounds = 0usize;
    let mut violation_fractions = Vec::new();
    let worst_ball_count;
    loop {
        let mut rng = stream(params.seed, 3, perturb_rounds as u64);
        for &w in &redraw {
            offsets[w] = ball_offset(&mut rng, n, params.delta);
            coords3[w] = coords2[w]
                .iter()
                .zip(&offsets[w])
                .map(|(a, b)| a + b)
                .collect();
        }
        let touched = st.groups_of_vertices(&redraw);
        st.update_groups(&touched, &coords3);
        let violations = st.violating_cells(threshold3);
        violation_fractions.push(violations.len() as f64 / st.occupied().max(1) as f64);
        if violations.is_empty() {
            worst_ball_count = st.max_count();
            break;
        }
        perturb_rounds += 1;
        if perturb_rounds > params.max_resamples {
            let (cell, count) = violations
                .iter()
                .max_by_key(|&&(_, c)| c)
                .copied()
                .unwrap();
            return Err(EmbedError::ResampleBudgetExhausted {
                stage: 3,
                worst_ball: cell,
                count: count as usize,
            });
        }
        redraw = st.vertices_near(&violations);
    }
    let crowded_tuples = st.same_class_tuples(n);

    // Final halving subdivision; the piecewise-linear image is unchanged,
    // the pieces just get small enough to sit inside unit balls.
    let sub_post = edgewise_subdivide(&sub_pre.complex, r_post)?;
    let coords_final = sub_post.interpolate(&coords3);
    let total = compose_subdivisions(&sub_pre, sub_post);

    let final_pieces = maximal_cells(&total.complex);
    let mut group_index: FxHashMap<(usize, usize), usize> = FxHashMap::default();
    for (gi, &cell) in maximal.iter().enumerate() {
        group_index.insert(cell, gi);
    }
    let groups: Vec<usize> = final_pieces
        .iter()
        .map(|&(k, i)| group_index[&total.cell_carrier[k][i]])
        .collect();
    let certificate = certify_with_groups(
        &coords_final,
        &total.complex,
        &final_pieces,
        &groups,
        maximal.len(),
    );
    let trace = EmbedTrace {
        cap_rounds,
        perturb_rounds,
        violation_fractions,
        subdivision: r_actual as usize,
        capped,
        worst_ball_count,
        crowded_tuples,
    };
    let complex = total.complex.with_coords(coords_final.clone())?;
    Ok(EmbeddedComplex {
        complex,
        coords: coords_final,
        certificate,
        trace,
    })
}

/// Volume-1 degenerate case: the complex goes in at unit scale, top cell
/// on the standard simplex, any stray vertices spaced out along an axis.
fn clamp_single(x: &CellComplex, params: &EmbedParams) -> Result<EmbeddedComplex, EmbedError> {
    let m = x.dims();
    let n = params.n;
    let top = x.vertices_of(m, 0).into_owned();
    let h = 3.0f64.sqrt() / 2.0;
    let unit: [[f64; 3]; 3] = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, h, 0.0]];
    let mut coords = vec![Vec::new(); x.cells(0)];
    let mut stray = 0;
    for w in 0..x.cells(0) {
        coords[w] = match top.iter().position(|&t| t == w) {
            Some(p) => unit[p][..n].to_vec(),
            None => {
                stray += 1;
                let mut c = vec![0.0; n];
                c[0] = -2.0 * stray as f64;
                c
            }
        };
    }
    let certificate = super::certify_coarse(&coords, x);
    let worst = certificate.backward;
    let complex = x.clone().with_coords(coords.clone())?;
    Ok(EmbeddedComplex {
        complex,
        coords,
        certificate,
        trace: EmbedTrace {
            cap_rounds: 0,
            perturb_rounds: 0,
            violation_fractions: Vec::new(),
            subdivision: 1,
            capped: false,
            worst_ball_count: worst,
            crowded_tuples: 0,
        },
    })
}

/// Coordinates of the centroid of one cell's image.
fn cell_centroid(x: &CellComplex, coords: &[Vec<f64>], (k, i): (usize, usize)) -> Vec<f64> {
    let vs = x.vertices_of(k, i);
    let dim = coords[vs[0]].len();
    let mut c = vec![0.0; dim];
    for &w in vs.iter() {
        for (t, a) in c.iter_mut().zip(&coords[w]) {
            *t += a / vs.len() as f64;
        }
    }
    c
}

/// For every maximal cell, the list of same-class cells within `reach` of
/// it (itself included). The length of a list bounds how many of them one
/// unit-cell neighborhood could meet.
pub(super) fn stage1_crowding(
    x: &CellComplex,
    maximal: &[(usize, usize)],
    class_of: &[u32],
    n_classes: usize,
    coords: &[Vec<f64>],
    coarse: f64,
    n: usize,
    threshold: usize,
) -> (usize, [i64; 3], Vec<usize>) {
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (ci, &cl) in class_of.iter().enumerate() {
        by_class[cl as usize].push(ci);
    }
    let mut worst = 0usize;
    let mut worst_cell = [0i64; 3];
    let mut crowded: Vec<usize> = Vec::new();
    for members in &by_class {
        // Dilated footprint per member on the coarsened grid: the blocks
        // whose 3^n neighborhood the image meets. Dividing the coordinates
        // by the coarsening factor turns the unit-grid rasterizer into a
        // coarse-grid one.
        let mut foot: Vec<Vec<[i64; 3]>> = Vec::with_capacity(members.len());
        for &ci in members {
            let (k, i) = maximal[ci];
            let scaled: Vec<Vec<f64>> = x
                .vertices_of(k, i)
                .iter()
                .map(|&w| coords[w].iter().map(|c| c / coarse).collect())
                .collect();
            let refs: Vec<&[f64]> = scaled.iter().map(|v| v.as_slice()).collect();
            let mut cells = dilate_block(&cells_meeting(&refs), n);
            cells.sort_unstable();
            cells.dedup();
            foot.push(cells);
        }
        let mut counts: FxHashMap<[i64; 3], u32> = FxHashMap::default();
        for cells in &foot {
            for &c in cells {
                *counts.entry(c).or_insert(0) += 1;
            }
        }
        let mut entries: Vec<([i64; 3], u32)> = counts.into_iter().collect();
        entries.sort_unstable();
        for &(c, v) in &entries {
            if v as usize > worst {
                worst = v as usize;
                worst_cell = c;
            }
            if v as usize > threshold {
                for (cells, &ci) in foot.iter().zip(members.iter()) {
                    if cells.binary_search(&c).is_ok() {
                        crowded.push(ci);
                    }
                }
            }
        }
    }
    crowded.sort_unstable();
    crowded.dedup();
    (worst, worst_cell, crowded)
}

/// Incremental per-grid-cell counting of distinct original cells, grouped
/// rasterization caches included, for the perturbation stage.
struct Stage3 {
    /// Maximal pieces of the subdivided complex, and per piece the indices
    /// of its vertices there.
    piece_verts: Vec<Vec<usize>>,
    /// Piece → index of the original maximal cell carrying it.
    piece_group: Vec<u32>,
    /// Group → its pieces.
    group_pieces: Vec<Vec<u32>>,
    /// Subdivision vertex → incident pieces.
    vertex_pieces: Vec<Vec<u32>>,
    /// Group → color class of the original cell.
    group_class: Vec<u32>,
    n_classes: usize,
    ambient: usize,
    /// Group → sorted raster of its image (undilated).
    raster: Vec<Vec<[i64; 3]>>,
    /// Grid cell → number of groups whose dilated raster covers it.
    counts: FxHashMap<[i64; 3], u32>,
}

impl Stage3 {
    fn build(
        sub: &crate::complex::Subdivision,
        maximal: &[(usize, usize)],
        class_of: &[u32],
        n_classes: usize,
        ambient: usize,
    ) -> Stage3 {
        let mut group_index: FxHashMap<(usize, usize), u32> = FxHashMap::default();
        for (gi, &cell) in maximal.iter().enumerate() {
            group_index.insert(cell, gi as u32);
        }
        let pieces = maximal_cells(&sub.complex);
        let mut piece_verts = Vec::with_capacity(pieces.len());
        let mut piece_group = Vec::with_capacity(pieces.len());
        let mut group_pieces = vec![Vec::new(); maximal.len()];
        let mut vertex_pieces = vec![Vec::new(); sub.complex.cells(0)];
        for (pi, &(k, i)) in pieces.iter().enumerate() {
            let g = group_index[&sub.cell_carrier[k][i]];
            piece_group.push(g);
            group_pieces[g as usize].push(pi as u32);
            let vs = sub.complex.vertices_of(k, i).into_owned();
            for &w in &vs {
                vertex_pieces[w].push(pi as u32);
            }
            piece_verts.push(vs);
        }
        Stage3 {
            piece_verts,
            piece_group,
            group_pieces,
            vertex_pieces,
            group_class: class_of.to_vec(),
            n_classes,
            ambient,
            raster: vec![Vec::new(); maximal.len()],
            counts: FxHashMap::default(),
        }
    }

    /// Distinct groups touching any piece of the given vertices.
    fn groups_of_vertices(&self, verts: &[usize]) -> Vec<u32> {
        let mut gs: Vec<u32> = verts
            .iter()
            .flat_map(|&w| self.vertex_pieces[w].iter())
            .map(|&p| self.piece_group[p as usize])
            .collect();
        gs.sort_unstable();
        gs.dedup();
        gs
    }

    /// Re-rasterize the given groups under new coordinates, updating the
    /// per-cell counts by removing the old dilated footprint and adding
    /// the new one.
    fn update_groups(&mut self, groups: &[u32], coords: &[Vec<f64>]) {
        for &g in groups {
            for cell in dilate_block(&self.raster[g as usize], self.ambient) {
                if let Some(c) = self.counts.get_mut(&cell) {
                    *c -= 1;
                    if *c == 0 {
                        self.counts.remove(&cell);
                    }
                }
            }
            let mut cells = Vec::new();
            for &p in &self.group_pieces[g as usize] {
                let refs: Vec<&[f64]> = self.piece_verts[p as usize]
                    .iter()
                    .map(|&w| coords[w].as_slice())
                    .collect();
                cells.extend(cells_meeting(&refs));
            }
            cells.sort_unstable();
            cells.dedup();
            for cell in dilate_block(&cells, self.ambient) {
                *self.counts.entry(cell).or_insert(0) += 1;
            }
            self.raster[g as usize] = cells;
        }
    }

    fn occupied(&self) -> usize {
        self.counts.len()
    }

    fn max_count(&self) -> usize {
        self.counts.values().copied().max().unwrap_or(0) as usize
    }

    /// Cells over the threshold, sorted for determinism.
    fn violating_cells(&self, threshold: usize) -> Vec<([i64; 3], u32)> {
        let mut v: Vec<([i64; 3], u32)> = self
            .counts
            .iter()
            .filter(|&(_, &c)| c as usize > threshold)
            .map(|(&cell, &c)| (cell, c))
            .collect();
        v.sort_unstable();
        v
    }

    /// Subdivision vertices of every group whose dilated raster touches a
    /// violating cell — the variables of the violated events.
    fn vertices_near(&self, violations: &[([i64; 3], u32)]) -> Vec<usize> {
        let bad: FxHashSet<[i64; 3]> = violations.iter().map(|&(c, _)| c).collect();
        let mut verts = Vec::new();
        for (g, cells) in self.raster.iter().enumerate() {
            let touches = dilate_block(cells, self.ambient)
                .into_iter()
                .any(|c| bad.contains(&c));
            if touches {
                for &p in &self.group_pieces[g] {
                    verts.extend(self.piece_verts[p as usize].iter().copied());
                }
            }
        }
        verts.sort_unstable();
        verts.dedup();
        verts
    }

    /// Number of same-class (n+1)-tuples of groups meeting a common cell
    /// neighborhood — the event the probabilistic analysis bounds, reported
    /// alongside the per-ball count the pipeline certifies.
    fn same_class_tuples(&self, n: usize) -> u64 {
        let mut total = 0u64;
        for class in 0..self.n_classes {
            let mut per_cell: FxHashMap<[i64; 3], u64> = FxHashMap::default();
            for (g, cells) in self.raster.iter().enumerate() {
                if self.group_class[g] as usize != class {
                    continue;
                }
                for cell in dilate_block(cells, self.ambient) {
                    *per_cell.entry(cell).or_insert(0) += 1;
                }
            }
            for &count in per_cell.values() {
                total += binomial(count, n as u64 + 1);
            }
        }
        total
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut out = 1u64;
    for i in 0..k {
        out = out.saturating_mul(n - i) / (i + 1);
    }
    out
}

/// Perturb vertex images into general position: afterwards every two cells
/// of `y` sharing no vertex lie at distance at least `min_sep`, and every
/// vertex has moved at most 1/100 from where it started. Only the vertices
/// of violating pairs are redrawn, each time relative to its original
/// position. Requires 2·dims(y) < ambient so transversality has room; any
/// ambient dimension is accepted.
pub fn perturb_general_position(
    coords: &[Vec<f64>],
    y: &CellComplex,
    min_sep: f64,
    params: &EmbedParams,
) -> Result<Vec<Vec<f64>>, EmbedError> {
    let ambient = coords.first().map_or(0, Vec::len);
    let m = y.dims();
    if 2 * m + 1 > ambient {
        return Err(EmbedError::DimensionError { m, n: ambient });
    }
    assert_eq!(coords.len(), y.cells(0), "one coordinate per vertex");
    let cells: Vec<(usize, usize)> = (0..=m)
        .flat_map(|k| (0..y.cells(k)).map(move |i| (k, i)))
        .collect();
    let vsets: Vec<Vec<usize>> = cells
        .iter()
        .map(|&(k, i)| y.vertices_of(k, i).into_owned())
        .collect();
    let disjoint_pairs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|a| (a + 1..cells.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| {
            vsets[a]
                .iter()
                .all(|w| vsets[b].binary_search(w).is_err())
        })
        .collect();
    let mut current = coords.to_vec();
    let mut rounds = 0usize;
    loop {
        let mut worst: Option<(f64, usize)> = None;
        let mut violating: Vec<usize> = Vec::new();
        for (pi, &(a, b)) in disjoint_pairs.iter().enumerate() {
            let ra: Vec<&[f64]> = vsets[a].iter().map(|&w| current[w].as_slice()).collect();
            let rb: Vec<&[f64]> = vsets[b].iter().map(|&w| current[w].as_slice()).collect();
            let d = simplex_distance(&ra, &rb);
            if d < min_sep {
                violating.push(pi);
                if worst.map_or(true, |(wd, _)| d < wd) {
                    worst = Some((d, pi));
                }
            }
        }
        if violating.is_empty() {
            return Ok(current);
        }
        rounds += 1;
        if rounds > params.max_resamples {
            let (_, pi) = worst.unwrap();
            let (a, b) = disjoint_pairs[pi];
            let mid: Vec<f64> = (0..ambient.min(3))
                .map(|d| (current[vsets[a][0]][d] + current[vsets[b][0]][d]) / 2.0)
                .collect();
            return Err(EmbedError::ResampleBudgetExhausted {
                stage: 0,
                worst_ball: floor_cell(&mid),
                count: violating.len(),
            });
        }
        let mut verts: Vec<usize> = violating
            .iter()
            .flat_map(|&pi| {
                let (a, b) = disjoint_pairs[pi];
                vsets[a].iter().chain(vsets[b].iter()).copied()
            })
            .collect();
        verts.sort_unstable();
        verts.dedup();
        let mut rng = stream(params.seed, 5, rounds as u64);
        for &w in &verts {
            let off = ball_offset(&mut rng, ambient, 0.01);
            current[w] = coords[w].iter().zip(&off).map(|(a, b)| a + b).collect();
        }
    }
}
