//! Coarse embeddings of low-dimensional complexes into unit-scale Euclidean
//! space, with exhaustively checked quality certificates.
//!
//! The centerpiece is [`gg_embed`]: color the vertices, map each color class
//! into its own spherical cap, resample until no unit ball sees a crowd of
//! same-color images, then subdivide and perturb so every piece of the
//! complex sits inside a unit ball. Certificates measure the *original*
//! cells through their piecewise-linear images: `forward` asks how many grid
//! cells one image meets, `backward` asks how many images come near one grid
//! cell. Both are computed by full rasterization — no sampling — so a
//! certificate is a statement about every cell of the grid.

mod caps;
mod pipeline;

pub use caps::{place_caps, Cap};
pub use pipeline::{gg_embed, perturb_general_position};

use crate::complex::CellComplex;
use crate::geometry::{cells_meeting, dilate_block, equilateral_distortion};
use crate::graph::Graph;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

/// Tuning knobs for [`gg_embed`] and [`perturb_general_position`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedParams {
    /// Ambient dimension of the target (2 or 3; must exceed the source).
    pub n: usize,
    /// Radius of the ball each subdivision vertex is perturbed within; the
    /// same amount is reserved as scale slack so perturbed pieces still fit
    /// inside unit balls. Must sit in (0, 1/2).
    pub delta: f64,
    /// Lower clamp applied to ln(volume) everywhere a size formula takes a
    /// logarithm; at least 2, so tiny inputs don't degenerate.
    pub log_floor: f64,
    /// Certificate gate: the final backward count must stay at or below
    /// this for the embedding to be accepted.
    pub a_max: usize,
    /// Total resampling rounds allowed in one stage before giving up.
    pub max_resamples: usize,
    pub seed: u64,
}

impl EmbedParams {
    /// Defaults sized for `x`: delta 1/8, log floor 2, backward gate
    /// (n+1)·(degree+1)·4, resample budget 10·V·max(ln V, 2), seed 7.
    pub fn for_complex(x: &CellComplex, n: usize) -> EmbedParams {
        let v = x.volume().max(1) as f64;
        let l = v.ln().max(2.0);
        EmbedParams {
            n,
            delta: 0.125,
            log_floor: 2.0,
            a_max: (n + 1) * (x.degree() + 1) * 4,
            max_resamples: (10.0 * v * l).ceil() as usize,
            seed: 7,
        }
    }
}

/// Exhaustive quality bounds for one map into the unit grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoarseCertificate {
    /// Max over source cells of how many unit grid cells the image meets.
    pub forward: usize,
    /// Max over grid cells of how many source cells' images meet the
    /// cell's 3^n neighborhood.
    pub backward: usize,
    /// Worst stretch of any edge or triangle image measured against the
    /// unit-edge equilateral model.
    pub bilipschitz_ratio: f64,
    /// Radius of the coordinate ball containing the whole image.
    pub radius: f64,
    /// True when every source cell and grid cell was enumerated.
    pub exhaustive: bool,
}

/// What the randomized stages of [`gg_embed`] actually did.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedTrace {
    /// Resampling rounds spent placing vertices into caps.
    pub cap_rounds: usize,
    /// Resampling rounds spent perturbing the subdivided complex.
    pub perturb_rounds: usize,
    /// Fraction of occupied grid cells violating the crowding bound, one
    /// entry per perturbation round starting with the initial draw; decays
    /// to zero on acceptance.
    pub violation_fractions: Vec<f64>,
    /// Pieces per original edge after all subdivision.
    pub subdivision: usize,
    /// True when the cell budget forced `subdivision` below what the
    /// radius formula asks for.
    pub capped: bool,
    /// At acceptance: the worst per-ball count of distinct original cells,
    /// and the number of same-color (n+1)-tuples sharing a ball. The
    /// analysis bounds the tuples; the pipeline certifies the count.
    pub worst_ball_count: usize,
    pub crowded_tuples: u64,
}

/// A subdivided complex embedded in R^n together with its certificate.
#[derive(Debug, Clone)]
pub struct EmbeddedComplex {
    /// The subdivided complex; every piece fits inside a unit ball.
    pub complex: CellComplex,
    /// One coordinate vector per vertex of `complex`.
    pub coords: Vec<Vec<f64>>,
    pub certificate: CoarseCertificate,
    pub trace: EmbedTrace,
}

#[derive(Debug, thiserror::Error)]
pub enum EmbedError {
    #[error("source dimension {m} does not fit in ambient dimension {n}")]
    DimensionError { m: usize, n: usize },
    #[error("cap layout infeasible: {0}")]
    InfeasibleCaps(String),
    #[error("resampling budget exhausted in stage {stage}: ball {worst_ball:?} still holds {count}")]
    ResampleBudgetExhausted {
        stage: usize,
        worst_ball: [i64; 3],
        count: usize,
    },
    #[error("composition bound violated: {0}")]
    CompositionBoundViolated(String),
    #[error("embedding does not match the claimed source complex: {0}")]
    SourceMismatch(String),
    #[error(transparent)]
    Complex(#[from] crate::complex::ComplexError),
}

/// Recompute a finished embedding's certificate from scratch, grouping
/// subdivision pieces by the original cell that carries them — the same
/// aggregation [`gg_embed`] certified with. `x` must be the complex the
/// embedding came from; the subdivision is replayed to recover the
/// piece-to-original map, and a structural mismatch is an error rather
/// than a silent wrong answer.
pub fn recertify(x: &CellComplex, e: &EmbeddedComplex) -> Result<CoarseCertificate, EmbedError> {
    let r = e.trace.subdivision;
    if r <= 1 {
        if e.complex.cells(0) != x.cells(0) {
            return Err(EmbedError::SourceMismatch(format!(
                "{} vertices against {}",
                e.complex.cells(0),
                x.cells(0)
            )));
        }
        return Ok(certify_coarse(&e.coords, x));
    }
    let sub_pre = crate::complex::edgewise_subdivide(x, (r / 2) as u64)?;
    let sub_post = crate::complex::edgewise_subdivide(&sub_pre.complex, 2)?;
    let total = crate::complex::compose_subdivisions(&sub_pre, sub_post);
    if e.coords.len() != total.complex.cells(0)
        || total.complex.clone().with_coords(e.coords.clone())? != e.complex
    {
        return Err(EmbedError::SourceMismatch(
            "replayed subdivision disagrees with the stored complex".into(),
        ));
    }
    let maximal = maximal_cells(x);
    let mut group_index: FxHashMap<(usize, usize), usize> = FxHashMap::default();
    for (gi, &cell) in maximal.iter().enumerate() {
        group_index.insert(cell, gi);
    }
    let pieces = maximal_cells(&e.complex);
    let groups: Vec<usize> = pieces
        .iter()
        .map(|&(k, i)| group_index[&total.cell_carrier[k][i]])
        .collect();
    Ok(certify_with_groups(
        &e.coords,
        &e.complex,
        &pieces,
        &groups,
        maximal.len(),
    ))
}

/// Proper vertex coloring with at most maxdeg+1 colors; deterministic.
pub fn greedy_color(g: &Graph) -> Vec<usize> {
    g.greedy_color()
}

/// Cells of `x` that are not faces of any higher cell, as (dim, index).
/// Relies on closure: in a complex with all faces present, it is enough to
/// look one dimension up.
pub(crate) fn maximal_cells(x: &CellComplex) -> Vec<(usize, usize)> {
    let top = x.dims();
    let mut out = Vec::new();
    for k in 0..=top {
        if k == top {
            out.extend((0..x.cells(k)).map(|i| (k, i)));
            continue;
        }
        let mut covered = vec![false; x.cells(k)];
        for i in 0..x.cells(k + 1) {
            for &f in x.faces_of(k + 1, i) {
                covered[f] = true;
            }
        }
        out.extend(
            covered
                .iter()
                .enumerate()
                .filter(|(_, &c)| c == false)
                .map(|(i, _)| (k, i)),
        );
    }
    out
}

/// Certify the linear-on-cells map sending vertex `v` to `coords[v]`,
/// measured on the maximal cells of `x`. Exhaustive by construction.
pub fn certify_coarse(coords: &[Vec<f64>], x: &CellComplex) -> CoarseCertificate {
    let cells = maximal_cells(x);
    let groups: Vec<usize> = (0..cells.len()).collect();
    certify_with_groups(coords, x, &cells, &groups, cells.len())
}

/// Grouped certification: cells sharing a group id count as one source
/// object (the embedding pipeline groups subdivision pieces by the original
/// cell that carries them).
pub(crate) fn certify_with_groups(
    coords: &[Vec<f64>],
    x: &CellComplex,
    cells: &[(usize, usize)],
    group_of: &[usize],
    n_groups: usize,
) -> CoarseCertificate {
    let n = coords.first().map_or(0, Vec::len);
    assert!(n == 2 || n == 3, "grid certificates support ambient 2 or 3");
    let mut group_cells: Vec<Vec<[i64; 3]>> = vec![Vec::new(); n_groups];
    let mut bilipschitz: f64 = 0.0;
    for (&(k, i), &g) in cells.iter().zip(group_of) {
        let verts = x.vertices_of(k, i);
        let refs: Vec<&[f64]> = verts.iter().map(|&v| coords[v].as_slice()).collect();
        group_cells[g].extend(cells_meeting(&refs));
        if refs.len() >= 2 {
            bilipschitz = bilipschitz.max(equilateral_distortion(&refs));
        }
    }
    let mut forward = 0;
    let mut counts: FxHashMap<[i64; 3], u32> = FxHashMap::default();
    for cells in &mut group_cells {
        cells.sort_unstable();
        cells.dedup();
        forward = forward.max(cells.len());
        for cell in dilate_block(cells, n) {
            *counts.entry(cell).or_insert(0) += 1;
        }
    }
    let backward = counts.values().copied().max().unwrap_or(0) as usize;
    let radius = coords
        .iter()
        .map(|p| p.iter().map(|c| c * c).sum::<f64>().sqrt())
        .fold(0.0f64, f64::max);
    CoarseCertificate {
        forward,
        backward,
        bilipschitz_ratio: bilipschitz,
        radius,
        exhaustive: true,
    }
}

/// Check a measured certificate for a composite map against the product of
/// the certificates of its factors, returning the (forward, backward)
/// ratios. All three must be exhaustive for the comparison to mean
/// anything, and a ratio above 1 is a violation.
pub fn compose_certificates(
    a: &CoarseCertificate,
    b: &CoarseCertificate,
    measured: &CoarseCertificate,
) -> Result<(f64, f64), EmbedError> {
    if !(a.exhaustive && b.exhaustive && measured.exhaustive) {
        return Err(EmbedError::CompositionBoundViolated(
            "composition requires exhaustive certificates".into(),
        ));
    }
    let fwd = measured.forward as f64 / (a.forward as f64 * b.forward as f64);
    let bwd = measured.backward as f64 / (a.backward as f64 * b.backward as f64);
    if fwd > 1.0 || bwd > 1.0 {
        return Err(EmbedError::CompositionBoundViolated(format!(
            "measured ({}, {}) exceeds product bound ({}, {})",
            measured.forward,
            measured.backward,
            a.forward * b.forward,
            a.backward * b.backward
        )));
    }
    Ok((fwd, bwd))
}

#[cfg(test)]
mod tests;
