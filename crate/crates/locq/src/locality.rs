//! Integer lattice placements of code qubits and exhaustive locality
//! certification.
//!
//! A [`Placement`] pins every qubit of a code to a lattice point. Locality is
//! never assumed: [`certify_local`] measures it — the worst ℓ¹ distance
//! between qubits sharing a check, and the worst distance from the origin
//! relative to the cube a size-V code should fit in. Placements come from
//! three sources: [`fold_torus`] folds the natural toric layout so the
//! wraparound identifications become geometrically short, [`placement_from_embedding`]
//! snaps an embedded complex to a fine lattice, and [`pad_code`] grows a
//! placed code to a target volume with a logically inert filler block.

use crate::code::{check_graph, CodeError, CssCode};
use crate::complex::{cubical_torus_cells, CellComplex};
use crate::embed::EmbeddedComplex;
use crate::f2::BitMatrix;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LocalityError {
    #[error("no free lattice point within reach of {near:?} at spacing 1/{eps_inv}")]
    LatticeExhausted { near: Vec<i64>, eps_inv: u64 },
    #[error("cube of side {side} has only {free} free points for {needed} pad qubits")]
    CubeTooSmall {
        side: usize,
        free: usize,
        needed: usize,
    },
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Integer lattice points, one per qubit, in `n` dimensions.
///
/// The code a placement belongs to travels alongside it in every operation
/// here; `points.len()` must equal the code size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub n: usize,
    pub points: Vec<Vec<i64>>,
}

/// Exhaustively measured locality data for one (code, placement) pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalityCertificate {
    /// No two qubits share a lattice point.
    pub injective: bool,
    /// Max ℓ¹ distance over all pairs of qubits sharing a check.
    pub check_constant: u64,
    /// Max ℓ¹ norm over qubits, divided by V^{1/n}.
    pub cube_constant: f64,
    pub n: usize,
    pub v: usize,
}

/// One coordinate of the torus fold: `t` ranges over the doubled cycle
/// [0, 2l), and the identified far ends must land near each other. Plain
/// |t − l| does that but merges t with 2l − t; doubling the folded value
/// and keeping which side t came from in the low bit restores injectivity
/// while any two points at cyclic distance 1 stay within 3 of each other.
pub fn fold_coordinate(t: u64, l: u64) -> i64 {
    let folded = (t as i64 - l as i64).abs() * 2;
    folded + i64::from(t > l)
}

/// The toric code on k-cells of the cubical n-torus of side `l`, with every
/// qubit placed by folding its doubled barycenter coordinatewise.
///
/// A k-cell anchored at x spanning the axis set S has doubled barycenter
/// b = 2x + Σ_{d∈S} e_d, an integer point of the doubled torus [0, 2l)ⁿ.
pub fn fold_torus(n: usize, l: usize, k: usize) -> Result<(CssCode, Placement), CodeError> {
    let code = crate::code::toric_code(n, l, k)?;
    let points: Vec<Vec<i64>> = cubical_torus_cells(n, l, k)
        .into_iter()
        .map(|(s, x)| {
            (0..n)
                .map(|d| {
                    let b = 2 * x[d] as u64 + u64::from(s.contains(&d));
                    fold_coordinate(b, l as u64)
                })
                .collect()
        })
        .collect();
    debug_assert_eq!(points.len(), code.size());
    Ok((code, Placement { n, points }))
}

fn l1(a: &[i64], b: &[i64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).sum()
}

/// Measure locality exhaustively: injectivity over all qubit pairs (via
/// hashing), the check constant over every check-graph edge, the cube
/// constant over every qubit. Failures are recorded, never thrown.
pub fn certify_local(c: &CssCode, p: &Placement) -> LocalityCertificate {
    assert_eq!(p.points.len(), c.size(), "placement must cover the code");
    let distinct: FxHashSet<&[i64]> = p.points.iter().map(|pt| pt.as_slice()).collect();
    let check_constant = check_graph(c)
        .edges()
        .map(|(a, b)| l1(&p.points[a], &p.points[b]))
        .max()
        .unwrap_or(0);
    let norm = p
        .points
        .iter()
        .map(|pt| pt.iter().map(|x| x.unsigned_abs()).sum::<u64>())
        .max()
        .unwrap_or(0);
    let v = c.size();
    LocalityCertificate {
        injective: distinct.len() == p.points.len(),
        check_constant,
        cube_constant: norm as f64 / (v.max(1) as f64).powf(1.0 / p.n as f64),
        n: p.n,
        v,
    }
}

/// Lattice spacings are 1/eps_inv with eps_inv a power of two, starting at
/// 4 and halving the spacing until a unit ball holds at least 100·backward
/// lattice points.
pub fn lattice_spacing(n: usize, backward: usize) -> u64 {
    // Unit-ball volume: π for n = 2, 4π/3 for n = 3.
    let ball = match n {
        1 => 2.0,
        2 => std::f64::consts::PI,
        _ => 4.0 * std::f64::consts::PI / 3.0,
    };
    let mut eps_inv = 4u64;
    while ball * (eps_inv as f64).powi(n as i32) < (100 * backward.max(1)) as f64 {
        eps_inv *= 2;
    }
    eps_inv
}

/// Nearest-unoccupied assignment on the (1/eps_inv)-lattice: qubits are
/// processed in index order, each takes the free lattice point closest to
/// its barycenter (ties broken lexicographically), and marks it occupied.
/// Exhaustion is declared when nothing is free within 2 units.
pub(crate) fn snap_to_lattice(
    barys: &[Vec<f64>],
    n: usize,
    eps_inv: u64,
) -> Result<Vec<Vec<i64>>, LocalityError> {
    let max_shell = (2 * eps_inv) as i64;
    let mut occupied: FxHashSet<Vec<i64>> = FxHashSet::default();
    let mut out = Vec::with_capacity(barys.len());
    for bary in barys {
        assert_eq!(bary.len(), n);
        let target: Vec<f64> = bary.iter().map(|c| c * eps_inv as f64).collect();
        let base: Vec<i64> = target.iter().map(|c| c.round() as i64).collect();
        let mut best: Option<(f64, Vec<i64>)> = None;
        let mut shell = 0i64;
        while shell <= max_shell {
            // Points whose Chebyshev distance from base is exactly `shell`,
            // in lexicographic offset order.
            for_each_shell_point(n, shell, &mut |offset| {
                let pt: Vec<i64> = base.iter().zip(offset).map(|(b, o)| b + o).collect();
                if occupied.contains(&pt) {
                    return;
                }
                let d2: f64 = pt
                    .iter()
                    .zip(&target)
                    .map(|(&x, t)| (x as f64 - t) * (x as f64 - t))
                    .sum();
                if best.as_ref().is_none_or(|(bd, bp)| d2 < *bd || (d2 == *bd && pt < *bp)) {
                    best = Some((d2, pt));
                }
            });
            // A later shell can still hold a closer point (corners of shell
            // s are farther than faces of s+1), so scan until the next
            // shell's nearest point is beyond the best distance found.
            if let Some((bd, _)) = best {
                if (shell + 1) as f64 - 0.5 > bd.sqrt() {
                    break;
                }
            }
            shell += 1;
        }
        match best {
            Some((_, pt)) => {
                occupied.insert(pt.clone());
                out.push(pt);
            }
            None => {
                return Err(LocalityError::LatticeExhausted {
                    near: base,
                    eps_inv,
                })
            }
        }
    }
    Ok(out)
}

/// Visit every offset with ℓ∞ norm exactly `shell`, lexicographically.
fn for_each_shell_point(n: usize, shell: i64, visit: &mut impl FnMut(&[i64])) {
    let mut offset = vec![0i64; n];
    fn rec(
        n: usize,
        shell: i64,
        d: usize,
        on_boundary: bool,
        offset: &mut Vec<i64>,
        visit: &mut impl FnMut(&[i64]),
    ) {
        if d == n {
            if on_boundary {
                visit(offset);
            }
            return;
        }
        for v in -shell..=shell {
            offset[d] = v;
            rec(n, shell, d + 1, on_boundary || v.abs() == shell, offset, visit);
        }
    }
    rec(n, shell, 0, shell == 0, &mut offset, visit);
}

/// Snap with one automatic retry at half the spacing.
pub(crate) fn snap_with_retry(
    barys: &[Vec<f64>],
    n: usize,
    eps_inv: u64,
) -> Result<(Vec<Vec<i64>>, u64), LocalityError> {
    match snap_to_lattice(barys, n, eps_inv) {
        Ok(points) => Ok((points, eps_inv)),
        Err(LocalityError::LatticeExhausted { .. }) => {
            snap_to_lattice(barys, n, eps_inv * 2).map(|points| (points, eps_inv * 2))
        }
        Err(e) => Err(e),
    }
}

/// Snap an embedded complex to an integer placement for the code built on
/// its k-cells. Each qubit goes to the free lattice point nearest the image
/// barycenter of its cell; the spacing comes from [`lattice_spacing`] so a
/// unit ball holds at least 100·backward points, and coordinates are
/// returned rescaled to integers. Returns the placement together with the
/// inverse spacing actually used (one automatic halving retry).
pub fn placement_from_embedding(
    c: &CssCode,
    x: &CellComplex,
    k: usize,
    e: &EmbeddedComplex,
) -> Result<(Placement, u64), LocalityError> {
    assert_eq!(
        c.size(),
        x.cells(k),
        "code qubits must be the k-cells of the complex"
    );
    let n = e.coords.first().map_or(0, |c| c.len());
    // Original vertices keep their identifiers through subdivision: vertex v
    // of x is vertex v of the embedded complex.
    let barys: Vec<Vec<f64>> = (0..x.cells(k))
        .map(|i| {
            let vs = x.vertices_of(k, i);
            let mut b = vec![0.0; n];
            for &v in vs.iter() {
                for (bd, cd) in b.iter_mut().zip(&e.coords[v]) {
                    *bd += cd;
                }
            }
            for bd in &mut b {
                *bd /= vs.len() as f64;
            }
            b
        })
        .collect();
    let eps_inv = lattice_spacing(n, e.certificate.backward);
    let (points, used) = snap_with_retry(&barys, n, eps_inv)?;
    Ok((Placement { n, points }, used))
}

/// Walk the cube [0, side)ⁿ one lattice point at a time: the first axis
/// sweeps fastest and reverses direction each time a higher axis steps, so
/// consecutive points always differ by exactly one unit.
fn serpentine_point(side: usize, n: usize, idx: usize) -> Vec<i64> {
    let mut digits = Vec::with_capacity(n);
    let mut t = idx;
    for _ in 0..n {
        digits.push(t % side);
        t /= side;
    }
    let mut pt = vec![0i64; n];
    for d in (0..n).rev() {
        let above: usize = digits[d + 1..].iter().sum();
        pt[d] = if above % 2 == 0 {
            digits[d] as i64
        } else {
            (side - 1 - digits[d]) as i64
        };
    }
    pt
}

/// Grow a placed code to `target` qubits by direct-summing a repetition
/// path: the pad qubits are the edges of a path, its checks the path
/// vertices, so the block has full-rank checks — no kernel, no homology, no
/// logical operators — and the original dimension and both distances are
/// preserved exactly. Pad qubits walk a serpentine through the free points
/// of the cube of side ⌈(2·target)^{1/n}⌉.
pub fn pad_code(
    c: &CssCode,
    p: &Placement,
    target: usize,
) -> Result<(CssCode, Placement), LocalityError> {
    let side = (1..)
        .find(|s: &usize| s.checked_pow(p.n as u32).is_some_and(|v| v >= 2 * target))
        .unwrap();
    pad_onto_cube(c, p, target, side)
}

/// [`pad_code`] with the cube side explicit.
pub(crate) fn pad_onto_cube(
    c: &CssCode,
    p: &Placement,
    target: usize,
    side: usize,
) -> Result<(CssCode, Placement), LocalityError> {
    assert_eq!(p.points.len(), c.size(), "placement must cover the code");
    assert!(target >= c.size(), "target volume below current size");
    let q = c.size();
    let pad = target - q;
    if pad == 0 {
        return Ok((c.clone(), p.clone()));
    }
    let n = p.n;

    // Path block: `pad` edge qubits, `pad`+1 vertex checks; check j touches
    // edges j−1 and j.
    let support: Vec<Vec<usize>> = (0..=pad)
        .map(|j| {
            let mut row = Vec::with_capacity(2);
            if j > 0 {
                row.push(j - 1);
            }
            if j < pad {
                row.push(j);
            }
            row
        })
        .collect();
    let block = BitMatrix::from_support(pad + 1, pad, &support).expect("path incidence shape");
    let h1 = c
        .h1
        .hstack(&BitMatrix::zeros(c.h1.rows(), pad))
        .vstack(&BitMatrix::zeros(pad + 1, q).hstack(&block));
    let h2 = c.h2.hstack(&BitMatrix::zeros(c.h2.rows(), pad));
    let code = CssCode::new(h1, h2)?;

    let occupied: FxHashSet<&[i64]> = p.points.iter().map(|pt| pt.as_slice()).collect();
    let mut points = p.points.clone();
    let mut placed = 0;
    for idx in 0..side.pow(n as u32) {
        if placed == pad {
            break;
        }
        let pt = serpentine_point(side, n, idx);
        if occupied.contains(pt.as_slice()) {
            continue;
        }
        points.push(pt);
        placed += 1;
    }
    if placed < pad {
        return Err(LocalityError::CubeTooSmall {
            side,
            free: placed,
            needed: pad,
        });
    }
    Ok((code, Placement { n, points }))
}
