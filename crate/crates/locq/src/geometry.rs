//! Low-dimensional exact geometry: distances between simplices, unit-grid
//! rasterization, and distortion of affine simplex images.
//!
//! Simplices have at most three vertices — points, segments, triangles —
//! which is all the embedding pipeline produces, and lets every routine use
//! closed-form feature enumeration instead of iterative solvers. Distances
//! work in any ambient dimension (R^2 and R^3 take a specialized path, the
//! rest go through normal equations per feature pair); rasterization is
//! tied to the grid and supports ambient 2 and 3 only.

/// Euclidean distance between two points of equal dimension.
pub fn point_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn pad3(p: &[f64]) -> [f64; 3] {
    let mut out = [0.0; 3];
    out[..p.len()].copy_from_slice(p);
    out
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: [f64; 3], t: f64) -> [f64; 3] {
    [a[0] * t, a[1] * t, a[2] * t]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Closest point on segment [a, b] to p.
fn closest_on_segment(p: [f64; 3], a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    let ab = sub(b, a);
    let denom = dot(ab, ab);
    if denom == 0.0 {
        return a;
    }
    let t = (dot(sub(p, a), ab) / denom).clamp(0.0, 1.0);
    add(a, scale(ab, t))
}

fn point_segment(p: [f64; 3], a: [f64; 3], b: [f64; 3]) -> f64 {
    norm(sub(p, closest_on_segment(p, a, b)))
}

/// Minimum distance between segments [p1,q1] and [p2,q2].
fn segment_segment(p1: [f64; 3], q1: [f64; 3], p2: [f64; 3], q2: [f64; 3]) -> f64 {
    let d1 = sub(q1, p1);
    let d2 = sub(q2, p2);
    let r = sub(p1, p2);
    let a = dot(d1, d1);
    let e = dot(d2, d2);
    let f = dot(d2, r);
    // Degenerate segments fall back to point cases.
    if a == 0.0 && e == 0.0 {
        return norm(r);
    }
    if a == 0.0 {
        return point_segment(p1, p2, q2);
    }
    if e == 0.0 {
        return point_segment(p2, p1, q1);
    }
    let b = dot(d1, d2);
    let c = dot(d1, r);
    let denom = a * e - b * b;
    // Parameter of the infinite-line closest pair, clamped to the segments,
    // then re-projected once; this is the standard exact clamp dance.
    let mut s = if denom != 0.0 {
        ((b * f - c * e) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut t = (b * s + f) / e;
    if t < 0.0 {
        t = 0.0;
        s = (-c / a).clamp(0.0, 1.0);
    } else if t > 1.0 {
        t = 1.0;
        s = ((b - c) / a).clamp(0.0, 1.0);
    }
    let c1 = add(p1, scale(d1, s));
    let c2 = add(p2, scale(d2, t));
    norm(sub(c1, c2))
}

/// Distance from p to the closed triangle (a, b, c); handles degenerate
/// (collinear) triangles by falling back to the edges.
fn point_triangle(p: [f64; 3], a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let ab = sub(b, a);
    let ac = sub(c, a);
    let n = cross(ab, ac);
    let nn = dot(n, n);
    if nn > 0.0 {
        // Inside test via barycentric signs of the projection.
        let ap = sub(p, a);
        let d1 = dot(cross(ab, ap), n);
        let d2 = dot(cross(sub(c, b), sub(p, b)), n);
        let d3 = dot(cross(scale(ac, -1.0), sub(p, c)), n);
        if d1 >= 0.0 && d2 >= 0.0 && d3 >= 0.0 {
            return dot(sub(p, a), n).abs() / nn.sqrt();
        }
    }
    point_segment(p, a, b)
        .min(point_segment(p, b, c))
        .min(point_segment(p, a, c))
}

/// Does segment [p, q] intersect the closed triangle (a, b, c)?
/// Coplanar or degenerate cases report false; callers pair this with
/// edge-feature distances, which are zero in those cases anyway.
fn segment_hits_triangle(p: [f64; 3], q: [f64; 3], a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> bool {
    let n = cross(sub(b, a), sub(c, a));
    let d = sub(q, p);
    let denom = dot(n, d);
    if denom == 0.0 {
        return false;
    }
    let t = dot(n, sub(a, p)) / denom;
    if !(0.0..=1.0).contains(&t) {
        return false;
    }
    let x = add(p, scale(d, t));
    let d1 = dot(cross(sub(b, a), sub(x, a)), n);
    let d2 = dot(cross(sub(c, b), sub(x, b)), n);
    let d3 = dot(cross(sub(a, c), sub(x, c)), n);
    d1 >= 0.0 && d2 >= 0.0 && d3 >= 0.0
}

/// Minimum Euclidean distance between two closed simplices with at most
/// three vertices each, in any ambient dimension. Exact up to rounding:
/// the minimum between convex sets of this size is always attained on a
/// feature pair, all of which are enumerated — by direct formulas in
/// ambient 2 and 3, by per-pair normal equations above that.
pub fn simplex_distance(a: &[&[f64]], b: &[&[f64]]) -> f64 {
    assert!(
        (1..=3).contains(&a.len()) && (1..=3).contains(&b.len()),
        "simplices here have 1..=3 vertices"
    );
    let ambient = a[0].len().max(b[0].len());
    if ambient > 3 {
        return face_pair_distance(a, b);
    }
    let av: Vec<[f64; 3]> = a.iter().map(|p| pad3(p)).collect();
    let bv: Vec<[f64; 3]> = b.iter().map(|p| pad3(p)).collect();
    // Piercing: a positive-distance answer is wrong if an edge of one
    // passes through the interior of the other.
    if av.len() == 3 {
        for w in pairs(bv.len()) {
            if segment_hits_triangle(bv[w.0], bv[w.1], av[0], av[1], av[2]) {
                return 0.0;
            }
        }
    }
    if bv.len() == 3 {
        for w in pairs(av.len()) {
            if segment_hits_triangle(av[w.0], av[w.1], bv[0], bv[1], bv[2]) {
                return 0.0;
            }
        }
    }
    let mut best = f64::INFINITY;
    for &p in &av {
        best = best.min(match bv.len() {
            1 => norm(sub(p, bv[0])),
            2 => point_segment(p, bv[0], bv[1]),
            _ => point_triangle(p, bv[0], bv[1], bv[2]),
        });
    }
    for &p in &bv {
        best = best.min(match av.len() {
            1 => norm(sub(p, av[0])),
            2 => point_segment(p, av[0], av[1]),
            _ => point_triangle(p, av[0], av[1], av[2]),
        });
    }
    for ea in pairs(av.len()) {
        for eb in pairs(bv.len()) {
            best = best.min(segment_segment(av[ea.0], av[ea.1], bv[eb.0], bv[eb.1]));
        }
    }
    best
}

/// Vertex index pairs forming the edges of a simplex with `n` vertices.
fn pairs(n: usize) -> Vec<(usize, usize)> {
    match n {
        2 => vec![(0, 1)],
        3 => vec![(0, 1), (1, 2), (0, 2)],
        _ => vec![],
    }
}

/// General-dimension simplex distance by enumerating face pairs.
///
/// The closest pair between two compact convex sets lies in the relative
/// interior of some face of each; restricted to those faces the gradient
/// vanishes, so the affine normal equations recover it. Face pairs whose
/// system is singular are skipped — a flat optimum extends along the null
/// direction until it hits a sub-face, which the enumeration also visits —
/// and vertex-vertex pairs guarantee at least one candidate survives.
fn face_pair_distance(a: &[&[f64]], b: &[&[f64]]) -> f64 {
    let dim = a[0].len().max(b[0].len());
    let at = |p: &[f64], i: usize| p.get(i).copied().unwrap_or(0.0);
    let faces = |n: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            out.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
        }
        out
    };
    let mut best = f64::INFINITY;
    for fa in faces(a.len()) {
        for fb in faces(b.len()) {
            // Columns: directions from the base vertex of each face; the
            // target is the base-to-base offset.
            let mut cols: Vec<Vec<f64>> = Vec::new();
            for &i in &fa[1..] {
                cols.push((0..dim).map(|d| at(a[i], d) - at(a[fa[0]], d)).collect());
            }
            for &j in &fb[1..] {
                cols.push((0..dim).map(|d| at(b[fb[0]], d) - at(b[j], d)).collect());
            }
            let rhs: Vec<f64> = (0..dim).map(|d| at(b[fb[0]], d) - at(a[fa[0]], d)).collect();
            let k = cols.len();
            let mut sol = vec![0.0; k];
            if k > 0 {
                let mut m = vec![vec![0.0; k + 1]; k];
                for r in 0..k {
                    for c in 0..k {
                        m[r][c] = cols[r].iter().zip(&cols[c]).map(|(x, y)| x * y).sum();
                    }
                    m[r][k] = cols[r].iter().zip(&rhs).map(|(x, y)| x * y).sum();
                }
                let scale = m
                    .iter()
                    .flat_map(|row| row[..k].iter())
                    .fold(0.0f64, |acc, v| acc.max(v.abs()));
                if !solve_normal(&mut m, k, scale) {
                    continue;
                }
                for (i, s) in sol.iter_mut().enumerate() {
                    *s = m[i][k];
                }
            }
            // Barycentric feasibility on both faces (affine coordinates of
            // the omitted base vertices included).
            let wa = &sol[..fa.len() - 1];
            let wb = &sol[fa.len() - 1..];
            let ok = wa.iter().chain(wb.iter()).all(|&w| w >= -1e-9)
                && wa.iter().sum::<f64>() <= 1.0 + 1e-9
                && wb.iter().sum::<f64>() <= 1.0 + 1e-9;
            if !ok {
                continue;
            }
            let mut residual = 0.0;
            for d in 0..dim {
                let moved: f64 = cols.iter().zip(&sol).map(|(c, s)| c[d] * s).sum();
                residual += (rhs[d] - moved) * (rhs[d] - moved);
            }
            best = best.min(residual.sqrt());
        }
    }
    best
}

/// In-place Gaussian elimination on the k x (k+1) augmented system; returns
/// false when a pivot falls below the conditioning floor.
fn solve_normal(m: &mut [Vec<f64>], k: usize, scale: f64) -> bool {
    let floor = 1e-12 * scale.max(1e-300);
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))
            .unwrap();
        if m[piv][col].abs() < floor {
            return false;
        }
        m.swap(col, piv);
        for row in 0..k {
            if row != col {
                let f = m[row][col] / m[col][col];
                for c in col..=k {
                    let delta = f * m[col][c];
                    m[row][c] -= delta;
                }
            }
        }
    }
    for col in 0..k {
        m[col][k] /= m[col][col];
    }
    true
}

/// Separating-axis overlap test between a closed triangle and a closed
/// axis-aligned box centered at `c` with half-extents `h`.
fn triangle_box_overlap(c: [f64; 3], h: [f64; 3], tri: [[f64; 3]; 3]) -> bool {
    let v: Vec<[f64; 3]> = tri.iter().map(|&p| sub(p, c)).collect();
    // Box face normals.
    for ax in 0..3 {
        let lo = v.iter().map(|p| p[ax]).fold(f64::INFINITY, f64::min);
        let hi = v.iter().map(|p| p[ax]).fold(f64::NEG_INFINITY, f64::max);
        if lo > h[ax] || hi < -h[ax] {
            return false;
        }
    }
    let e = [sub(v[1], v[0]), sub(v[2], v[1]), sub(v[0], v[2])];
    // Triangle normal.
    let n = cross(e[0], e[1]);
    let r = h[0] * n[0].abs() + h[1] * n[1].abs() + h[2] * n[2].abs();
    let d = dot(n, v[0]);
    if d.abs() > r {
        return false;
    }
    // Nine cross-product axes.
    for ei in &e {
        for ax in 0..3 {
            let mut axis = [0.0; 3];
            axis[ax] = 1.0;
            let a = cross(*ei, axis);
            let ra = h[0] * a[0].abs() + h[1] * a[1].abs() + h[2] * a[2].abs();
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for p in &v {
                let s = dot(a, *p);
                lo = lo.min(s);
                hi = hi.max(s);
            }
            if lo > ra || hi < -ra {
                return false;
            }
        }
    }
    true
}

/// Integer grid cell containing point p: cell k covers [k, k+1).
fn cell_of(p: &[f64]) -> [i64; 3] {
    let q = pad3(p);
    [
        q[0].floor() as i64,
        q[1].floor() as i64,
        q[2].floor() as i64,
    ]
}

/// All unit grid cells whose closed cube meets the closed simplex spanned
/// by `verts` (1..=3 vertices in R^2 or R^3; 2D inputs live in the z = 0
/// slab and get cells with z-index 0 or -1 filtered to z = 0).
///
/// Cells are [x, y, z] integer triples, sorted. The test is the exact
/// separating-axis one, so the result is the true meeting set up to
/// floating-point ties on shared boundaries.
pub fn cells_meeting(verts: &[&[f64]]) -> Vec<[i64; 3]> {
    assert!((1..=3).contains(&verts.len()));
    let dim = verts[0].len();
    assert!(dim == 2 || dim == 3, "ambient dimension must be 2 or 3");
    let pts: Vec<[f64; 3]> = verts.iter().map(|p| pad3(p)).collect();
    let mut lo = [i64::MAX; 3];
    let mut hi = [i64::MIN; 3];
    for p in &pts {
        for ax in 0..3 {
            lo[ax] = lo[ax].min(p[ax].floor() as i64);
            hi[ax] = hi[ax].max(p[ax].floor() as i64);
        }
    }
    if dim == 2 {
        lo[2] = 0;
        hi[2] = 0;
    }
    let mut out = Vec::new();
    for x in lo[0]..=hi[0] {
        for y in lo[1]..=hi[1] {
            for z in lo[2]..=hi[2] {
                let c = [
                    x as f64 + 0.5,
                    y as f64 + 0.5,
                    if dim == 2 { 0.0 } else { z as f64 + 0.5 },
                ];
                let h = [0.5, 0.5, if dim == 2 { 0.0 } else { 0.5 }];
                let meets = match pts.len() {
                    1 => true, // single point: only its own cell is enumerated
                    2 => segment_box_overlap(c, h, pts[0], pts[1]),
                    _ => triangle_box_overlap(c, h, [pts[0], pts[1], pts[2]]),
                };
                if meets {
                    out.push([x, y, z]);
                }
            }
        }
    }
    if pts.len() == 1 {
        out = vec![cell_of(verts[0])];
        if dim == 2 {
            out[0][2] = 0;
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Slab test: closed segment vs closed box (center c, half-extents h).
fn segment_box_overlap(c: [f64; 3], h: [f64; 3], p: [f64; 3], q: [f64; 3]) -> bool {
    let m = scale(add(p, q), 0.5);
    let d = scale(sub(q, p), 0.5);
    let t = sub(m, c);
    for ax in 0..3 {
        if t[ax].abs() > h[ax] + d[ax].abs() {
            return false;
        }
    }
    // Cross-axis tests of the segment direction against box edges.
    let ad = [d[0].abs(), d[1].abs(), d[2].abs()];
    if (t[1] * d[2] - t[2] * d[1]).abs() > h[1] * ad[2] + h[2] * ad[1] {
        return false;
    }
    if (t[2] * d[0] - t[0] * d[2]).abs() > h[2] * ad[0] + h[0] * ad[2] {
        return false;
    }
    if (t[0] * d[1] - t[1] * d[0]).abs() > h[0] * ad[1] + h[1] * ad[0] {
        return false;
    }
    true
}

/// The 3^n block of cells around each input cell (n = 2 keeps z fixed),
/// as a sorted deduplicated union.
pub fn dilate_block(cells: &[[i64; 3]], n: usize) -> Vec<[i64; 3]> {
    assert!(n == 2 || n == 3);
    let zr: &[i64] = if n == 2 { &[0] } else { &[-1, 0, 1] };
    let mut out = Vec::with_capacity(cells.len() * 9);
    for c in cells {
        for dx in -1..=1 {
            for dy in -1..=1 {
                for &dz in zr {
                    out.push([c[0] + dx, c[1] + dy, c[2] + dz]);
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// How far the affine image of a standard unit-edge simplex is from an
/// isometry: max(s_max, 1/s_min) over the singular values s of the linear
/// part, for images of edges (2 vertices) and triangles (3 vertices).
/// Exactly 1.0 for a congruent copy of the unit equilateral simplex;
/// infinite for a degenerate image.
pub fn equilateral_distortion(verts: &[&[f64]]) -> f64 {
    match verts.len() {
        2 => {
            let l = point_distance(verts[0], verts[1]);
            if l == 0.0 {
                f64::INFINITY
            } else {
                l.max(1.0 / l)
            }
        }
        3 => {
            let u = sub(pad3(verts[1]), pad3(verts[0]));
            let w = sub(pad3(verts[2]), pad3(verts[0]));
            // Image Gram matrix in the basis of the two standard edges
            // e1, e2 of the unit equilateral triangle. With E the 2x2
            // matrix of those edges, the squared singular values of the
            // map are the eigenvalues of E^{-T} G E^{-1}.
            let g = [dot(u, u), dot(u, w), dot(w, w)];
            // E = [[1, 1/2], [0, sqrt(3)/2]], E^{-1} = [[1, -1/sqrt3], [0, 2/sqrt3]].
            let (a, b, c) = (g[0], g[1], g[2]);
            // M = E^{-T} G E^{-1}, symmetric 2x2.
            let s3 = 3.0f64.sqrt();
            let m00 = a;
            let m01 = -a / s3 + 2.0 * b / s3;
            let m11 = (a - 4.0 * b + 4.0 * c) / 3.0;
            let tr = m00 + m11;
            let det = m00 * m11 - m01 * m01;
            let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
            let l1 = tr / 2.0 + disc;
            let l2 = tr / 2.0 - disc;
            if l2 <= 0.0 {
                return f64::INFINITY;
            }
            l1.sqrt().max(1.0 / l2.sqrt())
        }
        _ => panic!("distortion is defined for 2 or 3 vertices"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(x: f64, y: f64) -> Vec<f64> {
        vec![x, y]
    }

    fn p3(x: f64, y: f64, z: f64) -> Vec<f64> {
        vec![x, y, z]
    }

    fn refs(v: &[Vec<f64>]) -> Vec<&[f64]> {
        v.iter().map(|p| p.as_slice()).collect()
    }

    /// Brute-force oracle: sample both simplices on a barycentric grid and
    /// take the minimum pairwise distance. Overestimates the true distance,
    /// so the closed form must come out <= oracle and close to it.
    fn sampled_distance(a: &[Vec<f64>], b: &[Vec<f64>], steps: usize) -> f64 {
        let sample = |verts: &[Vec<f64>]| -> Vec<[f64; 3]> {
            let mut out = Vec::new();
            match verts.len() {
                1 => out.push(pad3(&verts[0])),
                2 => {
                    for i in 0..=steps {
                        let t = i as f64 / steps as f64;
                        out.push(add(
                            scale(pad3(&verts[0]), 1.0 - t),
                            scale(pad3(&verts[1]), t),
                        ));
                    }
                }
                _ => {
                    for i in 0..=steps {
                        for j in 0..=(steps - i) {
                            let (s, t) = (i as f64 / steps as f64, j as f64 / steps as f64);
                            let u = 1.0 - s - t;
                            let mut p = scale(pad3(&verts[0]), u);
                            p = add(p, scale(pad3(&verts[1]), s));
                            p = add(p, scale(pad3(&verts[2]), t));
                            out.push(p);
                        }
                    }
                }
            }
            out
        };
        let sa = sample(a);
        let sb = sample(b);
        let mut best = f64::INFINITY;
        for x in &sa {
            for y in &sb {
                best = best.min(norm(sub(*x, *y)));
            }
        }
        best
    }

    #[test]
    fn distances_match_hand_values() {
        // Parallel unit segments one apart.
        let a = [p2(0.0, 0.0), p2(1.0, 0.0)];
        let b = [p2(0.0, 1.0), p2(1.0, 1.0)];
        assert!((simplex_distance(&refs(&a), &refs(&b)) - 1.0).abs() < 1e-12);
        // Skew segments in 3D: closest between midpoints, distance 1.
        let a = [p3(-1.0, 0.0, 0.0), p3(1.0, 0.0, 0.0)];
        let b = [p3(0.0, -1.0, 1.0), p3(0.0, 1.0, 1.0)];
        assert!((simplex_distance(&refs(&a), &refs(&b)) - 1.0).abs() < 1e-12);
        // Point above a triangle's interior.
        let t = [p3(0.0, 0.0, 0.0), p3(2.0, 0.0, 0.0), p3(0.0, 2.0, 0.0)];
        let q = [p3(0.5, 0.5, 3.0)];
        assert!((simplex_distance(&refs(&t), &refs(&q)) - 3.0).abs() < 1e-12);
        // Point beyond a vertex: distance to that vertex.
        let q = [p3(-3.0, -4.0, 0.0)];
        assert!((simplex_distance(&refs(&t), &refs(&q)) - 5.0).abs() < 1e-12);
        // Touching simplices have distance zero.
        let b = [p3(0.0, 0.0, 0.0), p3(-1.0, -1.0, -1.0)];
        assert_eq!(simplex_distance(&refs(&t), &refs(&b)), 0.0);
        // Segment piercing a triangle's interior.
        let b = [p3(0.5, 0.5, -1.0), p3(0.5, 0.5, 1.0)];
        assert_eq!(simplex_distance(&refs(&t), &refs(&b)), 0.0);
    }

    #[test]
    fn distances_agree_with_sampling() {
        // Deterministic xorshift points; compare the closed form against a
        // dense-sampling oracle on random simplex pairs in 2D and 3D.
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 4.0 - 2.0
        };
        for dim in [2usize, 3] {
            for trial in 0..60 {
                let na = trial % 3 + 1;
                let nb = (trial / 3) % 3 + 1;
                let mk = |n: usize, next: &mut dyn FnMut() -> f64| -> Vec<Vec<f64>> {
                    (0..n).map(|_| (0..dim).map(|_| next()).collect()).collect()
                };
                let a = mk(na, &mut next);
                let b = mk(nb, &mut next);
                let exact = simplex_distance(&refs(&a), &refs(&b));
                let approx = sampled_distance(&a, &b, 24);
                assert!(
                    exact <= approx + 1e-9,
                    "closed form above oracle: {exact} vs {approx}"
                );
                // Sampling on a 24-grid of simplices with diameter <= ~5.7
                // is within one grid step of the true minimum.
                assert!(
                    approx - exact <= 0.3,
                    "closed form far below oracle: {exact} vs {approx}"
                );
            }
        }
    }

    #[test]
    fn rasterization_covers_samples() {
        // Every densely sampled point of the simplex must land in a
        // reported cell: the meeting set is a cover of the image.
        let cases: Vec<Vec<Vec<f64>>> = vec![
            vec![p2(0.3, 0.4)],
            vec![p2(-1.2, 0.5), p2(2.7, 1.9)],
            vec![p2(0.1, 0.1), p2(3.5, 0.2), p2(1.0, 2.8)],
            vec![p3(0.2, 0.3, 0.4), p3(2.9, 1.1, -1.5)],
            vec![p3(0.0, 0.0, 0.0), p3(2.5, 0.5, 1.5), p3(0.5, 2.5, 0.8)],
        ];
        for verts in &cases {
            let cells = cells_meeting(&refs(verts));
            assert!(!cells.is_empty());
            let dim = verts[0].len();
            let sampled = {
                let mut pts = Vec::new();
                let steps = 40;
                match verts.len() {
                    1 => pts.push(pad3(&verts[0])),
                    2 => {
                        for i in 0..=steps {
                            let t = i as f64 / steps as f64;
                            pts.push(add(
                                scale(pad3(&verts[0]), 1.0 - t),
                                scale(pad3(&verts[1]), t),
                            ));
                        }
                    }
                    _ => {
                        for i in 0..=steps {
                            for j in 0..=(steps - i) {
                                let (s, t) = (i as f64 / steps as f64, j as f64 / steps as f64);
                                let mut p = scale(pad3(&verts[0]), 1.0 - s - t);
                                p = add(p, scale(pad3(&verts[1]), s));
                                p = add(p, scale(pad3(&verts[2]), t));
                                pts.push(p);
                            }
                        }
                    }
                }
                pts
            };
            for p in sampled {
                let mut c = [
                    p[0].floor() as i64,
                    p[1].floor() as i64,
                    p[2].floor() as i64,
                ];
                if dim == 2 {
                    c[2] = 0;
                }
                assert!(
                    cells.binary_search(&c).is_ok(),
                    "sample {p:?} in cell {c:?} missing from {cells:?}"
                );
            }
        }
    }

    #[test]
    fn rasterization_is_tight_on_axis_cases() {
        // A segment along y = 0.5 from x = 0.25 to x = 2.75 meets exactly
        // the three cells it passes through.
        let s = [p2(0.25, 0.5), p2(2.75, 0.5)];
        let cells = cells_meeting(&refs(&s));
        assert_eq!(cells, vec![[0, 0, 0], [1, 0, 0], [2, 0, 0]]);
        // A small triangle strictly inside one cell.
        let t = [p2(0.1, 0.1), p2(0.4, 0.1), p2(0.2, 0.4)];
        assert_eq!(cells_meeting(&refs(&t)), vec![[0, 0, 0]]);
        // A point on the corner lands in its own floor cell only.
        let q = [p3(1.0, 2.0, 3.0)];
        assert_eq!(cells_meeting(&refs(&q)), vec![[1, 2, 3]]);
        // Diagonal segment through a cell corner region: conservative SAT
        // keeps cells it touches, never drops one it crosses.
        let s = [p3(0.5, 0.5, 0.5), p3(1.5, 1.5, 1.5)];
        let cells = cells_meeting(&refs(&s));
        assert!(cells.contains(&[0, 0, 0]) && cells.contains(&[1, 1, 1]));
    }

    #[test]
    fn dilation_blocks() {
        let one = dilate_block(&[[0, 0, 0]], 2);
        assert_eq!(one.len(), 9);
        assert!(one.iter().all(|c| c[2] == 0));
        let one = dilate_block(&[[0, 0, 0]], 3);
        assert_eq!(one.len(), 27);
        // Two adjacent cells share most of their blocks.
        let two = dilate_block(&[[0, 0, 0], [1, 0, 0]], 3);
        assert_eq!(two.len(), 36);
        assert!(two.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn distortion_of_model_shapes() {
        // Unit equilateral triangle: distortion exactly 1.
        let h = 3.0f64.sqrt() / 2.0;
        let t = [p2(0.0, 0.0), p2(1.0, 0.0), p2(0.5, h)];
        assert!((equilateral_distortion(&refs(&t)) - 1.0).abs() < 1e-6);
        // Same triangle scaled by 3: distortion 3 (and 1/3-scale gives 3 too).
        let t3: Vec<Vec<f64>> = t.iter().map(|p| p.iter().map(|x| x * 3.0).collect()).collect();
        assert!((equilateral_distortion(&refs(&t3)) - 3.0).abs() < 1e-6);
        let ts: Vec<Vec<f64>> = t.iter().map(|p| p.iter().map(|x| x / 3.0).collect()).collect();
        assert!((equilateral_distortion(&refs(&ts)) - 3.0).abs() < 1e-6);
        // Unit edge: 1; doubled edge: 2.
        let e = [p3(0.0, 0.0, 0.0), p3(1.0, 0.0, 0.0)];
        assert!((equilateral_distortion(&refs(&e)) - 1.0).abs() < 1e-12);
        let e2 = [p3(0.0, 0.0, 0.0), p3(2.0, 0.0, 0.0)];
        assert!((equilateral_distortion(&refs(&e2)) - 2.0).abs() < 1e-12);
        // Collapsed triangle: infinite.
        let d = [p2(0.0, 0.0), p2(1.0, 0.0), p2(2.0, 0.0)];
        assert!(equilateral_distortion(&refs(&d)).is_infinite());
        // A right isoceles triangle with legs 1: singular values of the map
        // from the equilateral triangle, computed independently from the
        // Gram eigenvalues: G = [[1, 0], [0, 1]] vs E.
        let r = [p2(0.0, 0.0), p2(1.0, 0.0), p2(0.0, 1.0)];
        let got = equilateral_distortion(&refs(&r));
        // M = E^{-T} E^{-1} has eigenvalues (solve 2x2): tr = 1 + 5/3, det = 4/3.
        let (tr, det) = (8.0f64 / 3.0, 4.0f64 / 3.0);
        let disc = (tr * tr / 4.0 - det).sqrt();
        let want = (tr / 2.0 + disc)
            .sqrt()
            .max(1.0 / (tr / 2.0 - disc).sqrt());
        assert!((got - want).abs() < 1e-6);
    }

    #[test]
    fn high_dimensional_distances_match_hand_values() {
        // Parallel unit segments offset by (0,1,1,0,0): distance sqrt(2).
        let a = [vec![0.0; 5], vec![1.0, 0.0, 0.0, 0.0, 0.0]];
        let b = [
            vec![0.0, 1.0, 1.0, 0.0, 0.0],
            vec![1.0, 1.0, 1.0, 0.0, 0.0],
        ];
        let d = simplex_distance(&refs(&a), &refs(&b));
        assert!((d - 2.0f64.sqrt()).abs() < 1e-9);
        // Crossing directions separated only along the fifth axis.
        let a = [
            vec![-1.0, 0.0, 0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0, 0.0],
        ];
        let b = [
            vec![0.0, -1.0, 0.0, 0.0, 3.0],
            vec![0.0, 1.0, 0.0, 0.0, 3.0],
        ];
        assert!((simplex_distance(&refs(&a), &refs(&b)) - 3.0).abs() < 1e-9);
        // Triangles sharing a vertex touch.
        let a = [
            vec![0.0; 5],
            vec![1.0, 0.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0, 0.0],
        ];
        let b = [
            vec![0.0; 5],
            vec![0.0, 0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0, 0.0],
        ];
        assert!(simplex_distance(&refs(&a), &refs(&b)) < 1e-9);
        // Point to a triangle along an orthogonal axis.
        let p = [vec![0.25, 0.25, 0.0, 0.0, 2.0]];
        assert!((simplex_distance(&refs(&p), &refs(&a)) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn high_dimensional_path_agrees_with_the_specialized_one() {
        // Random 3D instances, re-fed as 5D points with zero padding: both
        // code paths must produce the same distance.
        let mut state = 0x5eed_cafe_u64;
        let mut rnd = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 4.0 - 2.0
        };
        for trial in 0..120 {
            let na = trial % 3 + 1;
            let nb = (trial / 3) % 3 + 1;
            let a3: Vec<Vec<f64>> = (0..na).map(|_| (0..3).map(|_| rnd()).collect()).collect();
            let b3: Vec<Vec<f64>> = (0..nb).map(|_| (0..3).map(|_| rnd()).collect()).collect();
            let pad = |v: &[Vec<f64>]| -> Vec<Vec<f64>> {
                v.iter()
                    .map(|p| {
                        let mut q = p.clone();
                        q.extend([0.0, 0.0]);
                        q
                    })
                    .collect()
            };
            let a5 = pad(&a3);
            let b5 = pad(&b3);
            let d3 = simplex_distance(&refs(&a3), &refs(&b3));
            let d5 = simplex_distance(&refs(&a5), &refs(&b5));
            assert!(
                (d3 - d5).abs() < 1e-7 * (1.0 + d3),
                "trial {trial}: specialized {d3} vs general {d5}"
            );
        }
    }
}
