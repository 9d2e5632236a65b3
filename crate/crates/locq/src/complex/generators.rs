//! Stock complexes — tori in both flavors, small spheres and circles — plus
//! seeded random instances for tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CellComplex, CellKind, ComplexError};

/// Builds a simplicial complex from any family of vertex sets, closing under
/// subsets. Every vertex in `0..n_vertices` is a 0-cell whether or not a
/// listed cell touches it; duplicate cells collapse. Cells of each dimension
/// come out ordered lexicographically by vertex set.
pub fn simplicial_from_cells(
    n_vertices: usize,
    cells: &[Vec<usize>],
) -> Result<CellComplex, ComplexError> {
    let mut closure: Vec<Vec<usize>> = Vec::new();
    for cell in cells {
        let mut vs = cell.clone();
        vs.sort_unstable();
        let len = vs.len();
        vs.dedup();
        if vs.len() != len {
            return Err(ComplexError::Invalid(format!("repeated vertex in cell {cell:?}")));
        }
        if vs.is_empty() {
            return Err(ComplexError::Invalid("empty cell".into()));
        }
        if *vs.last().unwrap() >= n_vertices {
            return Err(ComplexError::Invalid(format!(
                "vertex {} out of range",
                vs.last().unwrap()
            )));
        }
        if vs.len() > 13 {
            return Err(ComplexError::Invalid("cell dimension too large".into()));
        }
        for mask in 1u32..(1 << vs.len()) {
            if mask.count_ones() < 2 {
                continue; // vertices are implicit
            }
            let sub: Vec<usize> = (0..vs.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| vs[i])
                .collect();
            closure.push(sub);
        }
    }
    // (length, lex) order groups each dimension contiguously in its canonical
    // order; dedup collapses shared faces.
    closure.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    closure.dedup();

    let mut by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
    for vs in closure {
        let slot = vs.len() - 2;
        if by_dim.len() <= slot {
            by_dim.resize(slot + 1, Vec::new());
        }
        by_dim[slot].push(vs);
    }
    let faces = by_dim
        .iter()
        .enumerate()
        .map(|(slot, level)| {
            level
                .iter()
                .map(|vs| {
                    let mut fs: Vec<usize> = if slot == 0 {
                        vs.clone()
                    } else {
                        (0..vs.len())
                            .map(|drop| {
                                let sub: Vec<usize> = vs
                                    .iter()
                                    .enumerate()
                                    .filter(|&(i, _)| i != drop)
                                    .map(|(_, &v)| v)
                                    .collect();
                                by_dim[slot - 1]
                                    .binary_search(&sub)
                                    .expect("closure contains every facet")
                            })
                            .collect()
                    };
                    fs.sort_unstable();
                    fs
                })
                .collect()
        })
        .collect();
    CellComplex::from_faces(CellKind::Simplicial, n_vertices, faces)
}

/// Circle with `m` vertices on the unit circle.
pub fn cycle_complex(m: usize) -> Result<CellComplex, ComplexError> {
    if m < 3 {
        return Err(ComplexError::Invalid("cycle wants at least 3 vertices".into()));
    }
    let edges: Vec<Vec<usize>> = (0..m).map(|i| vec![i, (i + 1) % m]).collect();
    let coords = (0..m)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / m as f64;
            vec![a.cos(), a.sin()]
        })
        .collect();
    simplicial_from_cells(m, &edges)?.with_coords(coords)
}

/// Boundary of the octahedron: the smallest triangulated sphere with vertices
/// at ±e_i.
pub fn octahedron() -> CellComplex {
    let mut tris = Vec::new();
    for x in 0..2 {
        for y in 2..4 {
            for z in 4..6 {
                tris.push(vec![x, y, z]);
            }
        }
    }
    let coords = vec![
        vec![1.0, 0.0, 0.0],
        vec![-1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, -1.0, 0.0],
        vec![0.0, 0.0, 1.0],
        vec![0.0, 0.0, -1.0],
    ];
    simplicial_from_cells(6, &tris)
        .and_then(|x| x.with_coords(coords))
        .expect("fixed cell table")
}

/// Two triangle-boundary circles joined at vertex 0. First homology has
/// dimension two; the shortest essential cycle has length three.
pub fn wedge_circles() -> CellComplex {
    let edges = vec![
        vec![0, 1],
        vec![1, 2],
        vec![0, 2],
        vec![0, 3],
        vec![3, 4],
        vec![0, 4],
    ];
    let coords = vec![
        vec![0.0, 0.0],
        vec![-1.5, 0.87],
        vec![-1.5, -0.87],
        vec![1.5, 0.87],
        vec![1.5, -0.87],
    ];
    simplicial_from_cells(5, &edges)
        .and_then(|x| x.with_coords(coords))
        .expect("fixed cell table")
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn encode(x: &[usize], l: usize) -> usize {
    x.iter().fold(0, |acc, &c| acc * l + c)
}

/// The k-cells of the cubical n-torus with side `l`, in index order: a cell
/// is a direction set S (|S| = k) and a base corner x ∈ Z_l^n, ordered
/// lexicographically over (S, x) with x_0 most significant.
pub fn cubical_torus_cells(n: usize, l: usize, k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let ln = l.pow(n as u32);
    let mut out = Vec::with_capacity(combinations(n, k).len() * ln);
    for s in combinations(n, k) {
        let mut x = vec![0usize; n];
        for _ in 0..ln {
            out.push((s.clone(), x.clone()));
            for d in (0..n).rev() {
                x[d] += 1;
                if x[d] < l {
                    break;
                }
                x[d] = 0;
            }
        }
    }
    out
}

/// The n-torus with `l` vertices per direction as a cubical complex. A k-cell
/// (S, x) spans directions S from corner x; its boundary drops one direction
/// at either end. Cell order matches [`cubical_torus_cells`].
pub fn cubical_torus(n: usize, l: usize) -> Result<CellComplex, ComplexError> {
    if n == 0 || l < 2 {
        return Err(ComplexError::Invalid("torus wants n >= 1 and l >= 2".into()));
    }
    let ln = l
        .checked_pow(n as u32)
        .filter(|&v| v.checked_shl(n as u32).is_some_and(|t| t <= 1 << 24))
        .ok_or_else(|| ComplexError::Invalid("torus too large".into()))?;
    let mut faces = Vec::with_capacity(n);
    for k in 1..=n {
        let subs = combinations(n, k);
        let below = combinations(n, k - 1);
        let mut level = Vec::with_capacity(subs.len() * ln);
        for s in &subs {
            for (xi, (_, x)) in cubical_torus_cells(n, l, 0).into_iter().enumerate() {
                let mut fs = Vec::with_capacity(2 * k);
                for (di, &d) in s.iter().enumerate() {
                    let t: Vec<usize> = s
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != di)
                        .map(|(_, &v)| v)
                        .collect();
                    let ti = below.binary_search(&t).expect("facet direction set");
                    let mut y = x.clone();
                    y[d] = (y[d] + 1) % l;
                    fs.push(ti * ln + xi);
                    fs.push(ti * ln + encode(&y, l));
                }
                fs.sort_unstable();
                level.push(fs);
            }
        }
        faces.push(level);
    }
    CellComplex::from_faces(CellKind::Cubical, ln, faces)
}

/// Triangulated flat torus on an l × w vertex grid, each square split along
/// its main diagonal. Wrapping in the first direction shears by `twist`
/// steps, which varies the instance without changing the topology; every
/// vertex sits in six triangles. Wants l, w ≥ 3.
pub fn triangulated_torus(l: usize, w: usize, twist: usize) -> Result<CellComplex, ComplexError> {
    if l < 3 || w < 3 {
        return Err(ComplexError::Invalid("triangulated torus wants l, w >= 3".into()));
    }
    let t = twist % w;
    let vid = |i: usize, j: usize| i * w + j;
    let step_x = |i: usize, j: usize| if i + 1 < l { (i + 1, j) } else { (0, (j + t) % w) };
    let step_y = |i: usize, j: usize| (i, (j + 1) % w);
    let mut tris = Vec::with_capacity(2 * l * w);
    for i in 0..l {
        for j in 0..w {
            let (xi, xj) = step_x(i, j);
            let (yi, yj) = step_y(i, j);
            let (di, dj) = step_y(xi, xj);
            tris.push(vec![vid(i, j), vid(xi, xj), vid(di, dj)]);
            tris.push(vec![vid(i, j), vid(yi, yj), vid(di, dj)]);
        }
    }
    simplicial_from_cells(l * w, &tris)
}

/// Renames vertices through a permutation, preserving the complex up to
/// relabeling. Simplicial only.
pub fn relabel_vertices(x: &CellComplex, perm: &[usize]) -> Result<CellComplex, ComplexError> {
    if !x.is_simplicial() {
        return Err(ComplexError::NotSimplicial);
    }
    let n = x.cells(0);
    if perm.len() != n {
        return Err(ComplexError::Invalid("permutation length mismatch".into()));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(ComplexError::Invalid("not a permutation".into()));
        }
        seen[p] = true;
    }
    let mut cells = Vec::new();
    for k in 1..=x.dims() {
        for vs in x.vertex_sets(k) {
            cells.push(vs.iter().map(|&v| perm[v]).collect());
        }
    }
    let out = simplicial_from_cells(n, &cells)?;
    match x.coords() {
        Some(c) => {
            let mut nc = vec![Vec::new(); n];
            for (v, row) in c.iter().enumerate() {
                nc[perm[v]] = row.clone();
            }
            out.with_coords(nc)
        }
        None => Ok(out),
    }
}

/// Seeded pile of triangles with a few stray edges: small, connected or not,
/// arbitrary first homology. Always two-dimensional.
pub fn random_triangle_soup(max_vertices: usize, max_triangles: usize, seed: u64) -> CellComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = rng.gen_range(4..=max_vertices.max(4));
    let nt = rng.gen_range(1..=max_triangles.max(1));
    let mut pool: Vec<usize> = (0..nv).collect();
    let mut cells = Vec::new();
    for _ in 0..nt {
        pool.shuffle(&mut rng);
        cells.push(pool[..3].to_vec());
    }
    for _ in 0..rng.gen_range(0..=3usize) {
        pool.shuffle(&mut rng);
        cells.push(pool[..2].to_vec());
    }
    simplicial_from_cells(nv, &cells).expect("distinct vertices by construction")
}
