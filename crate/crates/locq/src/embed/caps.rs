//! Disjoint spherical caps, one per color class, on a sphere in R^2 or R^3.
//!
//! The caps together cover a quarter of the sphere; their centers follow
//! fixed layouts (equal angles on the circle, classical configurations or a
//! Fibonacci spiral on the sphere), so the only randomness in the pipeline
//! is *where inside its cap* each vertex lands.

use super::EmbedError;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Fraction of the sphere covered by all caps together.
const COVER_FRACTION: f64 = 0.25;

/// A spherical cap: unit center direction and the half-angle it subtends.
#[derive(Debug, Clone, PartialEq)]
pub struct Cap {
    pub center: Vec<f64>,
    pub angular_radius: f64,
    pub sphere_radius: f64,
}

impl Cap {
    /// A uniform point of the cap, on the sphere of radius `sphere_radius`.
    pub(crate) fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let r = self.sphere_radius;
        match self.center.len() {
            2 => {
                let base = self.center[1].atan2(self.center[0]);
                let a = base + rng.gen_range(-self.angular_radius..=self.angular_radius);
                vec![r * a.cos(), r * a.sin()]
            }
            3 => {
                // Uniform on the cap around +z, then rotate +z onto the
                // center direction.
                let h = rng.gen_range(self.angular_radius.cos()..=1.0);
                let phi = rng.gen_range(0.0..std::f64::consts::TAU);
                let rho = (1.0 - h * h).max(0.0).sqrt();
                let local = [rho * phi.cos(), rho * phi.sin(), h];
                let p = rotate_z_to(&self.center, local);
                vec![r * p[0], r * p[1], r * p[2]]
            }
            _ => unreachable!("caps live on circles or spheres"),
        }
    }
}

/// Rotate the vector `v` by the rotation taking +z to the unit vector `c`.
fn rotate_z_to(c: &[f64], v: [f64; 3]) -> [f64; 3] {
    let (cx, cy, cz) = (c[0], c[1], c[2]);
    // Rodrigues around axis z × c = (-cy, cx, 0); degenerate at the poles.
    let s2 = cx * cx + cy * cy;
    if s2 < 1e-30 {
        return if cz > 0.0 { v } else { [v[0], -v[1], -v[2]] };
    }
    let (ax, ay) = (-cy / s2.sqrt(), cx / s2.sqrt());
    let cos_t = cz;
    let sin_t = s2.sqrt();
    let dot_av = ax * v[0] + ay * v[1];
    let cross_av = [ay * v[2], -ax * v[2], ax * v[1] - ay * v[0]];
    [
        v[0] * cos_t + cross_av[0] * sin_t + ax * dot_av * (1.0 - cos_t),
        v[1] * cos_t + cross_av[1] * sin_t + ay * dot_av * (1.0 - cos_t),
        // The rotation axis lies in the xy-plane, so its z-term vanishes.
        v[2] * cos_t + cross_av[2] * sin_t,
    ]
}

/// Deterministic unit center directions for `count` caps in R^n.
fn cap_centers(n: usize, count: usize) -> Vec<Vec<f64>> {
    if n == 2 {
        return (0..count)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / count as f64;
                vec![a.cos(), a.sin()]
            })
            .collect();
    }
    let s3 = 3.0f64.sqrt();
    match count {
        1 => vec![vec![0.0, 0.0, 1.0]],
        2 => vec![vec![0.0, 0.0, 1.0], vec![0.0, 0.0, -1.0]],
        3 => cap_centers(2, 3)
            .into_iter()
            .map(|mut p| {
                p.push(0.0);
                p
            })
            .collect(),
        4 => vec![
            vec![1.0 / s3, 1.0 / s3, 1.0 / s3],
            vec![1.0 / s3, -1.0 / s3, -1.0 / s3],
            vec![-1.0 / s3, 1.0 / s3, -1.0 / s3],
            vec![-1.0 / s3, -1.0 / s3, 1.0 / s3],
        ],
        6 => vec![
            vec![1.0, 0.0, 0.0],
            vec![-1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, -1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, -1.0],
        ],
        _ => {
            // Fibonacci spiral: evenly spread for any count.
            let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                    let rho = (1.0 - z * z).max(0.0).sqrt();
                    let a = golden * i as f64;
                    vec![rho * a.cos(), rho * a.sin(), z]
                })
                .collect()
        }
    }
}

/// Lay out `count` disjoint caps on the sphere of radius `radius` in R^n
/// (n = 2 or 3), their total area a quarter of the sphere's, centers
/// pairwise at least `min_sep_fraction`·radius apart. Layouts are fixed;
/// infeasibility (crowded centers or overlapping caps) is an error.
pub fn place_caps(
    n: usize,
    radius: f64,
    count: usize,
    min_sep_fraction: f64,
) -> Result<Vec<Cap>, EmbedError> {
    if !(n == 2 || n == 3) {
        return Err(EmbedError::DimensionError { m: n, n: 3 });
    }
    assert!(radius > 0.0 && count > 0);
    // Per-cap angular radius giving total area = COVER_FRACTION of the
    // sphere: arcs on the circle, height-based caps on the sphere.
    let theta = if n == 2 {
        COVER_FRACTION * std::f64::consts::PI / count as f64
    } else {
        (1.0 - 2.0 * COVER_FRACTION / count as f64).acos()
    };
    let centers = cap_centers(n, count);
    for i in 0..count {
        for j in i + 1..count {
            let chord: f64 = centers[i]
                .iter()
                .zip(&centers[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if chord * radius < min_sep_fraction * radius {
                return Err(EmbedError::InfeasibleCaps(format!(
                    "centers {i} and {j} are {:.4}·radius apart, need {min_sep_fraction}",
                    chord
                )));
            }
            let angle = (1.0 - chord * chord / 2.0).clamp(-1.0, 1.0).acos();
            if angle < 2.0 * theta {
                return Err(EmbedError::InfeasibleCaps(format!(
                    "caps {i} and {j} overlap: center angle {angle:.4} < 2·{theta:.4}"
                )));
            }
        }
    }
    Ok(centers
        .into_iter()
        .map(|center| Cap {
            center,
            angular_radius: theta,
            sphere_radius: radius,
        })
        .collect())
}
