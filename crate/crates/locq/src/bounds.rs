//! Frontier checks for placed codes: how close a certified-local code sits
//! to the distance ceiling d ≲ V^{(n-1)/n} and the dimension–distance
//! ceiling k·d^{2/(n-1)} ≲ V for its ambient dimension, plus sweep
//! machinery that tabulates those ratios across whole code families.
//!
//! Failures here are data, not errors: a report records which checks
//! passed, and a survey keeps emitting rows either way, so a sweep can
//! chart where a family leaves the admissible region.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{self, CodeError, CodeReport};
use crate::complex::{self, CellComplex, ComplexError};
use crate::embed::{gg_embed, EmbedError, EmbedParams};
use crate::f2::{SearchBudget, Weight};
use crate::locality::{
    certify_local, fold_torus, pad_code, placement_from_embedding, LocalityCertificate,
    LocalityError,
};

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Locality(#[from] LocalityError),
}

/// Admissible multiples of the two frontier expressions. Local codes are
/// expected to stay within a constant of both ceilings; 4 is a comfortable
/// default for every family this crate generates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundThresholds {
    pub distance: f64,
    pub tradeoff: f64,
}

impl Default for BoundThresholds {
    fn default() -> Self {
        BoundThresholds {
            distance: 4.0,
            tradeoff: 4.0,
        }
    }
}

/// Outcome of reading one code against the two frontiers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub v: usize,
    pub n: usize,
    pub dim: usize,
    pub d: Weight,
    /// Both distance searches were exhaustive.
    pub d_exact: bool,
    /// d / V^{(n-1)/n}; zero when the code has no logical operators.
    pub distance_ratio: f64,
    /// dim · d^{2/(n-1)} / V; zero when the code has no logical operators.
    pub tradeoff_ratio: f64,
    pub distance_pass: bool,
    pub tradeoff_pass: bool,
    /// A heuristic distance only upper-bounds the true distance, so the
    /// ratios can only overstate reality and a pass is still a pass; set
    /// whenever either search fell back from exhaustive to sampled.
    pub upper_bound_only: bool,
    pub certificate: LocalityCertificate,
}

/// Read a measured code against the frontier thresholds. The certificate
/// must come from an injective placement — ratios against a collapsed
/// placement would be meaningless. A code with no logical operators has
/// nothing to bound and passes both checks vacuously.
pub fn check_bounds(
    r: &CodeReport,
    cert: &LocalityCertificate,
    t: &BoundThresholds,
) -> BoundReport {
    assert!(cert.injective, "frontier ratios need an injective placement");
    assert_eq!(cert.v, r.size, "certificate covers a different code");
    assert!(cert.n >= 2, "frontiers are read in ambient dimension >= 2");
    let n = cert.n as f64;
    let (distance_ratio, tradeoff_ratio) = match r.d {
        Weight::Finite(d) if r.dim > 0 => {
            let v = r.size as f64;
            let d = d as f64;
            (
                d / v.powf((n - 1.0) / n),
                r.dim as f64 * d.powf(2.0 / (n - 1.0)) / v,
            )
        }
        _ => (0.0, 0.0),
    };
    BoundReport {
        v: r.size,
        n: cert.n,
        dim: r.dim,
        d: r.d,
        d_exact: r.d_x_exact && r.d_z_exact,
        distance_ratio,
        tradeoff_ratio,
        distance_pass: distance_ratio <= t.distance,
        tradeoff_pass: tradeoff_ratio <= t.tradeoff,
        upper_bound_only: !(r.d_x_exact && r.d_z_exact),
        certificate: cert.clone(),
    }
}

/// Code families a survey can sweep, one row per side length.
#[derive(Clone, Debug)]
pub enum Family {
    /// Folded n-tori with qubits on edges.
    Toric { n: usize, sides: RangeInclusive<usize> },
    /// Folded plane tori padded with inert qubits to twice their size.
    Padded { sides: RangeInclusive<usize> },
    /// Triangulated tori placed through the sphere-and-perturb embedding
    /// into the given ambient dimension.
    Embedded { n: usize, sides: RangeInclusive<usize> },
}

#[derive(Clone, Debug)]
pub struct SurveyOptions {
    pub budget: SearchBudget,
    pub thresholds: BoundThresholds,
    pub seed: u64,
    /// Record wall-clock per row. Off by default so two runs of the same
    /// sweep produce byte-identical output.
    pub timings: bool,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions {
            budget: SearchBudget::default(),
            thresholds: BoundThresholds::default(),
            seed: 7,
            timings: false,
        }
    }
}

pub const SURVEY_FORMAT_VERSION: u32 = 1;

/// One swept code, flattened for tabulation. Column set is fixed; any
/// breaking change must bump [`SURVEY_FORMAT_VERSION`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub format_version: u32,
    pub family: String,
    pub n: usize,
    pub v: usize,
    pub dim: usize,
    pub d: Weight,
    pub d_exact: bool,
    pub distance_ratio: f64,
    pub tradeoff_ratio: f64,
    pub distance_pass: bool,
    pub tradeoff_pass: bool,
    pub check_constant: u64,
    pub cube_constant: f64,
    pub seed: u64,
    pub runtime_ms: u64,
}

pub const SURVEY_HEADER: &str = "format_version,family,n,v,dim,d,d_exact,distance_ratio,\
                                 tradeoff_ratio,distance_pass,tradeoff_pass,check_constant,\
                                 cube_constant,seed,runtime_ms";

/// Render rows as CSV under [`SURVEY_HEADER`]. An infinite distance prints
/// as an empty field; floats print in shortest round-trip form, so equal
/// rows render to equal bytes.
pub fn survey_csv(rows: &[SurveyRow]) -> String {
    let mut out = String::from(SURVEY_HEADER);
    out.push('\n');
    for r in rows {
        let d = match r.d {
            Weight::Finite(d) => d.to_string(),
            Weight::Infinite => String::new(),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.format_version,
            r.family,
            r.n,
            r.v,
            r.dim,
            d,
            r.d_exact,
            r.distance_ratio,
            r.tradeoff_ratio,
            r.distance_pass,
            r.tradeoff_pass,
            r.check_constant,
            r.cube_constant,
            r.seed,
            r.runtime_ms,
        )
        .unwrap();
    }
    out
}

/// Sweep one family, producing a row per member in sweep order. Rows are
/// deterministic for a fixed (family, options) pair; members that fail a
/// threshold still get their row.
pub fn frontier_survey(family: &Family, opts: &SurveyOptions) -> Result<Vec<SurveyRow>, BoundsError> {
    match family {
        Family::Toric { n, sides } => sides
            .clone()
            .map(|l| {
                let t0 = Instant::now();
                let (c, p) = fold_torus(*n, l, 1)?;
                let rep = code::report(&c, &opts.budget)?;
                let cert = certify_local(&c, &p);
                let b = check_bounds(&rep, &cert, &opts.thresholds);
                Ok(finish_row("toric", &b, opts, t0))
            })
            .collect(),
        Family::Padded { sides } => sides
            .clone()
            .map(|l| {
                let t0 = Instant::now();
                let (c, p) = fold_torus(2, l, 1)?;
                let (c, p) = pad_code(&c, &p, 2 * c.size())?;
                let rep = code::report(&c, &opts.budget)?;
                let cert = certify_local(&c, &p);
                let b = check_bounds(&rep, &cert, &opts.thresholds);
                Ok(finish_row("padded", &b, opts, t0))
            })
            .collect(),
        Family::Embedded { n, sides } => sides
            .clone()
            .map(|l| {
                let x = complex::triangulated_torus(l, l, 0)?;
                embedded_row(&x, 1, *n, "embedded", opts)
            })
            .collect(),
    }
}

/// Survey row for an arbitrary simplicial complex: take its k-cell code,
/// embed the complex, snap barycenters to a lattice placement, certify,
/// and read the frontier ratios.
pub fn embedded_row(
    x: &CellComplex,
    k: usize,
    n: usize,
    family: &str,
    opts: &SurveyOptions,
) -> Result<SurveyRow, BoundsError> {
    let t0 = Instant::now();
    let c = complex::code_from_complex(x, k)?;
    let mut params = EmbedParams::for_complex(x, n);
    params.seed = opts.seed;
    let e = gg_embed(x, &params)?;
    let (p, _eps_inv) = placement_from_embedding(&c, x, k, &e)?;
    let rep = code::report(&c, &opts.budget)?;
    let cert = certify_local(&c, &p);
    let b = check_bounds(&rep, &cert, &opts.thresholds);
    Ok(finish_row(family, &b, opts, t0))
}

fn finish_row(family: &str, b: &BoundReport, opts: &SurveyOptions, t0: Instant) -> SurveyRow {
    SurveyRow {
        format_version: SURVEY_FORMAT_VERSION,
        family: family.to_string(),
        n: b.n,
        v: b.v,
        dim: b.dim,
        d: b.d,
        d_exact: b.d_exact,
        distance_ratio: b.distance_ratio,
        tradeoff_ratio: b.tradeoff_ratio,
        distance_pass: b.distance_pass,
        tradeoff_pass: b.tradeoff_pass,
        check_constant: b.certificate.check_constant,
        cube_constant: b.certificate.cube_constant,
        seed: opts.seed,
        runtime_ms: if opts.timings {
            t0.elapsed().as_millis() as u64
        } else {
            0
        },
    }
}
