//! Command-line surface: generate codes and complexes, measure codes, run
//! embeddings, certify placements, fold tori, pad placed codes, and sweep
//! frontier surveys. Every JSON output is wrapped in an envelope recording
//! seed, parameters, and version; identical invocations produce identical
//! bytes.

use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use locq::bounds::{self, BoundThresholds, Family, SurveyOptions};
use locq::code;
use locq::complex::{self, CellComplex};
use locq::embed::{gg_embed, recertify, CoarseCertificate, EmbedParams, EmbeddedComplex};
use locq::f2::{BitMatrix, SearchBudget};
use locq::io::{
    self, CodeJson, ComplexJson, EmbeddedJson, Envelope, PlacedCodeJson,
};
use locq::locality::{certify_local, fold_torus, pad_code};

#[derive(Parser)]
#[command(
    name = "locq",
    version,
    about = "Local quantum codes: generators, coarse embeddings, locality certificates, frontier surveys"
)]
struct Cli {
    /// Seed recorded in every output and driving all randomized search.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a code or complex file.
    #[command(subcommand)]
    Gen(Gen),
    /// Measure a code: size, dimension, distances, exactness flags.
    Report {
        /// Code file (or placed-code file) to measure.
        file: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Embed a simplicial complex into the unit grid of dimension n.
    Embed {
        /// Complex file.
        file: PathBuf,
        /// Ambient dimension (2 or 3; must exceed the complex dimension).
        #[arg(long)]
        n: usize,
        /// Perturbation radius override.
        #[arg(long)]
        delta: Option<f64>,
        /// Backward-count acceptance gate override.
        #[arg(long)]
        a_max: Option<usize>,
        /// Resampling budget override.
        #[arg(long)]
        max_resamples: Option<usize>,
    },
    /// Certify a placement (or recheck an embedding's certificate).
    Certify {
        /// Placed-code file: re-derives the locality certificate.
        file: Option<PathBuf>,
        /// Embedding file to recheck instead.
        #[arg(long, requires = "complex", conflicts_with = "file")]
        embedded: Option<PathBuf>,
        /// Source complex the embedding came from.
        #[arg(long)]
        complex: Option<PathBuf>,
    },
    /// Fold a torus code onto the nonnegative quadrant lattice.
    Fold {
        /// Torus dimension.
        #[arg(long)]
        n: usize,
        /// Torus side length.
        #[arg(long)]
        l: usize,
        /// Qubit cell dimension.
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Pad a placed code with inert qubits up to a target size.
    Pad {
        /// Placed-code file.
        file: PathBuf,
        /// Total qubit count after padding.
        #[arg(long)]
        target: usize,
    },
    /// Sweep a code family and tabulate frontier ratios.
    Survey {
        /// Family to sweep.
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Torus dimension (toric family) or ambient dimension (embedded).
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Side-length sweep, inclusive: "3..6" or a single value.
        #[arg(long)]
        l: String,
        /// Record wall-clock per row (breaks byte-for-byte reruns).
        #[arg(long)]
        timings: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Read one placed code against the frontier thresholds.
    VerifyBounds {
        /// Placed-code file.
        file: PathBuf,
        /// Admissible distance-ratio multiple.
        #[arg(long, default_value_t = 4.0)]
        distance_threshold: f64,
        /// Admissible tradeoff-ratio multiple.
        #[arg(long, default_value_t = 4.0)]
        tradeoff_threshold: f64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// Toric code: qubits on the k-cells of the n-torus of side l.
    Toric {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// The cubical n-torus complex itself.
    TorusComplex {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
    },
    /// Triangulated (simplicial) torus, optionally twisted.
    TriangulatedTorus {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        w: usize,
        #[arg(long, default_value_t = 0)]
        twist: usize,
    },
    /// Simplicial cycle with m edges.
    Cycle {
        #[arg(long)]
        m: usize,
    },
    /// Hypergraph product of two classical seed matrices.
    Hgp {
        /// Seed matrix, e.g. "repetition:4".
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// CSS code from alist parity-check files (h2 empty when omitted).
    Alist {
        #[arg(long)]
        h1: PathBuf,
        #[arg(long)]
        h2: Option<PathBuf>,
    },
    /// Random degree-bounded connected 2-complex.
    Soup {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        t: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Toric,
    Padded,
    Embedded,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct BudgetArgs {
    /// Exhaustive-search cutoff on quotient dimension.
    #[arg(long)]
    exact_qubits: Option<usize>,
    /// Kernel-dimension gate for full enumeration.
    #[arg(long)]
    exact_kernel_bits: Option<usize>,
    /// Candidate-work cap for exact enumeration.
    #[arg(long)]
    max_exact_candidates: Option<u64>,
    /// Iterations of the sampled search when exact mode is out of reach.
    #[arg(long)]
    heuristic_iters: Option<u32>,
}

impl BudgetArgs {
    fn resolve(&self, seed: u64) -> SearchBudget {
        let d = SearchBudget::default();
        SearchBudget {
            exact_qubits: self.exact_qubits.unwrap_or(d.exact_qubits),
            exact_kernel_bits: self.exact_kernel_bits.unwrap_or(d.exact_kernel_bits),
            max_exact_candidates: self.max_exact_candidates.unwrap_or(d.max_exact_candidates),
            heuristic_iters: self.heuristic_iters.unwrap_or(d.heuristic_iters),
            seed,
        }
    }
    fn params(&self, seed: u64) -> serde_json::Value {
        serde_json::to_value(self.resolve(seed)).unwrap()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn emit<T: Serialize>(out: Option<&Path>, seed: u64, params: serde_json::Value, payload: T) -> Result<(), Box<dyn Error>> {
    write_text(out, &io::to_json(&Envelope::new(seed, params, payload)))
}

fn write_text(out: Option<&Path>, text: &str) -> Result<(), Box<dyn Error>> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read_envelope<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Envelope<T>, Box<dyn Error>> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(io::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))?)
}

/// Code files and placed-code files both carry a code; accept either.
fn read_code(path: &Path) -> Result<code::CssCode, Box<dyn Error>> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    if let Ok(env) = io::from_json::<Envelope<CodeJson>>(&text) {
        if let Ok(c) = (&env.payload).try_into() {
            return Ok(c);
        }
    }
    let env: Envelope<PlacedCodeJson> = io::from_json(&text)
        .map_err(|e| format!("{}: not a code or placed-code file: {e}", path.display()))?;
    Ok((&env.payload.code).try_into()?)
}

fn read_placed(path: &Path) -> Result<(code::CssCode, locq::locality::Placement), Box<dyn Error>> {
    let env: Envelope<PlacedCodeJson> = read_envelope(path)?;
    let c = (&env.payload.code).try_into()?;
    Ok((c, env.payload.placement))
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<usize>, Box<dyn Error>> {
    if let Some((a, b)) = s.split_once("..") {
        let lo: usize = a.parse()?;
        let hi: usize = b.strip_prefix('=').unwrap_or(b).parse()?;
        Ok(lo..=hi)
    } else {
        let v: usize = s.parse()?;
        Ok(v..=v)
    }
}

/// Classical seed matrices for product constructions, named "kind:size".
fn parse_seed_matrix(s: &str) -> Result<BitMatrix, Box<dyn Error>> {
    let (kind, size) = s
        .split_once(':')
        .ok_or_else(|| format!("seed matrix {s:?} is not kind:size"))?;
    let n: usize = size.parse()?;
    match kind {
        "repetition" => {
            if n < 2 {
                return Err(format!("repetition code needs length >= 2, got {n}").into());
            }
            let support: Vec<Vec<usize>> = (0..n - 1).map(|j| vec![j, j + 1]).collect();
            Ok(BitMatrix::from_support(n - 1, n, &support)?)
        }
        other => Err(format!("unknown seed matrix kind {other:?}").into()),
    }
}

fn run(cli: &Cli) -> Result<(), Box<dyn Error>> {
    let seed = cli.seed;
    let out = cli.out.as_deref();
    match &cli.cmd {
        Cmd::Gen(gen) => run_gen(gen, seed, out),
        Cmd::Report { file, budget } => {
            let c = read_code(file)?;
            let rep = code::report(&c, &budget.resolve(seed))?;
            emit(
                out,
                seed,
                json!({"command": "report", "file": file.display().to_string(), "budget": budget.params(seed)}),
                rep,
            )
        }
        Cmd::Embed {
            file,
            n,
            delta,
            a_max,
            max_resamples,
        } => {
            let env: Envelope<ComplexJson> = read_envelope(file)?;
            let x: CellComplex = (&env.payload).try_into()?;
            let mut params = EmbedParams::for_complex(&x, *n);
            params.seed = seed;
            if let Some(d) = delta {
                params.delta = *d;
            }
            if let Some(a) = a_max {
                params.a_max = *a;
            }
            if let Some(r) = max_resamples {
                params.max_resamples = *r;
            }
            let e = gg_embed(&x, &params)?;
            emit(
                out,
                seed,
                json!({"command": "embed", "file": file.display().to_string(), "params": params}),
                EmbeddedJson::from(&e),
            )
        }
        Cmd::Certify {
            file,
            embedded,
            complex,
        } => match (file, embedded) {
            (Some(file), None) => {
                let (c, p) = read_placed(file)?;
                let cert = certify_local(&c, &p);
                emit(
                    out,
                    seed,
                    json!({"command": "certify", "file": file.display().to_string()}),
                    cert,
                )
            }
            (None, Some(efile)) => {
                let xfile = complex.as_ref().expect("clap enforces --complex");
                let eenv: Envelope<EmbeddedJson> = read_envelope(efile)?;
                let e: EmbeddedComplex = (&eenv.payload).try_into()?;
                let xenv: Envelope<ComplexJson> = read_envelope(xfile)?;
                let x: CellComplex = (&xenv.payload).try_into()?;
                let cert = recertify(&x, &e)?;
                #[derive(Serialize)]
                struct Recheck {
                    certificate: CoarseCertificate,
                    matches_stored: bool,
                }
                let matches_stored = cert == e.certificate;
                emit(
                    out,
                    seed,
                    json!({
                        "command": "certify",
                        "embedded": efile.display().to_string(),
                        "complex": xfile.display().to_string(),
                    }),
                    Recheck {
                        certificate: cert,
                        matches_stored,
                    },
                )
            }
            _ => Err("certify needs a placed-code file or --embedded with --complex".into()),
        },
        Cmd::Fold { n, l, k } => {
            let (c, p) = fold_torus(*n, *l, *k)?;
            emit(
                out,
                seed,
                json!({"command": "fold", "n": n, "l": l, "k": k}),
                PlacedCodeJson {
                    code: (&c).into(),
                    placement: p,
                },
            )
        }
        Cmd::Pad { file, target } => {
            let (c, p) = read_placed(file)?;
            let (c, p) = pad_code(&c, &p, *target)?;
            emit(
                out,
                seed,
                json!({"command": "pad", "file": file.display().to_string(), "target": target}),
                PlacedCodeJson {
                    code: (&c).into(),
                    placement: p,
                },
            )
        }
        Cmd::Survey {
            family,
            n,
            l,
            timings,
            format,
            budget,
        } => {
            let sides = parse_range(l)?;
            let fam = match family {
                FamilyArg::Toric => Family::Toric { n: *n, sides },
                FamilyArg::Padded => Family::Padded { sides },
                FamilyArg::Embedded => Family::Embedded { n: *n, sides },
            };
            let opts = SurveyOptions {
                budget: budget.resolve(seed),
                thresholds: BoundThresholds::default(),
                seed,
                timings: *timings,
            };
            let rows = bounds::frontier_survey(&fam, &opts)?;
            match format {
                Format::Csv => write_text(out, &bounds::survey_csv(&rows)),
                Format::Json => emit(
                    out,
                    seed,
                    json!({"command": "survey", "family": format!("{fam:?}"), "timings": timings, "budget": budget.params(seed)}),
                    rows,
                ),
            }
        }
        Cmd::VerifyBounds {
            file,
            distance_threshold,
            tradeoff_threshold,
            budget,
        } => {
            let (c, p) = read_placed(file)?;
            let rep = code::report(&c, &budget.resolve(seed))?;
            let cert = certify_local(&c, &p);
            let t = BoundThresholds {
                distance: *distance_threshold,
                tradeoff: *tradeoff_threshold,
            };
            let b = bounds::check_bounds(&rep, &cert, &t);
            emit(
                out,
                seed,
                json!({
                    "command": "verify-bounds",
                    "file": file.display().to_string(),
                    "thresholds": t,
                    "budget": budget.params(seed),
                }),
                b,
            )
        }
    }
}

fn run_gen(gen: &Gen, seed: u64, out: Option<&Path>) -> Result<(), Box<dyn Error>> {
    match gen {
        Gen::Toric { n, l, k } => {
            let c = code::toric_code(*n, *l, *k)?;
            emit(
                out,
                seed,
                json!({"command": "gen toric", "n": n, "l": l, "k": k}),
                CodeJson::from(&c),
            )
        }
        Gen::TorusComplex { n, l } => {
            let x = complex::cubical_torus(*n, *l)?;
            emit(
                out,
                seed,
                json!({"command": "gen torus-complex", "n": n, "l": l}),
                ComplexJson::from(&x),
            )
        }
        Gen::TriangulatedTorus { l, w, twist } => {
            let x = complex::triangulated_torus(*l, *w, *twist)?;
            emit(
                out,
                seed,
                json!({"command": "gen triangulated-torus", "l": l, "w": w, "twist": twist}),
                ComplexJson::from(&x),
            )
        }
        Gen::Cycle { m } => {
            let x = complex::cycle_complex(*m)?;
            emit(
                out,
                seed,
                json!({"command": "gen cycle", "m": m}),
                ComplexJson::from(&x),
            )
        }
        Gen::Hgp { a, b } => {
            let ma = parse_seed_matrix(a)?;
            let mb = parse_seed_matrix(b)?;
            let c = code::hypergraph_product(&ma, &mb);
            emit(
                out,
                seed,
                json!({"command": "gen hgp", "a": a, "b": b}),
                CodeJson::from(&c),
            )
        }
        Gen::Alist { h1, h2 } => {
            let m1 = io::parse_alist(&fs::read_to_string(h1)?)?;
            let m2 = match h2 {
                Some(p) => io::parse_alist(&fs::read_to_string(p)?)?,
                None => BitMatrix::zeros(0, m1.cols()),
            };
            let c = code::CssCode::new(m1, m2)?;
            emit(
                out,
                seed,
                json!({
                    "command": "gen alist",
                    "h1": h1.display().to_string(),
                    "h2": h2.as_ref().map(|p| p.display().to_string()),
                }),
                CodeJson::from(&c),
            )
        }
        Gen::Soup { v, t } => {
            let x = complex::random_triangle_soup(*v, *t, seed);
            emit(
                out,
                seed,
                json!({"command": "gen soup", "v": v, "t": t}),
                ComplexJson::from(&x),
            )
        }
    }
}
