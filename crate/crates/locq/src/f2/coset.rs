//! Minimum-weight search over a coset space: the lightest vector in
//! span(kernel) ∖ span(image).
//!
//! Three strategies, chosen by instance shape:
//!
//! * full enumeration of the kernel organised coset-by-coset (an outer Gray
//!   walk over quotient representatives, an inner Gray walk over the excluded
//!   subspace, so no membership tests are ever needed);
//! * an increasing information-weight search over the reduced kernel basis:
//!   combinations of `p` basis rows have at least `p` ones on the pivot
//!   columns, so once a weight-`w` vector is found, finishing level `w`
//!   proves minimality and settles ties;
//! * a seeded information-set heuristic: repeated elimination under random
//!   column priority, harvesting the resulting basis rows as candidates.
//!
//! The first two are exact; the heuristic only ever reports an upper bound
//! and is flagged as such. Membership in the excluded subspace is tracked by
//! quotient coordinates packed into a word, which turn a subspace test into
//! a single comparison against zero.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::solve::Rref;
use super::{BitVec, F2Error, Weight};

/// Cost limits for the search. The defaults keep exact mode comfortably
/// under a second on one core for the code families this crate generates.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchBudget {
    /// Exact answers are only attempted when the quotient dimension is at
    /// most this; larger quotients always fall through to the heuristic.
    pub exact_qubits: usize,
    /// Kernel-dimension gate for the full-enumeration strategy.
    pub exact_kernel_bits: usize,
    /// Work cap for exact enumeration, in candidate-words (candidates
    /// visited × packed words per vector).
    pub max_exact_candidates: u64,
    /// Information-set iterations in heuristic mode.
    pub heuristic_iters: u32,
    /// Seed for the heuristic's random column priorities.
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            exact_qubits: 20,
            exact_kernel_bits: 24,
            max_exact_candidates: 20_000_000,
            heuristic_iters: 2000,
            seed: 7,
        }
    }
}

/// Search outcome. `witness` is `None` exactly when the quotient is trivial
/// and the weight is infinite.
#[derive(Clone, Debug)]
pub struct CosetSearch {
    pub weight: Weight,
    pub witness: Option<BitVec>,
    /// True when the result is provably minimal, not just an upper bound.
    pub exact: bool,
    /// Candidates examined; a cost diagnostic, not part of the answer.
    pub enumerated: u64,
}

/// Running best with the deterministic tie-break: smallest weight, then
/// lexicographically smallest support.
struct Best {
    weight: u64,
    vec: BitVec,
}

impl Best {
    fn offer(slot: &mut Option<Best>, weight: u64, v: &BitVec) {
        match slot {
            Some(b) if weight > b.weight => {}
            Some(b) if weight == b.weight => {
                if v.cmp_support_lex(&b.vec).is_lt() {
                    b.vec = v.clone();
                }
            }
            _ => *slot = Some(Best { weight, vec: v.clone() }),
        }
    }
}

/// Minimum hamming weight over span(kernel_basis) ∖ span(image_basis), with
/// a witness attaining it. Infinite when the quotient is trivial. Exactness
/// is governed by `budget`; heuristic results are upper bounds and say so.
pub fn min_coset_weight(
    kernel_basis: &[BitVec],
    image_basis: &[BitVec],
    budget: &SearchBudget,
) -> Result<CosetSearch, F2Error> {
    let cols = match kernel_basis.iter().chain(image_basis).next() {
        Some(v) => v.len(),
        None => {
            return Ok(CosetSearch {
                weight: Weight::Infinite,
                witness: None,
                exact: true,
                enumerated: 0,
            })
        }
    };
    for v in kernel_basis.iter().chain(image_basis) {
        if v.len() != cols {
            return Err(F2Error::ShapeMismatch(format!(
                "vectors of length {} and {} in one search",
                cols,
                v.len()
            )));
        }
    }

    let mut kernel = Rref::new(cols);
    for v in kernel_basis {
        kernel.insert(v);
    }
    for v in image_basis {
        if !kernel.contains(v) {
            return Err(F2Error::ImageNotContained);
        }
    }
    let mut image = Rref::new(cols);
    for v in image_basis {
        image.insert(v);
    }

    let k = kernel.rank();
    let quotient_dim = k - image.rank();
    if quotient_dim == 0 {
        return Ok(CosetSearch {
            weight: Weight::Infinite,
            witness: None,
            exact: true,
            enumerated: 0,
        });
    }

    // Representatives spanning a complement of the image inside the kernel.
    let mut reps = Vec::with_capacity(quotient_dim);
    let mut span = clone_rref(&image, cols);
    for v in kernel_basis {
        let r = span.reduce(v);
        if !r.is_zero() {
            span.insert(&r);
            reps.push(r);
        }
    }
    debug_assert_eq!(reps.len(), quotient_dim);

    let words = cols.div_ceil(64) as u64;
    let exact_allowed = quotient_dim <= budget.exact_qubits && quotient_dim <= 64;

    if exact_allowed
        && k <= budget.exact_kernel_bits
        && k < 63
        && (1u64 << k).saturating_mul(words) <= budget.max_exact_candidates
    {
        return Ok(enumerate_cosets(&reps, image.rows()));
    }
    if exact_allowed {
        if let Some(found) = level_search(&kernel, &image, budget, words) {
            return Ok(found);
        }
    }
    Ok(information_set_search(&kernel, &image, quotient_dim, budget))
}

// Rref intentionally has no public Clone; rebuilding from rows is cheap at
// these sizes and keeps the invariant-bearing type opaque.
fn clone_rref(r: &Rref, cols: usize) -> Rref {
    let mut out = Rref::new(cols);
    for row in r.rows() {
        out.insert(row);
    }
    out
}

/// Full enumeration: outer Gray walk over nonzero representative
/// combinations, inner Gray walk over the excluded subspace. Every vector
/// visited is outside the subspace by construction.
fn enumerate_cosets(reps: &[BitVec], subspace: &[BitVec]) -> CosetSearch {
    let q = reps.len();
    let w = subspace.len();
    let mut cur = BitVec::zeros(reps[0].len());
    let mut best: Option<Best> = None;
    let mut enumerated = 0u64;
    for t in 1u64..1 << q {
        cur.xor_assign(&reps[t.trailing_zeros() as usize]);
        enumerated += 1;
        Best::offer(&mut best, cur.weight(), &cur);
        for s in 1u64..1 << w {
            cur.xor_assign(&subspace[s.trailing_zeros() as usize]);
            enumerated += 1;
            Best::offer(&mut best, cur.weight(), &cur);
        }
    }
    let best = best.expect("nontrivial quotient has elements");
    CosetSearch {
        weight: Weight::Finite(best.weight),
        witness: Some(best.vec),
        exact: true,
        enumerated,
    }
}

/// Exact search by increasing information weight. The reduced kernel rows
/// are the generators; a combination of `p` of them has exactly `p` ones on
/// the pivot columns, so every vector of weight ≤ p appears by level p.
/// Completing level `best.weight` therefore proves minimality and settles
/// the support tie-break. Returns None when the work cap would be exceeded.
fn level_search(
    kernel: &Rref,
    image: &Rref,
    budget: &SearchBudget,
    words: u64,
) -> Option<CosetSearch> {
    let gens = kernel.rows();
    let k = gens.len();
    let tags = quotient_tags(gens, image)?;

    let mut best: Option<Best> = None;
    let mut enumerated = 0u64;
    let mut scratch = BitVec::zeros(kernel.cols());
    for p in 1..=k {
        let level_cost = binom_saturating(k as u64, p as u64).saturating_mul(words);
        if enumerated.saturating_mul(words).saturating_add(level_cost)
            > budget.max_exact_candidates
        {
            return None;
        }
        combos(gens, &tags, p, 0, &mut scratch, 0, &mut best, &mut enumerated);
        if let Some(b) = &best {
            if b.weight <= p as u64 {
                break;
            }
        }
    }
    let best = best.expect("some generator lies outside the image");
    Some(CosetSearch {
        weight: Weight::Finite(best.weight),
        witness: Some(best.vec),
        exact: true,
        enumerated,
    })
}

fn combos(
    gens: &[BitVec],
    tags: &[u64],
    p: usize,
    start: usize,
    cur: &mut BitVec,
    tag: u64,
    best: &mut Option<Best>,
    enumerated: &mut u64,
) {
    if p == 0 {
        *enumerated += 1;
        if tag != 0 {
            Best::offer(best, cur.weight(), cur);
        }
        return;
    }
    for i in start..=gens.len() - p {
        cur.xor_assign(&gens[i]);
        combos(gens, tags, p - 1, i + 1, cur, tag ^ tags[i], best, enumerated);
        cur.xor_assign(&gens[i]);
    }
}

/// Per-generator quotient coordinates. Reduction against the image basis is
/// linear, so the coordinate word of any combination is the XOR of its
/// generators' words, and a vector lies in the image iff its word is zero.
/// None when the quotient needs more than 64 coordinates.
fn quotient_tags(gens: &[BitVec], image: &Rref) -> Option<Vec<u64>> {
    let residues: Vec<BitVec> = gens.iter().map(|g| image.reduce(g)).collect();
    let mut quot = Rref::new(image.cols());
    for r in &residues {
        quot.insert(r);
    }
    if quot.rank() > 64 {
        return None;
    }
    Some(residues.iter().map(|r| quot.coords_u64(r)).collect())
}

/// Information-set heuristic: eliminate the kernel basis under a random
/// column priority; the rows of the resulting basis are the candidates.
/// Deterministic for a fixed budget (the seed fixes the priorities).
fn information_set_search(
    kernel: &Rref,
    image: &Rref,
    quotient_dim: usize,
    budget: &SearchBudget,
) -> CosetSearch {
    let cols = kernel.cols();
    let gen_tags = if quotient_dim <= 64 {
        quotient_tags(kernel.rows(), image)
    } else {
        None
    };
    let outside = |v: &BitVec, tag: Option<u64>| match tag {
        Some(t) => t != 0,
        None => !image.contains(v),
    };

    let mut best: Option<Best> = None;
    let mut enumerated = 0u64;
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut perm: Vec<usize> = (0..cols).collect();
    for _ in 0..budget.heuristic_iters {
        perm.shuffle(&mut rng);
        let mut rows: Vec<BitVec> = kernel.rows().to_vec();
        let mut tags: Vec<u64> = gen_tags.clone().unwrap_or_default();
        let mut pivoted = vec![false; rows.len()];
        let mut remaining = rows.len();
        for &c in &perm {
            if remaining == 0 {
                break;
            }
            let Some(pi) = (0..rows.len()).find(|&i| !pivoted[i] && rows[i].get(c)) else {
                continue;
            };
            pivoted[pi] = true;
            remaining -= 1;
            let prow = rows[pi].clone();
            let ptag = tags.get(pi).copied();
            for i in 0..rows.len() {
                if i != pi && rows[i].get(c) {
                    rows[i].xor_assign(&prow);
                    if let Some(t) = ptag {
                        tags[i] ^= t;
                    }
                }
            }
        }
        for (i, row) in rows.iter().enumerate() {
            enumerated += 1;
            let weight = row.weight();
            let worth = match &best {
                Some(b) => weight <= b.weight,
                None => true,
            };
            if worth && outside(row, gen_tags.as_ref().map(|_| tags[i])) {
                Best::offer(&mut best, weight, row);
            }
        }
    }
    // The eliminated rows always form a basis of the kernel, and some basis
    // element lies outside the image whenever the quotient is nontrivial.
    let best = best.expect("basis meets the coset space");
    CosetSearch {
        weight: Weight::Finite(best.weight),
        witness: Some(best.vec),
        exact: false,
        enumerated,
    }
}

fn binom_saturating(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc * (n - k + i) as u128 / i as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}
