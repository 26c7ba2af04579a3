//! Seeded random characteristic matrices over a fixed complex.
//!
//! Each draw fills the whole `n × m` matrix with uniform random bits and is
//! rejected unless the columns on every facet are independent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::charmap::{classify_pullback, CharacteristicMatrix, PullbackLabel};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::simplicial::SimplicialComplex;
use crate::smallcover::{evaluate_conditions, RealToricSpace};

/// Total draws allowed per requested sample before giving up.
pub const DRAWS_PER_SAMPLE: u64 = 100_000;

pub struct Sampler {
    rng: ChaCha8Rng,
    n: usize,
    pub rejections: u64,
}

impl Sampler {
    pub fn new(k: &SimplicialComplex, seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            n: (k.dim() + 1).max(0) as usize,
            rejections: 0,
        }
    }

    /// Draws until a valid matrix appears, or `max_draws` draws have failed.
    pub fn sample(&mut self, k: &SimplicialComplex, max_draws: u64) -> Result<CharacteristicMatrix> {
        for _ in 0..max_draws {
            let columns: Vec<BitVec> = (0..k.vertex_count())
                .map(|_| BitVec::from_bits((0..self.n).map(|_| self.rng.random::<bool>())))
                .collect();
            let matrix = BitMatrix::from_columns(&columns, self.n)?;
            match CharacteristicMatrix::validate(k, &matrix) {
                Ok(m) => return Ok(m),
                Err(Error::DependentFacet { .. }) => self.rejections += 1,
                Err(e) => return Err(e),
            }
        }
        Err(Error::SamplingExhausted(self.rejections))
    }
}

/// One sample whose conditions disagree while the hypotheses hold.
#[derive(Clone, Debug)]
pub struct Disagreement {
    pub sample: usize,
    pub lambda: BitMatrix,
    pub conditions: [bool; 7],
}

#[derive(Clone, Debug)]
pub struct FuzzSummary {
    pub complex: String,
    pub seed: u64,
    pub samples: usize,
    pub rejections: u64,
    /// Samples where the hypotheses held and all seven conditions agreed.
    pub agreements: usize,
    /// Samples where the hypotheses failed, so nothing was asserted.
    pub skipped: usize,
    pub simplex_pullbacks: usize,
    pub linear_models: usize,
    pub disagreements: Vec<Disagreement>,
}

/// Evaluates the seven conditions on `samples` random matrices over `k`.
pub fn run_fuzz(name: &str, k: &SimplicialComplex, samples: usize, seed: u64) -> Result<FuzzSummary> {
    let mut sampler = Sampler::new(k, seed);
    let budget = DRAWS_PER_SAMPLE.saturating_mul(samples.max(1) as u64);
    let mut summary = FuzzSummary {
        complex: name.to_string(),
        seed,
        samples,
        rejections: 0,
        agreements: 0,
        skipped: 0,
        simplex_pullbacks: 0,
        linear_models: 0,
        disagreements: Vec::new(),
    };
    for sample in 0..samples {
        let remaining = budget.saturating_sub(sampler.rejections);
        let m = sampler.sample(k, remaining)?;
        match classify_pullback(&m)?.label {
            PullbackLabel::LinearModel => {
                summary.linear_models += 1;
                summary.simplex_pullbacks += 1;
            }
            PullbackLabel::SimplexProper => summary.simplex_pullbacks += 1,
            PullbackLabel::NotSimplex => {}
        }
        let lambda = m.matrix().clone();
        let space = RealToricSpace::new(k.clone(), m)?;
        let report = evaluate_conditions(&space)?;
        match report.equivalence_verdict() {
            None => summary.skipped += 1,
            Some(true) => summary.agreements += 1,
            Some(false) => summary.disagreements.push(Disagreement {
                sample,
                lambda,
                conditions: report.conditions,
            }),
        }
    }
    summary.rejections = sampler.rejections;
    Ok(summary)
}
