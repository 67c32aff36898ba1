//! Deterministic sampling of field elements and points.
//!
//! Every draw is a pure function of `(seed, index)`: each index gets its own
//! ChaCha stream, so disjoint index ranges can be drawn in parallel and still
//! reproduce a sequential run.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::{Exponent, FieldElement, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub seed: u64,
    pub samples: usize,
    /// Share of the budget spent on structured probe points.
    pub structured_fraction: Exponent,
    pub coefficient_bound: Exponent,
    pub exponent_bound: Exponent,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: 0,
            samples: 2000,
            structured_fraction: Exponent::new(1, 4),
            coefficient_bound: Exponent::from_integer(10),
            exponent_bound: Exponent::from_integer(4),
        }
    }
}

impl SampleConfig {
    pub fn with_seed(seed: u64) -> Self {
        SampleConfig { seed, ..Self::default() }
    }

    pub fn samples(mut self, n: usize) -> Self {
        self.samples = n;
        self
    }

    pub fn structured_budget(&self) -> usize {
        let f = self.structured_fraction;
        (self.samples as i64 * f.numer() / f.denom()) as usize
    }
}

/// Shapes a drawn element can take before it is scaled into the ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DrawKind {
    /// An exact rational (possibly zero).
    Rational,
    /// A unit with a small random residue and random higher terms.
    Unit,
    /// An element of the maximal ideal.
    Infinitesimal,
    /// A unit whose residue comes from a large rational set.
    GenericResidue,
}

/// Stream-per-index generator for a fixed configuration.
#[derive(Clone, Debug)]
pub struct Sampler {
    config: SampleConfig,
}

/// Generator for the `index`-th draw under `seed`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

impl Sampler {
    pub fn new(config: SampleConfig) -> Self {
        Sampler { config }
    }

    pub fn config(&self) -> &SampleConfig {
        &self.config
    }

    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        rng_for(self.config.seed, index)
    }

    fn coefficient_bound(&self) -> i64 {
        self.config.coefficient_bound.to_integer().max(1)
    }

    /// Random rational with `|q| <= bound`, denominators up to 8.
    pub fn small_rational(&self, rng: &mut ChaCha8Rng, nonzero: bool) -> Rational {
        let d = rng.gen_range(1..=8i64);
        let b = self.coefficient_bound() * d;
        loop {
            let n = rng.gen_range(-b..=b);
            if n != 0 || !nonzero {
                return Rational::new(BigInt::from(n), BigInt::from(d));
            }
        }
    }

    /// Residue drawn from a set of at least `1000 * spread` rationals.
    pub fn generic_rational(&self, rng: &mut ChaCha8Rng, spread: usize) -> Rational {
        let range = (1000 * spread.max(1)) as i64;
        let d = rng.gen_range(1..=7i64);
        loop {
            let n = rng.gen_range(-range..=range);
            if n != 0 {
                return Rational::new(BigInt::from(n), BigInt::from(d));
            }
        }
    }

    fn positive_exponent(&self, rng: &mut ChaCha8Rng) -> Exponent {
        let bound = self.config.exponent_bound.max(Exponent::new(1, 4));
        let d = rng.gen_range(1..=4i64);
        let top = (bound * d).floor().to_integer().max(1);
        Exponent::new(rng.gen_range(1..=top), d)
    }

    fn higher_terms(&self, rng: &mut ChaCha8Rng, base: Exponent) -> Vec<(Exponent, Rational)> {
        let count = rng.gen_range(0..=3);
        (0..count)
            .map(|_| (base + self.positive_exponent(rng), self.small_rational(rng, true)))
            .collect()
    }

    pub fn element_of_kind(&self, rng: &mut ChaCha8Rng, kind: DrawKind, spread: usize) -> FieldElement {
        let zero = Exponent::zero();
        match kind {
            DrawKind::Rational => FieldElement::from_rational(self.small_rational(rng, false)),
            DrawKind::Unit => {
                let mut t = vec![(zero, self.small_rational(rng, true))];
                t.extend(self.higher_terms(rng, zero));
                FieldElement::new(t, None)
            }
            DrawKind::Infinitesimal => {
                let lead = self.positive_exponent(rng);
                let mut t = vec![(lead, self.small_rational(rng, true))];
                t.extend(self.higher_terms(rng, lead));
                FieldElement::new(t, None)
            }
            DrawKind::GenericResidue => {
                let mut t = vec![(zero, self.generic_rational(rng, spread))];
                t.extend(self.higher_terms(rng, zero));
                FieldElement::new(t, None)
            }
        }
    }

    /// One element of valuation at least `radius`.
    pub fn element(&self, rng: &mut ChaCha8Rng, radius: Exponent) -> FieldElement {
        let kind = match rng.gen_range(0..10) {
            0..=1 => DrawKind::Rational,
            2..=5 => DrawKind::Unit,
            6..=7 => DrawKind::Infinitesimal,
            _ => DrawKind::GenericResidue,
        };
        self.element_of_kind(rng, kind, 1).shift(radius)
    }

    /// Point of the unit polydisc drawn from stream `index`.
    pub fn ball_point(&self, index: u64, n: usize) -> Vec<FieldElement> {
        let mut rng = self.rng(index);
        (0..n).map(|_| self.element(&mut rng, Exponent::zero())).collect()
    }

    /// Point with every coordinate a unit whose residue is drawn from a large set.
    pub fn generic_point(&self, index: u64, n: usize, spread: usize) -> Vec<FieldElement> {
        let mut rng = self.rng(index);
        (0..n)
            .map(|_| self.element_of_kind(&mut rng, DrawKind::GenericResidue, spread))
            .collect()
    }
}

/// `n` elements with valuation at least `radius`, deterministic in `config.seed`.
pub fn sample_ball(n: usize, radius: Exponent, config: &SampleConfig) -> Vec<FieldElement> {
    let sampler = Sampler::new(config.clone());
    (0..n as u64)
        .map(|i| {
            let mut rng = sampler.rng(i);
            sampler.element(&mut rng, radius)
        })
        .collect()
}
