//! Sampling oracle for the closed-form cycle failure probability.

use rand::distr::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{round_flip_probability, syndrome_fault_probability, ErrorParams, ErrorReport, FlipScope, Method};
use crate::error::{Error, Result};
use crate::layout::build_layout;

/// Trials per independently seeded chunk. Fixed so results do not depend on
/// how many worker threads run the chunks.
const CHUNK: u64 = 4096;

struct Sampler {
    flip: Bernoulli,
    fault: Bernoulli,
    /// Qubit indices of every logical line (line scope only).
    lines: Vec<Vec<usize>>,
}

impl Sampler {
    /// Whether scenarios (a) and (b) fire in one cycle.
    fn trial(&self, p: &ErrorParams, rng: &mut ChaCha8Rng, flips: &mut [bool]) -> (bool, bool) {
        let mut a = false;
        for _ in 0..p.n {
            for f in flips.iter_mut() {
                *f = self.flip.sample(rng);
            }
            a |= match p.scope {
                FlipScope::Chip => flips.iter().filter(|f| **f).count() >= p.flip_threshold(),
                FlipScope::Line => self
                    .lines
                    .iter()
                    .any(|l| l.iter().filter(|&&k| flips[k]).count() >= p.flip_threshold()),
            };
        }
        let mut b = false;
        for _ in 0..p.num_constraints() {
            let wrong = (0..p.n).filter(|_| self.fault.sample(rng)).count();
            b |= wrong >= p.vote_threshold();
        }
        (a, b)
    }
}

/// Samples `trials` syndrome cycles. Each qubit flips independently per
/// round and each syndrome reading is wrong independently, so this shares no
/// arithmetic with the binomial tails of the closed form.
pub fn monte_carlo_logical_error(p: &ErrorParams, trials: u64, seed: u64) -> Result<ErrorReport> {
    p.validate()?;
    if trials == 0 {
        return Err(Error::Parse {
            location: "trials".into(),
            message: "need at least one trial".into(),
        });
    }
    let q = round_flip_probability(p);
    let s = syndrome_fault_probability(p);
    let bern = |x: f64| {
        Bernoulli::new(x).map_err(|e| Error::Parse {
            location: "probability".into(),
            message: e.to_string(),
        })
    };
    let lines = match p.scope {
        FlipScope::Chip => Vec::new(),
        FlipScope::Line => {
            let layout = build_layout(p.n)?;
            let index = |id| layout.qubits().iter().position(|q| *q == id).expect("line qubit in layout");
            layout.lines().iter().map(|l| l.path.iter().map(|id| index(*id)).collect()).collect()
        }
    };
    let sampler = Sampler {
        flip: bern(q)?,
        fault: bern(s)?,
        lines,
    };
    let chunks = trials.div_ceil(CHUNK);
    let tally = |(a, b, l): (u64, u64, u64), (x, y): (bool, bool)| (a + x as u64, b + y as u64, l + (x || y) as u64);
    let (fa, fb, fl) = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let count = CHUNK.min(trials - k * CHUNK);
            let mut flips = vec![false; p.num_qubits()];
            (0..count).map(|_| sampler.trial(p, &mut rng, &mut flips)).fold((0, 0, 0), tally)
        })
        .reduce(|| (0, 0, 0), |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2));
    let frac = |c: u64| c as f64 / trials as f64;
    let rate = frac(fl);
    Ok(ErrorReport {
        params: *p,
        p_round_flip: q,
        p_syndrome_fault: s,
        p_a: frac(fa),
        p_b: frac(fb),
        p_l: rate,
        method: Method::MonteCarlo,
        trials: Some(trials),
        seed: Some(seed),
        std_error: Some((rate * (1.0 - rate) / trials as f64).sqrt()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_never_fails() {
        let r = monte_carlo_logical_error(&ErrorParams::uniform(3, 0.0), 5000, 1).unwrap();
        assert_eq!(r.p_l, 0.0);
    }

    #[test]
    fn deterministic_per_seed() {
        let p = ErrorParams::uniform(3, 0.02);
        let a = monte_carlo_logical_error(&p, 10_000, 9).unwrap();
        let b = monte_carlo_logical_error(&p, 10_000, 9).unwrap();
        assert_eq!(a.p_l, b.p_l);
    }

    #[test]
    fn rejects_zero_trials() {
        assert!(monte_carlo_logical_error(&ErrorParams::uniform(3, 0.0), 0, 1).is_err());
    }
}
