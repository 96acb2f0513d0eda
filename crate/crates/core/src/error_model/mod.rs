//! Bit-flip logical error model for one cycle of `n` syndrome rounds.
//!
//! Flip sources are independent symmetric events and combine by odd parity:
//! `P(odd) = (1 - prod(1 - 2 p_k)) / 2`. A cycle fails if (a) too many qubits
//! flip between two syndrome rounds, or (b) a majority of a constraint's `n`
//! repeated syndrome readings are wrong.

mod chain;
mod monte_carlo;

pub use chain::{chain_circuit, chain_error_locality_check, propagate_x, ChainReport, Injection};
pub use monte_carlo::monte_carlo_logical_error;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which qubits scenario (a) counts flips over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlipScope {
    /// All `n(n+1)/2` qubits of the chip against one threshold.
    #[default]
    Chip,
    /// Each logical line (`n` qubits) separately; any line over threshold fails.
    Line,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorParams {
    pub n: usize,
    /// Flip probability per qubit before each syndrome round.
    pub p1: f64,
    /// Flip probability per qubit per CNOT.
    pub p2: f64,
    pub p_init: f64,
    pub p_meas: f64,
    #[serde(default)]
    pub scope: FlipScope,
}

impl ErrorParams {
    /// All four fault probabilities set to `p`.
    pub fn uniform(n: usize, p: f64) -> Self {
        Self {
            n,
            p1: p,
            p2: p,
            p_init: p,
            p_meas: p,
            scope: FlipScope::Chip,
        }
    }

    pub fn with_scope(mut self, scope: FlipScope) -> Self {
        self.scope = scope;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::TooFewLogical(self.n));
        }
        for (name, p) in [("p1", self.p1), ("p2", self.p2), ("p_init", self.p_init), ("p_meas", self.p_meas)] {
            if !(0.0..=0.5).contains(&p) {
                return Err(Error::Parse {
                    location: name.into(),
                    message: format!("probability {p} outside [0, 0.5]"),
                });
            }
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    pub fn num_constraints(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// Smallest flip count scenario (a) cannot correct: `floor((n-1)/2) + 1`.
    pub fn flip_threshold(&self) -> usize {
        (self.n - 1) / 2 + 1
    }

    /// Smallest faulty-reading count that defeats the majority vote; ties fail.
    pub fn vote_threshold(&self) -> usize {
        self.n.div_ceil(2)
    }
}

/// Probability of an odd number of events among independent flips.
pub fn odd_parity(ps: &[f64]) -> f64 {
    0.5 * (1.0 - ps.iter().map(|p| 1.0 - 2.0 * p).product::<f64>())
}

/// Per-qubit flip probability over one round: one idle event and four CNOTs.
pub fn round_flip_probability(p: &ErrorParams) -> f64 {
    odd_parity(&[p.p1, p.p2, p.p2, p.p2, p.p2])
}

/// Probability that one syndrome reading is wrong.
pub fn syndrome_fault_probability(p: &ErrorParams) -> f64 {
    odd_parity(&[p.p_init, p.p_meas, p.p2, p.p2, p.p2, p.p2])
}

/// `P(X >= k)` for `X ~ Binomial(trials, p)`, summed in log space.
pub fn binomial_tail(trials: usize, p: f64, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if k > trials || p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    let mut ln_choose = 0.0;
    let mut terms = Vec::with_capacity(trials + 1 - k);
    for j in 0..=trials {
        if j >= k {
            terms.push(ln_choose + j as f64 * lp + (trials - j) as f64 * lq);
        }
        if j < trials {
            ln_choose += ((trials - j) as f64).ln() - ((j + 1) as f64).ln();
        }
    }
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|t| (t - max).exp()).sum();
    (max + sum.ln()).exp().min(1.0)
}

/// `1 - (1 - p)^times` without cancellation for small `p`.
pub fn any_of(p: f64, times: usize) -> f64 {
    if p >= 1.0 {
        return if times == 0 { 0.0 } else { 1.0 };
    }
    -(times as f64 * (-p).ln_1p()).exp_m1()
}

/// Per-round probability that scenario (a) fires.
pub fn scenario_a_round(p: &ErrorParams) -> f64 {
    let q = round_flip_probability(p);
    match p.scope {
        FlipScope::Chip => binomial_tail(p.num_qubits(), q, p.flip_threshold()),
        FlipScope::Line => any_of(binomial_tail(p.n, q, p.flip_threshold()), p.n),
    }
}

pub fn scenario_a_probability(p: &ErrorParams) -> f64 {
    any_of(scenario_a_round(p), p.n)
}

/// Probability that one constraint's majority vote is wrong.
pub fn scenario_b_constraint(p: &ErrorParams) -> f64 {
    binomial_tail(p.n, syndrome_fault_probability(p), p.vote_threshold())
}

pub fn scenario_b_probability(p: &ErrorParams) -> f64 {
    any_of(scenario_b_constraint(p), p.num_constraints())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub params: ErrorParams,
    pub p_round_flip: f64,
    pub p_syndrome_fault: f64,
    pub p_a: f64,
    pub p_b: f64,
    pub p_l: f64,
    pub method: Method,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    /// Binomial standard error of `p_l` (Monte Carlo only).
    pub std_error: Option<f64>,
}

pub fn logical_error_probability(p: &ErrorParams) -> Result<ErrorReport> {
    p.validate()?;
    let p_a = scenario_a_probability(p);
    let p_b = scenario_b_probability(p);
    Ok(ErrorReport {
        params: *p,
        p_round_flip: round_flip_probability(p),
        p_syndrome_fault: syndrome_fault_probability(p),
        p_a,
        p_b,
        p_l: p_a + p_b - p_a * p_b,
        method: Method::ClosedForm,
        trials: None,
        seed: None,
        std_error: None,
    })
}

/// Parses `start:stop:logN`, `start:stop:linN`, or a comma list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |message: String| Error::Parse {
        location: "grid".into(),
        message,
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| bad(format!("{s:?}: {e}")));
    let parts: Vec<&str> = spec.split(':').collect();
    let values = match parts.as_slice() {
        [start, stop, steps] => {
            let (a, b) = (num(start)?, num(stop)?);
            let (log, count) = if let Some(c) = steps.strip_prefix("log") {
                (true, c)
            } else if let Some(c) = steps.strip_prefix("lin") {
                (false, c)
            } else {
                return Err(bad(format!("step spec {steps:?} must be logN or linN")));
            };
            let count: usize = count.parse().map_err(|_| bad(format!("bad point count {count:?}")))?;
            if count == 0 {
                return Err(bad("point count must be positive".into()));
            }
            if log && (a <= 0.0 || b <= 0.0) {
                return Err(bad("log grid needs positive bounds".into()));
            }
            (0..count)
                .map(|k| {
                    let t = if count == 1 { 0.0 } else { k as f64 / (count - 1) as f64 };
                    if log {
                        (a.ln() + t * (b.ln() - a.ln())).exp()
                    } else {
                        a + t * (b - a)
                    }
                })
                .collect()
        }
        [_] => spec.split(',').map(num).collect::<Result<Vec<_>>>()?,
        _ => return Err(bad(format!("cannot parse {spec:?}"))),
    };
    if let Some(v) = values.iter().find(|v| !(0.0..=0.5).contains(*v)) {
        return Err(bad(format!("probability {v} outside [0, 0.5]")));
    }
    Ok(values)
}

pub const SWEEP_HEADER: &str = "n,p_phys,p_a,p_b,p_L";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub p_phys: f64,
    pub p_a: f64,
    pub p_b: f64,
    pub p_l: f64,
}

/// Closed-form `p_L` over every `(n, p_phys)` pair with all faults set to `p_phys`.
pub fn sweep(ns: &[usize], grid: &[f64], scope: FlipScope) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(ns.len() * grid.len());
    for &n in ns {
        for &p in grid {
            let r = logical_error_probability(&ErrorParams::uniform(n, p).with_scope(scope))?;
            rows.push(SweepRow {
                n,
                p_phys: p,
                p_a: r.p_a,
                p_b: r.p_b,
                p_l: r.p_l,
            });
        }
    }
    Ok(rows)
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!("{},{:e},{:e},{:e},{:e}", self.n, self.p_phys, self.p_a, self.p_b, self.p_l)
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let m = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / m, b + y / m));
    let (num, den) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    num / den
}
