//! Random-walk reformulations of the counting problem.
//!
//! Two exact routes and one randomized route live here. The dynamic
//! program walks `Z^p` with unit steps and reads off the probability of
//! finishing on the diagonal `(t, ..., t)`, which equals the two-row
//! census probability at modulus `2p`. The Monte Carlo estimator drives
//! the general reformulation: a uniformly random column vector
//! `e` in `Z_q^M` induces the increment `(e_i - e_j) mod q` over row
//! pairs, and a matrix is partial Butson exactly when the summed
//! increments vanish coordinatewise. Hits are decided by the exact
//! cyclotomic test, never by float magnitude.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cyclotomic::vanishing_tester;
use crate::error::Error;
use crate::matrices::{brute_force_census, ExactProbability};
use crate::primes::is_prime;

/// Exact distribution of a lattice walk after a fixed number of steps:
/// integer path counts per endpoint, with the denominator
/// `|step alphabet|^steps`.
#[derive(Debug, Clone)]
pub struct WalkDistribution {
    dimension: usize,
    weights: HashMap<Vec<i64>, BigUint>,
    steps_taken: u64,
    denominator: BigUint,
}

impl WalkDistribution {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps_taken
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    pub fn weights(&self) -> &HashMap<Vec<i64>, BigUint> {
        &self.weights
    }

    pub fn weight_at(&self, point: &[i64]) -> BigUint {
        self.weights.get(point).cloned().unwrap_or_default()
    }

    /// Total path count; equals the denominator when no mass was lost.
    pub fn total_weight(&self) -> BigUint {
        self.weights.values().sum()
    }

    /// Sum of weights over the diagonal points `(t, ..., t)`.
    pub fn diagonal_weight(&self) -> BigUint {
        let n = self.steps_taken as i64;
        let mut acc = BigUint::zero();
        let mut t = -n;
        while t <= n {
            acc += self.weight_at(&vec![t; self.dimension]);
            t += 1;
        }
        acc
    }
}

/// Dense dynamic program over `[-n, n]^p` with unit steps in both
/// directions along each axis.
///
/// Weights are held in `u128`; the feasibility check guarantees the total
/// mass `(2p)^n` fits, and the per-step invariant `sum = (2p)^k` is
/// asserted in debug builds.
struct DenseWalk {
    p: usize,
    n: usize,
    side: usize,
    weights: Vec<u128>,
}

impl DenseWalk {
    fn new(p: u32, n: u64, budget: u64) -> Result<Self, Error> {
        let side = BigUint::from(2 * n + 1);
        let states = side.pow(p);
        if states > BigUint::from(budget) {
            return Err(Error::BudgetExceeded {
                required: states,
                budget,
                unit: "lattice states",
            });
        }
        let mass_fits = (2 * p as u128)
            .checked_pow(
                u32::try_from(n)
                    .map_err(|_| Error::InvalidArgument("step count too large".into()))?,
            )
            .is_some();
        if !mass_fits {
            return Err(Error::BudgetExceeded {
                required: BigUint::from(2 * p).pow(u32::try_from(n).unwrap()),
                budget,
                unit: "path-count units (128-bit accumulator)",
            });
        }
        let side = (2 * n + 1) as usize;
        let states = side.pow(p);
        let mut weights = vec![0u128; states];
        // origin
        let mut origin = 0usize;
        for i in 0..p as usize {
            origin += (n as usize) * side.pow(i as u32);
        }
        weights[origin] = 1;
        Ok(DenseWalk {
            p: p as usize,
            n: n as usize,
            side,
            weights,
        })
    }

    fn step(&mut self) {
        let mut next = vec![0u128; self.weights.len()];
        let side = self.side;
        for (idx, &w) in self.weights.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let mut stride = 1usize;
            for _ in 0..self.p {
                let digit = (idx / stride) % side;
                debug_assert!(digit > 0 && digit + 1 < side, "walk escaped the box");
                next[idx - stride] += w;
                next[idx + stride] += w;
                stride *= side;
            }
        }
        self.weights = next;
    }

    fn run(&mut self, steps: u64) {
        for _k in 0..steps {
            self.step();
            #[cfg(debug_assertions)]
            {
                let total: u128 = self.weights.iter().sum();
                debug_assert_eq!(total, (2 * self.p as u128).pow(_k as u32 + 1));
            }
        }
    }

    fn into_distribution(self, steps: u64) -> WalkDistribution {
        let mut weights = HashMap::new();
        let side = self.side;
        for (idx, &w) in self.weights.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let mut point = Vec::with_capacity(self.p);
            let mut rest = idx;
            for _ in 0..self.p {
                point.push((rest % side) as i64 - self.n as i64);
                rest /= side;
            }
            weights.insert(point, BigUint::from(w));
        }
        WalkDistribution {
            dimension: self.p,
            weights,
            steps_taken: steps,
            denominator: BigUint::from(2 * self.p)
                .pow(u32::try_from(steps).expect("step count fits u32")),
        }
    }
}

fn require_odd_prime(p: u32) -> Result<(), Error> {
    if !is_prime(p) || p == 2 {
        return Err(Error::InvalidArgument(format!(
            "walk dimension must be an odd prime, got {p}"
        )));
    }
    Ok(())
}

/// Exact distribution of the `n`-step unit walk on `Z^p`.
pub fn diagonal_walk_distribution(p: u32, n: u64, budget: u64) -> Result<WalkDistribution, Error> {
    require_odd_prime(p)?;
    let mut dp = DenseWalk::new(p, n, budget)?;
    dp.run(n);
    Ok(dp.into_distribution(n))
}

/// Exact probability that the `n`-step unit walk on `Z^p` ends on the
/// diagonal: `(sum over t of the weight at (t, ..., t)) / (2p)^n`.
///
/// This equals the two-row census probability at modulus `2p`; the test
/// suite holds the two routes to exact rational equality.
pub fn exact_diagonal_return(p: u32, n: u64, budget: u64) -> Result<ExactProbability, Error> {
    require_odd_prime(p)?;
    let mut dp = DenseWalk::new(p, n, budget)?;
    dp.run(n);
    // sum the diagonal without materializing the full map
    let side = dp.side;
    let mut diag = 0u128;
    for t in 0..side.min(2 * dp.n + 1) {
        if (t as i64 - dp.n as i64).unsigned_abs() as usize * dp.p > dp.n {
            continue;
        }
        let mut idx = 0usize;
        for i in 0..dp.p {
            idx += t * side.pow(i as u32);
        }
        diag += dp.weights[idx];
    }
    Ok(ExactProbability::new(
        BigUint::from(diag),
        BigUint::from(2 * p).pow(u32::try_from(n).expect("step count fits u32")),
    ))
}

/// Exact origin-return probability of the increment walk, which is by
/// construction the partial-Butson probability; computed by the
/// brute-force census and exposed under the walk vocabulary for the
/// equivalence tests.
pub fn exact_origin_return(q: u32, m: u32, n: u64, budget: u64) -> Result<ExactProbability, Error> {
    Ok(brute_force_census(q, m, n, budget)?.probability().clone())
}

/// Draws increments `T(e) = ((e_i - e_j) mod q)_(i<j)` for uniformly
/// random `e` in `Z_q^M`, from a seeded, stream-split generator.
pub struct IncrementSampler {
    q: u32,
    m: u32,
    rng: ChaCha8Rng,
    column: Vec<u32>,
}

impl IncrementSampler {
    /// `stream` selects an independent substream of the same seed; worker
    /// `w` of a sharded run uses stream `w`.
    pub fn new(q: u32, m: u32, seed: u64, stream: u64) -> Self {
        assert!(q >= 2 && m >= 2, "need q >= 2 and m >= 2");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        IncrementSampler {
            q,
            m,
            rng,
            column: vec![0; m as usize],
        }
    }

    /// Dimension of the increment lattice, `M(M-1)/2`.
    pub fn dimension(&self) -> usize {
        (self.m as usize * (self.m as usize - 1)) / 2
    }

    /// Writes one increment into `out` (length `dimension()`).
    pub fn draw(&mut self, out: &mut [u32]) {
        debug_assert_eq!(out.len(), self.dimension());
        for e in self.column.iter_mut() {
            *e = self.rng.gen_range(0..self.q);
        }
        let mut k = 0;
        for i in 0..self.m as usize {
            for j in i + 1..self.m as usize {
                out[k] = (self.column[i] + self.q - self.column[j]) % self.q;
                k += 1;
            }
        }
    }
}

/// A Monte Carlo estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub hits: u64,
    pub samples: u64,
    pub seed: u64,
}

/// Estimates the origin-return probability by sampling `samples` walks of
/// `n` steps: each step accumulates the pairwise-difference counts of a
/// uniform column, and a walk hits when every coordinate's multiset is a
/// vanishing sum (exact test).
///
/// Samples are split over `workers` fixed shards with independent
/// generator streams derived from `(seed, worker index)`, and hit counts
/// merge by addition: the same seed and worker count always reproduce the
/// same estimate, bit for bit.
pub fn mc_return_probability(
    q: u32,
    m: u32,
    n: u64,
    samples: u64,
    seed: u64,
    workers: usize,
) -> McEstimate {
    assert!(samples >= 1, "need at least one sample");
    let workers = workers.clamp(1, usize::try_from(samples).unwrap_or(usize::MAX));
    let tester = vanishing_tester(q);
    let hits: u64 = (0..workers as u64)
        .into_par_iter()
        .map(|w| {
            let shard = samples / workers as u64 + u64::from(w < samples % workers as u64);
            if shard == 0 {
                return 0;
            }
            let mut sampler = IncrementSampler::new(q, m, seed, w);
            let d = sampler.dimension();
            let mut increment = vec![0u32; d];
            let mut counts = vec![vec![0u64; q as usize]; d];
            let mut hits = 0u64;
            for _ in 0..shard {
                counts
                    .iter_mut()
                    .for_each(|c| c.iter_mut().for_each(|x| *x = 0));
                for _ in 0..n {
                    sampler.draw(&mut increment);
                    for (k, &inc) in increment.iter().enumerate() {
                        counts[k][inc as usize] += 1;
                    }
                }
                if counts.iter().all(|c| tester.is_vanishing(c)) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let estimate = hits as f64 / samples as f64;
    let stderr = (estimate * (1.0 - estimate) / samples as f64).sqrt();
    McEstimate {
        estimate,
        stderr,
        hits,
        samples,
        seed,
    }
}
