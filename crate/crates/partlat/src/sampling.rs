//! Uniform random partitions via the urn model, and Monte-Carlo
//! estimation of the probability that four random partitions generate the
//! whole lattice.
//!
//! The urn model draws a number of urns `u` with `P(u=j) = jⁿ/(e·j!·B_n)`,
//! then throws the `n` labels into the `u` urns uniformly; the nonempty
//! urns form a partition whose marginal law is exactly uniform over all
//! `B_n` partitions. Nothing is enumerated, so sampling works far beyond
//! lattices that fit in memory.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::closure::{generates, ClosureOptions, DenseCloser};
use crate::context::{Elt, EquTable, LatticeContext, MAX_TABLE_N};
use crate::counting::bell_f64;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::stats::{confidence_interval, TABLE_LEVELS};

/// Mass the truncated urn-count table is allowed to miss.
const TAIL_BOUND: f64 = 1e-12;

/// Sampler of uniformly random partitions of an `n`-element set.
#[derive(Clone, Debug)]
pub struct StamSampler {
    n: usize,
    /// `cum[j-1]` = P(u <= j); the last entry is within [`TAIL_BOUND`] of 1.
    cum: Vec<f64>,
}

impl StamSampler {
    pub fn new(n: usize) -> Result<StamSampler> {
        if n == 0 {
            return Err(Error::arg("cannot sample partitions of the empty set".to_string()));
        }
        let ln_bell = {
            let b = bell_f64(n);
            if !b.is_finite() {
                return Err(Error::Domain(format!(
                    "bell({n}) overflows the sampler's float range"
                )));
            }
            b.ln()
        };
        // P(u=j) = jⁿ / (e·j!·B_n), accumulated in log space until the
        // missing tail is provably below the bound. The terms decay
        // superexponentially once j passes n, so the loop is short.
        let mut cum = Vec::new();
        let mut total = 0.0f64;
        let mut ln_factorial = 0.0f64;
        let mut j = 0usize;
        while total < 1.0 - TAIL_BOUND {
            j += 1;
            ln_factorial += (j as f64).ln();
            let ln_p = n as f64 * (j as f64).ln() - 1.0 - ln_factorial - ln_bell;
            total = (total + ln_p.exp()).min(1.0);
            cum.push(total);
            if j > 16 * n + 64 {
                return Err(Error::Integrity(format!(
                    "urn distribution for n={n} failed to accumulate mass {total}"
                )));
            }
        }
        Ok(StamSampler { n, cum })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The truncated cumulative distribution over urn counts, for audits.
    pub fn cumulative(&self) -> &[f64] {
        &self.cum
    }

    /// One uniformly random partition.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Partition {
        let x: f64 = rng.gen();
        let idx = self.cum.partition_point(|&c| c <= x);
        let urns = idx.min(self.cum.len() - 1) + 1;
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); urns];
        for label in 0..self.n {
            blocks[rng.gen_range(0..urns)].push(label);
        }
        blocks.retain(|b| !b.is_empty());
        Partition::from_blocks(self.n, &blocks)
            .expect("urn contents partition the label set")
    }
}

/// Everything a Monte-Carlo run produces. `s` is deterministic given
/// `(n, k, seed)`: each sample owns a private random stream indexed by its
/// position, so worker count and scheduling cannot change the outcome.
#[derive(Clone, Debug, Serialize)]
pub struct SampleReport {
    pub n: usize,
    pub k: u64,
    /// Number of sampled 4-subsets that generate the whole lattice.
    pub s: u64,
    pub p_bar: f64,
    pub sigma_bar: f64,
    pub intervals: Vec<LevelInterval>,
    pub seed: u64,
    pub wall_seconds: f64,
}

/// A confidence interval around `p_bar`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LevelInterval {
    pub level: f64,
    pub lo: f64,
    pub hi: f64,
}

impl SampleReport {
    /// Column names of [`SampleReport::csv_row`].
    pub fn csv_header() -> &'static str {
        "n,k,s,p_pct,l900_lo,l900_hi,l950_lo,l950_hi,l990_lo,l990_hi,l999_lo,l999_hi"
    }

    /// One CSV row; proportions are percentages with five decimals.
    pub fn csv_row(&self) -> String {
        let mut row = format!(
            "{},{},{},{:.5}",
            self.n,
            self.k,
            self.s,
            100.0 * self.p_bar
        );
        for iv in &self.intervals {
            row.push_str(&format!(",{:.5},{:.5}", 100.0 * iv.lo, 100.0 * iv.hi));
        }
        row
    }
}

/// Estimates the probability that a uniformly random 4-element set of
/// partitions generates the whole lattice, from `k` independent samples.
/// Workers split the sample range; `parallelism` never affects the counts.
pub fn estimate_rho(n: usize, k: u64, seed: u64, parallelism: usize) -> Result<SampleReport> {
    if k < 2 {
        return Err(Error::arg(format!("need at least 2 samples, got {k}")));
    }
    if n < 3 {
        return Err(Error::Domain(format!(
            "Equ({n}) has fewer than four elements, no 4-subsets exist"
        )));
    }
    let started = Instant::now();
    let workers = parallelism.max(1).min(k as usize);
    let s = if workers == 1 {
        count_generating_samples(n, seed, 0..k)?
    } else {
        let chunk = k / workers as u64;
        let mut counts: Vec<Result<u64>> = Vec::new();
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers as u64)
                .map(|w| {
                    let lo = w * chunk;
                    let hi = if w + 1 == workers as u64 { k } else { lo + chunk };
                    scope.spawn(move || count_generating_samples(n, seed, lo..hi))
                })
                .collect();
            counts = handles.into_iter().map(|h| h.join().unwrap()).collect();
        });
        counts.into_iter().sum::<Result<u64>>()?
    };

    let p_bar = s as f64 / k as f64;
    let sigma_bar = (p_bar * (1.0 - p_bar) / (k - 1) as f64).sqrt();
    let intervals = TABLE_LEVELS
        .iter()
        .map(|&level| {
            let (lo, hi) = confidence_interval(s, k, level)?;
            Ok(LevelInterval { level, lo, hi })
        })
        .collect::<Result<_>>()?;
    Ok(SampleReport {
        n,
        k,
        s,
        p_bar,
        sigma_bar,
        intervals,
        seed,
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Counts the generating 4-subsets among the samples indexed by `range`.
/// Sample `i` draws from a fresh stream `i` of the seeded generator;
/// duplicates are redrawn until four distinct partitions are held.
fn count_generating_samples(n: usize, seed: u64, range: std::ops::Range<u64>) -> Result<u64> {
    let sampler = StamSampler::new(n)?;
    let mut hits = 0u64;
    if n <= MAX_TABLE_N {
        let table = EquTable::get(n)?;
        let mut closer = DenseCloser::new(table.clone());
        let mut ids = [0u16; 4];
        for i in range {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let mut held = 0;
            while held < 4 {
                let id = table.id_of(&sampler.sample(&mut rng))?;
                if !ids[..held].contains(&id) {
                    ids[held] = id;
                    held += 1;
                }
            }
            if closer.generates(&ids) {
                hits += 1;
            }
        }
    } else {
        let ctx = LatticeContext::full_equivalence(n)?;
        let opts = ClosureOptions {
            early_exit_on_atoms: true,
            ..ClosureOptions::default()
        };
        for i in range {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let mut quad: Vec<Elt> = Vec::with_capacity(4);
            while quad.len() < 4 {
                let p = Elt::Part(sampler.sample(&mut rng));
                if !quad.contains(&p) {
                    quad.push(p);
                }
            }
            if generates(&quad, &ctx, &opts)? {
                hits += 1;
            }
        }
    }
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_partitions;
    use std::collections::HashMap;

    #[test]
    fn distribution_table_tail_and_monotonicity() {
        for n in [1usize, 2, 4, 9, 12] {
            let sampler = StamSampler::new(n).unwrap();
            let cum = sampler.cumulative();
            assert!(cum.windows(2).all(|w| w[0] <= w[1]), "n={n}");
            let last = *cum.last().unwrap();
            assert!((1.0 - last) <= TAIL_BOUND && last <= 1.0, "n={n}: {last}");
        }
    }

    #[test]
    fn urn_count_probabilities_match_direct_formula() {
        // Log-space accumulation against the plain formula, term by term.
        let sampler = StamSampler::new(4).unwrap();
        let cum = sampler.cumulative();
        let bell4 = 15.0f64;
        let mut factorial = 1.0f64;
        let mut expect = 0.0f64;
        for j in 1..=cum.len() {
            factorial *= j as f64;
            expect += (j as f64).powi(4) / (std::f64::consts::E * factorial * bell4);
            assert!((cum[j - 1] - expect).abs() < 1e-12, "j={j}");
        }
    }

    #[test]
    fn single_element_set_has_one_partition() {
        let sampler = StamSampler::new(1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..32 {
            assert_eq!(sampler.sample(&mut rng), Partition::top(1));
        }
    }

    #[test]
    fn samples_are_uniform_over_small_lattice() {
        // 10^5 draws over the 15 partitions of a 4-element set; every
        // empirical frequency must sit within four standard errors of
        // 1/15. The seed is fixed, so this never flakes.
        let sampler = StamSampler::new(4).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(20200624);
        let draws = 100_000usize;
        let mut counts: HashMap<Partition, usize> = HashMap::new();
        for _ in 0..draws {
            *counts.entry(sampler.sample(&mut rng)).or_default() += 1;
        }
        let all = enumerate_partitions(4).unwrap();
        assert_eq!(counts.len(), all.len());
        let p = 1.0 / 15.0;
        let tolerance = 4.0 * (p * (1.0 - p) / draws as f64).sqrt();
        for part in &all {
            let freq = counts[part] as f64 / draws as f64;
            assert!((freq - p).abs() < tolerance, "{part:?}: {freq}");
        }
    }

    #[test]
    fn reports_are_reproducible_across_worker_counts() {
        let a = estimate_rho(4, 4000, 99, 1).unwrap();
        let b = estimate_rho(4, 4000, 99, 3).unwrap();
        assert_eq!(a.s, b.s);
        assert_eq!(a.p_bar, b.p_bar);
        // A different seed almost surely lands elsewhere.
        let c = estimate_rho(4, 4000, 100, 1).unwrap();
        assert_ne!(a.s, c.s);
    }

    #[test]
    fn report_shape_and_interval_symmetry() {
        let report = estimate_rho(4, 3000, 5, 2).unwrap();
        assert!(report.s <= report.k);
        assert_eq!(report.intervals.len(), TABLE_LEVELS.len());
        for iv in &report.intervals {
            assert!(iv.lo <= report.p_bar && report.p_bar <= iv.hi);
            let mid = 0.5 * (iv.lo + iv.hi);
            assert!((mid - report.p_bar).abs() < 1e-12);
        }
        // Estimate should be in the right ballpark of 50/1365.
        let exact = 50.0 / 1365.0;
        assert!((report.p_bar - exact).abs() < 0.01, "{}", report.p_bar);
    }

    #[test]
    fn degenerate_two_sample_report() {
        let report = estimate_rho(3, 2, 123, 1).unwrap();
        assert!(report.sigma_bar.is_finite());
        assert_eq!(report.k, 2);
    }

    #[test]
    fn rejects_unsamplable_requests() {
        assert!(estimate_rho(4, 1, 0, 1).is_err());
        assert!(estimate_rho(2, 100, 0, 1).is_err());
        assert!(StamSampler::new(0).is_err());
    }

    #[test]
    fn csv_row_matches_header_arity() {
        let report = estimate_rho(4, 500, 1, 1).unwrap();
        let header_cols = SampleReport::csv_header().split(',').count();
        assert_eq!(report.csv_row().split(',').count(), header_cols);
    }

    #[test]
    fn beyond_table_range_uses_generic_closure() {
        // n = 9 partitions cannot be tabulated; a tiny sample must still
        // produce a coherent report.
        let report = estimate_rho(9, 4, 7, 1).unwrap();
        assert!(report.s <= 4);
    }
}
