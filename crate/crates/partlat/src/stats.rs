//! Binomial-proportion confidence intervals and the normal-quantile
//! arithmetic behind them.
//!
//! A sample of `k` independent success/failure experiments with `s`
//! successes estimates the unknown success probability by `p̄ = s/k`. The
//! level-C interval is `[p̄ - z·σ̄, p̄ + z·σ̄]` with `σ̄ = sqrt(p̄(1-p̄)/(k-1))`
//! and `z` the central quantile of the standard normal distribution:
//! `C = ∫_{-z}^{z} exp(-x²/2)/sqrt(2π) dx`. Scaling such an interval by the
//! size of the sampled universe turns a proportion interval into a count
//! interval.

use num_bigint::BigUint;

use crate::counting::bell;
use crate::error::{Error, Result};
use crate::sampling::SampleReport;

/// The four levels every report carries.
pub const TABLE_LEVELS: [f64; 4] = [0.900, 0.950, 0.990, 0.999];

/// Five-decimal z values for the standard levels, with numeric inversion
/// for any other level. The fixed entries keep reported digits identical
/// to hand calculations done with the usual textbook table.
#[derive(Clone, Debug)]
pub struct ConfidenceTable {
    entries: Vec<(f64, f64)>,
}

impl Default for ConfidenceTable {
    fn default() -> Self {
        ConfidenceTable {
            entries: vec![
                (0.900, 1.64485),
                (0.950, 1.95996),
                (0.990, 2.57583),
                (0.999, 3.29053),
            ],
        }
    }
}

impl ConfidenceTable {
    /// The z multiplier for a confidence level in (0, 1): tabulated when
    /// the level is one of the standard four, numerically inverted
    /// otherwise.
    pub fn z(&self, level: f64) -> Result<f64> {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::arg(format!(
                "confidence level {level} outside (0, 1)"
            )));
        }
        for &(l, z) in &self.entries {
            if (l - level).abs() < 1e-12 {
                return Ok(z);
            }
        }
        z_for_level(level)
    }
}

/// Central mass of the standard normal distribution on `[-z, z]`,
/// integrated by composite Simpson on `[0, z]` and doubled. The step count
/// keeps the quadrature error orders below the 1e-9 inversion tolerance.
pub fn normal_central_mass(z: f64) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    let steps = 2048usize; // even
    let h = z / steps as f64;
    let density = |x: f64| (-0.5 * x * x).exp();
    let mut acc = density(0.0) + density(z);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * density(i as f64 * h);
    }
    let integral = acc * h / 3.0;
    2.0 * integral / (2.0 * std::f64::consts::PI).sqrt()
}

/// Inverts [`normal_central_mass`] by bisection to 1e-9.
pub fn z_for_level(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::arg(format!(
            "confidence level {level} outside (0, 1)"
        )));
    }
    let (mut lo, mut hi) = (0.0f64, 10.0f64);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if normal_central_mass(mid) < level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The level-C confidence interval for `s` successes out of `k`:
/// `[p̄ - z·σ̄, p̄ + z·σ̄]`, σ̄ computed with the `k - 1` denominator.
pub fn confidence_interval(s: u64, k: u64, level: f64) -> Result<(f64, f64)> {
    if k < 2 {
        return Err(Error::arg(format!("need k >= 2 experiments, got {k}")));
    }
    if s > k {
        return Err(Error::arg(format!("successes {s} exceed sample size {k}")));
    }
    let z = ConfidenceTable::default().z(level)?;
    let p = s as f64 / k as f64;
    let sigma = (p * (1.0 - p) / (k - 1) as f64).sqrt();
    Ok((p - z * sigma, p + z * sigma))
}

/// Count interval for the number of generating 4-subsets: the report's
/// proportion interval at `level` scaled by C(bell(n), 4) with outward
/// rounding, clamped to `[0, C(bell(n), 4)]`.
pub fn gamma_bounds_from_sample(
    report: &SampleReport,
    level: f64,
) -> Result<(BigUint, BigUint)> {
    let iv = report
        .intervals
        .iter()
        .find(|iv| (iv.level - level).abs() < 1e-12)
        .ok_or_else(|| {
            Error::arg(format!("report holds no interval for level {level}"))
        })?;
    let b = bell(report.n);
    if b < BigUint::from(4u32) {
        return Err(Error::Domain(format!(
            "Equ({}) has fewer than four elements, no 4-subsets exist",
            report.n
        )));
    }
    let total = &b * (&b - 1u32) * (&b - 2u32) * (&b - 3u32) / 24u32;
    Ok(scale_outward(&total, iv.lo, iv.hi))
}

/// `[floor(total * lo), ceil(total * hi)]` with endpoints clamped to
/// `[0, total]`. The f64 endpoints become 63-bit fixed-point multipliers
/// rounded toward the respective outside, so the result interval always
/// contains the real-arithmetic one.
fn scale_outward(total: &BigUint, lo: f64, hi: f64) -> (BigUint, BigUint) {
    const SHIFT: u32 = 63;
    let scale = (1u64 << SHIFT) as f64;
    let lower = if lo <= 0.0 {
        BigUint::ZERO
    } else {
        let fp = BigUint::from((lo.min(1.0) * scale).floor() as u64);
        (total * fp) >> SHIFT
    };
    let upper = if hi >= 1.0 {
        total.clone()
    } else if hi <= 0.0 {
        BigUint::ZERO
    } else {
        let fp = BigUint::from((hi * scale).ceil() as u64);
        let denom_minus_1 = (BigUint::from(1u64) << SHIFT) - 1u32;
        (total * fp + denom_minus_1) >> SHIFT
    };
    (lower, upper)
}
