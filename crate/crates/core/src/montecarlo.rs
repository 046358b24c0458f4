//! Seeded Monte Carlo estimate of the block logical error rate under
//! independent bit flips on both check sides.
//!
//! Every trial draws from its own ChaCha8 stream seeded by
//! [`trial_seed`], a pure function of the master seed, the index of the
//! probability in the sweep and the trial index. Results therefore do not
//! depend on scheduling or on the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::decoder::{Decoder, ErrorPattern};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::lattice::Side;

const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    p: f64,
}

impl NoiseModel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn sample<R: Rng>(&self, n: usize, rng: &mut R) -> ErrorPattern {
        let mut e = BitVec::zeros(n);
        for q in 0..n {
            if rng.random_bool(self.p) {
                e.set(q, true);
            }
        }
        e
    }
}

/// SplitMix64 output finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `mix64(mix64(mix64(master) ^ p_index) ^ trial)`.
pub fn trial_seed(master: u64, p_index: u64, trial: u64) -> u64 {
    mix64(mix64(mix64(master) ^ p_index) ^ trial)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TrialOutcome {
    pub vertex_fail: bool,
    pub oct_fail: bool,
}

impl TrialOutcome {
    pub fn block_fail(&self) -> bool {
        self.vertex_fail || self.oct_fail
    }
}

/// Samples one error per side (vertex side first), decodes both and
/// reports which residuals are logical.
pub fn run_trial<R: Rng>(decoder: &Decoder<'_>, noise: NoiseModel, rng: &mut R) -> Result<TrialOutcome> {
    let n = decoder.code().n();
    let ev = noise.sample(n, rng);
    let eo = noise.sample(n, rng);
    Ok(TrialOutcome {
        vertex_fail: decoder.correct(&ev, Side::Vertex)?.residual_is_logical,
        oct_fail: decoder.correct(&eo, Side::Oct)?.residual_is_logical,
    })
}

pub fn bare_block_rate(p: f64, k: usize) -> f64 {
    if k == 0 || p == 0.0 {
        return 0.0;
    }
    -((k as f64) * (-p).ln_1p()).exp_m1()
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    let low = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let high = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (low, high)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialStats {
    #[serde(rename = "L")]
    pub lattice_size: usize,
    pub p: f64,
    pub trials: u64,
    pub block_failures: u64,
    pub vertex_side_failures: u64,
    pub oct_side_failures: u64,
    pub p_l: f64,
    pub decode_success: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub bare_rate: f64,
    /// `bare_rate / p_l`; undefined without failures.
    pub coding_gain: Option<f64>,
    /// One-sided 95% lower bound on the gain when no failure was seen,
    /// from the upper bound `1 - 0.05^(1/trials)` on `p_l`.
    pub gain_lower_bound: Option<f64>,
}

impl TrialStats {
    fn from_counts(lattice_size: usize, k: usize, p: f64, trials: u64, block: u64, vertex: u64, oct: u64) -> Self {
        let p_l = block as f64 / trials as f64;
        let (ci_low, ci_high) = wilson_interval(block, trials);
        let bare_rate = bare_block_rate(p, k);
        let coding_gain = (block > 0).then(|| bare_rate / p_l);
        let gain_lower_bound = (block == 0 && bare_rate > 0.0).then(|| {
            let upper = 1.0 - 0.05f64.powf(1.0 / trials as f64);
            bare_rate / upper
        });
        Self {
            lattice_size,
            p,
            trials,
            block_failures: block,
            vertex_side_failures: vertex,
            oct_side_failures: oct,
            p_l,
            decode_success: 1.0 - p_l,
            ci_low,
            ci_high,
            bare_rate,
            coding_gain,
            gain_lower_bound,
        }
    }
}

/// All trials at one probability; `p_index` selects the stream family.
pub fn run_point(decoder: &Decoder<'_>, p: f64, p_index: u64, trials: u64, master_seed: u64) -> Result<TrialStats> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let noise = NoiseModel::new(p)?;
    let (block, vertex, oct) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(master_seed, p_index, t));
            run_trial(decoder, noise, &mut rng).map(|o| (o.block_fail() as u64, o.vertex_fail as u64, o.oct_fail as u64))
        })
        .try_reduce(|| (0, 0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1, a.2 + b.2)))?;
    let code = decoder.code();
    Ok(TrialStats::from_counts(
        code.lattice().size(),
        code.k(),
        p,
        trials,
        block,
        vertex,
        oct,
    ))
}

pub fn run_experiment(decoder: &Decoder<'_>, p_list: &[f64], trials: u64, master_seed: u64) -> Result<Vec<TrialStats>> {
    p_list
        .iter()
        .enumerate()
        .map(|(i, &p)| run_point(decoder, p, i as u64, trials, master_seed))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::CssCode;

    #[test]
    fn bare_rate_values() {
        assert!((bare_block_rate(0.001, 130) - 0.121_961_68).abs() < 1e-8);
        assert_eq!(bare_block_rate(0.0, 130), 0.0);
        assert_eq!(bare_block_rate(0.3, 0), 0.0);
        assert_eq!(bare_block_rate(1.0, 5), 1.0);
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(12, 1000);
        assert!(lo < 0.012 && 0.012 < hi);
        let (lo, hi) = wilson_interval(0, 1000);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.005);
    }

    #[test]
    fn invalid_probability() {
        assert!(NoiseModel::new(-0.1).is_err());
        assert!(NoiseModel::new(1.5).is_err());
        assert!(NoiseModel::new(f64::NAN).is_err());
    }

    #[test]
    fn zero_noise_never_fails() {
        let code = CssCode::from_size(4).unwrap();
        let dec = Decoder::new(&code);
        let s = run_point(&dec, 0.0, 0, 200, 1).unwrap();
        assert_eq!(s.block_failures, 0);
        assert_eq!(s.p_l, 0.0);
        assert_eq!(s.coding_gain, None);
        assert_eq!(s.gain_lower_bound, None);
    }

    #[test]
    fn full_noise_is_deterministic() {
        let code = CssCode::from_size(4).unwrap();
        let dec = Decoder::new(&code);
        let noise = NoiseModel::new(1.0).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(99);
        assert_eq!(
            run_trial(&dec, noise, &mut a).unwrap(),
            run_trial(&dec, noise, &mut b).unwrap()
        );
    }

    #[test]
    fn fixed_seed_trial_repeats() {
        let code = CssCode::from_size(4).unwrap();
        let dec = Decoder::new(&code);
        let noise = NoiseModel::new(0.001).unwrap();
        for t in 0..50 {
            let seed = trial_seed(42, 1, t);
            let a = run_trial(&dec, noise, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            let b = run_trial(&dec, noise, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn results_independent_of_worker_count() {
        let code = CssCode::from_size(4).unwrap();
        let dec = Decoder::new(&code);
        let ps = [0.005, 0.02];
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_experiment(&dec, &ps, 300, 42).unwrap())
        };
        let one = run(1);
        assert_eq!(one, run(4));
        for s in &one {
            assert!(s.block_failures <= s.vertex_side_failures + s.oct_side_failures);
            assert!(s.block_failures >= s.vertex_side_failures.max(s.oct_side_failures));
        }
    }

    #[test]
    fn seeds_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for p in 0..4 {
            for t in 0..1000 {
                assert!(seen.insert(trial_seed(42, p, t)));
            }
        }
    }
}
