//! Reproducible per-replica randomness.
//!
//! A stream is a ChaCha8 keystream. The key is derived from the master seed
//! and a purpose label, and the ChaCha stream id is the replica index, so two
//! replicas never share keystream material and any replica can be generated
//! on any thread. The keystream is counter based, which also lets a caller
//! seek to an arbitrary draw (used to generate lattice rows out of order).

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

const KEY_TAG: &[u8; 16] = b"cornergrowth-key";

/// Uniform scale for the top 53 bits of a `u64`.
const UNIT: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Clone, Debug)]
pub struct RngStream {
    master_seed: u64,
    replica_index: u64,
    label: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, replica_index: u64) -> Self {
        Self::keyed(master_seed, replica_index, 0)
    }

    fn keyed(master_seed: u64, replica_index: u64, label: u64) -> Self {
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&master_seed.to_le_bytes());
        seed[8..16].copy_from_slice(&label.to_le_bytes());
        seed[16..].copy_from_slice(KEY_TAG);
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(replica_index);
        RngStream {
            master_seed,
            replica_index,
            label,
            rng,
        }
    }

    /// Independent stream for the same replica under another purpose label.
    pub fn fork(&self, label: u64) -> Self {
        Self::keyed(self.master_seed, self.replica_index, label)
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn replica_index(&self) -> u64 {
        self.replica_index
    }

    pub fn label(&self) -> u64 {
        self.label
    }

    /// Next uniform in `[0, 1)`, a multiple of `2^-53`.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * UNIT
    }

    /// Number of uniforms drawn so far.
    pub fn position(&self) -> u64 {
        (self.rng.get_word_pos() / 2) as u64
    }

    /// Reposition so that the next uniform is draw number `draw`.
    pub fn seek(&mut self, draw: u64) {
        self.rng.set_word_pos(2 * draw as u128);
    }
}

pub fn make_stream(master_seed: u64, replica_index: u64) -> RngStream {
    RngStream::new(master_seed, replica_index)
}

/// Rate `alpha > 0` of an exponential law, `P(X > t) = e^{-alpha t}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpRate(f64);

impl ExpRate {
    pub const UNIT: ExpRate = ExpRate(1.0);

    pub fn new(rate: f64) -> Result<Self> {
        if rate > 0.0 && rate.is_finite() {
            Ok(ExpRate(rate))
        } else {
            Err(Error::contract("random", format!("exponential rate must be positive, got {rate}")))
        }
    }

    pub fn rate(self) -> f64 {
        self.0
    }

    pub fn mean(self) -> f64 {
        1.0 / self.0
    }

    /// Inverse CDF `-ln(1 - u) / alpha`.
    #[inline]
    pub fn inverse_cdf(self, u: f64) -> f64 {
        -(1.0 - u).ln() / self.0
    }

    pub fn cdf(self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            1.0 - (-self.0 * t).exp()
        }
    }
}

#[inline]
pub fn sample_exp(stream: &mut RngStream, rate: ExpRate) -> f64 {
    rate.inverse_cdf(stream.next_uniform())
}

/// `Exp(1)` draw; the hot path of every bulk field.
#[inline]
pub(crate) fn sample_exp1(stream: &mut RngStream) -> f64 {
    -(1.0 - stream.next_uniform()).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats;

    fn uniforms(stream: &mut RngStream, n: usize) -> Vec<f64> {
        (0..n).map(|_| stream.next_uniform()).collect()
    }

    #[test]
    fn same_key_same_sequence() {
        let a = uniforms(&mut make_stream(7, 0), 100);
        let b = uniforms(&mut make_stream(7, 0), 100);
        assert_eq!(a, b);
    }

    #[test]
    fn replicas_are_uncorrelated() {
        let a = uniforms(&mut make_stream(7, 0), 10_000);
        let b = uniforms(&mut make_stream(7, 1), 10_000);
        assert!(stats::pearson(&a, &b).abs() < 0.05);
        assert_ne!(a[..10], b[..10]);
    }

    #[test]
    fn uniform_mean() {
        let a = uniforms(&mut make_stream(7, 0), 100_000);
        let m = stats::mean(&a);
        assert!((0.495..=0.505).contains(&m), "{m}");
        assert!(a.iter().all(|&u| (0.0..1.0).contains(&u)));
    }

    #[test]
    fn forks_differ_from_parent() {
        let s = make_stream(3, 2);
        let a = uniforms(&mut s.clone(), 50);
        let b = uniforms(&mut s.fork(1), 50);
        assert_ne!(a, b);
        assert_eq!(s.fork(1).replica_index(), 2);
    }

    #[test]
    fn seek_replays_draws() {
        let mut s = make_stream(11, 4);
        let all = uniforms(&mut s, 40);
        assert_eq!(s.position(), 40);
        s.seek(17);
        assert_eq!(uniforms(&mut s, 5), all[17..22]);
        s.seek(3);
        assert_eq!(s.next_uniform(), all[3]);
    }

    #[test]
    fn inverse_cdf_values() {
        let r = ExpRate::UNIT;
        assert!((r.inverse_cdf(0.5) - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(ExpRate::new(3.0).unwrap().inverse_cdf(0.0), 0.0);
        assert!(ExpRate::new(0.0).is_err());
        assert!(ExpRate::new(-1.0).is_err());
    }

    #[test]
    fn exp_sample_mean_within_clt_band() {
        let rate = ExpRate::new(2.0).unwrap();
        let mut s = make_stream(7, 0);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| sample_exp(&mut s, rate)).collect();
        let m = stats::mean(&xs);
        assert!((m - 0.5).abs() < 3.0 * 0.5 / (n as f64).sqrt(), "{m}");
    }

    #[test]
    fn exp_samples_pass_ks_and_memorylessness() {
        for (k, &alpha) in [0.3, 1.0, 2.5].iter().enumerate() {
            let rate = ExpRate::new(alpha).unwrap();
            let mut s = make_stream(99, k as u64);
            let xs: Vec<f64> = (0..10_000).map(|_| sample_exp(&mut s, rate)).collect();
            let p = stats::ks_one_sample(&xs, |t| rate.cdf(t)).p_value;
            assert!(p > 1e-3, "alpha {alpha}: p {p}");
            let excess: Vec<f64> = xs
                .iter()
                .filter(|&&x| x > rate.mean())
                .map(|&x| x - rate.mean())
                .collect();
            let p = stats::ks_one_sample(&excess, |t| rate.cdf(t)).p_value;
            assert!(p > 1e-3, "alpha {alpha}: memoryless p {p}");
        }
    }
}
