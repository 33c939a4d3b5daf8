//! Random pseudo s-th power sequences and deterministic complement sequences.

mod complement;

pub use complement::{
    build_complement, ComplementSequence, ComplementSpec, CountingFunction, Slack,
};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::bitmap::Bitmap;
use crate::error::{Error, Result};

/// `P(n ∈ A) = n^{-1+1/s} / s`.
pub fn inclusion_probability(n: u64, s: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("inclusion probability needs n >= 1"));
    }
    if s < 2 {
        return Err(Error::domain(format!("s must be at least 2, got {s}")));
    }
    Ok(probability(n, s))
}

#[inline]
pub(crate) fn probability(n: u64, s: u32) -> f64 {
    let s = s as f64;
    (n as f64).powf(-1.0 + 1.0 / s) / s
}

/// Random stream addressed by `(seed, trial_id, n)`.
///
/// The key is expanded from `seed`, the ChaCha stream id is `trial_id`, and
/// the uniform variate deciding membership of `n` is the `n`-th 64-bit word
/// of that stream. Any index can therefore be drawn without generating the
/// earlier ones.
#[derive(Clone, Debug)]
pub struct MembershipStream {
    rng: ChaCha8Rng,
}

impl MembershipStream {
    pub fn new(seed: u64, trial_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial_id);
        MembershipStream { rng }
    }

    /// Positions the stream so the next draw belongs to index `n`.
    pub fn seek(&mut self, n: u64) {
        assert!(n >= 1);
        self.rng.set_word_pos(2 * (n as u128 - 1));
    }

    /// Next uniform variate in `[0, 1)` with 53 random bits.
    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform variate for index `n`, independent of stream position.
    pub fn uniform_at(&mut self, n: u64) -> f64 {
        self.seek(n);
        self.next_uniform()
    }
}

/// One realization of `A ∩ [1, N]` with its provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceSample {
    s: u32,
    limit: u64,
    seed: u64,
    trial_id: u64,
    members: Bitmap,
    elements: Vec<u64>,
}

/// Header fields shared by the persisted sequence formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleHeader {
    pub s: u32,
    #[serde(rename = "N")]
    pub limit: u64,
    pub seed: u64,
    pub trial_id: u64,
}

impl SequenceSample {
    /// Rebuilds a sample from a strictly increasing element list.
    pub fn from_elements(header: SampleHeader, elements: Vec<u64>) -> Result<Self> {
        if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::format(format!(
                "elements not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        if let Some(&x) = elements.iter().find(|&&x| x == 0 || x > header.limit) {
            return Err(Error::format(format!(
                "element {x} outside [1, {}]",
                header.limit
            )));
        }
        let members = Bitmap::from_values(header.limit, elements.iter().copied());
        Ok(SequenceSample {
            s: header.s,
            limit: header.limit,
            seed: header.seed,
            trial_id: header.trial_id,
            members,
            elements,
        })
    }

    pub fn header(&self) -> SampleHeader {
        SampleHeader {
            s: self.s,
            limit: self.limit,
            seed: self.seed,
            trial_id: self.trial_id,
        }
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn trial_id(&self) -> u64 {
        self.trial_id
    }

    pub fn members(&self) -> &Bitmap {
        &self.members
    }

    /// Sorted elements of the sample.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `|A ∩ [1, x]|` for `1 <= x <= N`.
    pub fn counting(&self, x: u64) -> Result<u64> {
        if x < 1 || x > self.limit {
            return Err(Error::domain(format!(
                "counting argument {x} outside [1, {}]",
                self.limit
            )));
        }
        Ok(self.elements.partition_point(|&a| a <= x) as u64)
    }
}

/// Draws `A ∩ [1, N]` where each `n` is kept independently with
/// probability [`inclusion_probability`].
pub fn sample_sequence(s: u32, limit: u64, seed: u64, trial_id: u64) -> Result<SequenceSample> {
    if s < 2 {
        return Err(Error::domain(format!("s must be at least 2, got {s}")));
    }
    if limit < 1 {
        return Err(Error::domain("sample limit N must be at least 1"));
    }
    let mut stream = MembershipStream::new(seed, trial_id);
    let mut members = Bitmap::new(limit);
    let mut elements = Vec::new();
    for n in 1..=limit {
        let p = probability(n, s);
        debug_assert!(p <= 0.5);
        if stream.next_uniform() < p {
            members.insert(n);
            elements.push(n);
        }
    }
    Ok(SequenceSample {
        s,
        limit,
        seed,
        trial_id,
        members,
        elements,
    })
}

/// Membership of `n` in the sample `(s, seed, trial_id)` without sampling the prefix.
pub fn sample_membership(s: u32, n: u64, seed: u64, trial_id: u64) -> Result<bool> {
    let p = inclusion_probability(n, s)?;
    Ok(MembershipStream::new(seed, trial_id).uniform_at(n) < p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probability_examples() {
        assert_eq!(inclusion_probability(1, 2).unwrap(), 0.5);
        assert!((inclusion_probability(64, 2).unwrap() - 0.0625).abs() < 1e-15);
        assert!((inclusion_probability(1000, 3).unwrap() - 1.0 / 300.0).abs() < 1e-15);
        assert!(inclusion_probability(0, 2).is_err());
        assert!(inclusion_probability(5, 1).is_err());
    }

    #[test]
    fn probability_never_exceeds_half() {
        for s in 2..8 {
            for n in 1..200 {
                let p = inclusion_probability(n, s).unwrap();
                assert!(p > 0.0 && p <= 0.5);
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_sequence(2, 50_000, 7, 3).unwrap();
        let b = sample_sequence(2, 50_000, 7, 3).unwrap();
        assert_eq!(a, b);
        let c = sample_sequence(2, 50_000, 7, 4).unwrap();
        assert_ne!(a.elements(), c.elements());
    }

    #[test]
    fn windowed_membership_matches_full_sample() {
        let a = sample_sequence(3, 5_000, 11, 2).unwrap();
        for n in [1, 2, 17, 999, 4_096, 5_000] {
            assert_eq!(
                sample_membership(3, n, 11, 2).unwrap(),
                a.members().contains(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn bitmap_and_elements_agree() {
        let a = sample_sequence(2, 10_000, 1, 0).unwrap();
        assert_eq!(a.members().iter().collect::<Vec<_>>(), a.elements());
        assert!(a.elements().iter().all(|&x| x <= 10_000));
    }

    #[test]
    fn counting_examples() {
        let header = SampleHeader {
            s: 2,
            limit: 10,
            seed: 0,
            trial_id: 0,
        };
        let a = SequenceSample::from_elements(header, vec![2, 5, 9]).unwrap();
        assert_eq!(a.counting(5).unwrap(), 2);
        assert_eq!(a.counting(10).unwrap(), 3);
        assert_eq!(a.counting(1).unwrap(), 0);
        assert!(a.counting(0).is_err());
        assert!(a.counting(11).is_err());
        let mut prev = 0;
        for x in 1..=10 {
            let c = a.counting(x).unwrap();
            assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn from_elements_rejects_bad_lists() {
        let header = SampleHeader {
            s: 2,
            limit: 10,
            seed: 0,
            trial_id: 0,
        };
        assert!(SequenceSample::from_elements(header, vec![3, 3]).is_err());
        assert!(SequenceSample::from_elements(header, vec![4, 2]).is_err());
        assert!(SequenceSample::from_elements(header, vec![11]).is_err());
        assert!(SequenceSample::from_elements(header, vec![0]).is_err());
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(sample_sequence(1, 10, 0, 0).is_err());
        assert!(sample_sequence(2, 0, 0, 0).is_err());
    }
}
