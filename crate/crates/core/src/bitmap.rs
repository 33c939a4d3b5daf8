//! Packed bitset over the integers `1..=len`.
//!
//! Bit `i` (word `i / 64`, position `i % 64`) holds the integer `i + 1`, the
//! same layout the bitmap file format uses. Under this layout adding `a` to
//! every member is a plain left shift by `a` bits.

/// Fixed-length set of integers in `1..=len`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bitmap {
    len: u64,
    words: Vec<u64>,
}

fn word_count(len: u64) -> usize {
    len.div_ceil(64) as usize
}

impl Bitmap {
    pub fn new(len: u64) -> Self {
        Bitmap {
            len,
            words: vec![0; word_count(len)],
        }
    }

    /// Every integer in `1..=len` present.
    pub fn full(len: u64) -> Self {
        let mut b = Bitmap {
            len,
            words: vec![u64::MAX; word_count(len)],
        };
        b.mask_tail();
        b
    }

    /// Builds from packed words; bits past `len` are cleared.
    pub fn from_words(len: u64, mut words: Vec<u64>) -> Option<Self> {
        if words.len() != word_count(len) {
            return None;
        }
        words.shrink_to_fit();
        let mut b = Bitmap { len, words };
        b.mask_tail();
        Some(b)
    }

    /// Members of `values` that fall in `1..=len`; others are dropped.
    pub fn from_values(len: u64, values: impl IntoIterator<Item = u64>) -> Self {
        let mut b = Bitmap::new(len);
        for v in values {
            if (1..=len).contains(&v) {
                b.insert(v);
            }
        }
        b
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn contains(&self, x: u64) -> bool {
        if x == 0 || x > self.len {
            return false;
        }
        let i = x - 1;
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// Panics if `x` is outside `1..=len`.
    pub fn insert(&mut self, x: u64) {
        assert!(x >= 1 && x <= self.len, "{x} outside 1..={}", self.len);
        let i = x - 1;
        self.words[(i / 64) as usize] |= 1 << (i % 64);
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Number of members in `lo..=hi` (clamped to `1..=len`).
    pub fn count_range(&self, lo: u64, hi: u64) -> u64 {
        let lo = lo.max(1);
        let hi = hi.min(self.len);
        if lo > hi {
            return 0;
        }
        let (a, b) = (lo - 1, hi - 1);
        let (wa, wb) = ((a / 64) as usize, (b / 64) as usize);
        let low_mask = u64::MAX << (a % 64);
        let high_mask = u64::MAX >> (63 - b % 64);
        if wa == wb {
            return (self.words[wa] & low_mask & high_mask).count_ones() as u64;
        }
        let mut total = (self.words[wa] & low_mask).count_ones() as u64;
        total += self.words[wa + 1..wb]
            .iter()
            .map(|w| w.count_ones() as u64)
            .sum::<u64>();
        total + (self.words[wb] & high_mask).count_ones() as u64
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.iter_range(1, self.len)
    }

    /// Members of `lo..=hi` in ascending order.
    pub fn iter_range(&self, lo: u64, hi: u64) -> impl Iterator<Item = u64> + '_ {
        let lo = lo.max(1);
        let hi = hi.min(self.len);
        let (start, end) = if lo > hi {
            (1, 0)
        } else {
            ((lo - 1) / 64, (hi - 1) / 64)
        };
        (start..=end).flat_map(move |wi| {
            let mut w = self.words[wi as usize];
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as u64;
                w &= w - 1;
                Some(wi * 64 + bit + 1)
            })
            .filter(move |&v| v >= lo && v <= hi)
        })
    }

    /// `self |= src + shift`, truncated at `self.len()`.
    ///
    /// `src` may be shorter or longer than `self`; members of `src` whose
    /// shifted value exceeds `self.len()` are dropped.
    pub fn or_shifted(&mut self, src: &Bitmap, shift: u64) {
        if shift >= self.len {
            return;
        }
        let word_shift = (shift / 64) as usize;
        let bit_shift = (shift % 64) as u32;
        let n = self.words.len();
        let src_words = &src.words;
        for i in word_shift..n {
            let j = i - word_shift;
            let hi = src_words.get(j).copied().unwrap_or(0);
            let val = if bit_shift == 0 {
                hi
            } else {
                let lo = if j == 0 {
                    0
                } else {
                    src_words.get(j - 1).copied().unwrap_or(0)
                };
                (hi << bit_shift) | (lo >> (64 - bit_shift))
            };
            self.words[i] |= val;
        }
        self.mask_tail();
    }

    pub fn union_with(&mut self, other: &Bitmap) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        self.mask_tail();
    }

    /// Copy restricted to `1..=len` for `len <= self.len()`.
    pub fn truncated(&self, len: u64) -> Bitmap {
        let len = len.min(self.len);
        let mut words = self.words[..word_count(len)].to_vec();
        let rem = len % 64;
        if rem != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
        Bitmap { len, words }
    }

    pub fn is_subset(&self, other: &Bitmap) -> bool {
        self.iter().all(|x| other.contains(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn insert_contains_and_bounds() {
        let mut b = Bitmap::new(130);
        for x in [1, 64, 65, 128, 130] {
            b.insert(x);
        }
        assert!(b.contains(1) && b.contains(65) && b.contains(130));
        assert!(!b.contains(0) && !b.contains(2) && !b.contains(131));
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![1, 64, 65, 128, 130]);
        assert_eq!(b.count_range(2, 128), 3);
        assert_eq!(b.count_range(131, 500), 0);
    }

    #[test]
    fn full_masks_tail() {
        let b = Bitmap::full(70);
        assert_eq!(b.count_ones(), 70);
        assert_eq!(b.words()[1], (1 << 6) - 1);
        assert_eq!(Bitmap::full(0).count_ones(), 0);
    }

    #[test]
    fn shift_adds_offset() {
        let src = Bitmap::from_values(200, [1, 4, 9, 63, 64, 100]);
        let mut dst = Bitmap::new(120);
        dst.or_shifted(&src, 5);
        assert_eq!(dst.iter().collect::<Vec<_>>(), vec![6, 9, 14, 68, 69, 105]);
    }

    proptest! {
        #[test]
        fn shifted_or_matches_set_model(
            values in proptest::collection::btree_set(1u64..400, 0..60),
            shift in 0u64..450,
            len in 1u64..420,
        ) {
            let src = Bitmap::from_values(400, values.iter().copied());
            let mut dst = Bitmap::new(len);
            dst.or_shifted(&src, shift);
            let expect: BTreeSet<u64> = values.iter().map(|v| v + shift).filter(|&v| v <= len).collect();
            prop_assert_eq!(dst.iter().collect::<BTreeSet<_>>(), expect);
        }

        #[test]
        fn count_range_matches_iteration(
            values in proptest::collection::btree_set(1u64..300, 0..80),
            lo in 0u64..320,
            hi in 0u64..320,
        ) {
            let b = Bitmap::from_values(300, values.iter().copied());
            let expect = values.iter().filter(|&&v| v >= lo && v <= hi).count() as u64;
            prop_assert_eq!(b.count_range(lo, hi), expect);
            prop_assert_eq!(b.iter_range(lo, hi).count() as u64, expect);
        }
    }
}
