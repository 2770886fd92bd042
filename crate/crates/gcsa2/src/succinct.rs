//! Rank/select bit sequences: plain and sparse bitvectors, small-alphabet
//! character sequences, and unary-encoded count vectors.
//!
//! All structures are immutable after construction and safe to query from any
//! number of threads. Conventions follow text-index practice:
//! `rank(i, c)` counts occurrences of `c` in the prefix `[0, i)`, and
//! `select(i, c)` returns the position of the `i`-th occurrence (1-based),
//! with `select(0, c) = -1`.

use crate::alphabet::{Symbol, SIGMA};

const WORD_BITS: usize = 64;
/// Words per rank superblock (512 bits).
const BLOCK_WORDS: usize = 8;
/// Every `SELECT_SAMPLE`-th set bit position is sampled.
const SELECT_SAMPLE: usize = 64;

/// A plain bitvector with two-level rank support and sampled select support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
    /// Number of ones before each superblock.
    block_ranks: Vec<u64>,
    /// Bit position of the `(SELECT_SAMPLE * j + 1)`-th one.
    select_samples: Vec<u64>,
    ones: u64,
}

impl BitVec {
    pub fn from_bools(bits: &[bool]) -> BitVec {
        let mut words = vec![0u64; bits.len().div_ceil(WORD_BITS)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
            }
        }
        Self::from_words(words, bits.len())
    }

    pub fn from_positions(len: usize, positions: &[u64]) -> BitVec {
        let mut words = vec![0u64; len.div_ceil(WORD_BITS)];
        for &p in positions {
            let p = p as usize;
            assert!(p < len, "bit position {p} out of range for length {len}");
            words[p / WORD_BITS] |= 1 << (p % WORD_BITS);
        }
        Self::from_words(words, len)
    }

    pub fn from_words(mut words: Vec<u64>, len: usize) -> BitVec {
        assert!(words.len() == len.div_ceil(WORD_BITS));
        // Clear padding bits so serialization and equality are canonical.
        if !len.is_multiple_of(WORD_BITS) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (len % WORD_BITS)) - 1;
            }
        }
        let mut block_ranks = Vec::with_capacity(words.len() / BLOCK_WORDS + 1);
        let mut select_samples = Vec::new();
        let mut ones = 0u64;
        for (w, word) in words.iter().enumerate() {
            if w % BLOCK_WORDS == 0 {
                block_ranks.push(ones);
            }
            let mut bits = *word;
            while bits != 0 {
                let tz = bits.trailing_zeros() as usize;
                if ones.is_multiple_of(SELECT_SAMPLE as u64) {
                    select_samples.push((w * WORD_BITS + tz) as u64);
                }
                ones += 1;
                bits &= bits - 1;
            }
        }
        // A trailing entry so rank at the very end stays in bounds.
        while block_ranks.len() <= words.len() / BLOCK_WORDS {
            block_ranks.push(ones);
        }
        BitVec { len, words, block_ranks, select_samples, ones }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn count_ones(&self) -> u64 {
        self.ones
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    /// Number of ones in `[0, i)`.
    pub fn rank1(&self, i: usize) -> u64 {
        assert!(i <= self.len, "rank position {i} out of range for length {}", self.len);
        let word = i / WORD_BITS;
        let mut r = self.block_ranks[word / BLOCK_WORDS];
        for w in (word / BLOCK_WORDS) * BLOCK_WORDS..word {
            r += self.words[w].count_ones() as u64;
        }
        if !i.is_multiple_of(WORD_BITS) {
            r += (self.words[word] & ((1u64 << (i % WORD_BITS)) - 1)).count_ones() as u64;
        }
        r
    }

    /// Number of zeros in `[0, i)`.
    pub fn rank0(&self, i: usize) -> u64 {
        i as u64 - self.rank1(i)
    }

    pub fn rank(&self, i: usize, bit: bool) -> u64 {
        if bit {
            self.rank1(i)
        } else {
            self.rank0(i)
        }
    }

    /// Position of the `i`-th one (1-based); `select1(0) = -1`.
    pub fn select1(&self, i: u64) -> i64 {
        if i == 0 {
            return -1;
        }
        assert!(i <= self.ones, "select rank {i} out of range ({} ones)", self.ones);
        let sample = ((i - 1) / SELECT_SAMPLE as u64) as usize;
        let mut pos = self.select_samples[sample] as usize;
        let mut seen = sample as u64 * SELECT_SAMPLE as u64 + 1;
        // Scan forward from the sampled set bit.
        let mut word = pos / WORD_BITS;
        let mut bits = self.words[word] & !((1u64 << (pos % WORD_BITS)) - 1);
        loop {
            while bits == 0 {
                word += 1;
                bits = self.words[word];
            }
            pos = word * WORD_BITS + bits.trailing_zeros() as usize;
            if seen == i {
                return pos as i64;
            }
            seen += 1;
            bits &= bits - 1;
        }
    }

    /// Position of the `i`-th zero (1-based); `select0(0) = -1`.
    pub fn select0(&self, i: u64) -> i64 {
        if i == 0 {
            return -1;
        }
        let zeros = self.len as u64 - self.ones;
        assert!(i <= zeros, "select0 rank {i} out of range ({zeros} zeros)");
        // rank0 is monotone; binary search is fast enough for the rare callers.
        let mut lo = 0usize;
        let mut hi = self.len;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.rank0(mid + 1) < i {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo as i64
    }

    pub fn select(&self, i: u64, bit: bool) -> i64 {
        if bit {
            self.select1(i)
        } else {
            self.select0(i)
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.ones).map(|i| self.select1(i) as usize)
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

/// A bitvector stored as a sorted list of set positions. Interface-identical
/// to [`BitVec`]; meant for long vectors with few ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseBitVec {
    universe: usize,
    positions: Vec<u64>,
}

impl SparseBitVec {
    pub fn from_positions(universe: usize, positions: Vec<u64>) -> SparseBitVec {
        for w in positions.windows(2) {
            assert!(w[0] < w[1], "sparse bitvector positions must be strictly increasing");
        }
        if let Some(&last) = positions.last() {
            assert!((last as usize) < universe, "position {last} outside universe {universe}");
        }
        SparseBitVec { universe, positions }
    }

    pub fn from_bools(bits: &[bool]) -> SparseBitVec {
        let positions = bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i as u64))
            .collect();
        SparseBitVec { universe: bits.len(), positions }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.universe == 0
    }

    #[inline]
    pub fn count_ones(&self) -> u64 {
        self.positions.len() as u64
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.universe);
        self.positions.binary_search(&(i as u64)).is_ok()
    }

    pub fn rank1(&self, i: usize) -> u64 {
        assert!(i <= self.universe);
        self.positions.partition_point(|&p| p < i as u64) as u64
    }

    pub fn rank0(&self, i: usize) -> u64 {
        i as u64 - self.rank1(i)
    }

    pub fn select1(&self, i: u64) -> i64 {
        if i == 0 {
            return -1;
        }
        assert!(i <= self.positions.len() as u64);
        self.positions[i as usize - 1] as i64
    }

    pub fn select0(&self, i: u64) -> i64 {
        if i == 0 {
            return -1;
        }
        let zeros = self.universe as u64 - self.count_ones();
        assert!(i <= zeros, "select0 rank {i} out of range ({zeros} zeros)");
        let mut lo = 0usize;
        let mut hi = self.universe;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.rank0(mid + 1) < i {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo as i64
    }

    pub fn positions(&self) -> &[u64] {
        &self.positions
    }
}

/// Either bitvector representation behind one interface. The encoded index
/// keeps plain bitvectors for frequent characters and sparse ones for rare
/// characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankBits {
    Plain(BitVec),
    Sparse(SparseBitVec),
}

impl RankBits {
    pub fn len(&self) -> usize {
        match self {
            RankBits::Plain(b) => b.len(),
            RankBits::Sparse(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> bool {
        match self {
            RankBits::Plain(b) => b.get(i),
            RankBits::Sparse(b) => b.get(i),
        }
    }

    pub fn rank1(&self, i: usize) -> u64 {
        match self {
            RankBits::Plain(b) => b.rank1(i),
            RankBits::Sparse(b) => b.rank1(i),
        }
    }

    pub fn count_ones(&self) -> u64 {
        match self {
            RankBits::Plain(b) => b.count_ones(),
            RankBits::Sparse(b) => b.count_ones(),
        }
    }
}

/// A sequence over the ordinal alphabet, realized as one indicator bitvector
/// per symbol plus the packed symbols for direct access.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharSeq {
    symbols: Vec<u8>,
    indicators: Vec<BitVec>,
}

impl CharSeq {
    pub fn from_symbols(seq: &[Symbol]) -> CharSeq {
        let mut per_symbol: Vec<Vec<u64>> = vec![Vec::new(); SIGMA];
        for (i, s) in seq.iter().enumerate() {
            per_symbol[s.ordinal()].push(i as u64);
        }
        let indicators = per_symbol
            .into_iter()
            .map(|pos| BitVec::from_positions(seq.len(), &pos))
            .collect();
        CharSeq { symbols: seq.iter().map(|s| s.ordinal() as u8).collect(), indicators }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> Symbol {
        Symbol::from_ordinal(self.symbols[i])
    }

    /// Occurrences of `c` in `[0, i)`.
    pub fn rank(&self, i: usize, c: Symbol) -> u64 {
        self.indicators[c.ordinal()].rank1(i)
    }

    /// Position of the `i`-th occurrence of `c` (1-based); `select(0, c) = -1`.
    pub fn select(&self, i: u64, c: Symbol) -> i64 {
        self.indicators[c.ordinal()].select1(i)
    }

    pub fn count(&self, c: Symbol) -> u64 {
        self.indicators[c.ordinal()].count_ones()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols.iter().map(|&o| Symbol::from_ordinal(o))
    }
}

/// Counts `d_0, d_1, ...` (each at least 1) encoded in unary as
/// `0^(d_i - 1) 1`, concatenated. Item `i` occupies the slot range
/// `[select(i, 1) + 1, select(i + 1, 1)]` of the underlying bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnaryVec {
    bits: BitVec,
    items: usize,
}

impl UnaryVec {
    pub fn from_counts(counts: &[u64]) -> UnaryVec {
        let total: u64 = counts.iter().sum();
        let mut bools = Vec::with_capacity(total as usize);
        for &d in counts {
            assert!(d >= 1, "unary-encoded counts must be at least 1");
            bools.extend(std::iter::repeat_n(false, d as usize - 1));
            bools.push(true);
        }
        UnaryVec { bits: BitVec::from_bools(&bools), items: counts.len() }
    }

    pub(crate) fn from_bits(bits: BitVec) -> UnaryVec {
        let items = bits.count_ones() as usize;
        UnaryVec { bits, items }
    }

    /// Number of encoded counts.
    #[inline]
    pub fn items(&self) -> usize {
        self.items
    }

    /// Total slots (sum of the counts).
    #[inline]
    pub fn total_slots(&self) -> usize {
        self.bits.len()
    }

    /// Inclusive slot range of item `i`: `[select(i,1)+1, select(i+1,1)]`.
    pub fn range(&self, i: usize) -> (usize, usize) {
        assert!(i < self.items, "unary item {i} out of range ({} items)", self.items);
        let lo = self.bits.select1(i as u64) + 1;
        let hi = self.bits.select1(i as u64 + 1);
        (lo as usize, hi as usize)
    }

    pub fn count(&self, i: usize) -> u64 {
        let (lo, hi) = self.range(i);
        (hi - lo + 1) as u64
    }

    /// Item owning slot `p`.
    #[inline]
    pub fn slot_to_item(&self, p: usize) -> usize {
        self.bits.rank1(p) as usize
    }

    #[inline]
    pub fn rank1(&self, i: usize) -> u64 {
        self.bits.rank1(i)
    }

    #[inline]
    pub fn select1(&self, i: u64) -> i64 {
        self.bits.select1(i)
    }

    pub fn decode(&self) -> Vec<u64> {
        (0..self.items).map(|i| self.count(i)).collect()
    }

    pub(crate) fn bits(&self) -> &BitVec {
        &self.bits
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_rank(bits: &[bool], i: usize, bit: bool) -> u64 {
        bits[..i].iter().filter(|&&b| b == bit).count() as u64
    }

    fn naive_select(bits: &[bool], i: u64, bit: bool) -> i64 {
        if i == 0 {
            return -1;
        }
        let mut seen = 0;
        for (p, &b) in bits.iter().enumerate() {
            if b == bit {
                seen += 1;
                if seen == i {
                    return p as i64;
                }
            }
        }
        panic!("naive_select out of range");
    }

    fn pseudo_random_bits(n: usize, seed: u64) -> Vec<bool> {
        let mut state = seed | 1;
        (0..n)
            .map(|_| {
                state = state.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(12345);
                (state >> 33) & 3 == 0
            })
            .collect()
    }

    #[test]
    fn rank_trivia() {
        let b = BitVec::from_bools(&[false; 5]);
        assert_eq!(b.rank1(3), 0);
        let b = BitVec::from_bools(&[true; 4]);
        assert_eq!(b.rank1(4), 4);
        let b = BitVec::from_bools(&[false, true, true, false, true]);
        assert_eq!(b.rank1(4), 2);
    }

    #[test]
    fn select_trivia() {
        let b = BitVec::from_bools(&[false, true, true, false, true]);
        assert_eq!(b.select1(0), -1);
        assert_eq!(b.select1(2), 2);
        let b = BitVec::from_bools(&[false, false, false, true]);
        assert_eq!(b.select1(1), 3);
    }

    #[test]
    fn rank_select_agree_with_oracle_on_large_input() {
        let bits = pseudo_random_bits(100_000, 42);
        let plain = BitVec::from_bools(&bits);
        let sparse = SparseBitVec::from_bools(&bits);
        let ones = plain.count_ones();
        assert_eq!(ones, sparse.count_ones());
        for i in (0..=bits.len()).step_by(997) {
            assert_eq!(plain.rank1(i), naive_rank(&bits, i, true));
            assert_eq!(plain.rank0(i), naive_rank(&bits, i, false));
            assert_eq!(sparse.rank1(i), plain.rank1(i));
        }
        for r in (0..=ones).step_by(313) {
            assert_eq!(plain.select1(r), naive_select(&bits, r, true));
            assert_eq!(sparse.select1(r), plain.select1(r));
        }
        let zeros = bits.len() as u64 - ones;
        for r in (0..=zeros).step_by(4099) {
            assert_eq!(plain.select0(r), naive_select(&bits, r, false));
            assert_eq!(sparse.select0(r), plain.select0(r));
        }
    }

    #[test]
    fn charseq_rank_select() {
        use crate::alphabet::seq_from_str;
        let seq = seq_from_str("GCATCATA$").unwrap();
        let cs = CharSeq::from_symbols(&seq);
        assert_eq!(cs.len(), 9);
        let a = crate::alphabet::A;
        assert_eq!(cs.rank(9, a), 3);
        assert_eq!(cs.select(2, a), 5);
        assert_eq!(cs.select(0, a), -1);
        assert_eq!(cs.get(0), crate::alphabet::G);
        let total: u64 = (0..SIGMA).map(|c| cs.rank(9, Symbol::from_ordinal(c as u8))).sum();
        assert_eq!(total, 9);
    }

    #[test]
    fn unary_ranges_match_spec_examples() {
        let uv = UnaryVec::from_counts(&[1, 1, 1]);
        assert_eq!(uv.range(1), (1, 1));
        let uv = UnaryVec::from_counts(&[2, 1]);
        assert_eq!(uv.range(0), (0, 1));
        let uv = UnaryVec::from_counts(&[3]);
        assert_eq!(uv.range(0), (0, 2));
    }

    proptest! {
        #[test]
        fn bitvec_matches_oracle(bits in proptest::collection::vec(any::<bool>(), 0..700)) {
            let bv = BitVec::from_bools(&bits);
            let sp = SparseBitVec::from_bools(&bits);
            for i in 0..=bits.len() {
                prop_assert_eq!(bv.rank1(i), naive_rank(&bits, i, true));
                prop_assert_eq!(sp.rank1(i), bv.rank1(i));
            }
            for r in 0..=bv.count_ones() {
                let s = bv.select1(r);
                prop_assert_eq!(s, naive_select(&bits, r, true));
                prop_assert_eq!(sp.select1(r), s);
                if r > 0 {
                    // rank(select(r) + 1) = r
                    prop_assert_eq!(bv.rank1(s as usize + 1), r);
                    prop_assert!((s as usize) < bits.len());
                }
            }
        }

        #[test]
        fn unary_roundtrip(counts in proptest::collection::vec(1u64..6, 0..50)) {
            let uv = UnaryVec::from_counts(&counts);
            prop_assert_eq!(uv.decode(), counts.clone());
            prop_assert_eq!(uv.items(), counts.len());
            prop_assert_eq!(uv.total_slots() as u64, counts.iter().sum::<u64>());
        }
    }
}
