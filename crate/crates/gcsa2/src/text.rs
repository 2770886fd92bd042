//! A small FM-index over plain texts.
//!
//! This module exists as reference machinery: the graph index generalizes the
//! structures here, and the test suites use this module to cross-check the
//! shared concepts (BWT, LF-mapping, backward search, sample-based locate) on
//! ordinary strings where brute force is easy.

use crate::alphabet::{Symbol, ENDMARKER, SIGMA};
use crate::succinct::CharSeq;

/// Suffix array by prefix doubling. Expects a text terminated by a unique
/// smallest endmarker.
pub fn suffix_array(text: &[Symbol]) -> Vec<usize> {
    let n = text.len();
    if n == 0 {
        return Vec::new();
    }
    // rank[i] = rank of suffix i by its first h characters
    let mut rank: Vec<u32> = text.iter().map(|s| s.ordinal() as u32).collect();
    let mut sa: Vec<usize> = (0..n).collect();
    let mut tmp = vec![0u32; n];
    let mut h = 1;
    loop {
        let key = |i: usize| (rank[i], if i + h < n { rank[i + h] as i64 } else { -1 });
        sa.sort_unstable_by_key(|&i| key(i));
        tmp[sa[0]] = 0;
        for w in 1..n {
            tmp[sa[w]] = tmp[sa[w - 1]] + u32::from(key(sa[w]) != key(sa[w - 1]));
        }
        rank.copy_from_slice(&tmp);
        if rank[sa[n - 1]] as usize == n - 1 {
            break;
        }
        h *= 2;
    }
    sa
}

/// `BWT[i] = text[(SA[i] - 1) mod n]`.
pub fn bwt_from_sa(text: &[Symbol], sa: &[usize]) -> Vec<Symbol> {
    sa.iter().map(|&p| text[(p + text.len() - 1) % text.len()]).collect()
}

/// LCP array by Kasai's algorithm; `LCP[0] = 0`.
pub fn lcp_from_sa(text: &[Symbol], sa: &[usize]) -> Vec<usize> {
    let n = text.len();
    let mut inv = vec![0usize; n];
    for (r, &p) in sa.iter().enumerate() {
        inv[p] = r;
    }
    let mut lcp = vec![0usize; n];
    let mut h = 0usize;
    for i in 0..n {
        if inv[i] > 0 {
            let j = sa[inv[i] - 1];
            while i + h < n && j + h < n && text[i + h] == text[j + h] {
                h += 1;
            }
            lcp[inv[i]] = h;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}

/// FM-index over a `$`-terminated text, with suffix array samples for locate.
pub struct TextIndex {
    bwt: CharSeq,
    c_array: [u64; SIGMA + 1],
    /// `samples[i] = Some(SA[i])` for sampled ranks.
    samples: Vec<Option<usize>>,
}

impl TextIndex {
    /// Builds the index, keeping every suffix array value `SA[i]` with
    /// `SA[i] % sample_period == 0`.
    pub fn new(text: &[Symbol], sample_period: usize) -> TextIndex {
        assert!(sample_period >= 1);
        assert_eq!(text.last(), Some(&ENDMARKER), "text must end with the endmarker");
        assert_eq!(
            text.iter().filter(|&&s| s == ENDMARKER).count(),
            1,
            "endmarker must be unique"
        );
        let sa = suffix_array(text);
        let bwt = bwt_from_sa(text, &sa);
        let mut c_array = [0u64; SIGMA + 1];
        for s in &bwt {
            c_array[s.ordinal() + 1] += 1;
        }
        for c in 0..SIGMA {
            c_array[c + 1] += c_array[c];
        }
        let samples = sa
            .iter()
            .map(|&p| (p % sample_period == 0).then_some(p))
            .collect();
        TextIndex { bwt: CharSeq::from_symbols(&bwt), c_array, samples }
    }

    pub fn len(&self) -> usize {
        self.bwt.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bwt.is_empty()
    }

    /// `LF(i, c) = C[c] + BWT.rank(i, c)`.
    pub fn lf(&self, i: usize, c: Symbol) -> usize {
        (self.c_array[c.ordinal()] + self.bwt.rank(i, c)) as usize
    }

    /// One step of the suffix-to-previous-suffix permutation.
    pub fn lf_step(&self, i: usize) -> usize {
        self.lf(i, self.bwt.get(i))
    }

    /// Lexicographic range `[sp, ep]` of suffixes prefixed by `pattern`,
    /// or `None` when there is no match.
    pub fn backward_search(&self, pattern: &[Symbol]) -> Option<(usize, usize)> {
        let mut sp = 0usize;
        let mut ep = self.len() - 1;
        for &c in pattern.iter().rev() {
            sp = self.lf(sp, c);
            ep = self.lf(ep + 1, c).wrapping_sub(1);
            if sp > ep || ep == usize::MAX {
                return None;
            }
        }
        Some((sp, ep))
    }

    /// Text position for rank `i`, walking LF until a sampled rank.
    pub fn locate_one(&self, mut i: usize) -> usize {
        let mut steps = 0usize;
        loop {
            if let Some(p) = self.samples[i] {
                return (p + steps) % self.len();
            }
            i = self.lf_step(i);
            steps += 1;
        }
    }

    /// All occurrence positions of the pattern, sorted.
    pub fn locate(&self, pattern: &[Symbol]) -> Vec<usize> {
        let Some((sp, ep)) = self.backward_search(pattern) else {
            return Vec::new();
        };
        let mut out: Vec<usize> = (sp..=ep).map(|i| self.locate_one(i)).collect();
        out.sort_unstable();
        out
    }
}
