//! Index container serialization.
//!
//! Every structure is written as length-prefixed little-endian 64-bit words,
//! so files are deterministic byte-for-byte. The container holds the encoded
//! index plus optional suffix-tree sections, each with a presence flag. See
//! FORMAT.md for the layout.

use std::io::{Read, Write};

use crate::alphabet::{Symbol, SIGMA};
use crate::graph::ValueMap;
use crate::index::{EncodedIndex, Encoding, Payload, Samples};
use crate::succinct::{BitVec, CharSeq, RankBits, SparseBitVec, UnaryVec};
use crate::suffix_tree::{CountSupport, LcpSupport};
use crate::{Error, Result};

pub const MAGIC: &[u8; 8] = b"GCSA2RS1";
pub const VERSION: u32 = 1;

fn put_u32(w: &mut impl Write, v: u32) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn put_u64(w: &mut impl Write, v: u64) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn get_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn get_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn put_words(w: &mut impl Write, words: &[u64]) -> Result<()> {
    put_u64(w, words.len() as u64)?;
    for &word in words {
        put_u64(w, word)?;
    }
    Ok(())
}

fn get_words(r: &mut impl Read) -> Result<Vec<u64>> {
    let count = get_u64(r)?;
    // Corrupt counts must fail on read, not on allocation.
    let mut words = Vec::with_capacity(count.min(1 << 20) as usize);
    for _ in 0..count {
        words.push(get_u64(r)?);
    }
    Ok(words)
}

fn put_bitvec(w: &mut impl Write, b: &BitVec) -> Result<()> {
    put_u64(w, b.len() as u64)?;
    put_words(w, b.words())
}

fn get_bitvec(r: &mut impl Read) -> Result<BitVec> {
    let len = get_u64(r)? as usize;
    let words = get_words(r)?;
    if words.len() != len.div_ceil(64) {
        return Err(Error::Format("bitvector word count does not match its length".into()));
    }
    Ok(BitVec::from_words(words, len))
}

fn put_sparse(w: &mut impl Write, b: &SparseBitVec) -> Result<()> {
    put_u64(w, b.len() as u64)?;
    put_words(w, b.positions())
}

fn get_sparse(r: &mut impl Read) -> Result<SparseBitVec> {
    let universe = get_u64(r)? as usize;
    let positions = get_words(r)?;
    let increasing = positions.windows(2).all(|w| w[0] < w[1]);
    if !increasing || positions.last().is_some_and(|&p| p as usize >= universe) {
        return Err(Error::Format("sparse bitvector positions are not sorted".into()));
    }
    Ok(SparseBitVec::from_positions(universe, positions))
}

fn put_rankbits(w: &mut impl Write, b: &RankBits) -> Result<()> {
    match b {
        RankBits::Plain(b) => {
            put_u64(w, 0)?;
            put_bitvec(w, b)
        }
        RankBits::Sparse(b) => {
            put_u64(w, 1)?;
            put_sparse(w, b)
        }
    }
}

fn get_rankbits(r: &mut impl Read) -> Result<RankBits> {
    match get_u64(r)? {
        0 => Ok(RankBits::Plain(get_bitvec(r)?)),
        1 => Ok(RankBits::Sparse(get_sparse(r)?)),
        tag => Err(Error::Format(format!("unknown bitvector tag {tag}"))),
    }
}

fn put_unary(w: &mut impl Write, u: &UnaryVec) -> Result<()> {
    put_bitvec(w, u.bits())
}

fn get_unary(r: &mut impl Read) -> Result<UnaryVec> {
    Ok(UnaryVec::from_bits(get_bitvec(r)?))
}

fn put_charseq(w: &mut impl Write, s: &CharSeq) -> Result<()> {
    put_u64(w, s.len() as u64)?;
    let mut words = vec![0u64; s.len().div_ceil(8)];
    for (i, sym) in s.symbols().enumerate() {
        words[i / 8] |= (sym.ordinal() as u64) << (8 * (i % 8));
    }
    put_words(w, &words)
}

fn get_charseq(r: &mut impl Read) -> Result<CharSeq> {
    let len = get_u64(r)? as usize;
    let words = get_words(r)?;
    if words.len() != len.div_ceil(8) {
        return Err(Error::Format("character sequence word count mismatch".into()));
    }
    let mut symbols = Vec::with_capacity(len.min(1 << 24));
    for i in 0..len {
        let byte = (words[i / 8] >> (8 * (i % 8))) as u8;
        if byte as usize >= SIGMA {
            return Err(Error::Format(format!("symbol ordinal {byte} out of range")));
        }
        symbols.push(Symbol::from_ordinal(byte));
    }
    Ok(CharSeq::from_symbols(&symbols))
}

pub(crate) fn write_index_core(w: &mut impl Write, idx: &EncodedIndex) -> Result<()> {
    for c in 0..=SIGMA {
        put_u64(w, idx.c_array[c])?;
    }
    put_unary(w, &idx.outdeg)?;
    match &idx.payload {
        Payload::General { bwt, indeg } => {
            put_charseq(w, bwt)?;
            put_unary(w, indeg)?;
        }
        Payload::Simplified { preds } => {
            for b in preds {
                put_rankbits(w, b)?;
            }
        }
    }
    put_bitvec(w, &idx.samples.marked)?;
    put_unary(w, &idx.samples.counts)?;
    put_words(w, &idx.samples.values)?;
    Ok(())
}

fn read_index_core(
    r: &mut impl Read,
    mode: Encoding,
    node_count: usize,
    vmap: ValueMap,
    kmer_count: u64,
    doubling_steps: u32,
) -> Result<EncodedIndex> {
    let mut c_array = [0u64; SIGMA + 1];
    for c in c_array.iter_mut() {
        *c = get_u64(r)?;
    }
    let outdeg = get_unary(r)?;
    let payload = match mode {
        Encoding::General => {
            let bwt = get_charseq(r)?;
            let indeg = get_unary(r)?;
            Payload::General { bwt, indeg }
        }
        Encoding::Simplified => {
            let mut preds = Vec::with_capacity(SIGMA);
            for _ in 0..SIGMA {
                preds.push(get_rankbits(r)?);
            }
            Payload::Simplified { preds }
        }
    };
    let marked = get_bitvec(r)?;
    let counts = get_unary(r)?;
    let values = get_words(r)?;
    if marked.len() != node_count {
        return Err(Error::Format("sample bitvector length mismatch".into()));
    }
    let idx = EncodedIndex {
        payload,
        outdeg,
        c_array,
        node_count,
        vmap,
        samples: Samples { marked, counts, values },
        kmer_count,
        doubling_steps,
    };
    if idx.outdeg.items() != node_count
        || !idx.c_array.windows(2).all(|w| w[0] <= w[1])
        || !idx.check_degree_identities()
        || !idx.check_sample_identities()
    {
        return Err(Error::Format("index components are inconsistent".into()));
    }
    Ok(idx)
}

/// Just the sample structures; used for size accounting.
pub(crate) fn write_samples(w: &mut impl Write, idx: &EncodedIndex) -> Result<()> {
    put_bitvec(w, &idx.samples.marked)?;
    put_unary(w, &idx.samples.counts)?;
    put_words(w, &idx.samples.values)
}

pub(crate) fn write_lcp(w: &mut impl Write, lcp: &LcpSupport) -> Result<()> {
    put_u64(w, lcp.branching() as u64)?;
    // Orders are small, so LCP values usually fit a byte; pack them.
    let narrow = lcp.values().iter().all(|&v| v < 256);
    put_u64(w, narrow as u64)?;
    if narrow {
        put_u64(w, lcp.len() as u64)?;
        let mut words = vec![0u64; lcp.len().div_ceil(8)];
        for (i, &v) in lcp.values().iter().enumerate() {
            words[i / 8] |= v << (8 * (i % 8));
        }
        put_words(w, &words)
    } else {
        put_words(w, lcp.values())
    }
}

fn read_lcp(r: &mut impl Read) -> Result<LcpSupport> {
    let branching = get_u64(r)? as usize;
    if !(2..=1 << 20).contains(&branching) {
        return Err(Error::Format(format!("implausible min-tree branching factor {branching}")));
    }
    let narrow = get_u64(r)?;
    let values = match narrow {
        0 => get_words(r)?,
        1 => {
            let len = get_u64(r)? as usize;
            let words = get_words(r)?;
            if words.len() != len.div_ceil(8) {
                return Err(Error::Format("packed LCP word count mismatch".into()));
            }
            (0..len).map(|i| (words[i / 8] >> (8 * (i % 8))) & 0xFF).collect()
        }
        other => return Err(Error::Format(format!("unknown LCP packing tag {other}"))),
    };
    Ok(LcpSupport::with_branching(values, branching))
}

pub(crate) fn write_counts(w: &mut impl Write, counts: &CountSupport) -> Result<()> {
    let (additional, redundancy) = counts.parts();
    put_bitvec(w, additional)?;
    put_bitvec(w, redundancy)
}

fn read_counts(r: &mut impl Read) -> Result<CountSupport> {
    let additional = get_bitvec(r)?;
    let redundancy = get_bitvec(r)?;
    Ok(CountSupport::from_parts(additional, redundancy))
}

/// The on-disk index: the encoded index plus optional suffix-tree sections.
pub struct IndexContainer {
    pub index: EncodedIndex,
    pub lcp: Option<LcpSupport>,
    pub counts: Option<CountSupport>,
}

impl IndexContainer {
    pub fn save(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        put_u32(w, VERSION)?;
        let mode = match self.index.encoding() {
            Encoding::General => 0u8,
            Encoding::Simplified => 1u8,
        };
        w.write_all(&[mode])?;
        let vmap = self.index.value_map();
        put_u64(w, vmap.order)?;
        put_u64(w, self.index.node_count() as u64)?;
        put_u64(w, vmap.real_count)?;
        put_u64(w, self.index.kmer_count())?;
        put_u32(w, self.index.doubling_steps())?;

        let mut section = Vec::new();
        write_index_core(&mut section, &self.index)?;
        Self::put_section(w, true, &section)?;

        section.clear();
        if let Some(lcp) = &self.lcp {
            write_lcp(&mut section, lcp)?;
        }
        Self::put_section(w, self.lcp.is_some(), &section)?;

        section.clear();
        if let Some(counts) = &self.counts {
            write_counts(&mut section, counts)?;
        }
        Self::put_section(w, self.counts.is_some(), &section)?;
        Ok(())
    }

    fn put_section(w: &mut impl Write, present: bool, payload: &[u8]) -> Result<()> {
        w.write_all(&[present as u8])?;
        put_u64(w, payload.len() as u64)?;
        w.write_all(payload)?;
        Ok(())
    }

    fn get_section(r: &mut impl Read) -> Result<Option<Vec<u8>>> {
        let mut flag = [0u8; 1];
        r.read_exact(&mut flag)?;
        let len = get_u64(r)?;
        // Grow while reading so a corrupt length fails cleanly.
        let mut payload = Vec::new();
        let read = r.take(len).read_to_end(&mut payload)?;
        if (read as u64) < len {
            return Err(Error::Format("truncated index section".into()));
        }
        Ok((flag[0] != 0).then_some(payload))
    }

    pub fn load(r: &mut impl Read) -> Result<IndexContainer> {
        Self::load_inner(r).map_err(|e| match e {
            Error::Io(io) if io.kind() == std::io::ErrorKind::UnexpectedEof => {
                Error::Format("truncated or invalid index file".into())
            }
            other => other,
        })
    }

    fn load_inner(r: &mut impl Read) -> Result<IndexContainer> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("not an index file (bad magic)".into()));
        }
        let version = get_u32(r)?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported index version {version}")));
        }
        let mut mode_byte = [0u8; 1];
        r.read_exact(&mut mode_byte)?;
        let mode = match mode_byte[0] {
            0 => Encoding::General,
            1 => Encoding::Simplified,
            other => return Err(Error::Format(format!("unknown encoding tag {other}"))),
        };
        let order = get_u64(r)?;
        let node_count = get_u64(r)? as usize;
        let real_count = get_u64(r)?;
        let kmer_count = get_u64(r)?;
        let doubling_steps = get_u32(r)?;
        let vmap = ValueMap { order, real_count };

        let core = Self::get_section(r)?
            .ok_or_else(|| Error::Format("missing index section".into()))?;
        let index =
            read_index_core(&mut core.as_slice(), mode, node_count, vmap, kmer_count, doubling_steps)?;
        let lcp = match Self::get_section(r)? {
            Some(bytes) => Some(read_lcp(&mut bytes.as_slice())?),
            None => None,
        };
        let counts = match Self::get_section(r)? {
            Some(bytes) => Some(read_counts(&mut bytes.as_slice())?),
            None => None,
        };
        Ok(IndexContainer { index, lcp, counts })
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        self.save(&mut out)?;
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<IndexContainer> {
        Self::load(&mut &bytes[..])
    }
}
