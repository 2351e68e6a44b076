//! DNA, binary and ternary words.
//!
//! A [`DnaWord`] packs up to 32 nucleotides into one `u64`, two bits per
//! position, with position 1 in the most significant used pair. The codes are
//! fixed at `A=0, C=1, G=2, T=3`; the six scan orders of [`NucleotideOrdering`]
//! only change how words are ranked, never how they are stored.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Longest supported word.
pub const MAX_LEN: usize = 32;

const LO: u64 = 0x5555_5555_5555_5555;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Nucleotide {
    A = 0,
    C = 1,
    G = 2,
    T = 3,
}

impl Nucleotide {
    pub const ALL: [Nucleotide; 4] = [Nucleotide::A, Nucleotide::C, Nucleotide::G, Nucleotide::T];

    #[inline]
    pub fn from_code(code: u8) -> Self {
        Self::ALL[(code & 3) as usize]
    }

    #[inline]
    pub fn code(self) -> u8 {
        self as u8
    }

    /// Watson-Crick complement: A<->T, C<->G.
    #[inline]
    pub fn complement(self) -> Self {
        Self::from_code(self.code() ^ 3)
    }

    #[inline]
    pub fn is_gc(self) -> bool {
        matches!(self, Nucleotide::C | Nucleotide::G)
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'A' => Ok(Nucleotide::A),
            'C' => Ok(Nucleotide::C),
            'G' => Ok(Nucleotide::G),
            'T' => Ok(Nucleotide::T),
            other => Err(Error::InvalidCharacter(other)),
        }
    }

    pub fn to_char(self) -> char {
        b"ACGT"[self as usize] as char
    }
}

#[inline]
pub(crate) fn lane_mask(n: usize) -> u64 {
    if n >= 32 {
        u64::MAX
    } else {
        (1u64 << (2 * n)) - 1
    }
}

#[inline]
fn bit_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Hamming distance between two packed DNA words of the same length.
#[inline(always)]
pub fn packed_distance(a: u64, b: u64) -> u32 {
    let x = a ^ b;
    ((x | (x >> 1)) & LO).count_ones()
}

/// Number of C/G lanes in a packed word (C=01 and G=10 are the lanes whose two
/// bits differ).
#[inline(always)]
pub fn packed_gc(bits: u64) -> u32 {
    ((bits ^ (bits >> 1)) & LO).count_ones()
}

#[inline]
pub(crate) fn packed_reverse(bits: u64, n: usize) -> u64 {
    let r = bits.reverse_bits();
    let r = ((r >> 1) & LO) | ((r & LO) << 1);
    r >> (64 - 2 * n)
}

#[inline]
pub(crate) fn packed_complement(bits: u64, n: usize) -> u64 {
    bits ^ lane_mask(n)
}

#[inline]
pub(crate) fn packed_reverse_complement(bits: u64, n: usize) -> u64 {
    packed_complement(packed_reverse(bits, n), n)
}

// Morton spread: bit j moves to bit 2j.
#[inline]
fn spread(v: u64) -> u64 {
    let mut x = v & 0xFFFF_FFFF;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    (x | (x << 1)) & LO
}

#[inline]
fn compact(v: u64) -> u64 {
    let mut x = v & LO;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x >> 4)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x >> 8)) & 0x0000_FFFF_0000_FFFF;
    (x | (x >> 16)) & 0xFFFF_FFFF
}

/// Packed form of `x ⊙ y` for binary words given as `n`-bit integers.
#[inline]
pub(crate) fn packed_odot(x: u64, y: u64, n: usize) -> u64 {
    let m = bit_mask(n);
    let hi = !(x ^ y) & m;
    let lo = !y & m;
    (spread(hi) << 1) | spread(lo)
}

/// A DNA word of length 1..=32.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DnaWord {
    bits: u64,
    len: u8,
}

impl DnaWord {
    pub fn from_bits(bits: u64, len: usize) -> Result<Self> {
        if len == 0 || len > MAX_LEN {
            return Err(Error::InvalidLength { len, max: MAX_LEN });
        }
        if bits & !lane_mask(len) != 0 {
            return Err(Error::InvalidParams(alloc::format!(
                "packed value {bits:#x} has bits above length {len}"
            )));
        }
        Ok(Self::from_bits_unchecked(bits, len))
    }

    #[inline]
    pub(crate) fn from_bits_unchecked(bits: u64, len: usize) -> Self {
        debug_assert!(len >= 1 && len <= MAX_LEN && bits & !lane_mask(len) == 0);
        DnaWord { bits, len: len as u8 }
    }

    pub fn from_nucleotides(seq: &[Nucleotide]) -> Result<Self> {
        if seq.is_empty() || seq.len() > MAX_LEN {
            return Err(Error::InvalidLength { len: seq.len(), max: MAX_LEN });
        }
        let bits = seq.iter().fold(0u64, |acc, b| (acc << 2) | b.code() as u64);
        Ok(Self::from_bits_unchecked(bits, seq.len()))
    }

    /// `count` copies of `b` (helper for building test witnesses).
    pub fn repeat(b: Nucleotide, count: usize) -> Result<Self> {
        Self::from_nucleotides(&alloc::vec![b; count])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Nucleotide at 0-based position `i` (leftmost is 0).
    #[inline]
    pub fn get(&self, i: usize) -> Nucleotide {
        assert!(i < self.len(), "position {i} out of range");
        let shift = 2 * (self.len() - 1 - i);
        Nucleotide::from_code(((self.bits >> shift) & 3) as u8)
    }

    pub fn iter(&self) -> impl Iterator<Item = Nucleotide> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub fn to_vec(&self) -> Vec<Nucleotide> {
        self.iter().collect()
    }

    /// Number of positions holding C or G.
    #[inline]
    pub fn gc_content(&self) -> usize {
        packed_gc(self.bits) as usize
    }

    pub fn hamming(&self, other: &DnaWord) -> Result<usize> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { left: self.len(), right: other.len() });
        }
        Ok(packed_distance(self.bits, other.bits) as usize)
    }

    pub fn reverse(&self) -> DnaWord {
        Self::from_bits_unchecked(packed_reverse(self.bits, self.len()), self.len())
    }

    pub fn complement(&self) -> DnaWord {
        Self::from_bits_unchecked(packed_complement(self.bits, self.len()), self.len())
    }

    pub fn reverse_complement(&self) -> DnaWord {
        Self::from_bits_unchecked(packed_reverse_complement(self.bits, self.len()), self.len())
    }

    /// Complements the first `k` positions, leaving the rest unchanged.
    pub fn complement_prefix(&self, k: usize) -> DnaWord {
        let n = self.len();
        let k = k.min(n);
        let mask = lane_mask(n) & !lane_mask(n - k);
        Self::from_bits_unchecked(self.bits ^ mask, n)
    }
}

impl fmt::Display for DnaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            fmt::Write::write_char(f, b.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for DnaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DnaWord({self})")
    }
}

impl FromStr for DnaWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let len = s.chars().count();
        if len == 0 || len > MAX_LEN {
            return Err(Error::InvalidLength { len, max: MAX_LEN });
        }
        let mut bits = 0u64;
        for c in s.chars() {
            bits = (bits << 2) | Nucleotide::from_char(c)?.code() as u64;
        }
        Ok(Self::from_bits_unchecked(bits, len))
    }
}

/// Parses an uppercase `ACGT` string.
pub fn parse_word(text: &str) -> Result<DnaWord> {
    text.parse()
}

/// A binary word of length 0..=32, position 1 in the most significant bit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryWord {
    bits: u64,
    len: u8,
}

impl BinaryWord {
    pub fn new(bits: u64, len: usize) -> Result<Self> {
        if len > MAX_LEN {
            return Err(Error::InvalidLength { len, max: MAX_LEN });
        }
        if bits & !bit_mask(len) != 0 {
            return Err(Error::InvalidParams(alloc::format!(
                "binary value {bits:#b} does not fit in {len} bits"
            )));
        }
        Ok(BinaryWord { bits, len: len as u8 })
    }

    /// The empty word.
    pub fn empty() -> Self {
        BinaryWord { bits: 0, len: 0 }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Bit at 0-based position `i` (leftmost is 0).
    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        assert!(i < self.len(), "position {i} out of range");
        ((self.bits >> (self.len() - 1 - i)) & 1) as u8
    }

    pub fn hamming(&self, other: &BinaryWord) -> Result<usize> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { left: self.len(), right: other.len() });
        }
        Ok((self.bits ^ other.bits).count_ones() as usize)
    }

    pub fn reverse(&self) -> BinaryWord {
        if self.len == 0 {
            return *self;
        }
        BinaryWord { bits: self.bits.reverse_bits() >> (64 - self.len()), len: self.len }
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            fmt::Write::write_char(f, if self.get(i) == 1 { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryWord({self})")
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let len = s.chars().count();
        if len > MAX_LEN {
            return Err(Error::InvalidLength { len, max: MAX_LEN });
        }
        let mut bits = 0u64;
        for c in s.chars() {
            let b = match c {
                '0' => 0,
                '1' => 1,
                other => return Err(Error::InvalidCharacter(other)),
            };
            bits = (bits << 1) | b;
        }
        Ok(BinaryWord { bits, len: len as u8 })
    }
}

/// A word over `{0, 1, 2}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TernaryWord {
    digits: Vec<u8>,
}

impl TernaryWord {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if digits.len() > MAX_LEN {
            return Err(Error::InvalidLength { len: digits.len(), max: MAX_LEN });
        }
        if let Some(&bad) = digits.iter().find(|&&d| d > 2) {
            return Err(Error::InvalidCharacter((b'0' + bad.min(9)) as char));
        }
        Ok(TernaryWord { digits })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Number of nonzero digits.
    pub fn weight(&self) -> usize {
        self.digits.iter().filter(|&&d| d != 0).count()
    }

    pub fn hamming(&self, other: &TernaryWord) -> Result<usize> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { left: self.len(), right: other.len() });
        }
        Ok(self.digits.iter().zip(&other.digits).filter(|(a, b)| a != b).count())
    }

    pub fn reverse(&self) -> TernaryWord {
        let mut digits = self.digits.clone();
        digits.reverse();
        TernaryWord { digits }
    }
}

impl fmt::Display for TernaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.digits {
            fmt::Write::write_char(f, (b'0' + d) as char)?;
        }
        Ok(())
    }
}

impl fmt::Debug for TernaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TernaryWord({self})")
    }
}

impl FromStr for TernaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                '2' => Ok(2),
                other => Err(Error::InvalidCharacter(other)),
            })
            .collect::<Result<Vec<u8>>>()?;
        TernaryWord::new(digits)
    }
}

/// `x ⊙ y`: (0,1)->A, (1,0)->C, (1,1)->G, (0,0)->T.
///
/// The GC-content of the result equals the weight of `x`.
pub fn odot(x: BinaryWord, y: BinaryWord) -> Result<DnaWord> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.is_empty() {
        return Err(Error::InvalidLength { len: 0, max: MAX_LEN });
    }
    Ok(DnaWord::from_bits_unchecked(packed_odot(x.bits, y.bits, x.len()), x.len()))
}

/// Inverse of [`odot`].
pub fn split_odot(z: DnaWord) -> (BinaryWord, BinaryWord) {
    let n = z.len();
    let b = z.bits();
    let lo = b & LO;
    let hi = (b >> 1) & LO;
    let x = compact(hi ^ lo);
    let y = compact(!lo & LO) & bit_mask(n);
    (BinaryWord { bits: x, len: n as u8 }, BinaryWord { bits: y, len: n as u8 })
}

/// `x ⊘ y`: ternary 1->C, 2->G; the j-th zero of `x` (left to right) becomes
/// A if `y_j = 0` and T if `y_j = 1`.
pub fn oslash(x: &TernaryWord, y: BinaryWord) -> Result<DnaWord> {
    let zeros = x.len() - x.weight();
    if zeros != y.len() {
        return Err(Error::LengthMismatch { left: zeros, right: y.len() });
    }
    if x.is_empty() {
        return Err(Error::InvalidLength { len: 0, max: MAX_LEN });
    }
    let mut j = 0;
    let mut bits = 0u64;
    for &d in x.digits() {
        let b = match d {
            1 => Nucleotide::C,
            2 => Nucleotide::G,
            _ => {
                let yj = y.get(j);
                j += 1;
                if yj == 0 {
                    Nucleotide::A
                } else {
                    Nucleotide::T
                }
            }
        };
        bits = (bits << 2) | b.code() as u64;
    }
    Ok(DnaWord::from_bits_unchecked(bits, x.len()))
}

/// One of the six scan orders of the nucleotides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NucleotideOrdering(u8);

const ORDERS: [[Nucleotide; 4]; 6] = {
    use Nucleotide::*;
    [
        [A, C, G, T],
        [C, G, A, T],
        [A, T, C, G],
        [C, A, T, G],
        [C, A, G, T],
        [A, C, T, G],
    ]
};

impl NucleotideOrdering {
    /// `A < C < G < T`.
    pub const STANDARD: NucleotideOrdering = NucleotideOrdering(1);

    pub fn new(index: u8) -> Result<Self> {
        if (1..=6).contains(&index) {
            Ok(NucleotideOrdering(index))
        } else {
            Err(Error::InvalidOrdering(index))
        }
    }

    pub fn all() -> impl Iterator<Item = NucleotideOrdering> {
        (1..=6).map(NucleotideOrdering)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// Nucleotides from smallest to largest.
    pub fn sequence(self) -> [Nucleotide; 4] {
        ORDERS[(self.0 - 1) as usize]
    }

    /// Position of `b` in this order (0 = smallest).
    pub fn digit(self, b: Nucleotide) -> u8 {
        self.sequence().iter().position(|&c| c == b).unwrap() as u8
    }

    pub fn rank(self, x: &DnaWord) -> u64 {
        x.iter().fold(0u64, |acc, b| (acc << 2) | self.digit(b) as u64)
    }

    pub fn unrank(self, r: u64, n: usize) -> Result<DnaWord> {
        if n == 0 || n > MAX_LEN {
            return Err(Error::InvalidLength { len: n, max: MAX_LEN });
        }
        if r & !lane_mask(n) != 0 {
            return Err(Error::RankOutOfRange { rank: r, n });
        }
        let seq = self.sequence();
        let bits = (0..n).rev().fold(0u64, |acc, i| {
            let digit = ((r >> (2 * i)) & 3) as usize;
            (acc << 2) | seq[digit].code() as u64
        });
        Ok(DnaWord::from_bits_unchecked(bits, n))
    }
}

impl fmt::Display for NucleotideOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// 0-based position of `x` in the lexicographic list under `ord`.
pub fn rank(x: &DnaWord, ord: NucleotideOrdering) -> u64 {
    ord.rank(x)
}

pub fn unrank(r: u64, n: usize, ord: NucleotideOrdering) -> Result<DnaWord> {
    ord.unrank(r, n)
}

/// Byte-wise lookup tables turning ranks into packed words for one ordering.
/// Four lanes per byte, so one table lookup per byte.
#[derive(Clone)]
pub(crate) struct RankTable {
    to_bits: [u8; 256],
}

impl RankTable {
    pub(crate) fn new(ord: NucleotideOrdering) -> Self {
        let seq = ord.sequence();
        let mut to_bits = [0u8; 256];
        for (byte, slot) in to_bits.iter_mut().enumerate() {
            let mut out = 0u8;
            for lane in 0..4 {
                let digit = (byte >> (2 * lane)) & 3;
                out |= seq[digit].code() << (2 * lane);
            }
            *slot = out;
        }
        RankTable { to_bits }
    }

    #[inline]
    pub(crate) fn unrank_bits(&self, r: u64) -> u64 {
        let bytes = r.to_le_bytes();
        let mut out = [0u8; 8];
        for (o, b) in out.iter_mut().zip(bytes) {
            *o = self.to_bits[b as usize];
        }
        // Lanes above the word length map digit 0 to the smallest nucleotide,
        // which may be nonzero; callers mask.
        u64::from_le_bytes(out)
    }
}

/// Where a lexicographic scan starts and how words are ordered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OffsetSpec {
    /// Start at `rank` in the list ordered by `ordering`, wrapping to the head.
    Single { rank: u64, ordering: NucleotideOrdering },
    /// Factored order `u_i ⊙ u_j` over binary words, outer index slowest, with
    /// separate offsets for the two slots.
    Factored { outer: u64, inner: u64 },
}

impl OffsetSpec {
    /// Offset zero under the standard ordering.
    pub const ZERO: OffsetSpec =
        OffsetSpec::Single { rank: 0, ordering: NucleotideOrdering::STANDARD };

    pub fn single(rank: u64, ordering: u8) -> Result<Self> {
        Ok(OffsetSpec::Single { rank, ordering: NucleotideOrdering::new(ordering)? })
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if n == 0 || n > MAX_LEN {
            return Err(Error::InvalidLength { len: n, max: MAX_LEN });
        }
        match *self {
            OffsetSpec::Single { rank, .. } => {
                if rank & !lane_mask(n) != 0 {
                    return Err(Error::RankOutOfRange { rank, n });
                }
            }
            OffsetSpec::Factored { outer, inner } => {
                for r in [outer, inner] {
                    if r & !bit_mask(n) != 0 {
                        return Err(Error::RankOutOfRange { rank: r, n });
                    }
                }
            }
        }
        Ok(())
    }

    /// Offset text: a hex rank, or two hex ranks joined by `⊙` (or `o`).
    /// `ordering` applies to single offsets only.
    pub fn parse(text: &str, ordering: NucleotideOrdering) -> Result<Self> {
        let text = text.trim();
        let parts: Option<(&str, &str)> =
            text.split_once('⊙').or_else(|| text.split_once('o'));
        match parts {
            Some((a, b)) => Ok(OffsetSpec::Factored { outer: parse_hex(a)?, inner: parse_hex(b)? }),
            None => Ok(OffsetSpec::Single { rank: parse_hex(text)?, ordering }),
        }
    }

    /// Hex rank(s) without the ordering, in the form accepted by [`parse`](Self::parse).
    pub fn offset_text(&self) -> String {
        match *self {
            OffsetSpec::Single { rank, .. } => alloc::format!("{rank:x}"),
            OffsetSpec::Factored { outer, inner } => alloc::format!("{outer:x}⊙{inner:x}"),
        }
    }

    /// The ordering index used, or `None` for factored scans.
    pub fn ordering(&self) -> Option<NucleotideOrdering> {
        match *self {
            OffsetSpec::Single { ordering, .. } => Some(ordering),
            OffsetSpec::Factored { .. } => None,
        }
    }
}

impl fmt::Display for OffsetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            OffsetSpec::Single { rank, ordering } => write!(f, "{rank:x}^{ordering}"),
            OffsetSpec::Factored { outer, inner } => write!(f, "{outer:x}⊙{inner:x}"),
        }
    }
}

/// Parses a base-16 rank with an optional `0x` prefix.
pub fn parse_hex(text: &str) -> Result<u64> {
    let t = text.trim();
    let digits = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
    if digits.is_empty() {
        return Err(Error::InvalidOffset(String::from(text)));
    }
    u64::from_str_radix(digits, 16).map_err(|_| Error::InvalidOffset(String::from(text)))
}

/// Streams all `4^n` words in the order defined by an [`OffsetSpec`].
pub struct WordStream {
    n: usize,
    kind: StreamKind,
    emitted: u128,
    total: u128,
}

enum StreamKind {
    Single { table: RankTable, start: u64 },
    Factored { outer: u64, inner: u64 },
}

impl WordStream {
    pub fn new(n: usize, spec: OffsetSpec) -> Result<Self> {
        spec.validate(n)?;
        let kind = match spec {
            OffsetSpec::Single { rank, ordering } => {
                StreamKind::Single { table: RankTable::new(ordering), start: rank }
            }
            OffsetSpec::Factored { outer, inner } => StreamKind::Factored { outer, inner },
        };
        Ok(WordStream { n, kind, emitted: 0, total: 1u128 << (2 * n) })
    }
}

impl Iterator for WordStream {
    type Item = DnaWord;

    fn next(&mut self) -> Option<DnaWord> {
        if self.emitted >= self.total {
            return None;
        }
        let k = self.emitted;
        self.emitted += 1;
        let n = self.n;
        let bits = match &self.kind {
            StreamKind::Single { table, start } => {
                let r = ((*start as u128 + k) % self.total) as u64;
                table.unrank_bits(r) & lane_mask(n)
            }
            StreamKind::Factored { outer, inner } => {
                let size = 1u128 << n;
                let i = k / size;
                let j = k % size;
                let x = ((i + *outer as u128) % size) as u64;
                let y = ((j + *inner as u128) % size) as u64;
                packed_odot(x, y, n)
            }
        };
        Some(DnaWord::from_bits_unchecked(bits, n))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rem = self.total - self.emitted;
        let r = usize::try_from(rem).unwrap_or(usize::MAX);
        (r, usize::try_from(rem).ok())
    }
}

/// Streams words in the order of `spec`.
pub fn iterate(n: usize, spec: OffsetSpec) -> Result<WordStream> {
    WordStream::new(n, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::string::ToString;
    use alloc::vec;

    fn w(s: &str) -> DnaWord {
        s.parse().unwrap()
    }

    fn b(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        let x = w("ACGT");
        assert_eq!(x.to_vec(), vec![Nucleotide::A, Nucleotide::C, Nucleotide::G, Nucleotide::T]);
        assert_eq!(x.bits(), 0b00_01_10_11);
        assert_eq!(w("AAAA").bits(), 0);
        assert_eq!(parse_word("ACGX"), Err(Error::InvalidCharacter('X')));
        assert!(matches!(parse_word(""), Err(Error::InvalidLength { .. })));
        assert!(matches!(parse_word(&"A".repeat(33)), Err(Error::InvalidLength { .. })));
        assert_eq!(w(&"T".repeat(32)).bits(), u64::MAX);
        assert_eq!(parse_word("acgt"), Err(Error::InvalidCharacter('a')));
    }

    #[test]
    fn gc_examples() {
        assert_eq!(w("AACG").gc_content(), 2);
        assert_eq!(w("TTTT").gc_content(), 0);
        assert_eq!(w("GCGC").gc_content(), 4);
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(w("AACG").hamming(&w("ACCG")), Ok(1));
        assert_eq!(w("ACGT").hamming(&w("ACGT")), Ok(0));
        assert_eq!(w("AAAA").hamming(&w("TTTT")), Ok(4));
        assert_eq!(w("AC").hamming(&w("ACG")), Err(Error::LengthMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn reverse_complement_examples() {
        assert_eq!(w("AACG").reverse_complement(), w("CGTT"));
        assert_eq!(w("AT").reverse_complement(), w("AT"));
        assert_eq!(w("GATTC").reverse_complement().reverse_complement(), w("GATTC"));
        let long = w("ACGTTGCAACGTTGCAACGTTGCAACGTTGCG");
        assert_eq!(long.len(), 32);
        assert_eq!(long.reverse().reverse(), long);
        assert_eq!(w("ACGTT").reverse(), w("TTGCA"));
    }

    #[test]
    fn complement_prefix_flips_leading_positions() {
        assert_eq!(w("CCTT").complement_prefix(2), w("GGTT"));
        assert_eq!(w("ACGTA").complement_prefix(2), w("TGGTA"));
        assert_eq!(w("ACG").complement_prefix(0), w("ACG"));
    }

    #[test]
    fn odot_examples() {
        assert_eq!(odot(b("0110"), b("1010")).unwrap(), w("ACGT"));
        assert_eq!(odot(b("0000"), b("0000")).unwrap(), w("TTTT"));
        assert!(matches!(odot(b("01"), b("011")), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn odot_is_bijective_for_n3() {
        let mut seen = BTreeSet::new();
        for x in 0..8 {
            for y in 0..8 {
                let z = odot(BinaryWord::new(x, 3).unwrap(), BinaryWord::new(y, 3).unwrap()).unwrap();
                assert!(seen.insert(z));
                assert_eq!(split_odot(z), (BinaryWord::new(x, 3).unwrap(), BinaryWord::new(y, 3).unwrap()));
            }
        }
        assert_eq!(seen.len(), 64);
    }

    // Rule-by-rule evaluator over characters, kept separate from `oslash`.
    fn oslash_by_rules(x: &str, y: &str) -> String {
        let ys: Vec<char> = y.chars().collect();
        let mut j = 0;
        x.chars()
            .map(|c| match c {
                '1' => 'C',
                '2' => 'G',
                _ => {
                    let out = if ys[j] == '0' { 'A' } else { 'T' };
                    j += 1;
                    out
                }
            })
            .collect()
    }

    #[test]
    fn oslash_examples() {
        let t = |s: &str| s.parse::<TernaryWord>().unwrap();
        assert_eq!(oslash(&t("102"), b("1")).unwrap(), w("CTG"));
        assert_eq!(oslash_by_rules("102", "1"), "CTG");
        assert_eq!(oslash(&t("000"), b("000")).unwrap(), w("AAA"));
        assert_eq!(oslash(&t("12"), BinaryWord::empty()).unwrap(), w("CG"));
        assert!(matches!(oslash(&t("102"), b("10")), Err(Error::LengthMismatch { .. })));
        // exhaustive cross-check for length 3
        for code in 0..27u32 {
            let digits: Vec<u8> = (0..3).map(|i| ((code / 3u32.pow(2 - i)) % 3) as u8).collect();
            let x = TernaryWord::new(digits).unwrap();
            let zeros = 3 - x.weight();
            for y in 0..(1u64 << zeros) {
                let yw = BinaryWord::new(y, zeros).unwrap();
                let z = oslash(&x, yw).unwrap();
                assert_eq!(z.to_string(), oslash_by_rules(&x.to_string(), &yw.to_string()));
                assert_eq!(z.gc_content(), x.weight());
            }
        }
    }

    #[test]
    fn rank_examples() {
        let ord1 = NucleotideOrdering::STANDARD;
        assert_eq!(rank(&w("AAAA"), ord1), 0);
        assert_eq!(unrank(0x59, 4, ord1).unwrap(), w("CCGC"));
        assert!(matches!(unrank(256, 4, ord1), Err(Error::RankOutOfRange { .. })));
        assert!(NucleotideOrdering::new(0).is_err());
        assert!(NucleotideOrdering::new(7).is_err());
    }

    // Sort all 4^4 words by the ordering's character comparison and check the
    // position of each one against `rank`.
    #[test]
    fn rank_matches_sorted_list() {
        for ord in NucleotideOrdering::all() {
            let seq = ord.sequence();
            let mut all: Vec<String> = (0..256u64)
                .map(|v| DnaWord::from_bits(v, 4).unwrap().to_string())
                .collect();
            let key = |s: &String| -> Vec<usize> {
                s.chars()
                    .map(|c| seq.iter().position(|b| b.to_char() == c).unwrap())
                    .collect()
            };
            all.sort_by_key(key);
            for (pos, s) in all.iter().enumerate() {
                assert_eq!(ord.rank(&w(s)), pos as u64);
                assert_eq!(ord.unrank(pos as u64, 4).unwrap(), w(s));
            }
            if ord.index() == 1 {
                assert_eq!(all[0x59], "CCGC");
            }
        }
    }

    #[test]
    fn rank_table_agrees_with_unrank() {
        for ord in NucleotideOrdering::all() {
            let table = RankTable::new(ord);
            for n in [1usize, 3, 6, 11] {
                for r in (0..(1u64 << (2 * n))).step_by(97) {
                    let bits = table.unrank_bits(r) & lane_mask(n);
                    assert_eq!(bits, ord.unrank(r, n).unwrap().bits());
                }
            }
        }
    }

    #[test]
    fn iterate_examples() {
        let words: Vec<_> = iterate(2, OffsetSpec::ZERO).unwrap().take(3).collect();
        assert_eq!(words, vec![w("AA"), w("AC"), w("AG")]);
        let first = iterate(2, OffsetSpec::Factored { outer: 0, inner: 0 }).unwrap().next();
        assert_eq!(first, Some(w("TT")));
        let specs = [
            OffsetSpec::ZERO,
            OffsetSpec::single(0xb, 4).unwrap(),
            OffsetSpec::Factored { outer: 3, inner: 5 },
        ];
        for spec in specs {
            let all: Vec<_> = iterate(3, spec).unwrap().collect();
            assert_eq!(all.len(), 64);
            assert_eq!(all.iter().collect::<BTreeSet<_>>().len(), 64);
        }
    }

    #[test]
    fn iterate_wraps_around() {
        let spec = OffsetSpec::single(14, 1).unwrap();
        let words: Vec<_> = iterate(2, spec).unwrap().collect();
        assert_eq!(words[0], w("TG"));
        assert_eq!(words[1], w("TT"));
        assert_eq!(words[2], w("AA"));
        let f: Vec<_> = iterate(2, OffsetSpec::Factored { outer: 1, inner: 3 }).unwrap().take(2).collect();
        assert_eq!(f[0], odot(b("01"), b("11")).unwrap());
        assert_eq!(f[1], odot(b("01"), b("00")).unwrap());
    }

    #[test]
    fn offsets_parse() {
        let ord = NucleotideOrdering::new(2).unwrap();
        assert_eq!(OffsetSpec::parse("59", ord).unwrap(), OffsetSpec::Single { rank: 0x59, ordering: ord });
        assert_eq!(OffsetSpec::parse("0x4121c8", ord).unwrap(), OffsetSpec::Single { rank: 0x4121c8, ordering: ord });
        assert_eq!(OffsetSpec::parse("994⊙70b", ord).unwrap(), OffsetSpec::Factored { outer: 0x994, inner: 0x70b });
        assert_eq!(OffsetSpec::parse("2do23", ord).unwrap(), OffsetSpec::Factored { outer: 0x2d, inner: 0x23 });
        assert!(OffsetSpec::parse("xyz", ord).is_err());
        assert!(OffsetSpec::parse("", ord).is_err());
        assert!(OffsetSpec::single(256, 1).unwrap().validate(4).is_err());
        assert!(OffsetSpec::Factored { outer: 16, inner: 0 }.validate(4).is_err());
        let spec = OffsetSpec::Factored { outer: 0x2d, inner: 0x23 };
        assert_eq!(OffsetSpec::parse(&spec.offset_text(), ord).unwrap(), spec);
    }
}
