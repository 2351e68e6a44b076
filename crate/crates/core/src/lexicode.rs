//! Greedy lexicographic construction of constant GC-content codes.
//!
//! Words are scanned in the order given by an [`OffsetSpec`]; any word with
//! GC-content `w` that keeps every constraint with the words accepted so far
//! is accepted. Two acceptance engines produce bit-identical codes:
//!
//! * a linear scan over the accepted words and their images, packed
//!   contiguously, exiting at the first conflict;
//! * a bitmap over all `4^n` words in which every accepted word marks the
//!   GC-content-`w` words within distance `d - 1` of itself and of its image,
//!   so a candidate is accepted iff its bit is clear.
//!
//! The bitmap wins whenever the radius-`(d-1)` ball is small compared with
//! the GC-content slice, which is the case for the large-code entries.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bounds::{ball_volume, BoundTable, ConstraintKind};
use crate::error::{Error, Result};
use crate::math::gc_slice_size;
use crate::verify::verify;
use crate::words::{
    lane_mask, packed_distance, packed_gc, packed_odot, packed_reverse, packed_reverse_complement,
    DnaWord, OffsetSpec, RankTable, MAX_LEN,
};

/// Length, minimum distance, GC-content and constraint kind of a code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CodeParams {
    pub n: usize,
    pub d: usize,
    pub w: usize,
    pub kind: ConstraintKind,
}

impl CodeParams {
    pub fn new(n: usize, d: usize, w: usize, kind: ConstraintKind) -> Result<Self> {
        if n == 0 || n > MAX_LEN {
            return Err(Error::InvalidLength { len: n, max: MAX_LEN });
        }
        if w > n {
            return Err(Error::InvalidParams(format!("GC-content {w} exceeds length {n}")));
        }
        if d == 0 || d > n {
            return Err(Error::InvalidParams(format!("distance {d} must be in 1..={n}")));
        }
        Ok(CodeParams { n, d, w, kind })
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} d={} w={} constraint={}", self.n, self.d, self.w, self.kind)
    }
}

/// How a code was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Lexicode(OffsetSpec),
    Product(String),
    External,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Lexicode(spec) => write!(f, "lexicode({spec})"),
            Origin::Product(s) => write!(f, "product({s})"),
            Origin::External => f.write_str("external"),
        }
    }
}

/// A DNA code with its declared parameters, words in insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    pub params: CodeParams,
    pub words: Vec<DnaWord>,
    pub origin: Origin,
}

impl Code {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Which acceptance engine to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    /// Chosen from the ball and slice sizes.
    Auto,
    /// Linear scan of accepted words.
    Scan,
    /// Ball marking in a `4^n`-bit map; needs `n <= 14`.
    Mark,
}

/// Longest length for which the marking bitmap (`4^n` bits) is allowed.
pub const MARK_MAX_N: usize = 14;

const STOP_CHECK_INTERVAL: u64 = 1 << 16;

#[inline]
fn image(bits: u64, n: usize, kind: ConstraintKind) -> u64 {
    match kind {
        ConstraintKind::Gc => bits,
        ConstraintKind::GcRc => packed_reverse_complement(bits, n),
        ConstraintKind::GcR => packed_reverse(bits, n),
    }
}

struct Acceptor {
    n: usize,
    d: u32,
    w: usize,
    kind: ConstraintKind,
    accepted: Vec<u64>,
    // accepted words, each followed by its image when a cross constraint applies
    pool: Vec<u64>,
    marks: Option<Vec<u64>>,
}

impl Acceptor {
    fn new(params: &CodeParams, mark: bool) -> Self {
        let marks = mark.then(|| vec![0u64; (1usize << (2 * params.n)).div_ceil(64)]);
        Acceptor {
            n: params.n,
            d: params.d as u32,
            w: params.w,
            kind: params.kind,
            accepted: Vec::new(),
            pool: Vec::new(),
            marks,
        }
    }

    #[inline]
    fn offer(&mut self, y: u64) -> bool {
        let img = image(y, self.n, self.kind);
        if self.kind != ConstraintKind::Gc && packed_distance(y, img) < self.d {
            return false;
        }
        let free = match &self.marks {
            Some(m) => m[(y >> 6) as usize] & (1 << (y & 63)) == 0,
            None => self.scan_free(y),
        };
        if !free {
            return false;
        }
        self.accepted.push(y);
        if self.marks.is_some() {
            self.mark_ball(y);
            if self.kind != ConstraintKind::Gc {
                self.mark_ball(img);
            }
        } else {
            self.pool.push(y);
            if self.kind != ConstraintKind::Gc {
                self.pool.push(img);
            }
        }
        true
    }

    #[inline]
    fn scan_free(&self, y: u64) -> bool {
        let d = self.d;
        let mut chunks = self.pool.chunks_exact(16);
        for chunk in &mut chunks {
            let hit = chunk.iter().fold(false, |acc, &z| acc | (packed_distance(y, z) < d));
            if hit {
                return false;
            }
        }
        chunks.remainder().iter().all(|&z| packed_distance(y, z) >= d)
    }

    fn mark_ball(&mut self, center: u64) {
        let n = self.n;
        let radius = (self.d - 1) as usize;
        let marks = self.marks.as_mut().expect("marking engine");
        mark_rec(marks, center, n, 0, radius, 0);
    }
}

// Marks every word with the same GC-content as `bits` within `budget` changes
// at lanes `lane..n` (lane 0 is the least significant pair).
fn mark_rec(marks: &mut [u64], bits: u64, n: usize, lane: usize, budget: usize, gc_delta: i32) {
    let remaining = n - lane;
    let need = gc_delta.unsigned_abs() as usize;
    if need > budget || need > remaining {
        return;
    }
    if lane == n || budget == 0 {
        if gc_delta == 0 {
            marks[(bits >> 6) as usize] |= 1 << (bits & 63);
        }
        return;
    }
    mark_rec(marks, bits, n, lane + 1, budget, gc_delta);
    let shift = 2 * lane;
    let code = (bits >> shift) & 3;
    let cleared = bits & !(3 << shift);
    // same class: A<->T, C<->G
    mark_rec(marks, cleared | ((code ^ 3) << shift), n, lane + 1, budget - 1, gc_delta);
    let is_gc = code == 1 || code == 2;
    let (alt, step) = if is_gc { ([0u64, 3], -1) } else { ([1u64, 2], 1) };
    for a in alt {
        mark_rec(marks, cleared | (a << shift), n, lane + 1, budget - 1, gc_delta + step);
    }
}

fn choose_engine(params: &CodeParams, engine: Engine) -> Result<bool> {
    match engine {
        Engine::Scan => Ok(false),
        Engine::Mark => {
            if params.n > MARK_MAX_N {
                return Err(Error::InvalidParams(format!(
                    "marking engine supports n <= {MARK_MAX_N}, got {}",
                    params.n
                )));
            }
            Ok(true)
        }
        Engine::Auto => {
            if params.n > MARK_MAX_N {
                return Ok(false);
            }
            let ball = ball_volume(params.n, params.w, params.d - 1);
            Ok(ball * 8 <= gc_slice_size(params.n, params.w))
        }
    }
}

/// Visits every word of GC-content `w` in the order of `spec`. Stops early
/// (returning `false`) if `should_stop` reports true; it is polled every
/// 65536 words.
pub(crate) fn for_each_gc_word(
    n: usize,
    w: usize,
    spec: OffsetSpec,
    should_stop: &mut dyn FnMut() -> bool,
    mut visit: impl FnMut(u64),
) -> bool {
    let mut ticks = 0u64;
    match spec {
        OffsetSpec::Single { rank, ordering } => {
            let table = RankTable::new(ordering);
            let mask = lane_mask(n);
            let total: u128 = 1u128 << (2 * n);
            let mut k: u128 = 0;
            while k < total {
                let r = (rank as u128 + k) as u64 & mask;
                let bits = table.unrank_bits(r) & mask;
                if packed_gc(bits) as usize == w {
                    visit(bits);
                }
                k += 1;
                ticks += 1;
                if ticks % STOP_CHECK_INTERVAL == 0 && should_stop() {
                    return false;
                }
            }
        }
        OffsetSpec::Factored { outer, inner } => {
            let size: u64 = 1 << n;
            let mask = size - 1;
            for i in 0..size {
                let x = (i.wrapping_add(outer)) & mask;
                ticks += size;
                if x.count_ones() as usize != w {
                    continue;
                }
                for j in 0..size {
                    let y = (j.wrapping_add(inner)) & mask;
                    visit(packed_odot(x, y, n));
                }
                if ticks >= STOP_CHECK_INTERVAL {
                    ticks = 0;
                    if should_stop() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Greedy lexicographic code for `params`, scanning in the order of `spec`.
pub fn construct(params: CodeParams, spec: OffsetSpec) -> Result<Code> {
    construct_with(params, spec, Engine::Auto, &mut || false)
        .map(|c| c.expect("never stopped"))
}

/// [`construct`] with an explicit engine and a stop callback; returns
/// `Ok(None)` if the scan was abandoned.
pub fn construct_with(
    params: CodeParams,
    spec: OffsetSpec,
    engine: Engine,
    should_stop: &mut dyn FnMut() -> bool,
) -> Result<Option<Code>> {
    let params = CodeParams::new(params.n, params.d, params.w, params.kind)?;
    spec.validate(params.n)?;
    let mark = choose_engine(&params, engine)?;
    let mut acc = Acceptor::new(&params, mark);
    let finished = for_each_gc_word(params.n, params.w, spec, should_stop, |y| {
        acc.offer(y);
    });
    if !finished {
        return Ok(None);
    }
    debug_assert!(acc.accepted.iter().all(|&y| packed_gc(y) as usize == acc.w));
    let words = acc
        .accepted
        .into_iter()
        .map(|b| DnaWord::from_bits(b, params.n).expect("packed word in range"))
        .collect();
    Ok(Some(Code { params, words, origin: Origin::Lexicode(spec) }))
}

/// Verifies `code` and records its size as a constructive lower bound.
pub fn register_result(table: &mut BoundTable, code: &Code) -> Result<()> {
    let report = verify(code);
    if !report.pass {
        return Err(Error::Unverified(format!("{}: {}", code.origin, report.summary())));
    }
    let p = code.params;
    table.register(p.n, p.d, p.w, p.kind, code.len() as u64, format!("{}", code.origin))
}
