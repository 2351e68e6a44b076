//! Upper and lower bounds on the size of constant GC-content DNA codes.
//!
//! Every value is an exact integer and carries a provenance chain naming the
//! formula used at each step. [`BoundTable`] memoizes the shortening
//! recursions for all lengths up to a fixed maximum and folds in every other
//! upper bound at every node; afterwards it only answers read-only queries.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::math::{binom, ceil_div, gc_slice_size, pow2};
use crate::words::MAX_LEN;

/// Which distance constraints a code must satisfy besides constant GC-content.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintKind {
    /// Pairwise distance only.
    Gc,
    /// Adds `H(x, y^RC) >= d` for all ordered pairs, including `x = y`.
    GcRc,
    /// Adds `H(x, y^R) >= d` for all ordered pairs, including `x = y`.
    GcR,
}

impl ConstraintKind {
    pub const ALL: [ConstraintKind; 3] = [ConstraintKind::Gc, ConstraintKind::GcRc, ConstraintKind::GcR];

    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintKind::Gc => "gc",
            ConstraintKind::GcRc => "gcrc",
            ConstraintKind::GcR => "gcr",
        }
    }
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConstraintKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['_', '-', ','], "").as_str() {
            "gc" => Ok(ConstraintKind::Gc),
            "gcrc" => Ok(ConstraintKind::GcRc),
            "gcr" => Ok(ConstraintKind::GcR),
            _ => Err(Error::InvalidParams(format!("unknown constraint {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Upper,
    Lower,
}

/// Identifies one formula of this module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    /// Exact binary code size from the built-in rules (GC-content 0 or n).
    BinaryExact,
    /// Singleton bound `2^(n-d+1)` for a binary code (GC-content 0 or n).
    BinarySingleton,
    /// Length below the distance: at most one word.
    SingleWord,
    /// `d <= 1`: every word of GC-content `w`.
    AllWords,
    /// `d = 1` with reverse complements: one word from each `{x, x^RC}` pair.
    ComplementPairs,
    /// `d = n`, pairwise only.
    FullDistance,
    /// `d = n` with reverse complements.
    FullDistanceRc,
    /// `d = 2`: weight-`w` words times the even-weight parity code.
    ParityProduct,
    /// `d = 2`, even `n`: weight-`w` words times half the odd-weight words.
    OddWeightProduct,
    /// Shortening on a position rich in C or G.
    ShortenGc,
    /// Shortening on a position rich in A or T.
    ShortenAt,
    PlotkinInteger,
    PlotkinReal,
    SpherePacking,
    Halving,
    GilbertGc,
    GilbertGcRc,
    /// Reverse and reverse-complement constraints coincide for even `n`.
    ReverseEquivalence,
    /// A reverse-complement code together with its images.
    Doubling,
    /// An explicit, verified code.
    Construction,
    /// No words known.
    Empty,
}

impl Formula {
    pub fn name(self) -> &'static str {
        match self {
            Formula::BinaryExact => "binary-exact",
            Formula::BinarySingleton => "binary-singleton",
            Formula::SingleWord => "single-word",
            Formula::AllWords => "all-words",
            Formula::ComplementPairs => "complement-pairs",
            Formula::FullDistance => "full-distance",
            Formula::FullDistanceRc => "full-distance-rc",
            Formula::ParityProduct => "d2-parity-product",
            Formula::OddWeightProduct => "d2-odd-weight-product",
            Formula::ShortenGc => "shorten-gc",
            Formula::ShortenAt => "shorten-at",
            Formula::PlotkinInteger => "plotkin-integer",
            Formula::PlotkinReal => "plotkin-real",
            Formula::SpherePacking => "sphere-packing",
            Formula::Halving => "halving",
            Formula::GilbertGc => "gilbert-gc",
            Formula::GilbertGcRc => "gilbert-gcrc",
            Formula::ReverseEquivalence => "r-rc-equivalence",
            Formula::Doubling => "rc-doubling",
            Formula::Construction => "construction",
            Formula::Empty => "empty",
        }
    }

    /// Formulas that give the exact maximum on their own.
    pub fn is_exact(self) -> bool {
        matches!(
            self,
            Formula::BinaryExact
                | Formula::SingleWord
                | Formula::AllWords
                | Formula::ComplementPairs
                | Formula::FullDistance
                | Formula::FullDistanceRc
                | Formula::ParityProduct
                | Formula::OddWeightProduct
        )
    }
}

/// One derivation step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub formula: Formula,
    pub n: usize,
    pub d: usize,
    pub w: usize,
    pub kind: ConstraintKind,
    pub value: u64,
    /// Free-form detail, e.g. which construction.
    pub note: Option<String>,
}

impl Step {
    fn new(formula: Formula, n: usize, d: usize, w: usize, kind: ConstraintKind, value: u64) -> Self {
        Step { formula, n, d, w, kind, value, note: None }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{},{})", self.formula.name(), self.n, self.d, self.w)?;
        if let Some(note) = &self.note {
            write!(f, "[{note}]")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    pub value: u64,
    pub direction: Direction,
    /// Outermost step first.
    pub provenance: Vec<Step>,
}

impl Bound {
    fn single(direction: Direction, step: Step) -> Self {
        Bound { value: step.value, direction, provenance: vec![step] }
    }

    /// The provenance chain as `a(..) <- b(..) <- ...`.
    pub fn method(&self) -> String {
        let mut s = String::new();
        for (i, step) in self.provenance.iter().enumerate() {
            if i > 0 {
                s.push_str(" <- ");
            }
            s.push_str(&format!("{step}"));
        }
        s
    }

    /// The outermost formula.
    pub fn formula(&self) -> Formula {
        self.provenance[0].formula
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.value, self.method())
    }
}

fn clamp_u64(v: u128) -> u64 {
    u64::try_from(v).unwrap_or(u64::MAX)
}

/// Binary code sizes `A_2(n, d)` and `A_2(n, d, w)`.
///
/// Exact values come from closed-form rules (distance 1 and 2, the odd/even
/// distance equivalence, Plotkin-range values, `A_2(2d, d) = 4d`) and a short
/// list of classical values for distance 4 and 6, all for `n <= 16`. Anything
/// else falls back to the Singleton bound and is flagged as not exact.
#[derive(Clone, Copy, Debug, Default)]
pub struct BinaryBounds;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BinaryValue {
    pub value: u64,
    pub exact: bool,
    pub formula: Formula,
}

impl BinaryBounds {
    pub const EXACT_MAX_N: usize = 16;

    pub fn exact(&self, n: usize, d: usize) -> Option<u64> {
        if d <= 1 {
            return Some(clamp_u64(pow2(n as u32)));
        }
        if d > n {
            return Some(1);
        }
        if d % 2 == 1 {
            return self.exact(n + 1, d + 1);
        }
        if d == 2 {
            return Some(clamp_u64(pow2(n as u32 - 1)));
        }
        if n > Self::EXACT_MAX_N {
            return None;
        }
        if n < 2 * d {
            return Some(2 * (d / (2 * d - n)) as u64);
        }
        if n == 2 * d {
            return Some(4 * d as u64);
        }
        match (d, n) {
            (4, 9) => Some(20),
            (4, 10) => Some(40),
            (4, 11) => Some(72),
            (4, 12) => Some(144),
            (4, 13) => Some(256),
            (4, 14) => Some(512),
            (4, 15) => Some(1024),
            (4, 16) => Some(2048),
            (6, 13) => Some(32),
            (6, 14) => Some(64),
            (6, 15) => Some(128),
            (6, 16) => Some(256),
            _ => None,
        }
    }

    pub fn upper(&self, n: usize, d: usize) -> BinaryValue {
        match self.exact(n, d) {
            Some(value) => BinaryValue { value, exact: true, formula: Formula::BinaryExact },
            None => BinaryValue {
                value: clamp_u64(pow2((n + 1 - d) as u32)),
                exact: false,
                formula: Formula::BinarySingleton,
            },
        }
    }

    pub fn lower(&self, n: usize, d: usize) -> u64 {
        self.exact(n, d).unwrap_or(if d > n { 1 } else { 2 })
    }

    /// Exact `A_2(n, d, w)` where a closed form is known.
    pub fn constant_weight(&self, n: usize, d: usize, w: usize) -> Option<u64> {
        if w > n {
            return Some(0);
        }
        if d <= 2 {
            return Some(clamp_u64(binom(n as i64, w as i64)));
        }
        let m = w.min(n - w);
        if m == 0 || d > 2 * m {
            return Some(1);
        }
        if d % 2 == 1 {
            return self.constant_weight(n, d + 1, w);
        }
        if d == 2 * m {
            return Some((n / m) as u64);
        }
        None
    }
}

/// Closed-form exact values for `d <= 1`, `d = n` and GC-content 0 or `n`.
pub fn special_exact(n: usize, d: usize, w: usize, kind: ConstraintKind) -> Option<u64> {
    special_exact_formula(n, d, w, kind, &BinaryBounds).map(|(v, _)| v)
}

fn special_exact_formula(
    n: usize,
    d: usize,
    w: usize,
    kind: ConstraintKind,
    binary: &BinaryBounds,
) -> Option<(u64, Formula)> {
    if n == 0 || w > n || d > n {
        return None;
    }
    match kind {
        ConstraintKind::Gc => {
            if d <= 1 {
                return Some((clamp_u64(gc_slice_size(n, w)), Formula::AllWords));
            }
            if w == 0 || w == n {
                if let Some(v) = binary.exact(n, d) {
                    return Some((v, Formula::BinaryExact));
                }
            }
            if d == n {
                let v = if 2 * w == n {
                    4
                } else if (3 * w >= n && 2 * w < n) || (2 * w > n && 3 * w <= 2 * n) {
                    3
                } else {
                    2
                };
                return Some((v, Formula::FullDistance));
            }
            None
        }
        ConstraintKind::GcRc => {
            if d == 1 {
                let all = gc_slice_size(n, w);
                let v = if n % 2 == 0 && w % 2 == 0 {
                    let palindromes = binom((n / 2) as i64, (w / 2) as i64) * pow2((n / 2) as u32);
                    (all - palindromes) / 2
                } else {
                    all / 2
                };
                return Some((clamp_u64(v), Formula::ComplementPairs));
            }
            if d == n {
                return Some((if 2 * w == n { 2 } else { 1 }, Formula::FullDistanceRc));
            }
            None
        }
        ConstraintKind::GcR => {
            if n % 2 == 0 {
                special_exact_formula(n, d, w, ConstraintKind::GcRc, binary)
            } else {
                None
            }
        }
    }
}

/// Exact values at distance 2.
pub fn exact_d2(n: usize, w: usize, kind: ConstraintKind) -> Option<u64> {
    if n == 0 || w > n {
        return None;
    }
    let words = binom(n as i64, w as i64);
    match kind {
        ConstraintKind::Gc => Some(clamp_u64(words * pow2(n as u32 - 1))),
        ConstraintKind::GcRc | ConstraintKind::GcR if n % 2 == 0 => {
            Some(clamp_u64(words * pow2(n as u32 - 2)))
        }
        _ => None,
    }
}

fn exact_d2_formula(kind: ConstraintKind) -> Formula {
    match kind {
        ConstraintKind::Gc => Formula::ParityProduct,
        _ => Formula::OddWeightProduct,
    }
}

fn pair_squares(a: u128) -> u128 {
    let lo = a / 2;
    let hi = a - lo;
    lo * lo + hi * hi
}

/// Whether the integer Plotkin-type inequality holds for a code of size `m`.
pub(crate) fn plotkin_inequality_holds(n: usize, d: usize, w: usize, m: u128) -> bool {
    let (n, d, w) = (n as u128, d as u128, w as u128);
    let wm = w * m;
    let k = wm / n;
    let r = wm % n;
    let lhs = m * (m.saturating_sub(1)) * d;
    let mm = m * m;
    let mut rhs = (n - r) * (mm - pair_squares(k) - pair_squares(m - k));
    if r > 0 {
        rhs += r * (mm - pair_squares(k + 1) - pair_squares(m - k - 1));
    }
    lhs <= rhs
}

/// Scan limit for the integer Plotkin search when no closed-form tail exists.
const PLOTKIN_SCAN_LIMIT: u128 = 1 << 16;

/// `n^2 + 2w(n-w)`, the quantity `w^2 + 4w(n-w) + (n-w)^2` of the real bound.
fn plotkin_q(n: usize, w: usize) -> u128 {
    let (n, w) = (n as u128, w as u128);
    n * n + 2 * w * (n - w)
}

/// Largest `M` such that the integer inequality holds for every `M' <= M`,
/// provided it fails for every larger size up to `C(n,w) 2^n`. Abstains
/// otherwise.
///
/// When `2dn > n^2 + 2w(n-w)` the inequality provably fails for every `M`
/// above the real-valued bound, so only the stretch up to that bound is
/// scanned. Otherwise the search is limited to `2^16` sizes.
pub fn plotkin_upper_integer(n: usize, d: usize, w: usize) -> Option<Bound> {
    if n == 0 || w > n || d == 0 {
        return None;
    }
    let cap = gc_slice_size(n, w);
    let q = plotkin_q(n, w);
    let two_dn = 2 * (d as u128) * (n as u128);
    let tail_start = if two_dn > q {
        // fails for every M > 2dn / (2dn - q)
        (two_dn / (two_dn - q)).min(cap)
    } else {
        if cap > PLOTKIN_SCAN_LIMIT {
            return None;
        }
        cap
    };
    let mut first_fail = None;
    let mut m = 1u128;
    while m <= tail_start {
        if !plotkin_inequality_holds(n, d, w, m) {
            first_fail = Some(m);
            break;
        }
        m += 1;
    }
    let first_fail = match first_fail {
        Some(f) => f,
        None if two_dn > q && tail_start < cap => tail_start + 1,
        None => return None,
    };
    if (first_fail..=tail_start).any(|m| plotkin_inequality_holds(n, d, w, m)) {
        return None;
    }
    let value = clamp_u64(first_fail - 1);
    Some(Bound::single(
        Direction::Upper,
        Step::new(Formula::PlotkinInteger, n, d, w, ConstraintKind::Gc, value),
    ))
}

/// `floor(2dn / (2dn - (w^2 + 4w(n-w) + (n-w)^2)))` when the denominator is
/// positive.
pub fn plotkin_upper_real(n: usize, d: usize, w: usize) -> Option<Bound> {
    if n == 0 || w > n {
        return None;
    }
    let q = plotkin_q(n, w);
    let two_dn = 2 * (d as u128) * (n as u128);
    if two_dn <= q {
        return None;
    }
    let value = clamp_u64(two_dn / (two_dn - q));
    Some(Bound::single(
        Direction::Upper,
        Step::new(Formula::PlotkinReal, n, d, w, ConstraintKind::Gc, value),
    ))
}

/// Halves an upper bound on the pairwise-only problem to bound the reverse
/// (or reverse-complement) problem.
pub fn halving(upper_gc: &Bound, d: usize) -> Result<Bound> {
    if d == 0 {
        return Err(Error::ZeroDistance);
    }
    let top = &upper_gc.provenance[0];
    let value = upper_gc.value / 2;
    let mut provenance =
        vec![Step::new(Formula::Halving, top.n, top.d, top.w, ConstraintKind::GcRc, value)];
    provenance.extend(upper_gc.provenance.iter().cloned());
    Ok(Bound { value, direction: Direction::Upper, provenance })
}

/// Number of words of GC-content `w` within distance `r` of a fixed word of
/// GC-content `w`.
pub fn ball_volume(n: usize, w: usize, r: usize) -> u128 {
    let (n_, w_) = (n as i64, w as i64);
    let mut total = 0u128;
    for rr in 0..=(r.min(n) as i64) {
        let top = (rr / 2).min(w_).min(n_ - w_);
        for i in 0..=top {
            total += binom(w_, i)
                * binom(n_ - w_, i)
                * binom(n_ - 2 * i, rr - 2 * i)
                * pow2(2 * i as u32);
        }
    }
    total
}

/// Gilbert-type lower bound, pairwise constraint only.
pub fn gilbert_lower_gc(n: usize, d: usize, w: usize) -> Bound {
    let value = if d == 0 {
        gc_slice_size(n, w)
    } else {
        ceil_div(gc_slice_size(n, w), ball_volume(n, w, d - 1))
    };
    Bound::single(
        Direction::Lower,
        Step::new(Formula::GilbertGc, n, d, w, ConstraintKind::Gc, clamp_u64(value)),
    )
}

/// Sphere-packing upper bound.
pub fn sphere_packing_upper(n: usize, d: usize, w: usize) -> Bound {
    let radius = d.saturating_sub(1) / 2;
    let value = gc_slice_size(n, w) / ball_volume(n, w, radius);
    Bound::single(
        Direction::Upper,
        Step::new(Formula::SpherePacking, n, d, w, ConstraintKind::Gc, clamp_u64(value)),
    )
}

fn v_even(m: i64, w: i64, e: i64) -> u128 {
    if w < 0 || e < 0 || w > 2 * m || e > m {
        return 0;
    }
    let lo = 0.max(w - m).max((w - e + 1).div_euclid(2));
    let hi = w / 2;
    let mut total = 0u128;
    for i in lo..=hi {
        let term = binom(m, i) * binom(m - i, w - 2 * i) * binom(m - w + 2 * i, e - w + 2 * i);
        if term != 0 {
            total += term * pow2((m + 2 * w - 4 * i) as u32);
        }
    }
    total
}

/// Number of words of GC-content `w` at distance exactly `d` from their own
/// reverse complement.
///
/// For odd `n` the middle position always differs from its complement and
/// can take either letter of its class, hence the factor 2 on both terms.
pub fn v_count(n: usize, w: usize, d: usize) -> u128 {
    if w > n || d > n || (n - d) % 2 == 1 {
        return 0;
    }
    let m = (n / 2) as i64;
    let e = (d / 2) as i64;
    let w = w as i64;
    if n % 2 == 0 {
        v_even(m, w, e)
    } else {
        2 * (v_even(m, w, e) + v_even(m, w - 1, e))
    }
}

/// Gilbert-type lower bound with the reverse-complement constraint.
pub fn gilbert_lower_gcrc(n: usize, d: usize, w: usize) -> Result<Bound> {
    if d == 0 {
        return Err(Error::ZeroDistance);
    }
    let numerator: u128 = (d..=n).map(|r| v_count(n, w, r)).sum();
    let value = ceil_div(numerator, 2 * ball_volume(n, w, d - 1));
    Ok(Bound::single(
        Direction::Lower,
        Step::new(Formula::GilbertGcRc, n, d, w, ConstraintKind::GcRc, clamp_u64(value)),
    ))
}

#[derive(Clone, Copy, Debug)]
struct Node {
    value: u64,
    formula: Formula,
    child: Option<(u8, u8, u8)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Registered {
    size: u64,
    label: String,
}

/// Memoized bounds for all lengths up to `max_n`.
///
/// Building fills the pairwise-only upper bound for every `(n, d, w)`: at each
/// node both shortening recursions are explored together with the exact
/// special cases, the integer and real Plotkin-type bounds and sphere packing,
/// and the minimum is kept. Reverse and reverse-complement uppers are derived
/// from it on demand. Constructions registered later only feed lower bounds.
#[derive(Clone, Debug)]
pub struct BoundTable {
    max_n: usize,
    binary: BinaryBounds,
    gc: Vec<Option<Node>>,
    registered: BTreeMap<(usize, usize, usize, ConstraintKind), Registered>,
}

impl BoundTable {
    pub fn build(max_n: usize) -> Result<Self> {
        if max_n == 0 || max_n > MAX_LEN {
            return Err(Error::InvalidLength { len: max_n, max: MAX_LEN });
        }
        let side = max_n + 1;
        let mut table = BoundTable {
            max_n,
            binary: BinaryBounds,
            gc: vec![None; side * side * side],
            registered: BTreeMap::new(),
        };
        for n in 1..=max_n {
            for d in 0..=n {
                for w in 0..=n {
                    let node = table.compute_gc(n, d, w);
                    let i = table.idx(n, d, w);
                    table.gc[i] = Some(node);
                }
            }
        }
        Ok(table)
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn binary(&self) -> &BinaryBounds {
        &self.binary
    }

    fn idx(&self, n: usize, d: usize, w: usize) -> usize {
        let side = self.max_n + 1;
        (n * side + d) * side + w
    }

    fn gc_value(&self, n: usize, d: usize, w: usize) -> u64 {
        if d > n {
            return 1;
        }
        self.gc[self.idx(n, d, w)].expect("child node computed before parent").value
    }

    fn compute_gc(&self, n: usize, d: usize, w: usize) -> Node {
        let mut best: Option<Node> = None;
        let mut offer = |value: u64, formula: Formula, child: Option<(usize, usize, usize)>| {
            if best.is_none_or(|b| value < b.value) {
                best = Some(Node {
                    value,
                    formula,
                    child: child.map(|(a, b, c)| (a as u8, b as u8, c as u8)),
                });
            }
        };
        if let Some((v, f)) = special_exact_formula(n, d, w, ConstraintKind::Gc, &self.binary) {
            offer(v, f, None);
        }
        if d == 2 {
            if let Some(v) = exact_d2(n, w, ConstraintKind::Gc) {
                offer(v, Formula::ParityProduct, None);
            }
        }
        if w == 0 || w == n {
            let b = self.binary.upper(n, d);
            offer(b.value, b.formula, None);
        }
        if 0 < w && w < n {
            let two_n = 2 * n as u128;
            let g = two_n * self.gc_value(n - 1, d, w - 1) as u128 / w as u128;
            offer(clamp_u64(g), Formula::ShortenGc, Some((n - 1, d, w - 1)));
            let h = two_n * self.gc_value(n - 1, d, w) as u128 / (n - w) as u128;
            offer(clamp_u64(h), Formula::ShortenAt, Some((n - 1, d, w)));
        }
        if let Some(b) = plotkin_upper_integer(n, d, w) {
            offer(b.value, Formula::PlotkinInteger, None);
        }
        if let Some(b) = plotkin_upper_real(n, d, w) {
            offer(b.value, Formula::PlotkinReal, None);
        }
        offer(sphere_packing_upper(n, d, w).value, Formula::SpherePacking, None);
        best.expect("sphere packing always applies")
    }

    fn gc_chain(&self, n: usize, d: usize, w: usize, out: &mut Vec<Step>) {
        if d > n {
            out.push(Step::new(Formula::SingleWord, n, d, w, ConstraintKind::Gc, 1));
            return;
        }
        let node = self.gc[self.idx(n, d, w)].expect("table built");
        out.push(Step::new(node.formula, n, d, w, ConstraintKind::Gc, node.value));
        if let Some((a, b, c)) = node.child {
            self.gc_chain(a as usize, b as usize, c as usize, out);
        }
    }

    fn check(&self, n: usize, d: usize, w: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidLength { len: 0, max: MAX_LEN });
        }
        if n > self.max_n {
            return Err(Error::OutOfTable { n, max_n: self.max_n });
        }
        if w > n {
            return Err(Error::InvalidParams(format!("GC-content {w} exceeds length {n}")));
        }
        if d > n {
            return Err(Error::InvalidParams(format!("distance {d} exceeds length {n}")));
        }
        Ok(())
    }

    /// Best upper bound from the shortening recursions and everything folded
    /// into them; halved (and capped by the exact special cases) for the
    /// reverse and reverse-complement constraints.
    pub fn johnson_upper(&self, n: usize, d: usize, w: usize, kind: ConstraintKind) -> Result<Bound> {
        self.check(n, d, w)?;
        match kind {
            ConstraintKind::Gc => {
                let mut provenance = Vec::new();
                self.gc_chain(n, d, w, &mut provenance);
                Ok(Bound { value: provenance[0].value, direction: Direction::Upper, provenance })
            }
            ConstraintKind::GcRc => {
                let gc = self.johnson_upper(n, d, w, ConstraintKind::Gc)?;
                let mut best = halving(&gc, d)?;
                let mut consider = |value: u64, formula: Formula| {
                    if value < best.value {
                        best = Bound::single(
                            Direction::Upper,
                            Step::new(formula, n, d, w, ConstraintKind::GcRc, value),
                        );
                    }
                };
                if let Some((v, f)) =
                    special_exact_formula(n, d, w, ConstraintKind::GcRc, &self.binary)
                {
                    consider(v, f);
                }
                if d == 2 {
                    if let Some(v) = exact_d2(n, w, ConstraintKind::GcRc) {
                        consider(v, Formula::OddWeightProduct);
                    }
                }
                Ok(best)
            }
            ConstraintKind::GcR => {
                if n % 2 == 0 {
                    let rc = self.johnson_upper(n, d, w, ConstraintKind::GcRc)?;
                    let mut provenance = vec![Step::new(
                        Formula::ReverseEquivalence,
                        n,
                        d,
                        w,
                        ConstraintKind::GcR,
                        rc.value,
                    )];
                    provenance.extend(rc.provenance);
                    Ok(Bound { value: rc.value, direction: Direction::Upper, provenance })
                } else {
                    let gc = self.johnson_upper(n, d, w, ConstraintKind::Gc)?;
                    let mut b = halving(&gc, d)?;
                    b.provenance[0].kind = ConstraintKind::GcR;
                    Ok(b)
                }
            }
        }
    }

    /// Records a verified construction of the given size. Only the largest
    /// size per `(n, d, w, kind)` is kept; re-registering is a no-op.
    ///
    /// Callers are expected to verify first; see
    /// [`lexicode::register_result`](crate::lexicode::register_result).
    pub fn register(
        &mut self,
        n: usize,
        d: usize,
        w: usize,
        kind: ConstraintKind,
        size: u64,
        label: impl Into<String>,
    ) -> Result<()> {
        self.check(n, d, w)?;
        let label = label.into();
        let entry = self.registered.entry((n, d, w, kind)).or_insert(Registered { size, label: label.clone() });
        if size > entry.size {
            *entry = Registered { size, label };
        }
        Ok(())
    }

    /// Size and label of the best registered construction for exactly these
    /// parameters.
    pub fn registered(&self, n: usize, d: usize, w: usize, kind: ConstraintKind) -> Option<(u64, &str)> {
        self.registered.get(&(n, d, w, kind)).map(|r| (r.size, r.label.as_str()))
    }

    // Largest registered code of this kind valid at distance d (a code with a
    // larger minimum distance qualifies too).
    fn best_registered(&self, n: usize, d: usize, w: usize, kind: ConstraintKind) -> Option<Bound> {
        let mut best: Option<Bound> = None;
        for dd in d..=n {
            if let Some(r) = self.registered.get(&(n, dd, w, kind)) {
                if best.as_ref().is_none_or(|b| r.size > b.value) {
                    let mut step = Step::new(Formula::Construction, n, dd, w, kind, r.size);
                    step.note = Some(r.label.clone());
                    best = Some(Bound::single(Direction::Lower, step));
                }
            }
        }
        best
    }

    fn lower_candidates(&self, n: usize, d: usize, w: usize, kind: ConstraintKind) -> Result<Vec<Bound>> {
        let mut out = Vec::new();
        let exact_step = |v: u64, f: Formula| {
            Bound::single(Direction::Lower, Step::new(f, n, d, w, kind, v))
        };
        if let Some((v, f)) = special_exact_formula(n, d, w, kind, &self.binary) {
            out.push(exact_step(v, f));
        }
        if d == 2 {
            if let Some(v) = exact_d2(n, w, kind) {
                out.push(exact_step(v, exact_d2_formula(kind)));
            }
        }
        if let Some(b) = self.best_registered(n, d, w, kind) {
            out.push(b);
        }
        match kind {
            ConstraintKind::Gc => {
                out.push(gilbert_lower_gc(n, d, w));
                if d > 0 {
                    for other in [ConstraintKind::GcRc, ConstraintKind::GcR] {
                        if let Some(b) = self.best_registered(n, d, w, other) {
                            let value = b.value.saturating_mul(2);
                            let mut provenance =
                                vec![Step::new(Formula::Doubling, n, d, w, ConstraintKind::Gc, value)];
                            provenance.extend(b.provenance);
                            out.push(Bound { value, direction: Direction::Lower, provenance });
                        }
                    }
                }
            }
            ConstraintKind::GcRc | ConstraintKind::GcR => {
                let other = if kind == ConstraintKind::GcRc {
                    ConstraintKind::GcR
                } else {
                    ConstraintKind::GcRc
                };
                if d > 0 && (kind == ConstraintKind::GcRc || n % 2 == 0) {
                    let mut g = gilbert_lower_gcrc(n, d, w)?;
                    if kind == ConstraintKind::GcR {
                        g.provenance.insert(
                            0,
                            Step::new(Formula::ReverseEquivalence, n, d, w, kind, g.value),
                        );
                    }
                    out.push(g);
                }
                if n % 2 == 0 {
                    if let Some(b) = self.best_registered(n, d, w, other) {
                        let mut provenance =
                            vec![Step::new(Formula::ReverseEquivalence, n, d, w, kind, b.value)];
                        provenance.extend(b.provenance);
                        out.push(Bound { value: b.value, direction: Direction::Lower, provenance });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Best lower and upper bound for the parameters.
    pub fn best_bounds(&self, n: usize, d: usize, w: usize, kind: ConstraintKind) -> Result<(Bound, Bound)> {
        self.check(n, d, w)?;
        if d == 0 && kind != ConstraintKind::Gc {
            return Err(Error::ZeroDistance);
        }
        let upper = self.johnson_upper(n, d, w, kind)?;
        let lower = self
            .lower_candidates(n, d, w, kind)?
            .into_iter()
            .fold(None::<Bound>, |best, b| match best {
                Some(cur) if cur.value >= b.value => Some(cur),
                _ => Some(b),
            })
            .unwrap_or_else(|| {
                Bound::single(Direction::Lower, Step::new(Formula::Empty, n, d, w, kind, 0))
            });
        if lower.value > upper.value {
            return Err(Error::Inconsistent {
                lower: lower.value,
                upper: upper.value,
                detail: format!("{} vs {}", lower.method(), upper.method()),
            });
        }
        Ok((lower, upper))
    }
}

/// One-off upper bound; builds a table for lengths up to `n`.
pub fn johnson_upper(n: usize, d: usize, w: usize, kind: ConstraintKind) -> Result<Bound> {
    BoundTable::build(n.max(1))?.johnson_upper(n, d, w, kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{packed_distance, packed_gc, packed_reverse_complement};

    fn table(n: usize) -> BoundTable {
        BoundTable::build(n).unwrap()
    }

    #[test]
    fn special_exact_examples() {
        assert_eq!(special_exact(4, 4, 2, ConstraintKind::Gc), Some(4));
        assert_eq!(special_exact(5, 5, 2, ConstraintKind::GcRc), Some(1));
        assert_eq!(special_exact(3, 1, 1, ConstraintKind::Gc), Some(24));
        assert_eq!(special_exact(4, 1, 2, ConstraintKind::GcRc), Some(44));
        assert_eq!(special_exact(6, 3, 3, ConstraintKind::Gc), None);
        // symmetry w <-> n - w at GC-content n
        assert_eq!(special_exact(5, 3, 5, ConstraintKind::Gc), special_exact(5, 3, 0, ConstraintKind::Gc));
        assert_eq!(special_exact(5, 3, 0, ConstraintKind::Gc), Some(4));
    }

    #[test]
    fn rc_palindromes_counted_by_brute_force() {
        // Gilbert numerator: 96 GC-2 words of length 4, 8 of them equal their RC
        let pal = (0..256u64)
            .filter(|&x| packed_gc(x) == 2 && packed_reverse_complement(x, 4) == x)
            .count();
        assert_eq!(pal, 8);
        assert_eq!((96 - pal) / 2, 44);
    }

    #[test]
    fn exact_d2_examples() {
        assert_eq!(exact_d2(12, 6, ConstraintKind::Gc), Some(1_892_352));
        assert_eq!(exact_d2(12, 6, ConstraintKind::GcRc), Some(946_176));
        assert_eq!(exact_d2(5, 2, ConstraintKind::GcRc), None);
    }

    #[test]
    fn johnson_examples() {
        let t = table(8);
        let b = t.johnson_upper(4, 2, 2, ConstraintKind::Gc).unwrap();
        assert_eq!(b.value, 48);
        assert_eq!(t.johnson_upper(8, 8, 4, ConstraintKind::Gc).unwrap().value, 4);
        assert_eq!(t.johnson_upper(6, 6, 3, ConstraintKind::GcRc).unwrap().value, 2);
        assert!(t.johnson_upper(4, 5, 2, ConstraintKind::Gc).is_err());
        assert!(t.johnson_upper(9, 2, 2, ConstraintKind::Gc).is_err());
    }

    // The shortening chain alone, (h) then (g) twice down to A_2(1,2) = 1,
    // lands on 48 for (4,2,2).
    #[test]
    fn shortening_chain_by_hand() {
        let a2_1_2 = 1u64;
        let n2 = 2 * 2 * a2_1_2; // (g): n=2, w=1 -> floor(4/1 * 1)
        let n3 = 2 * 3 * n2 / 2; // (g): n=3, w=2 -> floor(6/2 * 4)
        let n4 = 2 * 4 * n3 / 2; // (h): n=4, w=2 -> floor(8/2 * 12)
        assert_eq!((n2, n3, n4), (4, 12, 48));
        assert_eq!(exact_d2(4, 2, ConstraintKind::Gc), Some(48));
    }

    #[test]
    fn plotkin_integer_examples() {
        // M = 5 fails, M <= 4 holds
        assert!((1..=4).all(|m| plotkin_inequality_holds(4, 4, 2, m)));
        assert!(!plotkin_inequality_holds(4, 4, 2, 5));
        assert_eq!(plotkin_upper_integer(4, 4, 2).unwrap().value, 4);
        let b = plotkin_upper_integer(6, 6, 3).unwrap().value;
        assert!(b >= 4);
        assert!(plotkin_upper_integer(5, 0, 2).is_none());
        assert!(plotkin_upper_integer(8, 0, 4).is_none());
    }

    #[test]
    fn plotkin_real_examples() {
        // 2dn = 32, w^2 + 4w(n-w) + (n-w)^2 = 4 + 16 + 4 = 24
        assert_eq!(plotkin_upper_real(4, 4, 2).unwrap().value, 4);
        assert_eq!(plotkin_upper_real(6, 6, 3).unwrap().value, 4);
        assert!(plotkin_upper_real(4, 2, 2).is_none());
    }

    #[test]
    fn plotkin_real_dominates_integer() {
        for n in 1..=10 {
            for d in 1..=n {
                for w in 0..=n {
                    if let (Some(r), Some(i)) = (plotkin_upper_real(n, d, w), plotkin_upper_integer(n, d, w)) {
                        assert!(r.value >= i.value, "n={n} d={d} w={w}");
                    }
                }
            }
        }
    }

    #[test]
    fn halving_examples() {
        let mk = |v| Bound::single(Direction::Upper, Step::new(Formula::SpherePacking, 4, 2, 2, ConstraintKind::Gc, v));
        assert_eq!(halving(&mk(48), 2).unwrap().value, 24);
        assert_eq!(halving(&mk(5), 2).unwrap().value, 2);
        assert_eq!(halving(&mk(0), 2).unwrap().value, 0);
        assert_eq!(halving(&mk(48), 0), Err(Error::ZeroDistance));
        assert_eq!(halving(&mk(48), 2).unwrap().provenance.len(), 2);
    }

    #[test]
    fn ball_volume_examples() {
        assert_eq!(ball_volume(4, 2, 1), 5);
        assert_eq!(ball_volume(7, 3, 0), 1);
        for n in 1..=10 {
            for w in 0..=n {
                assert_eq!(ball_volume(n, w, n), gc_slice_size(n, w));
            }
        }
    }

    // Counts words of GC-content w within distance r of `center` by
    // enumeration over all 4^n words.
    fn ball_brute(n: usize, w: usize, r: usize, center: u64) -> u128 {
        (0..(1u64 << (2 * n)))
            .filter(|&y| packed_gc(y) as usize == w && packed_distance(center, y) as usize <= r)
            .count() as u128
    }

    #[test]
    fn ball_volume_matches_enumeration() {
        for n in 1..=6 {
            for w in 0..=n {
                let centers: Vec<u64> = (0..(1u64 << (2 * n)))
                    .filter(|&y| packed_gc(y) as usize == w)
                    .step_by(7)
                    .take(3)
                    .collect();
                for r in 0..=n {
                    for &c in &centers {
                        assert_eq!(ball_volume(n, w, r), ball_brute(n, w, r, c), "n={n} w={w} r={r}");
                    }
                }
            }
        }
    }

    #[test]
    fn gilbert_gc_examples() {
        assert_eq!(gilbert_lower_gc(4, 2, 2).value, 20);
        for n in 1..=8 {
            for w in 0..=n {
                assert_eq!(gilbert_lower_gc(n, 1, w).value as u128, gc_slice_size(n, w));
            }
        }
        let g = gilbert_lower_gc(6, 2, 3).value;
        assert!((1..=640).contains(&g));
    }

    #[test]
    fn sphere_packing_examples() {
        assert_eq!(sphere_packing_upper(4, 2, 2).value, 96);
        assert_eq!(sphere_packing_upper(4, 3, 2).value, 19);
        for n in 1..=10 {
            for d in 1..=n {
                for w in 0..=n {
                    assert!(sphere_packing_upper(n, d, w).value >= gilbert_lower_gc(n, d, w).value);
                }
            }
        }
    }

    fn v_brute(n: usize, w: usize, d: usize) -> u128 {
        (0..(1u64 << (2 * n)))
            .filter(|&x| {
                packed_gc(x) as usize == w
                    && packed_distance(x, packed_reverse_complement(x, n)) as usize == d
            })
            .count() as u128
    }

    #[test]
    fn v_count_examples() {
        assert_eq!(v_count(2, 1, 2), 8);
        assert_eq!(v_brute(2, 1, 2), 8);
        assert_eq!(v_count(2, 1, 1), 0);
        // middle letter in {C,G} (2 ways) around an A/T pair equal to its RC (2 ways)
        assert_eq!(v_count(3, 1, 1), 4);
        assert_eq!(v_brute(3, 1, 1), 4);
        assert_eq!(v_count(5, 2, 3), 96);
        assert_eq!(v_count(4, 2, 0), 8);
        assert_eq!(v_brute(4, 2, 0), 8);
    }

    #[test]
    fn v_count_matches_enumeration_small() {
        for n in 1..=6 {
            for w in 0..=n {
                for d in 0..=n {
                    assert_eq!(v_count(n, w, d), v_brute(n, w, d), "n={n} w={w} d={d}");
                }
            }
        }
    }

    #[test]
    fn gilbert_gcrc_examples() {
        assert_eq!(gilbert_lower_gcrc(4, 2, 2).unwrap().value, 9);
        assert_eq!(gilbert_lower_gcrc(2, 1, 1).unwrap().value, 4);
        assert_eq!(gilbert_lower_gcrc(4, 0, 2), Err(Error::ZeroDistance));
    }

    #[test]
    fn binary_rules() {
        let b = BinaryBounds;
        assert_eq!(b.exact(5, 1), Some(32));
        assert_eq!(b.exact(5, 2), Some(16));
        assert_eq!(b.exact(7, 3), Some(16));
        assert_eq!(b.exact(8, 4), Some(16));
        assert_eq!(b.exact(9, 4), Some(20));
        assert_eq!(b.exact(12, 6), Some(24));
        assert_eq!(b.exact(4, 4), Some(2));
        assert_eq!(b.exact(3, 4), Some(1));
        assert_eq!(b.exact(20, 6), None);
        let u = b.upper(20, 6);
        assert!(!u.exact);
        assert_eq!(u.value, 1 << 15);
        assert_eq!(b.lower(20, 6), 2);
        assert_eq!(b.constant_weight(4, 2, 2), Some(6));
        assert_eq!(b.constant_weight(12, 6, 3), Some(4));
        assert_eq!(b.constant_weight(12, 6, 6), None);
    }

    #[test]
    fn best_bounds_examples() {
        let t = table(12);
        let (lo, up) = t.best_bounds(4, 2, 2, ConstraintKind::GcRc).unwrap();
        assert_eq!((lo.value, up.value), (24, 24));
        let (lo, up) = t.best_bounds(12, 12, 6, ConstraintKind::GcRc).unwrap();
        assert_eq!((lo.value, up.value), (2, 2));
    }

    #[test]
    fn registration_feeds_lower_bounds() {
        let mut t = table(10);
        let (lo, _) = t.best_bounds(10, 5, 5, ConstraintKind::Gc).unwrap();
        assert!(lo.value < 360);
        t.register(10, 5, 5, ConstraintKind::Gc, 360, "test").unwrap();
        t.register(10, 5, 5, ConstraintKind::Gc, 360, "test").unwrap();
        t.register(10, 5, 5, ConstraintKind::Gc, 100, "smaller").unwrap();
        let (lo, up) = t.best_bounds(10, 5, 5, ConstraintKind::Gc).unwrap();
        assert_eq!(lo.value, 360);
        assert_eq!(lo.formula(), Formula::Construction);
        assert!(up.value >= 360);
        // a code at distance 6 also counts at distance 5
        t.register(10, 6, 5, ConstraintKind::Gc, 400, "d6").unwrap();
        assert_eq!(t.best_bounds(10, 5, 5, ConstraintKind::Gc).unwrap().0.value, 400);
    }

    #[test]
    fn doubling_lifts_rc_constructions() {
        let mut t = table(6);
        t.register(6, 3, 3, ConstraintKind::GcRc, 39, "rc").unwrap();
        let (lo, _) = t.best_bounds(6, 3, 3, ConstraintKind::Gc).unwrap();
        assert!(lo.value >= 78);
    }

    #[test]
    fn symmetric_in_gc_content() {
        let t = table(10);
        for n in 1..=10 {
            for d in 0..=n {
                for w in 0..=n {
                    assert_eq!(
                        t.johnson_upper(n, d, w, ConstraintKind::Gc).unwrap().value,
                        t.johnson_upper(n, d, n - w, ConstraintKind::Gc).unwrap().value,
                        "n={n} d={d} w={w}"
                    );
                }
            }
        }
    }

    #[test]
    fn provenance_names_every_step() {
        let t = table(10);
        let up = t.johnson_upper(10, 8, 5, ConstraintKind::GcRc).unwrap();
        assert_eq!(up.formula(), Formula::Halving);
        assert!(up.provenance.len() >= 2);
        assert!(!up.method().is_empty());
    }
}
