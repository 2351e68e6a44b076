//! Binary and ternary component codes and the product constructions that
//! combine them into DNA codes.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bounds::ConstraintKind;
use crate::error::{Error, Result};
use crate::lexicode::{Code, CodeParams, Origin};
use crate::verify::verify;
use crate::words::{odot, oslash, BinaryWord, DnaWord, TernaryWord, MAX_LEN};

/// Words of a component code.
pub trait ComponentWord: Clone {
    const ALPHABET: usize;
    fn len(&self) -> usize;
    fn weight(&self) -> usize;
    fn distance(&self, other: &Self) -> usize;
    fn reversed(&self) -> Self;
}

impl ComponentWord for BinaryWord {
    const ALPHABET: usize = 2;
    fn len(&self) -> usize {
        BinaryWord::len(self)
    }
    fn weight(&self) -> usize {
        BinaryWord::weight(self)
    }
    fn distance(&self, other: &Self) -> usize {
        (self.bits() ^ other.bits()).count_ones() as usize
    }
    fn reversed(&self) -> Self {
        self.reverse()
    }
}

impl ComponentWord for TernaryWord {
    const ALPHABET: usize = 3;
    fn len(&self) -> usize {
        TernaryWord::len(self)
    }
    fn weight(&self) -> usize {
        TernaryWord::weight(self)
    }
    fn distance(&self, other: &Self) -> usize {
        self.digits().iter().zip(other.digits()).filter(|(a, b)| a != b).count()
    }
    fn reversed(&self) -> Self {
        self.reverse()
    }
}

/// A binary or ternary code used as a factor of a product construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentCode<W> {
    pub n: usize,
    pub d: usize,
    /// Constant weight, if the code has one.
    pub w: Option<usize>,
    pub words: Vec<W>,
    /// `H(x, y^R) >= d` for all ordered pairs, `x = y` included.
    pub r_constrained: bool,
    pub label: String,
}

pub type BinaryCode = ComponentCode<BinaryWord>;
pub type TernaryCode = ComponentCode<TernaryWord>;

impl<W: ComponentWord> ComponentCode<W> {
    pub fn alphabet(&self) -> usize {
        W::ALPHABET
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Checks every stated property by brute force.
    pub fn check(&self) -> bool {
        let ws = &self.words;
        ws.iter().all(|x| x.len() == self.n && self.w.is_none_or(|w| x.weight() == w))
            && ws.iter().enumerate().all(|(i, x)| {
                ws[i + 1..].iter().all(|y| x.distance(y) >= self.d)
                    && (!self.r_constrained || ws.iter().all(|y| x.distance(&y.reversed()) >= self.d))
            })
    }
}

fn greedy<W: ComponentWord>(candidates: impl Iterator<Item = W>, d: usize, r_constrained: bool) -> Vec<W> {
    let mut out: Vec<W> = Vec::new();
    let mut images: Vec<W> = Vec::new();
    for x in candidates {
        if r_constrained && x.distance(&x.reversed()) < d {
            continue;
        }
        if out.iter().chain(images.iter()).all(|y| x.distance(y) >= d) {
            if r_constrained {
                images.push(x.reversed());
            }
            out.push(x);
        }
    }
    out
}

fn binary_words(n: usize) -> Result<impl Iterator<Item = BinaryWord>> {
    if n > MAX_LEN {
        return Err(Error::InvalidLength { len: n, max: MAX_LEN });
    }
    Ok((0..(1u64 << n)).map(move |b| BinaryWord::new(b, n).expect("in range")))
}

fn ternary_words(n: usize) -> Result<impl Iterator<Item = TernaryWord>> {
    if n > 20 {
        return Err(Error::InvalidLength { len: n, max: 20 });
    }
    Ok((0..3u64.pow(n as u32)).map(move |mut r| {
        let mut digits = alloc::vec![0u8; n];
        for slot in digits.iter_mut().rev() {
            *slot = (r % 3) as u8;
            r /= 3;
        }
        TernaryWord::new(digits).expect("digits below 3")
    }))
}

// A distance above the length is allowed and leaves a single word.
fn check_d(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::ZeroDistance);
    }
    Ok(())
}

fn check_w(n: usize, w: usize) -> Result<()> {
    if w > n {
        return Err(Error::InvalidParams(format!("weight {w} exceeds length {n}")));
    }
    Ok(())
}

/// All even-weight binary words of length `n` (`{0}` for `n = 1`).
pub fn parity_code(n: usize) -> Result<BinaryCode> {
    if n == 0 {
        return Err(Error::InvalidLength { len: 0, max: MAX_LEN });
    }
    let words = binary_words(n)?.filter(|x| x.weight() % 2 == 0).collect();
    Ok(ComponentCode { n, d: 2, w: None, words, r_constrained: false, label: format!("parity({n})") })
}

/// Greedy binary code; `n = 0` gives the code holding only the empty word.
pub fn binary_lexicode(n: usize, d: usize) -> Result<BinaryCode> {
    check_d(d)?;
    let words = greedy(binary_words(n)?, d, false);
    Ok(ComponentCode { n, d, w: None, words, r_constrained: false, label: format!("binary({n},{d})") })
}

pub fn binary_r_lexicode(n: usize, d: usize) -> Result<BinaryCode> {
    check_d(d)?;
    let words = greedy(binary_words(n)?, d, true);
    Ok(ComponentCode { n, d, w: None, words, r_constrained: true, label: format!("binary_r({n},{d})") })
}

pub fn binary_cw_lexicode(n: usize, d: usize, w: usize) -> Result<BinaryCode> {
    check_d(d)?;
    check_w(n, w)?;
    let words = greedy(binary_words(n)?.filter(|x| x.weight() == w), d, false);
    Ok(ComponentCode { n, d, w: Some(w), words, r_constrained: false, label: format!("binary_cw({n},{d},{w})") })
}

pub fn binary_cw_r_lexicode(n: usize, d: usize, w: usize) -> Result<BinaryCode> {
    check_d(d)?;
    check_w(n, w)?;
    let words = greedy(binary_words(n)?.filter(|x| x.weight() == w), d, true);
    Ok(ComponentCode { n, d, w: Some(w), words, r_constrained: true, label: format!("binary_cw_r({n},{d},{w})") })
}

/// Greedy ternary code of constant weight (number of nonzero digits) `w`.
pub fn ternary_cw_lexicode(n: usize, d: usize, w: usize) -> Result<TernaryCode> {
    check_d(d)?;
    check_w(n, w)?;
    let words = greedy(ternary_words(n)?.filter(|x| x.weight() == w), d, false);
    Ok(ComponentCode { n, d, w: Some(w), words, r_constrained: false, label: format!("ternary_cw({n},{d},{w})") })
}

pub fn ternary_cw_r_lexicode(n: usize, d: usize, w: usize) -> Result<TernaryCode> {
    check_d(d)?;
    check_w(n, w)?;
    let words = greedy(ternary_words(n)?.filter(|x| x.weight() == w), d, true);
    Ok(ComponentCode { n, d, w: Some(w), words, r_constrained: true, label: format!("ternary_cw_r({n},{d},{w})") })
}

/// One word from each `{x, x^R}` pair of odd-weight words (the smaller
/// one); `2^(n-2)` words at distance 2 with the reverse constraint.
pub fn odd_weight_r_code(n: usize) -> Result<BinaryCode> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::OddLength(n));
    }
    let words = binary_words(n)?
        .filter(|x| x.weight() % 2 == 1 && x.bits() < x.reverse().bits())
        .collect();
    Ok(ComponentCode { n, d: 2, w: None, words, r_constrained: true, label: format!("odd_weight_r({n})") })
}

/// All `x ⊙ y` with `x` from the constant-weight code `b1` and `y` from
/// `b2`, `b1` index major. Carries the reverse constraint if either factor
/// does.
pub fn product_gc(b1: &BinaryCode, b2: &BinaryCode) -> Result<Code> {
    let w = b1
        .w
        .ok_or_else(|| Error::InvalidParams(format!("{} is not a constant-weight code", b1.label)))?;
    if b1.n != b2.n {
        return Err(Error::LengthMismatch { left: b1.n, right: b2.n });
    }
    let d = b1.d.min(b2.d).min(b1.n);
    let kind = if b1.r_constrained || b2.r_constrained { ConstraintKind::GcR } else { ConstraintKind::Gc };
    let params = CodeParams::new(b1.n, d, w, kind)?;
    let mut words = Vec::with_capacity(b1.len() * b2.len());
    for x in &b1.words {
        for y in &b2.words {
            words.push(odot(*x, *y)?);
        }
    }
    Ok(Code { params, words, origin: Origin::Product(format!("{} ⊙ {}", b1.label, b2.label)) })
}

/// All `x ⊘ y` with `x` from the ternary constant-weight code `t` and `y`
/// from the binary code `b` of length `n - w`, `t` index major.
///
/// The result carries the reverse constraint when `t` does. When only `b`
/// does, the constraint is kept only if the product passes verification
/// with it, since reversing `x` moves the positions that `y` fills.
pub fn product_ternary(t: &TernaryCode, b: &BinaryCode) -> Result<Code> {
    let w = t
        .w
        .ok_or_else(|| Error::InvalidParams(format!("{} is not a constant-weight code", t.label)))?;
    if t.n - w != b.n {
        return Err(Error::LengthMismatch { left: t.n - w, right: b.n });
    }
    let d = t.d.min(b.d).min(t.n);
    let mut words = Vec::with_capacity(t.len() * b.len());
    for x in &t.words {
        for y in &b.words {
            words.push(oslash(x, *y)?);
        }
    }
    let origin = Origin::Product(format!("{} ⊘ {}", t.label, b.label));
    let kind = if t.r_constrained || b.r_constrained { ConstraintKind::GcR } else { ConstraintKind::Gc };
    let code = Code { params: CodeParams::new(t.n, d, w, kind)?, words, origin };
    if !t.r_constrained && b.r_constrained && !verify(&code).pass {
        return Ok(Code { params: CodeParams::new(t.n, d, w, ConstraintKind::Gc)?, ..code });
    }
    Ok(code)
}

/// Complements the first `floor(n/2)` positions of every word, turning a
/// reverse-constrained code into a reverse-complement-constrained one. For
/// odd `n` the guaranteed distance drops by one.
pub fn r_to_rc(code: &Code) -> Result<Code> {
    let p = code.params;
    if p.kind != ConstraintKind::GcR {
        return Err(Error::InvalidParams(format!("expected a {} code, got {}", ConstraintKind::GcR, p.kind)));
    }
    let d = if p.n % 2 == 0 { p.d } else { p.d - 1 };
    if d == 0 {
        return Err(Error::ZeroDistance);
    }
    let params = CodeParams::new(p.n, d, p.w, ConstraintKind::GcRc)?;
    let words: Vec<DnaWord> = code.words.iter().map(|x| x.complement_prefix(p.n / 2)).collect();
    let out = Code { params, words, origin: Origin::Product(format!("rc({})", code.origin)) };
    let report = verify(&out);
    if !report.pass {
        return Err(Error::Unverified(report.summary()));
    }
    Ok(out)
}

/// `binary_cw(n,2,w) ⊙ parity(n)`: `C(n,w) 2^(n-1)` words at distance 2.
pub fn gc_d2_witness(n: usize, w: usize) -> Result<Code> {
    product_gc(&binary_cw_lexicode(n, 2.min(n), w)?, &parity_code(n)?)
}

/// `binary_cw(n,2,w) ⊙ odd_weight_r(n)` moved to the reverse-complement
/// constraint: `C(n,w) 2^(n-2)` words for even `n`.
pub fn gcrc_d2_witness(n: usize, w: usize) -> Result<Code> {
    r_to_rc(&product_gc(&binary_cw_lexicode(n, 2, w)?, &odd_weight_r_code(n)?)?)
}
