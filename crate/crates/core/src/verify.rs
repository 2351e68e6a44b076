//! Independent verification of codes and an exact maximum-size oracle for
//! tiny parameters.
//!
//! The verifier works on ASCII letters, position by position, and never
//! touches the packed distance kernel used by the constructions. Large codes
//! are checked by enumerating Hamming balls around each word and probing a
//! sorted word list, which is exhaustive as long as the radius is `d - 1`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bounds::ConstraintKind;
use crate::lexicode::{Code, CodeParams};
use crate::math::binom;
use crate::words::{packed_distance, packed_gc, packed_reverse, packed_reverse_complement, DnaWord};

type Letters = [u8; 32];

const LETTERS: [u8; 4] = *b"ACGT";

fn letters(word: &DnaWord) -> Letters {
    let mut out = [0u8; 32];
    for (slot, b) in out.iter_mut().zip(word.iter()) {
        *slot = b.to_char() as u8;
    }
    out
}

fn complement_letter(c: u8) -> u8 {
    match c {
        b'A' => b'T',
        b'T' => b'A',
        b'C' => b'G',
        b'G' => b'C',
        other => other,
    }
}

fn letter_image(x: &Letters, n: usize, kind: ConstraintKind) -> Letters {
    let mut out = [0u8; 32];
    for i in 0..n {
        let c = x[n - 1 - i];
        out[i] = match kind {
            ConstraintKind::GcRc => complement_letter(c),
            _ => c,
        };
    }
    out
}

fn letter_distance(a: &Letters, b: &Letters, n: usize) -> usize {
    a[..n].iter().zip(&b[..n]).filter(|(x, y)| x != y).count()
}

fn letter_gc(a: &Letters, n: usize) -> usize {
    a[..n].iter().filter(|&&c| c == b'C' || c == b'G').count()
}

/// A minimum distance that is either known exactly or only bounded below.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinDistance {
    Exact(usize),
    AtLeast(usize),
}

impl MinDistance {
    /// Whether the distance is at least `d`.
    pub fn meets(self, d: usize) -> bool {
        match self {
            MinDistance::Exact(v) | MinDistance::AtLeast(v) => v >= d,
        }
    }
}

impl fmt::Display for MinDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinDistance::Exact(v) => write!(f, "{v}"),
            MinDistance::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub params: CodeParams,
    pub size: usize,
    /// Over distinct codeword pairs; `None` with fewer than two words.
    pub min_pairwise_distance: Option<MinDistance>,
    /// `min H(x, y^RC)` (or `y^R`) over all ordered pairs including `x = y`;
    /// `None` for the pairwise-only kind or an empty code.
    pub min_cross_distance: Option<MinDistance>,
    /// Distinct GC-contents present.
    pub gc_contents: Vec<usize>,
    /// Words beyond the first copy of each distinct word.
    pub duplicate_count: usize,
    /// Words whose length differs from `params.n`.
    pub wrong_length: usize,
    pub pass: bool,
}

impl VerifyReport {
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{} words, {}, min distance {}",
            self.size,
            self.params,
            self.min_pairwise_distance.map_or(String::from("-"), |m| format!("{m}"))
        );
        if let Some(c) = self.min_cross_distance {
            s.push_str(&format!(", min cross distance {c}"));
        }
        s.push_str(&format!(", gc-contents {:?}", self.gc_contents));
        if self.duplicate_count > 0 {
            s.push_str(&format!(", {} duplicates", self.duplicate_count));
        }
        if self.wrong_length > 0 {
            s.push_str(&format!(", {} words of wrong length", self.wrong_length));
        }
        s.push_str(if self.pass { ": PASS" } else { ": FAIL" });
        s
    }
}

/// Distinct words with ball-probing search over a sorted list of keys.
struct LetterSet {
    n: usize,
    sorted: Vec<Letters>,
    keys: Vec<u64>,
}

fn letter_value(c: u8) -> u64 {
    match c {
        b'A' => 0,
        b'C' => 1,
        b'G' => 2,
        _ => 3,
    }
}

fn letter_key(w: &Letters, n: usize) -> u64 {
    w[..n].iter().fold(0, |k, &c| (k << 2) | letter_value(c))
}

impl LetterSet {
    fn new(n: usize, words: &[Letters]) -> Self {
        let mut sorted = words.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut keys: Vec<u64> = sorted.iter().map(|w| letter_key(w, n)).collect();
        keys.sort_unstable();
        LetterSet { n, sorted, keys }
    }

    fn contains(&self, w: &Letters) -> bool {
        self.keys.binary_search(&letter_key(w, self.n)).is_ok()
    }

    /// Smallest `r` in `from..=radius` such that some member lies at distance
    /// exactly `r` from `center`.
    fn nearest(&self, center: &Letters, from: usize, radius: usize) -> Option<usize> {
        let key = letter_key(center, self.n);
        (from..=radius.min(self.n)).find(|&r| self.any_at(key, center, 0, r))
    }

    fn any_at(&self, key: u64, center: &Letters, start: usize, left: usize) -> bool {
        if left == 0 {
            return self.keys.binary_search(&key).is_ok();
        }
        for pos in start..=(self.n - left) {
            let shift = 2 * (self.n - 1 - pos);
            let base = key & !(3 << shift);
            for &c in &LETTERS {
                if c != center[pos] && self.any_at(base | (letter_value(c) << shift), center, pos + 1, left - 1) {
                    return true;
                }
            }
        }
        false
    }
}

fn full_ball(n: usize, r: usize) -> u128 {
    (0..=r.min(n)).map(|i| binom(n as i64, i as i64) * 3u128.pow(i as u32)).sum()
}

/// Checks every constraint of `code.params` exhaustively.
pub fn verify(code: &Code) -> VerifyReport {
    let p = code.params;
    let n = p.n;
    let wrong_length = code.words.iter().filter(|w| w.len() != n).count();
    let words: Vec<Letters> = code.words.iter().filter(|w| w.len() == n).map(letters).collect();
    let gc_contents: Vec<usize> =
        words.iter().map(|w| letter_gc(w, n)).collect::<BTreeSet<_>>().into_iter().collect();
    let set = LetterSet::new(n, &words);
    let duplicate_count = words.len() - set.sorted.len();
    let distinct = &set.sorted;
    let cross = p.kind != ConstraintKind::Gc;
    let images: Vec<Letters> = if cross {
        distinct.iter().map(|w| letter_image(w, n, p.kind)).collect()
    } else {
        Vec::new()
    };

    let m = distinct.len();
    let use_balls = full_ball(n, p.d.saturating_sub(1)) * 4 < m as u128;

    let mut min_pair: Option<MinDistance> = None;
    let mut min_cross: Option<MinDistance> = None;
    let fold = |cur: Option<MinDistance>, v: MinDistance| -> Option<MinDistance> {
        Some(match (cur, v) {
            (None, v) => v,
            (Some(MinDistance::Exact(a)), MinDistance::Exact(b)) => MinDistance::Exact(a.min(b)),
            (Some(MinDistance::Exact(a)), MinDistance::AtLeast(b)) => {
                if a <= b {
                    MinDistance::Exact(a)
                } else {
                    MinDistance::AtLeast(b)
                }
            }
            (Some(MinDistance::AtLeast(a)), MinDistance::Exact(b)) => {
                if b <= a {
                    MinDistance::Exact(b)
                } else {
                    MinDistance::AtLeast(a)
                }
            }
            (Some(MinDistance::AtLeast(a)), MinDistance::AtLeast(b)) => MinDistance::AtLeast(a.min(b)),
        })
    };

    if use_balls {
        let radius = p.d - 1;
        for x in distinct.iter() {
            if m > 1 {
                let v = match set.nearest(x, 1, radius) {
                    Some(r) => MinDistance::Exact(r),
                    None => MinDistance::AtLeast(p.d),
                };
                min_pair = fold(min_pair, v);
            }
        }
        if cross {
            for y in images.iter() {
                let v = match set.nearest(y, 0, radius) {
                    Some(r) => MinDistance::Exact(r),
                    None => MinDistance::AtLeast(p.d),
                };
                min_cross = fold(min_cross, v);
            }
        }
    } else {
        for i in 0..m {
            for j in (i + 1)..m {
                let v = letter_distance(&distinct[i], &distinct[j], n);
                min_pair = fold(min_pair, MinDistance::Exact(v));
            }
            if cross {
                for img in images.iter() {
                    let v = letter_distance(&distinct[i], img, n);
                    min_cross = fold(min_cross, MinDistance::Exact(v));
                }
            }
        }
    }
    if duplicate_count > 0 {
        min_pair = Some(MinDistance::Exact(0));
    }

    let pass = wrong_length == 0
        && duplicate_count == 0
        && gc_contents.iter().all(|&g| g == p.w)
        && min_pair.is_none_or(|v| v.meets(p.d))
        && min_cross.is_none_or(|v| v.meets(p.d));
    VerifyReport {
        params: p,
        size: code.words.len(),
        min_pairwise_distance: min_pair,
        min_cross_distance: if cross { min_cross } else { None },
        gc_contents,
        duplicate_count,
        wrong_length,
        pass,
    }
}

/// Some GC-content-`w` word that could be added to `code` without breaking a
/// constraint, if one exists. Exhaustive over all `4^n` words.
pub fn addable_word(code: &Code) -> Option<DnaWord> {
    let p = code.params;
    let n = p.n;
    let words: Vec<Letters> = code.words.iter().map(letters).collect();
    let set = LetterSet::new(n, &words);
    let images: Vec<Letters> = if p.kind == ConstraintKind::Gc {
        Vec::new()
    } else {
        set.sorted.iter().map(|w| letter_image(w, n, p.kind)).collect()
    };
    let image_set = LetterSet::new(n, &images);
    let use_balls = full_ball(n, p.d - 1) * 4 < set.sorted.len() as u128;
    for bits in 0..(1u64 << (2 * n)) {
        let y = DnaWord::from_bits(bits, n).expect("in range");
        let yl = letters(&y);
        if letter_gc(&yl, n) != p.w || set.contains(&yl) {
            continue;
        }
        if p.kind != ConstraintKind::Gc && letter_distance(&yl, &letter_image(&yl, n, p.kind), n) < p.d {
            continue;
        }
        let blocked = if use_balls {
            set.nearest(&yl, 0, p.d - 1).is_some()
                || (!images.is_empty() && image_set.nearest(&yl, 0, p.d - 1).is_some())
        } else {
            set.sorted.iter().chain(images.iter()).any(|z| letter_distance(&yl, z, n) < p.d)
        };
        if !blocked {
            return Some(y);
        }
    }
    None
}

/// Compatibility graph over the admissible words, as adjacency bitsets.
struct Graph {
    size: usize,
    blocks: usize,
    adj: Vec<u64>,
}

impl Graph {
    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.blocks..(v + 1) * self.blocks]
    }
}

fn admissible_vertices(n: usize, d: usize, w: usize, kind: ConstraintKind) -> Vec<u64> {
    (0..(1u64 << (2 * n)))
        .filter(|&x| packed_gc(x) as usize == w)
        .filter(|&x| match kind {
            ConstraintKind::Gc => true,
            ConstraintKind::GcRc => packed_distance(x, packed_reverse_complement(x, n)) as usize >= d,
            ConstraintKind::GcR => packed_distance(x, packed_reverse(x, n)) as usize >= d,
        })
        .collect()
}

fn compatible(x: u64, y: u64, n: usize, d: usize, kind: ConstraintKind) -> bool {
    let d = d as u32;
    packed_distance(x, y) >= d
        && match kind {
            ConstraintKind::Gc => true,
            ConstraintKind::GcRc => packed_distance(x, packed_reverse_complement(y, n)) >= d,
            ConstraintKind::GcR => packed_distance(x, packed_reverse(y, n)) >= d,
        }
}

fn build_graph(vertices: &[u64], n: usize, d: usize, kind: ConstraintKind) -> Graph {
    let size = vertices.len();
    let blocks = size.div_ceil(64).max(1);
    let mut adj = vec![0u64; size * blocks];
    for i in 0..size {
        for j in (i + 1)..size {
            if compatible(vertices[i], vertices[j], n, d, kind) {
                adj[i * blocks + j / 64] |= 1 << (j % 64);
                adj[j * blocks + i / 64] |= 1 << (i % 64);
            }
        }
    }
    Graph { size, blocks, adj }
}

struct CliqueSearch<'a> {
    g: &'a Graph,
    best: usize,
    nodes: u64,
    node_cap: u64,
    aborted: bool,
}

impl CliqueSearch<'_> {
    // Greedy sequential coloring of `p`; returns vertices in color order with
    // their color numbers (1-based).
    fn color(&self, p: &[u64]) -> (Vec<usize>, Vec<usize>) {
        let mut uncolored = p.to_vec();
        let mut order = Vec::new();
        let mut colors = Vec::new();
        let mut k = 0;
        while uncolored.iter().any(|&b| b != 0) {
            k += 1;
            let mut q = uncolored.clone();
            while let Some(v) = first_bit(&q) {
                clear_bit(&mut uncolored, v);
                clear_bit(&mut q, v);
                for (qb, nb) in q.iter_mut().zip(self.g.row(v)) {
                    *qb &= !nb;
                }
                order.push(v);
                colors.push(k);
            }
        }
        (order, colors)
    }

    fn expand(&mut self, mut p: Vec<u64>, depth: usize) {
        self.nodes += 1;
        if self.nodes > self.node_cap {
            self.aborted = true;
            return;
        }
        let (order, colors) = self.color(&p);
        for idx in (0..order.len()).rev() {
            if self.aborted || depth + colors[idx] <= self.best {
                return;
            }
            let v = order[idx];
            let next: Vec<u64> = p.iter().zip(self.g.row(v)).map(|(a, b)| a & b).collect();
            if next.iter().all(|&b| b == 0) {
                self.best = self.best.max(depth + 1);
            } else {
                self.expand(next, depth + 1);
            }
            clear_bit(&mut p, v);
        }
    }
}

fn first_bit(bits: &[u64]) -> Option<usize> {
    bits.iter().enumerate().find(|(_, &b)| b != 0).map(|(i, &b)| i * 64 + b.trailing_zeros() as usize)
}

fn clear_bit(bits: &mut [u64], v: usize) {
    bits[v / 64] &= !(1 << (v % 64));
}

fn greedy_clique(g: &Graph, order: &[usize]) -> usize {
    let mut members: Vec<usize> = Vec::new();
    for &v in order {
        if members.iter().all(|&u| g.row(u)[v / 64] & (1 << (v % 64)) != 0) {
            members.push(v);
        }
    }
    members.len()
}

/// Largest code size for tiny parameters by branch and bound over the
/// compatibility graph, or `None` if more than `node_cap` search nodes would
/// be needed.
pub fn exact_max_code(n: usize, d: usize, w: usize, kind: ConstraintKind, node_cap: u64) -> Option<u64> {
    if n == 0 || n > 8 || w > n {
        return None;
    }
    let vertices = admissible_vertices(n, d, w, kind);
    if vertices.is_empty() {
        return Some(0);
    }
    let raw = build_graph(&vertices, n, d, kind);
    // Re-index by non-increasing degree.
    let degree = |v: usize| raw.row(v).iter().map(|b| b.count_ones()).sum::<u32>();
    let mut order: Vec<usize> = (0..raw.size).collect();
    order.sort_by_key(|&v| core::cmp::Reverse(degree(v)));
    let sorted: Vec<u64> = order.iter().map(|&v| vertices[v]).collect();
    let g = build_graph(&sorted, n, d, kind);
    let identity: Vec<usize> = (0..g.size).collect();
    let seed = greedy_clique(&g, &identity);
    let mut all = vec![0u64; g.blocks];
    for v in 0..g.size {
        all[v / 64] |= 1 << (v % 64);
    }
    let mut search = CliqueSearch { g: &g, best: seed, nodes: 0, node_cap, aborted: false };
    search.expand(all, 0);
    if search.aborted {
        None
    } else {
        Some(search.best as u64)
    }
}
