use dnacode_core::words::iterate;
use dnacode_core::{construct, exact_max_code, verify, BoundTable, Code, CodeParams, ConstraintKind, DnaWord, Nucleotide, OffsetSpec};

const KINDS: [ConstraintKind; 3] = [ConstraintKind::Gc, ConstraintKind::GcRc, ConstraintKind::GcR];

fn compatible(x: &DnaWord, y: &DnaWord, d: usize, kind: ConstraintKind) -> bool {
    let plain = x.hamming(y).unwrap() >= d;
    match kind {
        ConstraintKind::Gc => plain,
        ConstraintKind::GcRc => plain && x.hamming(&y.reverse_complement()).unwrap() >= d,
        ConstraintKind::GcR => plain && x.hamming(&y.reverse()).unwrap() >= d,
    }
}

fn admissible(x: &DnaWord, d: usize, kind: ConstraintKind) -> bool {
    match kind {
        ConstraintKind::Gc => true,
        ConstraintKind::GcRc => x.hamming(&x.reverse_complement()).unwrap() >= d,
        ConstraintKind::GcR => x.hamming(&x.reverse()).unwrap() >= d,
    }
}

// Plain branch and bound with only the trivial size bound.
fn naive_max(n: usize, d: usize, w: usize, kind: ConstraintKind) -> u64 {
    let pool: Vec<DnaWord> = iterate(n, OffsetSpec::ZERO)
        .unwrap()
        .filter(|x| x.gc_content() == w && admissible(x, d, kind))
        .collect();
    fn grow(pool: &[DnaWord], chosen: &mut Vec<DnaWord>, from: usize, d: usize, kind: ConstraintKind, best: &mut usize) {
        *best = (*best).max(chosen.len());
        if chosen.len() + (pool.len() - from) <= *best {
            return;
        }
        for i in from..pool.len() {
            if chosen.iter().all(|c| compatible(c, &pool[i], d, kind)) {
                chosen.push(pool[i]);
                grow(pool, chosen, i + 1, d, kind, best);
                chosen.pop();
            }
        }
    }
    let mut best = 0;
    grow(&pool, &mut Vec::new(), 0, d, kind, &mut best);
    best as u64
}

fn relabel(code: &Code, f: impl Fn(Nucleotide) -> Nucleotide) -> Code {
    let mut out = code.clone();
    out.words = code
        .words
        .iter()
        .map(|x| DnaWord::from_nucleotides(&x.iter().map(&f).collect::<Vec<_>>()).unwrap())
        .collect();
    out
}

#[test]
fn branch_and_bound_agrees_with_naive_search() {
    for n in 1..=3usize {
        for d in 1..=n {
            for w in 0..=n {
                for kind in KINDS {
                    let fast = exact_max_code(n, d, w, kind, u64::MAX);
                    assert_eq!(fast, Some(naive_max(n, d, w, kind)), "{kind}({n},{d},{w})");
                }
            }
        }
    }
    assert_eq!(exact_max_code(4, 3, 2, ConstraintKind::Gc, u64::MAX), Some(naive_max(4, 3, 2, ConstraintKind::Gc)));
}

#[test]
fn oracle_is_symmetric_in_gc_content() {
    for n in 1..=4usize {
        for d in 2..=n {
            for w in 0..=n {
                for kind in KINDS {
                    let a = exact_max_code(n, d, w, kind, u64::MAX);
                    let b = exact_max_code(n, d, n - w, kind, u64::MAX);
                    assert_eq!(a, b, "{kind}({n},{d},{w})");
                }
            }
        }
    }
}

#[test]
fn oracle_sits_between_lexicode_and_upper_bound() {
    let table = BoundTable::build(5).unwrap();
    for n in 1..=4usize {
        for d in 1..=n {
            for w in 0..=n {
                for kind in KINDS {
                    let exact = exact_max_code(n, d, w, kind, u64::MAX).unwrap();
                    let greedy = construct(CodeParams::new(n, d, w, kind).unwrap(), OffsetSpec::ZERO).unwrap();
                    let (_, upper) = table.best_bounds(n, d, w, kind).unwrap();
                    assert!(greedy.len() as u64 <= exact, "{kind}({n},{d},{w})");
                    assert!(exact <= upper.value, "{kind}({n},{d},{w})");
                }
            }
        }
    }
}

#[test]
fn letter_relabelings_preserve_codes() {
    let swaps: [fn(Nucleotide) -> Nucleotide; 3] = [
        |b| b.complement(),
        |b| match b {
            Nucleotide::A => Nucleotide::T,
            Nucleotide::T => Nucleotide::A,
            other => other,
        },
        |b| match b {
            Nucleotide::C => Nucleotide::G,
            Nucleotide::G => Nucleotide::C,
            other => other,
        },
    ];
    for n in 2..=7usize {
        for d in 1..=n {
            for w in 0..=n {
                for kind in KINDS {
                    let code = construct(CodeParams::new(n, d, w, kind).unwrap(), OffsetSpec::ZERO).unwrap();
                    for f in swaps {
                        let mapped = relabel(&code, f);
                        assert!(verify(&mapped).pass, "{kind}({n},{d},{w})");
                    }
                }
            }
        }
    }
}
