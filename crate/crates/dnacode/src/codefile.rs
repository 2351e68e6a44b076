//! Plain-text code files.
//!
//! ```text
//! # n=6 d=2 w=3 constraint=gc ordering=1 offset=0
//! TTTCCC
//! ...
//! ```
//!
//! Header lines start with `#` and hold `key=value` tokens; a line of the
//! form `# origin=...` carries free text. Factored scans omit `ordering` and
//! write `offset=<h1>⊙<h2>`. Component codes add `alphabet=2` or
//! `alphabet=3` and write their words over digits.

use std::collections::BTreeMap;
use std::fmt::{Display, Write as _};
use std::fs;
use std::path::Path;

use dnacode_core::products::{ComponentCode, ComponentWord};
use dnacode_core::{Code, CodeParams, ConstraintKind, DnaWord, NucleotideOrdering, OffsetSpec, Origin};

use crate::error::{CliError, Result};

pub fn format_code(code: &Code) -> String {
    let p = code.params;
    let mut s = format!("# n={} d={} w={} constraint={}", p.n, p.d, p.w, p.kind);
    match code.origin {
        Origin::Lexicode(spec) => {
            if let Some(ord) = spec.ordering() {
                let _ = write!(s, " ordering={ord}");
            }
            let _ = write!(s, " offset={}", spec.offset_text());
        }
        Origin::Product(ref label) => {
            let _ = write!(s, "\n# origin={label}");
        }
        Origin::External => {}
    }
    s.push('\n');
    for w in &code.words {
        let _ = writeln!(s, "{w}");
    }
    s
}

pub fn format_component<W: ComponentWord + Display>(code: &ComponentCode<W>) -> String {
    let mut s = format!("# alphabet={} n={} d={}", code.alphabet(), code.n, code.d);
    if let Some(w) = code.w {
        let _ = write!(s, " w={w}");
    }
    let _ = writeln!(s, " r_constrained={}", code.r_constrained);
    let _ = writeln!(s, "# origin={}", code.label);
    for x in &code.words {
        let _ = writeln!(s, "{x}");
    }
    s
}

fn parse_err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { line, msg: msg.into() }
}

pub fn parse_code(text: &str) -> Result<Code> {
    let mut fields: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut origin_text: Option<String> = None;
    let mut words = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('#') {
            let header = header.trim();
            if let Some(rest) = header.strip_prefix("origin=") {
                origin_text = Some(rest.to_string());
                continue;
            }
            for token in header.split_whitespace() {
                if let Some((k, v)) = token.split_once('=') {
                    fields.insert(k.to_string(), (line_no, v.to_string()));
                }
            }
            continue;
        }
        let word: DnaWord = line.parse().map_err(|e| parse_err(line_no, format!("{e}")))?;
        words.push(word);
    }

    let get = |key: &str| -> Result<&(usize, String)> {
        fields.get(key).ok_or_else(|| parse_err(0, format!("missing header field `{key}`")))
    };
    let num = |key: &str| -> Result<usize> {
        let (line, v) = get(key)?;
        v.parse().map_err(|_| parse_err(*line, format!("bad value for `{key}`: {v}")))
    };
    let n = num("n")?;
    let d = num("d")?;
    let w = num("w")?;
    let (kind_line, kind_text) = get("constraint")?;
    let kind: ConstraintKind = kind_text.parse().map_err(|e| parse_err(*kind_line, format!("{e}")))?;
    let params = CodeParams::new(n, d, w, kind)?;

    let origin = match fields.get("offset") {
        Some((line, off)) => {
            let ordering = match fields.get("ordering") {
                Some((l, v)) => {
                    let k: u8 = v.parse().map_err(|_| parse_err(*l, format!("bad ordering {v}")))?;
                    NucleotideOrdering::new(k)?
                }
                None => NucleotideOrdering::STANDARD,
            };
            let spec = OffsetSpec::parse(off, ordering).map_err(|e| parse_err(*line, format!("{e}")))?;
            Origin::Lexicode(spec)
        }
        None => match origin_text {
            Some(t) => Origin::Product(t),
            None => Origin::External,
        },
    };
    Ok(Code { params, words, origin })
}

pub fn read_code(path: &Path) -> Result<Code> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    parse_code(&text)
}

pub fn write_code(path: &Path, code: &Code) -> Result<()> {
    fs::write(path, format_code(code)).map_err(CliError::io(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use dnacode_core::construct;

    #[test]
    fn round_trip_lexicode() {
        let spec = OffsetSpec::parse("59", NucleotideOrdering::new(2).unwrap()).unwrap();
        let code = construct(CodeParams::new(4, 3, 2, ConstraintKind::GcRc).unwrap(), spec).unwrap();
        let text = format_code(&code);
        assert!(text.starts_with("# n=4 d=3 w=2 constraint=gcrc ordering=2 offset=59\n"));
        assert_eq!(parse_code(&text).unwrap(), code);
    }

    #[test]
    fn round_trip_factored_and_product() {
        let spec = OffsetSpec::parse("12⊙19", NucleotideOrdering::STANDARD).unwrap();
        let code = construct(CodeParams::new(6, 4, 3, ConstraintKind::GcRc).unwrap(), spec).unwrap();
        let text = format_code(&code);
        assert!(text.contains("offset=12⊙19"));
        assert!(!text.contains("ordering"));
        assert_eq!(parse_code(&text).unwrap(), code);

        let product = dnacode_core::gc_d2_witness(4, 2).unwrap();
        assert_eq!(parse_code(&format_code(&product)).unwrap(), product);
    }

    #[test]
    fn ascii_factored_offsets() {
        let code = parse_code("# n=2 d=1 w=1 constraint=gc offset=1o2\nAC\n").unwrap();
        assert_eq!(code.origin, Origin::Lexicode(OffsetSpec::Factored { outer: 1, inner: 2 }));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_code("# n=2 d=1 w=1 constraint=gc\nAX\n"), Err(CliError::Parse { line: 2, .. })));
        assert!(parse_code("# n=2 d=1 constraint=gc\nAC\n").is_err());
        assert!(parse_code("# n=2 d=1 w=1 constraint=xyz\nAC\n").is_err());
        assert!(parse_code("# n=2 d=3 w=1 constraint=gc\nAC\n").is_err());
    }
}
