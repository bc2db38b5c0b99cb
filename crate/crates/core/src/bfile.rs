//! OEIS b-file ingestion, emission, and offset-tolerant comparison.
//!
//! A b-file is plain text with one `index value` pair per line; lines
//! starting with `#` are comments and blank lines are ignored. Emission
//! is byte-exact: `\n` line endings, no trailing whitespace, one trailing
//! newline.

use num_traits::ToPrimitive;

use crate::digits::Natural;
use crate::error::Error;
use crate::kernels::{sequence_value, SequenceId};

/// Parsed b-file: consecutive (index, value) pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFile {
    pub entries: Vec<(i64, Natural)>,
    pub source_label: String,
}

/// Parse b-file text. Indices must increase by exactly 1.
pub fn parse_bfile(text: &str, source_label: &str) -> Result<BFile, Error> {
    let mut entries: Vec<(i64, Natural)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let idx_str = parts.next().unwrap();
        let val_str = parts.next().ok_or_else(|| Error::BFileParse {
            line,
            reason: "missing value field".into(),
        })?;
        if parts.next().is_some() {
            return Err(Error::BFileParse { line, reason: "more than two fields".into() });
        }
        let index: i64 = idx_str.parse().map_err(|_| Error::BFileParse {
            line,
            reason: format!("bad index {idx_str:?}"),
        })?;
        let value: Natural = val_str.parse().map_err(|_| Error::BFileParse {
            line,
            reason: format!("bad value {val_str:?}"),
        })?;
        if let Some(&(prev, _)) = entries.last() {
            if index != prev + 1 {
                return Err(Error::BFileGap { line, expected: prev + 1, found: index });
            }
        }
        entries.push((index, value));
    }
    Ok(BFile { entries, source_label: source_label.to_string() })
}

/// Emit `index value` lines for indices lo..=hi computed via the closed
/// forms. Deterministic and byte-exact.
pub fn emit_bfile(seq: SequenceId, lo: i64, hi: i64) -> Result<String, Error> {
    if lo > hi || lo < 0 {
        return Err(Error::InvalidRange { lo: lo.to_string(), hi: hi.to_string() });
    }
    let mut out = String::new();
    for i in lo..=hi {
        let value = sequence_value(seq, &Natural::from(i as u64));
        out.push_str(&format!("{i} {value}\n"));
    }
    Ok(out)
}

/// One disagreement under the chosen alignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFileDiff {
    pub index: i64,
    pub reference: Natural,
    pub computed: Natural,
}

/// Outcome of comparing a reference b-file against computed values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFileComparison {
    pub shift: i64,
    pub checked: usize,
    pub diffs: Vec<BFileDiff>,
}

impl BFileComparison {
    pub fn agrees(&self) -> bool {
        self.diffs.is_empty()
    }
}

fn computed_at(seq: SequenceId, n: i64) -> Option<Natural> {
    let n = n.to_u64()?;
    Some(sequence_value(seq, &Natural::from(n)))
}

/// Compare a reference b-file against the computed sequence, trying index
/// shifts −1, 0, +1 and keeping the one with the most agreement. Fails if
/// no shift reaches 90% agreement.
pub fn compare_bfile(reference: &BFile, seq: SequenceId) -> Result<BFileComparison, Error> {
    if reference.entries.is_empty() {
        return Err(Error::BFileParse { line: 0, reason: "reference b-file is empty".into() });
    }
    let mut best: Option<BFileComparison> = None;
    for shift in [-1i64, 0, 1] {
        let mut diffs = Vec::new();
        for (index, value) in &reference.entries {
            match computed_at(seq, index + shift) {
                Some(computed) if &computed == value => {}
                Some(computed) => diffs.push(BFileDiff {
                    index: *index,
                    reference: value.clone(),
                    computed,
                }),
                // Shift pushed the index below 0; count as disagreement.
                None => diffs.push(BFileDiff {
                    index: *index,
                    reference: value.clone(),
                    computed: Natural::from(0u8),
                }),
            }
        }
        let candidate = BFileComparison { shift, checked: reference.entries.len(), diffs };
        best = Some(match best {
            Some(b) if b.diffs.len() <= candidate.diffs.len() => b,
            _ => candidate,
        });
    }
    let best = best.unwrap();
    let agreement = best.checked - best.diffs.len();
    if agreement * 10 < best.checked * 9 {
        return Err(Error::AlignmentFailed {
            best_shift: best.shift,
            agreement,
            total: best.checked,
        });
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn parse_simple() {
        let f = parse_bfile("1 2\n2 6\n3 12\n", "test").unwrap();
        assert_eq!(f.entries, vec![(1, nat(2)), (2, nat(6)), (3, nat(12))]);
    }

    #[test]
    fn parse_skips_comments_and_blanks() {
        let f = parse_bfile("# comment\n\n1 1\n", "test").unwrap();
        assert_eq!(f.entries, vec![(1, nat(1))]);
    }

    #[test]
    fn parse_rejects_gap() {
        let err = parse_bfile("1 2\n3 12\n", "test").unwrap_err();
        assert!(matches!(err, Error::BFileGap { expected: 2, found: 3, .. }));
    }

    #[test]
    fn parse_rejects_malformed() {
        let err = parse_bfile("1 2\nnonsense\n", "test").unwrap_err();
        assert!(matches!(err, Error::BFileParse { line: 2, .. }));
        let err = parse_bfile("1 2 3\n", "test").unwrap_err();
        assert!(matches!(err, Error::BFileParse { line: 1, .. }));
    }

    #[test]
    fn emit_matches_first_terms() {
        assert_eq!(emit_bfile(SequenceId::Odd, 1, 5).unwrap(), "1 1\n2 4\n3 9\n4 16\n5 25\n");
        assert_eq!(emit_bfile(SequenceId::All, 9, 11).unwrap(), "9 45\n10 45\n11 46\n");
        assert_eq!(emit_bfile(SequenceId::Even, 1, 1).unwrap(), "1 2\n");
    }

    #[test]
    fn emit_rejects_inverted() {
        assert!(emit_bfile(SequenceId::Even, 5, 1).is_err());
    }

    #[test]
    fn round_trip_self_consistent() {
        for seq in [SequenceId::Even, SequenceId::Odd, SequenceId::All] {
            let text = emit_bfile(seq, 1, 500).unwrap();
            let parsed = parse_bfile(&text, "self").unwrap();
            let cmp = compare_bfile(&parsed, seq).unwrap();
            assert_eq!(cmp.shift, 0);
            assert!(cmp.agrees());
        }
    }

    #[test]
    fn shifted_reference_aligns() {
        // Reference indexed from 0 where our convention starts at 1.
        let mut text = String::new();
        for i in 0..200i64 {
            let v = sequence_value(SequenceId::Even, &Natural::from((i + 1) as u64));
            text.push_str(&format!("{i} {v}\n"));
        }
        let parsed = parse_bfile(&text, "shifted").unwrap();
        let cmp = compare_bfile(&parsed, SequenceId::Even).unwrap();
        assert_eq!(cmp.shift, 1);
        assert!(cmp.agrees());
    }

    #[test]
    fn corrupted_value_reported() {
        let mut lines: Vec<String> = emit_bfile(SequenceId::All, 1, 100)
            .unwrap()
            .lines()
            .map(String::from)
            .collect();
        lines[49] = "50 123456789".to_string();
        let parsed = parse_bfile(&(lines.join("\n") + "\n"), "corrupt").unwrap();
        let cmp = compare_bfile(&parsed, SequenceId::All).unwrap();
        assert_eq!(cmp.shift, 0);
        assert_eq!(cmp.diffs.len(), 1);
        assert_eq!(cmp.diffs[0].index, 50);
    }

    #[test]
    fn alignment_failure() {
        let text = "1 7\n2 7\n3 7\n4 7\n5 7\n";
        let parsed = parse_bfile(text, "junk").unwrap();
        assert!(matches!(
            compare_bfile(&parsed, SequenceId::Even),
            Err(Error::AlignmentFailed { .. })
        ));
    }
}
