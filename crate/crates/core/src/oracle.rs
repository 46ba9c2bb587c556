//! Brute-force reference implementation of alignment validation.
//!
//! Everything here works on plaintext strings and plain integers — no field
//! elements, no constraint systems — so it shares no code path with the
//! circuit it cross-checks. [`grid_accepts`] deliberately duplicates the
//! routing grid's boundary decisions in plain code: it is the executable
//! specification of that wiring, small enough to test exhaustively.

use thiserror::Error;

use crate::circuit::MsaInstance;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("alignment rows have unequal lengths")]
    RaggedRows,
    #[error("need at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error("instance has {seqs} sequences but {rows} alignment rows")]
    RowCountMismatch { seqs: usize, rows: usize },
    #[error("sequence {0} contains a gap character")]
    GapInSequence(usize),
    #[error("sequence of length {len} exceeds the grid bound {bound}")]
    SequenceTooLong { len: usize, bound: usize },
    #[error("alignment row of length {len} exceeds the grid bound {bound}")]
    RowTooLong { len: usize, bound: usize },
}

/// Scores one column pair of letter codes (0 is the gap): +1 for a match of
/// two identical non-gap codes, -1 for everything else (mismatch, one gap,
/// two gaps).
pub fn score_column(a: u8, b: u8) -> i64 {
    if a == b && a != 0 {
        1
    } else {
        -1
    }
}

/// Sum of column scores over two alignment rows of equal length.
pub fn score_pair(row_a: &str, row_b: &str) -> Result<i64, OracleError> {
    if row_a.chars().count() != row_b.chars().count() {
        return Err(OracleError::RaggedRows);
    }
    Ok(row_a
        .chars()
        .zip(row_b.chars())
        .map(|(a, b)| score_column(char_code(a), char_code(b)))
        .sum())
}

/// Sum-of-pairs score: total of [`score_pair`] over all unordered row pairs.
pub fn sp_score(aln: &[String]) -> Result<i64, OracleError> {
    if aln.len() < 2 {
        return Err(OracleError::TooFewRows(aln.len()));
    }
    let len = aln[0].chars().count();
    if aln.iter().any(|row| row.chars().count() != len) {
        return Err(OracleError::RaggedRows);
    }
    let mut total = 0;
    for i in 0..aln.len() {
        for j in (i + 1)..aln.len() {
            total += score_pair(&aln[i], &aln[j])?;
        }
    }
    Ok(total)
}

/// True iff the alignment row with all gaps removed equals the sequence.
pub fn consistent(seq: &str, aln_row: &str) -> bool {
    let stripped: String = aln_row.chars().filter(|&c| c != '-').collect();
    stripped == seq
}

/// Gaps map to code 0; any other character is its own code. Character
/// identity is all the grid needs, so no alphabet is involved.
fn char_code(c: char) -> u8 {
    if c == '-' {
        0
    } else {
        c as u8
    }
}

fn pad_codes(text: &str, len: usize) -> Vec<u8> {
    let mut codes: Vec<u8> = text.chars().map(char_code).collect();
    codes.resize(len, 0);
    codes
}

/// Direct simulation of the routing grid over the padded encoding: the same
/// cells, merge rule, boundary column, and acceptance cell as the circuit,
/// with booleans instead of signals.
///
/// Router cells occupy rows `0..seq_len` and columns `0..aln_len`; the drain
/// row sits at row `seq_len` and consumes trailing gap columns; a boundary
/// column at `aln_len` requires the remaining sequence cells to be padding.
/// The enable entering a cell is the OR of its west, northwest, and north
/// incoming edges; acceptance ORs the three edges entering the virtual cell
/// at `(seq_len, aln_len)`.
pub fn grid_accepts(
    seq: &str,
    aln_row: &str,
    seq_len: usize,
    aln_len: usize,
) -> Result<bool, OracleError> {
    if seq.contains('-') {
        return Err(OracleError::GapInSequence(0));
    }
    let n = seq.chars().count();
    if n > seq_len {
        return Err(OracleError::SequenceTooLong {
            len: n,
            bound: seq_len,
        });
    }
    let n = aln_row.chars().count();
    if n > aln_len {
        return Err(OracleError::RowTooLong {
            len: n,
            bound: aln_len,
        });
    }
    let r = pad_codes(seq, seq_len);
    let c = pad_codes(aln_row, aln_len);

    let mut south = vec![vec![false; aln_len]; seq_len];
    let mut southeast = vec![vec![false; aln_len]; seq_len];
    let mut east = vec![vec![false; aln_len]; seq_len];
    for i in 0..seq_len {
        for j in 0..aln_len {
            let enable = (i == 0 && j == 0)
                || (j > 0 && east[i][j - 1])
                || (i > 0 && j > 0 && southeast[i - 1][j - 1])
                || (i > 0 && south[i - 1][j]);
            south[i][j] = enable && r[i] == 0;
            southeast[i][j] = enable && r[i] == c[j] && r[i] != 0;
            east[i][j] = enable && c[j] == 0 && r[i] != 0;
        }
    }

    // drain row: consumes remaining gap columns once the sequence is spent
    let mut drain_east = vec![false; aln_len];
    for j in 0..aln_len {
        let enable = (j > 0 && drain_east[j - 1])
            || (j > 0 && southeast[seq_len - 1][j - 1])
            || south[seq_len - 1][j];
        drain_east[j] = enable && c[j] == 0;
    }

    // boundary column: alignment exhausted, remaining sequence must be padding
    let mut tail_south = vec![false; seq_len];
    for i in 0..seq_len {
        let enable = east[i][aln_len - 1]
            || (i > 0 && southeast[i - 1][aln_len - 1])
            || (i > 0 && tail_south[i - 1]);
        tail_south[i] = enable && r[i] == 0;
    }

    Ok(drain_east[aln_len - 1] || southeast[seq_len - 1][aln_len - 1] || tail_south[seq_len - 1])
}

/// Full validation: every row strips to its sequence and the claimed score
/// matches the sum-of-pairs score. Malformed instances are errors, distinct
/// from a well-formed instance that is merely invalid.
pub fn validate(instance: &MsaInstance) -> Result<bool, OracleError> {
    if instance.seqs.len() != instance.aln.len() {
        return Err(OracleError::RowCountMismatch {
            seqs: instance.seqs.len(),
            rows: instance.aln.len(),
        });
    }
    for (k, seq) in instance.seqs.iter().enumerate() {
        if seq.contains('-') {
            return Err(OracleError::GapInSequence(k));
        }
    }
    let actual = sp_score(&instance.aln)?;
    let rows_ok = instance
        .seqs
        .iter()
        .zip(&instance.aln)
        .all(|(seq, row)| consistent(seq, row));
    Ok(rows_ok && actual == instance.score)
}

/// The first reason an instance fails validation, for reporting. `None`
/// means the instance is valid.
pub fn first_failure(instance: &MsaInstance) -> Result<Option<String>, OracleError> {
    if validate(instance)? {
        return Ok(None);
    }
    for (k, (seq, row)) in instance.seqs.iter().zip(&instance.aln).enumerate() {
        if !consistent(seq, row) {
            return Ok(Some(format!(
                "sequence {k} is inconsistent with alignment row {k}"
            )));
        }
    }
    let actual = sp_score(&instance.aln)?;
    Ok(Some(format!(
        "score mismatch: claimed {}, actual {}",
        instance.score, actual
    )))
}
