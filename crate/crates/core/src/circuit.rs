//! The alignment validator circuit.
//!
//! Two subcircuits feed one output bit:
//!
//! - **Score consistency**: every alignment column of every unordered row
//!   pair is scored (+1 match, -1 mismatch, -1 any gap pairing) by a
//!   nine-constraint comparator block; the running sums are pure linear
//!   expressions, and a final equality gadget compares the total against the
//!   claimed score input.
//! - **Sequence consistency**: per sequence, a grid of router cells moves an
//!   enable token through (sequence position, alignment column) space —
//!   southeast on a letter match, east over an alignment gap, south once the
//!   sequence is exhausted — with a drain row that consumes trailing gap
//!   columns and a boundary column that requires leftover sequence cells to
//!   be padding. The token reaching the corner cell proves the row strips to
//!   its sequence.
//!
//! Cell placement, the OR-merge of incoming edges, the boundary column, and
//! the acceptance cell are mirrored one-for-one by [`crate::oracle::grid_accepts`],
//! which is the executable reference for this wiring.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::FieldElement;
use crate::gadgets::{and, and_fold, is_equal, not, or_fold};
use crate::r1cs::{CircuitBuilder, ConstraintSystem, InputMap, Lc};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("invalid circuit parameters: {0}")]
    InvalidParams(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("character `{ch}` in {place} is not in the alphabet")]
    UnknownCharacter { ch: char, place: String },
    #[error("sequence {index} has length {len}, exceeding seq_len {bound}")]
    SequenceTooLong {
        index: usize,
        len: usize,
        bound: usize,
    },
    #[error("sequence {0} contains a gap character; sequences must be gap-free")]
    GapInSequence(usize),
    #[error("alignment row {index} has length {len}, expected exactly {want}")]
    RowLength {
        index: usize,
        len: usize,
        want: usize,
    },
    #[error(
        "instance has {seqs} sequences and {rows} alignment rows; circuit expects {want} of each"
    )]
    ShapeMismatch {
        seqs: usize,
        rows: usize,
        want: usize,
    },
}

/// Letter-to-code table. The gap `-` is always code 0, which doubles as the
/// padding value; letter codes are distinct, nonzero, and below 256.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    codes: BTreeMap<char, u8>,
}

impl Alphabet {
    /// DNA nucleotides: A=1, C=2, G=3, T=4.
    pub fn dna() -> Self {
        Alphabet::from_letters("ACGT").unwrap()
    }

    /// The 20 standard amino acids in alphabetical order, codes 1..=20.
    pub fn protein() -> Self {
        Alphabet::from_letters("ACDEFGHIKLMNPQRSTVWY").unwrap()
    }

    /// Builds an alphabet from a letter list; codes are assigned 1, 2, ... in
    /// order. Rejects `-`, duplicates, and more than 255 letters.
    pub fn from_letters(letters: &str) -> Result<Self, CircuitError> {
        let mut codes = BTreeMap::new();
        let mut next = 1u16;
        for ch in letters.chars() {
            if ch == '-' {
                return Err(CircuitError::InvalidAlphabet(
                    "`-` is reserved for the gap".into(),
                ));
            }
            if ch.is_whitespace() {
                continue;
            }
            if next > 255 {
                return Err(CircuitError::InvalidAlphabet(
                    "more than 255 letters".into(),
                ));
            }
            if codes.insert(ch, next as u8).is_some() {
                return Err(CircuitError::InvalidAlphabet(format!(
                    "duplicate letter `{ch}`"
                )));
            }
            next += 1;
        }
        if codes.is_empty() {
            return Err(CircuitError::InvalidAlphabet("no letters".into()));
        }
        Ok(Alphabet { codes })
    }

    /// Code for a character: 0 for the gap, the table code for letters.
    pub fn code(&self, ch: char) -> Option<u8> {
        if ch == '-' {
            Some(0)
        } else {
            self.codes.get(&ch).copied()
        }
    }

    pub fn letters(&self) -> Vec<char> {
        self.codes.keys().copied().collect()
    }
}

/// Which instance parts bind the proof publicly. The alignment is always
/// private; sequences and the score default to public.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisibilityMask {
    pub seq_public: Vec<bool>,
    pub score_public: bool,
}

impl VisibilityMask {
    pub fn all_public(nseq: usize) -> Self {
        VisibilityMask {
            seq_public: vec![true; nseq],
            score_public: true,
        }
    }
}

/// Shape of one validator instance: sequence count, padded sequence length,
/// alignment length, alphabet, and the public/private mask.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitParams {
    pub nseq: usize,
    pub seq_len: usize,
    pub aln_len: usize,
    pub alphabet: Alphabet,
    pub visibility: VisibilityMask,
}

impl CircuitParams {
    pub fn new(nseq: usize, seq_len: usize, aln_len: usize) -> Self {
        CircuitParams {
            nseq,
            seq_len,
            aln_len,
            alphabet: Alphabet::dna(),
            visibility: VisibilityMask::all_public(nseq),
        }
    }

    pub fn with_alphabet(mut self, alphabet: Alphabet) -> Self {
        self.alphabet = alphabet;
        self
    }

    pub fn with_visibility(mut self, visibility: VisibilityMask) -> Self {
        self.visibility = visibility;
        self
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        if self.nseq < 2 {
            return Err(CircuitError::InvalidParams(format!(
                "nseq must be at least 2, got {}",
                self.nseq
            )));
        }
        if self.seq_len < 1 || self.aln_len < 1 {
            return Err(CircuitError::InvalidParams(
                "seq_len and aln_len must be at least 1".into(),
            ));
        }
        if self.visibility.seq_public.len() != self.nseq {
            return Err(CircuitError::InvalidParams(format!(
                "visibility mask covers {} sequences, circuit has {}",
                self.visibility.seq_public.len(),
                self.nseq
            )));
        }
        Ok(())
    }

    /// Largest achievable |score|: every column of every pair scoring one
    /// point.
    pub fn max_score_magnitude(&self) -> u64 {
        (pair_count(self.nseq) * self.aln_len) as u64
    }
}

/// The prover's full input: gap-free sequences, alignment rows of exactly
/// the alignment length, and the claimed sum-of-pairs score.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MsaInstance {
    #[serde(rename = "seq")]
    pub seqs: Vec<String>,
    pub aln: Vec<String>,
    pub score: i64,
}

pub fn seq_input_name(k: usize, i: usize) -> String {
    format!("seq[{k}][{i}]")
}

pub fn aln_input_name(k: usize, j: usize) -> String {
    format!("aln[{k}][{j}]")
}

pub const SCORE_INPUT_NAME: &str = "score";

fn pair_count(nseq: usize) -> usize {
    nseq * (nseq - 1) / 2
}

// ---------------------------------------------------------------------------
// Scoring subcircuit
// ---------------------------------------------------------------------------

/// Scores one alignment column pair. Output value is +1 when both codes are
/// equal and nonzero, and -1 otherwise (mismatch, one gap, or two gaps).
/// Exactly 9 non-linear constraints: 2 for the equality of the codes, 2+2+1
/// for the "any gap" disjunction, and 1 each for the two conjunctions.
pub fn column_score(b: &mut CircuitBuilder, x0: &Lc, x1: &Lc) -> Lc {
    let xeq = is_equal(b, x0, x1);
    let xneq = not(&xeq);
    let gap0 = is_equal(b, x0, &Lc::zero());
    let gap1 = is_equal(b, x1, &Lc::zero());
    let gap = crate::gadgets::or(b, &gap0, &gap1);
    let both_gap = and(b, &xeq, &gap);
    let no_gap = not(&gap);
    let eq_no_gap = and(b, &xeq, &no_gap);
    // match scores +1, mismatch -1, double gap -1
    &(&eq_no_gap - &xneq) - &both_gap
}

/// Sum of column scores over two alignment rows. The running sum is a pure
/// linear expression; no constraints beyond the per-column blocks.
pub fn pair_score(b: &mut CircuitBuilder, row_a: &[Lc], row_b: &[Lc]) -> Lc {
    assert_eq!(row_a.len(), row_b.len(), "alignment rows must align");
    let columns: Vec<Lc> = row_a
        .iter()
        .zip(row_b)
        .map(|(a, c)| column_score(b, a, c))
        .collect();
    Lc::sum(&columns)
}

/// Sum-of-pairs score over all unordered row pairs, (i, j) with i < j in
/// lexicographic order (the order fixes constraint emission, and with it the
/// statistics).
pub fn msa_score(b: &mut CircuitBuilder, aln: &[Vec<Lc>]) -> Lc {
    assert!(aln.len() >= 2, "need at least two alignment rows");
    let mut pair_sums = Vec::with_capacity(pair_count(aln.len()));
    for i in 0..aln.len() {
        for j in (i + 1)..aln.len() {
            pair_sums.push(pair_score(b, &aln[i], &aln[j]));
        }
    }
    Lc::sum(&pair_sums)
}

/// Boolean: does the claimed score equal the alignment's sum-of-pairs score?
pub fn score_check(b: &mut CircuitBuilder, aln: &[Vec<Lc>], claimed: &Lc) -> Lc {
    let total = msa_score(b, aln);
    is_equal(b, &total, claimed)
}

// ---------------------------------------------------------------------------
// Sequence-consistency subcircuit
// ---------------------------------------------------------------------------

/// Expressions produced by one router cell.
#[derive(Clone, Debug)]
pub struct RouterCell {
    pub enable: Lc,
    /// Token moves south: the sequence cell is padding.
    pub south: Lc,
    /// Token moves southeast: sequence letter and alignment cell match.
    pub southeast: Lc,
    /// Token moves east: the alignment cell is a gap, a letter remains.
    pub east: Lc,
}

/// One cell of the routing grid: compares a sequence cell `r` against an
/// alignment cell `c` and forwards the enable token to at most one neighbor.
/// 13 non-linear constraints per cell (8 from four equality tests, 5
/// products); when `enable` is the constant 1 the two constraints of its
/// equality test degrade to linear ones.
pub fn router_cell(b: &mut CircuitBuilder, enable: &Lc, r: &Lc, c: &Lc) -> RouterCell {
    let e1 = is_equal(b, enable, &Lc::one());
    let rc = is_equal(b, c, r);
    let c0 = is_equal(b, c, &Lc::zero());
    let r0 = is_equal(b, r, &Lc::zero());
    let nr0 = not(&r0);
    let letters_match = and(b, &rc, &nr0);
    let gap_column = and(b, &c0, &nr0);
    let south = and(b, &e1, &r0);
    let southeast = and(b, &e1, &letters_match);
    let east = and(b, &e1, &gap_column);
    RouterCell {
        enable: enable.clone(),
        south,
        southeast,
        east,
    }
}

/// One cell of the drain row: the sequence is spent, so the token may only
/// continue east over gap columns. 5 non-linear constraints.
pub fn drain_cell(b: &mut CircuitBuilder, enable: &Lc, c: &Lc) -> Lc {
    let e1 = is_equal(b, enable, &Lc::one());
    let c0 = is_equal(b, c, &Lc::zero());
    and(b, &e1, &c0)
}

/// A cell in the drain row or boundary column, kept for witness scanning.
#[derive(Clone, Debug)]
pub struct ChainCell {
    pub enable: Lc,
    pub out: Lc,
}

/// The full routing grid for one (sequence, alignment row) pair.
#[derive(Debug)]
pub struct SequenceGrid {
    /// Router cells, `seq_len` rows by `aln_len` columns.
    pub cells: Vec<Vec<RouterCell>>,
    /// Drain row under the router rows; `out` is the eastward token.
    pub drain: Vec<ChainCell>,
    /// Boundary column right of the router columns; `out` is the southward
    /// token, which requires the row's sequence cell to be padding.
    pub tail: Vec<ChainCell>,
    /// Token reaching the virtual corner cell: the row is consistent.
    pub accept: Lc,
}

/// Builds the grid for one sequence. The token starts at the top-left cell
/// as the constant 1; each cell's enable is the OR of its incoming edges in
/// (west, northwest, north) order; acceptance ORs the southeast edge of the
/// last router cell, the east edge of the last drain cell, and the south
/// edge of the last boundary cell.
pub fn sequence_grid(b: &mut CircuitBuilder, seq: &[Lc], aln: &[Lc]) -> SequenceGrid {
    let s_len = seq.len();
    let a_len = aln.len();
    assert!(s_len >= 1 && a_len >= 1);

    let mut cells: Vec<Vec<RouterCell>> = Vec::with_capacity(s_len);
    for i in 0..s_len {
        let mut row: Vec<RouterCell> = Vec::with_capacity(a_len);
        for j in 0..a_len {
            let enable = if i == 0 && j == 0 {
                Lc::one()
            } else {
                let mut edges = Vec::with_capacity(3);
                if j > 0 {
                    edges.push(row[j - 1].east.clone());
                }
                if i > 0 && j > 0 {
                    edges.push(cells[i - 1][j - 1].southeast.clone());
                }
                if i > 0 {
                    edges.push(cells[i - 1][j].south.clone());
                }
                or_fold(b, &edges)
            };
            row.push(router_cell(b, &enable, &seq[i], &aln[j]));
        }
        cells.push(row);
    }

    let mut drain: Vec<ChainCell> = Vec::with_capacity(a_len);
    for j in 0..a_len {
        let mut edges = Vec::with_capacity(3);
        if j > 0 {
            edges.push(drain[j - 1].out.clone());
        }
        if j > 0 {
            edges.push(cells[s_len - 1][j - 1].southeast.clone());
        }
        edges.push(cells[s_len - 1][j].south.clone());
        let enable = or_fold(b, &edges);
        let out = drain_cell(b, &enable, &aln[j]);
        drain.push(ChainCell { enable, out });
    }

    let mut tail: Vec<ChainCell> = Vec::with_capacity(s_len);
    for i in 0..s_len {
        let mut edges = Vec::with_capacity(3);
        edges.push(cells[i][a_len - 1].east.clone());
        if i > 0 {
            edges.push(cells[i - 1][a_len - 1].southeast.clone());
        }
        if i > 0 {
            edges.push(tail[i - 1].out.clone());
        }
        let enable = or_fold(b, &edges);
        let padding = is_equal(b, &seq[i], &Lc::zero());
        let out = and(b, &enable, &padding);
        tail.push(ChainCell { enable, out });
    }

    let accept = or_fold(
        b,
        &[
            drain[a_len - 1].out.clone(),
            cells[s_len - 1][a_len - 1].southeast.clone(),
            tail[s_len - 1].out.clone(),
        ],
    );

    SequenceGrid {
        cells,
        drain,
        tail,
        accept,
    }
}

/// Boolean: every alignment row strips to its sequence. AND-fold of the
/// per-sequence grid acceptance bits.
pub fn alignment_consistency(b: &mut CircuitBuilder, seq: &[Vec<Lc>], aln: &[Vec<Lc>]) -> Lc {
    assert_eq!(seq.len(), aln.len());
    let accepts: Vec<Lc> = seq
        .iter()
        .zip(aln)
        .map(|(s, a)| sequence_grid(b, s, a).accept)
        .collect();
    and_fold(b, &accepts)
}

// ---------------------------------------------------------------------------
// The validator
// ---------------------------------------------------------------------------

/// Synthesizes the full validator for the given shape. Inputs are the
/// sequences (visibility per mask), the alignment (always private), and the
/// claimed score (visibility per mask); the only output is the validity bit.
pub fn build_validator(params: &CircuitParams) -> Result<ConstraintSystem, CircuitError> {
    params.validate()?;
    let mut b = CircuitBuilder::new();

    let seq: Vec<Vec<Lc>> = (0..params.nseq)
        .map(|k| {
            (0..params.seq_len)
                .map(|i| {
                    Lc::signal(b.alloc_input(seq_input_name(k, i), params.visibility.seq_public[k]))
                })
                .collect()
        })
        .collect();
    let aln: Vec<Vec<Lc>> = (0..params.nseq)
        .map(|k| {
            (0..params.aln_len)
                .map(|j| Lc::signal(b.alloc_input(aln_input_name(k, j), false)))
                .collect()
        })
        .collect();
    let score = Lc::signal(b.alloc_input(SCORE_INPUT_NAME, params.visibility.score_public));

    let seq_ok = alignment_consistency(&mut b, &seq, &aln);
    let score_ok = score_check(&mut b, &aln, &score);
    let valid = and(&mut b, &score_ok, &seq_ok);
    let output = valid
        .as_single_signal()
        .expect("conjunction output is a product wire");
    b.mark_output(output);
    Ok(b.finalize())
}

/// Closed-form non-linear constraint count of [`build_validator`], exact by
/// construction. With N sequences, padded sequence length S, alignment
/// length A, and P = N(N-1)/2 row pairs:
///
/// ```text
/// 9·P·A + 15·N·S·A + 3·N·S + 5·N·A - N + 2
/// ```
///
/// The census behind it, per sequence: 13·S·A router cells,
/// 2·(S-1)·(A-1) interior enable merges, 5·A drain cells plus 2·(A-1)
/// drain-row merges, 3·S boundary cells (one equality test and one
/// conjunction each) plus 2·(S-1) boundary merges, 2 acceptance merges,
/// and -2 because the top-left enable is the constant 1, which degrades
/// that cell's enable-equality constraints to linear. That sums to
/// `15·S·A + 3·S + 5·A - 2` per sequence. The score side adds `9·P·A + 2`
/// (per-column blocks plus the final equality), and folding the output
/// bit costs `N - 1 + 1` conjunctions.
pub fn predicted_nonlinear_constraints(params: &CircuitParams) -> usize {
    let n = params.nseq;
    let s = params.seq_len;
    let a = params.aln_len;
    9 * pair_count(n) * a + 15 * n * s * a + 3 * n * s + 5 * n * a - n + 2
}

// ---------------------------------------------------------------------------
// Instance encoding
// ---------------------------------------------------------------------------

/// Encodes a plaintext instance as the named input assignment the circuit
/// expects: sequences zero-padded to the sequence length, alignment cells
/// with gaps as 0, and the score in signed encoding.
pub fn encode_instance(
    params: &CircuitParams,
    instance: &MsaInstance,
) -> Result<InputMap, CircuitError> {
    params.validate()?;
    if instance.seqs.len() != params.nseq || instance.aln.len() != params.nseq {
        return Err(CircuitError::ShapeMismatch {
            seqs: instance.seqs.len(),
            rows: instance.aln.len(),
            want: params.nseq,
        });
    }
    let mut inputs = InputMap::new();
    for (k, seq) in instance.seqs.iter().enumerate() {
        let chars: Vec<char> = seq.chars().collect();
        if chars.len() > params.seq_len {
            return Err(CircuitError::SequenceTooLong {
                index: k,
                len: chars.len(),
                bound: params.seq_len,
            });
        }
        if chars.contains(&'-') {
            return Err(CircuitError::GapInSequence(k));
        }
        for i in 0..params.seq_len {
            let code = match chars.get(i) {
                Some(&ch) => params
                    .alphabet
                    .code(ch)
                    .ok_or(CircuitError::UnknownCharacter {
                        ch,
                        place: format!("sequence {k}"),
                    })?,
                None => 0,
            };
            inputs.insert(seq_input_name(k, i), FieldElement::from_u64(code as u64));
        }
    }
    for (k, row) in instance.aln.iter().enumerate() {
        let chars: Vec<char> = row.chars().collect();
        if chars.len() != params.aln_len {
            return Err(CircuitError::RowLength {
                index: k,
                len: chars.len(),
                want: params.aln_len,
            });
        }
        for (j, &ch) in chars.iter().enumerate() {
            let code = params
                .alphabet
                .code(ch)
                .ok_or(CircuitError::UnknownCharacter {
                    ch,
                    place: format!("alignment row {k}"),
                })?;
            inputs.insert(aln_input_name(k, j), FieldElement::from_u64(code as u64));
        }
    }
    inputs.insert(
        SCORE_INPUT_NAME.into(),
        FieldElement::encode_signed(instance.score),
    );
    Ok(inputs)
}
