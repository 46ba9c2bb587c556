//! Deterministic sample-instance generation for tests, benchmarks, and demos.
//!
//! Instances are built the cheap way — random sequences, gaps sprinkled into
//! random column positions, score recomputed from the rows — which is enough
//! to exercise the validator. This is not an aligner and makes no attempt to
//! produce good alignments.

use crate::circuit::MsaInstance;
use crate::oracle;

/// SplitMix64: tiny, seedable, good enough for test data. Keeping the
/// generator in-crate keeps sample output stable across dependency bumps.
#[derive(Clone, Debug)]
pub struct SampleRng {
    state: u64,
}

impl SampleRng {
    pub fn new(seed: u64) -> Self {
        SampleRng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..n`. `n` must be nonzero.
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len() as u64) as usize]
    }
}

/// A random gap-free sequence over `letters` with length in `0..=max_len`
/// (biased toward non-trivial lengths; empty sequences still occur).
pub fn random_sequence(rng: &mut SampleRng, letters: &[char], max_len: usize) -> String {
    let len = match rng.below(8) {
        0 => rng.below(max_len as u64 + 1) as usize,
        _ => max_len.min(1 + rng.below(max_len.max(1) as u64) as usize),
    };
    (0..len).map(|_| *rng.pick(letters)).collect()
}

/// Spreads a sequence's letters in order over `aln_len` columns, filling the
/// rest with gaps. Returns `None` when the sequence does not fit.
pub fn random_alignment_row(rng: &mut SampleRng, seq: &str, aln_len: usize) -> Option<String> {
    let chars: Vec<char> = seq.chars().collect();
    if chars.len() > aln_len {
        return None;
    }
    // choose chars.len() distinct column positions, sorted
    let mut positions: Vec<usize> = (0..aln_len).collect();
    for i in (1..positions.len()).rev() {
        positions.swap(i, rng.below(i as u64 + 1) as usize);
    }
    let mut chosen: Vec<usize> = positions.into_iter().take(chars.len()).collect();
    chosen.sort_unstable();
    let mut row = vec!['-'; aln_len];
    for (&pos, &ch) in chosen.iter().zip(chars.iter()) {
        row[pos] = ch;
    }
    Some(row.into_iter().collect())
}

/// A valid instance for the given shape: random sequences, random consistent
/// alignment rows, score recomputed from the rows.
pub fn random_valid_instance(
    rng: &mut SampleRng,
    nseq: usize,
    seq_len: usize,
    aln_len: usize,
    letters: &[char],
) -> MsaInstance {
    assert!(nseq >= 2 && seq_len <= aln_len);
    let seqs: Vec<String> = (0..nseq)
        .map(|_| random_sequence(rng, letters, seq_len))
        .collect();
    let aln: Vec<String> = seqs
        .iter()
        .map(|seq| random_alignment_row(rng, seq, aln_len).expect("seq fits by construction"))
        .collect();
    let score = oracle::sp_score(&aln).expect("well-formed by construction");
    MsaInstance { seqs, aln, score }
}

/// Ways to corrupt a valid instance. The corrupted instance stays
/// well-formed (same shape, same alphabet); whether it still validates is
/// for the oracle to decide.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corruption {
    /// Claim a score off by a small nonzero delta.
    WrongScore,
    /// Substitute one alignment cell (letter-to-letter, letter-to-gap, or
    /// gap-to-letter).
    MutateAlignmentCell,
    /// Swap two alignment rows while keeping the sequences in place.
    ShuffleRows,
}

pub const ALL_CORRUPTIONS: [Corruption; 3] = [
    Corruption::WrongScore,
    Corruption::MutateAlignmentCell,
    Corruption::ShuffleRows,
];

/// Applies one corruption. Returns the corrupted instance.
pub fn corrupt(
    rng: &mut SampleRng,
    instance: &MsaInstance,
    kind: Corruption,
    letters: &[char],
) -> MsaInstance {
    let mut out = instance.clone();
    match kind {
        Corruption::WrongScore => {
            let delta = 1 + rng.below(5) as i64;
            out.score += if rng.below(2) == 0 { delta } else { -delta };
        }
        Corruption::MutateAlignmentCell => {
            let row = rng.below(out.aln.len() as u64) as usize;
            let mut chars: Vec<char> = out.aln[row].chars().collect();
            let col = rng.below(chars.len() as u64) as usize;
            let old = chars[col];
            let mut replacement = *rng.pick(letters);
            if replacement == old {
                replacement = if old == '-' { letters[0] } else { '-' };
            }
            chars[col] = replacement;
            out.aln[row] = chars.into_iter().collect();
        }
        Corruption::ShuffleRows => {
            let i = rng.below(out.aln.len() as u64) as usize;
            let mut j = rng.below(out.aln.len() as u64) as usize;
            if i == j {
                j = (j + 1) % out.aln.len();
            }
            out.aln.swap(i, j);
        }
    }
    out
}

pub const DNA_LETTERS: [char; 4] = ['A', 'C', 'G', 'T'];
