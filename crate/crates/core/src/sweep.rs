//! Statistics sweeps over grids of circuit shapes.
//!
//! Each grid point is an independent build, so with the `parallel` feature
//! the points fan out across a rayon pool; results come back in grid order
//! either way.

use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::circuit::{build_validator, Alphabet, CircuitError, CircuitParams};
use crate::r1cs::CircuitStats;

/// One sweep measurement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub nseq: usize,
    pub seq_len: usize,
    pub aln_len: usize,
    pub stats: CircuitStats,
}

/// Cross product of the axis value lists, in lexicographic order.
pub fn grid_points(
    nseq: &[usize],
    seq_len: &[usize],
    aln_len: &[usize],
) -> Vec<(usize, usize, usize)> {
    let mut points = Vec::with_capacity(nseq.len() * seq_len.len() * aln_len.len());
    for &n in nseq {
        for &s in seq_len {
            for &a in aln_len {
                points.push((n, s, a));
            }
        }
    }
    points
}

fn measure(point: (usize, usize, usize), alphabet: &Alphabet) -> Result<SweepRow, CircuitError> {
    let (nseq, seq_len, aln_len) = point;
    let params = CircuitParams::new(nseq, seq_len, aln_len).with_alphabet(alphabet.clone());
    let cs = build_validator(&params)?;
    Ok(SweepRow {
        nseq,
        seq_len,
        aln_len,
        stats: cs.stats(),
    })
}

/// Builds and measures every grid point, in parallel when the `parallel`
/// feature is enabled.
#[cfg(feature = "parallel")]
pub fn sweep(
    points: &[(usize, usize, usize)],
    alphabet: &Alphabet,
) -> Result<Vec<SweepRow>, CircuitError> {
    points
        .par_iter()
        .map(|&point| measure(point, alphabet))
        .collect()
}

/// Builds and measures every grid point.
#[cfg(not(feature = "parallel"))]
pub fn sweep(
    points: &[(usize, usize, usize)],
    alphabet: &Alphabet,
) -> Result<Vec<SweepRow>, CircuitError> {
    sweep_sequential(points, alphabet)
}

/// Sequential sweep; the fallback implementation and the benchmark baseline.
pub fn sweep_sequential(
    points: &[(usize, usize, usize)],
    alphabet: &Alphabet,
) -> Result<Vec<SweepRow>, CircuitError> {
    points
        .iter()
        .map(|&point| measure(point, alphabet))
        .collect()
}
