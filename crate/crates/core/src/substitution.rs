//! Fibonacci words and their transfer matrices.
//!
//! Two independent routes give the matrix of `W_m`: the product of cell matrices
//! in word order, and the trace-map recursion
//! `M_{m+1} = tr(M_m) M_{m-1} - M_{m-2}^{-1}`, which follows from
//! `M_{m+1} = M_{m-1} M_m` and Cayley-Hamilton.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::TransferMatrix;
use crate::params::{ChainParams, Regime, OVERFLOW_EXPONENT};
use crate::transfer::{cell_matrix, CellKind};

/// Longest Fibonacci order handed out as an explicit word (`f_24 = 46368` letters).
pub const MAX_WORD_ORDER: usize = 24;

const ENTRY_LIMIT: f64 = 1e300;

/// A finite string of S and L cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<CellKind>,
    order: Option<usize>,
}

impl Word {
    pub fn new(letters: Vec<CellKind>) -> Self {
        Self { letters, order: None }
    }

    /// `kind` repeated `n` times.
    pub fn repeat(kind: CellKind, n: usize) -> Self {
        Self::new(vec![kind; n])
    }

    pub fn letters(&self) -> &[CellKind] {
        &self.letters
    }

    /// Fibonacci order `m` when the word was built as `W_m`.
    pub fn order(&self) -> Option<usize> {
        self.order
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::new(letters)
    }

    pub fn count(&self, kind: CellKind) -> usize {
        self.letters.iter().filter(|&&k| k == kind).count()
    }

    /// Total tunnel length in units of `b`.
    pub fn total_length(&self, q: f64) -> f64 {
        self.letters.iter().map(|k| k.length_ratio(q)).sum()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in &self.letters {
            write!(f, "{}", k.letter())?;
        }
        Ok(())
    }
}

/// Parse error for a literal letter string, with the offending character position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LetterError {
    pub position: usize,
    pub found: char,
}

impl fmt::Display for LetterError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unexpected character {:?} at position {}", self.found, self.position)
    }
}

impl std::error::Error for LetterError {}

impl FromStr for Word {
    type Err = LetterError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(position, c)| match c {
                'S' => Ok(CellKind::S),
                'L' => Ok(CellKind::L),
                found => Err(LetterError { position, found }),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Word::new)
    }
}

/// Fibonacci numbers with `f_0 = 0`, `f_1 = f_2 = 1`.
pub fn fibonacci(m: usize) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..m {
        let next = a + b;
        a = b;
        b = next;
    }
    a
}

/// `W_1 = S`, `W_2 = L`, `W_{m+1} = W_{m-1} W_m`.
pub fn fibonacci_word(m: usize) -> Result<Word> {
    if m == 0 {
        return Err(Error::InvalidParams("Fibonacci order starts at 1".into()));
    }
    if m > MAX_WORD_ORDER {
        return Err(Error::OrderTooLarge { m, max: MAX_WORD_ORDER });
    }
    let mut older = vec![CellKind::S];
    let mut newer = vec![CellKind::L];
    if m == 1 {
        newer = older.clone();
    }
    for _ in 3..=m {
        let mut next = older;
        next.extend_from_slice(&newer);
        older = newer;
        newer = next;
    }
    Ok(Word { letters: newer, order: Some(m) })
}

/// `(|W_m|, #S, #L)`.
pub fn word_counts(m: usize) -> Result<(u64, u64, u64)> {
    match m {
        0 => Err(Error::InvalidParams("Fibonacci order starts at 1".into())),
        1 => Ok((1, 1, 0)),
        2 => Ok((1, 0, 1)),
        _ => Ok((fibonacci(m), fibonacci(m - 2), fibonacci(m - 1))),
    }
}

fn check_length(word: &Word, params: &ChainParams) -> Result<()> {
    if params.regime() == Regime::Bound {
        let exponent = params.beta() * word.total_length(params.q());
        if exponent > OVERFLOW_EXPONENT {
            return Err(Error::OverflowRisk { exponent, limit: OVERFLOW_EXPONENT });
        }
    }
    Ok(())
}

/// Product of the cell matrices, leftmost letter leftmost.
pub fn word_matrix(word: &Word, params: &ChainParams) -> Result<TransferMatrix> {
    check_length(word, params)?;
    let s = cell_matrix(params, CellKind::S)?;
    let l = cell_matrix(params, CellKind::L)?;
    Ok(word.letters.iter().fold(TransferMatrix::IDENTITY, |acc, k| match k {
        CellKind::S => acc * s,
        CellKind::L => acc * l,
    }))
}

/// One row of the Fibonacci recursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecursionRow {
    pub m: usize,
    pub matrix: TransferMatrix,
    pub x: Complex64,
    pub y: Complex64,
}

impl RecursionRow {
    fn new(m: usize, matrix: TransferMatrix) -> Self {
        Self { m, matrix, x: matrix.half_trace(), y: matrix.half_difference() }
    }

    /// `d = x - y`.
    pub fn d(&self) -> Complex64 {
        self.x - self.y
    }
}

fn guard(m: &TransferMatrix) -> Result<()> {
    let size = m.max_abs();
    if !size.is_finite() || size > ENTRY_LIMIT {
        return Err(Error::OverflowRisk { exponent: size.ln(), limit: ENTRY_LIMIT.ln() });
    }
    Ok(())
}

fn seeds(params: &ChainParams) -> Result<[TransferMatrix; 3]> {
    let m1 = cell_matrix(params, CellKind::S)?;
    let m2 = cell_matrix(params, CellKind::L)?;
    Ok([m1, m2, m1 * m2])
}

/// Rows `1..=m_max` of the full matrix recursion, seeded with `M_1`, `M_2` and
/// `M_3 = M_1 M_2`.
pub fn trace_map_sequence(params: &ChainParams, m_max: usize) -> Result<Vec<RecursionRow>> {
    if m_max < 3 {
        return Err(Error::InvalidParams("trace map needs m_max >= 3".into()));
    }
    let seed = seeds(params)?;
    let mut mats: Vec<TransferMatrix> = seed.to_vec();
    for k in 3..m_max {
        // M_{k+1} = tr(M_k) M_{k-1} - adj(M_{k-2})
        let (older, prev, cur) = (mats[k - 3], mats[k - 2], mats[k - 1]);
        let next = prev.scale(cur.trace());
        let older = older.adjugate();
        let next = TransferMatrix::new(
            next.a - older.a,
            next.b - older.b,
            next.c - older.c,
            next.d - older.d,
        );
        guard(&next)?;
        mats.push(next);
    }
    Ok(mats.into_iter().enumerate().map(|(i, m)| RecursionRow::new(i + 1, m)).collect())
}

/// The half-trace recursion `x_{m+1} = 2 x_m x_{m-1} - x_{m-2}` on its own.
pub fn half_trace_sequence(params: &ChainParams, m_max: usize) -> Result<Vec<Complex64>> {
    if m_max < 3 {
        return Err(Error::InvalidParams("trace map needs m_max >= 3".into()));
    }
    let seed = seeds(params)?;
    let mut xs: Vec<Complex64> = seed.iter().map(|m| m.half_trace()).collect();
    for m in 3..m_max {
        let next = 2.0 * xs[m - 1] * xs[m - 2] - xs[m - 3];
        if !next.norm().is_finite() || next.norm() > ENTRY_LIMIT {
            return Err(Error::OverflowRisk {
                exponent: next.norm().ln(),
                limit: ENTRY_LIMIT.ln(),
            });
        }
        xs.push(next);
    }
    Ok(xs)
}
