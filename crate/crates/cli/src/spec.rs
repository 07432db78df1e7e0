//! Word specifications on the command line: `fib:m=<int>`, `S^<n>`, `L^<n>` or a
//! literal letter string such as `SLLSL`.

use std::fmt;

use deltachain::substitution::fibonacci_word;
use deltachain::{CellKind, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Zero-based character position of the offending input.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (at character {})", self.message, self.position)
    }
}

impl std::error::Error for ParseError {}

fn error(position: usize, message: impl Into<String>) -> ParseError {
    ParseError { position, message: message.into() }
}

/// Parse a positive integer starting at character offset `offset` of the full spec.
fn positive(digits: &str, offset: usize) -> Result<usize, ParseError> {
    if digits.is_empty() {
        return Err(error(offset, "expected a positive integer"));
    }
    if let Some(pos) = digits.chars().position(|c| !c.is_ascii_digit()) {
        return Err(error(offset + pos, "expected a digit"));
    }
    match digits.parse::<usize>() {
        Ok(0) => Err(error(offset, "count must be at least 1")),
        Ok(n) => Ok(n),
        Err(_) => Err(error(offset, "integer out of range")),
    }
}

pub fn parse_word_spec(text: &str) -> Result<Word, ParseError> {
    if text.is_empty() {
        return Err(error(0, "empty word specification"));
    }
    if let Some(rest) = text.strip_prefix("fib:") {
        let Some(digits) = rest.strip_prefix("m=") else {
            return Err(error(4, "expected `m=` after `fib:`"));
        };
        let m = positive(digits, 6)?;
        return fibonacci_word(m).map_err(|e| error(6, e.to_string()));
    }
    if let Some((letter, count)) = text.split_once('^') {
        let kind = match letter {
            "S" => CellKind::S,
            "L" => CellKind::L,
            _ => return Err(error(0, "a repeat needs a single letter S or L before `^`")),
        };
        let n = positive(count, 2)?;
        return Ok(Word::repeat(kind, n));
    }
    text.parse::<Word>()
        .map_err(|e| error(e.position, format!("unexpected character {:?}", e.found)))
}
