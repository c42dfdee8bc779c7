//! Word grammar:
//!
//! ```text
//! word   := term*
//! term   := letter power?
//! letter := "X" | "B" digits?
//! power  := "^" digits
//! ```
//!
//! Whitespace is ignored; a bare `B` means `B1`.

use super::{Letter, Word};
use crate::error::{Error, Result};

/// Parses `text` over the alphabet `{X, B1..Bk}`.
pub fn parse_word(text: &str, k: usize) -> Result<Word> {
    let terms = parse_terms(text)?;
    Word::from_factors(k, terms)
}

pub(super) fn parse_inferred(text: &str) -> Result<Word> {
    let terms = parse_terms(text)?;
    let k = terms
        .iter()
        .filter_map(|(l, _)| match l {
            Letter::B(i) => Some(*i),
            Letter::X => None,
        })
        .max()
        .unwrap_or(1)
        .max(1);
    Word::from_factors(k, terms)
}

fn parse_terms(text: &str) -> Result<Vec<(Letter, u32)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut pos = 0;
    let mut out = Vec::new();

    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].1.is_whitespace() {
            *pos += 1;
        }
    };
    let digits = |pos: &mut usize| -> Option<(usize, String)> {
        let start = *pos;
        let mut s = String::new();
        while *pos < chars.len() && chars[*pos].1.is_ascii_digit() {
            s.push(chars[*pos].1);
            *pos += 1;
        }
        (!s.is_empty()).then(|| (chars[start].0, s))
    };
    let offset = |pos: usize| chars.get(pos).map_or(text.len(), |c| c.0);

    loop {
        skip_ws(&mut pos);
        if pos == chars.len() {
            break;
        }
        let letter = match chars[pos].1 {
            'X' => {
                pos += 1;
                Letter::X
            }
            'B' => {
                pos += 1;
                match digits(&mut pos) {
                    Some((at, d)) => Letter::B(d.parse().map_err(|_| Error::Syntax {
                        pos: at,
                        msg: format!("letter index `{d}` too large"),
                    })?),
                    None => Letter::B(1),
                }
            }
            c => {
                return Err(Error::Syntax {
                    pos: offset(pos),
                    msg: format!("expected `X` or `B`, found `{c}`"),
                })
            }
        };
        skip_ws(&mut pos);
        let mut exp = 1u32;
        if pos < chars.len() && chars[pos].1 == '^' {
            pos += 1;
            skip_ws(&mut pos);
            let at = offset(pos);
            let (_, d) = digits(&mut pos).ok_or_else(|| Error::Syntax {
                pos: at,
                msg: "expected exponent digits after `^`".into(),
            })?;
            exp = d.parse().map_err(|_| Error::Syntax {
                pos: at,
                msg: format!("exponent `{d}` too large"),
            })?;
        }
        out.push((letter, exp));
    }
    Ok(out)
}
