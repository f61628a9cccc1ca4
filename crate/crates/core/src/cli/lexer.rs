//! Tokens of the surface syntaxes, with source positions.

use std::fmt;

use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u32),
    /// One of the punctuation symbols, multi-character ones included.
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

// longest first
const SYMBOLS: &[&str] = &[
    "<->", "(|", "|)", "[]", "<=", "|", "'", "<", ">", ".", "(", ")", "\\", ":", ",", "!", "{", "}", "^", "+", "-",
    "@", "*", "?",
];

/// Splits `src` into tokens. `#` starts a comment running to the end of the
/// line. Lines and columns count from 1.
pub fn lex(src: &str, first_line: usize) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let line_no = first_line + i;
        let bytes = line.as_bytes();
        let mut j = 0;
        while j < bytes.len() {
            let c = bytes[j];
            let col = j + 1;
            if c == b'#' {
                break;
            }
            if c.is_ascii_whitespace() {
                j += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = j;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let n = line[start..j]
                    .parse()
                    .map_err(|_| ParseError::new(line_no, col, format!("integer `{}` out of range", &line[start..j])))?;
                out.push(Spanned { tok: Tok::Int(n), line: line_no, col });
                continue;
            }
            if c.is_ascii_alphabetic() || c == b'_' {
                let start = j;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                out.push(Spanned { tok: Tok::Ident(line[start..j].to_string()), line: line_no, col });
                continue;
            }
            match SYMBOLS.iter().find(|s| line[j..].starts_with(**s)) {
                Some(s) => {
                    out.push(Spanned { tok: Tok::Sym(s), line: line_no, col });
                    j += s.len();
                }
                None => {
                    let ch = line[j..].chars().next().unwrap_or('?');
                    return Err(ParseError::new(line_no, col, format!("unexpected character `{ch}`")));
                }
            }
        }
    }
    Ok(out)
}
