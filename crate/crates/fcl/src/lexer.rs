//! Tokenizer for FCL source. Keywords are case-insensitive; `//` starts a
//! line comment.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Token {
    Ident(String),
    Number(f64),
    LParen,
    RParen,
    Comma,
    Semicolon,
    Colon,
    Assign, // :=
    DotDot, // ..
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::Number(n) => write!(f, "number {n}"),
            Token::LParen => write!(f, "`(`"),
            Token::RParen => write!(f, "`)`"),
            Token::Comma => write!(f, "`,`"),
            Token::Semicolon => write!(f, "`;`"),
            Token::Colon => write!(f, "`:`"),
            Token::Assign => write!(f, "`:=`"),
            Token::DotDot => write!(f, "`..`"),
            Token::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spanned {
    pub token: Token,
    pub line: usize,
    pub col: usize,
}

/// Lexer error, reported with 1-based line and column.
#[derive(Debug, Clone, PartialEq)]
pub struct LexError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

pub fn tokenize(src: &str) -> Result<Vec<Spanned>, LexError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let mut line = 1usize;
    let mut col = 1usize;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if let Some(ch) = c {
                if ch == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '/' => {
                bump!();
                if chars.peek() == Some(&'/') {
                    while let Some(&n) = chars.peek() {
                        if n == '\n' {
                            break;
                        }
                        bump!();
                    }
                } else {
                    return Err(LexError {
                        line: tline,
                        col: tcol,
                        message: "unexpected `/` (comments start with `//`)".into(),
                    });
                }
            }
            '(' => {
                bump!();
                out.push(Spanned { token: Token::LParen, line: tline, col: tcol });
            }
            ')' => {
                bump!();
                out.push(Spanned { token: Token::RParen, line: tline, col: tcol });
            }
            ',' => {
                bump!();
                out.push(Spanned { token: Token::Comma, line: tline, col: tcol });
            }
            ';' => {
                bump!();
                out.push(Spanned { token: Token::Semicolon, line: tline, col: tcol });
            }
            ':' => {
                bump!();
                if chars.peek() == Some(&'=') {
                    bump!();
                    out.push(Spanned { token: Token::Assign, line: tline, col: tcol });
                } else {
                    out.push(Spanned { token: Token::Colon, line: tline, col: tcol });
                }
            }
            '.' => {
                bump!();
                if chars.peek() == Some(&'.') {
                    bump!();
                    out.push(Spanned { token: Token::DotDot, line: tline, col: tcol });
                } else {
                    return Err(LexError {
                        line: tline,
                        col: tcol,
                        message: "unexpected `.`".into(),
                    });
                }
            }
            '-' | '+' => {
                bump!();
                let number = lex_number(&mut chars, c == '-');
                match number {
                    Some(n) => {
                        // advance col by consumed digits — lex_number tracked below
                        col += n.1;
                        out.push(Spanned { token: Token::Number(n.0), line: tline, col: tcol });
                    }
                    None => {
                        return Err(LexError {
                            line: tline,
                            col: tcol,
                            message: format!("unexpected `{c}`"),
                        })
                    }
                }
            }
            '0'..='9' => {
                let n = lex_number(&mut chars, false).expect("digit start");
                col += n.1;
                out.push(Spanned { token: Token::Number(n.0), line: tline, col: tcol });
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&n) = chars.peek() {
                    if n.is_alphanumeric() || n == '_' {
                        ident.push(n);
                        bump!();
                    } else {
                        break;
                    }
                }
                out.push(Spanned { token: Token::Ident(ident), line: tline, col: tcol });
            }
            other => {
                return Err(LexError {
                    line: tline,
                    col: tcol,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push(Spanned { token: Token::Eof, line, col });
    Ok(out)
}

/// Lexes the digits of a number whose sign (if any) was already consumed.
/// Returns the value and how many characters were consumed.
fn lex_number(
    chars: &mut std::iter::Peekable<std::str::Chars<'_>>,
    negative: bool,
) -> Option<(f64, usize)> {
    let mut text = String::new();
    while let Some(&c) = chars.peek() {
        if c.is_ascii_digit() || c == '.' {
            // `..` is a range separator, not part of a number
            if c == '.' {
                let mut ahead = chars.clone();
                ahead.next();
                if ahead.peek() == Some(&'.') {
                    break;
                }
            }
            text.push(c);
            chars.next();
        } else if (c == 'e' || c == 'E') && !text.is_empty() {
            let mut ahead = chars.clone();
            ahead.next();
            match ahead.peek() {
                Some(&d) if d.is_ascii_digit() || d == '-' || d == '+' => {
                    text.push(c);
                    chars.next();
                    text.push(chars.next().unwrap());
                }
                _ => break,
            }
        } else {
            break;
        }
    }
    if text.is_empty() || !text.chars().any(|c| c.is_ascii_digit()) {
        return None;
    }
    let consumed = text.len();
    let value: f64 = text.parse().ok()?;
    Some((if negative { -value } else { value }, consumed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_points_and_range() {
        let toks = tokenize("TERM a := (0, 1) (5.5, 0);\nRANGE := (-0.5 .. 0.5);").unwrap();
        let kinds: Vec<&Token> = toks.iter().map(|s| &s.token).collect();
        assert!(kinds.contains(&&Token::DotDot));
        assert!(kinds.contains(&&Token::Number(-0.5)));
        assert!(kinds.contains(&&Token::Number(5.5)));
    }

    #[test]
    fn comment_runs_to_end_of_line() {
        let toks = tokenize("a // comment ; ( )\nb").unwrap();
        assert_eq!(toks.len(), 3); // a, b, eof
    }

    #[test]
    fn reports_position() {
        let err = tokenize("abc\n  $").unwrap_err();
        assert_eq!((err.line, err.col), (2, 3));
    }
}
