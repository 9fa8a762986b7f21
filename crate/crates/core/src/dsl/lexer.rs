use super::ParseError;
use crate::error::Span;
use crate::model::is_ident_byte;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    /// `:name`, colon included.
    Rel(String),
    Int(i64),
    Float(f64),
    Str(String),
    ItemVar,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Dot,
    DotDot,
    Bang,
    Eq,
    Plus,
    Minus,
    Star,
    Semi,
    Newline,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Rel(s) => format!("relation `{s}`"),
            Tok::Int(i) => format!("number `{i}`"),
            Tok::Float(f) => format!("number `{f:?}`"),
            Tok::Str(_) => "string".into(),
            Tok::ItemVar => "`%item`".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", punct(t)),
        }
    }
}

fn punct(t: &Tok) -> &'static str {
    match t {
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LBrack => "[",
        Tok::RBrack => "]",
        Tok::LBrace => "{",
        Tok::RBrace => "}",
        Tok::Comma => ",",
        Tok::Dot => ".",
        Tok::DotDot => "..",
        Tok::Bang => "!",
        Tok::Eq => "=",
        Tok::Plus => "+",
        Tok::Minus => "-",
        Tok::Star => "*",
        Tok::Semi => ";",
        _ => "?",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, message: String| ParseError {
        span: Span { line, col, end_line: line, end_col: col + 1 },
        message,
        expected: Vec::new(),
    };
    while i < b.len() {
        let c = b[i];
        let (sl, sc) = (line, col);
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\r' => {
                i += 1;
                col += 1;
                continue;
            }
            b'#' => {
                while i < b.len() && b[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            b'\n' => {
                i += 1;
                line += 1;
                col = 1;
                out.push(Token { tok: Tok::Newline, span: Span { line: sl, col: sc, end_line: sl, end_col: sc + 1 } });
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBrack,
            b']' => Tok::RBrack,
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b',' => Tok::Comma,
            b'!' => Tok::Bang,
            b'=' => Tok::Eq,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b';' => Tok::Semi,
            b'.' if b.get(i + 1) == Some(&b'.') => {
                i += 1;
                Tok::DotDot
            }
            b'.' => Tok::Dot,
            b'%' => {
                if src[i..].starts_with("%item") && !b.get(i + 5).is_some_and(|&x| is_ident_byte(x)) {
                    i += 4;
                    Tok::ItemVar
                } else {
                    return Err(err(sl, sc, "expected `%item`".into()));
                }
            }
            b':' => {
                let mut j = i + 1;
                while j < b.len() && is_ident_byte(b[j]) {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(err(sl, sc, "expected a relation name after `:`".into()));
                }
                let t = Tok::Rel(src[i..j].to_string());
                i = j - 1;
                t
            }
            b'"' => {
                let mut s = String::new();
                let mut j = i + 1;
                let mut chars = src[j..].char_indices();
                loop {
                    match chars.next() {
                        None => return Err(err(sl, sc, "unterminated string".into())),
                        Some((k, '"')) => {
                            j += k;
                            break;
                        }
                        Some((_, '\\')) => match chars.next() {
                            Some((_, '"')) => s.push('"'),
                            Some((_, '\\')) => s.push('\\'),
                            Some((_, 'n')) => s.push('\n'),
                            Some((_, 't')) => s.push('\t'),
                            _ => return Err(err(sl, sc, "bad escape in string".into())),
                        },
                        Some((_, '\n')) => return Err(err(sl, sc, "newline in string".into())),
                        Some((_, ch)) => s.push(ch),
                    }
                }
                i = j;
                Tok::Str(s)
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < b.len() && b[j].is_ascii_digit() {
                    j += 1;
                }
                let mut float = false;
                if j + 1 < b.len() && b[j] == b'.' && b[j + 1].is_ascii_digit() {
                    float = true;
                    j += 1;
                    while j < b.len() && b[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                if j < b.len() && (b[j] == b'e' || b[j] == b'E') {
                    let mut k = j + 1;
                    if k < b.len() && (b[k] == b'+' || b[k] == b'-') {
                        k += 1;
                    }
                    if k < b.len() && b[k].is_ascii_digit() {
                        float = true;
                        while k < b.len() && b[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                let text = &src[i..j];
                let t = if float {
                    Tok::Float(text.parse().map_err(|_| err(sl, sc, format!("bad number {text}")))?)
                } else {
                    Tok::Int(text.parse().map_err(|_| err(sl, sc, format!("integer {text} out of range")))?)
                };
                i = j - 1;
                t
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut j = i;
                while j < b.len() && is_ident_byte(b[j]) {
                    j += 1;
                }
                let t = Tok::Ident(src[i..j].to_string());
                i = j - 1;
                t
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(err(sl, sc, format!("unexpected character {ch:?}")));
            }
        };
        i += 1;
        let width = src[start..i].chars().count();
        col += width;
        out.push(Token { tok, span: Span { line: sl, col: sc, end_line: sl, end_col: sc + width } });
    }
    out.push(Token { tok: Tok::Eof, span: Span { line, col, end_line: line, end_col: col } });
    Ok(out)
}
