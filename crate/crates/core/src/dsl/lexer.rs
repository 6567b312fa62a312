use super::{DslError, DslErrorKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Int(i64),
    Ident(String),
    Sym(&'static str),
    Newline,
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// Whitespace or a line start separates this token from the previous.
    pub spaced: bool,
}

const SYMBOLS: &[&str] = &[
    "==", "+", "-", "*", "/", "^", "(", ")", "[", "]", "{", "}", ",", ";", ":", "=", "@",
];

/// Splits source text into tokens. Newlines inside brackets are dropped so
/// that expressions may span several lines. The name after a leading
/// `suite` or `assert` may contain `-` and `.`.
pub fn lex(src: &str) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out: Vec<Token> = Vec::new();
    let (mut k, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut depth = 0usize;
    let mut spaced = true;
    let err = |line, col, message: String| DslError {
        kind: DslErrorKind::Lexical,
        line,
        col,
        message,
    };
    while k < chars.len() {
        let c = chars[k];
        if c == '\n' {
            if depth == 0 && !matches!(out.last(), Some(Token { tok: Tok::Newline, .. }) | None) {
                out.push(Token {
                    tok: Tok::Newline,
                    line,
                    col,
                    spaced,
                });
            }
            k += 1;
            line += 1;
            col = 1;
            spaced = true;
            continue;
        }
        if c.is_whitespace() {
            k += 1;
            col += 1;
            spaced = true;
            continue;
        }
        if c == '#' {
            while k < chars.len() && chars[k] != '\n' {
                k += 1;
                col += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        let raw_name = matches!(
            out.last(),
            Some(Token { tok: Tok::Ident(s), .. }) if s == "suite" || s == "assert"
        ) && matches!(
            out.len().checked_sub(2).map(|i| &out[i].tok),
            None | Some(Tok::Newline)
        );
        let tok = if raw_name && !c.is_ascii_digit() && (c.is_alphanumeric() || c == '_') {
            let s: String = chars[k..]
                .iter()
                .take_while(|ch| ch.is_alphanumeric() || matches!(ch, '_' | '-' | '.'))
                .collect();
            k += s.chars().count();
            col += s.chars().count();
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let s: String = chars[k..].iter().take_while(|ch| ch.is_ascii_digit()).collect();
            k += s.len();
            col += s.len();
            let v = s
                .parse::<i64>()
                .map_err(|_| err(start_line, start_col, format!("integer literal {s} is too large")))?;
            Tok::Int(v)
        } else if c.is_alphabetic() || c == '_' {
            let s: String = chars[k..]
                .iter()
                .take_while(|ch| ch.is_alphanumeric() || **ch == '_')
                .collect();
            k += s.chars().count();
            col += s.chars().count();
            Tok::Ident(s)
        } else {
            let rest: String = chars[k..chars.len().min(k + 2)].iter().collect();
            let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
                return Err(err(line, col, format!("unexpected character {c:?}")));
            };
            k += sym.len();
            col += sym.len();
            match *sym {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => depth = depth.saturating_sub(1),
                _ => {}
            }
            Tok::Sym(sym)
        };
        out.push(Token {
            tok,
            line: start_line,
            col: start_col,
            spaced,
        });
        spaced = false;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
        spaced: true,
    });
    Ok(out)
}
