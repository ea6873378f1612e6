//! Tokens of the theory language.

use super::{Diagnostic, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Tilde,
    Dot,
    Comma,
    Colon,
    Star,
    Amp,
    Gt,
    /// `O[`
    OblOpen,
    /// `-O[`
    NegOblOpen,
    Close,
    Arrow(crate::theory::Arrow),
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Tilde => "`~`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Star => "`*`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Gt => "`>`".into(),
            Tok::OblOpen => "`O[`".into(),
            Tok::NegOblOpen => "`-O[`".into(),
            Tok::Close => "`]`".into(),
            Tok::Arrow(a) => format!("`{}`", a.token()),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl Cursor<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn bump(&mut self, n: usize) {
        for ch in self.src[self.pos..self.pos + n].chars() {
            if ch == '\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
        self.pos += n;
    }

    fn span_from(&self, start: usize, line: usize, col: usize) -> SourceSpan {
        SourceSpan {
            line,
            column: col,
            start,
            end: self.pos,
        }
    }
}

/// Splits `src` into tokens. Unknown characters become diagnostics and
/// are skipped.
pub(crate) fn lex(src: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    use crate::theory::Arrow::*;
    let mut c = Cursor {
        src,
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut toks = Vec::new();
    let mut diags = Vec::new();
    while let Some(ch) = c.rest().chars().next() {
        if ch.is_whitespace() {
            c.bump(ch.len_utf8());
            continue;
        }
        if ch == '#' {
            let n = c.rest().find('\n').unwrap_or(c.rest().len());
            c.bump(n);
            continue;
        }
        let (start, line, col) = (c.pos, c.line, c.col);
        let rest = c.rest();
        let fixed = [
            ("=O>", Tok::Arrow(DefeasiblePrescriptive)),
            ("~O>", Tok::Arrow(DefeaterPrescriptive)),
            ("-O[", Tok::NegOblOpen),
            ("=>", Tok::Arrow(DefeasibleConstitutive)),
            ("~>", Tok::Arrow(DefeaterConstitutive)),
            ("O[", Tok::OblOpen),
        ];
        if let Some((s, t)) = fixed.into_iter().find(|(s, _)| rest.starts_with(s)) {
            c.bump(s.len());
            toks.push(Token {
                tok: t,
                span: c.span_from(start, line, col),
            });
            continue;
        }
        let single = match ch {
            '~' => Some(Tok::Tilde),
            '.' => Some(Tok::Dot),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '*' => Some(Tok::Star),
            '&' => Some(Tok::Amp),
            '>' => Some(Tok::Gt),
            ']' => Some(Tok::Close),
            _ => None,
        };
        if let Some(t) = single {
            c.bump(1);
            toks.push(Token {
                tok: t,
                span: c.span_from(start, line, col),
            });
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let n = rest
                .find(|x: char| !(x.is_ascii_alphanumeric() || x == '_'))
                .unwrap_or(rest.len());
            let word = rest[..n].to_string();
            c.bump(n);
            toks.push(Token {
                tok: Tok::Ident(word),
                span: c.span_from(start, line, col),
            });
            continue;
        }
        c.bump(ch.len_utf8());
        diags.push(Diagnostic::error(
            format!("unexpected character `{ch}`"),
            c.span_from(start, line, col),
        ));
    }
    (toks, diags)
}
