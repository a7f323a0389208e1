use std::fmt;

use crate::diagnostic::{Diagnostic, Span};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Keyword {
    Signature,
    Celltype,
    Cell,
    Call,
    Entry,
    Attr,
    Var,
    Factory,
    FactoryUpper,
    Generate,
    CExp,
    Write,
}

impl Keyword {
    pub const ALL: [Keyword; 12] = [
        Keyword::Signature,
        Keyword::Celltype,
        Keyword::Cell,
        Keyword::Call,
        Keyword::Entry,
        Keyword::Attr,
        Keyword::Var,
        Keyword::Factory,
        Keyword::FactoryUpper,
        Keyword::Generate,
        Keyword::CExp,
        Keyword::Write,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Signature => "signature",
            Keyword::Celltype => "celltype",
            Keyword::Cell => "cell",
            Keyword::Call => "call",
            Keyword::Entry => "entry",
            Keyword::Attr => "attr",
            Keyword::Var => "var",
            Keyword::Factory => "factory",
            Keyword::FactoryUpper => "FACTORY",
            Keyword::Generate => "generate",
            Keyword::CExp => "C_EXP",
            Keyword::Write => "write",
        }
    }

    pub fn from_word(word: &str) -> Option<Self> {
        Keyword::ALL.into_iter().find(|k| k.as_str() == word)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Keyword(Keyword),
    Ident,
    /// Carries the unescaped contents.
    Str(String),
    Integer,
    Punct(char),
}

/// A lexeme. `text` is the raw source slice, so tokens interleaved with the
/// skipped whitespace and comments reproduce the input exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
}

impl Token {
    pub fn string_value(&self) -> Option<&str> {
        match &self.kind {
            TokenKind::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_punct(&self, c: char) -> bool {
        self.kind == TokenKind::Punct(c)
    }

    pub fn is_keyword(&self, k: Keyword) -> bool {
        self.kind == TokenKind::Keyword(k)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self.text)
    }
}

const PUNCT: &str = "{}()[];,=.*-";

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    src: &'a str,
    pos: usize,
    line: u32,
    column: u32,
    file: &'a str,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.chars.get(self.pos + n).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.len(), |&(o, _)| o)
    }

    fn span(&self) -> Span {
        Span::new(self.file, self.line, self.column)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

/// Splits CDL text into tokens. Line and block comments are skipped.
pub fn tokenize(text: &str, source_name: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut cur = Cursor {
        chars: text.char_indices().collect(),
        src: text,
        pos: 0,
        line: 1,
        column: 1,
        file: source_name,
    };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        let start = cur.offset();
        let span = cur.span();
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '/' && cur.peek_at(1) == Some('/') {
            while cur.peek().is_some_and(|c| c != '\n') {
                cur.bump();
            }
            continue;
        }
        if c == '/' && cur.peek_at(1) == Some('*') {
            cur.bump();
            cur.bump();
            loop {
                match cur.peek() {
                    None => {
                        return Err(Diagnostic::error(
                            "unterminated-comment",
                            &span,
                            "unterminated block comment",
                        ))
                    }
                    Some('*') if cur.peek_at(1) == Some('/') => {
                        cur.bump();
                        cur.bump();
                        break;
                    }
                    Some(_) => {
                        cur.bump();
                    }
                }
            }
            continue;
        }

        let kind = if c == '"' {
            cur.bump();
            let mut value = String::new();
            loop {
                match cur.peek() {
                    None | Some('\n') => {
                        return Err(Diagnostic::error(
                            "unterminated-string",
                            &span,
                            "unterminated string literal",
                        ))
                    }
                    Some('"') => {
                        cur.bump();
                        break;
                    }
                    Some('\\') => {
                        cur.bump();
                        match cur.peek() {
                            Some('"') => value.push('"'),
                            Some('\\') => value.push('\\'),
                            Some('n') => value.push('\n'),
                            Some('t') => value.push('\t'),
                            // Unknown escapes are kept as written.
                            Some(other) if other != '\n' => {
                                value.push('\\');
                                value.push(other);
                            }
                            _ => continue,
                        }
                        cur.bump();
                    }
                    Some(other) => {
                        value.push(other);
                        cur.bump();
                    }
                }
            }
            TokenKind::Str(value)
        } else if c.is_ascii_alphabetic() || c == '_' {
            while cur
                .peek()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                cur.bump();
            }
            match Keyword::from_word(&text[start..cur.offset()]) {
                Some(k) => TokenKind::Keyword(k),
                None => TokenKind::Ident,
            }
        } else if c.is_ascii_digit() {
            let hex = c == '0' && matches!(cur.peek_at(1), Some('x' | 'X'));
            if hex {
                cur.bump();
                cur.bump();
            }
            while cur.peek().is_some_and(|c| {
                if hex {
                    c.is_ascii_hexdigit()
                } else {
                    c.is_ascii_digit()
                }
            }) {
                cur.bump();
            }
            TokenKind::Integer
        } else if PUNCT.contains(c) {
            cur.bump();
            TokenKind::Punct(c)
        } else {
            return Err(Diagnostic::error(
                "unexpected-character",
                &span,
                format!("unexpected character `{c}`"),
            ));
        };

        tokens.push(Token {
            kind,
            text: text[start..cur.offset()].to_string(),
            span,
        });
    }
    Ok(tokens)
}
