//! Text to [`CdlUnit`](crate::model::CdlUnit) and back.

mod lexer;
mod parser;
mod render;

pub use lexer::{tokenize, Keyword, Token, TokenKind};
pub use parser::{parse_unit, ParseResult};
pub use render::{quote, render_unit};
