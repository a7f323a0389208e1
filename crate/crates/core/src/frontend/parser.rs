//! Recursive-descent parser for the CDL subset.
//!
//! ```text
//! unit      := item*
//! item      := directive? (signature | celltype | cell)
//! directive := '[' 'generate' '(' IDENT ',' STRING ')' ']'
//! signature := 'signature' IDENT '{' function* '}' ';'
//! function  := IDENT IDENT '(' ('void' | param (',' param)*)? ')' ';'
//! param     := '[' ('in' | 'out') ']' IDENT '*'* IDENT
//! celltype  := 'celltype' IDENT '{' ct_item* '}' ';'
//! ct_item   := modifiers? ('call' | 'entry') IDENT IDENT ';'
//!            | 'attr' '{' (modifiers? IDENT IDENT ('=' init)? ';')* '}' ';'
//!            | 'var' '{' (IDENT IDENT ('=' init)? ';')* '}' ';'
//!            | ('factory' | 'FACTORY') '{' write* '}' ';'
//! write     := 'write' '(' STRING ',' STRING (',' IDENT)* ')' ';'
//! cell      := 'cell' IDENT IDENT '{' (IDENT '=' (IDENT '.' IDENT | init) ';')* '}' ';'
//! init      := 'C_EXP' '(' STRING ')' | INTEGER | '-' INTEGER | IDENT
//! modifiers := '[' IDENT (',' IDENT)* ']'
//! ```
//!
//! On a syntax error the parser skips to the end of the current top-level
//! item and carries on, so one pass reports every broken item.

use crate::diagnostic::{Diagnostic, Span};
use crate::frontend::lexer::{tokenize, Keyword, Token, TokenKind};
use crate::model::*;
use crate::naming::CTypeName;

/// Outcome of [`parse_unit`]. `unit` is present iff `diagnostics` holds no
/// errors.
#[derive(Debug)]
pub struct ParseResult {
    pub unit: Option<CdlUnit>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseResult {
    pub fn is_ok(&self) -> bool {
        self.unit.is_some()
    }
}

type PResult<T> = Result<T, Diagnostic>;

pub fn parse_unit(text: &str, source_name: &str) -> ParseResult {
    let tokens = match tokenize(text, source_name) {
        Ok(tokens) => tokens,
        Err(diag) => {
            return ParseResult {
                unit: None,
                diagnostics: vec![diag],
            }
        }
    };
    let eof = end_span(text, source_name);
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        eof,
    };

    let mut unit = CdlUnit::new(source_name);
    let mut diagnostics = Vec::new();
    while !parser.at_end() {
        let start = parser.pos;
        match parser.item() {
            Ok(item) => unit.items.push(item),
            Err(diag) => {
                diagnostics.push(diag);
                parser.recover(start);
            }
        }
    }

    ParseResult {
        unit: diagnostics.is_empty().then_some(unit),
        diagnostics,
    }
}

fn end_span(text: &str, file: &str) -> Span {
    let line = text.matches('\n').count() as u32 + 1;
    let last = text.rsplit('\n').next().unwrap_or("");
    Span::new(file, line, last.chars().count() as u32 + 1)
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    eof: Span,
}

impl<'t> Parser<'t> {
    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, n: usize) -> Option<&'t Token> {
        self.tokens.get(self.pos + n)
    }

    fn advance(&mut self) -> Option<&'t Token> {
        let tok = self.tokens.get(self.pos);
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        match self.peek() {
            Some(tok) => Diagnostic::error(
                "syntax",
                &tok.span,
                format!("expected {expected}, found {tok}"),
            ),
            None => Diagnostic::error(
                "syntax",
                &self.eof,
                format!("expected {expected}, found end of input"),
            ),
        }
    }

    fn check_punct(&self, c: char) -> bool {
        self.peek().is_some_and(|t| t.is_punct(c))
    }

    fn check_keyword(&self, k: Keyword) -> bool {
        self.peek().is_some_and(|t| t.is_keyword(k))
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.check_punct(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, c: char) -> PResult<&'t Token> {
        if self.check_punct(c) {
            Ok(self.advance().unwrap())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn expect_keyword(&mut self, k: Keyword) -> PResult<&'t Token> {
        if self.check_keyword(k) {
            Ok(self.advance().unwrap())
        } else {
            Err(self.unexpected(&format!("`{}`", k.as_str())))
        }
    }

    fn expect_ident(&mut self, what: &str) -> PResult<&'t Token> {
        match self.peek() {
            Some(tok) if tok.kind == TokenKind::Ident => Ok(self.advance().unwrap()),
            _ => Err(self.unexpected(what)),
        }
    }

    fn expect_string(&mut self, what: &str) -> PResult<(String, Span)> {
        match self.peek() {
            Some(tok) => match tok.string_value() {
                Some(value) => {
                    self.pos += 1;
                    Ok((value.to_string(), tok.span.clone()))
                }
                None => Err(self.unexpected(what)),
            },
            None => Err(self.unexpected(what)),
        }
    }

    /// `};` terminating a braced construct.
    fn close_block(&mut self) -> PResult<()> {
        self.expect_punct('}')?;
        self.expect_punct(';')?;
        Ok(())
    }

    /// Skips past the end of the top-level item that started at `start`.
    fn recover(&mut self, start: usize) {
        let mut depth = 0usize;
        let mut i = start;
        while let Some(tok) = self.tokens.get(i) {
            i += 1;
            if tok.is_punct('{') {
                depth += 1;
            } else if tok.is_punct('}') {
                depth = depth.saturating_sub(1);
                if depth == 0 {
                    if self.tokens.get(i).is_some_and(|t| t.is_punct(';')) {
                        i += 1;
                    }
                    break;
                }
            } else if tok.is_punct(';') && depth == 0 {
                break;
            }
        }
        self.pos = i.max(start + 1);
    }

    fn item(&mut self) -> PResult<Item> {
        let directive = if self.check_punct('[') {
            Some(self.directive()?)
        } else {
            None
        };
        match self.peek() {
            Some(tok) if tok.is_keyword(Keyword::Signature) => {
                if let Some(d) = directive {
                    return Err(Diagnostic::error(
                        "misplaced-directive",
                        &d.span,
                        "a generate directive must precede a celltype or cell",
                    ));
                }
                self.signature().map(Item::Signature)
            }
            Some(tok) if tok.is_keyword(Keyword::Celltype) => {
                self.celltype(directive).map(Item::Celltype)
            }
            Some(tok) if tok.is_keyword(Keyword::Cell) => self.cell(directive).map(Item::Cell),
            _ => Err(self.unexpected("`signature`, `celltype` or `cell`")),
        }
    }

    fn directive(&mut self) -> PResult<PluginDirective> {
        self.expect_punct('[')?;
        if !self.check_keyword(Keyword::Generate) {
            return Err(match self.peek() {
                Some(tok) => Diagnostic::error(
                    "unsupported-directive",
                    &tok.span,
                    format!("unsupported directive {tok}; only `generate` is recognized"),
                ),
                None => self.unexpected("`generate`"),
            });
        }
        self.advance();
        self.expect_punct('(')?;
        let plugin = self.expect_ident("plugin name")?;
        self.expect_punct(',')?;
        let (argument, _) = self.expect_string("plugin argument string")?;
        self.expect_punct(')')?;
        self.expect_punct(']')?;
        Ok(PluginDirective {
            plugin: Plugin::from_name(&plugin.text),
            argument,
            span: plugin.span.clone(),
        })
    }

    fn signature(&mut self) -> PResult<SignatureDef> {
        self.expect_keyword(Keyword::Signature)?;
        let name = self.expect_ident("signature name")?;
        self.expect_punct('{')?;
        let mut functions = Vec::new();
        while !self.check_punct('}') {
            functions.push(self.function()?);
        }
        self.close_block()?;
        Ok(SignatureDef {
            name: name.text.clone(),
            functions,
            span: name.span.clone(),
        })
    }

    fn function(&mut self) -> PResult<FunctionDecl> {
        let ret = self.expect_ident("return type or `}`")?;
        let name = self.expect_ident("function name")?;
        self.expect_punct('(')?;
        let mut params = Vec::new();
        let void_list = self
            .peek()
            .is_some_and(|t| t.kind == TokenKind::Ident && t.text == "void")
            && self.peek_at(1).is_some_and(|t| t.is_punct(')'));
        if void_list {
            self.advance();
        } else if !self.check_punct(')') {
            loop {
                params.push(self.param()?);
                if !self.eat_punct(',') {
                    break;
                }
            }
        }
        self.expect_punct(')')?;
        self.expect_punct(';')?;
        Ok(FunctionDecl {
            name: name.text.clone(),
            return_type: CTypeName::new(&ret.text),
            params,
            span: name.span.clone(),
        })
    }

    fn param(&mut self) -> PResult<ParamDecl> {
        if !self.check_punct('[') {
            return Err(match self.peek() {
                Some(tok) => Diagnostic::error(
                    "missing-specifier",
                    &tok.span,
                    format!("parameter starting at {tok} needs an [in] or [out] specifier"),
                ),
                None => self.unexpected("`[`"),
            });
        }
        self.advance();
        let spec = self.expect_ident("`in` or `out`")?;
        let specifier = match spec.text.as_str() {
            "in" => Specifier::In,
            "out" => Specifier::Out,
            other => return Err(Diagnostic::error(
                "unsupported-specifier",
                &spec.span,
                format!(
                    "unsupported parameter specifier `{other}`; only [in] and [out] are supported"
                ),
            )),
        };
        if self.check_punct(',') {
            let tok = self.peek().unwrap();
            return Err(Diagnostic::error(
                "unsupported-specifier",
                &tok.span,
                "only a single [in] or [out] specifier is supported",
            ));
        }
        self.expect_punct(']')?;
        let c_type = self.expect_ident("parameter type")?;
        let mut pointer_depth = 0;
        while self.eat_punct('*') {
            pointer_depth += 1;
        }
        let name = self.expect_ident("parameter name")?;
        Ok(ParamDecl {
            specifier,
            c_type: CTypeName::new(&c_type.text),
            pointer_depth,
            name: name.text.clone(),
            span: name.span.clone(),
        })
    }

    fn modifiers(&mut self) -> PResult<Vec<Modifier>> {
        self.expect_punct('[')?;
        let mut mods = Vec::new();
        loop {
            let word = self.expect_ident("`inline` or `omit`")?;
            match Modifier::from_keyword(&word.text) {
                Some(m) => mods.push(m),
                None => {
                    return Err(Diagnostic::error(
                        "unsupported-modifier",
                        &word.span,
                        format!("unsupported modifier `{}`", word.text),
                    ))
                }
            }
            if !self.eat_punct(',') {
                break;
            }
        }
        self.expect_punct(']')?;
        mods.sort();
        mods.dedup();
        Ok(mods)
    }

    fn celltype(&mut self, directive: Option<PluginDirective>) -> PResult<CelltypeDef> {
        self.expect_keyword(Keyword::Celltype)?;
        let name = self.expect_ident("celltype name")?;
        self.expect_punct('{')?;
        let mut ct = CelltypeDef {
            name: name.text.clone(),
            call_ports: Vec::new(),
            entry_ports: Vec::new(),
            attrs: Vec::new(),
            vars: Vec::new(),
            factory_blocks: Vec::new(),
            generate_directive: directive,
            span: name.span.clone(),
        };

        while !self.check_punct('}') {
            let modifiers = if self.check_punct('[') {
                Some(self.modifiers()?)
            } else {
                None
            };
            let Some(tok) = self.peek() else {
                return Err(self.unexpected("celltype member"));
            };
            match &tok.kind {
                TokenKind::Keyword(k @ (Keyword::Call | Keyword::Entry)) => {
                    self.advance();
                    let sig = self.expect_ident("signature name")?;
                    let port = self.expect_ident("port name")?;
                    self.expect_punct(';')?;
                    let direction = if *k == Keyword::Call {
                        PortDirection::Call
                    } else {
                        PortDirection::Entry
                    };
                    let decl = PortDecl {
                        direction,
                        signature_name: sig.text.clone(),
                        port_name: port.text.clone(),
                        modifiers: modifiers.unwrap_or_default(),
                        span: port.span.clone(),
                    };
                    match direction {
                        PortDirection::Call => ct.call_ports.push(decl),
                        PortDirection::Entry => ct.entry_ports.push(decl),
                    }
                }
                _ if modifiers.is_some() => return Err(self.unexpected("`call` or `entry`")),
                TokenKind::Keyword(Keyword::Attr) => {
                    self.advance();
                    self.expect_punct('{')?;
                    while !self.check_punct('}') {
                        ct.attrs.push(self.attr_decl()?);
                    }
                    self.close_block()?;
                }
                TokenKind::Keyword(Keyword::Var) => {
                    self.advance();
                    self.expect_punct('{')?;
                    while !self.check_punct('}') {
                        ct.vars.push(self.var_decl()?);
                    }
                    self.close_block()?;
                }
                TokenKind::Keyword(k @ (Keyword::Factory | Keyword::FactoryUpper)) => {
                    let scope = if *k == Keyword::Factory {
                        FactoryScope::PerCell
                    } else {
                        FactoryScope::PerCelltype
                    };
                    let span = tok.span.clone();
                    self.advance();
                    self.expect_punct('{')?;
                    let mut writes = Vec::new();
                    while !self.check_punct('}') {
                        writes.push(self.write()?);
                    }
                    self.close_block()?;
                    ct.factory_blocks.push(FactoryBlock {
                        scope,
                        writes,
                        span,
                    });
                }
                _ => {
                    return Err(self
                        .unexpected("`call`, `entry`, `attr`, `var`, `factory`, `FACTORY` or `}`"))
                }
            }
        }
        self.close_block()?;
        Ok(ct)
    }

    fn attr_decl(&mut self) -> PResult<AttrDecl> {
        let mut omit = false;
        if self.check_punct('[') {
            let at = self.peek_at(1).map(|t| t.span.clone());
            for m in self.modifiers()? {
                match m {
                    Modifier::Omit => omit = true,
                    Modifier::Inline => {
                        return Err(Diagnostic::error(
                            "unsupported-modifier",
                            &at.unwrap_or_default(),
                            "`inline` does not apply to attributes",
                        ))
                    }
                }
            }
        }
        let c_type = self.expect_ident("attribute type or `}`")?;
        let name = self.expect_ident("attribute name")?;
        let default = if self.eat_punct('=') {
            Some(self.initializer()?)
        } else {
            None
        };
        self.expect_punct(';')?;
        Ok(AttrDecl {
            name: name.text.clone(),
            c_type: CTypeName::new(&c_type.text),
            default,
            omit,
            span: name.span.clone(),
        })
    }

    fn var_decl(&mut self) -> PResult<VarDecl> {
        let type_text = self.expect_ident("variable type or `}`")?;
        let name = self.expect_ident("variable name")?;
        let default = if self.eat_punct('=') {
            Some(self.initializer()?)
        } else {
            None
        };
        self.expect_punct(';')?;
        Ok(VarDecl {
            name: name.text.clone(),
            type_text: type_text.text.clone(),
            default,
            span: name.span.clone(),
        })
    }

    fn starts_initializer(&self) -> bool {
        self.peek().is_some_and(|t| {
            matches!(
                t.kind,
                TokenKind::Keyword(Keyword::CExp) | TokenKind::Integer | TokenKind::Ident
            ) || t.is_punct('-')
        })
    }

    fn initializer(&mut self) -> PResult<Initializer> {
        if !self.starts_initializer() {
            return Err(self.unexpected("initializer (`C_EXP(\"...\")`, integer or identifier)"));
        }
        let tok = self.advance().unwrap();
        match &tok.kind {
            TokenKind::Keyword(Keyword::CExp) => {
                self.expect_punct('(')?;
                let (text, span) = self.expect_string("string literal")?;
                self.expect_punct(')')?;
                Ok(Initializer {
                    kind: InitKind::CExp,
                    text,
                    span,
                })
            }
            TokenKind::Punct('-') => {
                let int = match self.peek() {
                    Some(t) if t.kind == TokenKind::Integer => self.advance().unwrap(),
                    _ => return Err(self.unexpected("integer")),
                };
                Ok(Initializer {
                    kind: InitKind::Literal,
                    text: format!("-{}", int.text),
                    span: tok.span.clone(),
                })
            }
            _ => Ok(Initializer {
                kind: InitKind::Literal,
                text: tok.text.clone(),
                span: tok.span.clone(),
            }),
        }
    }

    fn write(&mut self) -> PResult<FactoryWrite> {
        self.expect_keyword(Keyword::Write)?;
        self.expect_punct('(')?;
        let (target_file, _) = self.expect_string("target file name")?;
        self.expect_punct(',')?;
        let (template, span) = self.expect_string("template string")?;
        let mut args = Vec::new();
        while self.eat_punct(',') {
            args.push(self.expect_ident("attribute name")?.text.clone());
        }
        self.expect_punct(')')?;
        self.expect_punct(';')?;
        Ok(FactoryWrite {
            target_file,
            template,
            args,
            span,
        })
    }

    fn cell(&mut self, directive: Option<PluginDirective>) -> PResult<CellDef> {
        self.expect_keyword(Keyword::Cell)?;
        let celltype = self.expect_ident("celltype name")?;
        let name = self.expect_ident("cell name")?;
        self.expect_punct('{')?;
        let mut cell = CellDef {
            name: name.text.clone(),
            celltype_name: celltype.text.clone(),
            bindings: Vec::new(),
            attr_inits: Vec::new(),
            generate_directive: directive,
            span: name.span.clone(),
        };
        while !self.check_punct('}') {
            let lhs = self.expect_ident("call port or attribute name, or `}`")?;
            self.expect_punct('=')?;
            let is_binding = self.peek().is_some_and(|t| t.kind == TokenKind::Ident)
                && self.peek_at(1).is_some_and(|t| t.is_punct('.'));
            if is_binding {
                let target = self.advance().unwrap();
                self.advance();
                let entry = self.expect_ident("entry port name")?;
                cell.bindings.push(Binding {
                    call_port: lhs.text.clone(),
                    target_cell: target.text.clone(),
                    target_entry_port: entry.text.clone(),
                    span: lhs.span.clone(),
                });
            } else if self.starts_initializer() {
                let value = self.initializer()?;
                cell.attr_inits.push(CellInit {
                    name: lhs.text.clone(),
                    value,
                    span: lhs.span.clone(),
                });
            } else {
                return Err(self.unexpected("binding target (`Cell.ePort`) or initializer"));
            }
            self.expect_punct(';')?;
        }
        self.close_block()?;
        Ok(cell)
    }
}
