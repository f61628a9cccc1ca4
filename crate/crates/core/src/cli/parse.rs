//! Recursive-descent parsers: the generic process grammar, parameterised by
//! an instance's term, type, condition and assertion syntax.

use std::collections::HashMap;

use super::lexer::{lex, Spanned, Tok};
use super::ParseError;
use crate::instance::Lang;
use crate::nominal::Name;
use crate::syntax::Process;

/// Token cursor plus the table interning identifiers as names. The same
/// spelling always denotes the same name within one parse.
pub struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    names: HashMap<String, Name>,
    end: (usize, usize),
}

impl Parser {
    pub fn new(src: &str, first_line: usize) -> Result<Self, ParseError> {
        let toks = lex(src, first_line)?;
        let lines = src.lines().count().max(1);
        let last_len = src.lines().last().map_or(0, str::len);
        Ok(Parser { toks, pos: 0, names: HashMap::new(), end: (first_line + lines - 1, last_len + 1) })
    }

    /// Continues with the names already interned by `other`.
    pub fn with_names(mut self, names: HashMap<String, Name>) -> Self {
        self.names = names;
        self
    }

    pub fn into_names(self) -> HashMap<String, Name> {
        self.names
    }

    pub fn name(&mut self, spelling: &str) -> Name {
        self.names.entry(spelling.to_string()).or_insert_with(|| Name::new(spelling)).clone()
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|s| &s.tok)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn error(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = match self.toks.get(self.pos) {
            Some(s) => (s.line, s.col),
            None => self.end,
        };
        ParseError::new(line, col, msg.into())
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {t}")),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    pub fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    pub fn retreat(&mut self) {
        self.pos = self.pos.saturating_sub(1);
    }

    pub fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(t)) if *t == s)
    }

    pub fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(t)) if t == s)
    }

    pub fn eat(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{s}`")))
        }
    }

    pub fn expect_keyword(&mut self, k: &str) -> Result<(), ParseError> {
        if self.is_ident(k) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{k}`")))
        }
    }

    pub fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    pub fn int(&mut self) -> Result<u32, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    /// `item (sep item)*`, stopping before `close` when the list is empty.
    pub fn list<T>(
        &mut self,
        sep: &str,
        close: &str,
        mut item: impl FnMut(&mut Self) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        let mut out = Vec::new();
        if self.is_sym(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if !self.eat(sep) {
                return Ok(out);
            }
        }
    }

    // -----------------------------------------------------------------------
    // Generic processes

    /// `atom (| atom)*`, nested to the right.
    pub fn process<S: Surface>(&mut self) -> Result<Process<S::L>, ParseError> {
        let mut items = vec![self.atom::<S>()?];
        while self.is_sym("|") {
            self.bump();
            items.push(self.atom::<S>()?);
        }
        Ok(Process::par_all(items))
    }

    pub fn atom<S: Surface>(&mut self) -> Result<Process<S::L>, ParseError> {
        match self.peek() {
            Some(Tok::Int(0)) => {
                self.bump();
                Ok(Process::Nil)
            }
            Some(Tok::Sym("'")) => {
                self.bump();
                let subject = S::term(self)?;
                self.expect("<")?;
                let object = S::term(self)?;
                self.expect(">")?;
                self.expect(".")?;
                let cont = self.atom::<S>()?;
                Ok(Process::output(subject, object, cont))
            }
            Some(Tok::Sym("!")) => {
                self.bump();
                Ok(Process::repl(self.atom::<S>()?))
            }
            Some(Tok::Sym("(|")) => {
                self.bump();
                let a = S::assertion(self)?;
                self.expect("|)")?;
                Ok(Process::Assert(a))
            }
            Some(Tok::Sym("(")) if matches!(self.peek_at(1), Some(Tok::Ident(k)) if k == "new") => {
                self.bump();
                self.bump();
                let x = self.ident()?;
                let x = self.name(&x);
                self.expect(":")?;
                let t = S::ty(self)?;
                self.expect(")")?;
                Ok(Process::restrict(x, t, self.atom::<S>()?))
            }
            Some(Tok::Sym("(")) => {
                self.bump();
                let p = self.process::<S>()?;
                self.expect(")")?;
                Ok(p)
            }
            Some(Tok::Ident(k)) if k == "run" => {
                self.bump();
                Ok(Process::Run(S::term(self)?))
            }
            Some(Tok::Ident(k)) if k == "case" => {
                self.bump();
                let mut branches = Vec::new();
                loop {
                    let c = S::condition(self)?;
                    self.expect(":")?;
                    branches.push((c, self.atom::<S>()?));
                    if !self.eat("[]") {
                        break;
                    }
                }
                Ok(Process::Case(branches))
            }
            Some(_) => {
                let subject = S::term(self)?;
                self.expect("(")?;
                self.expect("\\")?;
                let binders = self.list(",", ")", |p| {
                    let x = p.ident()?;
                    let x = p.name(&x);
                    p.expect(":")?;
                    Ok((x, S::ty(p)?))
                })?;
                self.expect(")")?;
                let pattern = S::term(self)?;
                self.expect(".")?;
                let cont = self.atom::<S>()?;
                Ok(Process::input(subject, binders, pattern, cont))
            }
            None => Err(self.unexpected("a process")),
        }
    }
}

/// Words that never parse as names.
pub const KEYWORDS: &[&str] = &["run", "case", "new", "true"];

/// The instance-specific part of the generic grammar.
pub trait Surface {
    type L: Lang;
    fn term(p: &mut Parser) -> Result<<Self::L as Lang>::Term, ParseError>;
    fn ty(p: &mut Parser) -> Result<<Self::L as Lang>::Type, ParseError>;
    fn condition(p: &mut Parser) -> Result<<Self::L as Lang>::Condition, ParseError>;
    fn assertion(p: &mut Parser) -> Result<<Self::L as Lang>::Assertion, ParseError>;
}
