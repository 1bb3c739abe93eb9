//! Concrete syntax.
//!
//! Lowercase letters are alphabet symbols, uppercase identifiers are
//! variables, `0` is the empty set, `1` the empty word, `+` union,
//! juxtaposition concatenation, postfix `*` iteration, and `mu X. r` binds
//! `X` to the end of the enclosing scope. `mu` must appear at the top level
//! or inside parentheses. A lowercase `mu` immediately followed by another
//! letter or digit is read as plain symbols, so `mub` is the word m·u·b.
//!
//! Identifiers of the shape `X<digits>` denote the variable with exactly
//! that index; the printer emits this form, which makes print/parse a
//! faithful round trip on any AST. Other identifiers get fresh indices (in
//! order of first appearance, above any explicit index) and are resolved
//! against the innermost enclosing binder of the same name.

use std::collections::HashMap;

use super::{Expr, Symbol, VarId};
use crate::error::Error;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Zero,
    One,
    Sym(Symbol),
    Ident(String),
    KwMu,
    Plus,
    Star,
    Dot,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<Spanned>, Error> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;
    while i < chars.len() {
        let c = chars[i];
        let (tline, tcol) = (line, col);
        let advance = |n: usize, line: &mut usize, col: &mut usize, i: &mut usize| {
            for k in 0..n {
                if chars[*i + k] == '\n' {
                    *line += 1;
                    *col = 1;
                } else {
                    *col += 1;
                }
            }
            *i += n;
        };
        if c.is_whitespace() {
            advance(1, &mut line, &mut col, &mut i);
            continue;
        }
        let tok = match c {
            '0' => Some(Tok::Zero),
            '1' => Some(Tok::One),
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            '.' => Some(Tok::Dot),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = tok {
            toks.push(Spanned { tok, line: tline, col: tcol });
            advance(1, &mut line, &mut col, &mut i);
            continue;
        }
        if c == 'm'
            && chars.get(i + 1) == Some(&'u')
            && !chars.get(i + 2).is_some_and(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
        {
            toks.push(Spanned { tok: Tok::KwMu, line: tline, col: tcol });
            advance(2, &mut line, &mut col, &mut i);
            continue;
        }
        if c.is_ascii_lowercase() {
            toks.push(Spanned { tok: Tok::Sym(Symbol::new(c).unwrap()), line: tline, col: tcol });
            advance(1, &mut line, &mut col, &mut i);
            continue;
        }
        if c.is_ascii_uppercase() {
            let mut name = String::new();
            let mut n = 0;
            while i + n < chars.len() && (chars[i + n].is_ascii_alphanumeric() || chars[i + n] == '_') {
                name.push(chars[i + n]);
                n += 1;
            }
            toks.push(Spanned { tok: Tok::Ident(name), line: tline, col: tcol });
            advance(n, &mut line, &mut col, &mut i);
            continue;
        }
        return Err(err(tline, tcol, format!("unexpected character {:?}", c)));
    }
    Ok(toks)
}

/// Explicit index when the name is `X` followed by digits only.
fn explicit_index(name: &str) -> Option<u32> {
    let rest = name.strip_prefix('X')?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    end_line: usize,
    end_col: usize,
    /// Innermost-first binder scopes per name.
    scopes: HashMap<String, Vec<VarId>>,
    /// Ids already given to free occurrences, per name.
    free: HashMap<String, VarId>,
    next_fresh: u32,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(s) => (s.line, s.col),
            None => (self.end_line, self.end_col),
        }
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), Error> {
        let (line, col) = self.here();
        match self.bump() {
            Some(s) if s.tok == want => Ok(()),
            Some(s) => Err(err(s.line, s.col, format!("expected {}, found {:?}", what, s.tok))),
            None => Err(err(line, col, format!("expected {}, found end of input", what))),
        }
    }

    fn fresh(&mut self) -> VarId {
        let id = VarId(self.next_fresh);
        self.next_fresh += 1;
        id
    }

    fn binder_id(&mut self, name: &str) -> VarId {
        match explicit_index(name) {
            Some(n) => VarId(n),
            None => self.fresh(),
        }
    }

    fn var_id(&mut self, name: &str) -> VarId {
        if let Some(stack) = self.scopes.get(name) {
            if let Some(&id) = stack.last() {
                return id;
            }
        }
        if let Some(n) = explicit_index(name) {
            return VarId(n);
        }
        if let Some(&id) = self.free.get(name) {
            return id;
        }
        let id = self.fresh();
        self.free.insert(name.to_string(), id);
        id
    }

    fn expr(&mut self) -> Result<Expr, Error> {
        if self.peek() == Some(&Tok::KwMu) {
            self.bump();
            let (line, col) = self.here();
            let name = match self.bump() {
                Some(Spanned { tok: Tok::Ident(name), .. }) => name,
                Some(s) => {
                    return Err(err(s.line, s.col, format!("expected variable after mu, found {:?}", s.tok)))
                }
                None => return Err(err(line, col, "expected variable after mu")),
            };
            self.expect(Tok::Dot, "`.`")?;
            let id = self.binder_id(&name);
            self.scopes.entry(name.clone()).or_default().push(id);
            let body = self.expr()?;
            self.scopes.get_mut(&name).unwrap().pop();
            Ok(Expr::mu(id, body))
        } else {
            self.alt()
        }
    }

    fn alt(&mut self) -> Result<Expr, Error> {
        let mut acc = self.cat()?;
        while self.peek() == Some(&Tok::Plus) {
            self.bump();
            let rhs = self.cat()?;
            acc = Expr::alt(acc, rhs);
        }
        Ok(acc)
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Zero) | Some(Tok::One) | Some(Tok::Sym(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen)
        )
    }

    fn cat(&mut self) -> Result<Expr, Error> {
        let mut acc = self.factor()?;
        while self.starts_factor() {
            let rhs = self.factor()?;
            acc = Expr::cat(acc, rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, Error> {
        let mut base = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            base = Expr::star(base);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, Error> {
        let (line, col) = self.here();
        match self.bump() {
            Some(Spanned { tok: Tok::Zero, .. }) => Ok(Expr::empty_set()),
            Some(Spanned { tok: Tok::One, .. }) => Ok(Expr::empty_word()),
            Some(Spanned { tok: Tok::Sym(s), .. }) => Ok(Expr::sym(s)),
            Some(Spanned { tok: Tok::Ident(name), .. }) => {
                let id = self.var_id(&name);
                Ok(Expr::var(id))
            }
            Some(Spanned { tok: Tok::LParen, .. }) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(s) => Err(err(s.line, s.col, format!("expected an expression, found {:?}", s.tok))),
            None => Err(err(line, col, "expected an expression, found end of input")),
        }
    }
}

/// Parse the concrete syntax. Does not canonicalize; free (unbound)
/// variables are allowed and reported by downstream operations that need
/// closed input.
pub fn parse(text: &str) -> Result<Expr, Error> {
    let toks = lex(text)?;
    let (end_line, end_col) = {
        let mut line = 1;
        let mut col = 1;
        for c in text.chars() {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    };
    // Fresh ids start above any explicit X<d> index in the text.
    let next_fresh = toks
        .iter()
        .filter_map(|s| match &s.tok {
            Tok::Ident(name) => explicit_index(name).map(|n| n + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end_line,
        end_col,
        scopes: HashMap::new(),
        free: HashMap::new(),
        next_fresh,
    };
    let e = p.expr()?;
    if let Some(s) = p.toks.get(p.pos) {
        return Err(err(s.line, s.col, format!("unexpected trailing {:?}", s.tok)));
    }
    Ok(e)
}
