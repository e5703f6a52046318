//! Signatures of arbitrary finite type, terms, parsing and printing,
//! variable analysis and the leftmost/rightmost classification of
//! identities.
//!
//! Concrete grammar:
//!
//! ```text
//! identity := term '=' term
//! term     := var | symbol '(' term {',' term} ')' | wordjuxt
//!           | '(' term ')' | term infixop term
//! ```
//!
//! Variables print as `x, y, z, w, x4, x5, ...`. For a signature with
//! exactly one binary symbol, juxtaposed variable letters denote the
//! right-associated product (`zxy` is `z·(x·y)`). The lattice signature
//! declares `v` and `^` as infix for join and meet. Whitespace is
//! insignificant except that it ends a juxtaposed word.

use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Index of an operation symbol within its [`Signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub usize);

/// An operation symbol together with its arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OperationSymbol {
    pub name: String,
    pub arity: usize,
}

/// An ordered sequence of operation symbols with unique names.
#[derive(Debug, Clone, Eq)]
pub struct Signature {
    symbols: Vec<OperationSymbol>,
    /// Characters that act as infix operators for a binary symbol.
    infix: Vec<(char, SymbolId)>,
}

/// Infix declarations are presentation only; two signatures are equal
/// when their symbol sequences are.
impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Signature {
    pub fn new<S: Into<String>>(symbols: Vec<(S, usize)>) -> Result<Self> {
        let symbols: Vec<OperationSymbol> = symbols
            .into_iter()
            .map(|(name, arity)| OperationSymbol {
                name: name.into(),
                arity,
            })
            .collect();
        for (i, sym) in symbols.iter().enumerate() {
            if sym.name.is_empty() {
                return Err(Error::EmptySymbolName);
            }
            if symbols[..i].iter().any(|s| s.name == sym.name) {
                return Err(Error::DuplicateSymbol(sym.name.clone()));
            }
        }
        Ok(Signature {
            symbols,
            infix: Vec::new(),
        })
    }

    /// The band signature: a single binary symbol `mul`.
    pub fn band() -> Self {
        Signature::new(vec![("mul", 2)]).unwrap()
    }

    /// The lattice signature: binary `join` and `meet`, written infix
    /// as `v` and `^`.
    pub fn lattice() -> Self {
        let mut sig = Signature::new(vec![("join", 2), ("meet", 2)]).unwrap();
        sig.infix = vec![('v', SymbolId(0)), ('^', SymbolId(1))];
        sig
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, id: SymbolId) -> &OperationSymbol {
        &self.symbols[id.0]
    }

    pub fn symbols(&self) -> impl Iterator<Item = (SymbolId, &OperationSymbol)> {
        self.symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (SymbolId(i), s))
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.symbols
            .iter()
            .position(|s| s.name == name)
            .map(SymbolId)
    }

    /// The unique binary symbol, when the signature has exactly one.
    /// Juxtaposed words are only meaningful for such signatures.
    pub fn juxtaposition_symbol(&self) -> Option<SymbolId> {
        let mut binary = self
            .symbols
            .iter()
            .enumerate()
            .filter(|(_, s)| s.arity == 2);
        match (binary.next(), binary.next()) {
            (Some((i, _)), None) => Some(SymbolId(i)),
            _ => None,
        }
    }

    fn infix_symbol(&self, c: char) -> Option<SymbolId> {
        self.infix
            .iter()
            .find(|(ic, _)| *ic == c)
            .map(|(_, id)| *id)
    }

    fn infix_char(&self, id: SymbolId) -> Option<char> {
        self.infix.iter().find(|(_, s)| *s == id).map(|(c, _)| *c)
    }

    fn is_infix_char(&self, c: char) -> bool {
        self.infix.iter().any(|(ic, _)| *ic == c)
    }
}

/// A term of the given type: a variable or a symbol applied to
/// arity-many arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    App(SymbolId, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    /// Builds an application, checking the arity of the head symbol.
    pub fn app(sig: &Signature, id: SymbolId, args: Vec<Term>) -> Result<Term> {
        let sym = sig.symbol(id);
        if sym.arity != args.len() {
            return Err(Error::Arity {
                symbol: sym.name.clone(),
                expected: sym.arity,
                got: args.len(),
            });
        }
        Ok(Term::App(id, args))
    }

    /// Verifies arities at every node against `sig`.
    pub fn check_signature(&self, sig: &Signature) -> Result<()> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(id, args) => {
                if id.0 >= sig.len() || sig.symbol(*id).arity != args.len() {
                    return Err(Error::SignatureMismatch(format!(
                        "application of symbol #{} with {} arguments",
                        id.0,
                        args.len()
                    )));
                }
                args.iter().try_for_each(|a| a.check_signature(sig))
            }
        }
    }

    /// Variables in first-occurrence order (left-to-right over the
    /// leaves of the term tree).
    pub fn variables_in_order(&self) -> Vec<usize> {
        let mut seen = Vec::new();
        self.walk_vars(&mut |v| {
            if !seen.contains(&v) {
                seen.push(v);
            }
        });
        seen
    }

    pub fn variable_count(&self) -> usize {
        self.variables_in_order().len()
    }

    /// Leftmost variable leaf, absent for variable-free terms.
    pub fn first_variable(&self) -> Option<usize> {
        match self {
            Term::Var(v) => Some(*v),
            Term::App(_, args) => args.iter().find_map(|a| a.first_variable()),
        }
    }

    /// Rightmost variable leaf, absent for variable-free terms.
    pub fn last_variable(&self) -> Option<usize> {
        match self {
            Term::Var(v) => Some(*v),
            Term::App(_, args) => args.iter().rev().find_map(|a| a.last_variable()),
        }
    }

    /// Every variable leaf in order, duplicates included — the word
    /// spelled by the term tree.
    pub fn var_leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.walk_vars(&mut |v| out.push(v));
        out
    }

    fn walk_vars(&self, f: &mut impl FnMut(usize)) {
        match self {
            Term::Var(v) => f(*v),
            Term::App(_, args) => args.iter().for_each(|a| a.walk_vars(f)),
        }
    }
}

/// An identity `lhs ≈ rhs` between terms over one signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity { lhs, rhs }
    }

    /// Distinct variables of both sides, in first-occurrence order
    /// (left side first).
    pub fn variables(&self) -> Vec<usize> {
        let mut vars = self.lhs.variables_in_order();
        for v in self.rhs.variables_in_order() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Identity, &'a Signature);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(
                    f,
                    "{} = {}",
                    print_term(&self.0.lhs, self.1),
                    print_term(&self.0.rhs, self.1)
                )
            }
        }
        D(self, sig)
    }
}

/// Outcome of [`classify_identity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityClass {
    pub leftmost: bool,
    pub rightmost: bool,
    pub outermost: bool,
}

/// An identity is leftmost (rightmost) when both sides have the same
/// first (last) variable, and outermost when both hold. A variable-free
/// side never matches.
pub fn classify_identity(e: &Identity) -> IdentityClass {
    let leftmost = match (e.lhs.first_variable(), e.rhs.first_variable()) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    };
    let rightmost = match (e.lhs.last_variable(), e.rhs.last_variable()) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    };
    IdentityClass {
        leftmost,
        rightmost,
        outermost: leftmost && rightmost,
    }
}

/// Simultaneous substitution; variables not in the assignment map to
/// themselves.
pub fn substitute(t: &Term, assignment: &BTreeMap<usize, Term>) -> Term {
    match t {
        Term::Var(v) => assignment.get(v).cloned().unwrap_or(Term::Var(*v)),
        Term::App(id, args) => Term::App(
            *id,
            args.iter().map(|a| substitute(a, assignment)).collect(),
        ),
    }
}

/// Print name of a variable index: `x, y, z, w, x4, x5, ...`.
pub fn var_name(index: usize) -> String {
    match index {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        3 => "w".into(),
        n => format!("x{n}"),
    }
}

/// Inverse of [`var_name`].
pub fn var_index(name: &str) -> Option<usize> {
    match name {
        "x" => Some(0),
        "y" => Some(1),
        "z" => Some(2),
        "w" => Some(3),
        _ => {
            let digits = name.strip_prefix('x')?;
            let n: usize = digits.parse().ok()?;
            // x0..x3 spell x..w; one spelling per variable.
            (n >= 4 && !digits.starts_with('0')).then_some(n)
        }
    }
}

/// Prints a term in the concrete grammar, such that
/// `parse_term(print_term(t)) == t` structurally.
pub fn print_term(t: &Term, sig: &Signature) -> String {
    let mut out = String::new();
    print_into(t, sig, &mut out);
    out
}

fn print_into(t: &Term, sig: &Signature, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(&var_name(*v)),
        Term::App(id, args) => {
            if sig.juxtaposition_symbol() == Some(*id) {
                if let Some(word) = right_comb_letters(t, *id) {
                    for v in word {
                        out.push_str(&var_name(v));
                    }
                    return;
                }
            }
            if let Some(c) = sig.infix_char(*id) {
                print_infix_arg(&args[0], sig, out);
                out.push(' ');
                out.push(c);
                out.push(' ');
                print_infix_arg(&args[1], sig, out);
                return;
            }
            out.push_str(&sig.symbol(*id).name);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    print_into(a, sig, out);
                }
                out.push(')');
            }
        }
    }
}

fn print_infix_arg(t: &Term, sig: &Signature, out: &mut String) {
    if matches!(t, Term::App(..)) {
        out.push('(');
        print_into(t, sig, out);
        out.push(')');
    } else {
        print_into(t, sig, out);
    }
}

/// Leaf letters when `t` is a right comb `v0·(v1·(...·vk))` over `mul`.
fn right_comb_letters(t: &Term, mul: SymbolId) -> Option<Vec<usize>> {
    match t {
        Term::Var(_) => None,
        Term::App(id, args) if *id == mul => {
            let Term::Var(head) = args[0] else {
                return None;
            };
            match &args[1] {
                Term::Var(v) => Some(vec![head, *v]),
                rest => {
                    let mut tail = right_comb_letters(rest, mul)?;
                    tail.insert(0, head);
                    Some(tail)
                }
            }
        }
        Term::App(..) => None,
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Equals,
    Infix(char),
}

struct Lexer<'a> {
    src: &'a str,
    sig: &'a Signature,
    tokens: Vec<(Token, usize)>,
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str, sig: &'a Signature) -> Result<Vec<(Token, usize)>> {
        let mut lx = Lexer {
            src,
            sig,
            tokens: Vec::new(),
        };
        lx.lex()?;
        Ok(lx.tokens)
    }

    fn lex(&mut self) -> Result<()> {
        let mut chars = self.src.char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            if c.is_whitespace() {
                continue;
            }
            if self.sig.is_infix_char(c) {
                self.tokens.push((Token::Infix(c), i));
                continue;
            }
            match c {
                '(' => self.tokens.push((Token::LParen, i)),
                ')' => self.tokens.push((Token::RParen, i)),
                ',' => self.tokens.push((Token::Comma, i)),
                '=' => self.tokens.push((Token::Equals, i)),
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let mut end = i + c.len_utf8();
                    while let Some(&(j, d)) = chars.peek() {
                        if !(d.is_ascii_alphanumeric() || d == '_') || self.sig.is_infix_char(d) {
                            break;
                        }
                        end = j + d.len_utf8();
                        chars.next();
                    }
                    self.tokens
                        .push((Token::Ident(self.src[i..end].to_string()), i));
                }
                other => {
                    return Err(Error::Syntax {
                        pos: i,
                        msg: format!("unexpected character `{other}`"),
                    });
                }
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    sig: &'a Signature,
    end: usize,
}

/// Parses a term in the concrete grammar over `sig`.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term> {
    let mut p = Parser::new(text, sig)?;
    let t = p.term(0)?;
    p.expect_end()?;
    Ok(t)
}

/// Parses `term = term` over `sig`.
pub fn parse_identity(text: &str, sig: &Signature) -> Result<Identity> {
    let mut p = Parser::new(text, sig)?;
    let lhs = p.term(0)?;
    p.expect(Token::Equals, "`=`")?;
    let rhs = p.term(0)?;
    p.expect_end()?;
    Ok(Identity { lhs, rhs })
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, sig: &'a Signature) -> Result<Self> {
        Ok(Parser {
            tokens: Lexer::run(text, sig)?,
            pos: 0,
            sig,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or(self.end)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Token, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Syntax {
                pos: self.here(),
                msg: format!("expected {what}"),
            })
        }
    }

    fn expect_end(&self) -> Result<()> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(Error::Syntax {
                pos: self.here(),
                msg: "trailing input".into(),
            })
        }
    }

    /// Infix levels: `v` binds loosest, `^` tighter, both
    /// left-associative. Fully parenthesized output keeps round-trips
    /// independent of this choice.
    fn term(&mut self, min_prec: u8) -> Result<Term> {
        let mut lhs = self.primary()?;
        while let Some(Token::Infix(c)) = self.peek() {
            let c = *c;
            let prec = if c == '^' { 2 } else { 1 };
            if prec < min_prec {
                break;
            }
            self.pos += 1;
            let rhs = self.term(prec + 1)?;
            let id = self.sig.infix_symbol(c).expect("lexed infix char");
            lhs = Term::App(id, vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Term> {
        let pos = self.here();
        match self.advance() {
            Some(Token::LParen) => {
                let t = self.term(0)?;
                self.expect(Token::RParen, "`)`")?;
                Ok(t)
            }
            Some(Token::Ident(name)) => {
                if self.peek() == Some(&Token::LParen) {
                    self.application(&name, pos)
                } else {
                    self.atom(&name, pos)
                }
            }
            Some(tok) => Err(Error::Syntax {
                pos,
                msg: format!("unexpected token {tok:?}"),
            }),
            None => Err(Error::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }

    fn application(&mut self, name: &str, _pos: usize) -> Result<Term> {
        let id = self
            .sig
            .lookup(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        self.expect(Token::LParen, "`(`")?;
        let mut args = Vec::new();
        if self.peek() != Some(&Token::RParen) {
            loop {
                args.push(self.term(0)?);
                if self.peek() == Some(&Token::Comma) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.expect(Token::RParen, "`)` or `,`")?;
        Term::app(self.sig, id, args)
    }

    /// A bare identifier: a variable, a nullary symbol, or a juxtaposed
    /// word of variable letters.
    fn atom(&mut self, name: &str, pos: usize) -> Result<Term> {
        if let Some(v) = var_index(name) {
            return Ok(Term::Var(v));
        }
        if let Some(id) = self.sig.lookup(name) {
            return Term::app(self.sig, id, Vec::new());
        }
        let letters = split_word(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        debug_assert!(letters.len() >= 2);
        let Some(mul) = self.sig.juxtaposition_symbol() else {
            return Err(Error::Syntax {
                pos,
                msg: format!(
                    "juxtaposed word `{name}` needs a signature with exactly one binary symbol"
                ),
            });
        };
        let mut term = Term::Var(*letters.last().unwrap());
        for &v in letters.iter().rev().skip(1) {
            term = Term::App(mul, vec![Term::Var(v), term]);
        }
        Ok(term)
    }
}

/// Splits `zxy` or `x4zw` into variable indices; `None` when some
/// letter is not a variable name.
pub(crate) fn split_word(s: &str) -> Option<Vec<usize>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        i += 1;
        if bytes[start] == b'x' {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
        }
        out.push(var_index(&s[start..i])?);
    }
    Some(out)
}
