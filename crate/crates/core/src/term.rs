//! Terms of the free left-distributive algebra on a single generator `j`,
//! extended with a composition node.
//!
//! Application is written by juxtaposition and associates to the left, so
//! `jjj` is `(j(j))(j)`. Composition is written with a free-standing `o` and
//! binds looser than application. `jN` abbreviates the left-nested term
//! `j_N = j_{N-1}(j)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Generator,
    Apply(Arc<Term>, Arc<Term>),
    Compose(Arc<Term>, Arc<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown name `{name}` at byte {pos}")]
    UnknownName { name: String, pos: usize },
    #[error("j_n is undefined for n = 0")]
    ZeroIndex,
    #[error("binding `{0}` would make name expansion cyclic")]
    CyclicBinding(String),
}

impl Term {
    pub fn apply(left: Term, right: Term) -> Term {
        Term::Apply(Arc::new(left), Arc::new(right))
    }

    pub fn compose(left: Term, right: Term) -> Term {
        Term::Compose(Arc::new(left), Arc::new(right))
    }

    /// Number of generator occurrences.
    pub fn leaves(&self) -> usize {
        match self {
            Term::Generator => 1,
            Term::Apply(l, r) | Term::Compose(l, r) => l.leaves() + r.leaves(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Generator => 0,
            Term::Apply(l, r) | Term::Compose(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Returns `Some(n)` when the term is exactly `j_n`.
    pub fn j_index(&self) -> Option<u64> {
        let mut n = 1;
        let mut cur = self;
        loop {
            match cur {
                Term::Generator => return Some(n),
                Term::Apply(l, r) if **r == Term::Generator => {
                    n += 1;
                    cur = l;
                }
                _ => return None,
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_term(self))
    }
}

/// `j_1 = j`, `j_{n+1} = j_n(j)`.
pub fn j_sub(n: u64) -> Result<Term, TermError> {
    if n == 0 {
        return Err(TermError::ZeroIndex);
    }
    let mut t = Term::Generator;
    for _ in 1..n {
        t = Term::apply(t, Term::Generator);
    }
    Ok(t)
}

/// Named abbreviations for terms. The prelude binds `k`, `k'`, `k''` (with
/// the shell-safe spellings `kp`, `kpp`).
#[derive(Debug, Clone)]
pub struct NameTable {
    bindings: BTreeMap<String, Term>,
}

impl Default for NameTable {
    fn default() -> Self {
        Self::prelude()
    }
}

impl NameTable {
    pub fn empty() -> Self {
        NameTable {
            bindings: BTreeMap::new(),
        }
    }

    pub fn prelude() -> Self {
        let j = |n| j_sub(n).expect("positive index");
        let k = j(10);
        let kp = Term::apply(j(10), j(11));
        let kpp = Term::apply(j(9), j(14));
        let mut bindings = BTreeMap::new();
        bindings.insert("k".to_string(), k);
        bindings.insert("k'".to_string(), kp.clone());
        bindings.insert("kp".to_string(), kp);
        bindings.insert("k''".to_string(), kpp.clone());
        bindings.insert("kpp".to_string(), kpp);
        NameTable { bindings }
    }

    /// Binds `name` to the term denoted by `text`. Names are expanded at bind
    /// time, so a binding can never refer to itself.
    pub fn bind(&mut self, name: &str, text: &str) -> Result<(), TermError> {
        if !is_identifier(name) || name == "j" || parse_j_index(name).is_some() || name == "o" {
            return Err(TermError::Syntax {
                pos: 0,
                msg: format!("`{name}` is not a bindable name"),
            });
        }
        if !self.bindings.contains_key(name) && mentions_name(text, name) {
            return Err(TermError::CyclicBinding(name.to_string()));
        }
        let t = parse_term(text, self)?;
        self.bindings.insert(name.to_string(), t);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Term> {
        self.bindings.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }
}

fn mentions_name(text: &str, name: &str) -> bool {
    text.split(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '\''))
        .any(|w| w == name)
}

fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// `"j"` → 1, `"j12"` → 12; anything else → `None`.
pub fn parse_j_index(s: &str) -> Option<u64> {
    let rest = s.strip_prefix('j')?;
    if rest.is_empty() {
        return Some(1);
    }
    if rest.starts_with('0') || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok().filter(|&n| n > 0)
}

// ---------------------------------------------------------------------------
// Generic applicative-expression parser, shared with the script language.

/// Builds trees for the applicative grammar
/// `comp := app { "o" app }`, `app := atom { atom }`, `atom := name | "(" comp ")"`.
pub trait TreeBuilder {
    type Node;
    /// Whether `word` is a complete atom name. Used to split run-together
    /// identifiers such as `j8jjj` into `j8 j j j`.
    fn is_atom(&self, word: &str) -> bool;
    fn atom(&mut self, word: &str, pos: usize) -> Result<Self::Node, TermError>;
    fn apply(&mut self, left: Self::Node, right: Self::Node) -> Self::Node;
    fn compose(&mut self, left: Self::Node, right: Self::Node) -> Self::Node;
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Atom(String),
    Open,
    Close,
    Circ,
}

fn lex<B: TreeBuilder + ?Sized>(text: &str, b: &B) -> Result<Vec<(Tok, usize)>, TermError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = text[i..].chars().next().expect("char boundary");
        if c.is_whitespace() {
            i += c.len_utf8();
        } else if c == '(' {
            out.push((Tok::Open, i));
            i += 1;
        } else if c == ')' {
            out.push((Tok::Close, i));
            i += 1;
        } else if c == '∘' {
            out.push((Tok::Circ, i));
            i += c.len_utf8();
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() {
                let d = bytes[i] as char;
                if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                    i += 1;
                } else {
                    break;
                }
            }
            let word = &text[start..i];
            if word == "o" {
                out.push((Tok::Circ, start));
                continue;
            }
            split_word(word, start, b, &mut out)?;
        } else {
            return Err(TermError::Syntax {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

fn split_word<B: TreeBuilder + ?Sized>(
    word: &str,
    start: usize,
    b: &B,
    out: &mut Vec<(Tok, usize)>,
) -> Result<(), TermError> {
    let mut off = 0;
    while off < word.len() {
        let rest = &word[off..];
        let len = (1..=rest.len())
            .rev()
            .find(|&l| b.is_atom(&rest[..l]))
            .ok_or_else(|| TermError::UnknownName {
                name: if off == 0 { word.to_string() } else { rest.to_string() },
                pos: start + off,
            })?;
        out.push((Tok::Atom(rest[..len].to_string()), start + off));
        off += len;
    }
    Ok(())
}

struct Parser<'a, B: TreeBuilder> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    b: &'a mut B,
}

impl<B: TreeBuilder> Parser<'_, B> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn comp(&mut self) -> Result<B::Node, TermError> {
        let mut acc = self.app()?;
        while self.peek() == Some(&Tok::Circ) {
            self.at += 1;
            let rhs = self.app()?;
            acc = self.b.compose(acc, rhs);
        }
        Ok(acc)
    }

    fn app(&mut self) -> Result<B::Node, TermError> {
        let mut acc = self.atom()?;
        while matches!(self.peek(), Some(Tok::Atom(_)) | Some(Tok::Open)) {
            let rhs = self.atom()?;
            acc = self.b.apply(acc, rhs);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<B::Node, TermError> {
        let pos = self.pos();
        match self.toks.get(self.at).cloned() {
            Some((Tok::Atom(w), p)) => {
                self.at += 1;
                self.b.atom(&w, p)
            }
            Some((Tok::Open, _)) => {
                self.at += 1;
                let inner = self.comp()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(TermError::Syntax {
                        pos: self.pos(),
                        msg: "expected `)`".into(),
                    });
                }
                self.at += 1;
                Ok(inner)
            }
            Some((t, _)) => Err(TermError::Syntax {
                pos,
                msg: format!("unexpected {}", tok_name(&t)),
            }),
            None => Err(TermError::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }
}

fn tok_name(t: &Tok) -> &'static str {
    match t {
        Tok::Atom(_) => "name",
        Tok::Open => "`(`",
        Tok::Close => "`)`",
        Tok::Circ => "`o`",
    }
}

/// Parses `text` with an arbitrary builder.
pub fn parse_with<B: TreeBuilder>(text: &str, builder: &mut B) -> Result<B::Node, TermError> {
    let toks = lex(text, builder)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        b: builder,
    };
    let node = p.comp()?;
    if p.at != p.toks.len() {
        return Err(TermError::Syntax {
            pos: p.pos(),
            msg: "trailing input".into(),
        });
    }
    Ok(node)
}

struct TermBuilder<'a> {
    names: &'a NameTable,
}

impl TreeBuilder for TermBuilder<'_> {
    type Node = Term;

    fn is_atom(&self, word: &str) -> bool {
        parse_j_index(word).is_some() || self.names.get(word).is_some()
    }

    fn atom(&mut self, word: &str, pos: usize) -> Result<Term, TermError> {
        if let Some(n) = parse_j_index(word) {
            return j_sub(n);
        }
        self.names
            .get(word)
            .cloned()
            .ok_or_else(|| TermError::UnknownName {
                name: word.to_string(),
                pos,
            })
    }

    fn apply(&mut self, left: Term, right: Term) -> Term {
        Term::apply(left, right)
    }

    fn compose(&mut self, left: Term, right: Term) -> Term {
        Term::compose(left, right)
    }
}

pub fn parse_term(text: &str, names: &NameTable) -> Result<Term, TermError> {
    parse_with(text, &mut TermBuilder { names })
}

/// Minimal-parenthesis rendering using only the letter `j`.
pub fn render_term(t: &Term) -> String {
    let mut s = String::new();
    render_into(t, &mut s, false);
    s
}

/// Rendering that abbreviates maximal `j_n` prefixes as `jN`, e.g. `j9(j14)`.
pub fn render_compact(t: &Term) -> String {
    let mut s = String::new();
    render_into(t, &mut s, true);
    s
}

fn render_into(t: &Term, out: &mut String, compact: bool) {
    match t {
        Term::Compose(l, r) => {
            render_into(l, out, compact);
            out.push_str(" o ");
            render_operand(r, out, compact, true);
        }
        _ => render_app(t, out, compact),
    }
}

fn render_app(t: &Term, out: &mut String, compact: bool) {
    if compact {
        if let Some(n) = t.j_index() {
            push_j(out, n);
            return;
        }
    }
    match t {
        Term::Generator => push_j(out, 1),
        Term::Apply(l, r) => {
            match &**l {
                Term::Compose(..) => {
                    out.push('(');
                    render_into(l, out, compact);
                    out.push(')');
                }
                _ => render_app(l, out, compact),
            }
            render_operand(r, out, compact, false);
        }
        Term::Compose(..) => {
            out.push('(');
            render_into(t, out, compact);
            out.push(')');
        }
    }
}

fn render_operand(r: &Term, out: &mut String, compact: bool, after_circ: bool) {
    let atomic = match r {
        Term::Generator => true,
        Term::Apply(..) => after_circ || (compact && r.j_index().is_some()),
        Term::Compose(..) => false,
    };
    if atomic {
        render_app(r, out, compact);
    } else {
        out.push('(');
        render_into(r, out, compact);
        out.push(')');
    }
}

// Adjacent atoms never fuse: the lexer splits `j3j2` into `j3 j2`.
fn push_j(out: &mut String, n: u64) {
    out.push('j');
    if n > 1 {
        out.push_str(&n.to_string());
    }
}
